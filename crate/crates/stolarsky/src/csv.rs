//! Point-set interchange format.
//!
//! Layout:
//!
//! ```text
//! # optional comment lines
//! space,<name>
//! <point row>
//! ...
//! ```
//!
//! Sphere rows carry the `d + 1` ambient coordinates. Projective rows carry
//! the `m = (n+1)(d+2)/2` real coordinates of the upper triangle of the
//! projector: first the `n + 1` diagonal real parts, then the off-diagonal
//! entries in row-major order, each as its `d0` algebra coefficients.
//!
//! Floats are written with 17 significant digits, so a write/read round trip
//! reproduces every `f64` bit-exactly.

use crate::algebra::{AlgebraElement, HermitianMatrix};
use crate::invariance::PointSet;
use crate::spaces::{Family, Point, SpaceId};
use crate::{Error, Result};

/// 17 significant digits; parses back to the identical f64.
pub(crate) fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Serialize a point set, preceding the header with the given comments.
pub fn write_point_set(set: &PointSet, comments: &[String]) -> String {
    let mut out = String::new();
    for line in comments {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(&format!("space,{}\n", set.space()));
    for point in set.points() {
        let fields: Vec<String> = point_coordinates(point)
            .into_iter()
            .map(format_f64)
            .collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// The flat coordinate row of a point, in the documented order.
pub fn point_coordinates(point: &Point) -> Vec<f64> {
    let space = point.space();
    match space.family() {
        Family::Sphere => point
            .sphere_coords()
            .expect("sphere point")
            .to_vec(),
        _ => {
            let matrix = point.projector().expect("projective point");
            let size = space.n() + 1;
            let d0 = space.d0();
            let mut row = Vec::with_capacity(space.ambient_dim().expect("projective"));
            for i in 0..size {
                row.push(matrix.entry(i, i).re());
            }
            for i in 0..size {
                for j in (i + 1)..size {
                    for k in 0..d0 {
                        row.push(matrix.entry(i, j).coeff(k));
                    }
                }
            }
            row
        }
    }
}

/// Rebuild a point from its flat coordinate row.
pub fn point_from_coordinates(space: SpaceId, row: &[f64]) -> Result<Point> {
    match space.family() {
        Family::Sphere => {
            if row.len() != space.dim() + 1 {
                return Err(Error::Csv(format!(
                    "expected {} coordinates for a point of {space}, got {}",
                    space.dim() + 1,
                    row.len()
                )));
            }
            Point::sphere(space, row.to_vec())
        }
        _ => {
            let m = space.ambient_dim().expect("projective");
            if row.len() != m {
                return Err(Error::Csv(format!(
                    "expected {m} coordinates for a point of {space}, got {}",
                    row.len()
                )));
            }
            let size = space.n() + 1;
            let d0 = space.d0();
            let tag = space.algebra_tag().expect("projective");
            let mut entries = vec![AlgebraElement::zero(tag); size * size];
            for (i, entry) in entries.iter_mut().step_by(size + 1).enumerate() {
                *entry = AlgebraElement::real(tag, row[i]);
            }
            let mut cursor = size;
            for i in 0..size {
                for j in (i + 1)..size {
                    let e = AlgebraElement::new(tag, &row[cursor..cursor + d0])?;
                    cursor += d0;
                    entries[i * size + j] = e;
                    entries[j * size + i] = e.conj();
                }
            }
            Point::projective(space, HermitianMatrix::from_entries(tag, size, entries)?)
        }
    }
}

/// Parse a point set written by [`write_point_set`]; leading `#` comment
/// lines are skipped, every point is re-validated.
pub fn read_point_set(text: &str) -> Result<PointSet> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Csv("empty input".into()))?;
    let name = header
        .strip_prefix("space,")
        .ok_or_else(|| Error::Csv(format!("expected `space,<name>` header, got `{header}`")))?;
    let space: SpaceId = name.trim().parse()?;
    let mut points = Vec::new();
    for (index, line) in lines.enumerate() {
        let row: Vec<f64> = line
            .split(',')
            .map(|field| {
                field
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Csv(format!("bad float `{field}` in row {index}")))
            })
            .collect::<Result<_>>()?;
        points.push(point_from_coordinates(space, &row)?);
    }
    PointSet::new(space, points)
}
