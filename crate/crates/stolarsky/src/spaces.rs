//! The registry of spaces `Q(d, d0)`: spheres and projective spaces, their
//! metrics, ball volumes, exact constants, canonical geodesics, and point
//! sampling.
//!
//! Normalization: the geodesic metric has diameter pi, the invariant measure
//! has total mass 1. Projective points are represented by rank-one unit-trace
//! Hermitian projectors; sphere points by unit vectors.

use crate::algebra::{mat_mul, AlgebraElement, AlgebraTag, HermitianMatrix};
use crate::special::{betainc_reg, ln_beta, ln_gamma};
use crate::{quad, Error, Result, EPS_POINT, EPS_UNIT};
use rand::Rng;
use rand_distr::StandardNormal;
use std::fmt;
use std::str::FromStr;

/// The five families of compact rank-one symmetric spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Sphere,
    RealProj,
    ComplexProj,
    QuatProj,
    OctProj,
}

/// A specific space `Q(d, d0)`.
///
/// For `Sphere`, `n` is the sphere dimension `d` (and `d0 = d` by
/// convention); for projective families `n` is the projective dimension, so
/// `d = n * d0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpaceId {
    family: Family,
    n: usize,
}

impl SpaceId {
    /// The sphere `S^d`, `d >= 1`.
    pub fn sphere(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument(
                "sphere dimension must be >= 1".into(),
            ));
        }
        Ok(Self {
            family: Family::Sphere,
            n: d,
        })
    }

    /// A projective space `F P^n`, `n >= 2`; the octonionic plane only
    /// exists for `n = 2`.
    pub fn projective(family: Family, n: usize) -> Result<Self> {
        match family {
            Family::Sphere => Err(Error::InvalidArgument(
                "use SpaceId::sphere for the sphere family".into(),
            )),
            Family::OctProj if n != 2 => Err(Error::InvalidArgument(
                "octonionic projective spaces only exist for n = 2".into(),
            )),
            _ if n < 2 => Err(Error::InvalidArgument(
                "projective lines coincide with spheres; use the sphere family".into(),
            )),
            _ => Ok(Self { family, n }),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Projective dimension (or the sphere dimension for spheres).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Real dimension `d` of the manifold.
    pub fn dim(&self) -> usize {
        match self.family {
            Family::Sphere => self.n,
            _ => self.n * self.d0(),
        }
    }

    /// The parameter `d0`: dimension of the algebra, or `d` for spheres.
    pub fn d0(&self) -> usize {
        match self.family {
            Family::Sphere => self.n,
            Family::RealProj => 1,
            Family::ComplexProj => 2,
            Family::QuatProj => 4,
            Family::OctProj => 8,
        }
    }

    /// Jacobi parameter `alpha = d/2 - 1`.
    pub fn alpha(&self) -> f64 {
        self.dim() as f64 / 2.0 - 1.0
    }

    /// Jacobi parameter `beta = d0/2 - 1`.
    pub fn beta(&self) -> f64 {
        self.d0() as f64 / 2.0 - 1.0
    }

    /// Dimension `m = (n+1)(d+2)/2` of the ambient Hermitian matrix space
    /// (projective families only).
    pub fn ambient_dim(&self) -> Option<usize> {
        match self.family {
            Family::Sphere => None,
            _ => Some((self.n + 1) * (self.dim() + 2) / 2),
        }
    }

    /// Coefficient algebra of the projector model, `None` for spheres.
    pub fn algebra_tag(&self) -> Option<AlgebraTag> {
        match self.family {
            Family::Sphere => None,
            _ => AlgebraTag::from_dim(self.d0()),
        }
    }

    /// Whether `sample_uniform` is available (everything except `OP2`).
    pub fn supports_uniform_sampling(&self) -> bool {
        self.family != Family::OctProj
    }
}

impl fmt::Display for SpaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Sphere => write!(f, "S{}", self.n),
            Family::RealProj => write!(f, "RP{}", self.n),
            Family::ComplexProj => write!(f, "CP{}", self.n),
            Family::QuatProj => write!(f, "HP{}", self.n),
            Family::OctProj => write!(f, "OP{}", self.n),
        }
    }
}

impl FromStr for SpaceId {
    type Err = Error;

    /// Parses the naming grammar `S<d>`, `RP<n>`, `CP<n>`, `HP<n>`, `OP2`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::SpaceParse(s.to_string());
        let (family, digits) = if let Some(rest) = s.strip_prefix("RP") {
            (Family::RealProj, rest)
        } else if let Some(rest) = s.strip_prefix("CP") {
            (Family::ComplexProj, rest)
        } else if let Some(rest) = s.strip_prefix("HP") {
            (Family::QuatProj, rest)
        } else if let Some(rest) = s.strip_prefix("OP") {
            (Family::OctProj, rest)
        } else if let Some(rest) = s.strip_prefix('S') {
            (Family::Sphere, rest)
        } else {
            return Err(bad());
        };
        let n: usize = digits.parse().map_err(|_| bad())?;
        match family {
            Family::Sphere => Self::sphere(n).map_err(|_| bad()),
            _ => Self::projective(family, n).map_err(|_| bad()),
        }
    }
}

/// A validated point of one space.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    space: SpaceId,
    repr: PointRepr,
}

#[derive(Debug, Clone, PartialEq)]
enum PointRepr {
    /// Unit vector with `d + 1` coordinates.
    Sphere(Vec<f64>),
    /// Rank-one unit-trace Hermitian projector.
    Projective(HermitianMatrix),
}

impl Point {
    /// A sphere point from its ambient coordinates (must be unit length).
    pub fn sphere(space: SpaceId, coords: Vec<f64>) -> Result<Self> {
        if space.family() != Family::Sphere {
            return Err(Error::InvalidArgument(format!("{space} is not a sphere")));
        }
        if coords.len() != space.dim() + 1 {
            return Err(Error::SizeMismatch {
                left: coords.len(),
                right: space.dim() + 1,
            });
        }
        let norm = coords.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > EPS_UNIT {
            return Err(Error::NotUnit {
                norm,
                tol: EPS_UNIT,
            });
        }
        Ok(Self {
            space,
            repr: PointRepr::Sphere(coords),
        })
    }

    /// A projective point from its projector matrix.
    pub fn projective(space: SpaceId, matrix: HermitianMatrix) -> Result<Self> {
        let tag = space
            .algebra_tag()
            .ok_or_else(|| Error::InvalidArgument(format!("{space} is not projective")))?;
        if matrix.tag() != tag {
            return Err(Error::TagMismatch {
                left: tag,
                right: matrix.tag(),
            });
        }
        if matrix.size() != space.n() + 1 {
            return Err(Error::SizeMismatch {
                left: matrix.size(),
                right: space.n() + 1,
            });
        }
        let check = matrix.validate_projector(EPS_POINT);
        if !check.passed() {
            return Err(Error::InvalidPoint(check.to_string()));
        }
        Ok(Self {
            space,
            repr: PointRepr::Projective(matrix),
        })
    }

    /// A projective point from a unit representative vector.
    pub fn from_vector(space: SpaceId, components: &[AlgebraElement]) -> Result<Self> {
        if components.len() != space.n() + 1 {
            return Err(Error::SizeMismatch {
                left: components.len(),
                right: space.n() + 1,
            });
        }
        Self::projective(space, HermitianMatrix::projector_from_vector(components)?)
    }

    pub fn space(&self) -> SpaceId {
        self.space
    }

    /// Ambient coordinates of a sphere point.
    pub fn sphere_coords(&self) -> Option<&[f64]> {
        match &self.repr {
            PointRepr::Sphere(v) => Some(v),
            PointRepr::Projective(_) => None,
        }
    }

    /// Projector matrix of a projective point.
    pub fn projector(&self) -> Option<&HermitianMatrix> {
        match &self.repr {
            PointRepr::Projective(m) => Some(m),
            PointRepr::Sphere(_) => None,
        }
    }
}

fn check_same_space(x1: &Point, x2: &Point) -> Result<()> {
    if x1.space != x2.space {
        return Err(Error::SpaceMismatch {
            left: x1.space,
            right: x2.space,
        });
    }
    Ok(())
}

/// Cosine of the geodesic distance (spheres), clamped to [-1, 1].
fn sphere_cos(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    dot.clamp(-1.0, 1.0)
}

/// `<P1, P2>` clamped to [0, 1]; equals `cos^2(theta/2)`.
fn projective_cos_half_sq(a: &HermitianMatrix, b: &HermitianMatrix) -> f64 {
    a.inner_product(b)
        .expect("same space implies compatible matrices")
        .clamp(0.0, 1.0)
}

/// Geodesic distance `theta` in `[0, pi]`.
pub fn geodesic_distance(x1: &Point, x2: &Point) -> Result<f64> {
    check_same_space(x1, x2)?;
    if x1.repr == x2.repr {
        return Ok(0.0);
    }
    Ok(match (&x1.repr, &x2.repr) {
        (PointRepr::Sphere(a), PointRepr::Sphere(b)) => sphere_cos(a, b).acos(),
        (PointRepr::Projective(a), PointRepr::Projective(b)) => {
            2.0 * projective_cos_half_sq(a, b).sqrt().acos()
        }
        _ => unreachable!("same space implies same representation"),
    })
}

/// Chordal distance `tau = sin(theta/2)` in `[0, 1]`.
///
/// Spheres use `||x1 - x2|| / 2`; projective spaces use
/// `sqrt(1 - <P1, P2>)`. Both equal `sin(theta/2)`.
pub fn chordal_distance(x1: &Point, x2: &Point) -> Result<f64> {
    check_same_space(x1, x2)?;
    if x1.repr == x2.repr {
        return Ok(0.0);
    }
    Ok(match (&x1.repr, &x2.repr) {
        (PointRepr::Sphere(a), PointRepr::Sphere(b)) => {
            let sq: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
            0.5 * sq.sqrt()
        }
        (PointRepr::Projective(a), PointRepr::Projective(b)) => {
            (1.0 - projective_cos_half_sq(a, b)).max(0.0).sqrt()
        }
        _ => unreachable!("same space implies same representation"),
    })
}

/// Normalized volume of a geodesic ball of radius `r`.
///
/// `v(r) = I_{sin^2(r/2)}(d/2, d0/2)` — the regularized incomplete beta
/// function, which is the closed form of the defining integral under the
/// substitution `t = sin^2(u/2)`.
pub fn ball_volume(space: SpaceId, r: f64) -> Result<f64> {
    if !(0.0..=std::f64::consts::PI).contains(&r) {
        return Err(Error::RadiusOutOfRange { radius: r });
    }
    let s = (0.5 * r).sin();
    betainc_reg(
        space.dim() as f64 / 2.0,
        space.d0() as f64 / 2.0,
        (s * s).min(1.0),
    )
}

/// Density of the distance distribution: `v'(r)`.
pub fn radial_density(space: SpaceId, r: f64) -> Result<f64> {
    if !(0.0..=std::f64::consts::PI).contains(&r) {
        return Err(Error::RadiusOutOfRange { radius: r });
    }
    let d = space.dim();
    let d0 = space.d0();
    let ln_b = ln_beta(d as f64 / 2.0, d0 as f64 / 2.0);
    let half = 0.5 * r;
    Ok(half.sin().powi(d as i32 - 1) * half.cos().powi(d0 as i32 - 1) * (-ln_b).exp())
}

/// Mean chordal distance `<tau> = B(d/2, d0/2)^{-1} B((d+1)/2, d0/2)`.
pub fn mean_chordal(space: SpaceId) -> f64 {
    let d = space.dim() as f64;
    let d0 = space.d0() as f64;
    (ln_beta((d + 1.0) / 2.0, d0 / 2.0) - ln_beta(d / 2.0, d0 / 2.0)).exp()
}

/// The invariance-principle constant
/// `gamma(Q) = (sqrt(pi)/4) (d + d0) Gamma(d0/2) / Gamma((d0+1)/2)`.
pub fn gamma_const(space: SpaceId) -> f64 {
    let d = space.dim() as f64;
    let d0 = space.d0() as f64;
    0.25 * std::f64::consts::PI.sqrt()
        * (d + d0)
        * (ln_gamma(d0 / 2.0) - ln_gamma((d0 + 1.0) / 2.0)).exp()
}

/// Mean symmetric-difference metric, by quadrature of
/// `int_0^pi (v(r) - v(r)^2) sin r dr`.
///
/// Agrees with the closed form [`mean_sd_metric_closed`] to the quadrature
/// tolerance; the quadrature route is kept as an independent check.
pub fn mean_sd_metric(space: SpaceId) -> f64 {
    quad::integrate(
        |r| {
            let v = ball_volume(space, r).expect("radius within range");
            (v - v * v) * r.sin()
        },
        0.0,
        std::f64::consts::PI,
        1e-13,
        1e-13,
    )
    .expect("smooth integrand")
    .value
}

/// Mean symmetric-difference metric via the exact relation
/// `<theta_Delta> = <tau> / gamma(Q)`.
pub fn mean_sd_metric_closed(space: SpaceId) -> f64 {
    mean_chordal(space) / gamma_const(space)
}

fn gaussian_unit_vector<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..len).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.iter().map(|x| x / norm).collect();
        }
    }
}

/// Draw a point from the invariant probability measure.
///
/// Spheres: normalized Gaussian vector. Projective spaces over an
/// associative algebra: normalized Gaussian vector in `F^{n+1}` pushed
/// through the projector map. `OP2` is unsupported — the projector model
/// comes with no sampling construction there; see [`sample_octonionic`].
pub fn sample_uniform<R: Rng + ?Sized>(space: SpaceId, rng: &mut R) -> Result<Point> {
    match space.family() {
        Family::Sphere => {
            let coords = gaussian_unit_vector(space.dim() + 1, rng);
            Point::sphere(space, coords)
        }
        Family::OctProj => Err(Error::Unsupported {
            space,
            operation: "uniform sampling",
        }),
        _ => {
            let tag = space.algebra_tag().expect("projective space");
            let components = gaussian_unit_components(tag, space.n() + 1, rng);
            Point::from_vector(space, &components)
        }
    }
}

fn gaussian_unit_components<R: Rng + ?Sized>(
    tag: AlgebraTag,
    len: usize,
    rng: &mut R,
) -> Vec<AlgebraElement> {
    loop {
        let v: Vec<AlgebraElement> = (0..len)
            .map(|_| AlgebraElement::sample_gaussian(tag, rng))
            .collect();
        let norm = v.iter().map(|c| c.norm_sq()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.iter().map(|c| c.scale(1.0 / norm)).collect();
        }
    }
}

/// Generate a valid (but NOT uniformly distributed) point of `OP2`.
///
/// Draws `a0` real Gaussian and `a1, a2` full Gaussian octonions; the real
/// first component makes the triple associative, so the projector is a valid
/// point. Useful for identity tests that hold pointwise.
pub fn sample_octonionic<R: Rng + ?Sized>(rng: &mut R) -> Point {
    let space = SpaceId::projective(Family::OctProj, 2).expect("OP2 exists");
    let tag = AlgebraTag::Octonion;
    loop {
        let mut v = [
            AlgebraElement::real(tag, rng.sample(StandardNormal)),
            AlgebraElement::sample_gaussian(tag, rng),
            AlgebraElement::sample_gaussian(tag, rng),
        ];
        let norm = v.iter().map(|c| c.norm_sq()).sum::<f64>().sqrt();
        if norm <= 1e-8 {
            continue;
        }
        for c in v.iter_mut() {
            *c = c.scale(1.0 / norm);
        }
        return Point::from_vector(space, &v).expect("real scalar associates");
    }
}

/// The canonical geodesic point.
///
/// Spheres: `(cos u, sin u, 0, ...)`. Projective spaces: the block projector
/// `Z(u)` onto the span of `(cos u, sin u, 0, ...)`, which traverses the
/// standard embedded real projective line.
pub fn geodesic_point(space: SpaceId, u: f64) -> Point {
    match space.family() {
        Family::Sphere => {
            let mut coords = vec![0.0; space.dim() + 1];
            coords[0] = u.cos();
            coords[1] = u.sin();
            Point::sphere(space, coords).expect("unit by construction")
        }
        _ => {
            let tag = space.algebra_tag().expect("projective space");
            let mut v = vec![AlgebraElement::zero(tag); space.n() + 1];
            v[0] = AlgebraElement::real(tag, u.cos());
            v[1] = AlgebraElement::real(tag, u.sin());
            Point::from_vector(space, &v).expect("unit by construction")
        }
    }
}

/// A pair of antipodal points (geodesic distance pi, orthogonal projectors).
pub fn antipodal_pair(space: SpaceId) -> (Point, Point) {
    match space.family() {
        Family::Sphere => {
            let mut plus = vec![0.0; space.dim() + 1];
            plus[0] = 1.0;
            let mut minus = vec![0.0; space.dim() + 1];
            minus[0] = -1.0;
            (
                Point::sphere(space, plus).expect("unit"),
                Point::sphere(space, minus).expect("unit"),
            )
        }
        _ => {
            let tag = space.algebra_tag().expect("projective space");
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let mut vp = vec![AlgebraElement::zero(tag); space.n() + 1];
            vp[0] = AlgebraElement::real(tag, h);
            vp[1] = AlgebraElement::real(tag, h);
            let mut vm = vec![AlgebraElement::zero(tag); space.n() + 1];
            vm[0] = AlgebraElement::real(tag, h);
            vm[1] = AlgebraElement::real(tag, -h);
            (
                Point::from_vector(space, &vp).expect("unit"),
                Point::from_vector(space, &vm).expect("unit"),
            )
        }
    }
}

/// A random isometry of the space, for invariance testing.
///
/// Spheres: an orthogonal matrix acting on ambient vectors. Projective
/// spaces over associative algebras: a unitary `U` acting by `P -> U P U^H`.
/// Not available for `OP2`.
#[derive(Debug, Clone)]
pub struct Isometry {
    space: SpaceId,
    kind: IsometryKind,
}

#[derive(Debug, Clone)]
enum IsometryKind {
    Orthogonal {
        size: usize,
        rows: Vec<f64>,
    },
    Unitary {
        size: usize,
        entries: Vec<AlgebraElement>,
    },
}

impl Isometry {
    /// Draw a random isometry (Gram–Schmidt of a Gaussian matrix).
    pub fn random<R: Rng + ?Sized>(space: SpaceId, rng: &mut R) -> Result<Self> {
        match space.family() {
            Family::Sphere => {
                let size = space.dim() + 1;
                let mut rows: Vec<Vec<f64>> = Vec::with_capacity(size);
                while rows.len() < size {
                    let mut v: Vec<f64> = (0..size).map(|_| rng.sample(StandardNormal)).collect();
                    for prev in &rows {
                        let dot: f64 = v.iter().zip(prev).map(|(a, b)| a * b).sum();
                        for (x, p) in v.iter_mut().zip(prev) {
                            *x -= dot * p;
                        }
                    }
                    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                    if norm > 1e-6 {
                        rows.push(v.iter().map(|x| x / norm).collect());
                    }
                }
                Ok(Self {
                    space,
                    kind: IsometryKind::Orthogonal {
                        size,
                        rows: rows.into_iter().flatten().collect(),
                    },
                })
            }
            Family::OctProj => Err(Error::Unsupported {
                space,
                operation: "matrix isometries",
            }),
            _ => {
                let tag = space.algebra_tag().expect("projective space");
                let size = space.n() + 1;
                // Columns orthonormalized under (a, b) = sum conj(a_i) b_i;
                // projection coefficients multiply from the right.
                let mut cols: Vec<Vec<AlgebraElement>> = Vec::with_capacity(size);
                while cols.len() < size {
                    let mut v: Vec<AlgebraElement> = (0..size)
                        .map(|_| AlgebraElement::sample_gaussian(tag, rng))
                        .collect();
                    for prev in &cols {
                        let mut coeff = AlgebraElement::zero(tag);
                        for (p, x) in prev.iter().zip(v.iter()) {
                            coeff = coeff + p.conj() * *x;
                        }
                        for (x, p) in v.iter_mut().zip(prev.iter()) {
                            *x = *x - *p * coeff;
                        }
                    }
                    let norm = v.iter().map(|c| c.norm_sq()).sum::<f64>().sqrt();
                    if norm > 1e-6 {
                        cols.push(v.iter().map(|c| c.scale(1.0 / norm)).collect());
                    }
                }
                // Row-major U with U[i][j] = cols[j][i].
                let mut entries = vec![AlgebraElement::zero(tag); size * size];
                for (j, col) in cols.iter().enumerate() {
                    for (i, e) in col.iter().enumerate() {
                        entries[i * size + j] = *e;
                    }
                }
                Ok(Self {
                    space,
                    kind: IsometryKind::Unitary { size, entries },
                })
            }
        }
    }

    /// Apply the isometry to a point of the same space.
    pub fn apply(&self, point: &Point) -> Result<Point> {
        if point.space() != self.space {
            return Err(Error::SpaceMismatch {
                left: self.space,
                right: point.space(),
            });
        }
        match (&self.kind, &point.repr) {
            (IsometryKind::Orthogonal { size, rows }, PointRepr::Sphere(v)) => {
                let mut out = vec![0.0; *size];
                for (i, slot) in out.iter_mut().enumerate() {
                    *slot = (0..*size).map(|j| rows[i * size + j] * v[j]).sum();
                }
                let norm = out.iter().map(|x| x * x).sum::<f64>().sqrt();
                for x in out.iter_mut() {
                    *x /= norm;
                }
                Point::sphere(self.space, out)
            }
            (IsometryKind::Unitary { size, entries }, PointRepr::Projective(m)) => {
                let tag = m.tag();
                // U P U^H.
                let up = mat_mul(entries, m.entries(), *size);
                let mut uh = vec![AlgebraElement::zero(tag); size * size];
                for i in 0..*size {
                    for j in 0..*size {
                        uh[i * size + j] = entries[j * size + i].conj();
                    }
                }
                let conj = mat_mul(&up, &uh, *size);
                Point::projective(self.space, HermitianMatrix::from_entries(tag, *size, conj)?)
            }
            _ => unreachable!("kind matches the space family"),
        }
    }
}
