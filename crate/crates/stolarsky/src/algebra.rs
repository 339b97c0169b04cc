//! Arithmetic in the four normed division algebras (real, complex,
//! quaternion, octonion) and in the Hermitian matrix spaces over them.
//!
//! All four algebras share one 8-coefficient representation in the basis
//! `{1, e1, ..., e7}`; elements of the smaller algebras are zero-padded, so
//! subalgebra closure is a testable property instead of a type distinction.
//!
//! Octonion multiplication is fixed by Cayley–Dickson doubling of the
//! quaternions with the convention `(a, b)(c, d) = (ac - conj(d) b, da + b conj(c))`.
//! The resulting basis products are `e_i^2 = -1` together with the seven
//! oriented triples (each meaning `e_i e_j = e_k` cyclically):
//!
//! ```text
//! (e1 e2 e3)  (e1 e4 e5)  (e2 e4 e6)  (e3 e4 e7)
//! (e1 e7 e6)  (e2 e5 e7)  (e3 e6 e5)
//! ```
//!
//! Quaternions occupy the first four slots (`{1, e1, e2, e3}` is the Hamilton
//! basis), complex numbers the first two, reals the first one.

use crate::{Error, Result, EPS_ASSOC, EPS_UNIT};
use rand::Rng;
use rand_distr::StandardNormal;
use std::ops::{Add, Mul, Neg, Sub};

/// Which division algebra an element lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgebraTag {
    Real,
    Complex,
    Quaternion,
    Octonion,
}

impl AlgebraTag {
    /// Dimension over the reals: 1, 2, 4 or 8.
    pub fn dim(self) -> usize {
        match self {
            AlgebraTag::Real => 1,
            AlgebraTag::Complex => 2,
            AlgebraTag::Quaternion => 4,
            AlgebraTag::Octonion => 8,
        }
    }

    /// Inverse of [`AlgebraTag::dim`].
    pub fn from_dim(d0: usize) -> Option<Self> {
        match d0 {
            1 => Some(AlgebraTag::Real),
            2 => Some(AlgebraTag::Complex),
            4 => Some(AlgebraTag::Quaternion),
            8 => Some(AlgebraTag::Octonion),
            _ => None,
        }
    }
}

fn qconj(x: [f64; 4]) -> [f64; 4] {
    [x[0], -x[1], -x[2], -x[3]]
}

fn qadd(x: [f64; 4], y: [f64; 4]) -> [f64; 4] {
    [x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3]]
}

fn qsub(x: [f64; 4], y: [f64; 4]) -> [f64; 4] {
    [x[0] - y[0], x[1] - y[1], x[2] - y[2], x[3] - y[3]]
}

/// Hamilton product.
fn qmul(x: [f64; 4], y: [f64; 4]) -> [f64; 4] {
    [
        x[0] * y[0] - x[1] * y[1] - x[2] * y[2] - x[3] * y[3],
        x[0] * y[1] + x[1] * y[0] + x[2] * y[3] - x[3] * y[2],
        x[0] * y[2] - x[1] * y[3] + x[2] * y[0] + x[3] * y[1],
        x[0] * y[3] + x[1] * y[2] - x[2] * y[1] + x[3] * y[0],
    ]
}

/// Cayley–Dickson product of two octonions.
fn oct_mul(x: &[f64; 8], y: &[f64; 8]) -> [f64; 8] {
    let a = [x[0], x[1], x[2], x[3]];
    let b = [x[4], x[5], x[6], x[7]];
    let c = [y[0], y[1], y[2], y[3]];
    let d = [y[4], y[5], y[6], y[7]];
    let first = qsub(qmul(a, c), qmul(qconj(d), b));
    let second = qadd(qmul(d, a), qmul(b, qconj(c)));
    [
        first[0], first[1], first[2], first[3], second[0], second[1], second[2], second[3],
    ]
}

/// A number in one of the four division algebras.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgebraElement {
    tag: AlgebraTag,
    coeffs: [f64; 8],
}

impl AlgebraElement {
    /// Build an element from its `tag.dim()` coefficients.
    pub fn new(tag: AlgebraTag, coeffs: &[f64]) -> Result<Self> {
        if coeffs.len() != tag.dim() {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficients for {:?}, got {}",
                tag.dim(),
                tag,
                coeffs.len()
            )));
        }
        let mut c = [0.0; 8];
        c[..coeffs.len()].copy_from_slice(coeffs);
        Ok(Self { tag, coeffs: c })
    }

    /// Build from a full 8-slot array, verifying the zero padding invariant.
    pub fn from_padded(tag: AlgebraTag, coeffs: [f64; 8]) -> Result<Self> {
        if coeffs[tag.dim()..].iter().any(|&x| x != 0.0) {
            return Err(Error::InvalidArgument(format!(
                "coefficients beyond slot {} must be zero for {:?}",
                tag.dim(),
                tag
            )));
        }
        Ok(Self { tag, coeffs })
    }

    pub fn zero(tag: AlgebraTag) -> Self {
        Self {
            tag,
            coeffs: [0.0; 8],
        }
    }

    pub fn one(tag: AlgebraTag) -> Self {
        Self::real(tag, 1.0)
    }

    /// The real element `x * 1`.
    pub fn real(tag: AlgebraTag, x: f64) -> Self {
        let mut coeffs = [0.0; 8];
        coeffs[0] = x;
        Self { tag, coeffs }
    }

    /// Basis element: index 0 is the unit, indices `1..dim` are `e_i`.
    pub fn basis(tag: AlgebraTag, index: usize) -> Result<Self> {
        if index >= tag.dim() {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for {tag:?}"
            )));
        }
        let mut coeffs = [0.0; 8];
        coeffs[index] = 1.0;
        Ok(Self { tag, coeffs })
    }

    /// Element with independent standard-normal coefficients.
    pub fn sample_gaussian<R: Rng + ?Sized>(tag: AlgebraTag, rng: &mut R) -> Self {
        let mut coeffs = [0.0; 8];
        for slot in coeffs.iter_mut().take(tag.dim()) {
            *slot = rng.sample(StandardNormal);
        }
        Self { tag, coeffs }
    }

    pub fn tag(&self) -> AlgebraTag {
        self.tag
    }

    /// All 8 coefficient slots (padding included).
    pub fn coeffs(&self) -> &[f64; 8] {
        &self.coeffs
    }

    pub fn coeff(&self, index: usize) -> f64 {
        self.coeffs[index]
    }

    /// Real part (coefficient of the unit).
    pub fn re(&self) -> f64 {
        self.coeffs[0]
    }

    /// Conjugation: flips the signs of `e_1 ... e_7` coefficients.
    pub fn conj(&self) -> Self {
        let mut coeffs = self.coeffs;
        for slot in coeffs.iter_mut().skip(1) {
            *slot = -*slot;
        }
        Self {
            tag: self.tag,
            coeffs,
        }
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|x| x * x).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(&self, factor: f64) -> Self {
        let mut coeffs = self.coeffs;
        for slot in coeffs.iter_mut() {
            *slot *= factor;
        }
        Self {
            tag: self.tag,
            coeffs,
        }
    }

    /// Product with a tag check; the `*` operator panics instead.
    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.tag != rhs.tag {
            return Err(Error::TagMismatch {
                left: self.tag,
                right: rhs.tag,
            });
        }
        Ok(*self * *rhs)
    }
}

impl Add for AlgebraElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.tag, rhs.tag, "algebra tag mismatch");
        let mut coeffs = self.coeffs;
        for (slot, r) in coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *slot += r;
        }
        Self {
            tag: self.tag,
            coeffs,
        }
    }
}

impl Sub for AlgebraElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        assert_eq!(self.tag, rhs.tag, "algebra tag mismatch");
        let mut coeffs = self.coeffs;
        for (slot, r) in coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *slot -= r;
        }
        Self {
            tag: self.tag,
            coeffs,
        }
    }
}

impl Neg for AlgebraElement {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Mul for AlgebraElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.tag, rhs.tag, "algebra tag mismatch");
        Self {
            tag: self.tag,
            coeffs: oct_mul(&self.coeffs, &rhs.coeffs),
        }
    }
}

/// Row-major product of two square matrices with algebra entries.
///
/// Each entry is an unambiguous sum of two-factor products, so this is well
/// defined for octonions too.
pub(crate) fn mat_mul(a: &[AlgebraElement], b: &[AlgebraElement], size: usize) -> Vec<AlgebraElement> {
    debug_assert_eq!(a.len(), size * size);
    debug_assert_eq!(b.len(), size * size);
    let tag = a[0].tag();
    let mut out = vec![AlgebraElement::zero(tag); size * size];
    for i in 0..size {
        for j in 0..size {
            let mut acc = AlgebraElement::zero(tag);
            for k in 0..size {
                acc = acc + a[i * size + k] * b[k * size + j];
            }
            out[i * size + j] = acc;
        }
    }
    out
}

/// Residuals of the projector-point conditions `P^2 = P`, `Tr P = 1`,
/// `P = P^H`, measured in the Hilbert–Schmidt norm.
#[derive(Debug, Clone, Copy)]
pub struct ProjectorCheck {
    pub idempotency: f64,
    pub trace: f64,
    pub hermitian: f64,
    pub tolerance: f64,
}

impl ProjectorCheck {
    pub fn passed(&self) -> bool {
        self.idempotency <= self.tolerance
            && self.trace <= self.tolerance
            && self.hermitian <= self.tolerance
    }
}

impl std::fmt::Display for ProjectorCheck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "idempotency {:.3e}, trace {:.3e}, hermitian {:.3e} (tolerance {:.1e})",
            self.idempotency, self.trace, self.hermitian, self.tolerance
        )
    }
}

/// A square Hermitian matrix over one of the four algebras.
///
/// Rank-one unit-trace idempotents among these are the canonical
/// representation of projective-space points.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    tag: AlgebraTag,
    size: usize,
    entries: Vec<AlgebraElement>,
}

/// How far from Hermitian a matrix may be at construction.
const HERMITIAN_BUILD_TOL: f64 = 1e-8;

impl HermitianMatrix {
    /// Build from row-major entries, verifying `a_ij = conj(a_ji)`.
    pub fn from_entries(tag: AlgebraTag, size: usize, entries: Vec<AlgebraElement>) -> Result<Self> {
        if entries.len() != size * size {
            return Err(Error::SizeMismatch {
                left: entries.len(),
                right: size * size,
            });
        }
        for e in &entries {
            if e.tag() != tag {
                return Err(Error::TagMismatch {
                    left: tag,
                    right: e.tag(),
                });
            }
        }
        let m = Self { tag, size, entries };
        let res = m.hermitian_residual();
        if res > HERMITIAN_BUILD_TOL {
            return Err(Error::InvalidPoint(format!(
                "matrix is not Hermitian: residual {res:e}"
            )));
        }
        Ok(m)
    }

    pub fn zero(tag: AlgebraTag, size: usize) -> Self {
        Self {
            tag,
            size,
            entries: vec![AlgebraElement::zero(tag); size * size],
        }
    }

    /// The projector onto the first coordinate axis: 1 in the top-left corner.
    pub fn identity_corner(tag: AlgebraTag, size: usize) -> Self {
        let mut m = Self::zero(tag, size);
        m.entries[0] = AlgebraElement::one(tag);
        m
    }

    /// The projector `P_a` with entries `a_i conj(a_j)` for a unit vector `a`.
    ///
    /// For octonions the vector must have three components whose associator
    /// `(a_0 a_1) a_2 - a_0 (a_1 a_2)` vanishes within [`EPS_ASSOC`]; the
    /// lower triangle is mirrored by conjugation so Hermitian symmetry is
    /// exact.
    pub fn projector_from_vector(components: &[AlgebraElement]) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidArgument("empty vector".into()));
        }
        let tag = components[0].tag();
        for c in components {
            if c.tag() != tag {
                return Err(Error::TagMismatch {
                    left: tag,
                    right: c.tag(),
                });
            }
        }
        let norm = components.iter().map(|c| c.norm_sq()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > EPS_UNIT {
            return Err(Error::NotUnit {
                norm,
                tol: EPS_UNIT,
            });
        }
        if tag == AlgebraTag::Octonion {
            if components.len() != 3 {
                return Err(Error::InvalidArgument(format!(
                    "octonionic projective points need 3 components, got {}",
                    components.len()
                )));
            }
            let lhs = (components[0] * components[1]) * components[2];
            let rhs = components[0] * (components[1] * components[2]);
            let residual = (lhs - rhs).norm();
            if residual > EPS_ASSOC {
                return Err(Error::NotAssociative {
                    residual,
                    tol: EPS_ASSOC,
                });
            }
        }
        let size = components.len();
        let mut entries = vec![AlgebraElement::zero(tag); size * size];
        for i in 0..size {
            // a_i conj(a_i) = |a_i|^2: keep the diagonal exactly real.
            entries[i * size + i] = AlgebraElement::real(tag, components[i].norm_sq());
            for j in (i + 1)..size {
                let p = components[i] * components[j].conj();
                entries[i * size + j] = p;
                entries[j * size + i] = p.conj();
            }
        }
        Ok(Self { tag, size, entries })
    }

    pub fn tag(&self) -> AlgebraTag {
        self.tag
    }

    /// Number of rows (= columns).
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, i: usize, j: usize) -> &AlgebraElement {
        &self.entries[i * self.size + j]
    }

    pub(crate) fn entries(&self) -> &[AlgebraElement] {
        &self.entries
    }

    /// Real part of the trace (diagonal entries of a Hermitian matrix are
    /// real up to rounding).
    pub fn trace_re(&self) -> f64 {
        (0..self.size).map(|i| self.entry(i, i).re()).sum()
    }

    /// The symmetric real inner product `<A, B> = Re Tr AB`.
    ///
    /// Equals the coefficient-wise dot product `sum_ij Re(a_ij conj(b_ij))`.
    pub fn inner_product(&self, other: &Self) -> Result<f64> {
        if self.tag != other.tag {
            return Err(Error::TagMismatch {
                left: self.tag,
                right: other.tag,
            });
        }
        if self.size != other.size {
            return Err(Error::SizeMismatch {
                left: self.size,
                right: other.size,
            });
        }
        let mut acc = 0.0;
        for (a, b) in self.entries.iter().zip(other.entries.iter()) {
            for k in 0..8 {
                acc += a.coeff(k) * b.coeff(k);
            }
        }
        Ok(acc)
    }

    /// Hilbert–Schmidt norm `(sum |a_ij|^2)^{1/2}`.
    pub fn hs_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.norm_sq())
            .sum::<f64>()
            .sqrt()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            tag: self.tag,
            size: self.size,
            entries: self.entries.iter().map(|e| e.scale(factor)).collect(),
        }
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(AlgebraElement, AlgebraElement) -> AlgebraElement,
    ) -> Result<Self> {
        if self.tag != other.tag {
            return Err(Error::TagMismatch {
                left: self.tag,
                right: other.tag,
            });
        }
        if self.size != other.size {
            return Err(Error::SizeMismatch {
                left: self.size,
                right: other.size,
            });
        }
        Ok(Self {
            tag: self.tag,
            size: self.size,
            entries: self
                .entries
                .iter()
                .zip(other.entries.iter())
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    fn hermitian_residual(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.size {
            for j in 0..self.size {
                let diff = *self.entry(i, j) - self.entry(j, i).conj();
                acc += diff.norm_sq();
            }
        }
        acc.sqrt()
    }

    /// Diagnostic check of the projector-point conditions.
    pub fn validate_projector(&self, tolerance: f64) -> ProjectorCheck {
        let squared = mat_mul(&self.entries, &self.entries, self.size);
        let idempotency = squared
            .iter()
            .zip(self.entries.iter())
            .map(|(s, e)| (*s - *e).norm_sq())
            .sum::<f64>()
            .sqrt();
        ProjectorCheck {
            idempotency,
            trace: (self.trace_re() - 1.0).abs(),
            hermitian: self.hermitian_residual(),
            tolerance,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::substream;
    use rand::Rng;

    fn random_octonion(rng: &mut impl Rng) -> AlgebraElement {
        AlgebraElement::sample_gaussian(AlgebraTag::Octonion, rng)
    }

    #[test]
    fn unit_is_identity() {
        let mut rng = substream(11, 0);
        let one = AlgebraElement::one(AlgebraTag::Octonion);
        for _ in 0..20 {
            let a = random_octonion(&mut rng);
            assert_eq!(one * a, a);
            assert_eq!(a * one, a);
        }
    }

    #[test]
    fn imaginary_units_square_to_minus_one() {
        let minus_one = AlgebraElement::real(AlgebraTag::Octonion, -1.0);
        for i in 1..8 {
            let e = AlgebraElement::basis(AlgebraTag::Octonion, i).unwrap();
            assert_eq!(e * e, minus_one, "e_{i}^2 != -1");
        }
    }

    #[test]
    fn basis_products_follow_the_documented_table() {
        // e_i e_j = -e_j e_i = e_k with unit coefficients, for every i != j.
        let tag = AlgebraTag::Octonion;
        for i in 1..8usize {
            for j in 1..8usize {
                if i == j {
                    continue;
                }
                let ei = AlgebraElement::basis(tag, i).unwrap();
                let ej = AlgebraElement::basis(tag, j).unwrap();
                let p = ei * ej;
                let q = ej * ei;
                // Antisymmetry.
                assert_eq!(p, -q, "e_{i} e_{j} is not antisymmetric");
                // Exactly one coefficient, +-1, in an imaginary slot.
                let nonzero: Vec<usize> =
                    (0..8).filter(|&k| p.coeff(k) != 0.0).collect();
                assert_eq!(nonzero.len(), 1, "e_{i} e_{j} is not a basis element");
                let k = nonzero[0];
                assert!(k >= 1, "e_{i} e_{j} has a real component");
                assert_eq!(p.coeff(k).abs(), 1.0);
            }
        }
        // The seven oriented triples from the module docs.
        let triples = [
            (1, 2, 3),
            (1, 4, 5),
            (2, 4, 6),
            (3, 4, 7),
            (1, 7, 6),
            (2, 5, 7),
            (3, 6, 5),
        ];
        for (i, j, k) in triples {
            let ei = AlgebraElement::basis(tag, i).unwrap();
            let ej = AlgebraElement::basis(tag, j).unwrap();
            let ek = AlgebraElement::basis(tag, k).unwrap();
            assert_eq!(ei * ej, ek, "e_{i} e_{j} != e_{k}");
            assert_eq!(ej * ei, -ek, "e_{j} e_{i} != -e_{k}");
        }
    }

    #[test]
    fn quaternion_table_in_octonion_slots() {
        // mul(e1, e2) = e3, mul(e2, e1) = -e3 under the chosen table.
        let tag = AlgebraTag::Octonion;
        let e1 = AlgebraElement::basis(tag, 1).unwrap();
        let e2 = AlgebraElement::basis(tag, 2).unwrap();
        let e3 = AlgebraElement::basis(tag, 3).unwrap();
        assert_eq!(e1 * e2, e3);
        assert_eq!(e2 * e1, -e3);
    }

    #[test]
    fn conjugation_and_norm() {
        let a = AlgebraElement::new(AlgebraTag::Complex, &[1.0, 1.0]).unwrap();
        let c = a.conj();
        assert_eq!(c.coeff(0), 1.0);
        assert_eq!(c.coeff(1), -1.0);

        let mut rng = substream(12, 0);
        for _ in 0..100 {
            let a = random_octonion(&mut rng);
            // |a|^2 = a conj(a) = conj(a) a (real).
            let left = (a * a.conj()).re();
            let right = (a.conj() * a).re();
            let direct = a.norm_sq();
            assert!((left.sqrt() - direct.sqrt()).abs() < 1e-12 * direct.sqrt().max(1.0));
            assert!((right.sqrt() - direct.sqrt()).abs() < 1e-12 * direct.sqrt().max(1.0));
            // Off-real parts of a conj(a) vanish.
            let prod = a * a.conj();
            for k in 1..8 {
                assert!(prod.coeff(k).abs() < 1e-12 * direct.max(1.0));
            }
        }
    }

    #[test]
    fn real_part_of_products_commutes() {
        let mut rng = substream(13, 0);
        for _ in 0..100 {
            let a = random_octonion(&mut rng);
            let b = random_octonion(&mut rng);
            let scale = a.norm() * b.norm();
            assert!(((a * b).re() - (b * a).re()).abs() < 1e-12 * scale.max(1.0));
        }
    }

    #[test]
    fn norm_is_multiplicative() {
        let mut rng = substream(14, 0);
        for _ in 0..1000 {
            let a = random_octonion(&mut rng);
            let b = random_octonion(&mut rng);
            let prod = (a * b).norm();
            let split = a.norm() * b.norm();
            assert!(
                (prod - split).abs() <= 1e-12 * split.max(1.0),
                "|ab| = {prod}, |a||b| = {split}"
            );
        }
    }

    #[test]
    fn conjugation_reverses_products() {
        let mut rng = substream(15, 0);
        for _ in 0..200 {
            let a = random_octonion(&mut rng);
            let b = random_octonion(&mut rng);
            let lhs = (a * b).conj();
            let rhs = b.conj() * a.conj();
            let scale = a.norm() * b.norm();
            assert!((lhs - rhs).norm() < 1e-12 * scale.max(1.0));
        }
    }

    /// Evaluate every full bracketing of the word `letters` and return the
    /// spread between the extreme coefficient values.
    fn bracketing_spread(letters: &[AlgebraElement]) -> f64 {
        fn all_products(letters: &[AlgebraElement]) -> Vec<AlgebraElement> {
            if letters.len() == 1 {
                return vec![letters[0]];
            }
            let mut out = Vec::new();
            for split in 1..letters.len() {
                for l in all_products(&letters[..split]) {
                    for r in all_products(&letters[split..]) {
                        out.push(l * r);
                    }
                }
            }
            out
        }
        let values = all_products(letters);
        let first = values[0];
        values
            .iter()
            .map(|v| (*v - first).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn artin_two_generated_subalgebras_associate() {
        // All bracketings of every word of length 3 and 4 in two random
        // octonions agree.
        let mut rng = substream(16, 0);
        for _ in 0..50 {
            let a = random_octonion(&mut rng);
            let b = random_octonion(&mut rng);
            let letters = [a, b];
            for len in 3..=4usize {
                for mask in 0..(1u32 << len) {
                    let word: Vec<AlgebraElement> = (0..len)
                        .map(|bit| letters[((mask >> bit) & 1) as usize])
                        .collect();
                    let scale: f64 = word.iter().map(|w| w.norm()).product();
                    let spread = bracketing_spread(&word);
                    assert!(
                        spread < 1e-10 * scale.max(1.0),
                        "bracketing spread {spread:e} for word mask {mask:b}"
                    );
                }
            }
        }
    }

    #[test]
    fn alternative_identities() {
        let mut rng = substream(17, 0);
        for _ in 0..500 {
            let a = random_octonion(&mut rng);
            let b = random_octonion(&mut rng);
            let scale = a.norm() * a.norm() * b.norm();
            let left = ((a * a) * b - a * (a * b)).norm();
            let right = ((a * b) * b - a * (b * b)).norm();
            assert!(left < 1e-12 * scale.max(1.0));
            assert!(right < 1e-12 * scale.max(1.0));
        }
    }

    #[test]
    fn subalgebras_are_closed() {
        let mut rng = substream(18, 0);
        for tag in [AlgebraTag::Real, AlgebraTag::Complex, AlgebraTag::Quaternion] {
            for _ in 0..200 {
                let a = AlgebraElement::sample_gaussian(tag, &mut rng);
                let b = AlgebraElement::sample_gaussian(tag, &mut rng);
                let p = a * b;
                assert_eq!(p.tag(), tag);
                for k in tag.dim()..8 {
                    assert_eq!(p.coeff(k), 0.0, "slot {k} leaked for {tag:?}");
                }
            }
        }
    }

    #[test]
    fn checked_mul_rejects_mixed_tags() {
        let a = AlgebraElement::one(AlgebraTag::Real);
        let b = AlgebraElement::one(AlgebraTag::Complex);
        assert!(matches!(
            a.checked_mul(&b),
            Err(Error::TagMismatch { .. })
        ));
    }

    #[test]
    fn inner_product_matches_trace_form() {
        // <A, B> = Re Tr AB for Hermitian matrices, computed via an actual
        // matrix product.
        let mut rng = substream(19, 0);
        let tag = AlgebraTag::Octonion;
        let size = 3;
        for _ in 0..50 {
            let a = random_hermitian(tag, size, &mut rng);
            let b = random_hermitian(tag, size, &mut rng);
            let fast = a.inner_product(&b).unwrap();
            let prod = mat_mul(a.entries(), b.entries(), size);
            let trace: f64 = (0..size).map(|i| prod[i * size + i].re()).sum();
            assert!((fast - trace).abs() < 1e-12 * fast.abs().max(1.0));
            // Symmetry.
            let swapped = b.inner_product(&a).unwrap();
            assert!((fast - swapped).abs() < 1e-12 * fast.abs().max(1.0));
        }
    }

    fn random_hermitian(tag: AlgebraTag, size: usize, rng: &mut impl Rng) -> HermitianMatrix {
        let mut entries = vec![AlgebraElement::zero(tag); size * size];
        for i in 0..size {
            entries[i * size + i] = AlgebraElement::real(tag, rng.random::<f64>() - 0.5);
            for j in (i + 1)..size {
                let e = AlgebraElement::sample_gaussian(tag, rng);
                entries[i * size + j] = e;
                entries[j * size + i] = e.conj();
            }
        }
        HermitianMatrix::from_entries(tag, size, entries).unwrap()
    }

    #[test]
    fn hs_norm_identities() {
        let tag = AlgebraTag::Quaternion;
        assert_eq!(HermitianMatrix::zero(tag, 3).hs_norm(), 0.0);
        let mut rng = substream(20, 0);
        for _ in 0..50 {
            let a = random_hermitian(tag, 4, &mut rng);
            let b = random_hermitian(tag, 4, &mut rng);
            // ||A - B||^2 = ||A||^2 + ||B||^2 - 2 <A, B>.
            let lhs = a.sub(&b).unwrap().hs_norm().powi(2);
            let rhs = a.hs_norm().powi(2) + b.hs_norm().powi(2)
                - 2.0 * a.inner_product(&b).unwrap();
            assert!((lhs - rhs).abs() < 1e-12 * lhs.max(1.0));
            // ||A|| = sqrt(<A, A>).
            assert!((a.hs_norm() - a.inner_product(&a).unwrap().sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn corner_projector_from_first_basis_vector() {
        let tag = AlgebraTag::Complex;
        let mut v = vec![AlgebraElement::zero(tag); 4];
        v[0] = AlgebraElement::one(tag);
        let p = HermitianMatrix::projector_from_vector(&v).unwrap();
        assert_eq!(p, HermitianMatrix::identity_corner(tag, 4));
        let check = p.validate_projector(1e-15);
        assert!(check.passed());
        assert_eq!(check.idempotency, 0.0);
        assert_eq!(check.trace, 0.0);
        assert_eq!(check.hermitian, 0.0);
    }

    #[test]
    fn real_rotation_gives_the_geodesic_projector() {
        // a = (cos u, sin u) over R produces the standard 2x2 rotation
        // projector.
        let u: f64 = 0.7;
        let tag = AlgebraTag::Real;
        let v = [
            AlgebraElement::real(tag, u.cos()),
            AlgebraElement::real(tag, u.sin()),
        ];
        let p = HermitianMatrix::projector_from_vector(&v).unwrap();
        assert!((p.entry(0, 0).re() - u.cos().powi(2)).abs() < 1e-15);
        assert!((p.entry(0, 1).re() - u.sin() * u.cos()).abs() < 1e-15);
        assert!((p.entry(1, 0).re() - u.sin() * u.cos()).abs() < 1e-15);
        assert!((p.entry(1, 1).re() - u.sin().powi(2)).abs() < 1e-15);
    }

    #[test]
    fn projector_requires_unit_vector() {
        let tag = AlgebraTag::Real;
        let v = [AlgebraElement::real(tag, 2.0)];
        assert!(matches!(
            HermitianMatrix::projector_from_vector(&v),
            Err(Error::NotUnit { .. })
        ));
    }

    #[test]
    fn octonion_projector_needs_an_associative_triple() {
        let mut rng = substream(21, 0);
        let tag = AlgebraTag::Octonion;
        // Generic octonion triples do not associate.
        let mut rejected = 0;
        for _ in 0..20 {
            let mut v = [
                random_octonion(&mut rng),
                random_octonion(&mut rng),
                random_octonion(&mut rng),
            ];
            let norm = v.iter().map(|c| c.norm_sq()).sum::<f64>().sqrt();
            for c in v.iter_mut() {
                *c = c.scale(1.0 / norm);
            }
            if matches!(
                HermitianMatrix::projector_from_vector(&v),
                Err(Error::NotAssociative { .. })
            ) {
                rejected += 1;
            }
        }
        assert!(rejected >= 19, "only {rejected} generic triples rejected");

        // A real first component makes the triple associative.
        for _ in 0..100 {
            let mut v = [
                AlgebraElement::real(tag, rng.sample::<f64, _>(rand_distr::StandardNormal)),
                random_octonion(&mut rng),
                random_octonion(&mut rng),
            ];
            let norm = v.iter().map(|c| c.norm_sq()).sum::<f64>().sqrt();
            for c in v.iter_mut() {
                *c = c.scale(1.0 / norm);
            }
            let p = HermitianMatrix::projector_from_vector(&v).unwrap();
            let check = p.validate_projector(1e-10);
            assert!(check.passed(), "residuals {check}");
        }
    }

    #[test]
    fn projector_validation_over_quaternions() {
        let mut rng = substream(22, 0);
        let tag = AlgebraTag::Quaternion;
        for _ in 0..100 {
            let mut v: Vec<AlgebraElement> = (0..4)
                .map(|_| AlgebraElement::sample_gaussian(tag, &mut rng))
                .collect();
            let norm = v.iter().map(|c| c.norm_sq()).sum::<f64>().sqrt();
            for c in v.iter_mut() {
                *c = c.scale(1.0 / norm);
            }
            let p = HermitianMatrix::projector_from_vector(&v).unwrap();
            assert!(p.validate_projector(1e-10).passed());
        }
    }

    #[test]
    fn scaled_projector_fails_validation() {
        let p = HermitianMatrix::identity_corner(AlgebraTag::Real, 3).scale(2.0);
        let check = p.validate_projector(1e-10);
        assert!(!check.passed());
        assert!((check.trace - 1.0).abs() < 1e-15);
    }
}
