//! Jacobi polynomial machinery: evaluation, norm constants, expansion
//! coefficients, and the truncated zonal series for the chordal and
//! symmetric-difference metrics.
//!
//! A space `Q(d, d0)` carries the parameter pair `alpha = d/2 - 1`,
//! `beta = d0/2 - 1`. The chordal metric expands as
//!
//! ```text
//! sin(theta/2) = 1/2 sum_{l>=1} M_l C_l [1 - P_l(cos theta) / P_l(1)]
//! ```
//!
//! and the symmetric-difference metric (radial weight `sin r`) as
//!
//! ```text
//! theta_Delta = B(d/2, d0/2)^{-1} sum_{l>=1} l^{-2} M_l A_l [1 - P_l(cos theta)/P_l(1)]
//! ```
//!
//! Coefficients decay like `l^{-2}`, so both series converge absolutely and
//! uniformly; truncations report an explicit tail majorant.

use crate::spaces::SpaceId;
use crate::special::{ln_beta, ln_gamma, ln_rising};
use crate::{quad, Error, Result};

/// Jacobi parameter pair, both at least -1/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub alpha: f64,
    pub beta: f64,
}

impl JacobiParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if alpha < -0.5 || beta < -0.5 {
            return Err(Error::InvalidArgument(format!(
                "Jacobi parameters must be >= -1/2, got alpha={alpha}, beta={beta}"
            )));
        }
        Ok(Self { alpha, beta })
    }

    /// Parameters attached to a space: `alpha = d/2 - 1`, `beta = d0/2 - 1`.
    pub fn for_space(space: SpaceId) -> Self {
        Self {
            alpha: space.alpha(),
            beta: space.beta(),
        }
    }

    /// Both parameters shifted up by one.
    pub fn shifted(&self) -> Self {
        Self {
            alpha: self.alpha + 1.0,
            beta: self.beta + 1.0,
        }
    }
}

/// Values `P_0(t), ..., P_lmax(t)` by the forward three-term recurrence.
fn jacobi_all(p: &JacobiParams, l_max: usize, t: f64) -> Vec<f64> {
    let (a, b) = (p.alpha, p.beta);
    let mut values = Vec::with_capacity(l_max + 1);
    values.push(1.0);
    if l_max == 0 {
        return values;
    }
    values.push((a + 1.0) + (a + b + 2.0) * (t - 1.0) / 2.0);
    for l in 2..=l_max {
        let lf = l as f64;
        let c1 = 2.0 * lf * (lf + a + b) * (2.0 * lf + a + b - 2.0);
        let c2 = (2.0 * lf + a + b - 1.0)
            * ((2.0 * lf + a + b) * (2.0 * lf + a + b - 2.0) * t + a * a - b * b);
        let c3 = 2.0 * (lf + a - 1.0) * (lf + b - 1.0) * (2.0 * lf + a + b);
        values.push((c2 * values[l - 1] - c3 * values[l - 2]) / c1);
    }
    values
}

/// `P_l^{(alpha, beta)}(t)` for `t` in `[-1, 1]`.
pub fn jacobi_eval(p: &JacobiParams, l: usize, t: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::InvalidArgument(format!(
            "Jacobi argument {t} outside [-1, 1]"
        )));
    }
    Ok(jacobi_all(p, l, t)[l])
}

/// `P_l(1) = binom(alpha + l, l)`, evaluated through log-gamma.
pub fn value_at_one(p: &JacobiParams, l: usize) -> f64 {
    if l == 0 {
        return 1.0;
    }
    let lf = l as f64;
    (ln_gamma(p.alpha + lf + 1.0) - ln_gamma(p.alpha + 1.0) - ln_gamma(lf + 1.0)).exp()
}

/// Orthogonality norm constant
/// `M_l = (2l + a + b + 1) Gamma(l+1) Gamma(l+a+b+1) / (Gamma(l+a+1) Gamma(l+a+b+1))`.
///
/// Rearranged through `Gamma(l+a+b+2)` so the `a + b = -1` case (the circle)
/// stays finite at `l = 0`.
pub fn norm_const_m(p: &JacobiParams, l: usize) -> f64 {
    let lf = l as f64;
    let h = lf + p.alpha + p.beta + 1.0;
    let front = if l == 0 { 1.0 } else { 1.0 + lf / h };
    front
        * (ln_gamma(lf + 1.0) + ln_gamma(h + 1.0)
            - ln_gamma(lf + p.alpha + 1.0)
            - ln_gamma(lf + p.beta + 1.0))
        .exp()
}

/// Chordal expansion coefficient
/// `C_l = B(a + 3/2, b + l + 1) (1/2)_{l-1} P_l(1) / Gamma(l+1)`, `l >= 1`.
pub fn coeff_c(p: &JacobiParams, l: usize) -> Result<f64> {
    if l == 0 {
        return Err(Error::InvalidArgument(
            "coeff_c is defined for l >= 1; the l = 0 value is coeff_c0".into(),
        ));
    }
    let lf = l as f64;
    let ln = ln_beta(p.alpha + 1.5, p.beta + lf + 1.0) - ln_gamma(lf + 1.0)
        + ln_rising(0.5, l - 1)
        + ln_gamma(p.alpha + lf + 1.0)
        - ln_gamma(p.alpha + 1.0)
        - ln_gamma(lf + 1.0);
    Ok(ln.exp())
}

/// `C_0 = B(alpha + 3/2, beta + 1)`.
pub fn coeff_c0(p: &JacobiParams) -> f64 {
    ln_beta(p.alpha + 1.5, p.beta + 1.0).exp()
}

/// `A_l` for the radial weight `sin r`, by adaptive quadrature of
/// `2 int_0^pi sin(r/2)^{2d+1} cos(r/2)^{2d0+1} P_{l-1}^{(a+1, b+1)}(cos r)^2 dr`.
pub fn coeff_a_quadrature(space: SpaceId, l: usize) -> Result<f64> {
    if l == 0 {
        return Err(Error::InvalidArgument("coeff_a requires l >= 1".into()));
    }
    let shifted = JacobiParams::for_space(space).shifted();
    let d = space.dim() as i32;
    let d0 = space.d0() as i32;
    let result = quad::integrate(
        |r| {
            let half = 0.5 * r;
            let poly = jacobi_all(&shifted, l - 1, r.cos())[l - 1];
            2.0 * half.sin().powi(2 * d + 1) * half.cos().powi(2 * d0 + 1) * poly * poly
        },
        0.0,
        std::f64::consts::PI,
        1e-300,
        1e-12,
    )?;
    Ok(result.value)
}

/// `A_l` in closed form:
///
/// ```text
/// A_l = 2 (1/2)_{l-1} / ((l-1)!)^2 * B(d+1, d0+1)
///       * Gamma(d/2+l) Gamma(d0/2+l) Gamma((d+d0+3)/2)
///       / (Gamma(d/2+1) Gamma(d0/2+1) Gamma((d+d0+1)/2+l))
/// ```
///
/// anchored at `A_1 = 2 B(d+1, d0+1)`; agrees with the quadrature route to
/// full precision (the dual-route test pins this).
pub fn coeff_a_closed(space: SpaceId, l: usize) -> Result<f64> {
    if l == 0 {
        return Err(Error::InvalidArgument("coeff_a requires l >= 1".into()));
    }
    let d = space.dim() as f64;
    let d0 = space.d0() as f64;
    let lf = l as f64;
    let ln = std::f64::consts::LN_2 + ln_rising(0.5, l - 1) - 2.0 * ln_gamma(lf)
        + ln_beta(d + 1.0, d0 + 1.0)
        + ln_gamma(d / 2.0 + lf)
        + ln_gamma(d0 / 2.0 + lf)
        + ln_gamma((d + d0 + 3.0) / 2.0)
        - ln_gamma(d / 2.0 + 1.0)
        - ln_gamma(d0 / 2.0 + 1.0)
        - ln_gamma((d + d0 + 1.0) / 2.0 + lf);
    Ok(ln.exp())
}

/// Recover `gamma(Q)` from the coefficient identity at a single degree `l`:
///
/// ```text
/// gamma = (1/2)_{l-1} l^2 / (2 l!) * binom(alpha+l, l)
///         * B(d/2, d0/2) * B((d+1)/2, l + d0/2) / A_l
/// ```
///
/// with `A_l` taken from quadrature, so the route is independent of the
/// closed forms. The result must not depend on `l`.
pub fn gamma_from_equation(space: SpaceId, l: usize) -> Result<f64> {
    if l == 0 {
        return Err(Error::InvalidArgument(
            "gamma_from_equation requires l >= 1".into(),
        ));
    }
    let d = space.dim() as f64;
    let d0 = space.d0() as f64;
    let alpha = space.alpha();
    let lf = l as f64;
    let ln_numerator = ln_rising(0.5, l - 1) + 2.0 * lf.ln()
        - std::f64::consts::LN_2
        - ln_gamma(lf + 1.0)
        + ln_gamma(alpha + lf + 1.0)
        - ln_gamma(alpha + 1.0)
        - ln_gamma(lf + 1.0)
        + ln_beta(d / 2.0, d0 / 2.0)
        + ln_beta((d + 1.0) / 2.0, lf + d0 / 2.0);
    Ok(ln_numerator.exp() / coeff_a_quadrature(space, l)?)
}

/// Truncation metadata: number of retained terms and a tail majorant.
#[derive(Debug, Clone, Copy)]
pub struct SeriesTruncation {
    /// Retained degrees `1 ..= l_max`.
    pub l_max: usize,
    /// Upper bound for the dropped remainder, from explicitly computed
    /// coefficients.
    pub tail_bound: f64,
}

/// Majorant for `factor * sum_{l > l_max} term(l)` where `term` decays like
/// `l^{-2}`: terms are summed explicitly to `2 l_max` and the rest is capped
/// by `2 * term(2 l_max) * 2 l_max`.
fn tail_majorant(term: impl Fn(usize) -> f64, l_max: usize, factor: f64) -> f64 {
    let ext = (2 * l_max).max(l_max + 64);
    let mut sum = 0.0;
    for l in (l_max + 1)..=ext {
        sum += term(l);
    }
    factor * (sum + 2.0 * term(ext) * ext as f64)
}

/// Shared evaluation: `sum_l coeffs[l-1] * (1 - P_l(cos theta) / P_l(1))`.
fn zonal_sum(p: &JacobiParams, coeffs: &[f64], theta: f64) -> f64 {
    if theta == 0.0 {
        return 0.0;
    }
    let t = theta.cos().clamp(-1.0, 1.0);
    let (a, b) = (p.alpha, p.beta);
    let mut acc = 0.0;
    // Forward recurrence for P_l(t) alongside P_l(1) = binom(a+l, l).
    let mut prev2 = 1.0;
    let mut prev1 = (a + 1.0) + (a + b + 2.0) * (t - 1.0) / 2.0;
    let mut at_one = a + 1.0;
    if !coeffs.is_empty() {
        acc += coeffs[0] * (1.0 - prev1 / at_one);
    }
    for (idx, &coeff) in coeffs.iter().enumerate().skip(1) {
        let lf = (idx + 1) as f64;
        let c1 = 2.0 * lf * (lf + a + b) * (2.0 * lf + a + b - 2.0);
        let c2 = (2.0 * lf + a + b - 1.0)
            * ((2.0 * lf + a + b) * (2.0 * lf + a + b - 2.0) * t + a * a - b * b);
        let c3 = 2.0 * (lf + a - 1.0) * (lf + b - 1.0) * (2.0 * lf + a + b);
        let current = (c2 * prev1 - c3 * prev2) / c1;
        prev2 = prev1;
        prev1 = current;
        at_one *= (a + lf) / lf;
        acc += coeff * (1.0 - current / at_one);
    }
    acc
}

/// Truncated zonal expansion of the chordal metric `sin(theta/2)`.
#[derive(Debug, Clone)]
pub struct ChordalSeries {
    params: JacobiParams,
    /// `M_l C_l` for `l = 1 ..= l_max`.
    coeffs: Vec<f64>,
    truncation: SeriesTruncation,
}

fn chordal_term(p: &JacobiParams, l: usize) -> f64 {
    norm_const_m(p, l) * coeff_c(p, l).expect("l >= 1")
}

impl ChordalSeries {
    pub fn new(space: SpaceId, l_max: usize) -> Result<Self> {
        if l_max == 0 {
            return Err(Error::InvalidArgument("series needs l_max >= 1".into()));
        }
        let params = JacobiParams::for_space(space);
        let coeffs: Vec<f64> = (1..=l_max).map(|l| chordal_term(&params, l)).collect();
        // Remainder is 1/2 sum_{l>L} s_l (1 - phi_l) with 0 <= 1 - phi_l <= 2.
        let tail_bound = tail_majorant(|l| chordal_term(&params, l), l_max, 1.0);
        Ok(Self {
            params,
            coeffs,
            truncation: SeriesTruncation { l_max, tail_bound },
        })
    }

    /// Smallest power-of-two truncation whose tail majorant is below `tol`.
    pub fn with_tolerance(space: SpaceId, tol: f64) -> Result<Self> {
        let mut l_max = 64;
        loop {
            let series = Self::new(space, l_max)?;
            if series.truncation.tail_bound < tol {
                return Ok(series);
            }
            l_max *= 2;
            if l_max > 1 << 22 {
                return Err(Error::InvalidArgument(format!(
                    "series tolerance {tol:e} needs more than {l_max} terms"
                )));
            }
        }
    }

    /// `1/2 sum_{l=1}^{L} M_l C_l [1 - P_l(cos theta)/P_l(1)]`.
    pub fn eval(&self, theta: f64) -> f64 {
        0.5 * zonal_sum(&self.params, &self.coeffs, theta)
    }

    pub fn truncation(&self) -> SeriesTruncation {
        self.truncation
    }
}

/// Truncated zonal expansion of the symmetric-difference metric for the
/// distinguished radial weight `sin r`.
#[derive(Debug, Clone)]
pub struct SdSeries {
    params: JacobiParams,
    /// `B(d/2, d0/2)^{-1} l^{-2} M_l A_l` for `l = 1 ..= l_max`.
    coeffs: Vec<f64>,
    truncation: SeriesTruncation,
}

fn sd_term(space: SpaceId, inv_beta: f64, l: usize) -> f64 {
    let p = JacobiParams::for_space(space);
    let lf = l as f64;
    inv_beta / (lf * lf) * norm_const_m(&p, l) * coeff_a_closed(space, l).expect("l >= 1")
}

impl SdSeries {
    pub fn new(space: SpaceId, l_max: usize) -> Result<Self> {
        if l_max == 0 {
            return Err(Error::InvalidArgument("series needs l_max >= 1".into()));
        }
        let params = JacobiParams::for_space(space);
        let inv_beta =
            (-ln_beta(space.dim() as f64 / 2.0, space.d0() as f64 / 2.0)).exp();
        let coeffs: Vec<f64> = (1..=l_max).map(|l| sd_term(space, inv_beta, l)).collect();
        // No 1/2 out front here, so the remainder picks up the full factor 2.
        let tail_bound = tail_majorant(|l| sd_term(space, inv_beta, l), l_max, 2.0);
        Ok(Self {
            params,
            coeffs,
            truncation: SeriesTruncation { l_max, tail_bound },
        })
    }

    /// Smallest power-of-two truncation whose tail majorant is below `tol`.
    pub fn with_tolerance(space: SpaceId, tol: f64) -> Result<Self> {
        let mut l_max = 64;
        loop {
            let series = Self::new(space, l_max)?;
            if series.truncation.tail_bound < tol {
                return Ok(series);
            }
            l_max *= 2;
            if l_max > 1 << 22 {
                return Err(Error::InvalidArgument(format!(
                    "series tolerance {tol:e} needs more than {l_max} terms"
                )));
            }
        }
    }

    /// `B(d/2,d0/2)^{-1} sum_{l=1}^{L} l^{-2} M_l A_l [1 - P_l(cos theta)/P_l(1)]`.
    pub fn eval(&self, theta: f64) -> f64 {
        zonal_sum(&self.params, &self.coeffs, theta)
    }

    pub fn truncation(&self) -> SeriesTruncation {
        self.truncation
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{gamma_const, Family};
    use crate::special::beta;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn five_parameter_spaces() -> Vec<SpaceId> {
        vec![
            SpaceId::sphere(2).unwrap(),
            SpaceId::projective(Family::RealProj, 2).unwrap(),
            SpaceId::projective(Family::ComplexProj, 2).unwrap(),
            SpaceId::projective(Family::QuatProj, 2).unwrap(),
            SpaceId::projective(Family::OctProj, 2).unwrap(),
        ]
    }

    #[test]
    fn degree_zero_is_one() {
        let p = JacobiParams::new(1.3, 0.2).unwrap();
        for &t in &[-1.0, -0.4, 0.0, 0.9, 1.0] {
            assert_eq!(jacobi_eval(&p, 0, t).unwrap(), 1.0);
        }
    }

    #[test]
    fn degree_one_linear_form() {
        // P_1(t) = (alpha + 1) + (alpha + beta + 2)(t - 1)/2.
        for space in five_parameter_spaces() {
            let p = JacobiParams::for_space(space);
            for &t in &[-0.7, 0.0, 0.4] {
                let expected = (p.alpha + 1.0) + (p.alpha + p.beta + 2.0) * (t - 1.0) / 2.0;
                assert!((jacobi_eval(&p, 1, t).unwrap() - expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn argument_domain_is_enforced() {
        let p = JacobiParams::new(0.0, 0.0).unwrap();
        assert!(jacobi_eval(&p, 3, 1.2).is_err());
        assert!(jacobi_eval(&p, 3, -1.0001).is_err());
        assert!(JacobiParams::new(-0.6, 0.0).is_err());
    }

    /// High-precision l-th derivative of an analytic function by the Cauchy
    /// integral formula (trapezoid rule on a complex circle).
    fn cauchy_derivative(f: impl Fn(Complex64) -> Complex64, t0: f64, l: usize, radius: f64) -> f64 {
        const M: usize = 256;
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..M {
            let phi = 2.0 * PI * m as f64 / M as f64;
            let z = Complex64::new(t0 + radius * phi.cos(), radius * phi.sin());
            let rot = Complex64::new(0.0, -(l as f64) * phi).exp();
            acc += f(z) * rot;
        }
        let l_factorial: f64 = (1..=l).map(|k| k as f64).product();
        (acc / M as f64).re * l_factorial / radius.powi(l as i32)
    }

    #[test]
    fn recurrence_matches_rodrigues_formula() {
        // P_l(t) = (-1)^l / (2^l l!) (1-t)^{-a} (1+t)^{-b}
        //          d^l/dt^l [(1-t)^{l+a} (1+t)^{l+b}],
        // with the derivative taken numerically.
        for space in five_parameter_spaces() {
            let p = JacobiParams::for_space(space);
            for l in 0..=6usize {
                for &t0 in &[-0.7, 0.0, 0.4] {
                    let (a, b) = (p.alpha, p.beta);
                    let g = |z: Complex64| {
                        (Complex64::new(1.0, 0.0) - z).powf(l as f64 + a)
                            * (Complex64::new(1.0, 0.0) + z).powf(l as f64 + b)
                    };
                    let deriv = cauchy_derivative(g, t0, l, 0.25);
                    let l_factorial: f64 = (1..=l).map(|k| k as f64).product();
                    let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                    let rodrigues = sign / (2.0_f64.powi(l as i32) * l_factorial)
                        * (1.0 - t0).powf(-a)
                        * (1.0 + t0).powf(-b)
                        * deriv;
                    let direct = jacobi_eval(&p, l, t0).unwrap();
                    assert!(
                        (direct - rodrigues).abs() < 1e-8,
                        "{space} l={l} t={t0}: recurrence {direct} vs Rodrigues {rodrigues}"
                    );
                }
            }
        }
    }

    #[test]
    fn value_at_one_matches_recurrence() {
        for space in five_parameter_spaces() {
            let p = JacobiParams::for_space(space);
            for l in 0..=30usize {
                let direct = jacobi_eval(&p, l, 1.0).unwrap();
                let closed = value_at_one(&p, l);
                assert!(
                    ((direct - closed) / closed).abs() < 1e-11,
                    "{space} l={l}: {direct} vs {closed}"
                );
            }
        }
        assert_eq!(value_at_one(&JacobiParams::new(0.7, 0.1).unwrap(), 0), 1.0);
        // alpha = 0 (the d = 2 spaces): P_l(1) = 1 for all l.
        let p = JacobiParams::new(0.0, -0.5).unwrap();
        for l in 0..=40 {
            assert!((value_at_one(&p, l) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn orthogonality_against_norm_constants() {
        // int_0^pi sin(r/2)^{d-1} cos(r/2)^{d0-1} P_l P_l' dr = delta_{ll'} / M_l
        // (the weight substituted to the angular variable, which also removes
        // the d0 = 1 endpoint singularity).
        for space in five_parameter_spaces() {
            let p = JacobiParams::for_space(space);
            let d = space.dim() as i32;
            let d0 = space.d0() as i32;
            for l in 0..=10usize {
                for lp in l..=10usize {
                    let integral = quad::integrate(
                        |r| {
                            let half = 0.5 * r;
                            let values = jacobi_all(&p, lp, r.cos());
                            half.sin().powi(d - 1)
                                * half.cos().powi(d0 - 1)
                                * values[l]
                                * values[lp]
                        },
                        0.0,
                        PI,
                        1e-12,
                        1e-12,
                    )
                    .unwrap()
                    .value;
                    let expected = if l == lp {
                        1.0 / norm_const_m(&p, l)
                    } else {
                        0.0
                    };
                    assert!(
                        (integral - expected).abs() < 1e-10,
                        "{space} l={l} l'={lp}: {integral} vs {expected}"
                    );
                }
            }
        }
    }

    #[test]
    fn norm_constant_explicit_l0_and_growth() {
        for space in five_parameter_spaces() {
            let p = JacobiParams::for_space(space);
            let expected =
                (ln_gamma(p.alpha + p.beta + 2.0) - ln_gamma(p.alpha + 1.0) - ln_gamma(p.beta + 1.0))
                    .exp();
            assert!((norm_const_m(&p, 0) - expected).abs() < 1e-12 * expected);
            // M_l = O(l): the ratio M_l / l settles toward a constant (2),
            // with shrinking increments over l <= 200.
            let ratio = |l: usize| norm_const_m(&p, l) / l as f64;
            for l in 1..=200 {
                assert!(ratio(l).is_finite() && ratio(l) > 0.0);
            }
            let early = (ratio(100) - ratio(50)).abs();
            let late = (ratio(200) - ratio(150)).abs();
            assert!(
                late < early,
                "{space}: M_l/l not stabilizing ({early} then {late})"
            );
            assert!(
                (ratio(4000) / 2.0 - 1.0).abs() < 0.1,
                "{space}: M_l/l at l=4000 is {}",
                ratio(4000)
            );
        }
    }

    #[test]
    fn coefficient_c_explicit_l1() {
        // C_1 = B(alpha + 3/2, beta + 2) (alpha + 1).
        for space in five_parameter_spaces() {
            let p = JacobiParams::for_space(space);
            let expected = beta(p.alpha + 1.5, p.beta + 2.0) * (p.alpha + 1.0);
            let got = coeff_c(&p, 1).unwrap();
            assert!(((got - expected) / expected).abs() < 1e-13);
        }
    }

    #[test]
    fn coefficient_sum_identity() {
        // M_0 C_0 = 1/2 sum_{l>=1} M_l C_l (partial sums to L = 2000).
        for space in five_parameter_spaces() {
            let p = JacobiParams::for_space(space);
            let lhs = norm_const_m(&p, 0) * coeff_c0(&p);
            let rhs: f64 = (1..=2000).map(|l| chordal_term(&p, l)).sum::<f64>() * 0.5;
            assert!(
                ((lhs - rhs) / lhs).abs() < 1e-3,
                "{space}: {lhs} vs partial sum {rhs}"
            );
            // Tighter with the tail majorant added.
            let tail = tail_majorant(|l| chordal_term(&p, l), 2000, 0.5);
            assert!(
                (lhs - rhs).abs() <= tail,
                "{space}: residual {} exceeds tail bound {tail}",
                (lhs - rhs).abs()
            );
        }
    }

    #[test]
    fn coefficient_decay_is_quadratic() {
        // (M_l C_l) l^2 stays bounded out to l = 500.
        for space in five_parameter_spaces() {
            let p = JacobiParams::for_space(space);
            let mut max_scaled: f64 = 0.0;
            for l in 1..=500usize {
                let scaled = chordal_term(&p, l) * (l * l) as f64;
                assert!(scaled.is_finite());
                max_scaled = max_scaled.max(scaled);
            }
            assert!(
                max_scaled < 10.0,
                "{space}: scaled coefficient reached {max_scaled}"
            );
        }
    }

    #[test]
    fn coefficient_a_anchor_and_dual_route() {
        for space in five_parameter_spaces() {
            let d = space.dim() as f64;
            let d0 = space.d0() as f64;
            // l = 1 anchor: A_1 = 2 B(d+1, d0+1).
            let anchor = 2.0 * beta(d + 1.0, d0 + 1.0);
            for (route, value) in [
                ("closed", coeff_a_closed(space, 1).unwrap()),
                ("quadrature", coeff_a_quadrature(space, 1).unwrap()),
            ] {
                assert!(
                    ((value - anchor) / anchor).abs() < 1e-10,
                    "{space} {route}: {value} vs anchor {anchor}"
                );
            }
        }
        // S^2 at l = 2 has the hand-computed value 4/105.
        let s2 = SpaceId::sphere(2).unwrap();
        assert!((coeff_a_closed(s2, 2).unwrap() - 4.0 / 105.0).abs() < 1e-15);
        assert!((coeff_a_quadrature(s2, 2).unwrap() - 4.0 / 105.0).abs() < 1e-12);
        // OP2, l <= 5: routes agree to 1e-9 relative.
        let op2 = SpaceId::projective(Family::OctProj, 2).unwrap();
        for l in 1..=5 {
            let q = coeff_a_quadrature(op2, l).unwrap();
            let c = coeff_a_closed(op2, l).unwrap();
            assert!(((q - c) / c).abs() < 1e-9, "OP2 l={l}: {q} vs {c}");
        }
    }

    #[test]
    fn chordal_series_at_zero_and_midpoint() {
        let s2 = SpaceId::sphere(2).unwrap();
        let series = ChordalSeries::new(s2, 500).unwrap();
        assert_eq!(series.eval(0.0), 0.0);
        let expected = (PI / 4.0).sin();
        // Truncation error decays like 1/(2L): about 1e-3 at L = 500, within
        // the reported tail bound.
        let got = series.eval(PI / 2.0);
        assert!((got - expected).abs() <= series.truncation().tail_bound);
        assert!((got - expected).abs() < 2e-3, "series {got} vs {expected}");
        // 1e-4 accuracy needs L = 5000.
        let fine = ChordalSeries::new(s2, 5000).unwrap();
        let got = fine.eval(PI / 2.0);
        assert!(
            (got - expected).abs() < 1e-4,
            "series {got} vs sin(pi/4) {expected}"
        );
    }

    #[test]
    fn chordal_series_error_within_tail_bound() {
        let mut rng = crate::stream::substream(50, 0);
        use rand::Rng;
        for space in five_parameter_spaces() {
            let series = ChordalSeries::new(space, 1000).unwrap();
            let tail = series.truncation().tail_bound;
            assert!(tail > 0.0);
            for _ in 0..20 {
                let theta: f64 = rng.random::<f64>() * PI;
                let err = (series.eval(theta) - (0.5 * theta).sin()).abs();
                assert!(
                    err <= tail,
                    "{space} theta={theta}: error {err} exceeds tail {tail}"
                );
            }
        }
    }

    #[test]
    fn sd_series_reproduces_the_chordal_metric() {
        let mut rng = crate::stream::substream(51, 0);
        use rand::Rng;
        for space in five_parameter_spaces() {
            let gamma = gamma_const(space);
            // L chosen so the (sd-side) tail is below 1e-5.
            let series = SdSeries::with_tolerance(space, 1e-5).unwrap();
            assert_eq!(series.eval(0.0), 0.0);
            // Antipodal normalization: gamma * sd(pi) = 1.
            assert!(
                (gamma * series.eval(PI) - 1.0).abs() < 1e-4,
                "{space}: gamma * sd(pi) = {}",
                gamma * series.eval(PI)
            );
            for _ in 0..20 {
                let theta: f64 = rng.random::<f64>() * PI;
                let err = (gamma * series.eval(theta) - (0.5 * theta).sin()).abs();
                assert!(err < 1e-4, "{space} theta={theta}: error {err}");
            }
        }
    }

    #[test]
    fn gamma_from_the_coefficient_identity() {
        for space in five_parameter_spaces() {
            let exact = gamma_const(space);
            let l1 = gamma_from_equation(space, 1).unwrap();
            assert!(
                ((l1 - exact) / exact).abs() < 1e-11,
                "{space}: l=1 gives {l1} vs {exact}"
            );
        }
        // CP^2, l = 1..8: all equal 3.
        let cp2 = SpaceId::projective(Family::ComplexProj, 2).unwrap();
        let mut values = Vec::new();
        for l in 1..=8 {
            let g = gamma_from_equation(cp2, l).unwrap();
            assert!(((g - 3.0) / 3.0).abs() < 1e-9, "CP2 l={l}: {g}");
            values.push(g);
        }
        // Constant in l: relative variance below 1e-16.
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / values.len() as f64;
        assert!(var / (mean * mean) < 1e-16, "relative variance {}", var / (mean * mean));
        // OP^2, l = 1..5: all equal 192/35.
        let op2 = SpaceId::projective(Family::OctProj, 2).unwrap();
        for l in 1..=5 {
            let g = gamma_from_equation(op2, l).unwrap();
            assert!(
                ((g - 192.0 / 35.0) / (192.0 / 35.0)).abs() < 1e-8,
                "OP2 l={l}: {g}"
            );
        }
    }

    #[test]
    fn polynomials_are_bounded_by_their_value_at_one() {
        for space in five_parameter_spaces() {
            let p = JacobiParams::for_space(space);
            for l in (0..=50usize).step_by(5) {
                let bound = value_at_one(&p, l) * (1.0 + 1e-12) + 1e-10;
                for k in 0..1000 {
                    let t = -1.0 + 2.0 * k as f64 / 999.0;
                    let v = jacobi_eval(&p, l, t).unwrap();
                    assert!(
                        v.abs() <= bound,
                        "{space} l={l} t={t}: |{v}| > {bound}"
                    );
                }
            }
        }
    }

    #[test]
    fn square_root_expansion_converges() {
        // Partial sums of the (1-t)^{1/2} Jacobi expansion converge uniformly
        // on a grid away from t = 1 (max error below 1e-3 at L = 2000; the
        // endpoint itself converges at the slower sum-identity rate).
        let l_max = 2000usize;
        for space in five_parameter_spaces() {
            let p = JacobiParams::for_space(space);
            let (a, b) = (p.alpha, p.beta);
            let front = 2.0_f64.sqrt() * ln_gamma(a + 1.5).exp();
            let coeffs: Vec<f64> = (0..=l_max)
                .map(|l| {
                    let lf = l as f64;
                    let h = lf + a + b + 1.0;
                    let linear = if l == 0 { 1.0 } else { 1.0 + lf / h };
                    // (-1/2)_l = -(1/2) (1/2)_{l-1} for l >= 1.
                    let pochhammer = if l == 0 {
                        1.0
                    } else {
                        -0.5 * ln_rising(0.5, l - 1).exp()
                    };
                    front * linear * pochhammer
                        * (ln_gamma(h + 1.0) - ln_gamma(lf + a + 1.0) - ln_gamma(lf + a + b + 2.5))
                            .exp()
                })
                .collect();
            let mut max_err = 0.0_f64;
            for k in 0..400 {
                let t = -1.0 + (0.95 + 1.0) * k as f64 / 399.0;
                let values = jacobi_all(&p, l_max, t);
                let sum: f64 = coeffs.iter().zip(values.iter()).map(|(c, v)| c * v).sum();
                max_err = max_err.max((sum - (1.0 - t).sqrt()).abs());
            }
            assert!(
                max_err < 1e-3,
                "{space}: max expansion error {max_err} at L = {l_max}"
            );
        }
    }
}
