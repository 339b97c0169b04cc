//! Discrepancy and distance functionals on point sets, the
//! invariance-principle residual, and Monte Carlo oracles for the defining
//! integrals.
//!
//! The central identity: for every `N`-point set `D` in `Q(d, d0)`,
//!
//! ```text
//! gamma(Q) * lambda[D] + tau[D] = <tau> * N^2
//! ```
//!
//! where `lambda` is the ball quadratic discrepancy under the radial weight
//! `sin r` and `tau[D]` the full double sum of pairwise chordal distances.
//!
//! Monte Carlo estimators are deterministic for a fixed seed: samples are
//! drawn from counter-based substreams in fixed-size blocks and reduced in
//! block order, so results do not depend on thread scheduling.

use crate::spaces::{
    ball_volume, chordal_distance, gamma_const, geodesic_distance, mean_chordal,
    mean_sd_metric_closed, sample_octonionic, sample_uniform, Family, Point, SpaceId,
};
use crate::stream::substream;
use crate::{quad, Error, Result};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;

/// An ordered list of validated points of one space.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    space: SpaceId,
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(space: SpaceId, points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidArgument(
                "a point set needs at least one point".into(),
            ));
        }
        for p in &points {
            if p.space() != space {
                return Err(Error::SpaceMismatch {
                    left: space,
                    right: p.space(),
                });
            }
        }
        Ok(Self { space, points })
    }

    /// `n` independent draws from the invariant measure.
    pub fn random_uniform(space: SpaceId, n: usize, seed: u64) -> Result<Self> {
        let mut rng = substream(seed, crate::stream::STREAM_POINTS);
        let points: Result<Vec<Point>> = (0..n).map(|_| sample_uniform(space, &mut rng)).collect();
        Self::new(space, points?)
    }

    /// `n` valid (non-uniform) points of `OP2`.
    pub fn random_octonionic(n: usize, seed: u64) -> Result<Self> {
        let mut rng = substream(seed, crate::stream::STREAM_POINTS);
        let points: Vec<Point> = (0..n).map(|_| sample_octonionic(&mut rng)).collect();
        let space = points[0].space();
        Self::new(space, points)
    }

    pub fn space(&self) -> SpaceId {
        self.space
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Sum of chordal distances over all ordered pairs (the diagonal contributes
/// zero): `tau[D] = sum_{x1, x2 in D} tau(x1, x2)`.
pub fn sum_pairwise_chordal(set: &PointSet) -> f64 {
    let points = set.points();
    let mut acc = 0.0;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            acc += chordal_distance(&points[i], &points[j]).expect("same space");
        }
    }
    2.0 * acc
}

/// Symmetric-difference metric for the radial weight `sin r`, in closed form:
/// `theta_Delta(x1, x2) = tau(x1, x2) / gamma(Q)`.
pub fn sd_metric(x1: &Point, x2: &Point) -> Result<f64> {
    Ok(chordal_distance(x1, x2)? / gamma_const(x1.space()))
}

/// Discrepancy kernel `lambda(x1, x2) = <theta_Delta> - theta_Delta(x1, x2)`.
///
/// The mean enters through the exact relation `<theta_Delta> = <tau>/gamma`,
/// which keeps the invariance identity exact to rounding; the quadrature
/// route [`mean_sd_metric`] is checked against it separately.
pub fn discrepancy_kernel(x1: &Point, x2: &Point) -> Result<f64> {
    Ok(mean_sd_metric_closed(x1.space()) - sd_metric(x1, x2)?)
}

/// Ball quadratic discrepancy `lambda[D] = sum_{x1, x2 in D} lambda(x1, x2)`
/// (ordered pairs, diagonal included).
pub fn quadratic_discrepancy(set: &PointSet) -> f64 {
    let n = set.len() as f64;
    let mean = mean_sd_metric_closed(set.space());
    n * n * mean - sum_pairwise_chordal(set) / gamma_const(set.space())
}

/// Residual of the invariance principle,
/// `gamma * lambda[D] + tau[D] - <tau> N^2`; zero to rounding by
/// construction of the closed-form kernel. The substantive check replaces
/// `lambda` with its Monte Carlo estimate ([`mc_invariance_residual`]).
pub fn invariance_residual(set: &PointSet) -> f64 {
    let n = set.len() as f64;
    let tau = sum_pairwise_chordal(set);
    gamma_const(set.space()) * quadratic_discrepancy(set) + tau - mean_chordal(set.space()) * n * n
}

/// A reproducible Monte Carlo estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
}

const MC_CHUNK: usize = 16_384;
const MC_MIN_SAMPLES: usize = 100;

/// Mean and standard error of `f` over `samples` draws, chunked into
/// deterministic substreams.
fn mc_statistic<F>(samples: usize, seed: u64, f: F) -> (f64, f64)
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    let chunks = samples.div_ceil(MC_CHUNK);
    let partials: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = substream(seed, c as u64);
            let count = if c == chunks - 1 {
                samples - c * MC_CHUNK
            } else {
                MC_CHUNK
            };
            let mut sum = 0.0;
            let mut sumsq = 0.0;
            for _ in 0..count {
                let v = f(&mut rng);
                sum += v;
                sumsq += v * v;
            }
            (sum, sumsq)
        })
        .collect();
    let (sum, sumsq) = partials
        .iter()
        .fold((0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1));
    let n = samples as f64;
    let mean = sum / n;
    let var = ((sumsq - n * mean * mean) / (n - 1.0)).max(0.0);
    (mean, (var / n).sqrt())
}

fn check_mc_inputs(space: SpaceId, samples: usize) -> Result<()> {
    if !space.supports_uniform_sampling() {
        return Err(Error::Unsupported {
            space,
            operation: "Monte Carlo estimation (uniform sampling unavailable)",
        });
    }
    if samples < MC_MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "Monte Carlo estimators need at least {MC_MIN_SAMPLES} samples, got {samples}"
        )));
    }
    Ok(())
}

/// Radius with density `sin(r)/2` on `[0, pi]`, by inverse CDF.
fn sample_radius<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.random();
    (1.0 - 2.0 * u).clamp(-1.0, 1.0).acos()
}

/// Monte Carlo estimate of the ball quadratic discrepancy from its defining
/// integral: centers `y` uniform, radii `r` with density `sin(r)/2`, and the
/// squared count deviation `(#(B(y,r) cap D) - N v(r))^2` averaged and scaled
/// by the radial mass 2.
pub fn mc_discrepancy(set: &PointSet, samples: usize, seed: u64) -> Result<McEstimate> {
    let space = set.space();
    check_mc_inputs(space, samples)?;
    let n = set.len() as f64;
    let (mean, se) = mc_statistic(samples, seed, |rng| {
        let y = sample_uniform(space, rng).expect("samplable space");
        let r = sample_radius(rng);
        let v = ball_volume(space, r).expect("radius in range");
        let count = set
            .points()
            .iter()
            .filter(|x| geodesic_distance(x, &y).expect("same space") < r)
            .count() as f64;
        let dev = count - n * v;
        dev * dev
    });
    Ok(McEstimate {
        value: 2.0 * mean,
        std_error: 2.0 * se,
        samples,
        seed,
    })
}

/// Monte Carlo estimate of the symmetric-difference metric from
/// `theta_Delta(x1, x2) = int |tau(x1, y)^2 - tau(x2, y)^2| dmu(y)`.
pub fn mc_sd_metric(x1: &Point, x2: &Point, samples: usize, seed: u64) -> Result<McEstimate> {
    if x1.space() != x2.space() {
        return Err(Error::SpaceMismatch {
            left: x1.space(),
            right: x2.space(),
        });
    }
    let space = x1.space();
    check_mc_inputs(space, samples)?;
    let (mean, se) = mc_statistic(samples, seed, |rng| {
        let y = sample_uniform(space, rng).expect("samplable space");
        let t1 = chordal_distance(x1, &y).expect("same space");
        let t2 = chordal_distance(x2, &y).expect("same space");
        (t1 * t1 - t2 * t2).abs()
    });
    Ok(McEstimate {
        value: mean,
        std_error: se,
        samples,
        seed,
    })
}

/// Monte Carlo estimate of `gamma` from its integral representations:
/// `gamma(S^d) = (int |(x, y)| dmu(y))^{-1}` on spheres, and the double
/// product variant on real projective spaces. Standard error by the delta
/// method.
pub fn mc_gamma(space: SpaceId, samples: usize, seed: u64) -> Result<McEstimate> {
    check_mc_inputs(space, samples)?;
    let (mean, se) = match space.family() {
        Family::Sphere => mc_statistic(samples, seed, |rng| {
            let y = sample_uniform(space, rng).expect("sphere");
            y.sphere_coords().expect("sphere point")[0].abs()
        }),
        Family::RealProj => {
            // gamma(RP^n)^{-1} = 2 int |(a+, a)(a-, a)| dmu over the sphere of
            // representatives, with a+ = e0, a- = e1.
            let sphere = SpaceId::sphere(space.dim())?;
            mc_statistic(samples, seed, move |rng| {
                let a = sample_uniform(sphere, rng).expect("sphere");
                let c = a.sphere_coords().expect("sphere point");
                2.0 * (c[0] * c[1]).abs()
            })
        }
        _ => {
            return Err(Error::Unsupported {
                space,
                operation: "the absolute-moment integral for gamma",
            })
        }
    };
    Ok(McEstimate {
        value: 1.0 / mean,
        std_error: se / (mean * mean),
        samples,
        seed,
    })
}

/// Monte Carlo leg of the invariance principle: returns
/// `gamma * lambda_MC + tau[D] - <tau> N^2` together with the gate width
/// `gamma * sigma_MC`.
pub fn mc_invariance_residual(
    set: &PointSet,
    samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    let estimate = mc_discrepancy(set, samples, seed)?;
    let n = set.len() as f64;
    let gamma = gamma_const(set.space());
    let residual =
        gamma * estimate.value + sum_pairwise_chordal(set) - mean_chordal(set.space()) * n * n;
    Ok((residual, gamma * estimate.std_error))
}

/// A radial measure on `[0, pi]` given by a density.
///
/// The distinguished instance `xi_natural` has density `sin r` and total
/// mass 2; it is the weight for which ball discrepancy coincides with
/// spherical-cap discrepancy on spheres.
pub struct RadialMeasure {
    density: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    total_mass: f64,
}

impl RadialMeasure {
    /// Wrap a density; the total mass is computed by quadrature.
    pub fn new(density: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        let total_mass = quad::integrate(&density, 0.0, PI, 1e-12, 1e-12)?.value;
        Ok(Self {
            density: Box::new(density),
            total_mass,
        })
    }

    /// The weight `sin r`.
    pub fn xi_natural() -> Self {
        Self {
            density: Box::new(f64::sin),
            total_mass: 2.0,
        }
    }

    pub fn density(&self, r: f64) -> f64 {
        (self.density)(r)
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }
}

/// Mean symmetric-difference metric for an arbitrary radial measure,
/// `int (v(r) - v(r)^2) dxi(r)` (any space).
pub fn mean_sd_xi(space: SpaceId, xi: &RadialMeasure) -> Result<f64> {
    Ok(quad::integrate(
        |r| {
            let v = ball_volume(space, r).expect("radius in range");
            (v - v * v) * xi.density(r)
        },
        0.0,
        PI,
        1e-12,
        1e-12,
    )?
    .value)
}

/// Normalized area of the intersection of two spherical caps of common
/// geodesic radius `r` on `S^2`, centers `theta` apart.
///
/// Piecewise: empty for `theta >= 2r`, complement-of-union for
/// `theta >= 2pi - 2r`, otherwise the lens area from the spherical
/// Gauss–Bonnet theorem.
pub fn cap_intersection_s2(theta: f64, r: f64) -> f64 {
    debug_assert!((0.0..=PI + 1e-12).contains(&theta));
    debug_assert!((0.0..=PI).contains(&r));
    let v = 0.5 * (1.0 - r.cos());
    if r <= 0.0 {
        return 0.0;
    }
    if r >= PI {
        return 1.0;
    }
    if theta < 1e-12 {
        return v;
    }
    if theta >= 2.0 * r {
        return 0.0;
    }
    if theta >= 2.0 * PI - 2.0 * r {
        return 2.0 * v - 1.0;
    }
    // Lens bounded by two circular arcs. Half-angle A at a cap center
    // between the other center and a boundary crossing; C the crossing angle.
    let cos_a = ((r.cos() / r.sin()) * (0.5 * theta).tan()).clamp(-1.0, 1.0);
    let big_a = cos_a.acos();
    let cos_c = ((theta.cos() - r.cos() * r.cos()) / (r.sin() * r.sin())).clamp(-1.0, 1.0);
    let big_c = cos_c.acos();
    let area = 2.0 * PI - 4.0 * big_a * r.cos() - 2.0 * big_c;
    (area / (4.0 * PI)).max(0.0)
}

fn require_s2(space: SpaceId) -> Result<()> {
    if space != SpaceId::sphere(2)? {
        return Err(Error::Unsupported {
            space,
            operation: "cap-geometry quadrature (closed two-cap areas exist on S2 only)",
        });
    }
    Ok(())
}

/// Symmetric-difference metric for an arbitrary radial measure on `S^2`,
/// by quadrature of `int (v(r) - mu(B(x1,r) cap B(x2,r))) dxi(r)` with the
/// analytic two-cap intersection area.
pub fn sd_metric_xi_s2(xi: &RadialMeasure, x1: &Point, x2: &Point) -> Result<f64> {
    if x1.space() != x2.space() {
        return Err(Error::SpaceMismatch {
            left: x1.space(),
            right: x2.space(),
        });
    }
    require_s2(x1.space())?;
    let theta = geodesic_distance(x1, x2)?;
    let integrand = move |r: f64| {
        (0.5 * (1.0 - r.cos()) - cap_intersection_s2(theta, r)) * xi.density(r)
    };
    Ok(quad::integrate_split(
        &integrand,
        0.0,
        PI,
        &[0.5 * theta, PI - 0.5 * theta],
        1e-10,
        1e-10,
    )?
    .value)
}

/// Discrepancy kernel for an arbitrary radial measure on `S^2`, by
/// quadrature of `int (mu(B(x1,r) cap B(x2,r)) - v(r)^2) dxi(r)`.
pub fn discrepancy_kernel_xi_s2(xi: &RadialMeasure, x1: &Point, x2: &Point) -> Result<f64> {
    if x1.space() != x2.space() {
        return Err(Error::SpaceMismatch {
            left: x1.space(),
            right: x2.space(),
        });
    }
    require_s2(x1.space())?;
    let theta = geodesic_distance(x1, x2)?;
    let integrand = move |r: f64| {
        let v = 0.5 * (1.0 - r.cos());
        (cap_intersection_s2(theta, r) - v * v) * xi.density(r)
    };
    Ok(quad::integrate_split(
        &integrand,
        0.0,
        PI,
        &[0.5 * theta, PI - 0.5 * theta],
        1e-10,
        1e-10,
    )?
    .value)
}
