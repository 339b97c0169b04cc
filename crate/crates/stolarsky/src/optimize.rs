//! Point-configuration optimization: maximize the pairwise chordal distance
//! sum (equivalently, minimize the ball discrepancy) by accept-only hill
//! climbing, plus empirical scaling experiments for the deficit
//! `<tau> N^2 - tau[D_N]`.

use crate::algebra::AlgebraElement;
use crate::invariance::{sum_pairwise_chordal, PointSet};
use crate::spaces::{mean_chordal, Family, Point, SpaceId};
use crate::stream::substream;
use crate::{Error, Result};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

/// Hill-climbing configuration.
///
/// One iteration perturbs a single point by Gaussian jitter of its
/// representative vector (scale `initial_step`, decaying by `step_decay`
/// after `stall_window` consecutive rejections) and keeps the move only if
/// the distance sum strictly increases. Restarts are independent and the
/// best result wins; everything is deterministic for a fixed seed.
#[derive(Debug, Clone)]
pub struct OptimizeConfig {
    pub n_points: usize,
    pub iterations: usize,
    pub initial_step: f64,
    pub step_decay: f64,
    pub stall_window: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl OptimizeConfig {
    pub fn new(n_points: usize, seed: u64) -> Self {
        Self {
            n_points,
            iterations: 50_000,
            initial_step: 0.5,
            step_decay: 0.5,
            stall_window: 50,
            restarts: 2,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_points < 2 {
            return Err(Error::InvalidArgument(
                "optimization needs at least 2 points".into(),
            ));
        }
        if self.iterations == 0 || self.restarts == 0 {
            return Err(Error::InvalidArgument(
                "iterations and restarts must be at least 1".into(),
            ));
        }
        if !(self.initial_step > 0.0) || !(0.0..1.0).contains(&self.step_decay) {
            return Err(Error::InvalidArgument(
                "need initial_step > 0 and step_decay in (0, 1)".into(),
            ));
        }
        Ok(())
    }
}

/// Result of a search: the configuration and the distance sums before and
/// after (accept-only moves guarantee `final_tau >= initial_tau`).
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub set: PointSet,
    pub initial_tau: f64,
    pub final_tau: f64,
}

/// Representative vectors: unit vectors in the ambient real space (spheres)
/// or in `F^{n+1}` (projective). Distances are cheap in this form.
enum Reps {
    Sphere(Vec<Vec<f64>>),
    Projective(Vec<Vec<AlgebraElement>>),
}

impl Reps {
    fn sample(space: SpaceId, n: usize, rng: &mut ChaCha8Rng) -> Self {
        match space.family() {
            Family::Sphere => Reps::Sphere(
                (0..n)
                    .map(|_| random_unit_real(space.dim() + 1, rng))
                    .collect(),
            ),
            _ => {
                let tag = space.algebra_tag().expect("projective, not OP2");
                Reps::Projective(
                    (0..n)
                        .map(|_| random_unit_algebra(tag, space.n() + 1, rng))
                        .collect(),
                )
            }
        }
    }

    fn tau(&self, i: usize, j: usize) -> f64 {
        match self {
            Reps::Sphere(v) => {
                let sq: f64 = v[i]
                    .iter()
                    .zip(&v[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                0.5 * sq.sqrt()
            }
            Reps::Projective(v) => tau_projective(&v[i], &v[j]),
        }
    }

    fn perturbed(&self, i: usize, sigma: f64, rng: &mut ChaCha8Rng) -> RepVector {
        match self {
            Reps::Sphere(v) => {
                let mut w: Vec<f64> = v[i]
                    .iter()
                    .map(|x| x + sigma * rng.sample::<f64, _>(StandardNormal))
                    .collect();
                normalize_real(&mut w);
                RepVector::Sphere(w)
            }
            Reps::Projective(v) => {
                let mut w: Vec<AlgebraElement> = v[i]
                    .iter()
                    .map(|c| {
                        let jitter =
                            AlgebraElement::sample_gaussian(c.tag(), rng).scale(sigma);
                        *c + jitter
                    })
                    .collect();
                normalize_algebra(&mut w);
                RepVector::Projective(w)
            }
        }
    }

    fn tau_against(&self, candidate: &RepVector, j: usize) -> f64 {
        match (self, candidate) {
            (Reps::Sphere(v), RepVector::Sphere(w)) => {
                let sq: f64 = w
                    .iter()
                    .zip(&v[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                0.5 * sq.sqrt()
            }
            (Reps::Projective(v), RepVector::Projective(w)) => tau_projective(w, &v[j]),
            _ => unreachable!("candidate kind matches"),
        }
    }

    fn replace(&mut self, i: usize, candidate: RepVector) {
        match (self, candidate) {
            (Reps::Sphere(v), RepVector::Sphere(w)) => v[i] = w,
            (Reps::Projective(v), RepVector::Projective(w)) => v[i] = w,
            _ => unreachable!("candidate kind matches"),
        }
    }

    fn to_point_set(&self, space: SpaceId) -> Result<PointSet> {
        let points: Result<Vec<Point>> = match self {
            Reps::Sphere(v) => v
                .iter()
                .map(|coords| {
                    let mut c = coords.clone();
                    normalize_real(&mut c);
                    Point::sphere(space, c)
                })
                .collect(),
            Reps::Projective(v) => v
                .iter()
                .map(|comps| {
                    let mut c = comps.clone();
                    normalize_algebra(&mut c);
                    Point::from_vector(space, &c)
                })
                .collect(),
        };
        PointSet::new(space, points?)
    }
}

enum RepVector {
    Sphere(Vec<f64>),
    Projective(Vec<AlgebraElement>),
}

fn normalize_real(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
}

fn normalize_algebra(v: &mut [AlgebraElement]) {
    let norm = v.iter().map(|c| c.norm_sq()).sum::<f64>().sqrt();
    for c in v.iter_mut() {
        *c = c.scale(1.0 / norm);
    }
}

fn random_unit_real(len: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..len).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            for x in v.iter_mut() {
                *x /= norm;
            }
            return v;
        }
    }
}

fn random_unit_algebra(
    tag: crate::algebra::AlgebraTag,
    len: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<AlgebraElement> {
    loop {
        let mut v: Vec<AlgebraElement> = (0..len)
            .map(|_| AlgebraElement::sample_gaussian(tag, rng))
            .collect();
        let norm = v.iter().map(|c| c.norm_sq()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            for c in v.iter_mut() {
                *c = c.scale(1.0 / norm);
            }
            return v;
        }
    }
}

/// `tau = sqrt(1 - |(a, b)|^2)` from representative vectors.
fn tau_projective(a: &[AlgebraElement], b: &[AlgebraElement]) -> f64 {
    let tag = a[0].tag();
    let mut inner = AlgebraElement::zero(tag);
    for (x, y) in a.iter().zip(b) {
        inner = inner + x.conj() * *y;
    }
    (1.0 - inner.norm_sq()).max(0.0).sqrt()
}

fn run_restart(space: SpaceId, cfg: &OptimizeConfig, stream: u64) -> (Reps, f64, f64) {
    let mut rng = substream(cfg.seed, stream);
    let n = cfg.n_points;
    let mut reps = Reps::sample(space, n, &mut rng);

    // Pairwise distances, kept incrementally.
    let mut dist = vec![0.0; n * n];
    let mut tau_total = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let t = reps.tau(i, j);
            dist[i * n + j] = t;
            dist[j * n + i] = t;
            tau_total += t;
        }
    }
    let initial_tau = 2.0 * tau_total;

    let mut sigma = cfg.initial_step;
    let mut stall = 0usize;
    let mut row = vec![0.0; n];
    for _ in 0..cfg.iterations {
        let i = rng.random_range(0..n);
        let candidate = reps.perturbed(i, sigma, &mut rng);
        let mut delta = 0.0;
        for (j, slot) in row.iter_mut().enumerate() {
            if j == i {
                *slot = 0.0;
                continue;
            }
            let t = reps.tau_against(&candidate, j);
            delta += t - dist[i * n + j];
            *slot = t;
        }
        if delta > 0.0 {
            reps.replace(i, candidate);
            for j in 0..n {
                if j != i {
                    dist[i * n + j] = row[j];
                    dist[j * n + i] = row[j];
                }
            }
            tau_total += delta;
            stall = 0;
        } else {
            stall += 1;
            if stall >= cfg.stall_window {
                sigma *= cfg.step_decay;
                stall = 0;
            }
        }
        debug_assert!(2.0 * tau_total >= initial_tau - 1e-9);
    }
    (reps, initial_tau, 2.0 * tau_total)
}

/// Maximize `tau[D_N]` by restarted hill climbing; returns the best
/// configuration together with its before/after distance sums.
pub fn local_search_outcome(space: SpaceId, cfg: &OptimizeConfig) -> Result<SearchOutcome> {
    cfg.validate()?;
    if !space.supports_uniform_sampling() {
        return Err(Error::Unsupported {
            space,
            operation: "configuration optimization",
        });
    }
    let runs: Vec<(Reps, f64, f64)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|k| run_restart(space, cfg, k as u64))
        .collect();
    let best = runs
        .into_iter()
        .enumerate()
        .max_by(|(ia, a), (ib, b)| {
            // Highest tau wins; ties go to the earliest restart.
            a.2.total_cmp(&b.2).then(ib.cmp(ia))
        })
        .expect("at least one restart");
    let (reps, initial_tau, final_tau) = best.1;
    Ok(SearchOutcome {
        set: reps.to_point_set(space)?,
        initial_tau,
        final_tau,
    })
}

/// Convenience wrapper returning only the optimized point set.
pub fn local_search(space: SpaceId, cfg: &OptimizeConfig) -> Result<PointSet> {
    Ok(local_search_outcome(space, cfg)?.set)
}

/// The distance-sum deficit `<tau> N^2 - tau[D]`, which equals
/// `gamma(Q) * lambda[D]`.
pub fn deficit(set: &PointSet) -> f64 {
    let n = set.len() as f64;
    mean_chordal(set.space()) * n * n - sum_pairwise_chordal(set)
}

/// Result of a scaling experiment: deficits of optimized configurations and
/// the least-squares exponent of deficit vs N, to compare with the sharp
/// order `1 - 1/d`.
#[derive(Debug, Clone)]
pub struct ScalingReport {
    pub ns: Vec<usize>,
    pub deficits: Vec<f64>,
    pub fitted_exponent: f64,
    pub target_exponent: f64,
    /// Largest relative deviation of `deficit` from `gamma * lambda` across
    /// the report points (the two are the same functional).
    pub duality_rel_dev: f64,
}

/// Optimize at every `N` in `ns` and fit `log(deficit)` against `log N`.
pub fn scaling_experiment(
    space: SpaceId,
    ns: &[usize],
    cfg: &OptimizeConfig,
) -> Result<ScalingReport> {
    {
        let mut distinct = ns.to_vec();
        distinct.dedup();
        if distinct.len() < 3 {
            return Err(Error::InvalidArgument(
                "a scaling fit needs at least 3 distinct point counts".into(),
            ));
        }
    }
    if ns.windows(2).any(|w| w[1] <= w[0]) || ns[0] < 4 {
        return Err(Error::InvalidArgument(
            "point counts must be strictly increasing and at least 4".into(),
        ));
    }
    let mut deficits = Vec::with_capacity(ns.len());
    let mut duality_rel_dev: f64 = 0.0;
    for (idx, &n) in ns.iter().enumerate() {
        let mut per_n = cfg.clone();
        per_n.n_points = n;
        // Separate stream block per N so runs stay independent.
        per_n.seed = cfg.seed.wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(idx as u64 + 1));
        let outcome = local_search_outcome(space, &per_n)?;
        let df = deficit(&outcome.set);
        let dual = crate::spaces::gamma_const(space)
            * crate::invariance::quadratic_discrepancy(&outcome.set);
        duality_rel_dev = duality_rel_dev.max(((df - dual) / df).abs());
        deficits.push(df);
    }
    // Least squares slope of ln(deficit) on ln(N).
    let logs: Vec<(f64, f64)> = ns
        .iter()
        .zip(&deficits)
        .map(|(&n, &df)| ((n as f64).ln(), df.ln()))
        .collect();
    let k = logs.len() as f64;
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    Ok(ScalingReport {
        ns: ns.to_vec(),
        deficits,
        fitted_exponent: sxy / sxx,
        target_exponent: 1.0 - 1.0 / space.dim() as f64,
        duality_rel_dev,
    })
}
