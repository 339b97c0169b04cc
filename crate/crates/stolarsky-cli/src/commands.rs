//! Report builders for the subcommands.
//!
//! Every report embeds its full configuration (command, space, seed, sample
//! counts, tolerance overrides), so a run can be reproduced from its output
//! alone. JSON numbers carry 17 significant digits.

use crate::json::{obj, Json};
use crate::{CliError, CommandOutput};
use std::collections::BTreeMap;
use stolarsky::csv::{point_coordinates, write_point_set};
use stolarsky::invariance::{
    mc_discrepancy, quadratic_discrepancy, sum_pairwise_chordal,
};
use stolarsky::jacobi::{gamma_from_equation, ChordalSeries, SdSeries};
use stolarsky::optimize::{
    deficit, local_search_outcome, scaling_experiment, OptimizeConfig,
};
use stolarsky::spaces::{
    chordal_distance, gamma_const, geodesic_distance, mean_chordal, mean_sd_metric,
    mean_sd_metric_closed,
};
use stolarsky::{PointSet, SpaceId};

fn tolerances_json(tolerances: &BTreeMap<String, f64>) -> Json {
    Json::Obj(
        tolerances
            .iter()
            .map(|(k, v)| (k.clone(), Json::Num(*v)))
            .collect(),
    )
}

fn config_json(
    command: &str,
    space: Option<SpaceId>,
    fields: Vec<(&str, Json)>,
    tolerances: &BTreeMap<String, f64>,
) -> Json {
    let mut all = vec![("command", Json::Str(command.to_string()))];
    if let Some(space) = space {
        all.push(("space", Json::Str(space.to_string())));
    }
    all.extend(fields);
    all.push(("tolerances", tolerances_json(tolerances)));
    obj(all)
}

struct Gate {
    name: &'static str,
    value: f64,
    threshold: f64,
}

impl Gate {
    fn passed(&self) -> bool {
        self.value <= self.threshold
    }
    fn json(&self) -> Json {
        obj(vec![
            ("name", Json::Str(self.name.to_string())),
            ("value", Json::Num(self.value)),
            ("threshold", Json::Num(self.threshold)),
            ("passed", Json::Bool(self.passed())),
        ])
    }
}

fn finish(config: Json, results: Json, gates: Vec<Gate>) -> CommandOutput {
    let passed = gates.iter().all(Gate::passed);
    let failing: Vec<&str> = gates
        .iter()
        .filter(|g| !g.passed())
        .map(|g| g.name)
        .collect();
    let doc = obj(vec![
        ("config", config),
        ("results", results),
        ("gates", Json::Arr(gates.iter().map(Gate::json).collect())),
        ("passed", Json::Bool(passed)),
    ]);
    if !passed {
        eprintln!("gate failure: {}", failing.join(", "));
    }
    CommandOutput {
        text: doc.render(),
        passed,
    }
}

/// `gamma`: exact constants plus the degree-by-degree recovery of gamma from
/// the coefficient identity (quadrature route), with its worst deviation.
pub fn gamma(
    space: SpaceId,
    tolerances: &BTreeMap<String, f64>,
) -> Result<CommandOutput, CliError> {
    let gamma = gamma_const(space);
    let mut by_degree = Vec::new();
    let mut max_rel_dev: f64 = 0.0;
    for l in 1..=5 {
        let value = gamma_from_equation(space, l)?;
        max_rel_dev = max_rel_dev.max(((value - gamma) / gamma).abs());
        by_degree.push(Json::Num(value));
    }
    let results = obj(vec![
        ("gamma", Json::Num(gamma)),
        ("mean_tau", Json::Num(mean_chordal(space))),
        ("mean_sd_quadrature", Json::Num(mean_sd_metric(space))),
        ("mean_sd_closed", Json::Num(mean_sd_metric_closed(space))),
        ("gamma_from_equation", Json::Arr(by_degree)),
        ("gamma_equation_max_rel_dev", Json::Num(max_rel_dev)),
    ]);
    let config = config_json("gamma", Some(space), vec![], tolerances);
    Ok(finish(config, results, vec![]))
}

/// `verify`: closed-form, Monte Carlo, and series legs of the invariance
/// principle on a random point set.
pub fn verify(
    space: SpaceId,
    n: usize,
    seed: u64,
    samples: usize,
    trunc_l: usize,
    tolerances: &BTreeMap<String, f64>,
) -> Result<CommandOutput, CliError> {
    let residual_rel = tolerances.get("residual_rel").copied().unwrap_or(1e-9);
    let series_abs = tolerances.get("series_abs").copied().unwrap_or(1e-3);
    let sigma_mult = tolerances.get("sigma").copied().unwrap_or(3.0);

    let set = if space.supports_uniform_sampling() {
        PointSet::random_uniform(space, n, seed)?
    } else {
        PointSet::random_octonionic(n, seed)?
    };
    let gamma = gamma_const(space);
    let nf = n as f64;
    let scale = mean_chordal(space) * nf * nf;

    // Closed-form leg.
    let tau = sum_pairwise_chordal(&set);
    let lambda = quadratic_discrepancy(&set);
    let residual_closed = gamma * lambda + tau - scale;
    let rel_closed = residual_closed.abs() / scale;
    let mut gates = vec![Gate {
        name: "closed_residual",
        value: rel_closed,
        threshold: residual_rel,
    }];

    // Monte Carlo leg (skipped where uniform sampling is unavailable).
    let mc_json;
    if space.supports_uniform_sampling() {
        let estimate = mc_discrepancy(&set, samples, seed)?;
        let residual_mc = gamma * estimate.value + tau - scale;
        let sigma = gamma * estimate.std_error;
        gates.push(Gate {
            name: "mc_residual",
            value: residual_mc.abs(),
            threshold: sigma_mult * sigma,
        });
        mc_json = obj(vec![
            ("lambda", Json::Num(estimate.value)),
            ("std_error", Json::Num(estimate.std_error)),
            ("residual", Json::Num(residual_mc)),
            ("gate_width", Json::Num(sigma_mult * sigma)),
        ]);
    } else {
        mc_json = Json::Str("skipped: uniform sampling unsupported on this space".to_string());
    }

    // Series leg: max deviation of gamma * sd_series(theta) from tau over
    // the pairs of the set.
    let series = SdSeries::new(space, trunc_l)?;
    let mut series_dev: f64 = 0.0;
    let points = set.points();
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let theta = geodesic_distance(&points[i], &points[j])?;
            let tau_ij = chordal_distance(&points[i], &points[j])?;
            series_dev = series_dev.max((gamma * series.eval(theta) - tau_ij).abs());
        }
    }
    gates.push(Gate {
        name: "series_deviation",
        value: series_dev,
        threshold: series_abs,
    });

    let results = obj(vec![
        ("tau_sum", Json::Num(tau)),
        ("lambda_closed", Json::Num(lambda)),
        ("mean_tau_n_sq", Json::Num(scale)),
        ("residual_closed", Json::Num(residual_closed)),
        ("residual_closed_rel", Json::Num(rel_closed)),
        ("mc", mc_json),
        ("series_max_deviation", Json::Num(series_dev)),
        (
            "series_tail_bound",
            Json::Num(series.truncation().tail_bound),
        ),
    ]);
    let config = config_json(
        "verify",
        Some(space),
        vec![
            ("n", Json::Int(n as i64)),
            ("seed", Json::Int(seed as i64)),
            ("samples", Json::Int(samples as i64)),
            ("trunc_l", Json::Int(trunc_l as i64)),
        ],
        tolerances,
    );
    Ok(finish(config, results, gates))
}

/// `discrepancy`: the functionals of one point set, optionally with a Monte
/// Carlo estimate.
pub fn discrepancy(
    set: &PointSet,
    samples: usize,
    seed: u64,
    tolerances: &BTreeMap<String, f64>,
) -> Result<CommandOutput, CliError> {
    let space = set.space();
    let n = set.len() as f64;
    let tau = sum_pairwise_chordal(set);
    let lambda = quadratic_discrepancy(set);
    let scale = mean_chordal(space) * n * n;
    let residual = gamma_const(space) * lambda + tau - scale;
    let mc_json = if samples > 0 {
        let estimate = mc_discrepancy(set, samples, seed)?;
        obj(vec![
            ("lambda", Json::Num(estimate.value)),
            ("std_error", Json::Num(estimate.std_error)),
            (
                "residual",
                Json::Num(gamma_const(space) * estimate.value + tau - scale),
            ),
        ])
    } else {
        Json::Null
    };
    let results = obj(vec![
        ("n", Json::Int(set.len() as i64)),
        ("tau_sum", Json::Num(tau)),
        ("lambda_closed", Json::Num(lambda)),
        ("deficit", Json::Num(deficit(set))),
        ("mean_tau", Json::Num(mean_chordal(space))),
        ("gamma", Json::Num(gamma_const(space))),
        ("residual_closed", Json::Num(residual)),
        ("residual_closed_rel", Json::Num(residual.abs() / scale)),
        ("mc", mc_json),
    ]);
    let config = config_json(
        "discrepancy",
        Some(space),
        vec![
            ("seed", Json::Int(seed as i64)),
            ("samples", Json::Int(samples as i64)),
        ],
        tolerances,
    );
    Ok(finish(config, results, vec![]))
}

/// `optimize`: single point count -> optimized configuration (JSON report or
/// the point set itself as CSV); three or more -> scaling experiment.
pub fn optimize(
    space: SpaceId,
    counts: &[usize],
    seed: u64,
    iterations: usize,
    restarts: usize,
    csv: bool,
    tolerances: &BTreeMap<String, f64>,
) -> Result<CommandOutput, CliError> {
    let mut cfg = OptimizeConfig::new(counts[0], seed);
    cfg.iterations = iterations;
    cfg.restarts = restarts;

    let config = config_json(
        "optimize",
        Some(space),
        vec![
            (
                "n",
                Json::Arr(counts.iter().map(|&n| Json::Int(n as i64)).collect()),
            ),
            ("seed", Json::Int(seed as i64)),
            ("iterations", Json::Int(iterations as i64)),
            ("restarts", Json::Int(restarts as i64)),
        ],
        tolerances,
    );

    if counts.len() < 3 {
        // Plain optimization at each requested count.
        let mut runs = Vec::new();
        let mut last_set = None;
        for &n in counts {
            let mut per_n = cfg.clone();
            per_n.n_points = n;
            let outcome = local_search_outcome(space, &per_n)?;
            let df = deficit(&outcome.set);
            let dual = gamma_const(space) * quadratic_discrepancy(&outcome.set);
            runs.push(obj(vec![
                ("n", Json::Int(n as i64)),
                ("initial_tau", Json::Num(outcome.initial_tau)),
                ("final_tau", Json::Num(outcome.final_tau)),
                ("deficit", Json::Num(df)),
                ("gamma_lambda", Json::Num(dual)),
                (
                    "points",
                    Json::Arr(
                        outcome
                            .set
                            .points()
                            .iter()
                            .map(|p| {
                                Json::Arr(
                                    point_coordinates(p).into_iter().map(Json::Num).collect(),
                                )
                            })
                            .collect(),
                    ),
                ),
            ]));
            last_set = Some(outcome.set);
        }
        if csv {
            let set = last_set.expect("at least one run");
            let comments = vec![format!(
                "stolarsky optimize --space {space} --n {} --seed {seed} --iterations {iterations} --restarts {restarts}",
                counts.last().expect("non-empty")
            )];
            return Ok(CommandOutput {
                text: write_point_set(&set, &comments),
                passed: true,
            });
        }
        let results = obj(vec![("runs", Json::Arr(runs))]);
        return Ok(finish(config, results, vec![]));
    }

    let report = scaling_experiment(space, counts, &cfg)?;
    let gates = vec![Gate {
        name: "deficit_duality",
        value: report.duality_rel_dev,
        threshold: 1e-9,
    }];
    let results = obj(vec![
        (
            "ns",
            Json::Arr(report.ns.iter().map(|&n| Json::Int(n as i64)).collect()),
        ),
        (
            "deficits",
            Json::Arr(report.deficits.iter().map(|&d| Json::Num(d)).collect()),
        ),
        ("fitted_exponent", Json::Num(report.fitted_exponent)),
        ("target_exponent", Json::Num(report.target_exponent)),
        ("duality_rel_dev", Json::Num(report.duality_rel_dev)),
    ]);
    Ok(finish(config, results, gates))
}

/// `expand`: series values against closed forms on a uniform theta grid.
pub fn expand(
    space: SpaceId,
    grid: usize,
    trunc_l: usize,
    csv: bool,
    tolerances: &BTreeMap<String, f64>,
) -> Result<CommandOutput, CliError> {
    if grid < 2 {
        return Err(CliError::Usage("expand needs a grid of at least 2".into()));
    }
    let chordal = ChordalSeries::new(space, trunc_l)?;
    let sd = SdSeries::new(space, trunc_l)?;
    let gamma = gamma_const(space);
    let mut rows = Vec::with_capacity(grid);
    for k in 0..grid {
        let theta = std::f64::consts::PI * k as f64 / (grid - 1) as f64;
        let tau_closed = (0.5 * theta).sin();
        rows.push([
            theta,
            chordal.eval(theta),
            sd.eval(theta),
            tau_closed,
            tau_closed / gamma,
        ]);
    }
    const COLUMNS: [&str; 5] = [
        "theta",
        "tau_series",
        "sd_series",
        "tau_closed",
        "sd_closed",
    ];
    if csv {
        let mut text = String::new();
        text.push_str(&COLUMNS.join(","));
        text.push('\n');
        for row in &rows {
            let fields: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
            text.push_str(&fields.join(","));
            text.push('\n');
        }
        return Ok(CommandOutput { text, passed: true });
    }
    let results = obj(vec![
        (
            "columns",
            Json::Arr(
                COLUMNS
                    .iter()
                    .map(|c| Json::Str(c.to_string()))
                    .collect(),
            ),
        ),
        (
            "rows",
            Json::Arr(
                rows.iter()
                    .map(|row| Json::Arr(row.iter().map(|&x| Json::Num(x)).collect()))
                    .collect(),
            ),
        ),
        (
            "chordal_tail_bound",
            Json::Num(chordal.truncation().tail_bound),
        ),
        ("sd_tail_bound", Json::Num(sd.truncation().tail_bound)),
    ]);
    let config = config_json(
        "expand",
        Some(space),
        vec![
            ("n", Json::Int(grid as i64)),
            ("trunc_l", Json::Int(trunc_l as i64)),
        ],
        tolerances,
    );
    Ok(finish(config, results, vec![]))
}

/// `sample`: a reproducible point set (CSV by default).
pub fn sample(
    space: SpaceId,
    n: usize,
    seed: u64,
    csv: bool,
) -> Result<CommandOutput, CliError> {
    let set = if space.supports_uniform_sampling() {
        PointSet::random_uniform(space, n, seed)?
    } else {
        PointSet::random_octonionic(n, seed)?
    };
    if csv {
        let comments = vec![
            format!("stolarsky sample --space {space} --n {n} --seed {seed}"),
            if space.supports_uniform_sampling() {
                "law: invariant (uniform) measure".to_string()
            } else {
                "law: valid-point generator (NOT uniform; OP2 has no uniform sampler)"
                    .to_string()
            },
        ];
        return Ok(CommandOutput {
            text: write_point_set(&set, &comments),
            passed: true,
        });
    }
    let results = obj(vec![(
        "points",
        Json::Arr(
            set.points()
                .iter()
                .map(|p| Json::Arr(point_coordinates(p).into_iter().map(Json::Num).collect()))
                .collect(),
        ),
    )]);
    let config = config_json(
        "sample",
        Some(space),
        vec![
            ("n", Json::Int(n as i64)),
            ("seed", Json::Int(seed as i64)),
        ],
        &BTreeMap::new(),
    );
    Ok(finish(config, results, vec![]))
}
