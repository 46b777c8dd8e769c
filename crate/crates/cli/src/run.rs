//! Scenario dispatch.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::json;

use semchan_core::confirmation::{
    confirmation_from_channel, confirmation_from_counts, likelihood_ratios, optimal_disbelief,
    predict_with_belief, LikelihoodRatio, TestChannel, TestLabel,
};
use semchan_core::matching::{
    abstention_boundary, cm_iterate, gaussian_observation_channel, Partition,
};
use semchan_core::mixture::{cm_em_run, mixture_joint, predicted_mixture};
use semchan_core::prob::joint_entropy;
use semchan_core::semantic::{bayes3_forward, bayes3_inverse, logical_probability};
use semchan_core::{Distribution, ParametricTruth, Support};

use crate::config::{
    mixture_params, CmSpec, Comparison, Expectation, Origin, ScenarioConfig, ScenarioKind,
};
use crate::error::CliError;
use crate::output::{fmt_sig, write_atomic, Table, TraceFormat};

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    pub format: TraceFormat,
    /// Overrides the iteration cap of iterative scenarios.
    pub max_iters: Option<usize>,
    /// Overrides the stopping divergence of mixture scenarios.
    pub tol: Option<f64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            out_dir: PathBuf::from("out"),
            format: TraceFormat::Csv,
            max_iters: None,
            tol: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub quantity: String,
    pub expected: f64,
    pub tol: f64,
    pub comparison: Comparison,
    pub origin: Origin,
    pub actual: Option<f64>,
    pub pass: bool,
}

impl Check {
    fn evaluate(e: &Expectation, quantities: &BTreeMap<String, f64>) -> Self {
        let actual = quantities.get(&e.quantity).copied();
        let pass = actual.is_some_and(|a| match e.comparison {
            Comparison::Approx => (a - e.value).abs() <= e.tol,
            Comparison::AtMost => a <= e.value + e.tol,
        });
        Check {
            quantity: e.quantity.clone(),
            expected: e.value,
            tol: e.tol,
            comparison: e.comparison,
            origin: e.origin,
            actual,
            pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub id: String,
    pub kind: String,
    pub quantities: BTreeMap<String, f64>,
    pub details: serde_json::Value,
    pub checks: Vec<Check>,
    /// Present when the scenario carries published reference values.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
    #[serde(skip)]
    pub files: Vec<PathBuf>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl RunReport {
    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

struct Outcome {
    quantities: BTreeMap<String, f64>,
    details: serde_json::Value,
    trace: Option<Table>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            quantities: BTreeMap::new(),
            details: serde_json::Value::Null,
            trace: None,
        }
    }

    fn set(&mut self, key: impl Into<String>, v: f64) {
        self.quantities.insert(key.into(), v);
    }
}

/// Runs one scenario and writes `<id>.result.json` (and `<id>.trace.*` when
/// the scenario has a trace) into `opts.out_dir`.
pub fn run_scenario(config: &ScenarioConfig, opts: &RunOptions) -> Result<RunReport, CliError> {
    config.validate()?;
    let started = Instant::now();
    let id = config.id.as_str();
    let outcome = match &config.kind {
        ScenarioKind::Bayes3Demo {
            support,
            prior,
            truth,
        } => bayes3_demo(id, &support.build()?, prior, truth)?,
        ScenarioKind::GpsDemo {
            support,
            prior,
            reading,
            stddev,
        } => gps_demo(id, &support.build()?, prior, *reading, *stddev)?,
        ScenarioKind::OldAge {
            support,
            truth,
            prior_rate,
            prior_centers,
        } => old_age(id, &support.build()?, truth, *prior_rate, prior_centers)?,
        ScenarioKind::CmTest(cm) | ScenarioKind::CmEstimate(cm) => partition(id, cm, opts)?,
        ScenarioKind::CmEm {
            support,
            real,
            start,
            settings,
            snapshot_iteration,
        } => {
            let mut settings = *settings;
            if let Some(m) = opts.max_iters {
                settings.max_iters = m;
            }
            if let Some(t) = opts.tol {
                settings.stop_divergence = t;
            }
            mixture(
                id,
                &support.build()?,
                real,
                start,
                &settings,
                *snapshot_iteration,
            )?
        }
        ScenarioKind::Confirm { counts, tests } => confirm(id, counts, tests)?,
    };

    let checks: Vec<Check> = config
        .expectations
        .iter()
        .map(|e| Check::evaluate(e, &outcome.quantities))
        .collect();
    let pass = config
        .expectations
        .iter()
        .any(|e| e.origin == Origin::Published)
        .then(|| checks.iter().all(|c| c.pass));
    let mut report = RunReport {
        id: config.id.clone(),
        kind: config.kind.name().to_string(),
        quantities: outcome.quantities,
        details: outcome.details,
        checks,
        pass,
        files: Vec::new(),
        wall_time: Duration::ZERO,
    };

    let mut result = serde_json::to_vec_pretty(&report).expect("report serializes");
    result.push(b'\n');
    report.files.push(write_atomic(
        &opts.out_dir,
        &format!("{id}.result.json"),
        &result,
    )?);
    if let Some(trace) = &outcome.trace {
        let name = format!("{id}.trace.{}", opts.format.extension());
        report.files.push(write_atomic(
            &opts.out_dir,
            &name,
            &trace.render(opts.format),
        )?);
    }
    report.wall_time = started.elapsed();
    Ok(report)
}

/// Runs several scenarios concurrently; results come back in input order.
pub fn run_many(configs: &[ScenarioConfig], opts: &RunOptions) -> Vec<Result<RunReport, CliError>> {
    std::thread::scope(|s| {
        let handles: Vec<_> = configs
            .iter()
            .map(|c| s.spawn(move || run_scenario(c, opts)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scenario thread panicked"))
            .collect()
    })
}

fn scenario_err(id: &str) -> impl Fn(semchan_core::Error) -> CliError + '_ {
    move |e| CliError::scenario(id, e)
}

fn distribution_table(
    support: &Support,
    prior: &Distribution,
    truth: &[f64],
    post: &Distribution,
) -> Table {
    let mut t = Table::new(vec![
        "x".into(),
        "prior".into(),
        "truth".into(),
        "posterior".into(),
    ]);
    for (i, &x) in support.points().iter().enumerate() {
        t.push(vec![x, prior.probs()[i], truth[i], post.probs()[i]]);
    }
    t
}

fn bayes3_demo(
    id: &str,
    support: &Support,
    prior: &crate::config::DistSpec,
    truth: &ParametricTruth,
) -> Result<Outcome, CliError> {
    let err = scenario_err(id);
    let prior = prior.build(support)?;
    let truth = truth
        .evaluate(support)
        .map_err(|e| CliError::Config(format!("truth: {e}")))?;
    let post = bayes3_forward(&truth, &prior).map_err(&err)?;
    let (back, lp_back) = bayes3_inverse(&post, &prior).map_err(&err)?;
    let max = truth.max();
    let round_trip = back
        .values()
        .iter()
        .zip(truth.values())
        .map(|(a, b)| (a - b / max).abs())
        .fold(0.0, f64::max);
    let mut o = Outcome::new();
    let lp = logical_probability(&truth, &prior).map_err(&err)?;
    o.set("logical_probability", lp);
    o.set("recovered_logical_probability", lp_back);
    o.set("round_trip_error", round_trip);
    o.set("posterior_mode", support.points()[post.argmax()]);
    o.set("posterior_mean", post.mean());
    o.details = json!({ "posterior": post.probs() });
    o.trace = Some(distribution_table(support, &prior, truth.values(), &post));
    Ok(o)
}

fn gps_demo(
    id: &str,
    support: &Support,
    prior: &crate::config::DistSpec,
    reading: f64,
    stddev: f64,
) -> Result<Outcome, CliError> {
    let err = scenario_err(id);
    let prior = prior.build(support)?;
    let truth = ParametricTruth::Gaussian {
        center: reading,
        stddev,
    }
    .evaluate(support)
    .map_err(|e| CliError::Config(format!("reading: {e}")))?;
    let post = bayes3_forward(&truth, &prior).map_err(&err)?;
    let mut o = Outcome::new();
    o.set("estimate", support.points()[post.argmax()]);
    o.set("posterior_mean", post.mean());
    o.set(
        "logical_probability",
        logical_probability(&truth, &prior).map_err(&err)?,
    );
    o.details = json!({ "posterior": post.probs() });
    o.trace = Some(distribution_table(support, &prior, truth.values(), &post));
    Ok(o)
}

fn old_age(
    id: &str,
    support: &Support,
    truth: &ParametricTruth,
    rate: f64,
    centers: &[f64],
) -> Result<Outcome, CliError> {
    let err = scenario_err(id);
    let truth = truth
        .evaluate(support)
        .map_err(|e| CliError::Config(format!("truth: {e}")))?;
    let mut o = Outcome::new();
    let mut table = Table::new(vec![
        "c".into(),
        "boundary".into(),
        "logical_probability".into(),
    ]);
    let mut rows = Vec::new();
    for &c in centers {
        let prior = Distribution::from_weights(
            support.clone(),
            support
                .points()
                .iter()
                .map(|x| 1.0 - 1.0 / (1.0 + (-rate * (x - c)).exp()))
                .collect(),
        )
        .map_err(|e| CliError::Config(format!("prior at c = {c}: {e}")))?;
        let lp = logical_probability(&truth, &prior).map_err(&err)?;
        let boundary = abstention_boundary(&truth, &prior).map_err(&err)?;
        let key = fmt_sig(c);
        if let Some(b) = boundary {
            o.set(format!("boundary_at_{key}"), b);
        }
        o.set(format!("logical_probability_at_{key}"), lp);
        table.push(vec![c, boundary.unwrap_or(f64::NAN), lp]);
        rows.push(json!({ "c": c, "boundary": boundary, "logical_probability": lp }));
    }
    o.details = json!({ "priors": rows });
    o.trace = Some(table);
    Ok(o)
}

fn partition(id: &str, cm: &CmSpec, opts: &RunOptions) -> Result<Outcome, CliError> {
    let err = scenario_err(id);
    let grid = cm.observation.build()?;
    let classes: Vec<(f64, f64)> = cm.classes.iter().map(|c| (c.center, c.stddev)).collect();
    let cond = gaussian_observation_channel(&classes, &grid)
        .map_err(|e| CliError::Config(format!("classes: {e}")))?;
    let prior = Distribution::new(
        Support::indices(cm.prior.len()).map_err(|e| CliError::Config(e.to_string()))?,
        cm.prior.clone(),
    )
    .map_err(|e| CliError::Config(format!("prior: {e}")))?;
    let start = Partition::new(grid, cm.start.clone())
        .map_err(|e| CliError::Config(format!("start: {e}")))?;
    let max_iters = opts.max_iters.unwrap_or(cm.max_iters);
    let (final_partition, trace) = cm_iterate(&cond, &prior, &start, max_iters).map_err(&err)?;

    let n_points = cm.start.len();
    let mut header = vec!["iter".to_string()];
    header.extend((1..=n_points).map(|k| format!("z_{k}")));
    header.extend(["G_bits".to_string(), "R_bits".to_string()]);
    let mut table = Table::new(header);
    let mut o = Outcome::new();
    for r in &trace.records {
        let mut row = vec![r.iteration as f64];
        row.extend((0..n_points).map(|k| r.dividing_points.get(k).copied().unwrap_or(f64::NAN)));
        row.extend([r.objective_bits, r.shannon_bits]);
        table.push(row);
        if r.iteration > 0 {
            for (k, z) in r.dividing_points.iter().enumerate() {
                o.set(format!("step{}.dividing_point_{}", r.iteration, k + 1), *z);
            }
        }
    }
    for (k, z) in final_partition.dividing_points().iter().enumerate() {
        o.set(format!("dividing_point_{}", k + 1), *z);
    }
    let last = trace.records.last().expect("trace has the start record");
    o.set("iterations", trace.iterations() as f64);
    o.set("partition_changes", trace.partition_changes() as f64);
    o.set("objective_bits", last.objective_bits);
    o.set("shannon_bits", last.shannon_bits);
    o.set("diagnostics", trace.diagnostics.len() as f64);
    o.details = json!({
        "dividing_points": final_partition.dividing_points(),
        "region_labels": final_partition.region_labels(),
        "converged": trace.converged,
        "diagnostics": trace.diagnostics,
    });
    o.trace = Some(table);
    Ok(o)
}

fn mixture(
    id: &str,
    support: &Support,
    real: &[crate::config::ComponentSpec],
    start: &[crate::config::ComponentSpec],
    settings: &semchan_core::mixture::CmEmSettings,
    snapshot: usize,
) -> Result<Outcome, CliError> {
    let err = scenario_err(id);
    let real = mixture_params(real)?;
    let start = mixture_params(start)?;
    let data = predicted_mixture(&real, support).map_err(&err)?;
    let (fitted, trace) = cm_em_run(&start, &data, settings).map_err(&err)?;
    let n = start.len();

    let mut header = vec!["iter".to_string()];
    for prefix in ["c", "d", "w"] {
        header.extend((1..=n).map(|j| format!("{prefix}_{j}")));
    }
    header.extend(["R_bits", "G_bits", "KL_bits", "inner_iters"].map(String::from));
    let mut table = Table::new(header);
    let mut residual: f64 = 0.0;
    for r in &trace.records {
        let mut row = vec![r.iteration as f64];
        row.extend(r.params.centers());
        row.extend(r.params.stddevs());
        row.extend(r.params.weights());
        row.extend([r.r_bits, r.g_bits, r.divergence_bits, r.inner_iters as f64]);
        table.push(row);
        residual = residual.max((r.r_bits - r.g_bits - r.divergence_bits).abs());
    }

    let mut o = Outcome::new();
    let put_params = |o: &mut Outcome, prefix: &str, p: &semchan_core::mixture::MixtureParams| {
        for j in 0..p.len() {
            o.set(format!("{prefix}.center_{}", j + 1), p.centers()[j]);
            o.set(format!("{prefix}.stddev_{}", j + 1), p.stddevs()[j]);
            o.set(format!("{prefix}.weight_{}", j + 1), p.weights()[j]);
        }
    };
    if let Some(r) = trace.records.get(snapshot) {
        put_params(&mut o, "snapshot", &r.params);
    }
    put_params(&mut o, "final", &fitted);
    let last = trace.records.last().expect("start record");
    o.set("iterations", trace.iterations() as f64);
    o.set("final.divergence_bits", last.divergence_bits);
    o.set("max_identity_residual", residual);
    o.set(
        "divergence_increases",
        trace.divergence_increases(1e-6).len() as f64,
    );
    o.set(
        "joint_entropy_bits",
        joint_entropy(&mixture_joint(&real, support).map_err(&err)?),
    );
    if let Some(ce) = trace.records.get(1).and_then(|r| r.cross_entropy_bits) {
        o.set("first_cross_entropy_bits", ce);
    }
    o.details = json!({
        "snapshot_iteration": snapshot,
        "final": fitted,
        "settings": settings,
        "inner_loops_converged": trace.records.iter().all(|r| r.inner_converged),
    });
    o.trace = Some(table);
    Ok(o)
}

fn lr_value(lr: LikelihoodRatio) -> f64 {
    lr.value()
}

fn confirm(
    id: &str,
    counts: &[crate::config::CountsSpec],
    tests: &[crate::config::TestSpec],
) -> Result<Outcome, CliError> {
    let err = scenario_err(id);
    let mut o = Outcome::new();
    let mut count_details = Vec::new();
    for (k, c) in counts.iter().enumerate() {
        let r = confirmation_from_counts(c.np, c.nc).map_err(&err)?;
        let key = format!("counts_{}", k + 1);
        o.set(format!("{key}.b_star"), r.b_star);
        o.set(format!("{key}.b_prime"), r.b_prime);
        o.set(format!("{key}.cl"), r.cl);
        if let LikelihoodRatio::Finite(v) = r.lr {
            o.set(format!("{key}.lr"), v);
        }
        count_details.push(json!({ "np": c.np, "nc": c.nc, "result": r }));
    }
    let mut test_details = Vec::new();
    for (k, t) in tests.iter().enumerate() {
        let report = test_report(t).map_err(|e| match e {
            TestError::Config(m) => CliError::Config(m),
            TestError::Core(e) => err(e),
        })?;
        let key = format!("test_{}", k + 1);
        for (name, v) in report.quantities() {
            if v.is_finite() {
                o.set(format!("{key}.{name}"), v);
            }
        }
        test_details.push(serde_json::to_value(&report).expect("serializes"));
    }
    o.details = json!({ "counts": count_details, "tests": test_details });
    Ok(o)
}

/// Confirmation summary of one test at a given prevalence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestReport {
    pub sensitivity: f64,
    pub specificity: f64,
    pub prevalence: f64,
    pub b1_prime: f64,
    pub b0_prime: f64,
    pub lr_plus: LikelihoodRatio,
    pub lr_minus: LikelihoodRatio,
    pub positive: semchan_core::confirmation::ConfirmationResult,
    pub negative: semchan_core::confirmation::ConfirmationResult,
    /// `P(infected | positive)`.
    pub post_positive: f64,
    /// `P(infected | negative)`.
    pub post_negative: f64,
}

impl TestReport {
    fn quantities(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("b1_prime", self.b1_prime),
            ("b0_prime", self.b0_prime),
            ("lr_plus", lr_value(self.lr_plus)),
            ("lr_minus", lr_value(self.lr_minus)),
            ("b_star_positive", self.positive.b_star),
            ("b_star_negative", self.negative.b_star),
            ("post_positive", self.post_positive),
            ("post_negative", self.post_negative),
        ]
    }
}

#[derive(Debug)]
pub enum TestError {
    Config(String),
    Core(semchan_core::Error),
}

impl From<semchan_core::Error> for TestError {
    fn from(e: semchan_core::Error) -> Self {
        TestError::Core(e)
    }
}

pub fn test_report(t: &crate::config::TestSpec) -> Result<TestReport, TestError> {
    let tc = TestChannel::new(t.sensitivity, t.specificity)
        .map_err(|e| TestError::Config(e.to_string()))?;
    if !(0.0..=1.0).contains(&t.prevalence) {
        return Err(TestError::Config(format!(
            "prevalence {} outside [0,1]",
            t.prevalence
        )));
    }
    let (b1, b0) = optimal_disbelief(&tc)?;
    let (lr_plus, lr_minus) = likelihood_ratios(&tc)?;
    let (positive, negative) = confirmation_from_channel(&tc)?;
    let prior = Distribution::new(Support::indices(2)?, vec![1.0 - t.prevalence, t.prevalence])?;
    // A misleading outcome has disbelief above 1; prediction then goes through
    // the channel itself.
    let predict = |label: TestLabel| -> Result<f64, TestError> {
        if b1 <= 1.0 && b0 <= 1.0 {
            Ok(predict_with_belief(b1, b0, &prior, label)?.probs()[1])
        } else {
            let (post, _) = semchan_core::prob::bayes2_posterior(
                &tc.to_shannon_channel(),
                &prior,
                label.index(),
            )?;
            Ok(post.probs()[1])
        }
    };
    Ok(TestReport {
        sensitivity: t.sensitivity,
        specificity: t.specificity,
        prevalence: t.prevalence,
        b1_prime: b1,
        b0_prime: b0,
        lr_plus,
        lr_minus,
        positive,
        negative,
        post_positive: predict(TestLabel::Positive)?,
        post_negative: predict(TestLabel::Negative)?,
    })
}
