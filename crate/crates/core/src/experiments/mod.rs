//! Seeded Monte Carlo experiments over circuit ensembles.
//!
//! Trial `i` draws all of its randomness from `SeedPlan::new(master_seed, i)`,
//! trials run on a bounded rayon pool, and every reduction walks the records
//! in trial-index order. A report therefore depends only on its config, never
//! on the worker count or scheduling.

mod config;
mod report;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::bounds::{chebyshev_tail, guarantee, maxp_tail, Theorem};
use crate::ensembles::{sample_haar_orthogonal, sample_haar_unitary};
use crate::ensembles::{EnsembleSpec, GateEnsemble};
use crate::error::{Error, Result};
use crate::estimators::{
    collision_probability_exact, is_uniform_distribution, lxeb_test, max_output_probability,
    maxp_threshold, porter_thomas_histogram, sample_variance_over_outputs, Histogram,
    UNIFORM_TOL,
};
use crate::moments::{
    collision_mean, collision_variance, haar_moment, sample_variance_mean, variance_of_variance,
    ExactRational, Group, IntegerPartition,
};
use crate::seed::SeedPlan;
use crate::state::{run_circuit_with_limit, OutputDistribution};
use crate::sum::csum;

pub use crate::seed::derive_trial_seed;
pub use config::{ExperimentConfig, ExperimentKind, HistogramSettings, MomentSettings};
pub use report::{
    fmt_f64, read_trials_csv, Comparison, ExperimentReport, LadderRow, MomentRow, OracleValue,
    Summary, TrialRecord, TRIALS_CSV_HEADER,
};

/// Deviations of at least this many standard errors are flagged.
pub const FLAG_SIGMAS: f64 = 5.0;

/// Default collision ladder, in units of `1/d`.
pub const DEFAULT_DELTA_LADDER: [f64; 5] = [1.0, 2.0, 4.0, 8.0, 16.0];

/// Default histogram of `d·maxp/n`.
const MAXP_HISTOGRAM: HistogramSettings = HistogramSettings { bins: 20, max: 8.0 };

/// A report plus how long it took. Timing is kept out of the report so that
/// reports stay byte-identical across runs.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub report: ExperimentReport,
    pub wall_clock: Duration,
}

/// Validates `config` and dispatches on its experiment kind.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    match config.experiment {
        ExperimentKind::Collision | ExperimentKind::OrthogonalCollision => {
            run_collision_experiment(config)
        }
        ExperimentKind::Lxeb => run_lxeb_experiment(config),
        ExperimentKind::Maxp => run_maxp_experiment(config),
        ExperimentKind::MomentValidation => run_moment_validation(config),
        ExperimentKind::Variance => run_variance_experiment(config),
        ExperimentKind::CliffordUniformity => run_clifford_uniformity(config),
    }
}

pub fn run_experiment_timed(config: &ExperimentConfig) -> Result<RunOutcome> {
    let start = Instant::now();
    let report = run_experiment(config)?;
    Ok(RunOutcome {
        report,
        wall_clock: start.elapsed(),
    })
}

fn worker_count(config: &ExperimentConfig) -> usize {
    config
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Runs `f` for trial indices `0..count` on `workers` threads; results come
/// back in index order.
fn run_indexed<T, F>(workers: usize, count: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| (0..count).into_par_iter().map(&f).collect())
}

fn ensemble(config: &ExperimentConfig) -> Result<&EnsembleSpec> {
    config
        .ensemble
        .as_ref()
        .ok_or_else(|| Error::Config(format!("experiment {} needs an ensemble", config.experiment)))
}

fn check_capacity(n: usize, max_qubits: usize) -> Result<()> {
    if n > max_qubits || n >= 64 {
        return Err(Error::Capacity {
            n,
            max: max_qubits,
            bytes: (1u128 << n.min(127)) * 16,
        });
    }
    Ok(())
}

/// Orthogonal gates get orthogonal oracles; everything else is compared
/// against the unitary values.
pub fn oracle_group(kind: GateEnsemble) -> Group {
    match kind {
        GateEnsemble::HaarOrthogonal => Group::Orthogonal,
        _ => Group::Unitary,
    }
}

/// Output of one circuit trial.
struct CircuitTrial {
    record: TrialRecord,
    histogram: Option<Histogram>,
}

/// Builds, simulates and measures every trial of a circuit experiment.
/// `extra` fills the experiment-specific fields of each record.
fn run_circuit_trials<F>(config: &ExperimentConfig, extra: F) -> Result<(Vec<TrialRecord>, Option<Histogram>)>
where
    F: Fn(&OutputDistribution, &SeedPlan, &mut TrialRecord) -> Result<()> + Sync + Send,
{
    let spec = ensemble(config)?;
    check_capacity(spec.n, config.max_qubits)?;
    let pt = config.histogram.as_ref().filter(|_| config.experiment != ExperimentKind::Maxp);
    let trials = run_indexed(worker_count(config), config.trials, |i| {
        let plan = SeedPlan::new(config.master_seed, i);
        let circuit = spec.build(&plan)?;
        let dist = run_circuit_with_limit(&circuit, config.max_qubits)?.distribution();
        let mut record = TrialRecord {
            trial: i,
            seed: plan.trial_seed(),
            collision_prob: Some(collision_probability_exact(&dist)),
            max_prob: Some(max_output_probability(&dist)),
            sample_variance: Some(sample_variance_over_outputs(&dist)),
            lxeb_stat: None,
            pass: None,
        };
        extra(&dist, &plan, &mut record)?;
        let histogram = pt
            .map(|h| porter_thomas_histogram(std::slice::from_ref(&dist), h.bins, h.max))
            .transpose()?;
        Ok(CircuitTrial { record, histogram })
    })?;
    let mut pooled: Option<Histogram> = None;
    let mut records = Vec::with_capacity(trials.len());
    for t in trials {
        if let Some(h) = t.histogram {
            match &mut pooled {
                Some(acc) => acc.merge(&h)?,
                None => pooled = Some(h),
            }
        }
        records.push(t.record);
    }
    Ok((records, pooled))
}

/// Recomputes the per-column summaries from trial records. Applied to the
/// records parsed back from `trials.csv` it reproduces a report's aggregates
/// exactly.
pub fn aggregates_from_records(records: &[TrialRecord]) -> BTreeMap<String, Summary> {
    let columns: [(&str, fn(&TrialRecord) -> Option<f64>); 4] = [
        ("collision_prob", |r| r.collision_prob),
        ("max_prob", |r| r.max_prob),
        ("sample_variance", |r| r.sample_variance),
        ("lxeb_stat", |r| r.lxeb_stat),
    ];
    let mut out = BTreeMap::new();
    for (name, get) in columns {
        let values: Vec<f64> = records.iter().filter_map(get).collect();
        if !values.is_empty() {
            out.insert(name.to_string(), Summary::of(&values));
        }
    }
    out
}

/// Fraction of records whose `pass` flag is set, over records that have one.
pub fn pass_fraction(records: &[TrialRecord]) -> Option<f64> {
    let flags: Vec<bool> = records.iter().filter_map(|r| r.pass).collect();
    if flags.is_empty() {
        return None;
    }
    Some(flags.iter().filter(|&&p| p).count() as f64 / flags.len() as f64)
}

fn fraction_where(records: &[TrialRecord], pred: impl Fn(&TrialRecord) -> bool) -> f64 {
    records.iter().filter(|r| pred(r)).count() as f64 / records.len() as f64
}

/// Report skeleton with the oracles every circuit experiment carries.
fn circuit_report(config: &ExperimentConfig, records: Vec<TrialRecord>) -> Result<ExperimentReport> {
    let spec = ensemble(config)?;
    let n = spec.n;
    let d = 1u64 << n;
    let group = oracle_group(spec.kind);
    let mut oracles = BTreeMap::new();
    oracles.insert("collision_mean".into(), OracleValue::exact(&collision_mean(d, group)?));
    oracles.insert(
        "collision_variance".into(),
        OracleValue::exact(&collision_variance(d, group)?),
    );
    oracles.insert(
        "sample_variance_mean".into(),
        OracleValue::exact(&sample_variance_mean(d, group)?),
    );
    oracles.insert(
        "variance_of_variance".into(),
        OracleValue::exact(&variance_of_variance(d, group)?),
    );
    oracles.insert("maxp_threshold".into(), OracleValue::float(maxp_threshold(n)));
    oracles.insert("maxp_tail".into(), OracleValue::float(maxp_tail(n)));

    let mut notes = vec![format!(
        "oracle values are exact {group} Haar moments at d = 2^{n}; circuit ensembles only approach them with depth"
    )];
    if !spec.kind.is_random() {
        notes.push(format!(
            "the {} ensemble is deterministic: every trial yields the same distribution",
            spec.kind
        ));
    }
    Ok(ExperimentReport {
        experiment: config.experiment,
        config: config.clone(),
        dimension: Some(d),
        aggregates: aggregates_from_records(&records),
        fractions: BTreeMap::new(),
        oracles,
        guarantees: Vec::new(),
        comparisons: Vec::new(),
        ladder: Vec::new(),
        moments: Vec::new(),
        histogram: None,
        notes,
        records,
    })
}

fn oracle(report: &ExperimentReport, key: &str) -> f64 {
    report.oracles[key].value
}

fn compare(report: &mut ExperimentReport, column: &str, oracle_key: &str) {
    if let Some(s) = report.aggregates.get(column) {
        let c = Comparison::new(column, s, oracle(report, oracle_key));
        report.comparisons.push(c);
    }
}

/// Collision probabilities against the exact mean and variance, with the
/// deviation ladder `|Z − E Z| ≥ c/d` next to Chebyshev's `5/(d c²)`.
pub fn run_collision_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let (records, histogram) = run_circuit_trials(config, |_, _, _| Ok(()))?;
    let mut report = circuit_report(config, records)?;
    compare(&mut report, "collision_prob", "collision_mean");
    let d = report.dimension.unwrap_or(1) as f64;
    let mean = oracle(&report, "collision_mean");
    let ladder = config.delta_ladder.clone().unwrap_or_else(|| DEFAULT_DELTA_LADDER.to_vec());
    for c in ladder {
        if !(c > 0.0) {
            return Err(Error::Config(format!("delta ladder entry {c} must be positive")));
        }
        let delta = c / d;
        report.ladder.push(LadderRow {
            delta_units: c,
            observed_fraction: fraction_where(&report.records, |r| {
                (r.collision_prob.unwrap_or(mean) - mean).abs() >= delta
            }),
            chebyshev: chebyshev_tail(5.0 / (d * d * d), delta)?,
        });
    }
    if let (Some(s), true) = (report.aggregates.get("collision_prob"), report.records.len() > 1) {
        let ratio = s.variance / oracle(&report, "collision_variance");
        report.fractions.insert("variance_ratio".into(), ratio);
    }
    if let (ExperimentKind::OrthogonalCollision, Some(k)) = (config.experiment, config.k) {
        let n = ensemble(config)?.n;
        report.guarantees.push(guarantee(Theorem::Orthogonal, k as u64, n)?);
        annotate_guarantees(&mut report);
    }
    report.histogram = histogram;
    Ok(report)
}

/// Samples `k` outcomes per circuit from its exact distribution and applies
/// the LXEB test at threshold `b/2ⁿ`.
pub fn run_lxeb_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let k = config.k.ok_or_else(|| Error::Config("lxeb experiments need k".into()))?;
    let b = config.b;
    let (records, histogram) = run_circuit_trials(config, |dist, plan, rec| {
        let samples = dist.sample(k, &mut plan.sampling_stream())?;
        let r = lxeb_test(dist, &samples, b)?;
        rec.lxeb_stat = Some(r.statistic);
        rec.pass = Some(r.passed);
        Ok(())
    })?;
    let mut report = circuit_report(config, records)?;
    let n = ensemble(config)?.n;
    report
        .fractions
        .insert("pass_fraction".into(), pass_fraction(&report.records).unwrap_or(0.0));
    report
        .oracles
        .insert("lxeb_threshold".into(), OracleValue::float(b / (n as f64).exp2()));
    compare(&mut report, "lxeb_stat", "collision_mean");
    compare(&mut report, "collision_prob", "collision_mean");
    let theorems: &[Theorem] = match ensemble(config)?.kind {
        GateEnsemble::HaarOrthogonal => &[Theorem::Orthogonal],
        _ => &[Theorem::Lindepth, Theorem::EightDesign, Theorem::Polydepth],
    };
    for &theorem in theorems {
        report.guarantees.push(guarantee(theorem, k as u64, n)?);
    }
    annotate_guarantees(&mut report);
    if matches!(ensemble(config)?.kind, GateEnsemble::Identity) {
        report.notes.push(
            "identity circuits output a basis state, so the statistic is 1 and every trial passes trivially".into(),
        );
    }
    report.histogram = histogram;
    Ok(report)
}

/// Fraction of circuits whose largest output probability reaches `4n/2ⁿ`,
/// next to the `2/2ⁿ` tail bound, with a histogram of `d·maxp/n`.
pub fn run_maxp_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let (records, _) = run_circuit_trials(config, |_, _, _| Ok(()))?;
    let mut report = circuit_report(config, records)?;
    let n = ensemble(config)?.n;
    let d = (n as f64).exp2();
    let threshold = maxp_threshold(n);
    report.fractions.insert(
        "exceed_fraction".into(),
        fraction_where(&report.records, |r| r.max_prob.unwrap_or(0.0) >= threshold),
    );
    if threshold > 1.0 {
        report.notes.push(format!(
            "threshold 4n/2^n = {threshold} exceeds 1 at n = {n}: no distribution can reach it"
        ));
    }
    let scaled: Vec<f64> = report
        .records
        .iter()
        .filter_map(|r| r.max_prob)
        .map(|p| d * p / n as f64)
        .collect();
    let h = config.histogram.as_ref().unwrap_or(&MAXP_HISTOGRAM);
    report.histogram = Some(Histogram::from_values(&scaled, h.bins, h.max)?);
    report.notes.push("histogram is of d * maxp / n".into());
    Ok(report)
}

/// Per-circuit `Var_{x∼p}(p(x))` against its exact mean; also the fraction of
/// circuits at or above `8/d²`, next to the `4/d` bound on that fraction.
pub fn run_variance_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let (records, histogram) = run_circuit_trials(config, |_, _, _| Ok(()))?;
    let mut report = circuit_report(config, records)?;
    let d = report.dimension.unwrap_or(1) as f64;
    let cut = 8.0 / (d * d);
    report.fractions.insert(
        "variance_exceed_fraction".into(),
        fraction_where(&report.records, |r| r.sample_variance.unwrap_or(0.0) >= cut),
    );
    report.oracles.insert("variance_cut".into(), OracleValue::float(cut));
    report
        .oracles
        .insert("variance_exceed_bound".into(), OracleValue::float((4.0 / d).min(1.0)));
    compare(&mut report, "sample_variance", "sample_variance_mean");
    report.histogram = histogram;
    Ok(report)
}

/// `Π_{k=1}^{n} (1 + 2^{-k})^{-1}`: the probability that a uniformly random
/// n-qubit Clifford maps `|0…0⟩` to a state with uniform output distribution.
pub fn clifford_uniform_reference(n: usize) -> f64 {
    (1..=n).map(|k| 1.0 / (1.0 + (-(k as f64)).exp2())).product()
}

/// Fraction of circuits whose output distribution is exactly uniform.
pub fn run_clifford_uniformity(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let (records, histogram) = run_circuit_trials(config, |dist, _, rec| {
        rec.pass = Some(is_uniform_distribution(dist, UNIFORM_TOL));
        Ok(())
    })?;
    let mut report = circuit_report(config, records)?;
    let n = ensemble(config)?.n;
    report
        .fractions
        .insert("uniform_fraction".into(), pass_fraction(&report.records).unwrap_or(0.0));
    report.oracles.insert(
        "uniform_clifford_reference".into(),
        OracleValue::float(clifford_uniform_reference(n)),
    );
    report.notes.push(format!(
        "the pass column records exact uniformity (tolerance {UNIFORM_TOL}); the reference is for the uniform n-qubit Clifford measure, which brickwork only approaches"
    ));
    report.histogram = histogram;
    Ok(report)
}

fn annotate_guarantees(report: &mut ExperimentReport) {
    for g in &report.guarantees {
        if g.vacuous {
            report
                .notes
                .push(format!("guarantee {} is vacuous at this n/k (raw value {})", g.theorem, g.raw));
        }
    }
    if report.guarantees.iter().any(|g| g.theorem.has_log()) {
        report
            .notes
            .push("logarithms in guarantee exponents are natural".into());
    }
}

/// Per-sample quantities of one full-Haar matrix: `p(0)`, `p(1)` and `Var_x(p)`.
fn haar_column_sample(group: Group, d: usize, plan: &SeedPlan) -> Result<(f64, f64, f64)> {
    let mut rng = plan.gate_stream(0);
    let u = match group {
        Group::Unitary => sample_haar_unitary(d, &mut rng)?,
        Group::Orthogonal => sample_haar_orthogonal(d, &mut rng)?,
    };
    let probs: Vec<f64> = (0..d).map(|x| u.get(x, 0).norm_sqr()).collect();
    let coll = csum(probs.iter().map(|p| p * p));
    let cubes = csum(probs.iter().map(|p| p * p * p));
    Ok((probs[0], probs[1], cubes - coll * coll))
}

fn moment_row(d: u64, quantity: String, values: &[f64], exact: &ExactRational) -> MomentRow {
    let s = Summary::of(values);
    let expected = exact.to_f64();
    let z = s.z_score(expected);
    MomentRow {
        d,
        quantity,
        samples: values.len(),
        empirical: s.mean,
        standard_error: s.standard_error,
        exact: exact.to_string(),
        expected,
        z_score: z,
        flagged: !(z.abs() < FLAG_SIGMAS),
    }
}

/// Empirical moments of full-Haar output probabilities against exact values.
///
/// For each dimension `d` the master seed becomes `derive_trial_seed(master, d)`
/// and sample `i` uses that plan's gate stream 0. Rows are flagged when they
/// deviate by at least five standard errors.
pub fn run_moment_validation(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let settings = config
        .moments
        .as_ref()
        .ok_or_else(|| Error::Config("moment-validation needs a \"moments\" section".into()))?;
    let group = settings.group;
    let workers = worker_count(config);
    let mut rows = Vec::new();
    let mut oracles = BTreeMap::new();
    for &d in &settings.dims {
        let master = derive_trial_seed(config.master_seed, d);
        let samples = run_indexed(workers, config.trials, |i| {
            haar_column_sample(group, d as usize, &SeedPlan::new(master, i))
        })?;
        for &t in &settings.orders {
            let single = IntegerPartition::single(t)?;
            let exact = haar_moment(group, &single, d)?;
            let values: Vec<f64> = samples.iter().map(|s| s.0.powi(t as i32)).collect();
            rows.push(moment_row(d, format!("E[p(0)^{t}]"), &values, &exact));

            let pair = IntegerPartition::new(vec![t, t])?;
            let exact = haar_moment(group, &pair, d)?;
            let values: Vec<f64> = samples
                .iter()
                .map(|s| (s.0 * s.1).powi(t as i32))
                .collect();
            rows.push(moment_row(d, format!("E[p(0)^{t} p(1)^{t}]"), &values, &exact));
        }
        if settings.variance_of_variance {
            let v: Vec<f64> = samples.iter().map(|s| s.2).collect();
            let exact_mean = sample_variance_mean(d, group)?;
            rows.push(moment_row(d, "E[Var_x(p)]".into(), &v, &exact_mean));

            let exact = variance_of_variance(d, group)?;
            oracles.insert(format!("variance_of_variance_d{d}"), OracleValue::exact(&exact));
            rows.push(variance_row(d, &v, &exact));
        }
    }
    let flagged = rows.iter().filter(|r| r.flagged).count();
    let mut fractions = BTreeMap::new();
    fractions.insert("flagged_fraction".into(), flagged as f64 / rows.len().max(1) as f64);
    Ok(ExperimentReport {
        experiment: config.experiment,
        config: config.clone(),
        dimension: None,
        aggregates: BTreeMap::new(),
        fractions,
        oracles,
        guarantees: Vec::new(),
        comparisons: Vec::new(),
        ladder: Vec::new(),
        moments: rows,
        histogram: None,
        notes: vec![format!(
            "p(x) = |U[x,0]|^2 for {group} Haar matrices; one matrix per sample, {} samples per dimension",
            config.trials
        )],
        records: Vec::new(),
    })
}

/// Sample variance of `v` against `exact`, with standard error
/// `sqrt((m4 − s⁴)/N)` from the fourth central moment.
fn variance_row(d: u64, v: &[f64], exact: &ExactRational) -> MomentRow {
    let s = Summary::of(v);
    let n = v.len() as f64;
    let m4 = csum(v.iter().map(|x| (x - s.mean).powi(4))) / n;
    let se = ((m4 - s.variance * s.variance) / n).max(0.0).sqrt();
    let expected = exact.to_f64();
    let z = (s.variance - expected) / se;
    MomentRow {
        d,
        quantity: "Var_U[Var_x(p)]".into(),
        samples: v.len(),
        empirical: s.variance,
        standard_error: se,
        exact: exact.to_string(),
        expected,
        z_score: z,
        flagged: !(z.abs() < FLAG_SIGMAS),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::EnsembleSpec;

    fn cfg(kind: ExperimentKind, ens: GateEnsemble, n: usize, depth: usize, trials: u64) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(kind, Some(EnsembleSpec::brickwork(ens, n, depth)), trials, 11);
        c.workers = Some(2);
        c
    }

    #[test]
    fn identity_collision_is_one() {
        let r = run_experiment(&cfg(ExperimentKind::Collision, GateEnsemble::Identity, 4, 6, 5)).unwrap();
        assert!(r.records.iter().all(|t| t.collision_prob == Some(1.0)));
        assert_eq!(r.ladder.len(), DEFAULT_DELTA_LADDER.len());
    }

    #[test]
    fn identity_lxeb_passes_trivially() {
        let mut c = cfg(ExperimentKind::Lxeb, GateEnsemble::Identity, 4, 4, 6);
        c.k = Some(10);
        let r = run_experiment(&c).unwrap();
        assert_eq!(r.fractions["pass_fraction"], 1.0);
        assert!(r.records.iter().all(|t| t.lxeb_stat == Some(1.0)));
        assert_eq!(r.guarantees.len(), 3);
        assert!(r.guarantees.iter().all(|g| g.vacuous));
    }

    #[test]
    fn uniform_forcing_lxeb_fails() {
        let mut c = cfg(ExperimentKind::Lxeb, GateEnsemble::Hadamard, 4, 3, 6);
        c.k = Some(20);
        let r = run_experiment(&c).unwrap();
        assert_eq!(r.fractions["pass_fraction"], 0.0);
    }

    #[test]
    fn identity_maxp_and_variance() {
        let r = run_experiment(&cfg(ExperimentKind::Maxp, GateEnsemble::Identity, 6, 2, 3)).unwrap();
        assert_eq!(r.fractions["exceed_fraction"], 1.0);
        let r = run_experiment(&cfg(ExperimentKind::Variance, GateEnsemble::Identity, 6, 2, 3)).unwrap();
        assert!(r.records.iter().all(|t| t.sample_variance == Some(0.0)));
    }

    #[test]
    fn uniformity_controls() {
        let r = run_experiment(&cfg(ExperimentKind::CliffordUniformity, GateEnsemble::Clifford, 4, 0, 4)).unwrap();
        assert_eq!(r.fractions["uniform_fraction"], 0.0);
        let r = run_experiment(&cfg(ExperimentKind::CliffordUniformity, GateEnsemble::HaarUnitary, 4, 8, 4)).unwrap();
        assert_eq!(r.fractions["uniform_fraction"], 0.0);
        let r = run_experiment(&cfg(ExperimentKind::CliffordUniformity, GateEnsemble::Hadamard, 4, 2, 4)).unwrap();
        assert_eq!(r.fractions["uniform_fraction"], 1.0);
    }

    #[test]
    fn clifford_reference_value() {
        assert!((clifford_uniform_reference(1) - 2.0 / 3.0).abs() < 1e-15);
        assert!((clifford_uniform_reference(60) - 0.4194).abs() < 1e-4);
    }

    #[test]
    fn reports_ignore_worker_count() {
        let mut c = cfg(ExperimentKind::Lxeb, GateEnsemble::HaarUnitary, 6, 6, 24);
        c.k = Some(30);
        let a = run_experiment(&c).unwrap().to_json().unwrap();
        c.workers = Some(5);
        let b = run_experiment(&c).unwrap().to_json().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn aggregates_recompute_from_csv() {
        let r = run_experiment(&cfg(ExperimentKind::Collision, GateEnsemble::HaarUnitary, 6, 6, 30)).unwrap();
        let mut buf = Vec::new();
        r.write_trials(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("trial,seed,collision_prob,max_prob,sample_variance,lxeb_stat,pass\n"));
        let parsed = read_trials_csv(text.as_bytes()).unwrap();
        assert_eq!(parsed, r.records);
        assert_eq!(aggregates_from_records(&parsed), r.aggregates);
    }

    #[test]
    fn writes_report_files() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = cfg(ExperimentKind::Variance, GateEnsemble::Clifford, 4, 4, 5);
        c.report_path = Some(dir.path().join("r.json"));
        c.trials_path = Some(dir.path().join("t.csv"));
        let r = run_experiment(&c).unwrap();
        r.write_json(&c.report_path()).unwrap();
        r.write_trials_csv(&c.trials_path()).unwrap();
        let json = std::fs::read_to_string(c.report_path()).unwrap();
        assert_eq!(json, r.to_json().unwrap());
        let rows = read_trials_csv(std::fs::File::open(c.trials_path()).unwrap()).unwrap();
        assert_eq!(rows.len(), 5);
        let loaded = ExperimentConfig::load(&c.report_path());
        assert!(loaded.is_err(), "a report is not a config");
    }

    #[test]
    fn capacity_is_checked_before_running() {
        let mut c = cfg(ExperimentKind::Collision, GateEnsemble::Identity, 8, 2, 1);
        c.max_qubits = 6;
        assert!(matches!(run_experiment(&c), Err(Error::Capacity { .. })));
    }

    #[test]
    fn moment_validation_small() {
        let mut c = ExperimentConfig::new(ExperimentKind::MomentValidation, None, 4000, 3);
        c.moments = Some(MomentSettings {
            group: Group::Unitary,
            dims: vec![4],
            orders: vec![1, 2],
            variance_of_variance: true,
        });
        let r = run_experiment(&c).unwrap();
        assert_eq!(r.moments.len(), 6);
        let first = &r.moments[0];
        assert_eq!(first.exact, "1/4");
        assert!(r.moments.iter().all(|m| m.z_score.is_finite()));
    }
}
