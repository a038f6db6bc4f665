use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::bounds::GuaranteeReport;
use crate::error::Result;
use crate::estimators::Histogram;
use crate::moments::ExactRational;
use crate::sum::csum;

use super::config::{ExperimentConfig, ExperimentKind};

/// Header of `trials.csv`.
pub const TRIALS_CSV_HEADER: [&str; 7] = [
    "trial",
    "seed",
    "collision_prob",
    "max_prob",
    "sample_variance",
    "lxeb_stat",
    "pass",
];

/// Per-circuit statistics. Fields that do not apply to an experiment are `None`.
///
/// In clifford-uniformity runs `pass` records whether the output was exactly uniform.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub seed: u64,
    pub collision_prob: Option<f64>,
    pub max_prob: Option<f64>,
    pub sample_variance: Option<f64>,
    pub lxeb_stat: Option<f64>,
    pub pass: Option<bool>,
}

/// Order statistics and moments of one column.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    /// Unbiased sample variance (NaN for a single value).
    pub variance: f64,
    pub standard_error: f64,
    pub min: f64,
    pub max: f64,
    /// 50%, 90% and 99% quantiles (nearest rank).
    pub quantiles: [f64; 3],
}

impl Summary {
    /// Summarises `values` in the given order. Panics on an empty slice.
    pub fn of(values: &[f64]) -> Self {
        assert!(!values.is_empty(), "summary of no values");
        let count = values.len();
        let mean = csum(values.iter().copied()) / count as f64;
        let variance = if count < 2 {
            f64::NAN
        } else {
            csum(values.iter().map(|v| (v - mean) * (v - mean))) / (count - 1) as f64
        };
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let rank = |q: f64| sorted[((q * count as f64).ceil() as usize).clamp(1, count) - 1];
        Self {
            count,
            mean,
            variance,
            standard_error: (variance / count as f64).sqrt(),
            min: sorted[0],
            max: sorted[count - 1],
            quantiles: [rank(0.5), rank(0.9), rank(0.99)],
        }
    }

    /// `(mean − expected) / standard_error`.
    pub fn z_score(&self, expected: f64) -> f64 {
        (self.mean - expected) / self.standard_error
    }

    pub fn relative_deviation(&self, expected: f64) -> f64 {
        (self.mean - expected).abs() / expected.abs()
    }
}

/// An exact closed-form value embedded in a report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleValue {
    pub exact: Option<String>,
    pub value: f64,
}

impl OracleValue {
    pub fn exact(r: &ExactRational) -> Self {
        Self {
            exact: Some(r.to_string()),
            value: r.to_f64(),
        }
    }

    pub fn float(value: f64) -> Self {
        Self { exact: None, value }
    }
}

/// Observed fraction of trials beyond a deviation threshold, next to the
/// Chebyshev prediction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LadderRow {
    /// Threshold in units of `1/d`.
    pub delta_units: f64,
    pub observed_fraction: f64,
    pub chebyshev: f64,
}

/// An aggregate mean against its exact expectation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub quantity: String,
    pub observed: f64,
    pub standard_error: f64,
    pub expected: f64,
    pub z_score: f64,
    pub relative_deviation: f64,
}

impl Comparison {
    pub fn new(quantity: &str, summary: &Summary, expected: f64) -> Self {
        Self {
            quantity: quantity.to_string(),
            observed: summary.mean,
            standard_error: summary.standard_error,
            expected,
            z_score: summary.z_score(expected),
            relative_deviation: summary.relative_deviation(expected),
        }
    }
}

/// Empirical moment against its exact value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentRow {
    pub d: u64,
    /// e.g. `E[p(0)^2]`, `E[p(0)^2 p(1)^2]`, `Var_U[Var_x(p)]`.
    pub quantity: String,
    pub samples: usize,
    pub empirical: f64,
    pub standard_error: f64,
    pub exact: String,
    pub expected: f64,
    pub z_score: f64,
    /// Deviation of at least 5 standard errors.
    pub flagged: bool,
}

/// Everything an experiment produced. Serialises deterministically; wall-clock
/// time is returned separately by the runner.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub experiment: ExperimentKind,
    pub config: ExperimentConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimension: Option<u64>,
    pub aggregates: BTreeMap<String, Summary>,
    pub fractions: BTreeMap<String, f64>,
    pub oracles: BTreeMap<String, OracleValue>,
    pub guarantees: Vec<GuaranteeReport>,
    pub comparisons: Vec<Comparison>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub ladder: Vec<LadderRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub moments: Vec<MomentRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub histogram: Option<Histogram>,
    pub notes: Vec<String>,
    pub records: Vec<TrialRecord>,
}

impl ExperimentReport {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn write_trials_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_trials(file)
    }

    pub fn write_trials<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(TRIALS_CSV_HEADER)?;
        for r in &self.records {
            w.write_record([
                r.trial.to_string(),
                r.seed.to_string(),
                fmt_opt(r.collision_prob),
                fmt_opt(r.max_prob),
                fmt_opt(r.sample_variance),
                fmt_opt(r.lxeb_stat),
                r.pass.map_or(String::new(), |p| p.to_string()),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Short `key=value` lines for terminals and scripts.
    pub fn summary_lines(&self) -> Vec<String> {
        let mut lines = vec![format!("experiment={}", self.experiment)];
        if let Some(d) = self.dimension {
            lines.push(format!("dimension={d}"));
        }
        for (k, v) in &self.fractions {
            lines.push(format!("{k}={v}"));
        }
        for (k, s) in &self.aggregates {
            lines.push(format!("{k}_mean={} {k}_se={}", s.mean, s.standard_error));
        }
        for (k, o) in &self.oracles {
            match &o.exact {
                Some(e) => lines.push(format!("oracle_{k}={e} ({})", o.value)),
                None => lines.push(format!("oracle_{k}={}", o.value)),
            }
        }
        for c in &self.comparisons {
            lines.push(format!(
                "{}: observed={} expected={} rel_dev={:.3e}",
                c.quantity, c.observed, c.expected, c.relative_deviation
            ));
        }
        for g in &self.guarantees {
            let label = if g.vacuous { " (vacuous at this n/k)" } else { "" };
            lines.push(format!(
                "guarantee_{}={}{label} raw={} log={:?}",
                g.theorem, g.bound, g.raw, g.log_base
            ));
        }
        for m in self.moments.iter().filter(|m| m.flagged) {
            lines.push(format!("FLAGGED d={} {} z={:.2}", m.d, m.quantity, m.z_score));
        }
        lines
    }
}

/// Seventeen significant digits: enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or(String::new(), fmt_f64)
}

/// Parses `trials.csv` back into records.
pub fn read_trials_csv<R: std::io::Read>(input: R) -> Result<Vec<TrialRecord>> {
    let mut rdr = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let f = |i: usize| -> Option<f64> {
            let s = row.get(i).unwrap_or("");
            (!s.is_empty()).then(|| s.parse().expect("number in trials.csv"))
        };
        out.push(TrialRecord {
            trial: row[0].parse().expect("trial index"),
            seed: row[1].parse().expect("seed"),
            collision_prob: f(2),
            max_prob: f(3),
            sample_variance: f(4),
            lxeb_stat: f(5),
            pass: match &row[6] {
                "" => None,
                s => Some(s == "true"),
            },
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 2.0 / 1025.0, 1e-300, 1.0 - f64::EPSILON, 123456.789] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap().replace(['.', '-'], "");
            assert_eq!(mantissa.len(), 17, "{s}");
        }
    }

    #[test]
    fn summary_statistics() {
        let s = Summary::of(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.mean, 2.5);
        assert!((s.variance - 5.0 / 3.0).abs() < 1e-15);
        assert_eq!(s.min, 1.0);
        assert_eq!(s.max, 4.0);
        assert_eq!(s.quantiles, [2.0, 4.0, 4.0]);
        assert!(Summary::of(&[1.0]).variance.is_nan());
    }
}
