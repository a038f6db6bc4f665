//! Per-circuit statistics of output distributions and samples.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::state::OutputDistribution;
use crate::sum::{csum, CompensatedSum};

/// Default LXEB threshold multiplier.
pub const DEFAULT_B: f64 = 1.97;

/// Default per-entry tolerance for [`is_uniform_distribution`].
pub const UNIFORM_TOL: f64 = 1e-9;

/// Outcome of the linear cross-entropy test `(1/k) Σ p(xᵢ) ≥ b / 2ⁿ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LxebResult {
    pub statistic: f64,
    pub threshold: f64,
    pub passed: bool,
    pub k: usize,
    pub b: f64,
}

/// Mean of the true output probabilities at the sampled outcomes.
pub fn lxeb_statistic(dist: &OutputDistribution, samples: &[usize]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::arg("LXEB needs at least one sample"));
    }
    let mut acc = CompensatedSum::new();
    for &x in samples {
        if x >= dist.dim() {
            return Err(Error::arg(format!(
                "sample {x} out of range for {} qubits",
                dist.num_qubits()
            )));
        }
        acc.add(dist.prob(x));
    }
    Ok(acc.value() / samples.len() as f64)
}

pub fn lxeb_test(dist: &OutputDistribution, samples: &[usize], b: f64) -> Result<LxebResult> {
    if !(b > 1.0 && b < 2.0) {
        return Err(Error::arg(format!("b = {b} not in (1, 2)")));
    }
    let statistic = lxeb_statistic(dist, samples)?;
    let threshold = b / dist.dim() as f64;
    Ok(LxebResult {
        statistic,
        threshold,
        passed: statistic >= threshold,
        k: samples.len(),
        b,
    })
}

/// `Σₓ p(x)² = E_{x∼p}[p(x)]`.
pub fn collision_probability_exact(dist: &OutputDistribution) -> f64 {
    csum(dist.probs().iter().map(|p| p * p))
}

pub fn max_output_probability(dist: &OutputDistribution) -> f64 {
    dist.probs().iter().copied().fold(0.0, f64::max)
}

/// Heavy-output threshold `4n / 2ⁿ` for the max-probability bound.
pub fn maxp_threshold(n: usize) -> f64 {
    4.0 * n as f64 / (n as f64).exp2()
}

/// `Var_{x∼p}(p(x)) = Σp³ − (Σp²)²`, clamped at zero against rounding.
pub fn sample_variance_over_outputs(dist: &OutputDistribution) -> f64 {
    let cubes = csum(dist.probs().iter().map(|p| p * p * p));
    let coll = collision_probability_exact(dist);
    (cubes - coll * coll).max(0.0)
}

/// Mean and standard error of `p(x)^t` over a batch of distributions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProbeMoment {
    pub mean: f64,
    /// NaN when fewer than two distributions were given.
    pub standard_error: f64,
    pub count: usize,
}

impl ProbeMoment {
    /// The standard error is undefined for a single sample.
    pub fn is_flagged(&self) -> bool {
        self.standard_error.is_nan()
    }

    /// Whether `value` lies within `z` standard errors of the mean.
    pub fn within(&self, value: f64, z: f64) -> bool {
        if self.is_flagged() {
            return false;
        }
        (self.mean - value).abs() <= z * self.standard_error
    }
}

/// Mean and standard error of a slice of observations, summed in order.
pub fn mean_and_standard_error(values: &[f64]) -> ProbeMoment {
    let count = values.len();
    let mean = csum(values.iter().copied()) / count as f64;
    let standard_error = if count < 2 {
        f64::NAN
    } else {
        let ss = csum(values.iter().map(|v| (v - mean) * (v - mean)));
        (ss / (count - 1) as f64 / count as f64).sqrt()
    };
    ProbeMoment {
        mean,
        standard_error,
        count,
    }
}

pub fn empirical_probe_moment(
    dists: &[OutputDistribution],
    t: u32,
    x: usize,
) -> Result<ProbeMoment> {
    if dists.is_empty() {
        return Err(Error::arg("no distributions given"));
    }
    let values = dists
        .iter()
        .map(|d| {
            if x >= d.dim() {
                return Err(Error::arg(format!("bit string {x} out of range")));
            }
            Ok(d.prob(x).powi(t as i32))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(mean_and_standard_error(&values))
}

/// True iff every entry is within `tol` of `1/2ⁿ`.
pub fn is_uniform_distribution(dist: &OutputDistribution, tol: f64) -> bool {
    let u = 1.0 / dist.dim() as f64;
    dist.probs().iter().all(|p| (p - u).abs() <= tol)
}

/// Histogram of rescaled probabilities `d·p(x)` pooled over distributions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Histogram {
    /// `bins + 1` edges from 0 to `max`.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// Entries at or above the last edge.
    pub overflow: u64,
    pub total: u64,
}

impl Histogram {
    /// Fraction of all entries in bin `i`.
    pub fn mass(&self, i: usize) -> f64 {
        self.counts[i] as f64 / self.total as f64
    }

    /// Empirical density in bin `i` (mass / width).
    pub fn density(&self, i: usize) -> f64 {
        self.mass(i) / (self.edges[i + 1] - self.edges[i])
    }

    /// Bins raw values into `bins` equal-width bins over `[0, max)`.
    pub fn from_values(values: &[f64], bins: usize, max: f64) -> Result<Self> {
        let mut h = Self::empty(bins, max)?;
        let width = max / bins as f64;
        for &x in values {
            let i = (x / width).floor();
            if i >= bins as f64 {
                h.overflow += 1;
            } else {
                h.counts[i.max(0.0) as usize] += 1;
            }
            h.total += 1;
        }
        Ok(h)
    }

    fn empty(bins: usize, max: f64) -> Result<Self> {
        if bins == 0 || !(max > 0.0) {
            return Err(Error::arg("histogram needs at least one bin and a positive range"));
        }
        let width = max / bins as f64;
        Ok(Self {
            edges: (0..=bins).map(|i| i as f64 * width).collect(),
            counts: vec![0; bins],
            overflow: 0,
            total: 0,
        })
    }

    /// Adds the counts of a histogram with identical edges.
    pub fn merge(&mut self, other: &Histogram) -> Result<()> {
        if self.edges != other.edges {
            return Err(Error::arg("cannot merge histograms with different edges"));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.overflow += other.overflow;
        self.total += other.total;
        Ok(())
    }
}

/// Bins `d·p(x)` into `bins` equal-width bins over `[0, max)`.
pub fn porter_thomas_histogram(
    dists: &[OutputDistribution],
    bins: usize,
    max: f64,
) -> Result<Histogram> {
    if dists.is_empty() {
        return Err(Error::arg("no distributions given"));
    }
    let mut h = Histogram::empty(bins, max)?;
    for dist in dists {
        let d = dist.dim() as f64;
        let scaled: Vec<f64> = dist.probs().iter().map(|p| d * p).collect();
        h.merge(&Histogram::from_values(&scaled, bins, max)?)?;
    }
    Ok(h)
}
