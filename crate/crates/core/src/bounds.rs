//! Concentration-inequality calculators and LXEB guarantee formulas.
//!
//! Tail functions return probabilities capped to `[0, 1]`. Guarantee reports
//! keep the raw value as well, since a non-positive lower bound is informative.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bennett's `h(u) = (1+u)·ln(1+u) − u`.
pub fn bennett_h(u: f64) -> Result<f64> {
    if !(u >= 0.0) {
        return Err(Error::arg(format!("h(u) needs u >= 0, got {u}")));
    }
    Ok((1.0 + u) * u.ln_1p() - u)
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::arg(format!("{name} must be positive, got {x}")));
    }
    Ok(())
}

/// `exp(−(k σ²/α²) h(α δ/σ²))`: one-sided tail for the mean of `k` i.i.d.
/// variables with variance `σ²` bounded above by `α`.
pub fn bennett_tail(k: f64, sigma2: f64, alpha: f64, delta: f64) -> Result<f64> {
    check_positive("k", k)?;
    check_positive("sigma^2", sigma2)?;
    check_positive("alpha", alpha)?;
    check_positive("delta", delta)?;
    let h = bennett_h(alpha * delta / sigma2)?;
    Ok((-(k * sigma2 / (alpha * alpha)) * h).exp().min(1.0))
}

/// `2·exp(−2kδ²/(16n²))`, uncapped (equals 2 at δ = 0).
pub fn hoeffding_tail(k: f64, delta: f64, n: f64) -> Result<f64> {
    check_positive("k", k)?;
    check_positive("n", n)?;
    if !(delta >= 0.0) {
        return Err(Error::arg("delta must be non-negative"));
    }
    Ok(2.0 * (-2.0 * k * delta * delta / (16.0 * n * n)).exp())
}

/// Failure probability `2/2ⁿ` of the max-probability bound, capped at 1.
pub fn maxp_tail(n: usize) -> f64 {
    (2.0 / (n as f64).exp2()).min(1.0)
}

/// Chebyshev `σ²/δ²`, capped at 1.
pub fn chebyshev_tail(variance: f64, delta: f64) -> Result<f64> {
    if !(variance >= 0.0) {
        return Err(Error::arg("variance must be non-negative"));
    }
    check_positive("delta", delta)?;
    Ok((variance / (delta * delta)).min(1.0))
}

/// Markov `E[X]/a`, capped at 1.
pub fn markov_tail(mean: f64, threshold: f64) -> Result<f64> {
    if !(mean >= 0.0) {
        return Err(Error::arg("mean must be non-negative"));
    }
    check_positive("threshold", threshold)?;
    Ok((mean / threshold).min(1.0))
}

/// Which end-to-end LXEB guarantee to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    /// `1 − 200√2/√k − 50000/2ⁿ` at depth 144n.
    Lindepth,
    /// `1 − 400/k − 210000/2ⁿ` from 8-design variance concentration.
    #[serde(rename = "8design")]
    EightDesign,
    /// `1 − exp(−(k/800n)·log(n/200)) − 50006/2ⁿ` at polynomial depth.
    Polydepth,
    /// `1 − exp(−(k/16n)·log(n/6)) − 180/2ⁿ` for orthogonal designs.
    Orthogonal,
}

impl Theorem {
    pub const ALL: [Theorem; 4] = [
        Theorem::Lindepth,
        Theorem::EightDesign,
        Theorem::Polydepth,
        Theorem::Orthogonal,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Self::Lindepth => "lindepth",
            Self::EightDesign => "8design",
            Self::Polydepth => "polydepth",
            Self::Orthogonal => "orthogonal",
        }
    }

    /// Whether the formula contains a logarithm whose base matters.
    pub fn has_log(self) -> bool {
        matches!(self, Self::Polydepth | Self::Orthogonal)
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Theorem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.tag() == s)
            .ok_or_else(|| Error::arg(format!("unknown theorem tag {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LogBase {
    #[default]
    Natural,
    Two,
}

impl LogBase {
    fn log(self, x: f64) -> f64 {
        match self {
            Self::Natural => x.ln(),
            Self::Two => x.log2(),
        }
    }
}

/// Evaluated lower bound on the LXEB pass probability.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GuaranteeReport {
    pub theorem: Theorem,
    pub k: u64,
    pub n: usize,
    /// The formula's value, possibly negative.
    pub raw: f64,
    /// `raw` clamped into `[0, 1]`.
    pub bound: f64,
    /// `raw <= 0`: the formula says nothing at these parameters.
    pub vacuous: bool,
    pub log_base: LogBase,
}

/// Guarantee with natural logarithms in the exponents.
pub fn guarantee(theorem: Theorem, k: u64, n: usize) -> Result<GuaranteeReport> {
    guarantee_with_base(theorem, k, n, LogBase::Natural)
}

pub fn guarantee_with_base(
    theorem: Theorem,
    k: u64,
    n: usize,
    log_base: LogBase,
) -> Result<GuaranteeReport> {
    if k == 0 || n == 0 {
        return Err(Error::arg("guarantees need k >= 1 and n >= 1"));
    }
    let kf = k as f64;
    let nf = n as f64;
    let d = nf.exp2();
    let raw = match theorem {
        Theorem::Lindepth => 1.0 - 200.0 * 2f64.sqrt() / kf.sqrt() - 50000.0 / d,
        Theorem::EightDesign => 1.0 - 400.0 / kf - 210000.0 / d,
        Theorem::Polydepth => {
            1.0 - (-(kf / (800.0 * nf)) * log_base.log(nf / 200.0)).exp() - 50006.0 / d
        }
        Theorem::Orthogonal => {
            1.0 - (-(kf / (16.0 * nf)) * log_base.log(nf / 6.0)).exp() - 180.0 / d
        }
    };
    Ok(GuaranteeReport {
        theorem,
        k,
        n,
        raw,
        bound: raw.clamp(0.0, 1.0),
        vacuous: raw <= 0.0,
        log_base,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn h_examples() {
        assert_eq!(bennett_h(0.0).unwrap(), 0.0);
        assert!((bennett_h(E - 1.0).unwrap() - 1.0).abs() < 1e-15);
        for u in [1.0, 2.0, 5.0, 10.0] {
            assert!(bennett_h(u).unwrap() >= u * u.ln() / 2.0);
        }
        assert!(bennett_h(-0.1).is_err());
    }

    #[test]
    fn bennett_examples() {
        let t = bennett_tail(100.0, 1.0, 1.0, 1e-12).unwrap();
        assert!((t - 1.0).abs() < 1e-9);
        let a = bennett_tail(50.0, 0.3, 2.0, 0.4).unwrap();
        let b = bennett_tail(100.0, 0.3, 2.0, 0.4).unwrap();
        assert!((b - a * a).abs() <= 1e-15 * a.max(1e-300));
        assert!(bennett_tail(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(bennett_tail(1.0, -1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn hoeffding_examples() {
        assert_eq!(hoeffding_tail(10.0, 0.0, 3.0).unwrap(), 2.0);
        let (n, delta) = (5.0, 0.7);
        let k = 16.0 * n * n / (2.0 * delta * delta);
        assert!((hoeffding_tail(k, delta, n).unwrap() - 2.0 / E).abs() < 1e-15);
    }

    #[test]
    fn maxp_tail_examples() {
        assert_eq!(maxp_tail(10), 2.0 / 1024.0);
        assert_eq!(maxp_tail(1), 1.0);
        for n in 1..40 {
            assert!(maxp_tail(n + 1) <= maxp_tail(n));
        }
    }

    #[test]
    fn markov_chebyshev_examples() {
        assert_eq!(markov_tail(0.3, 0.3).unwrap(), 1.0);
        assert!(chebyshev_tail(1.0, 1e200).unwrap() < 1e-300);
        let d = 2f64.powi(20);
        let t = chebyshev_tail(5.0 / d.powi(3), 1.0 / (100.0 * d)).unwrap();
        assert!((t - 50000.0 / d).abs() < 1e-12 * t);
    }

    #[test]
    fn guarantee_examples() {
        let g = guarantee(Theorem::Polydepth, 1000, 200).unwrap();
        assert!(g.vacuous);
        assert!(g.raw < 0.0);
        assert_eq!(g.bound, 0.0);

        let g = guarantee(Theorem::Lindepth, 1_000_000, 20).unwrap();
        assert!((g.raw - 0.6695).abs() < 1e-4);
        assert!(!g.vacuous);

        let g = guarantee(Theorem::EightDesign, 400, 60).unwrap();
        assert!(g.raw < 0.0 && g.raw > -1e-12);
        assert!(g.vacuous);

        assert!("nope".parse::<Theorem>().is_err());
        assert_eq!("8design".parse::<Theorem>().unwrap(), Theorem::EightDesign);
    }

    #[test]
    fn log_base_matters_only_for_exponential_forms() {
        let a = guarantee_with_base(Theorem::Orthogonal, 5000, 24, LogBase::Natural).unwrap();
        let b = guarantee_with_base(Theorem::Orthogonal, 5000, 24, LogBase::Two).unwrap();
        assert_ne!(a.raw, b.raw);
        let a = guarantee_with_base(Theorem::Lindepth, 5000, 24, LogBase::Natural).unwrap();
        let b = guarantee_with_base(Theorem::Lindepth, 5000, 24, LogBase::Two).unwrap();
        assert_eq!(a.raw, b.raw);
    }
}
