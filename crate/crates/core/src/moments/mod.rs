//! Exact Haar moments of computational-basis output probabilities.
//!
//! For a Haar-random state `U|0⟩` in dimension `d` and pairwise distinct bit
//! strings `x₁, …, x_ℓ`:
//!
//! * unitary: `E[Π p(xᵢ)^λᵢ] = Π λᵢ! / Π_{i<t} (d + i)`
//! * orthogonal: `E[Π p(xᵢ)^λᵢ] = Π (2λᵢ−1)!! / Π_{i<t} (d + 2i)`
//!
//! Everything here is evaluated in exact rationals. The collision and variance
//! statistics are transcriptions of closed forms; [`coincidence_sum`] rebuilds
//! the same quantities from the moment formulas by summing over equality
//! patterns of the bit strings, which is how the tests cross-check them.

mod partition;
mod rational;

pub use partition::{
    enumerate_pair_partitions, set_partitions, IntegerPartition, PairPartition,
    MAX_PAIR_PARTITION_T,
};
pub use rational::ExactRational;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which Haar measure the state is drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Group {
    Unitary,
    Orthogonal,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Unitary => "unitary",
            Self::Orthogonal => "orthogonal",
        })
    }
}

impl FromStr for Group {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unitary" | "u" => Ok(Self::Unitary),
            "orthogonal" | "o" => Ok(Self::Orthogonal),
            _ => Err(Error::arg(format!("unknown group {s:?}"))),
        }
    }
}

fn check_d(d: u64) -> Result<()> {
    if d == 0 {
        return Err(Error::arg("dimension must be positive"));
    }
    Ok(())
}

fn int(n: impl Into<BigInt>) -> ExactRational {
    ExactRational::from_integer(n)
}

fn q(num: impl Into<BigInt>, den: impl Into<BigInt>) -> ExactRational {
    ExactRational::new(num, den)
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * k)
}

/// `(2n−1)!! = (2n)! / (2ⁿ n!)`, with `(−1)!! = 1`.
fn double_factorial_odd(n: u32) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * (2 * k - 1))
}

/// `Π_{i<count} (d + start + step·i)`.
fn rising(d: u64, start: u64, step: u64, count: u32) -> BigInt {
    (0..u64::from(count)).fold(BigInt::from(1), |acc, i| acc * (d + start + step * i))
}

/// `E_U[Π p(xᵢ)^λᵢ]` for Haar-random unitaries (distinct `xᵢ`).
pub fn haar_unitary_moment(lambda: &IntegerPartition, d: u64) -> Result<ExactRational> {
    check_d(d)?;
    let num = lambda.parts().iter().fold(BigInt::from(1), |acc, &l| acc * factorial(l));
    Ok(q(num, rising(d, 0, 1, lambda.size())))
}

/// `E_O[Π p(xᵢ)^λᵢ]` for Haar-random real orthogonal matrices (distinct `xᵢ`).
pub fn haar_orthogonal_moment(lambda: &IntegerPartition, d: u64) -> Result<ExactRational> {
    check_d(d)?;
    let num = lambda
        .parts()
        .iter()
        .fold(BigInt::from(1), |acc, &l| acc * double_factorial_odd(l));
    Ok(q(num, rising(d, 0, 2, lambda.size())))
}

pub fn haar_moment(group: Group, lambda: &IntegerPartition, d: u64) -> Result<ExactRational> {
    match group {
        Group::Unitary => haar_unitary_moment(lambda, d),
        Group::Orthogonal => haar_orthogonal_moment(lambda, d),
    }
}

/// Largest `t` accepted by [`orthogonal_moment_oracle`].
pub const MAX_ORACLE_T: u32 = 6;

/// Orthogonal moment from the Gaussian pairing expansion.
///
/// Position `2j` and `2j+1` of the `2t` tensor slots both hold the bit string
/// of the `j`-th factor of `Π p(xᵢ)^λᵢ`. A matching contributes 1 when every
/// pair joins slots holding the same string and 0 otherwise; the sum over all
/// matchings is divided by `Π_{i<t}(d + 2i)`.
pub fn orthogonal_moment_oracle(lambda: &IntegerPartition, d: u64) -> Result<ExactRational> {
    check_d(d)?;
    let t = lambda.size();
    if t > MAX_ORACLE_T {
        return Err(Error::arg(format!(
            "oracle limited to t <= {MAX_ORACLE_T}, got {t}"
        )));
    }
    let slots: Vec<usize> = lambda
        .parts()
        .iter()
        .enumerate()
        .flat_map(|(i, &l)| std::iter::repeat(i).take(2 * l as usize))
        .collect();
    let contributing = contributing_matchings(&slots)?;
    Ok(q(contributing, rising(d, 0, 2, t)))
}

/// Number of perfect matchings of the labelled slots that only pair equal labels.
pub fn contributing_matchings(slots: &[usize]) -> Result<u64> {
    if slots.len() % 2 != 0 {
        return Err(Error::arg("odd number of slots"));
    }
    let matchings = enumerate_pair_partitions(slots.len() / 2)?;
    Ok(matchings
        .iter()
        .filter(|m| {
            m.pairs()
                .iter()
                .all(|&(a, b)| slots[a as usize] == slots[b as usize])
        })
        .count() as u64)
}

/// `Σ_{x₁,…,x_m ∈ [d]} E[Π p(xᵢ)^{eᵢ}]`, summing over every equality pattern of the
/// `xᵢ`: a set partition with `b` blocks is realised by `d(d−1)…(d−b+1)` tuples and
/// merges exponents within each block.
pub fn coincidence_sum(group: Group, exponents: &[u32], d: u64) -> Result<ExactRational> {
    check_d(d)?;
    let mut total = ExactRational::zero();
    for labels in set_partitions(exponents.len()) {
        let blocks = labels.iter().max().map_or(0, |m| m + 1);
        if blocks as u64 > d {
            continue;
        }
        let mut merged = vec![0u32; blocks];
        for (&b, &e) in labels.iter().zip(exponents) {
            merged[b] += e;
        }
        let falling = (0..blocks as u64).fold(BigInt::from(1), |acc, i| acc * (d - i));
        let lambda = IntegerPartition::new(merged)?;
        total = total + int(falling) * haar_moment(group, &lambda, d)?;
    }
    Ok(total)
}

/// Haar mean of the collision probability `Σₓ p(x)²`: `2/(d+1)` or `3/(d+2)`.
pub fn collision_mean(d: u64, group: Group) -> Result<ExactRational> {
    check_d(d)?;
    Ok(match group {
        Group::Unitary => q(2, d + 1),
        Group::Orthogonal => q(3, d + 2),
    })
}

/// Haar variance of the collision probability.
///
/// Unitary `4(d−1)/((d+1)²(d+2)(d+3))`, orthogonal `24(d−1)/((d+2)²(d+4)(d+6))`.
pub fn collision_variance(d: u64, group: Group) -> Result<ExactRational> {
    check_d(d)?;
    let dm1 = BigInt::from(d - 1);
    Ok(match group {
        Group::Unitary => q(
            4 * dm1,
            BigInt::from(d + 1).pow(2) * (d + 2) * (d + 3),
        ),
        Group::Orthogonal => q(
            24 * dm1,
            BigInt::from(d + 2).pow(2) * (d + 4) * (d + 6),
        ),
    })
}

/// Haar mean of `Var_{x∼p}(p(x)) = Σp³ − (Σp²)²`.
///
/// Unitary `2(d−1)/((d+1)(d+2)(d+3))`, orthogonal `6(d−1)/((d+2)(d+4)(d+6))`.
pub fn sample_variance_mean(d: u64, group: Group) -> Result<ExactRational> {
    check_d(d)?;
    let dm1 = BigInt::from(d - 1);
    Ok(match group {
        Group::Unitary => q(2 * dm1, rising(d, 1, 1, 3)),
        Group::Orthogonal => q(6 * dm1, rising(d, 2, 2, 3)),
    })
}

/// `Σ_{x,y} E[p(x)³p(y)³]`. Unitary closed form `36(d+19)/Π_{i=1}^{5}(d+i)`.
pub fn sum_p3p3(d: u64, group: Group) -> Result<ExactRational> {
    check_d(d)?;
    match group {
        Group::Unitary => Ok(q(36 * BigInt::from(d + 19), rising(d, 1, 1, 5))),
        Group::Orthogonal => coincidence_sum(group, &[3, 3], d),
    }
}

/// `Σ_{x,y,z} E[p(x)³p(y)²p(z)²]`. Unitary closed form `24(d²+23d+186)/Π_{i=1}^{6}(d+i)`.
pub fn sum_p3p2p2(d: u64, group: Group) -> Result<ExactRational> {
    check_d(d)?;
    match group {
        Group::Unitary => {
            let poly = BigInt::from(d) * d + 23 * BigInt::from(d) + 186;
            Ok(q(24 * poly, rising(d, 1, 1, 6)))
        }
        Group::Orthogonal => coincidence_sum(group, &[3, 2, 2], d),
    }
}

/// `Σ_{w,x,y,z} E[p(w)²p(x)²p(y)²p(z)²]`. Unitary closed form
/// `16(d³+30d²+371d+2118)/Π_{i=1}^{7}(d+i)`.
pub fn sum_p2p2p2p2(d: u64, group: Group) -> Result<ExactRational> {
    check_d(d)?;
    match group {
        Group::Unitary => {
            let dd = BigInt::from(d);
            let poly = &dd * &dd * &dd + 30 * &dd * &dd + 371 * &dd + 2118;
            Ok(q(16 * poly, rising(d, 1, 1, 7)))
        }
        Group::Orthogonal => coincidence_sum(group, &[2, 2, 2, 2], d),
    }
}

/// Haar variance over circuits of `Var_{x∼p}(p(x))`.
///
/// Unitary `8(17d⁵+42d⁴−106d³−72d²+449d−330) / ((d+1)²(d+2)²(d+3)²(d+4)(d+5)(d+6)(d+7))`,
/// orthogonal `72(37d⁵+277d⁴−198d³−1852d²+8360d−6624) / ((d+2)²(d+4)²(d+6)²(d+8)(d+10)(d+12)(d+14))`.
pub fn variance_of_variance(d: u64, group: Group) -> Result<ExactRational> {
    check_d(d)?;
    let x = BigInt::from(d);
    let poly = |c: [i64; 6]| -> BigInt {
        c.iter().fold(BigInt::from(0), |acc, &k| acc * &x + k)
    };
    Ok(match group {
        Group::Unitary => {
            let num = 8 * poly([17, 42, -106, -72, 449, -330]);
            let den = rising(d, 1, 1, 3).pow(2) * rising(d, 4, 1, 4);
            q(num, den)
        }
        Group::Orthogonal => {
            let num = 72 * poly([37, 277, -198, -1852, 8360, -6624]);
            let den = rising(d, 2, 2, 3).pow(2) * rising(d, 8, 2, 4);
            q(num, den)
        }
    })
}

/// The same quantity assembled from the three sub-sums:
/// `Σp³p³ − 2Σp³p²p² + Σp²p²p²p² − (E[Var])²`.
pub fn variance_of_variance_from_terms(d: u64, group: Group) -> Result<ExactRational> {
    let mean = sample_variance_mean(d, group)?;
    Ok(sum_p3p3(d, group)? - int(2) * sum_p3p2p2(d, group)? + sum_p2p2p2p2(d, group)?
        - mean.pow(2))
}

/// Statistics of `Σₓ p(x)^q` under the Haar unitary measure.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QMomentStats {
    pub q: u32,
    pub d: u64,
    /// `d · q! / Π_{i<q}(d+i)`.
    pub mean: ExactRational,
    /// `[d(2q)! + d(d−1)(q!)²] / Π_{i<2q}(d+i) − d²(q!)² / (Π_{i<q}(d+i))²`.
    pub variance: ExactRational,
    /// `(2q)! / d^{2q−1}`.
    pub variance_bound: ExactRational,
}

pub fn qmoment_sum_stats(d: u64, qq: u32) -> Result<QMomentStats> {
    check_d(d)?;
    if qq < 2 {
        return Err(Error::arg(format!("q = {qq} must be at least 2")));
    }
    let fq = factorial(qq);
    let f2q = factorial(2 * qq);
    let head = rising(d, 0, 1, qq);
    let mean = q(BigInt::from(d) * &fq, head.clone());
    let second = q(
        BigInt::from(d) * &f2q + BigInt::from(d) * (d - 1) * &fq * &fq,
        rising(d, 0, 1, 2 * qq),
    );
    let variance = second - mean.pow(2);
    let variance_bound = q(f2q, BigInt::from(d).pow(2 * qq - 1));
    Ok(QMomentStats {
        q: qq,
        d,
        mean,
        variance,
        variance_bound,
    })
}

/// Interval `[haar − ε, haar + ε]` containing the moment under any ε-approximate design.
pub fn moment_with_design_error(
    group: Group,
    lambda: &IntegerPartition,
    d: u64,
    epsilon: &ExactRational,
) -> Result<(ExactRational, ExactRational)> {
    if epsilon.is_negative() {
        return Err(Error::arg("epsilon must be non-negative"));
    }
    let haar = haar_moment(group, lambda, d)?;
    Ok((&haar - epsilon, &haar + epsilon))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(s: &str) -> IntegerPartition {
        s.parse().unwrap()
    }

    fn r(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    #[test]
    fn unitary_moment_examples() {
        for d in [2, 4, 9, 1024] {
            assert_eq!(haar_unitary_moment(&lam("1"), d).unwrap(), q(1, d));
        }
        assert_eq!(haar_unitary_moment(&lam("2"), 4).unwrap(), r("1/10"));
        assert_eq!(haar_unitary_moment(&lam("2,2"), 4).unwrap(), r("1/210"));
        assert_eq!(haar_unitary_moment(&lam("3"), 2).unwrap(), r("1/4"));
    }

    #[test]
    fn orthogonal_moment_examples() {
        assert_eq!(haar_orthogonal_moment(&lam("1"), 7).unwrap(), r("1/7"));
        assert_eq!(haar_orthogonal_moment(&lam("2"), 2).unwrap(), r("3/8"));
        assert_eq!(haar_orthogonal_moment(&lam("1,1"), 4).unwrap(), r("1/24"));
        assert_eq!(haar_orthogonal_moment(&lam("2"), 4).unwrap(), r("1/8"));
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(contributing_matchings(&[0, 0, 0, 0]).unwrap(), 3);
        for d in [2, 4, 8] {
            assert_eq!(orthogonal_moment_oracle(&lam("2"), d).unwrap(), q(3, d * (d + 2)));
        }
        assert_eq!(contributing_matchings(&[0, 0, 1, 1]).unwrap(), 1);
        assert_eq!(orthogonal_moment_oracle(&lam("1,1"), 4).unwrap(), r("1/24"));
        assert!(orthogonal_moment_oracle(&lam("7"), 4).is_err());
    }

    #[test]
    fn collision_examples() {
        assert_eq!(collision_mean(4, Group::Unitary).unwrap(), r("2/5"));
        assert_eq!(collision_mean(2, Group::Orthogonal).unwrap(), r("3/4"));
        let big = 1u64 << 40;
        let ratio = collision_mean(big, Group::Unitary).unwrap() / q(2, big);
        assert!((ratio.to_f64() - 1.0).abs() < 1e-11);

        assert_eq!(collision_variance(4, Group::Unitary).unwrap(), r("2/175"));
        assert_eq!(collision_variance(1, Group::Unitary).unwrap(), 0);
        assert_eq!(collision_variance(2, Group::Orthogonal).unwrap(), r("1/32"));
    }

    #[test]
    fn sample_variance_examples() {
        assert_eq!(sample_variance_mean(4, Group::Unitary).unwrap(), r("1/35"));
        assert_eq!(sample_variance_mean(1, Group::Unitary).unwrap(), 0);
        assert_eq!(sample_variance_mean(4, Group::Orthogonal).unwrap(), r("3/80"));
    }

    #[test]
    fn variance_of_variance_examples() {
        assert_eq!(variance_of_variance(2, Group::Unitary).unwrap(), r("1/2100"));
        assert_eq!(variance_of_variance(2, Group::Orthogonal).unwrap(), r("1/2048"));
        assert_eq!(sum_p3p3(2, Group::Unitary).unwrap(), r("3/10"));
    }

    #[test]
    fn qmoment_examples() {
        let s = qmoment_sum_stats(2, 2).unwrap();
        assert_eq!(s.mean, r("2/3"));
        assert!(qmoment_sum_stats(2, 1).is_err());
        let big = 1u64 << 20;
        let m = qmoment_sum_stats(big, 2).unwrap().mean * int(big);
        assert!((m.to_f64() - 2.0).abs() < 1e-4);
    }

    #[test]
    fn design_error_interval() {
        let (lo, hi) = moment_with_design_error(Group::Unitary, &lam("2"), 4, &ExactRational::zero())
            .unwrap();
        assert_eq!(lo, hi);
        let eps = q(1, 4u64.pow(5));
        let (lo, hi) = moment_with_design_error(Group::Unitary, &lam("2"), 4, &eps).unwrap();
        assert_eq!(lo, r("1/10") - r("1/1024"));
        assert_eq!(hi, r("1/10") + r("1/1024"));
        assert!(lo <= hi);
        assert!(moment_with_design_error(Group::Unitary, &lam("2"), 4, &-eps).is_err());
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(haar_unitary_moment(&lam("1"), 0).is_err());
        assert!(collision_mean(0, Group::Orthogonal).is_err());
    }
}
