use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer partition `λ = (λ₁ ≥ λ₂ ≥ … ≥ λ_ℓ ≥ 1)` of `t = Σλᵢ`.
///
/// Part `i` is the exponent of `p(xᵢ)` for pairwise distinct bit strings `xᵢ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct IntegerPartition {
    parts: Vec<u32>,
}

impl IntegerPartition {
    /// Sorts `parts` into non-increasing order. Rejects empty input and zero parts.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::arg("partition must have at least one part"));
        }
        if parts.contains(&0) {
            return Err(Error::arg("partition parts must be positive"));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { parts })
    }

    /// The one-part partition `(t)`.
    pub fn single(t: u32) -> Result<Self> {
        Self::new(vec![t])
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// `t = Σλᵢ`.
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// All partitions of `t`, in reverse lexicographic order starting from `(t)`.
    pub fn all_of(t: u32) -> Vec<Self> {
        fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<IntegerPartition>) {
            if rem == 0 {
                out.push(IntegerPartition { parts: cur.clone() });
                return;
            }
            for p in (1..=rem.min(max)).rev() {
                cur.push(p);
                rec(rem - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if t > 0 {
            rec(t, t, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl TryFrom<Vec<u32>> for IntegerPartition {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<IntegerPartition> for Vec<u32> {
    fn from(p: IntegerPartition) -> Self {
        p.parts
    }
}

impl fmt::Display for IntegerPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

impl FromStr for IntegerPartition {
    type Err = Error;

    /// Parses `"2"`, `"2,2"`, `"3 1"` or `"(2,1)"`.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|_| Error::arg(format!("bad partition part {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }
}

/// Perfect matching of `{0, …, 2t−1}`, canonical: each pair `(a, b)` has
/// `a < b` and pairs are sorted by their first element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairPartition {
    pairs: Vec<(u8, u8)>,
}

impl PairPartition {
    pub fn pairs(&self) -> &[(u8, u8)] {
        &self.pairs
    }

    /// `t`, the number of pairs.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_canonical(&self) -> bool {
        self.pairs.iter().all(|(a, b)| a < b)
            && self.pairs.windows(2).all(|w| w[0].0 < w[1].0)
    }
}

/// Largest `t` accepted by [`enumerate_pair_partitions`] ((2t−1)!! = 2027025 at t = 8).
pub const MAX_PAIR_PARTITION_T: usize = 8;

/// All `(2t)!/(2^t t!)` perfect matchings of `2t` points in canonical order:
/// the lowest free point is paired with each remaining point in increasing order.
pub fn enumerate_pair_partitions(t: usize) -> Result<Vec<PairPartition>> {
    if !(1..=MAX_PAIR_PARTITION_T).contains(&t) {
        return Err(Error::arg(format!(
            "pair partitions supported for 1 <= t <= {MAX_PAIR_PARTITION_T}, got {t}"
        )));
    }
    let mut out = Vec::new();
    let mut free: Vec<u8> = (0..2 * t as u8).collect();
    let mut cur = Vec::with_capacity(t);
    match_rec(&mut free, &mut cur, &mut out);
    Ok(out)
}

fn match_rec(free: &mut Vec<u8>, cur: &mut Vec<(u8, u8)>, out: &mut Vec<PairPartition>) {
    if free.is_empty() {
        out.push(PairPartition { pairs: cur.clone() });
        return;
    }
    let a = free.remove(0);
    for i in 0..free.len() {
        let b = free.remove(i);
        cur.push((a, b));
        match_rec(free, cur, out);
        cur.pop();
        free.insert(i, b);
    }
    free.insert(0, a);
}

/// Set partitions of `{0, …, m−1}` as block-label vectors in restricted-growth form.
pub fn set_partitions(m: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, m: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == m {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max {
            cur.push(b);
            rec(i + 1, m, if b == max { max + 1 } else { max }, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, 0, &mut Vec::with_capacity(m), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn partition_validation_and_order() {
        assert_eq!(IntegerPartition::new(vec![1, 3, 2]).unwrap().parts(), &[3, 2, 1]);
        assert!(IntegerPartition::new(vec![]).is_err());
        assert!(IntegerPartition::new(vec![2, 0]).is_err());
        assert!("0".parse::<IntegerPartition>().is_err());
        assert!("".parse::<IntegerPartition>().is_err());
        assert!("2,x".parse::<IntegerPartition>().is_err());
        assert_eq!("(2, 2)".parse::<IntegerPartition>().unwrap().parts(), &[2, 2]);
        assert_eq!("1 3".parse::<IntegerPartition>().unwrap().to_string(), "(3,1)");
    }

    #[test]
    fn partition_counts() {
        // p(1..=8) = 1, 2, 3, 5, 7, 11, 15, 22
        let counts: Vec<usize> = (1..=8).map(|t| IntegerPartition::all_of(t).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22]);
        assert_eq!(IntegerPartition::all_of(0).len(), 0);
    }

    #[test]
    fn matching_counts() {
        let counts: Vec<usize> = (1..=6)
            .map(|t| enumerate_pair_partitions(t).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 3, 15, 105, 945, 10395]);
        assert!(enumerate_pair_partitions(0).is_err());
        assert!(enumerate_pair_partitions(9).is_err());
    }

    #[test]
    fn matchings_are_canonical_and_distinct() {
        let all = enumerate_pair_partitions(5).unwrap();
        let set: HashSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), all.len());
        assert!(all.iter().all(PairPartition::is_canonical));
        let t2 = enumerate_pair_partitions(2).unwrap();
        let firsts: Vec<_> = t2.iter().map(|p| p.pairs().to_vec()).collect();
        assert_eq!(
            firsts,
            vec![vec![(0, 1), (2, 3)], vec![(0, 2), (1, 3)], vec![(0, 3), (1, 2)]]
        );
    }

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> = (0..=6).map(|m| set_partitions(m).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 15, 52, 203]);
    }
}
