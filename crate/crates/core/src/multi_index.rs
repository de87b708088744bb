//! Multi-indices and ordered tuples of them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A multi-index `α ∈ ℕⁿ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// `m · e_axis` in dimension `n`.
    pub fn axis(n: usize, axis: usize, m: u32) -> Self {
        let mut e = vec![0; n];
        e[axis] = m;
        MultiIndex(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|α|`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, axis: usize) -> u32 {
        self.0[axis]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// `α! = ∏ α_c!`.
    pub fn factorial(&self) -> BigUint {
        self.0.iter().fold(BigUint::one(), |acc, &e| acc * factorial(e))
    }

    pub fn raised(&self, axis: usize) -> Self {
        let mut e = self.0.clone();
        e[axis] += 1;
        MultiIndex(e)
    }

    pub fn lowered(&self, axis: usize) -> Option<Self> {
        let mut e = self.0.clone();
        e[axis] = e[axis].checked_sub(1)?;
        Some(MultiIndex(e))
    }

    pub fn add(&self, other: &MultiIndex) -> Self {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub(crate) fn factorial(k: u32) -> BigUint {
    (2..=k).fold(BigUint::one(), |acc, i| acc * i)
}

/// An ordered tuple `α^j = (α_1, …, α_j)` of multi-indices sharing a
/// dimension, with `j ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct IndexTuple(Vec<MultiIndex>);

impl IndexTuple {
    pub fn new(entries: Vec<MultiIndex>) -> Result<Self> {
        let first = entries.first().ok_or(Error::EmptyTuple)?;
        let n = first.dim();
        if let Some(bad) = entries.iter().find(|e| e.dim() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.dim() });
        }
        Ok(IndexTuple(entries))
    }

    /// The tuple of `j` zero multi-indices in dimension `n`.
    pub fn zeros(j: usize, n: usize) -> Self {
        assert!(j >= 1, "index tuples have at least one entry");
        IndexTuple(vec![MultiIndex::zero(n); j])
    }

    pub fn from_exponents(rows: &[&[u32]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| MultiIndex::new(r.to_vec())).collect())
    }

    /// Number of entries `j`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.0[0].dim()
    }

    pub fn entries(&self) -> &[MultiIndex] {
        &self.0
    }

    /// `|α^j| = Σ_k |α_k|`.
    pub fn order(&self) -> u32 {
        self.0.iter().map(MultiIndex::order).sum()
    }

    /// `α^j! = ∏_k α_k!`.
    pub fn factorial(&self) -> BigUint {
        self.0.iter().fold(BigUint::one(), |acc, e| acc * e.factorial())
    }

    /// Exponents of coordinate `axis` across the entries: `((α_1)_c, …, (α_j)_c)`.
    pub fn coordinate(&self, axis: usize) -> Vec<u32> {
        self.0.iter().map(|e| e.get(axis)).collect()
    }

    pub fn reversed(&self) -> Self {
        IndexTuple(self.0.iter().rev().cloned().collect())
    }

    pub fn flattened(&self) -> Vec<u32> {
        self.0.iter().flat_map(|e| e.0.iter().copied()).collect()
    }
}

impl fmt::Display for IndexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Parses `"2,0;0,2"`: entries separated by `;`, coordinates by `,`.
impl FromStr for IndexTuple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let malformed = |reason: &str| Error::MalformedTuple {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let mut entries = Vec::new();
        for part in s.trim().split(';') {
            let part = part.trim().trim_start_matches('(').trim_end_matches(')');
            if part.is_empty() {
                return Err(malformed("empty entry"));
            }
            let exps = part
                .split(',')
                .map(|x| x.trim().parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| malformed("exponents must be natural numbers"))?;
            entries.push(MultiIndex::new(exps));
        }
        IndexTuple::new(entries).map_err(|e| malformed(&e.to_string()))
    }
}

impl<'de> Deserialize<'de> for IndexTuple {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<MultiIndex>::deserialize(d)?;
        IndexTuple::new(entries).map_err(serde::de::Error::custom)
    }
}

/// All tuples of `j` multi-indices in dimension `n` with `|α^j| = total`,
/// in ascending lexicographic order of the flattened exponent vector.
pub fn enumerate_index_tuples(j: usize, n: usize, total: u32) -> Vec<IndexTuple> {
    assert!(j >= 1 && n >= 1, "enumeration needs j >= 1 and n >= 1");
    let slots = j * n;
    let mut out = Vec::new();
    let mut current = vec![0u32; slots];
    fill(&mut current, 0, total, &mut |flat| {
        let entries = flat.chunks(n).map(|c| MultiIndex::new(c.to_vec())).collect();
        out.push(IndexTuple(entries));
    });
    out
}

fn fill(current: &mut [u32], pos: usize, remaining: u32, emit: &mut impl FnMut(&[u32])) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        emit(current);
        return;
    }
    for v in 0..=remaining {
        current[pos] = v;
        fill(current, pos + 1, remaining - v, emit);
    }
}

/// All multi-indices of dimension `n` and order exactly `m`, ascending.
pub fn multi_indices_of_order(n: usize, m: u32) -> Vec<MultiIndex> {
    enumerate_index_tuples(1, n, m)
        .into_iter()
        .map(|t| t.0.into_iter().next().unwrap())
        .collect()
}
