//! Sign sequences, homogeneous arithmetic progressions and the discrepancy
//! engine.
//!
//! Positions are 1-indexed everywhere in the public API: `seq.value(1)` is the
//! first entry and a HAP `(d, m)` covers positions `d, 2d, ..., md`.

mod format;
mod vector;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use format::{parse_sequence, read_sequence, write_sequence, format_sequence};
pub use vector::{vector_discrepancy, vector_hap_norm, VectorSequence};

/// A homogeneous arithmetic progression `{d, 2d, ..., md}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Hap {
    pub d: usize,
    pub m: usize,
}

impl Hap {
    pub fn new(d: usize, m: usize) -> Result<Self> {
        if d == 0 || m == 0 {
            return Err(Error::arg(format!("HAP needs d >= 1 and m >= 1, got d={d}, m={m}")));
        }
        Ok(Hap { d, m })
    }

    /// Largest element, `m·d`.
    #[inline]
    pub fn last(&self) -> usize {
        self.m * self.d
    }

    /// The elements `d, 2d, ..., md` in increasing order.
    pub fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.m).map(move |j| j * self.d)
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i > 0 && i % self.d == 0 && i / self.d <= self.m
    }

    /// Number of common elements with `other`.
    pub fn overlap(&self, other: &Hap) -> usize {
        let l = lcm(self.d, other.d);
        self.last().min(other.last()) / l
    }

    pub(crate) fn check_within(&self, n: usize) -> Result<()> {
        if self.last() > n {
            return Err(Error::Range { index: self.last(), len: n });
        }
        Ok(())
    }
}

impl fmt::Display for Hap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(d={}, m={})", self.d, self.m)
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Every HAP that fits inside `{1, ..., n}`, ordered by `d` then `m`.
pub fn all_haps(n: usize) -> Vec<Hap> {
    (1..=n).flat_map(|d| (1..=n / d).map(move |m| Hap { d, m })).collect()
}

/// A finite sequence with entries in `{-1, 0, +1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignSequence {
    values: Vec<i8>,
}

impl SignSequence {
    pub fn new(values: Vec<i8>) -> Result<Self> {
        if let Some(pos) = values.iter().position(|v| !(-1..=1).contains(v)) {
            return Err(Error::invalid(format!(
                "entry {} at position {} is not in {{-1, 0, 1}}",
                values[pos],
                pos + 1
            )));
        }
        Ok(SignSequence { values })
    }

    /// Builds from entries already known to be in `{-1, 0, 1}`.
    pub(crate) fn from_trusted(values: Vec<i8>) -> Self {
        debug_assert!(values.iter().all(|v| (-1..=1).contains(v)));
        SignSequence { values }
    }

    pub fn constant(n: usize, value: i8) -> Result<Self> {
        Self::new(vec![value; n])
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Entry at 1-based position `n`.
    #[inline]
    pub fn value(&self, n: usize) -> i8 {
        self.values[n - 1]
    }

    pub fn get(&self, n: usize) -> Option<i8> {
        if n == 0 {
            None
        } else {
            self.values.get(n - 1).copied()
        }
    }

    /// Entries in order, position 1 first.
    pub fn as_slice(&self) -> &[i8] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<i8> {
        self.values
    }

    pub fn prefix(&self, len: usize) -> SignSequence {
        SignSequence { values: self.values[..len.min(self.len())].to_vec() }
    }

    pub fn negated(&self) -> SignSequence {
        SignSequence { values: self.values.iter().map(|v| -v).collect() }
    }

    /// Errors if any entry is zero; used by operations that need strict ±1.
    pub fn require_pm1(&self) -> Result<()> {
        match self.values.iter().position(|&v| v == 0) {
            Some(pos) => Err(Error::invalid(format!("zero entry at position {}", pos + 1))),
            None => Ok(()),
        }
    }

    /// `s_n = x_1 + ... + x_n` for `n = 1..=len`.
    pub fn partial_sums(&self) -> Vec<i64> {
        self.values
            .iter()
            .scan(0i64, |acc, &v| {
                *acc += v as i64;
                Some(*acc)
            })
            .collect()
    }
}

/// Sum of the entries along `hap`.
pub fn hap_sum(seq: &SignSequence, hap: Hap) -> Result<i64> {
    hap.check_within(seq.len())?;
    Ok(hap.elements().map(|i| seq.value(i) as i64).sum())
}

/// Maximum absolute HAP sum, with one attaining HAP and the maxima per `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscrepancyReport {
    pub max_abs_sum: u64,
    pub witness: Hap,
    /// `per_d_max[d - 1]` is the largest `|sum|` over HAPs with difference `d`.
    pub per_d_max: Vec<u64>,
}

impl DiscrepancyReport {
    pub fn max_for(&self, d: usize) -> Option<u64> {
        d.checked_sub(1).and_then(|i| self.per_d_max.get(i).copied())
    }
}

#[derive(Serialize, Deserialize)]
struct ReportDoc {
    max_abs_sum: u64,
    witness_d: usize,
    witness_m: usize,
    per_d_max: BTreeMap<usize, u64>,
}

impl Serialize for DiscrepancyReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ReportDoc {
            max_abs_sum: self.max_abs_sum,
            witness_d: self.witness.d,
            witness_m: self.witness.m,
            per_d_max: self.per_d_max.iter().enumerate().map(|(i, &v)| (i + 1, v)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiscrepancyReport {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = ReportDoc::deserialize(de)?;
        let n = doc.per_d_max.len();
        if doc.per_d_max.keys().copied().ne(1..=n) {
            return Err(D::Error::custom("per_d_max keys must be 1..=N without gaps"));
        }
        let witness = Hap::new(doc.witness_d, doc.witness_m).map_err(D::Error::custom)?;
        Ok(DiscrepancyReport {
            max_abs_sum: doc.max_abs_sum,
            witness,
            per_d_max: doc.per_d_max.into_values().collect(),
        })
    }
}

/// HAP discrepancy of `seq` in `O(N log N)` via one running sum per `d`.
///
/// The witness is the first HAP attaining the maximum, scanning `d` then `m`
/// in increasing order.
pub fn discrepancy(seq: &SignSequence) -> Result<DiscrepancyReport> {
    let n = seq.len();
    if n == 0 {
        return Err(Error::arg("discrepancy of an empty sequence"));
    }
    let mut per_d_max = Vec::with_capacity(n);
    let mut best = (0u64, Hap { d: 1, m: 1 });
    let mut have_best = false;
    for d in 1..=n {
        let mut sum = 0i64;
        let mut local = 0u64;
        for m in 1..=n / d {
            sum += seq.value(m * d) as i64;
            let a = sum.unsigned_abs();
            if a > local {
                local = a;
            }
            if !have_best || a > best.0 {
                best = (a, Hap { d, m });
                have_best = true;
            }
        }
        per_d_max.push(local);
    }
    Ok(DiscrepancyReport { max_abs_sum: best.0, witness: best.1, per_d_max })
}
