//! Slow reference implementations and stored goldens shared by the
//! integration tests. Nothing here calls the code under test.

#![allow(dead_code)]

use serde::Deserialize;

#[derive(Debug, Deserialize)]
pub struct Goldens {
    pub record_11: Vec<i8>,
    pub longest_c1: usize,
    pub longest_multiplicative_c1: usize,
    pub longest_multiplicative_c2: usize,
    pub count_sequences_c1_len11: u64,
    pub modular_min_horizon_p3_nmax20: usize,
    /// Reference SDP optimum `Σ b` for `N = 1..=12`.
    pub sdp_objective: Vec<f64>,
    /// Reference LP optimum (trace) for `N = 1..=12`.
    pub lp_trace: Vec<f64>,
}

pub fn goldens() -> Goldens {
    serde_json::from_str(include_str!("../data/goldens.json")).expect("goldens.json parses")
}

/// Discrepancy by summing every HAP from scratch.
pub fn naive_discrepancy(x: &[i8]) -> u64 {
    let n = x.len();
    let mut best = 0u64;
    for d in 1..=n {
        for m in 1..=n / d {
            let s: i64 = (1..=m).map(|j| x[j * d - 1] as i64).sum();
            best = best.max(s.unsigned_abs());
        }
    }
    best
}

/// Sign vector of the `n`-bit pattern `mask`.
pub fn signs_from_mask(mask: u64, n: usize) -> Vec<i8> {
    (0..n).map(|i| if mask >> i & 1 == 1 { 1 } else { -1 }).collect()
}

/// Minimum discrepancy over all `2ⁿ` sign sequences of length `n`.
pub fn exhaustive_min_discrepancy(n: usize) -> u64 {
    (0..1u64 << n).map(|mask| naive_discrepancy(&signs_from_mask(mask, n))).min().unwrap_or(0)
}

/// Number of sign sequences of length `n` with discrepancy at most `c`.
pub fn exhaustive_count(c: u64, n: usize) -> u64 {
    (0..1u64 << n).filter(|&mask| naive_discrepancy(&signs_from_mask(mask, n)) <= c).count() as u64
}

/// Whether some element is the mean of two others, checked over all pairs.
pub fn naive_has_ap3(xs: &[u64]) -> bool {
    let set: std::collections::HashSet<u64> = xs.iter().copied().collect();
    xs.iter().enumerate().any(|(i, &a)| xs[i + 1..].iter().any(|&b| (a + b) % 2 == 0 && set.contains(&((a + b) / 2)) && a != b))
}
