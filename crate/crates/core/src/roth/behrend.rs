use serde::{Deserialize, Serialize};

use super::IntegerSet;
use crate::error::{Error, Result};

/// Grid points beyond this are not enumerated.
pub const MAX_GRID_POINTS: u64 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BehrendParams {
    /// Digits range over `1..=m`.
    pub m: u64,
    pub d: u32,
    pub r_squared: u64,
    /// `(2m)^d`.
    pub n: u64,
}

fn grid_size(m: u64, d: u32) -> Result<(u64, u64)> {
    let n = (2 * m)
        .checked_pow(d)
        .ok_or_else(|| Error::arg(format!("(2m)^d overflows for m={m}, d={d}")))?;
    let points = m.pow(d);
    if points > MAX_GRID_POINTS {
        return Err(Error::arg(format!("grid {{1..{m}}}^{d} has {points} points, cap is {MAX_GRID_POINTS}")));
    }
    Ok((n, points))
}

/// Visits every point of `{1..m}^d` in odometer order (first coordinate fastest).
fn for_each_point(m: u64, d: u32, mut f: impl FnMut(&[u64])) {
    let mut x = vec![1u64; d as usize];
    loop {
        f(&x);
        let mut i = 0;
        loop {
            if i == x.len() {
                return;
            }
            if x[i] < m {
                x[i] += 1;
                break;
            }
            x[i] = 1;
            i += 1;
        }
    }
}

/// Points of `{1..m}^d` with squared norm `r_squared`, in odometer order.
pub fn sphere_points(m: u64, d: u32, r_squared: u64) -> Result<Vec<Vec<u64>>> {
    if m == 0 || d == 0 {
        return Err(Error::arg("sphere points need m >= 1 and d >= 1"));
    }
    grid_size(m, d)?;
    let mut out = Vec::new();
    for_each_point(m, d, |x| {
        if x.iter().map(|&c| c * c).sum::<u64>() == r_squared {
            out.push(x.to_vec());
        }
    });
    Ok(out)
}

/// `Σ (x_i − 1)·base^{i−1} + 1`.
pub fn embed_digits(point: &[u64], base: u64) -> Result<u64> {
    let mut value: u64 = 0;
    let mut scale: u64 = 1;
    for (i, &x) in point.iter().enumerate() {
        if x == 0 || x > base {
            return Err(Error::arg(format!("digit {x} does not fit base {base}")));
        }
        value = (x - 1)
            .checked_mul(scale)
            .and_then(|t| value.checked_add(t))
            .ok_or_else(|| Error::arg("embedded value overflows"))?;
        if i + 1 < point.len() {
            scale = scale.checked_mul(base).ok_or_else(|| Error::arg("embedded value overflows"))?;
        }
    }
    value.checked_add(1).ok_or_else(|| Error::arg("embedded value overflows"))
}

/// Points of `{1..m}^d` on the most popular sphere (smallest radius on
/// ties), embedded in base `2m`. Digit sums of two points stay below `2m`, so
/// the embedding adds no progressions and the result is AP3-free.
pub fn behrend_set(m: u64, d: u32) -> Result<(IntegerSet, BehrendParams)> {
    if m < 2 || d < 2 {
        return Err(Error::arg(format!("Behrend construction needs m >= 2 and d >= 2, got m={m}, d={d}")));
    }
    let (n, _) = grid_size(m, d)?;
    let max_r2 = d as u64 * m * m;
    let mut tally = vec![0u64; max_r2 as usize + 1];
    for_each_point(m, d, |x| tally[x.iter().map(|&c| c * c).sum::<u64>() as usize] += 1);
    let (r_squared, _) = tally
        .iter()
        .enumerate()
        .fold((0usize, 0u64), |best, (r2, &c)| if c > best.1 { (r2, c) } else { best });
    let r_squared = r_squared as u64;
    let mut elements = Vec::new();
    for_each_point(m, d, |x| {
        if x.iter().map(|&c| c * c).sum::<u64>() == r_squared {
            elements.push(embed_digits(x, 2 * m).expect("fits: (2m)^d was checked"));
        }
    });
    let set = IntegerSet::from_unsorted(elements, n)?;
    Ok((set, BehrendParams { m, d, r_squared, n }))
}

/// The `d` range scanned by [`behrend_optimize`]:
/// `[max(2, ⌊½√(ln n / ln 4)⌋), ⌈2√(ln n / ln 4)⌉]`.
pub fn behrend_dimension_window(n: u64) -> (u32, u32) {
    let t = ((n as f64).ln() / 4f64.ln()).sqrt();
    let lo = ((0.5 * t).floor() as u32).max(2);
    let hi = ((2.0 * t).ceil() as u32).max(lo);
    (lo, hi)
}

/// Largest `m` with `(2m)^d ≤ n`.
fn largest_m(n: u64, d: u32) -> u64 {
    let mut m = ((n as f64).powf(1.0 / d as f64) / 2.0).floor() as u64;
    while m > 0 && (2 * m).checked_pow(d).is_none_or(|v| v > n) {
        m -= 1;
    }
    while (2 * (m + 1)).checked_pow(d).is_some_and(|v| v <= n) {
        m += 1;
    }
    m
}

/// Densest [`behrend_set`] with `(2m)^d ≤ n` over the dimension window,
/// reported with ambient bound `n`. Ties keep the smaller `d`.
pub fn behrend_optimize(n: u64) -> Result<(IntegerSet, BehrendParams)> {
    if n < 16 {
        return Err(Error::arg(format!("behrend_optimize needs n >= 16, got {n}")));
    }
    let (lo, hi) = behrend_dimension_window(n);
    let mut best: Option<(IntegerSet, BehrendParams)> = None;
    for d in lo..=hi {
        let m = largest_m(n, d);
        if m < 2 || m.checked_pow(d).is_none_or(|p| p > MAX_GRID_POINTS) {
            continue;
        }
        let (set, params) = behrend_set(m, d)?;
        if best.as_ref().is_none_or(|(b, _)| set.len() > b.len()) {
            best = Some((set, params));
        }
    }
    let (set, params) = best.ok_or_else(|| Error::arg(format!("no admissible (m, d) for n={n}")))?;
    Ok((IntegerSet::new(set.elements().to_vec(), n)?, params))
}
