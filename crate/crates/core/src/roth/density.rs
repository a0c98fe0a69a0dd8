use serde::Serialize;

use super::IntegerSet;
use crate::scalar::compensated_sum;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport {
    /// `(n, δ(n))` on a geometric grid ending at the ambient bound.
    pub densities: Vec<(u64, f64)>,
    /// `Σ_{a∈A} 1/a`.
    pub reciprocal_sum: f64,
    /// `δ(N) + Σ_{n≤N} δ(n−1)/n` at the ambient bound `N`.
    pub abel_sum: f64,
    pub identity_holds: bool,
}

/// Grid points per factor of ten.
const GRID_PER_DECADE: f64 = 10.0;

pub fn geometric_grid(n: u64) -> Vec<u64> {
    let mut grid = Vec::new();
    let mut k = 0;
    loop {
        let v = 10f64.powf(k as f64 / GRID_PER_DECADE).round() as u64;
        if v >= n {
            break;
        }
        if grid.last() != Some(&v) {
            grid.push(v);
        }
        k += 1;
    }
    if n > 0 {
        grid.push(n);
    }
    grid
}

/// Densities on [`geometric_grid`] plus the reciprocal sum, checked against
/// its summation-by-parts form to `1e-9`.
pub fn density_report(s: &IntegerSet) -> DensityReport {
    let n = s.ambient_n();
    let e = s.elements();
    let count_upto = |x: u64| e.partition_point(|&a| a <= x);
    let densities = geometric_grid(n).into_iter().map(|x| (x, count_upto(x) as f64 / x as f64)).collect();
    let reciprocal_sum = compensated_sum(e.iter().map(|&a| 1.0 / a as f64));

    let mut terms = Vec::with_capacity(n as usize + 1);
    let mut below = 0usize;
    for k in 1..=n {
        // below = |A ∩ [1, k−1]|
        if k > 1 {
            terms.push(below as f64 / ((k - 1) as f64 * k as f64));
        }
        if e.get(below) == Some(&k) {
            below += 1;
        }
    }
    if n > 0 {
        terms.push(below as f64 / n as f64);
    }
    let abel_sum = compensated_sum(terms);
    let identity_holds = (abel_sum - reciprocal_sum).abs() <= 1e-9 * reciprocal_sum.max(1.0);
    DensityReport { densities, reciprocal_sum, abel_sum, identity_holds }
}
