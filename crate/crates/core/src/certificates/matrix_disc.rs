use super::{HapFamily, validate_hap};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Real;
use crate::seq::{all_haps, Hap};

/// Largest `|Σ_{i∈P, j∈Q} a_ij|` and the first pair attaining it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixDiscrepancy<T> {
    pub value: T,
    pub p: Hap,
    pub q: Hap,
}

/// Maximises `|Σ_{i∈P} Σ_{j∈Q} a_ij|` over the family. For the full family
/// this runs in `O(H²)` with `H ≈ N ln N` HAPs, using row sums along every
/// column HAP. Ties resolve to the first pair in `(P.d, P.m, Q.d, Q.m)` order.
pub fn matrix_hap_discrepancy<T: Real>(a: &Matrix<T>, family: &HapFamily) -> Result<MatrixDiscrepancy<T>> {
    if !a.is_square() {
        return Err(Error::arg(format!("matrix discrepancy needs a square matrix, got {}x{}", a.rows(), a.cols())));
    }
    let n = a.rows();
    if n == 0 {
        return Err(Error::arg("matrix discrepancy of an empty matrix"));
    }
    match family {
        HapFamily::AllPairs => Ok(all_pairs(a)),
        HapFamily::Diagonal => {
            let mut best: Option<MatrixDiscrepancy<T>> = None;
            for p in all_haps(n) {
                consider(&mut best, direct(a, p, p), p, p);
            }
            Ok(best.expect("at least one HAP"))
        }
        HapFamily::Pairs(pairs) => {
            let mut best = None;
            for &(p, q) in pairs {
                validate_hap(&p, n)?;
                validate_hap(&q, n)?;
                consider(&mut best, direct(a, p, q), p, q);
            }
            best.ok_or_else(|| Error::arg("empty HAP-pair family"))
        }
    }
}

fn consider<T: Real>(best: &mut Option<MatrixDiscrepancy<T>>, sum: T, p: Hap, q: Hap) {
    let value = sum.abs();
    if best.as_ref().is_none_or(|b| value > b.value) {
        *best = Some(MatrixDiscrepancy { value, p, q });
    }
}

fn direct<T: Real>(a: &Matrix<T>, p: Hap, q: Hap) -> T {
    p.elements().flat_map(|i| q.elements().map(move |j| a[(i - 1, j - 1)])).sum()
}

fn all_pairs<T: Real>(a: &Matrix<T>) -> MatrixDiscrepancy<T> {
    let n = a.rows();
    let haps = all_haps(n);
    // row_sums[i][k] = Σ_{j ∈ haps[k]} a_{i+1, j}; HAPs with a common d are
    // contiguous and ordered by m, so each is a running sum.
    let mut row_sums = vec![vec![T::zero(); haps.len()]; n];
    for (i, out) in row_sums.iter_mut().enumerate() {
        let row = a.row(i);
        let mut k = 0;
        for d in 1..=n {
            let mut acc = T::zero();
            for m in 1..=n / d {
                acc += row[m * d - 1];
                out[k] = acc;
                k += 1;
            }
        }
    }
    let mut best: Option<MatrixDiscrepancy<T>> = None;
    let mut acc = vec![T::zero(); haps.len()];
    for d in 1..=n {
        acc.iter_mut().for_each(|v| *v = T::zero());
        for m in 1..=n / d {
            let p = Hap { d, m };
            for ((v, &r), &q) in acc.iter_mut().zip(&row_sums[m * d - 1]).zip(&haps) {
                *v += r;
                consider(&mut best, *v, p, q);
            }
        }
    }
    best.expect("at least one HAP")
}
