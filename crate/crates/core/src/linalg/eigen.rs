//! Symmetric eigendecomposition: Householder reduction to tridiagonal form
//! followed by the implicit QL method with Wilkinson-style shifts.
//!
//! The routine follows the classic `tred2`/`tql2` pair (EISPACK, as carried
//! through JAMA), written against [`Real`] so it runs in `f32` and `f64`.

use super::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `A = V · diag(values) · Vᵀ` with eigenvalues in ascending order and the
/// matching eigenvectors as the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct SymmetricEigen<T> {
    pub values: Vec<T>,
    pub vectors: Matrix<T>,
}

impl<T: Real> SymmetricEigen<T> {
    pub fn min_value(&self) -> T {
        self.values.first().copied().unwrap_or_else(T::zero)
    }

    /// Eigenvector `k` as a vector.
    pub fn vector(&self, k: usize) -> Vec<T> {
        (0..self.vectors.rows()).map(|i| self.vectors[(i, k)]).collect()
    }

    /// `V · diag(f(λ)) · Vᵀ`.
    pub fn reconstruct_with(&self, f: impl Fn(T) -> T) -> Matrix<T> {
        let n = self.values.len();
        let scaled: Vec<T> = self.values.iter().map(|&l| f(l)).collect();
        let mut out = Matrix::zeros(n, n);
        for k in 0..n {
            let s = scaled[k];
            if s == T::zero() {
                continue;
            }
            for i in 0..n {
                let vik = self.vectors[(i, k)] * s;
                if vik == T::zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += vik * self.vectors[(j, k)];
                }
            }
        }
        out
    }
}

/// Eigendecomposition of a symmetric matrix. Only symmetry within a loose
/// relative tolerance is checked; the lower triangle is what gets used.
pub fn symmetric_eigen<T: Real>(a: &Matrix<T>) -> Result<SymmetricEigen<T>> {
    if !a.is_square() {
        return Err(Error::arg(format!("eigendecomposition needs a square matrix, got {}x{}", a.rows(), a.cols())));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(SymmetricEigen { values: Vec::new(), vectors: Matrix::zeros(0, 0) });
    }
    let scale = a.max_abs().max(T::one());
    if !a.is_symmetric(scale * T::epsilon().sqrt()) {
        return Err(Error::arg("eigendecomposition needs a symmetric matrix"));
    }
    let mut v: Vec<T> = a.as_slice().to_vec();
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    tred2(n, &mut v, &mut d, &mut e);
    tql2(n, &mut v, &mut d, &mut e)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&k| d[k]).collect();
    let vectors = Matrix::from_fn(n, n, |i, k| v[i * n + order[k]]);
    Ok(SymmetricEigen { values, vectors })
}

/// Householder tridiagonalisation. On exit `v` holds the orthogonal
/// transform, `d` the diagonal and `e[1..]` the subdiagonal.
#[allow(clippy::needless_range_loop)]
fn tred2<T: Real>(n: usize, v: &mut [T], d: &mut [T], e: &mut [T]) {
    let idx = |i: usize, j: usize| i * n + j;
    for j in 0..n {
        d[j] = v[idx(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = T::zero();
        let mut h = T::zero();
        for k in 0..i {
            scale += d[k].abs();
        }
        if scale == T::zero() {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[idx(i - 1, j)];
                v[idx(i, j)] = T::zero();
                v[idx(j, i)] = T::zero();
            }
        } else {
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > T::zero() {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for j in 0..i {
                e[j] = T::zero();
            }
            for j in 0..i {
                f = d[j];
                v[idx(j, i)] = f;
                g = e[j] + v[idx(j, j)] * f;
                for k in j + 1..i {
                    g += v[idx(k, j)] * d[k];
                    e[k] += v[idx(k, j)] * f;
                }
                e[j] = g;
            }
            f = T::zero();
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[idx(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[idx(i - 1, j)];
                v[idx(i, j)] = T::zero();
            }
        }
        d[i] = h;
    }

    for i in 0..n - 1 {
        v[idx(n - 1, i)] = v[idx(i, i)];
        v[idx(i, i)] = T::one();
        let h = d[i + 1];
        if h != T::zero() {
            for k in 0..=i {
                d[k] = v[idx(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = T::zero();
                for k in 0..=i {
                    g += v[idx(k, i + 1)] * v[idx(k, j)];
                }
                for k in 0..=i {
                    v[idx(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[idx(k, i + 1)] = T::zero();
        }
    }
    for j in 0..n {
        d[j] = v[idx(n - 1, j)];
        v[idx(n - 1, j)] = T::zero();
    }
    v[idx(n - 1, n - 1)] = T::one();
    e[0] = T::zero();
}

/// Implicit QL iterations on the tridiagonal matrix from [`tred2`].
fn tql2<T: Real>(n: usize, v: &mut [T], d: &mut [T], e: &mut [T]) -> Result<()> {
    let idx = |i: usize, j: usize| i * n + j;
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();

    let two = T::of(2.0);
    let eps = T::epsilon();
    let mut f = T::zero();
    let mut tst1 = T::zero();
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 60 {
                    return Err(Error::Inconclusive("symmetric QL iteration did not converge".into()));
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (two * e[l]);
                let mut r = p.hypot(T::one());
                if p < T::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        h = v[idx(k, i + 1)];
                        v[idx(k, i + 1)] = s * v[idx(k, i)] + c * h;
                        v[idx(k, i)] = c * v[idx(k, i)] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = T::zero();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_symmetric(n: usize, rng: &mut ChaCha8Rng) -> Matrix<f64> {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let x: f64 = rng.random_range(-1.0..1.0);
                m[(i, j)] = x;
                m[(j, i)] = x;
            }
        }
        m
    }

    #[test]
    fn reconstructs_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=30 {
            let a = random_symmetric(n, &mut rng);
            let eig = symmetric_eigen(&a).unwrap();
            assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
            let back = eig.reconstruct_with(|l| l);
            assert!(back.sub(&a).max_abs() < 1e-12 * n as f64, "n={n}");
            let vtv = eig.vectors.transpose().mul(&eig.vectors);
            assert!(vtv.sub(&Matrix::identity(n)).max_abs() < 1e-12 * n as f64);
        }
    }

    #[test]
    fn agrees_with_nalgebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [2, 5, 12, 40] {
            let a = random_symmetric(n, &mut rng);
            let na = nalgebra::DMatrix::from_row_slice(n, n, a.as_slice());
            let mut theirs: Vec<f64> = na.symmetric_eigen().eigenvalues.iter().copied().collect();
            theirs.sort_by(|x, y| x.partial_cmp(y).unwrap());
            let ours = symmetric_eigen(&a).unwrap().values;
            for (x, y) in ours.iter().zip(&theirs) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn degenerate_and_diagonal_inputs() {
        let ones = Matrix::from_fn(4, 4, |_, _| 1.0f64);
        let eig = symmetric_eigen(&ones).unwrap();
        let expected = [0.0, 0.0, 0.0, 4.0];
        for (x, y) in eig.values.iter().zip(expected) {
            assert!((x - y).abs() < 1e-12);
        }
        let diag = Matrix::from_diagonal(&[3.0, -1.0, 2.0]);
        assert_eq!(symmetric_eigen(&diag).unwrap().values, vec![-1.0, 2.0, 3.0]);
        assert_eq!(symmetric_eigen(&Matrix::<f64>::zeros(1, 1)).unwrap().values, vec![0.0]);
    }

    #[test]
    fn single_precision() {
        let a = Matrix::<f32>::from_rows(vec![vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let v = symmetric_eigen(&a).unwrap().values;
        assert!((v[0] - 1.0).abs() < 1e-5 && (v[1] - 3.0).abs() < 1e-5);
    }

    #[test]
    fn rejects_non_symmetric() {
        let a = Matrix::from_rows(vec![vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(symmetric_eigen(&a).is_err());
        assert!(symmetric_eigen(&Matrix::<f64>::zeros(2, 3)).is_err());
    }
}
