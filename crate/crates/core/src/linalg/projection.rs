use super::{symmetric_eigen, Matrix, SymmetricEigen};
use crate::error::Result;
use crate::scalar::Real;

/// Nearest PSD matrix in Frobenius norm: negative eigenvalues are clipped.
/// The decomposition is returned as well so callers can reuse the spectrum.
pub fn project_psd<T: Real>(a: &Matrix<T>) -> Result<(Matrix<T>, SymmetricEigen<T>)> {
    let eig = symmetric_eigen(a)?;
    let projected = eig.reconstruct_with(|l| l.max(T::zero()));
    Ok((projected, eig))
}

/// Euclidean projection onto `{x ≥ 0, Σx = total}` by the sort-and-threshold rule.
pub fn project_simplex<T: Real>(v: &[T], total: T) -> Vec<T> {
    if v.is_empty() {
        return Vec::new();
    }
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let mut acc = T::zero();
    let mut theta = T::zero();
    for (k, &u) in sorted.iter().enumerate() {
        acc += u;
        let t = (acc - total) / T::of_usize(k + 1);
        if u - t > T::zero() {
            theta = t;
        } else {
            break;
        }
    }
    v.iter().map(|&x| (x - theta).max(T::zero())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn psd_projection_clips_negative_part() {
        let a = Matrix::from_rows(vec![vec![1.0f64, 2.0], vec![2.0, 1.0]]).unwrap();
        let (p, eig) = project_psd(&a).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-12);
        let expected = Matrix::from_fn(2, 2, |_, _| 1.5);
        assert!(p.sub(&expected).max_abs() < 1e-12);
    }

    #[test]
    fn simplex_projection_examples() {
        assert_eq!(project_simplex(&[0.5, 0.5], 1.0), vec![0.5, 0.5]);
        assert_eq!(project_simplex(&[2.0, 0.0], 1.0), vec![1.0, 0.0]);
        let p = project_simplex(&[0.0f64, 0.0, 0.0], 1.0);
        assert!(p.iter().all(|&x| (x - 1.0 / 3.0).abs() < 1e-15));
    }

    proptest! {
        #[test]
        fn simplex_projection_is_optimal(v in prop::collection::vec(-3.0f64..3.0, 1..12)) {
            let p = project_simplex(&v, 1.0);
            prop_assert!(p.iter().all(|&x| x >= 0.0));
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            // Variational inequality: (v - p)·(q - p) ≤ 0 at every vertex q.
            for k in 0..v.len() {
                let mut ip = 0.0;
                for i in 0..v.len() {
                    let q = if i == k { 1.0 } else { 0.0 };
                    ip += (v[i] - p[i]) * (q - p[i]);
                }
                prop_assert!(ip <= 1e-10);
            }
        }
    }
}
