//! Real vector sequences and their HAP discrepancy.

use super::Hap;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// An ordered list of vectors in `R^dim`, 1-indexed like [`super::SignSequence`].
#[derive(Debug, Clone, PartialEq)]
pub struct VectorSequence<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Real> VectorSequence<T> {
    pub fn new(dim: usize, vectors: Vec<Vec<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::arg("vector dimension must be positive"));
        }
        let mut data = Vec::with_capacity(dim * vectors.len());
        for (i, v) in vectors.into_iter().enumerate() {
            if v.len() != dim {
                return Err(Error::invalid(format!(
                    "vector {} has dimension {}, expected {dim}",
                    i + 1,
                    v.len()
                )));
            }
            data.extend(v);
        }
        Ok(VectorSequence { dim, data })
    }

    /// Like [`new`](Self::new) but also requires every vector to have
    /// Euclidean norm 1 within `tol`.
    pub fn unit(dim: usize, vectors: Vec<Vec<T>>, tol: T) -> Result<Self> {
        let vs = Self::new(dim, vectors)?;
        for i in 1..=vs.len() {
            let norm = norm(vs.vector(i));
            if (norm - T::one()).abs() > tol {
                return Err(Error::invalid(format!("vector {i} has norm {norm}, expected 1")));
            }
        }
        Ok(vs)
    }

    pub(crate) fn from_flat(dim: usize, data: Vec<T>) -> Self {
        debug_assert!(dim > 0 && data.len() % dim == 0);
        VectorSequence { dim, data }
    }

    /// Embeds a sign sequence as 1-dimensional vectors.
    pub fn from_signs(seq: &super::SignSequence) -> Self {
        let data = seq.as_slice().iter().map(|&v| T::of(v as f64)).collect();
        VectorSequence { dim: 1, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Vector at 1-based position `n`.
    #[inline]
    pub fn vector(&self, n: usize) -> &[T] {
        &self.data[(n - 1) * self.dim..n * self.dim]
    }

    pub(crate) fn flat(&self) -> &[T] {
        &self.data
    }
}

fn norm<T: Real>(v: &[T]) -> T {
    v.iter().map(|&x| x * x).sum::<T>().sqrt()
}

/// Euclidean norm of the sum of the vectors along `hap`.
pub fn vector_hap_norm<T: Real>(vs: &VectorSequence<T>, hap: Hap) -> Result<T> {
    hap.check_within(vs.len())?;
    let mut acc = vec![T::zero(); vs.dim()];
    for i in hap.elements() {
        for (a, &x) in acc.iter_mut().zip(vs.vector(i)) {
            *a += x;
        }
    }
    Ok(norm(&acc))
}

/// Maximum of [`vector_hap_norm`] over every HAP inside the sequence.
pub fn vector_discrepancy<T: Real>(vs: &VectorSequence<T>) -> Result<T> {
    let n = vs.len();
    if n == 0 {
        return Err(Error::arg("vector discrepancy of an empty sequence"));
    }
    let mut best = T::zero();
    let mut acc = vec![T::zero(); vs.dim()];
    for d in 1..=n {
        acc.iter_mut().for_each(|a| *a = T::zero());
        for m in 1..=n / d {
            for (a, &x) in acc.iter_mut().zip(vs.vector(m * d)) {
                *a += x;
            }
            best = best.max(norm(&acc));
        }
    }
    Ok(best)
}
