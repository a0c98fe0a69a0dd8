//! Lower-bound certificates for HAP discrepancy.
//!
//! Two certificate kinds are supported, each with a searcher and an
//! independent verifier:
//!
//! * [`QuadraticCertificate`]: weights `c` on HAPs (a probability vector) and
//!   diagonal weights `b` such that `Σ c·A_{m,d} − diag(b)` is PSD, where
//!   `A_{m,d}` is the outer product of the HAP indicator. Every `±1` sequence
//!   then has some HAP sum with square at least `Σ b`.
//! * [`HapMatrixCertificate`]: a diagonal matrix written as a signed
//!   combination of HAP product matrices with `Σ|λ| ≤ 1`; the trace bounds the
//!   squared discrepancy.
//!
//! Verifiers recompute everything from the certificate itself and apply the
//! stated tolerances pessimistically, so an accepted bound is a true bound.
//! [`minimize_vector_discrepancy`] supplies upper bounds from the other side.

mod diagonal;
mod format;
mod matrix_disc;
mod quadratic;
mod vector_opt;

use serde::{Deserialize, Serialize};

use crate::seq::{all_haps, Hap};
use crate::scalar::Real;

pub use diagonal::{
    hap_product_matrix, representation_matrix, search_diagonal_representation, verify_diagonal_representation,
    HapMatrixCertificate, HapMatrixTerm, LpConfig, LpSolution,
};
pub use format::{load_certificate, parse_certificate, save_certificate, Certificate};
pub use matrix_disc::{matrix_hap_discrepancy, MatrixDiscrepancy};
pub use quadratic::{
    hap_quadratic_matrix, quadratic_form_matrix, search_quadratic_certificate, verify_quadratic_certificate,
    QuadraticCertificate, SdpConfig, SdpOutcome,
};
pub use vector_opt::{minimize_vector_discrepancy, VectorOptConfig};

/// Default PSD and off-diagonal tolerance.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateKind {
    Quadratic,
    Diagonal,
}

/// A verified lower bound on the discrepancy of every `±1` sequence of
/// length `n`: `bound = √certified_c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowerBound<T> {
    pub bound: T,
    pub n: usize,
    pub source: CertificateKind,
    pub certified_c: T,
}

impl<T: Real> LowerBound<T> {
    pub(crate) fn from_squared(n: usize, source: CertificateKind, squared: T) -> Self {
        let certified_c = squared.max(T::zero());
        LowerBound { bound: certified_c.sqrt(), n, source, certified_c }
    }
}

/// Which HAP pairs `(P, Q)` a search or evaluation ranges over.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HapFamily {
    /// Every pair of HAPs inside `{1..N}`.
    #[default]
    AllPairs,
    /// Pairs with `Q = P` only.
    Diagonal,
    /// An explicit list.
    Pairs(Vec<(Hap, Hap)>),
}

impl HapFamily {
    /// The ordered pairs of the family at horizon `n`.
    pub fn pairs(&self, n: usize) -> crate::Result<Vec<(Hap, Hap)>> {
        match self {
            HapFamily::AllPairs => {
                let haps = all_haps(n);
                Ok(haps.iter().flat_map(|&p| haps.iter().map(move |&q| (p, q))).collect())
            }
            HapFamily::Diagonal => Ok(all_haps(n).into_iter().map(|p| (p, p)).collect()),
            HapFamily::Pairs(pairs) => {
                for (p, q) in pairs {
                    validate_hap(p, n)?;
                    validate_hap(q, n)?;
                }
                Ok(pairs.clone())
            }
        }
    }
}

pub(crate) fn validate_hap(h: &Hap, n: usize) -> crate::Result<()> {
    Hap::new(h.d, h.m)?;
    h.check_within(n)
}
