//! A laboratory for discrepancy along homogeneous arithmetic progressions.
//!
//! The crate is organised by task:
//!
//! * [`seq`]: sign sequences, HAPs and the `O(N log N)` discrepancy engine.
//! * [`constructions`]: structured sequences and multiplicative statistics.
//! * [`search`]: backtracking search for long low-discrepancy sequences.
//! * [`certificates`]: lower-bound certificates (PSD quadratic forms and
//!   diagonal representations by HAP matrices) with independent verifiers.
//! * [`roth`]: AP-free sets (Behrend, random deletion, cap sets) and counters.
//! * [`linalg`]: the dense linear algebra the certificate solvers run on.
//!
//! Floating-point code is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64`, which is what the CLI and the acceptance
//! suite use.

pub mod arith;
pub mod certificates;
pub mod constructions;
pub mod error;
pub mod linalg;
pub mod roth;
pub mod scalar;
pub mod search;
pub mod seq;

pub use error::{Error, Rejection, Result};
pub use scalar::Real;
pub use seq::{discrepancy, hap_sum, DiscrepancyReport, Hap, SignSequence};

pub type VectorSequence = seq::VectorSequence<f64>;
pub type ComplexSequence = constructions::ComplexSequence<f64>;
pub type QuadraticCertificate = certificates::QuadraticCertificate<f64>;
pub type HapMatrixCertificate = certificates::HapMatrixCertificate<f64>;
pub type LowerBound = certificates::LowerBound<f64>;
pub type Matrix = linalg::Matrix<f64>;
