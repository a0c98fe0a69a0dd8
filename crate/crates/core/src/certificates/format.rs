//! JSON interchange format for certificates.
//!
//! ```json
//! {"kind": "quadratic", "n": 1, "tolerance": 1e-8,
//!  "terms": [{"m": 1, "d": 1, "c": 1.0}], "weights": [1.0]}
//! {"kind": "diagonal", "n": 1, "tolerance": 1e-8,
//!  "terms": [{"p": {"d": 1, "m": 1}, "q": {"d": 1, "m": 1}, "lambda": 1.0}]}
//! ```
//!
//! Floats are written in shortest round-trip form.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{
    verify_diagonal_representation, verify_quadratic_certificate, HapMatrixCertificate, HapMatrixTerm, LowerBound,
    QuadraticCertificate,
};
use crate::error::Result;
use crate::seq::Hap;

#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    Quadratic(QuadraticCertificate<f64>),
    Diagonal(HapMatrixCertificate<f64>),
}

impl Certificate {
    pub fn n(&self) -> usize {
        match self {
            Certificate::Quadratic(c) => c.n,
            Certificate::Diagonal(c) => c.n,
        }
    }

    pub fn verify(&self) -> Result<LowerBound<f64>> {
        match self {
            Certificate::Quadratic(c) => verify_quadratic_certificate(c),
            Certificate::Diagonal(c) => verify_diagonal_representation(c),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&File::from(self))?)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuadTerm {
    m: usize,
    d: usize,
    c: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum File {
    Quadratic { n: usize, tolerance: f64, terms: Vec<QuadTerm>, weights: Vec<f64> },
    Diagonal { n: usize, tolerance: f64, terms: Vec<HapMatrixTerm<f64>> },
}

impl From<&Certificate> for File {
    fn from(c: &Certificate) -> Self {
        match c {
            Certificate::Quadratic(q) => File::Quadratic {
                n: q.n,
                tolerance: q.psd_tolerance,
                terms: q.coeffs.iter().map(|&(h, c)| QuadTerm { m: h.m, d: h.d, c }).collect(),
                weights: q.weights.clone(),
            },
            Certificate::Diagonal(dg) => {
                File::Diagonal { n: dg.n, tolerance: dg.offdiag_tolerance, terms: dg.terms.clone() }
            }
        }
    }
}

impl From<File> for Certificate {
    fn from(f: File) -> Self {
        match f {
            File::Quadratic { n, tolerance, terms, weights } => Certificate::Quadratic(QuadraticCertificate {
                n,
                coeffs: terms.into_iter().map(|t| (Hap { d: t.d, m: t.m }, t.c)).collect(),
                weights,
                psd_tolerance: tolerance,
            }),
            File::Diagonal { n, tolerance, terms } => {
                Certificate::Diagonal(HapMatrixCertificate { n, terms, offdiag_tolerance: tolerance })
            }
        }
    }
}

pub fn parse_certificate(text: &str) -> Result<Certificate> {
    let file: File = serde_json::from_str(text)?;
    Ok(file.into())
}

pub fn load_certificate(path: impl AsRef<Path>) -> Result<Certificate> {
    parse_certificate(&std::fs::read_to_string(path)?)
}

pub fn save_certificate(path: impl AsRef<Path>, cert: &Certificate) -> Result<()> {
    let mut text = cert.to_json()?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
