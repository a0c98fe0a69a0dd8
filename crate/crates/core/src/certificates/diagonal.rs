use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{validate_hap, CertificateKind, HapFamily, LowerBound};
use crate::error::{Error, Rejection, Result};
use crate::linalg::{LinearProgram, LpOptions, LpOutcome, Matrix, Relation};
use crate::scalar::Real;
use crate::seq::{all_haps, Hap};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HapMatrixTerm<T> {
    pub p: Hap,
    pub q: Hap,
    pub lambda: T,
}

/// `M = Σ λ · 1_P 1_Qᵀ`, claimed diagonal up to `offdiag_tolerance`.
#[derive(Debug, Clone, PartialEq)]
pub struct HapMatrixCertificate<T> {
    pub n: usize,
    pub terms: Vec<HapMatrixTerm<T>>,
    pub offdiag_tolerance: T,
}

/// Indicator of `P × Q` as an `n × n` matrix.
pub fn hap_product_matrix<T: Real>(p: Hap, q: Hap, n: usize) -> Result<Matrix<T>> {
    validate_hap(&p, n)?;
    validate_hap(&q, n)?;
    let mut a = Matrix::zeros(n, n);
    for i in p.elements() {
        for j in q.elements() {
            a[(i - 1, j - 1)] = T::one();
        }
    }
    Ok(a)
}

/// `Σ λ · 1_P 1_Qᵀ` for a certificate whose HAPs fit in `n`.
pub fn representation_matrix<T: Real>(cert: &HapMatrixCertificate<T>) -> Result<Matrix<T>> {
    let mut a = Matrix::zeros(cert.n, cert.n);
    for t in &cert.terms {
        validate_hap(&t.p, cert.n)?;
        validate_hap(&t.q, cert.n)?;
        for i in t.p.elements() {
            for j in t.q.elements() {
                a[(i - 1, j - 1)] += t.lambda;
            }
        }
    }
    Ok(a)
}

/// Checks the representation and returns
/// `√(max(0, trace − max(N·tol, Σ_{i≠j}|M_ij|)) / max(1, Σ|λ|))`.
pub fn verify_diagonal_representation<T: Real>(cert: &HapMatrixCertificate<T>) -> Result<LowerBound<T>> {
    let n = cert.n;
    if n == 0 {
        return Err(Error::invalid("certificate horizon must be at least 1"));
    }
    let tol = cert.offdiag_tolerance;
    if !(tol.is_finite() && tol >= T::zero()) {
        return Err(Error::invalid("off-diagonal tolerance must be finite and non-negative"));
    }
    if let Some(t) = cert.terms.iter().find(|t| !t.lambda.is_finite()) {
        return Err(Error::invalid(format!("coefficient on {} x {} is not finite", t.p, t.q)));
    }
    let mass: T = cert.terms.iter().map(|t| t.lambda.abs()).sum();
    if mass > T::one() + T::of(1e-9) {
        return Err(Error::Rejected(Rejection::new(
            "convex-hull",
            format!("sum of |lambda| is {mass}, exceeds 1"),
            None,
        )));
    }
    let m = representation_matrix(cert)?;
    let mut leak = T::zero();
    let mut worst = (0, 0, T::zero());
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let v = m[(i, j)].abs();
                leak += v;
                if v > worst.2 {
                    worst = (i + 1, j + 1, m[(i, j)]);
                }
            }
        }
    }
    if worst.2.abs() > tol {
        let (i, j, v) = worst;
        return Err(Error::Rejected(Rejection::new(
            "offdiagonal",
            format!("entry ({i}, {j}) is {v}, tolerance {tol}"),
            Some(vec![i as f64, j as f64, v.as_f64()]),
        )));
    }
    let trace = m.trace();
    let slack = (T::of_usize(n) * tol).max(leak);
    let squared = (trace - slack).max(T::zero()) / mass.max(T::one());
    Ok(LowerBound::from_squared(n, CertificateKind::Diagonal, squared))
}

#[derive(Debug, Clone)]
pub struct LpConfig {
    /// Largest horizon accepted with [`HapFamily::AllPairs`].
    pub max_full_family_n: usize,
    /// Cap on LP columns (two per family member).
    pub max_variables: usize,
    pub offdiag_tolerance: f64,
    pub options: LpOptions,
}

impl Default for LpConfig {
    fn default() -> Self {
        LpConfig {
            max_full_family_n: 40,
            max_variables: 40_000,
            offdiag_tolerance: super::DEFAULT_TOLERANCE,
            options: LpOptions::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LpSolution<T> {
    pub certificate: HapMatrixCertificate<T>,
    /// Optimal trace reported by the LP.
    pub trace: T,
    pub pivots: usize,
    pub variables: usize,
    pub constraints: usize,
}

/// One LP column: a fixed combination of HAP products.
struct Column {
    parts: Vec<(Hap, Hap)>,
    /// Weight of each part; symmetrised columns split evenly.
    share: f64,
}

fn columns(n: usize, family: &HapFamily) -> Result<(Vec<Column>, bool)> {
    match family {
        HapFamily::AllPairs => {
            let haps = all_haps(n);
            let mut cols = Vec::new();
            for (a, &p) in haps.iter().enumerate() {
                cols.push(Column { parts: vec![(p, p)], share: 1.0 });
                for &q in &haps[a + 1..] {
                    cols.push(Column { parts: vec![(p, q), (q, p)], share: 0.5 });
                }
            }
            Ok((cols, true))
        }
        HapFamily::Diagonal => Ok((all_haps(n).into_iter().map(|p| Column { parts: vec![(p, p)], share: 1.0 }).collect(), true)),
        HapFamily::Pairs(_) => {
            let pairs = family.pairs(n)?;
            Ok((pairs.into_iter().map(|pq| Column { parts: vec![pq], share: 1.0 }).collect(), false))
        }
    }
}

/// Maximises the trace of `Σ λ · 1_P 1_Qᵀ` over the family subject to zero
/// off-diagonal entries and `Σ|λ| ≤ 1`, by dense simplex on `λ = λ⁺ − λ⁻`.
/// The full family is symmetrised: each unordered pair `{P, Q}` contributes
/// `(1_P 1_Qᵀ + 1_Q 1_Pᵀ)/2`, so only entries above the diagonal need
/// constraints.
pub fn search_diagonal_representation<T: Real>(
    n: usize,
    family: &HapFamily,
    config: &LpConfig,
) -> Result<LpSolution<T>> {
    if n == 0 {
        return Err(Error::arg("certificate horizon must be at least 1"));
    }
    if *family == HapFamily::AllPairs && n > config.max_full_family_n {
        return Err(Error::Inconclusive(format!(
            "full HAP-pair family at N={n} exceeds the size guard N <= {}; use a restricted family",
            config.max_full_family_n
        )));
    }
    let (cols, symmetric) = columns(n, family)?;
    let variables = 2 * cols.len();
    if variables > config.max_variables {
        return Err(Error::Inconclusive(format!(
            "LP would have {variables} variables, cap is {}",
            config.max_variables
        )));
    }

    let mut row_of: HashMap<(usize, usize), usize> = HashMap::new();
    let mut entries: Vec<Vec<(usize, T)>> = Vec::with_capacity(cols.len());
    let mut traces = Vec::with_capacity(cols.len());
    for col in &cols {
        let share = T::of(col.share);
        let mut local: HashMap<usize, T> = HashMap::new();
        let mut trace = T::zero();
        for &(p, q) in &col.parts {
            trace += share * T::of_usize(p.overlap(&q));
            for i in p.elements() {
                for j in q.elements() {
                    if i == j || (symmetric && i > j) {
                        continue;
                    }
                    let next = row_of.len();
                    let r = *row_of.entry((i, j)).or_insert(next);
                    *local.entry(r).or_insert(T::zero()) += share;
                }
            }
        }
        let mut local: Vec<(usize, T)> = local.into_iter().collect();
        local.sort_by_key(|&(r, _)| r);
        entries.push(local);
        traces.push(trace);
    }

    let k = cols.len();
    let mut objective = Vec::with_capacity(2 * k);
    objective.extend(traces.iter().copied());
    objective.extend(traces.iter().map(|&t| -t));
    let mut lp = LinearProgram::new(objective);
    let mut rows = vec![vec![T::zero(); 2 * k]; row_of.len()];
    for (c, list) in entries.iter().enumerate() {
        for &(r, v) in list {
            rows[r][c] = v;
            rows[r][k + c] = -v;
        }
    }
    for row in rows {
        lp.add_constraint(row, Relation::Eq, T::zero())?;
    }
    lp.add_constraint(vec![T::one(); 2 * k], Relation::Le, T::one())?;
    let constraints = lp.num_constraints();

    let tol = T::of(config.offdiag_tolerance);
    let (x, trace, pivots) = match lp.solve(&config.options)? {
        LpOutcome::Optimal { x, value, pivots } => (x, value, pivots),
        LpOutcome::Infeasible | LpOutcome::Unbounded => {
            let certificate = HapMatrixCertificate { n, terms: Vec::new(), offdiag_tolerance: tol };
            return Ok(LpSolution { certificate, trace: T::zero(), pivots: 0, variables, constraints });
        }
    };
    let mut terms = Vec::new();
    for (c, col) in cols.iter().enumerate() {
        let lambda = x[c] - x[k + c];
        if lambda.abs() <= T::of(1e-15) {
            continue;
        }
        for &(p, q) in &col.parts {
            terms.push(HapMatrixTerm { p, q, lambda: lambda * T::of(col.share) });
        }
    }
    let certificate = HapMatrixCertificate { n, terms, offdiag_tolerance: tol };
    Ok(LpSolution { certificate, trace, pivots, variables, constraints })
}
