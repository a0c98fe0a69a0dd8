use std::time::{Duration, Instant};

use super::{validate_hap, CertificateKind, LowerBound};
use crate::error::{Error, Rejection, Result};
use crate::linalg::{project_psd, project_simplex, symmetric_eigen, Matrix};
use crate::scalar::Real;
use crate::seq::{all_haps, Hap};

/// HAP weights `c` and diagonal weights `b` such that
/// `Σ c_{m,d} A_{m,d} − diag(b)` is PSD up to `psd_tolerance`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticCertificate<T> {
    pub n: usize,
    pub coeffs: Vec<(Hap, T)>,
    pub weights: Vec<T>,
    pub psd_tolerance: T,
}

/// `A_{m,d}`: ones at `(i, j)` whenever both `i` and `j` lie in `{d, ..., md}`.
pub fn hap_quadratic_matrix<T: Real>(m: usize, d: usize, n: usize) -> Result<Matrix<T>> {
    let hap = Hap::new(d, m)?;
    hap.check_within(n)?;
    let mut a = Matrix::zeros(n, n);
    add_outer(&mut a, hap, T::one());
    Ok(a)
}

fn add_outer<T: Real>(a: &mut Matrix<T>, hap: Hap, c: T) {
    for i in hap.elements() {
        for j in hap.elements() {
            a[(i - 1, j - 1)] += c;
        }
    }
}

/// `Σ c A_{m,d} − diag(b)`. HAPs must already be known to fit in `n`.
pub fn quadratic_form_matrix<T: Real>(n: usize, coeffs: &[(Hap, T)], weights: &[T]) -> Matrix<T> {
    let mut a = Matrix::zeros(n, n);
    for &(hap, c) in coeffs {
        if c != T::zero() {
            add_outer(&mut a, hap, c);
        }
    }
    for (i, &b) in weights.iter().enumerate() {
        a[(i, i)] -= b;
    }
    a
}

fn reject(constraint: &str, detail: String, witness: Option<Vec<f64>>) -> Error {
    Error::Rejected(Rejection::new(constraint, detail, witness))
}

/// Checks the certificate from scratch and returns the bound
/// `√(max(0, Σb − N·tol) / max(1, Σc))`.
pub fn verify_quadratic_certificate<T: Real>(cert: &QuadraticCertificate<T>) -> Result<LowerBound<T>> {
    let n = cert.n;
    if n == 0 {
        return Err(Error::invalid("certificate horizon must be at least 1"));
    }
    if cert.weights.len() != n {
        return Err(Error::invalid(format!("expected {n} diagonal weights, found {}", cert.weights.len())));
    }
    if !(cert.psd_tolerance.is_finite() && cert.psd_tolerance >= T::zero()) {
        return Err(Error::invalid("psd tolerance must be finite and non-negative"));
    }
    if let Some(pos) = cert.weights.iter().position(|b| !b.is_finite()) {
        return Err(Error::invalid(format!("weight b_{} is not finite", pos + 1)));
    }
    let mut total = T::zero();
    for (hap, c) in &cert.coeffs {
        validate_hap(hap, n)?;
        if !c.is_finite() {
            return Err(Error::invalid(format!("coefficient on {hap} is not finite")));
        }
        if *c < T::zero() {
            return Err(reject("simplex", format!("coefficient on {hap} is negative ({c})"), None));
        }
        total += *c;
    }
    if (total - T::one()).abs() > T::of(1e-9) {
        return Err(reject("simplex", format!("coefficients sum to {total}, expected 1"), None));
    }

    let form = quadratic_form_matrix(n, &cert.coeffs, &cert.weights);
    let eig = symmetric_eigen(&form)?;
    let lambda_min = eig.min_value();
    if lambda_min < -cert.psd_tolerance {
        let witness = eig.vector(0).into_iter().map(Real::as_f64).collect();
        return Err(reject(
            "psd",
            format!("minimum eigenvalue {lambda_min} is below -{}", cert.psd_tolerance),
            Some(witness),
        ));
    }
    let sum_b: T = cert.weights.iter().copied().sum();
    let squared = (sum_b - T::of_usize(n) * cert.psd_tolerance).max(T::zero()) / total.max(T::one());
    Ok(LowerBound::from_squared(n, CertificateKind::Quadratic, squared))
}

#[derive(Debug, Clone)]
pub struct SdpConfig {
    /// ADMM penalty.
    pub rho: f64,
    pub max_iterations: usize,
    /// Stop when primal and dual residuals (Frobenius) both fall below this.
    pub tolerance: f64,
    pub psd_tolerance: f64,
    /// Objective taper: the last `taper` positions get linearly decreasing
    /// weight in the objective. Zero means a plain `Σ b`.
    pub taper: usize,
    /// Projected-gradient steps per `c` update.
    pub inner_iterations: usize,
    /// How often the current iterate is repaired and compared with the best.
    pub check_every: usize,
    pub time_budget: Option<Duration>,
}

impl Default for SdpConfig {
    fn default() -> Self {
        SdpConfig {
            rho: 1.0,
            max_iterations: 100_000,
            tolerance: 1e-7,
            psd_tolerance: super::DEFAULT_TOLERANCE,
            taper: 0,
            inner_iterations: 50,
            check_every: 25,
            time_budget: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SdpOutcome<T> {
    pub certificate: QuadraticCertificate<T>,
    /// `Σ b` of the returned certificate.
    pub objective: T,
    pub iterations: usize,
    pub converged: bool,
    pub primal_residual: T,
    pub dual_residual: T,
    /// Objective of each repaired iterate, sampled every `check_every` steps.
    pub trace: Vec<(usize, T)>,
}

struct Problem<T> {
    n: usize,
    haps: Vec<Hap>,
    /// `⟨offdiag A_k, offdiag A_l⟩`.
    gram: Matrix<T>,
    lipschitz: T,
    /// Objective weight carried by each HAP's diagonal.
    weight_mass: Vec<T>,
    objective_weights: Vec<T>,
}

impl<T: Real> Problem<T> {
    fn new(n: usize, config: &SdpConfig) -> Result<Self> {
        let haps = all_haps(n);
        let k = haps.len();
        let gram = Matrix::from_fn(k, k, |a, b| {
            let o = haps[a].overlap(&haps[b]);
            T::of_usize(o * o.saturating_sub(1))
        });
        let top = symmetric_eigen(&gram)?.values.last().copied().unwrap_or_else(T::zero);
        let lipschitz = T::of(config.rho) * top.max(T::zero());
        let taper = config.taper.min(n.saturating_sub(1));
        let objective_weights: Vec<T> = (1..=n)
            .map(|i| if i + taper <= n { T::one() } else { T::of_usize(n - i + 1) / T::of_usize(taper + 1) })
            .collect();
        let weight_mass = haps.iter().map(|h| h.elements().map(|i| objective_weights[i - 1]).sum()).collect();
        Ok(Problem { n, haps, gram, lipschitz, weight_mass, objective_weights })
    }

    fn form(&self, c: &[T]) -> Matrix<T> {
        let mut a = Matrix::zeros(self.n, self.n);
        for (&hap, &ck) in self.haps.iter().zip(c) {
            if ck != T::zero() {
                add_outer(&mut a, hap, ck);
            }
        }
        a
    }

    /// Minimises `(ρ/2)cᵀGc − hᵀc` over the simplex by accelerated
    /// projected gradient, warm-started at `c`.
    fn update_c(&self, c: &mut Vec<T>, w: &Matrix<T>, rho: T, iters: usize) {
        let h: Vec<T> = self
            .haps
            .iter()
            .zip(&self.weight_mass)
            .map(|(hap, &mass)| {
                let mut inner = T::zero();
                for i in hap.elements() {
                    for j in hap.elements() {
                        if i != j {
                            inner += w[(i - 1, j - 1)];
                        }
                    }
                }
                rho * inner + mass
            })
            .collect();
        let step = T::one() / self.lipschitz.max(T::of(1e-12));
        let mut y = c.clone();
        let mut t = T::one();
        for _ in 0..iters {
            let gy = self.gram.mul_vec(&y);
            let trial: Vec<T> = y.iter().zip(&gy).zip(&h).map(|((&yi, &gi), &hi)| yi - step * (rho * gi - hi)).collect();
            let next = project_simplex(&trial, T::one());
            let t_next = (T::one() + (T::one() + T::of(4.0) * t * t).sqrt()) / T::of(2.0);
            let momentum = (t - T::one()) / t_next;
            let mut delta = T::zero();
            for i in 0..y.len() {
                delta = delta.max((next[i] - c[i]).abs());
                y[i] = next[i] + momentum * (next[i] - c[i]);
            }
            *c = next;
            t = t_next;
            if delta <= T::of(1e-14) {
                break;
            }
        }
    }

    /// Shrinks `b` uniformly so the form clears `-psd_tolerance / 2`.
    fn repair(&self, c: &[T], b: &[T], psd_tol: T) -> Result<(Vec<T>, T)> {
        let mut form = self.form(c);
        for (i, &bi) in b.iter().enumerate() {
            form[(i, i)] -= bi;
        }
        let lambda_min = symmetric_eigen(&form)?.min_value();
        let shift = (-lambda_min - psd_tol / T::of(2.0)).max(T::zero());
        let repaired: Vec<T> = b.iter().map(|&bi| bi - shift).collect();
        let total = repaired.iter().copied().sum();
        Ok((repaired, total))
    }

    fn certificate(&self, c: &[T], b: Vec<T>, psd_tol: T) -> QuadraticCertificate<T> {
        let coeffs = self.haps.iter().zip(c).filter(|(_, &ck)| ck > T::zero()).map(|(&h, &ck)| (h, ck)).collect();
        QuadraticCertificate { n: self.n, coeffs, weights: b, psd_tolerance: psd_tol }
    }
}

/// Approximately maximises `Σ b` by ADMM on the splitting
/// `Σ c A − diag(b) = S`, `S ⪰ 0`, `c` in the simplex. The returned
/// certificate always passes [`verify_quadratic_certificate`].
pub fn search_quadratic_certificate<T: Real>(n: usize, config: &SdpConfig) -> Result<SdpOutcome<T>> {
    if n == 0 {
        return Err(Error::arg("certificate horizon must be at least 1"));
    }
    if !(config.rho > 0.0 && config.tolerance > 0.0 && config.psd_tolerance > 0.0) {
        return Err(Error::arg("rho, tolerance and psd_tolerance must be positive"));
    }
    let start = Instant::now();
    let problem = Problem::<T>::new(n, config)?;
    let rho = T::of(config.rho);
    let tol = T::of(config.tolerance);
    let psd_tol = T::of(config.psd_tolerance);
    let k = problem.haps.len();

    let mut c = vec![T::one() / T::of_usize(k); k];
    let mut b = vec![T::zero(); n];
    let mut s = Matrix::zeros(n, n);
    let mut u = Matrix::zeros(n, n);
    let mut best: Option<(Vec<T>, Vec<T>, T)> = None;
    let mut trace = Vec::new();
    let (mut primal, mut dual) = (T::infinity(), T::infinity());
    let mut converged = false;
    let mut iterations = 0;

    let check_every = config.check_every.max(1);
    for it in 1..=config.max_iterations {
        iterations = it;
        let w = s.sub(&u);
        problem.update_c(&mut c, &w, rho, config.inner_iterations);
        let mut x = problem.form(&c);
        for i in 0..n {
            b[i] = x[(i, i)] - w[(i, i)] + problem.objective_weights[i] / rho;
            x[(i, i)] -= b[i];
        }
        let mut target = x.clone();
        target.add_scaled(T::one(), &u);
        let (s_next, _) = project_psd(&target)?;
        let residual = x.sub(&s_next);
        u.add_scaled(T::one(), &residual);
        primal = residual.frobenius_norm();
        dual = rho * s_next.sub(&s).frobenius_norm();
        s = s_next;

        converged = primal <= tol && dual <= tol;
        let out_of_time = config.time_budget.is_some_and(|tb| start.elapsed() >= tb);
        if it % check_every == 0 || converged || out_of_time || it == config.max_iterations {
            let (repaired, total) = problem.repair(&c, &b, psd_tol)?;
            trace.push((it, total));
            if best.as_ref().is_none_or(|(_, _, v)| total > *v) {
                best = Some((c.clone(), repaired, total));
            }
        }
        if converged || out_of_time {
            break;
        }
    }
    let (c_best, b_best, objective) = match best {
        Some(found) => found,
        None => {
            let (repaired, total) = problem.repair(&c, &b, psd_tol)?;
            (c, repaired, total)
        }
    };
    Ok(SdpOutcome {
        certificate: problem.certificate(&c_best, b_best, psd_tol),
        objective,
        iterations,
        converged,
        primal_residual: primal,
        dual_residual: dual,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_hap_matrices() {
        let a = hap_quadratic_matrix::<f64>(1, 1, 2).unwrap();
        assert_eq!(a.to_rows(), vec![vec![1.0, 0.0], vec![0.0, 0.0]]);
        let a = hap_quadratic_matrix::<f64>(2, 1, 2).unwrap();
        assert_eq!(a.to_rows(), vec![vec![1.0, 1.0], vec![1.0, 1.0]]);
        assert!(matches!(hap_quadratic_matrix::<f64>(3, 1, 2), Err(Error::Range { .. })));
    }

    #[test]
    fn quadratic_form_expands_to_hap_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 9;
        for _ in 0..100 {
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
            let (d, m) = (rng.random_range(1..=3), rng.random_range(1..=3));
            let a = hap_quadratic_matrix::<f64>(m, d, n).unwrap();
            let direct: f64 = (1..=m).map(|j| x[j * d - 1]).sum();
            assert!((a.quadratic_form(&x) - direct * direct).abs() < 1e-12);
        }
    }

    #[test]
    fn trivial_certificate_at_one() {
        let cert = QuadraticCertificate { n: 1, coeffs: vec![(Hap { d: 1, m: 1 }, 1.0f64)], weights: vec![1.0], psd_tolerance: 1e-8 };
        let lb = verify_quadratic_certificate(&cert).unwrap();
        assert!((lb.bound - 1.0).abs() < 1e-8);
        assert_eq!(lb.source, CertificateKind::Quadratic);
    }

    #[test]
    fn tampered_weight_is_rejected_with_witness() {
        let cert = QuadraticCertificate { n: 1, coeffs: vec![(Hap { d: 1, m: 1 }, 1.0)], weights: vec![1.5], psd_tolerance: 1e-8 };
        match verify_quadratic_certificate(&cert) {
            Err(Error::Rejected(r)) => {
                assert_eq!(r.constraint, "psd");
                assert_eq!(r.witness.unwrap().len(), 1);
            }
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn simplex_violations_are_rejected() {
        let h = Hap { d: 1, m: 1 };
        let half = QuadraticCertificate { n: 1, coeffs: vec![(h, 0.5)], weights: vec![0.0], psd_tolerance: 1e-8 };
        assert!(matches!(verify_quadratic_certificate(&half), Err(Error::Rejected(r)) if r.constraint == "simplex"));
        let neg = QuadraticCertificate { n: 1, coeffs: vec![(h, 1.5), (h, -0.5)], weights: vec![0.0], psd_tolerance: 1e-8 };
        assert!(matches!(verify_quadratic_certificate(&neg), Err(Error::Rejected(r)) if r.constraint == "simplex"));
        let out = QuadraticCertificate { n: 1, coeffs: vec![(Hap { d: 1, m: 2 }, 1.0)], weights: vec![0.0], psd_tolerance: 1e-8 };
        assert!(matches!(verify_quadratic_certificate(&out), Err(Error::Range { .. })));
    }

    #[test]
    fn search_at_one_reaches_the_optimum() {
        let out = search_quadratic_certificate::<f64>(1, &SdpConfig::default()).unwrap();
        assert!((out.objective - 1.0).abs() < 1e-6, "{}", out.objective);
        verify_quadratic_certificate(&out.certificate).unwrap();
    }

    #[test]
    fn search_output_verifies_small_n() {
        let config = SdpConfig { max_iterations: 3000, ..SdpConfig::default() };
        for n in 2..=6 {
            let out = search_quadratic_certificate::<f64>(n, &config).unwrap();
            let lb = verify_quadratic_certificate(&out.certificate).unwrap();
            assert!(lb.bound <= 1.0 + 1e-9);
            assert!(out.objective > 0.99, "n={n}: {}", out.objective);
        }
    }

    #[test]
    fn taper_changes_objective_weights_only() {
        let config = SdpConfig { taper: 3, max_iterations: 2000, ..SdpConfig::default() };
        let out = search_quadratic_certificate::<f64>(6, &config).unwrap();
        verify_quadratic_certificate(&out.certificate).unwrap();
    }
}
