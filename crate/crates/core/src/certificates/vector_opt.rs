use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::seq::{vector_discrepancy, VectorSequence};

#[derive(Debug, Clone)]
pub struct VectorOptConfig<T> {
    pub iterations: usize,
    /// Log-sum-exp temperature, decayed geometrically between the two ends.
    pub initial_temperature: f64,
    pub final_temperature: f64,
    pub initial_step: f64,
    pub final_step: f64,
    pub seed: u64,
    /// Starting point; random Gaussian directions when absent.
    pub init: Option<VectorSequence<T>>,
}

impl<T> Default for VectorOptConfig<T> {
    fn default() -> Self {
        VectorOptConfig {
            iterations: 3000,
            initial_temperature: 1.0,
            final_temperature: 1e-3,
            initial_step: 0.2,
            final_step: 1e-3,
            seed: 0,
            init: None,
        }
    }
}

fn geometric(a: f64, b: f64, t: f64) -> f64 {
    a * (b / a).powf(t)
}

/// Local search for unit vectors with small HAP discrepancy. Minimises a
/// log-sum-exp smoothing of `max ‖Σ_{i∈P} x_i‖²` by normalised gradient
/// steps, renormalising every vector after each step. Returns the best
/// iterate and its exact vector discrepancy, an upper bound on the optimum.
pub fn minimize_vector_discrepancy<T: Real>(
    n: usize,
    dim: usize,
    config: &VectorOptConfig<T>,
) -> Result<(VectorSequence<T>, T)> {
    if dim == 0 {
        return Err(Error::arg("vector dimension must be positive"));
    }
    if n == 0 {
        return Err(Error::arg("sequence length must be positive"));
    }
    if !(config.initial_temperature > 0.0 && config.final_temperature > 0.0) {
        return Err(Error::arg("temperatures must be positive"));
    }
    let mut x: Vec<T> = match &config.init {
        Some(init) => {
            if init.len() != n || init.dim() != dim {
                return Err(Error::arg(format!(
                    "initial point is {}x{}, expected {n}x{dim}",
                    init.len(),
                    init.dim()
                )));
            }
            init.flat().to_vec()
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            (0..n * dim).map(|_| T::of(StandardNormal.sample(&mut rng))).collect()
        }
    };
    for i in 0..n {
        if !normalise(&mut x[i * dim..(i + 1) * dim]) {
            return Err(Error::arg(format!("initial vector {} is zero", i + 1)));
        }
    }

    let mut best = x.clone();
    let mut best_value = max_sq(&x, n, dim);
    let mut sums = vec![T::zero(); dim];
    let mut grad = vec![T::zero(); n * dim];
    let iters = config.iterations.max(1);
    for it in 0..iters {
        let t = it as f64 / iters as f64;
        let tau = T::of(geometric(config.initial_temperature, config.final_temperature, t));
        let step = T::of(geometric(config.initial_step, config.final_step, t));

        // Softmax weights over all HAP squared norms.
        let mut top = T::neg_infinity();
        for d in 1..=n {
            sums.iter_mut().for_each(|s| *s = T::zero());
            for m in 1..=n / d {
                add(&mut sums, &x[(m * d - 1) * dim..m * d * dim]);
                top = top.max(norm_sq(&sums));
            }
        }
        let mut z = T::zero();
        grad.iter_mut().for_each(|g| *g = T::zero());
        let mut prefix: Vec<Vec<T>> = Vec::new();
        for d in 1..=n {
            let len = n / d;
            prefix.clear();
            sums.iter_mut().for_each(|s| *s = T::zero());
            for m in 1..=len {
                add(&mut sums, &x[(m * d - 1) * dim..m * d * dim]);
                prefix.push(sums.clone());
            }
            // ∂/∂x_{md} of Σ_{m'≥m} w_{d,m'} ‖S_{d,m'}‖² is 2 Σ_{m'≥m} w S.
            let mut tail = vec![T::zero(); dim];
            for m in (1..=len).rev() {
                let s = &prefix[m - 1];
                let w = ((norm_sq(s) - top) / tau).exp();
                z += w;
                for (t, &v) in tail.iter_mut().zip(s) {
                    *t += w * v;
                }
                for (g, &t) in grad[(m * d - 1) * dim..m * d * dim].iter_mut().zip(&tail) {
                    *g += t;
                }
            }
        }
        let scale = grad.iter().fold(T::zero(), |acc, &g| acc.max(g.abs()));
        if scale <= T::zero() || !z.is_finite() {
            break;
        }
        for (xi, &g) in x.iter_mut().zip(&grad) {
            *xi -= step * g / scale;
        }
        for i in 0..n {
            let v = &mut x[i * dim..(i + 1) * dim];
            if !normalise(v) {
                v.iter_mut().for_each(|c| *c = T::zero());
                v[0] = T::one();
            }
        }
        let value = max_sq(&x, n, dim);
        if value < best_value {
            best_value = value;
            best.copy_from_slice(&x);
        }
    }
    let seq = VectorSequence::from_flat(dim, best);
    let achieved = vector_discrepancy(&seq)?;
    Ok((seq, achieved))
}

fn add<T: Real>(acc: &mut [T], v: &[T]) {
    for (a, &b) in acc.iter_mut().zip(v) {
        *a += b;
    }
}

fn norm_sq<T: Real>(v: &[T]) -> T {
    v.iter().map(|&c| c * c).sum()
}

fn normalise<T: Real>(v: &mut [T]) -> bool {
    let norm = norm_sq(v).sqrt();
    if norm <= T::zero() || !norm.is_finite() {
        return false;
    }
    v.iter_mut().for_each(|c| *c /= norm);
    true
}

fn max_sq<T: Real>(x: &[T], n: usize, dim: usize) -> T {
    let mut sums = vec![T::zero(); dim];
    let mut top = T::zero();
    for d in 1..=n {
        sums.iter_mut().for_each(|s| *s = T::zero());
        for m in 1..=n / d {
            add(&mut sums, &x[(m * d - 1) * dim..m * d * dim]);
            top = top.max(norm_sq(&sums));
        }
    }
    top
}
