use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::IntegerSet;
use crate::error::{Error, Result};

/// Sampling probability for [`random_deletion_ap3_free`]: the `p` at which
/// the expected 3-AP count `p³n²/4` equals half the expected size `pn/2`,
/// i.e. `p = √(2/n)`.
pub fn deletion_probability(n: u64) -> f64 {
    (2.0 / n as f64).sqrt().min(1.0)
}

/// First-order expected output size, `pn − p³n²/4 = pn/2`.
pub fn predicted_deletion_size(n: u64) -> f64 {
    let p = deletion_probability(n);
    let n = n as f64;
    p * n - p.powi(3) * n * n / 4.0
}

/// Keeps each of `1..=n` with probability [`deletion_probability`], then
/// scans upward and drops every survivor that closes a 3-AP with two
/// smaller survivors. Deterministic per seed.
pub fn random_deletion_ap3_free(n: u64, seed: u64) -> Result<IntegerSet> {
    if n < 10 {
        return Err(Error::arg(format!("random deletion needs n >= 10, got {n}")));
    }
    let p = deletion_probability(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample: Vec<u64> = (1..=n).filter(|_| rng.random::<f64>() < p).collect();
    let mut present = vec![false; n as usize + 1];
    let mut kept: Vec<u64> = Vec::with_capacity(sample.len());
    for &z in &sample {
        let closes = kept.iter().any(|&x| (x + z) % 2 == 0 && present[((x + z) / 2) as usize]);
        if !closes {
            present[z as usize] = true;
            kept.push(z);
        }
    }
    IntegerSet::new(kept, n)
}
