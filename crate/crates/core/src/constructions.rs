//! Structured sequences: the Borwein–Choi–Coons sequence, the character mod 3,
//! completely multiplicative expansions from prime values, seeded random
//! signs, and the partial-sum energy statistic.

use std::collections::BTreeMap;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::Sieve;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::seq::SignSequence;

/// Modulus tolerance for complex prime values and unit-modulus sequences.
pub const UNIT_MODULUS_TOL: f64 = 1e-12;

/// `x_m = +1` when `m = (3a+1)·3^b`, `-1` when `m = (3a-1)·3^b`.
pub fn bcc_sequence(n: usize) -> Result<SignSequence> {
    if n == 0 {
        return Err(Error::arg("bcc_sequence needs N >= 1"));
    }
    let values = (1..=n).map(bcc_value).collect();
    Ok(SignSequence::from_trusted(values))
}

#[inline]
fn bcc_value(mut m: usize) -> i8 {
    while m % 3 == 0 {
        m /= 3;
    }
    if m % 3 == 1 {
        1
    } else {
        -1
    }
}

/// Number of base-3 digits of `n` equal to 1; this is the `n`-th partial sum
/// of [`bcc_sequence`].
pub fn bcc_prefix_formula(mut n: u64) -> u32 {
    let mut ones = 0;
    while n > 0 {
        if n % 3 == 1 {
            ones += 1;
        }
        n /= 3;
    }
    ones
}

/// The non-principal character mod 3: `1, -1, 0, 1, -1, 0, ...`.
pub fn character_mod3(n: usize) -> Result<SignSequence> {
    if n == 0 {
        return Err(Error::arg("character_mod3 needs N >= 1"));
    }
    let values = (1..=n)
        .map(|m| match m % 3 {
            1 => 1,
            2 => -1,
            _ => 0,
        })
        .collect();
    Ok(SignSequence::from_trusted(values))
}

/// Values on primes up to a horizon, defining a completely multiplicative
/// sequence. `V` is `i8` for ±1 sequences or `Complex<T>` for unit-modulus
/// complex ones.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicativeSpec<V> {
    horizon: usize,
    prime_values: BTreeMap<usize, V>,
}

impl<V: Copy> MultiplicativeSpec<V> {
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn prime_values(&self) -> &BTreeMap<usize, V> {
        &self.prime_values
    }

    fn check_keys(horizon: usize, prime_values: &BTreeMap<usize, V>) -> Result<()> {
        if horizon == 0 {
            return Err(Error::arg("multiplicative spec needs a horizon N >= 1"));
        }
        let top = prime_values.keys().next_back().copied().unwrap_or(0);
        let sieve = Sieve::new(top.max(2));
        if let Some(&k) = prime_values.keys().find(|&&k| !sieve.is_prime(k)) {
            return Err(Error::invalid(format!("{k} is not a prime")));
        }
        Ok(())
    }

    fn expand_with(&self, one: V, mul: impl Fn(V, V) -> V) -> Result<Vec<V>> {
        let n = self.horizon;
        let sieve = Sieve::new(n.max(2));
        let mut out: Vec<V> = Vec::with_capacity(n);
        out.push(one);
        for m in 2..=n {
            let p = sieve.smallest_factor(m);
            let vp = *self.prime_values.get(&p).ok_or(Error::MissingPrime(p as u64))?;
            let v = if p == m { vp } else { mul(vp, out[m / p - 1]) };
            out.push(v);
        }
        Ok(out)
    }
}

impl MultiplicativeSpec<i8> {
    pub fn new(horizon: usize, prime_values: BTreeMap<usize, i8>) -> Result<Self> {
        Self::check_keys(horizon, &prime_values)?;
        if let Some((p, v)) = prime_values.iter().find(|(_, v)| v.abs() != 1) {
            return Err(Error::invalid(format!("prime {p} has value {v}, expected +1 or -1")));
        }
        Ok(MultiplicativeSpec { horizon, prime_values })
    }

    /// Assigns `f(p)` to every prime `p <= horizon`.
    pub fn from_fn(horizon: usize, f: impl Fn(usize) -> i8) -> Result<Self> {
        let sieve = Sieve::new(horizon.max(2));
        let map = sieve.primes().filter(|&p| p <= horizon).map(|p| (p, f(p))).collect();
        Self::new(horizon, map)
    }
}

impl<T: Real> MultiplicativeSpec<Complex<T>> {
    pub fn new_complex(horizon: usize, prime_values: BTreeMap<usize, Complex<T>>) -> Result<Self> {
        Self::check_keys(horizon, &prime_values)?;
        let tol = unit_tol::<T>();
        if let Some((p, z)) = prime_values.iter().find(|(_, z)| (z.norm() - T::one()).abs() > tol) {
            return Err(Error::invalid(format!("prime {p} has value {z} of modulus {}", z.norm())));
        }
        Ok(MultiplicativeSpec { horizon, prime_values })
    }
}

fn unit_tol<T: Real>() -> T {
    T::of(UNIT_MODULUS_TOL).max(T::epsilon() * T::of(16.0))
}

/// Expands a ±1 prime assignment into the completely multiplicative sequence
/// of length `horizon`; the value at 1 is +1.
pub fn expand_multiplicative(spec: &MultiplicativeSpec<i8>) -> Result<SignSequence> {
    Ok(SignSequence::from_trusted(spec.expand_with(1, |a, b| a * b)?))
}

pub fn expand_multiplicative_complex<T: Real>(
    spec: &MultiplicativeSpec<Complex<T>>,
) -> Result<ComplexSequence<T>> {
    let values = spec.expand_with(Complex::new(T::one(), T::zero()), |a, b| a * b)?;
    Ok(ComplexSequence { values })
}

/// Checks `x_{mn} = x_m·x_n` for every `mn <= len`. Zero entries are rejected.
pub fn is_completely_multiplicative(seq: &SignSequence) -> Result<bool> {
    seq.require_pm1()?;
    let n = seq.len();
    for a in 1..=n {
        let xa = seq.value(a);
        for b in a..=n / a {
            if seq.value(a * b) != xa * seq.value(b) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A 1-indexed sequence of complex numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSequence<T> {
    values: Vec<Complex<T>>,
}

impl<T: Real> ComplexSequence<T> {
    pub fn new(values: Vec<Complex<T>>) -> Self {
        ComplexSequence { values }
    }

    /// Requires every entry to have modulus 1 within 1e-12.
    pub fn unit(values: Vec<Complex<T>>) -> Result<Self> {
        let tol = unit_tol::<T>();
        if let Some(i) = values.iter().position(|z| (z.norm() - T::one()).abs() > tol) {
            return Err(Error::invalid(format!("entry {} does not have modulus 1", i + 1)));
        }
        Ok(ComplexSequence { values })
    }

    pub fn from_signs(seq: &SignSequence) -> Self {
        let values = seq.as_slice().iter().map(|&v| Complex::new(T::of(v as f64), T::zero())).collect();
        ComplexSequence { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn scaled(&self, by: Complex<T>) -> Self {
        ComplexSequence { values: self.values.iter().map(|&z| z * by).collect() }
    }
}

/// `N^{-1} · Σ_{n<=N} |s_n|^2` where `s_n` are the partial sums.
pub fn partial_sum_energy<T: Real>(zs: &ComplexSequence<T>) -> Result<T> {
    if zs.is_empty() {
        return Err(Error::arg("partial_sum_energy of an empty sequence"));
    }
    let mut s = Complex::new(T::zero(), T::zero());
    let mut total = T::zero();
    for &z in zs.values() {
        s = s + z;
        total += s.norm_sqr();
    }
    Ok(total / T::of_usize(zs.len()))
}

/// Independent uniform ±1 entries from a ChaCha8 stream.
///
/// The generator is `ChaCha8Rng::seed_from_u64(seed)`; entry `i` is `+1` when
/// the `i`-th `random::<bool>()` draw is true. The stream is fixed per seed.
pub fn random_pm1(n: usize, seed: u64) -> SignSequence {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
    SignSequence::from_trusted(values)
}

/// Parsed multiplicative spec file, real or complex.
#[derive(Debug, Clone, PartialEq)]
pub enum SpecFile {
    Real(MultiplicativeSpec<i8>),
    Complex(MultiplicativeSpec<Complex<f64>>),
}

/// Parses a TOML spec: `horizon = N` plus a `[primes]` table mapping each prime
/// to `1`/`-1` or to a `[re, im]` pair.
pub fn parse_multiplicative_spec(text: &str) -> Result<SpecFile> {
    let doc: toml::Table = toml::from_str(text)?;
    let horizon = doc
        .get("horizon")
        .and_then(|v| v.as_integer())
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::invalid("spec needs a positive integer `horizon`"))? as usize;
    let primes = doc
        .get("primes")
        .and_then(|v| v.as_table())
        .ok_or_else(|| Error::invalid("spec needs a [primes] table"))?;
    if let Some(k) = doc.keys().find(|k| *k != "horizon" && *k != "primes") {
        return Err(Error::invalid(format!("unknown key `{k}` in multiplicative spec")));
    }
    let mut real = BTreeMap::new();
    let mut complex = BTreeMap::new();
    for (k, v) in primes {
        let p: usize = k.parse().map_err(|_| Error::invalid(format!("prime key `{k}` is not an integer")))?;
        match v {
            toml::Value::Integer(i) => {
                real.insert(p, *i as i8);
                complex.insert(p, Complex::new(*i as f64, 0.0));
            }
            toml::Value::Array(a) if a.len() == 2 => {
                let f = |x: &toml::Value| {
                    x.as_float()
                        .or_else(|| x.as_integer().map(|i| i as f64))
                        .ok_or_else(|| Error::invalid(format!("prime {p}: expected numbers")))
                };
                complex.insert(p, Complex::new(f(&a[0])?, f(&a[1])?));
            }
            _ => return Err(Error::invalid(format!("prime {p}: expected ±1 or [re, im]"))),
        }
    }
    if real.len() == primes.len() {
        Ok(SpecFile::Real(MultiplicativeSpec::new(horizon, real)?))
    } else {
        Ok(SpecFile::Complex(MultiplicativeSpec::new_complex(horizon, complex)?))
    }
}

pub fn format_multiplicative_spec(spec: &MultiplicativeSpec<i8>) -> String {
    let mut out = format!("horizon = {}\n\n[primes]\n", spec.horizon());
    for (p, v) in spec.prime_values() {
        out.push_str(&format!("{p} = {v}\n"));
    }
    out
}
