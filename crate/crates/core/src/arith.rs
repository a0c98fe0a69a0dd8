//! Small number-theory helpers: a smallest-prime-factor sieve and divisor lists.

/// Smallest-prime-factor table for `0..=limit`.
#[derive(Debug, Clone)]
pub struct Sieve {
    spf: Vec<u32>,
}

impl Sieve {
    /// Sieves up to `limit`; memory is four bytes per integer, so `10^7` costs
    /// about 40 MB.
    pub fn new(limit: usize) -> Self {
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                let mut j = i;
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        Sieve { spf }
    }

    pub fn limit(&self) -> usize {
        self.spf.len() - 1
    }

    /// Smallest prime factor of `n >= 2`.
    #[inline]
    pub fn smallest_factor(&self, n: usize) -> usize {
        self.spf[n] as usize
    }

    #[inline]
    pub fn is_prime(&self, n: usize) -> bool {
        n >= 2 && self.spf[n] as usize == n
    }

    pub fn primes(&self) -> impl Iterator<Item = usize> + '_ {
        (2..=self.limit()).filter(move |&n| self.is_prime(n))
    }
}

/// `table[n]` lists the divisors of `n` in increasing order, for `1 <= n <= limit`.
pub fn divisor_table(limit: usize) -> Vec<Vec<u32>> {
    let mut table = vec![Vec::new(); limit + 1];
    for d in 1..=limit {
        let mut k = d;
        while k <= limit {
            table[k].push(d as u32);
            k += d;
        }
    }
    table
}
