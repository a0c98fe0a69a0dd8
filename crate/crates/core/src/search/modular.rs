//! Brute force for the modular variant: sequences of non-zero residues mod
//! `p` and the residues their HAP partial sums reach.

use crate::arith::divisor_table;
use crate::error::{Error, Result};

/// Length of the longest sequence over `{1, ..., p-1}` none of whose HAP
/// partial sums is `≡ r (mod p)`, searched up to `n_max`. Returns `n_max` if
/// the search reaches it.
pub fn modular_avoiding_length(p: u32, r: u32, n_max: usize, node_cap: u64) -> Result<usize> {
    check_prime(p)?;
    if r >= p {
        return Err(Error::arg(format!("residue {r} is not below p = {p}")));
    }
    let divs = divisor_table(n_max);
    let mut sums = vec![0u32; n_max + 1];
    // choice[i] is the value at position i+1
    let mut choice: Vec<u32> = Vec::with_capacity(n_max);
    let mut best = 0usize;
    let mut nodes = 0u64;

    let apply = |sums: &mut [u32], n: usize, x: u32, sign_add: bool| -> bool {
        let mut ok = true;
        for &d in &divs[n] {
            let s = &mut sums[d as usize];
            *s = if sign_add { (*s + x) % p } else { (*s + p - x) % p };
            if sign_add && *s == r {
                ok = false;
            }
        }
        ok
    };

    // Iterative DFS: try values 1..p-1 at each depth.
    let mut next_value = 1u32;
    loop {
        let n = choice.len() + 1;
        if n <= n_max && next_value < p {
            let x = next_value;
            nodes += 1;
            if nodes > node_cap {
                return Err(Error::Inconclusive(format!("node cap {node_cap} exceeded for p={p}, r={r}")));
            }
            if apply(&mut sums, n, x, true) {
                choice.push(x);
                best = best.max(choice.len());
                if best == n_max {
                    return Ok(n_max);
                }
                next_value = 1;
            } else {
                apply(&mut sums, n, x, false);
                next_value = x + 1;
            }
        } else {
            match choice.pop() {
                Some(x) => {
                    let n = choice.len() + 1;
                    apply(&mut sums, n, x, false);
                    next_value = x + 1;
                }
                None => return Ok(best),
            }
        }
    }
}

/// Smallest `N <= n_max` such that every length-`N` sequence of non-zero
/// residues mod `p` reaches every residue as some HAP partial sum with
/// `md <= N`; `None` if some residue can still be avoided at length `n_max`.
///
/// Being avoided is inherited by prefixes, so the answer is one more than
/// the longest avoiding length over all residues.
pub fn modular_min_horizon(p: u32, n_max: usize, node_cap: u64) -> Result<Option<usize>> {
    check_prime(p)?;
    if n_max == 0 {
        return Err(Error::arg("n_max must be positive"));
    }
    let mut longest = 0;
    for r in 0..p {
        let len = modular_avoiding_length(p, r, n_max, node_cap)?;
        if len >= n_max {
            return Ok(None);
        }
        longest = longest.max(len);
    }
    Ok(Some(longest + 1))
}

fn check_prime(p: u32) -> Result<()> {
    if p < 2 || (2..p).take_while(|k| k * k <= p).any(|k| p % k == 0) {
        return Err(Error::arg(format!("{p} is not a prime")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Every residue reached by all sequences of length n, by enumeration.
    fn brute_all_covered(p: u32, n: usize) -> bool {
        let k = (p - 1) as usize;
        let total = k.pow(n as u32);
        (0..total).all(|code| {
            let mut c = code;
            let xs: Vec<u32> = (0..n)
                .map(|_| {
                    let v = (c % k) as u32 + 1;
                    c /= k;
                    v
                })
                .collect();
            let mut seen = vec![false; p as usize];
            for d in 1..=n {
                let mut s = 0;
                for m in 1..=n / d {
                    s = (s + xs[m * d - 1]) % p;
                    seen[s as usize] = true;
                }
            }
            seen.iter().all(|&b| b)
        })
    }

    #[test]
    fn p2_needs_two() {
        assert_eq!(modular_min_horizon(2, 10, 1_000).unwrap(), Some(2));
    }

    #[test]
    fn length_one_never_suffices() {
        for p in [2, 3, 5] {
            assert!(!brute_all_covered(p, 1));
            let h = modular_min_horizon(p, 12, 10_000_000).unwrap();
            assert!(h.is_none_or(|h| h > 1));
        }
    }

    #[test]
    fn p3_matches_enumeration() {
        let h = modular_min_horizon(3, 20, 100_000_000).unwrap().expect("settled within 20");
        assert!(brute_all_covered(3, h));
        assert!(!brute_all_covered(3, h - 1));
    }

    #[test]
    fn rejects_non_primes_and_caps() {
        assert!(modular_min_horizon(4, 10, 100).is_err());
        assert!(modular_min_horizon(1, 10, 100).is_err());
        assert!(matches!(modular_min_horizon(5, 40, 50), Err(Error::Inconclusive(_))));
    }
}
