use std::collections::HashSet;

use rayon::prelude::*;

use super::IntegerSet;
use crate::error::{Error, Result};

/// True iff no element is the midpoint of two others. `O(|s|²)`.
pub fn is_ap3_free(s: &IntegerSet) -> bool {
    let members: HashSet<u64> = s.elements().iter().copied().collect();
    let e = s.elements();
    !(0..e.len()).any(|i| {
        e[i + 1..].iter().any(|&z| (e[i] + z) % 2 == 0 && members.contains(&((e[i] + z) / 2)))
    })
}

/// Number of `k`-term progressions with positive difference inside `s`.
/// Parallel over the first term; the sum is exact.
pub fn count_k_aps(s: &IntegerSet, k: usize) -> Result<u64> {
    if k < 3 {
        return Err(Error::arg(format!("progression length must be at least 3, got {k}")));
    }
    let e = s.elements();
    let members: HashSet<u64> = e.iter().copied().collect();
    let count = (0..e.len())
        .into_par_iter()
        .map(|i| {
            let a = e[i];
            e[i + 1..]
                .iter()
                .filter(|&&b| {
                    let d = b - a;
                    (2..k as u64).all(|j| a.checked_add(j * d).is_some_and(|x| members.contains(&x)))
                })
                .count() as u64
        })
        .sum();
    Ok(count)
}
