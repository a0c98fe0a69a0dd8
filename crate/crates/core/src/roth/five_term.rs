use std::collections::HashMap;

use super::IntegerSet;
use crate::error::{Error, Result};

/// Largest set searched by [`find_5term_solution`].
pub const FIVE_TERM_CAP: usize = 64;

/// Six distinct elements with `x₁ + ... + x₅ = 5y`, found by matching
/// pair sums against `5y` minus triple sums. The `x` are returned sorted.
pub fn find_5term_solution(s: &IntegerSet) -> Result<Option<([u64; 5], u64)>> {
    let e = s.elements();
    if e.len() > FIVE_TERM_CAP {
        return Err(Error::Inconclusive(format!(
            "set has {} elements, the 5-term search cap is {FIVE_TERM_CAP}",
            e.len()
        )));
    }
    if e.len() < 6 {
        return Ok(None);
    }
    let mut pairs: HashMap<u64, Vec<(usize, usize)>> = HashMap::new();
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            pairs.entry(e[i] + e[j]).or_default().push((i, j));
        }
    }
    for (yi, &y) in e.iter().enumerate() {
        let target = 5 * y;
        for a in 0..e.len() {
            for b in a + 1..e.len() {
                for c in b + 1..e.len() {
                    let triple = e[a] + e[b] + e[c];
                    if [a, b, c].contains(&yi) || triple >= target {
                        continue;
                    }
                    let Some(list) = pairs.get(&(target - triple)) else { continue };
                    let used = [a, b, c, yi];
                    if let Some(&(i, j)) = list.iter().find(|(i, j)| !used.contains(i) && !used.contains(j)) {
                        let mut xs = [e[a], e[b], e[c], e[i], e[j]];
                        xs.sort_unstable();
                        return Ok(Some((xs, y)));
                    }
                }
            }
        }
    }
    Ok(None)
}
