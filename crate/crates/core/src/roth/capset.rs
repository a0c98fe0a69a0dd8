//! Subsets of `F₃^dim` without affine lines. Vectors are packed two bits per
//! coordinate into a `u64`, so `dim ≤ 32`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 32;
/// Default cap on the pairs examined by [`has_affine_line`].
pub const DEFAULT_PAIR_CAP: u64 = 200_000_000;
/// Outputs up to this size are re-checked after powering.
pub const RECHECK_LIMIT: usize = 5000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapSet {
    dim: usize,
    points: Vec<u64>,
}

pub fn pack(coords: &[u8]) -> Result<u64> {
    if coords.len() > MAX_DIM {
        return Err(Error::arg(format!("dimension {} exceeds {MAX_DIM}", coords.len())));
    }
    coords.iter().enumerate().try_fold(0u64, |acc, (i, &c)| {
        if c > 2 {
            Err(Error::arg(format!("coordinate {c} is not in F3")))
        } else {
            Ok(acc | (c as u64) << (2 * i))
        }
    })
}

pub fn unpack(v: u64, dim: usize) -> Vec<u8> {
    (0..dim).map(|i| ((v >> (2 * i)) & 3) as u8).collect()
}

/// `-(x + y)` coordinatewise mod 3.
fn third_point(x: u64, y: u64, dim: usize) -> u64 {
    let mut z = 0;
    for i in 0..dim {
        let s = ((x >> (2 * i)) & 3) + ((y >> (2 * i)) & 3);
        z |= ((3 - s % 3) % 3) << (2 * i);
    }
    z
}

impl CapSet {
    /// Distinct points with coordinates in `{0, 1, 2}`.
    pub fn new(dim: usize, points: &[Vec<u8>]) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::arg(format!("dimension must be in 1..={MAX_DIM}, got {dim}")));
        }
        let mut packed = Vec::with_capacity(points.len());
        for p in points {
            if p.len() != dim {
                return Err(Error::arg(format!("point {p:?} does not have dimension {dim}")));
            }
            packed.push(pack(p)?);
        }
        let mut sorted = packed.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::arg("points must be distinct"));
        }
        Ok(CapSet { dim, points: packed })
    }

    /// `{0, 1} ⊂ F₃`.
    pub fn default_base() -> Self {
        CapSet { dim: 1, points: vec![0, 1] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> Vec<Vec<u8>> {
        self.points.iter().map(|&p| unpack(p, self.dim)).collect()
    }

    /// `|S| / 3^dim`.
    pub fn density(&self) -> f64 {
        self.points.len() as f64 / 3f64.powi(self.dim as i32)
    }
}

/// Distinct `x, y, z` in the set with `x + y + z = 0`, checking at most
/// `pair_cap` pairs.
pub fn has_affine_line_capped(s: &CapSet, pair_cap: u64) -> Result<Option<[Vec<u8>; 3]>> {
    let n = s.points.len() as u64;
    let pairs = n * n.saturating_sub(1) / 2;
    if pairs > pair_cap {
        return Err(Error::Inconclusive(format!("{pairs} pairs exceed the line-check cap {pair_cap}")));
    }
    let members: HashSet<u64> = s.points.iter().copied().collect();
    for (i, &x) in s.points.iter().enumerate() {
        for &y in &s.points[i + 1..] {
            let z = third_point(x, y, s.dim);
            if members.contains(&z) {
                return Ok(Some([unpack(x, s.dim), unpack(y, s.dim), unpack(z, s.dim)]));
            }
        }
    }
    Ok(None)
}

pub fn has_affine_line(s: &CapSet) -> Result<Option<[Vec<u8>; 3]>> {
    has_affine_line_capped(s, DEFAULT_PAIR_CAP)
}

/// `base^{n_copies}` inside `F₃^{dim·n_copies}`.
pub fn capset_power(base: &CapSet, n_copies: usize) -> Result<CapSet> {
    if n_copies == 0 {
        return Err(Error::arg("number of copies must be positive"));
    }
    if let Some(line) = has_affine_line(base)? {
        return Err(Error::invalid(format!(
            "base contains the affine line {:?}, {:?}, {:?}",
            line[0], line[1], line[2]
        )));
    }
    let dim = base.dim * n_copies;
    if dim > MAX_DIM {
        return Err(Error::arg(format!("power has dimension {dim}, exceeding {MAX_DIM}")));
    }
    let size = (base.points.len() as u64).checked_pow(n_copies as u32);
    if size.is_none_or(|s| s > 1 << 26) {
        return Err(Error::arg("power has too many points"));
    }
    let mut points = vec![0u64];
    for copy in 0..n_copies {
        let shift = 2 * base.dim * copy;
        points = points.iter().flat_map(|&p| base.points.iter().map(move |&b| p | (b << shift))).collect();
    }
    let out = CapSet { dim, points };
    if out.len() <= RECHECK_LIMIT {
        if let Some(line) = has_affine_line(&out)? {
            return Err(Error::invalid(format!("power unexpectedly contains the line {line:?}")));
        }
    }
    Ok(out)
}
