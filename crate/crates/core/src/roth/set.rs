use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite set of positive integers inside `{1, ..., ambient_n}`, kept
/// strictly sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerSet {
    elements: Vec<u64>,
    ambient_n: u64,
}

impl IntegerSet {
    /// Requires strictly increasing elements in `1..=ambient_n`.
    pub fn new(elements: Vec<u64>, ambient_n: u64) -> Result<Self> {
        if let Some(w) = elements.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::invalid(format!("elements are not strictly increasing at {} -> {}", w[0], w[1])));
        }
        Self::check_range(&elements, ambient_n)?;
        Ok(IntegerSet { elements, ambient_n })
    }

    /// Sorts and deduplicates first.
    pub fn from_unsorted(mut elements: Vec<u64>, ambient_n: u64) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        Self::check_range(&elements, ambient_n)?;
        Ok(IntegerSet { elements, ambient_n })
    }

    /// `{1, ..., n}`.
    pub fn interval(n: u64) -> Self {
        IntegerSet { elements: (1..=n).collect(), ambient_n: n }
    }

    fn check_range(elements: &[u64], ambient_n: u64) -> Result<()> {
        match (elements.first(), elements.last()) {
            (Some(&0), _) => Err(Error::invalid("elements must be positive")),
            (_, Some(&hi)) if hi > ambient_n => {
                Err(Error::invalid(format!("element {hi} exceeds the ambient bound {ambient_n}")))
            }
            _ => Ok(()),
        }
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn ambient_n(&self) -> u64 {
        self.ambient_n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// `|A| / ambient_n`, zero for an empty ambient range.
    pub fn density(&self) -> f64 {
        if self.ambient_n == 0 {
            0.0
        } else {
            self.elements.len() as f64 / self.ambient_n as f64
        }
    }
}

/// Text form: a `# ambient n` header, then one integer per line. Blank
/// lines and further `#` comments are ignored.
pub fn parse_integer_set(text: &str) -> Result<IntegerSet> {
    let mut ambient: Option<u64> = None;
    let mut elements = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = idx + 1;
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if ambient.is_none() {
                let mut words = comment.split_whitespace();
                if words.next() != Some("ambient") {
                    return Err(Error::Parse { line: lineno, msg: "expected `# ambient n` header".into() });
                }
                let value = words.next().and_then(|w| w.parse().ok()).ok_or_else(|| Error::Parse {
                    line: lineno,
                    msg: "ambient bound is not a non-negative integer".into(),
                })?;
                ambient = Some(value);
            }
            continue;
        }
        if ambient.is_none() {
            return Err(Error::Parse { line: lineno, msg: "missing `# ambient n` header".into() });
        }
        let v: u64 = line
            .parse()
            .map_err(|_| Error::Parse { line: lineno, msg: format!("`{line}` is not a non-negative integer") })?;
        elements.push(v);
    }
    let ambient = ambient.ok_or_else(|| Error::Parse { line: 1, msg: "missing `# ambient n` header".into() })?;
    IntegerSet::new(elements, ambient)
}

pub fn format_integer_set(set: &IntegerSet) -> String {
    let mut out = format!("# ambient {}\n", set.ambient_n);
    for &x in &set.elements {
        let _ = writeln!(out, "{x}");
    }
    out
}

pub fn read_integer_set(path: impl AsRef<Path>) -> Result<IntegerSet> {
    parse_integer_set(&std::fs::read_to_string(path)?)
}

pub fn write_integer_set(path: impl AsRef<Path>, set: &IntegerSet) -> Result<()> {
    std::fs::write(path, format_integer_set(set))?;
    Ok(())
}
