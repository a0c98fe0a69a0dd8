//! Resume tokens for long searches.
//!
//! A checkpoint is a JSON document:
//!
//! ```json
//! {
//!   "target_discrepancy": 2,
//!   "multiplicative_only": false,
//!   "value_order": "balanced",
//!   "seed": 0,
//!   "path": "+--+-...",
//!   "best": "+--+-...",
//!   "nodes_visited": 123456
//! }
//! ```
//!
//! `path` is the depth-first prefix at the moment the run stopped, written as
//! `+`/`-` characters. Because the value order is a pure function of the
//! search state (and seed), replaying the path rebuilds every pending
//! alternative on the stack.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{SearchConfig, ValueOrder};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub target_discrepancy: u32,
    pub multiplicative_only: bool,
    pub value_order: ValueOrder,
    pub seed: u64,
    #[serde(serialize_with = "signs_out", deserialize_with = "signs_in")]
    pub path: Vec<i8>,
    #[serde(serialize_with = "signs_out", deserialize_with = "signs_in")]
    pub best: Vec<i8>,
    pub nodes_visited: u64,
}

fn signs_out<S: Serializer>(v: &[i8], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.iter().map(|&x| if x > 0 { '+' } else { '-' }).collect::<String>())
}

fn signs_in<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<i8>, D::Error> {
    use serde::de::Error as _;
    String::deserialize(d)?
        .chars()
        .map(|c| match c {
            '+' => Ok(1),
            '-' => Ok(-1),
            other => Err(D::Error::custom(format!("unexpected character {other:?} in sign string"))),
        })
        .collect()
}

impl Checkpoint {
    pub(crate) fn check_compatible(&self, cfg: &SearchConfig) -> Result<()> {
        if self.target_discrepancy != cfg.target_discrepancy
            || self.multiplicative_only != cfg.multiplicative_only
            || self.value_order != cfg.value_order
            || (self.value_order == ValueOrder::Seeded && self.seed != cfg.seed)
        {
            return Err(Error::arg("checkpoint was produced with a different bound, mode, order or seed"));
        }
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }
}
