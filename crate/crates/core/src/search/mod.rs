//! Backtracking search for long sequences of bounded HAP discrepancy.
//!
//! The search is a depth-first walk over ±1 assignments. [`SearchState`]
//! keeps one running sum per difference `d`; a branch dies as soon as every
//! sign at the next position would push some `|sum|` past the bound, and a
//! position whose divisors sit at `±C` gets its sign forced before any
//! branching. The stack holds at most one pending alternative per level, so
//! memory is `O(L)`.

mod checkpoint;
mod modular;
mod state;

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::is_completely_multiplicative;
use crate::error::{Error, Result};
use crate::seq::{discrepancy, SignSequence};

pub use checkpoint::Checkpoint;
pub use modular::{modular_avoiding_length, modular_min_horizon};
pub use state::{Options, SearchState};

/// Node cap applied to exhaustive questions unless overridden.
pub const DEFAULT_NODE_CAP: u64 = 1_000_000_000;

/// Which sign to try first at a free position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValueOrder {
    /// The sign minimising `Σ_{d | n} |s_d + x|`; ties go to `+1`.
    #[default]
    Balanced,
    PlusFirst,
    MinusFirst,
    /// A per-position coin derived from the seed; stateless, so a checkpoint
    /// path alone reconstructs the stack.
    Seeded,
}

impl std::str::FromStr for ValueOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "balanced" => Ok(ValueOrder::Balanced),
            "plus-first" => Ok(ValueOrder::PlusFirst),
            "minus-first" => Ok(ValueOrder::MinusFirst),
            "seeded" => Ok(ValueOrder::Seeded),
            other => Err(Error::arg(format!(
                "unknown value order {other:?} (balanced, plus-first, minus-first, seeded)"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// The bound `C` on every HAP sum.
    pub target_discrepancy: u32,
    /// Stop once a sequence of this length is found.
    pub max_length: Option<usize>,
    pub time_budget: Duration,
    /// Optional cap on visited nodes; makes budgeted runs reproducible.
    pub node_budget: Option<u64>,
    pub value_order: ValueOrder,
    pub multiplicative_only: bool,
    pub seed: u64,
    /// Resume from a checkpoint produced by an earlier run with the same
    /// bound, order, seed and mode.
    pub resume: Option<Checkpoint>,
}

impl SearchConfig {
    pub fn new(target_discrepancy: u32) -> Self {
        SearchConfig {
            target_discrepancy,
            max_length: None,
            time_budget: Duration::from_secs(60),
            node_budget: None,
            value_order: ValueOrder::default(),
            multiplicative_only: false,
            seed: 0,
            resume: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.target_discrepancy == 0 {
            return Err(Error::arg("target discrepancy C must be at least 1"));
        }
        if self.time_budget.is_zero() {
            return Err(Error::arg("time budget must be positive"));
        }
        if self.max_length == Some(0) {
            return Err(Error::arg("max_length must be positive"));
        }
        Ok(())
    }
}

/// Why a search stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    Exhausted,
    LengthCap,
    TimeBudget,
    NodeBudget,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub best_sequence: SignSequence,
    pub best_length: usize,
    /// True only if the whole tree was explored: no sequence of length
    /// `best_length + 1` stays within the bound.
    pub exhausted: bool,
    pub nodes_visited: u64,
    pub elapsed: Duration,
    pub stop_reason: StopReason,
    /// Present when the run stopped on a budget and can be resumed.
    pub checkpoint: Option<Checkpoint>,
}

struct Frame {
    alt: Option<i8>,
}

/// Depth-first driver shared by all searches.
struct Dfs<'a> {
    state: SearchState,
    stack: Vec<Frame>,
    order: ValueOrder,
    seed: u64,
    on_node: &'a mut dyn FnMut(&SearchState) -> Control,
}

enum Control {
    Continue,
    /// Do not descend below the current node.
    Prune,
    Stop,
}

enum Outcome {
    Exhausted,
    Stopped,
}

fn seeded_coin(seed: u64, n: usize) -> bool {
    let mut z = seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    (z ^ (z >> 31)) & 1 == 1
}

impl<'a> Dfs<'a> {
    /// First and second choice at the next position.
    fn choices(&mut self) -> Option<(i8, Option<i8>)> {
        match self.state.options() {
            Options::Dead => None,
            Options::Forced(x) => Some((x, None)),
            Options::Free => {
                let first = match self.order {
                    ValueOrder::Balanced => {
                        if self.state.imbalance(1) <= self.state.imbalance(-1) {
                            1
                        } else {
                            -1
                        }
                    }
                    ValueOrder::PlusFirst => 1,
                    ValueOrder::MinusFirst => -1,
                    ValueOrder::Seeded => {
                        if seeded_coin(self.seed, self.state.len() + 1) {
                            1
                        } else {
                            -1
                        }
                    }
                };
                Some((first, Some(-first)))
            }
        }
    }

    /// Replays `path`, rebuilding the pending alternatives along it.
    fn replay(&mut self, path: &[i8]) -> Result<()> {
        for (i, &x) in path.iter().enumerate() {
            let (first, second) = self
                .choices()
                .ok_or_else(|| Error::invalid(format!("checkpoint path is infeasible at position {}", i + 1)))?;
            let alt = if x == first {
                second
            } else if Some(x) == second {
                None
            } else {
                return Err(Error::invalid(format!("checkpoint path is infeasible at position {}", i + 1)));
            };
            self.state.push(x);
            self.stack.push(Frame { alt });
        }
        Ok(())
    }

    fn visit(&mut self, x: i8, alt: Option<i8>) -> Control {
        self.state.push(x);
        self.stack.push(Frame { alt });
        (self.on_node)(&self.state)
    }

    /// Pops exhausted frames; returns the next alternative to try, if any.
    fn backtrack(&mut self) -> Option<i8> {
        while let Some(frame) = self.stack.pop() {
            self.state.pop();
            if let Some(a) = frame.alt {
                return Some(a);
            }
        }
        None
    }

    fn run(&mut self) -> Outcome {
        let mut descend = true;
        loop {
            let next = if descend {
                match self.choices() {
                    Some((first, second)) => Some((first, second)),
                    None => self.backtrack().map(|a| (a, None)),
                }
            } else {
                self.backtrack().map(|a| (a, None))
            };
            let Some((x, alt)) = next else {
                return Outcome::Exhausted;
            };
            match self.visit(x, alt) {
                Control::Continue => descend = true,
                Control::Prune => descend = false,
                Control::Stop => return Outcome::Stopped,
            }
        }
    }
}

fn check_witness(seq: &SignSequence, bound: u32, multiplicative: bool) -> Result<()> {
    if seq.is_empty() {
        return Ok(());
    }
    let disc = discrepancy(seq)?.max_abs_sum;
    if disc > bound as u64 {
        return Err(Error::invalid(format!("search produced a sequence of discrepancy {disc} > {bound}")));
    }
    if multiplicative && !is_completely_multiplicative(seq)? {
        return Err(Error::invalid("search produced a sequence that is not completely multiplicative"));
    }
    Ok(())
}

/// Longest sequence with every HAP sum in `[-C, C]` found within budget.
///
/// With `multiplicative_only` the search branches only at primes and fills
/// composites by complete multiplicativity.
pub fn longest_with_discrepancy(config: &SearchConfig) -> Result<SearchResult> {
    config.validate()?;
    let start = Instant::now();
    let bound = config.target_discrepancy;
    let mut best: Vec<i8> = Vec::new();
    let mut stop = StopReason::Exhausted;
    let base_nodes = config.resume.as_ref().map_or(0, |c| c.nodes_visited);
    let mut visited = 0u64;

    if let Some(cp) = &config.resume {
        cp.check_compatible(config)?;
        best = cp.best.clone();
    }

    let mut on_node = |st: &SearchState| {
        visited += 1;
        if st.len() > best.len() {
            best.clear();
            best.extend_from_slice(st.sequence());
        }
        if config.max_length.is_some_and(|cap| st.len() >= cap) {
            stop = StopReason::LengthCap;
            return Control::Stop;
        }
        if config.node_budget.is_some_and(|b| base_nodes + visited >= b) {
            stop = StopReason::NodeBudget;
            return Control::Stop;
        }
        if visited % 1024 == 0 && start.elapsed() >= config.time_budget {
            stop = StopReason::TimeBudget;
            return Control::Stop;
        }
        Control::Continue
    };

    let mut dfs = Dfs {
        state: SearchState::new(bound, config.multiplicative_only),
        stack: Vec::new(),
        order: config.value_order,
        seed: config.seed,
        on_node: &mut on_node,
    };
    if let Some(cp) = &config.resume {
        dfs.replay(&cp.path)?;
    }
    let outcome = dfs.run();
    let path = dfs.state.sequence().to_vec();
    drop(dfs);

    let exhausted = matches!(outcome, Outcome::Exhausted);
    let nodes_visited = base_nodes + visited;
    let checkpoint = match stop {
        StopReason::TimeBudget | StopReason::NodeBudget => Some(Checkpoint {
            target_discrepancy: bound,
            multiplicative_only: config.multiplicative_only,
            value_order: config.value_order,
            seed: config.seed,
            path,
            best: best.clone(),
            nodes_visited,
        }),
        _ => None,
    };
    let best_sequence = SignSequence::new(best)?;
    check_witness(&best_sequence, bound, config.multiplicative_only)?;
    Ok(SearchResult {
        best_length: best_sequence.len(),
        best_sequence,
        exhausted,
        nodes_visited,
        elapsed: start.elapsed(),
        stop_reason: if exhausted { StopReason::Exhausted } else { stop },
        checkpoint,
    })
}

/// [`longest_with_discrepancy`] restricted to completely multiplicative
/// sequences.
pub fn longest_multiplicative_with_discrepancy(config: &SearchConfig) -> Result<SearchResult> {
    if !config.multiplicative_only {
        return Err(Error::arg("longest_multiplicative_with_discrepancy needs multiplicative_only = true"));
    }
    longest_with_discrepancy(config)
}

/// Counts sequences of length exactly `len` with discrepancy at most `bound`,
/// by exhaustive enumeration. Subtrees below a fixed split depth are counted
/// in parallel on the current rayon pool; the total is order-independent.
pub fn count_sequences(bound: u32, len: usize, node_cap: u64) -> Result<u64> {
    count_sequences_in(bound, len, node_cap, false)
}

fn count_sequences_in(bound: u32, len: usize, node_cap: u64, multiplicative: bool) -> Result<u64> {
    if bound == 0 {
        return Err(Error::arg("bound C must be at least 1"));
    }
    if len == 0 {
        return Ok(1);
    }
    let split = len.min(10);
    let mut prefixes: Vec<Vec<i8>> = Vec::new();
    let mut nodes = 0u64;
    {
        let mut on_node = |st: &SearchState| {
            nodes += 1;
            if st.len() == split {
                prefixes.push(st.sequence().to_vec());
                Control::Prune
            } else if nodes > node_cap {
                Control::Stop
            } else {
                Control::Continue
            }
        };
        let mut dfs = Dfs {
            state: SearchState::new(bound, multiplicative),
            stack: Vec::new(),
            order: ValueOrder::PlusFirst,
            seed: 0,
            on_node: &mut on_node,
        };
        if let Outcome::Stopped = dfs.run() {
            return Err(Error::Inconclusive(format!("node cap {node_cap} exceeded")));
        }
    }
    if split == len {
        return Ok(prefixes.len() as u64);
    }

    let total_nodes = AtomicU64::new(nodes);
    let over = AtomicBool::new(false);
    let count: u64 = prefixes
        .par_iter()
        .map(|prefix| {
            let mut leaves = 0u64;
            let mut local = 0u64;
            let mut on_node = |st: &SearchState| {
                local += 1;
                if local % 4096 == 0 && total_nodes.fetch_add(4096, Ordering::Relaxed) + 4096 > node_cap {
                    over.store(true, Ordering::Relaxed);
                }
                if over.load(Ordering::Relaxed) {
                    return Control::Stop;
                }
                if st.len() == len {
                    leaves += 1;
                    Control::Prune
                } else {
                    Control::Continue
                }
            };
            let mut dfs = Dfs {
                state: SearchState::new(bound, multiplicative),
                stack: Vec::new(),
                order: ValueOrder::PlusFirst,
                seed: 0,
                    on_node: &mut on_node,
            };
            for &x in prefix {
                dfs.state.push(x);
            }
            dfs.run();
            leaves
        })
        .sum();
    if over.load(Ordering::Relaxed) {
        return Err(Error::Inconclusive(format!("node cap {node_cap} exceeded")));
    }
    Ok(count)
}

/// True iff every ±1 sequence of length `len` has discrepancy greater than
/// `bound`, established by exhaustive search. Exceeding `node_cap` yields
/// [`Error::Inconclusive`], never a guess.
pub fn prove_no_extension(bound: u32, len: usize, node_cap: u64) -> Result<bool> {
    if bound == 0 || len == 0 {
        return Err(Error::arg("prove_no_extension needs C >= 1 and L >= 1"));
    }
    let mut nodes = 0u64;
    let mut found = false;
    let mut capped = false;
    let mut on_node = |st: &SearchState| {
        nodes += 1;
        if st.len() >= len {
            found = true;
            return Control::Stop;
        }
        if nodes > node_cap {
            capped = true;
            return Control::Stop;
        }
        Control::Continue
    };
    let mut dfs = Dfs {
        state: SearchState::new(bound, false),
        stack: Vec::new(),
        order: ValueOrder::Balanced,
        seed: 0,
        on_node: &mut on_node,
    };
    dfs.run();
    if capped {
        return Err(Error::Inconclusive(format!("node cap {node_cap} exceeded before settling C={bound}, L={len}")));
    }
    Ok(!found)
}
