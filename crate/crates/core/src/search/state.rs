use crate::arith::{divisor_table, Sieve};

/// What the next position may hold given the current running sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Options {
    /// Both signs keep every HAP sum within the bound.
    Free,
    /// Exactly one sign does.
    Forced(i8),
    /// Neither does.
    Dead,
}

/// Incremental search state: the current prefix plus one running sum per
/// difference `d`. Appending position `n` touches only the sums for `d | n`.
#[derive(Debug, Clone)]
pub struct SearchState {
    bound: i32,
    multiplicative: bool,
    seq: Vec<i8>,
    sums: Vec<i32>,
    divisors: Vec<Vec<u32>>,
    sieve: Option<Sieve>,
}

impl SearchState {
    pub fn new(bound: u32, multiplicative: bool) -> Self {
        let mut st = SearchState {
            bound: bound as i32,
            multiplicative,
            seq: Vec::new(),
            sums: vec![0],
            divisors: Vec::new(),
            sieve: None,
        };
        st.reserve(64);
        st
    }

    fn reserve(&mut self, n: usize) {
        if n < self.divisors.len() {
            return;
        }
        let cap = (n + 1).next_power_of_two().max(64);
        self.divisors = divisor_table(cap);
        if self.multiplicative {
            self.sieve = Some(Sieve::new(cap));
        }
        self.sums.resize(cap + 1, 0);
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.seq.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn bound(&self) -> u32 {
        self.bound as u32
    }

    pub fn sequence(&self) -> &[i8] {
        &self.seq
    }

    /// Running sum along difference `d` over the current prefix.
    pub fn running_sum(&self, d: usize) -> i32 {
        self.sums.get(d).copied().unwrap_or(0)
    }

    /// Options for the next position `n = len + 1`.
    pub fn options(&mut self) -> Options {
        let n = self.seq.len() + 1;
        self.reserve(n);
        let (mut plus, mut minus) = (true, true);
        for &d in &self.divisors[n] {
            let s = self.sums[d as usize];
            if s >= self.bound {
                plus = false;
            }
            if s <= -self.bound {
                minus = false;
            }
        }
        if self.multiplicative {
            if let Some(v) = self.multiplicative_value(n) {
                let ok = if v > 0 { plus } else { minus };
                return if ok { Options::Forced(v) } else { Options::Dead };
            }
        }
        match (plus, minus) {
            (true, true) => Options::Free,
            (true, false) => Options::Forced(1),
            (false, true) => Options::Forced(-1),
            (false, false) => Options::Dead,
        }
    }

    /// Value implied by complete multiplicativity, `None` at primes.
    fn multiplicative_value(&self, n: usize) -> Option<i8> {
        if n == 1 {
            return Some(1);
        }
        let sieve = self.sieve.as_ref().expect("sieve is built in multiplicative mode");
        let p = sieve.smallest_factor(n);
        if p == n {
            None
        } else {
            Some(self.seq[p - 1] * self.seq[n / p - 1])
        }
    }

    /// `Σ_{d | n} |s_d + x|` for the next position; smaller is more balanced.
    pub fn imbalance(&self, x: i8) -> i32 {
        let n = self.seq.len() + 1;
        self.divisors[n].iter().map(|&d| (self.sums[d as usize] + x as i32).abs()).sum()
    }

    /// Appends `x` without checking the bound.
    pub fn push(&mut self, x: i8) {
        let n = self.seq.len() + 1;
        self.reserve(n);
        for &d in &self.divisors[n] {
            self.sums[d as usize] += x as i32;
        }
        self.seq.push(x);
    }

    pub fn pop(&mut self) -> Option<i8> {
        let n = self.seq.len();
        let x = self.seq.pop()?;
        for &d in &self.divisors[n] {
            self.sums[d as usize] -= x as i32;
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_is_forced_at_the_end() {
        let mut st = SearchState::new(1, false);
        for &x in &[1, -1, -1, 1, -1, 1, 1, -1, -1, 1, 1] {
            assert_ne!(st.options(), Options::Dead);
            st.push(x);
        }
        assert_eq!(st.options(), Options::Dead);
        st.pop();
        assert_eq!(st.len(), 10);
        assert_eq!(st.running_sum(1), 0);
    }

    #[test]
    fn multiplicative_mode_forces_composites() {
        let mut st = SearchState::new(2, true);
        assert_eq!(st.options(), Options::Forced(1));
        st.push(1);
        assert_eq!(st.options(), Options::Free);
        st.push(-1);
        st.push(-1);
        // 4 = 2·2
        assert_eq!(st.options(), Options::Forced(1));
    }

    #[test]
    fn grows_past_initial_capacity() {
        let mut st = SearchState::new(1000, false);
        for i in 0..300 {
            st.push(if i % 2 == 0 { 1 } else { -1 });
        }
        assert_eq!(st.len(), 300);
        assert_eq!(st.running_sum(1), 0);
    }
}
