//! Dense two-phase tableau simplex.
//!
//! Pricing is Dantzig's most-negative reduced cost; after a run of
//! degenerate pivots the entering column switches to Bland's smallest-index
//! rule until progress resumes. Ratio-test ties are broken lexicographically
//! on the rows of `B⁻¹`, which cannot cycle. The tableau is rebuilt from the
//! original rows every few pivots so round-off does not accumulate.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// `maximize cᵀx` subject to the rows and `x ≥ 0`.
#[derive(Debug, Clone)]
pub struct LinearProgram<T> {
    objective: Vec<T>,
    rows: Vec<(Vec<T>, Relation, T)>,
}

#[derive(Debug, Clone, Copy)]
pub struct LpOptions {
    /// Smallest acceptable pivot magnitude.
    pub pivot_tolerance: f64,
    /// Primal slack allowed by the ratio test and the phase-one check.
    pub feasibility_tolerance: f64,
    /// Reduced costs above `-optimality_tolerance` count as non-negative.
    pub optimality_tolerance: f64,
    /// Consecutive degenerate pivots tolerated before switching to Bland.
    pub degenerate_run: usize,
    /// Pivots between rebuilds of the tableau from the original rows.
    pub refactor_every: usize,
    pub max_pivots: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions {
            pivot_tolerance: 1e-9,
            feasibility_tolerance: 1e-9,
            optimality_tolerance: 1e-9,
            degenerate_run: 50,
            refactor_every: 50,
            max_pivots: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<T> {
    Optimal { x: Vec<T>, value: T, pivots: usize },
    Infeasible,
    Unbounded,
}

impl<T: Real> LinearProgram<T> {
    pub fn new(objective: Vec<T>) -> Self {
        LinearProgram { objective, rows: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.rows.len()
    }

    pub fn add_constraint(&mut self, coeffs: Vec<T>, rel: Relation, rhs: T) -> Result<()> {
        if coeffs.len() != self.objective.len() {
            return Err(Error::arg(format!(
                "constraint has {} coefficients, program has {} variables",
                coeffs.len(),
                self.objective.len()
            )));
        }
        self.rows.push((coeffs, rel, rhs));
        Ok(())
    }

    pub fn solve(&self, opts: &LpOptions) -> Result<LpOutcome<T>> {
        Tableau::build(self, opts).solve()
    }
}

struct Tableau<'a, T> {
    opts: &'a LpOptions,
    /// Current rows, each `width + 1` long with the rhs last.
    a: Vec<Vec<T>>,
    /// The rows as built, for refactorisation.
    original: Vec<Vec<T>>,
    basis: Vec<usize>,
    /// The starting basis; its columns of the current tableau hold `B⁻¹`.
    identity: Vec<usize>,
    n_struct: usize,
    /// Columns `>= first_artificial` are artificials.
    first_artificial: usize,
    width: usize,
    objective: Vec<T>,
    pivots: usize,
    since_refactor: usize,
}

enum Phase<T> {
    Optimal(T),
    Unbounded,
}

impl<'a, T: Real> Tableau<'a, T> {
    fn build(lp: &LinearProgram<T>, opts: &'a LpOptions) -> Self {
        let n = lp.num_vars();
        let norm: Vec<(Vec<T>, Relation, T)> = lp
            .rows
            .iter()
            .map(|(c, rel, b)| {
                if *b < T::zero() {
                    let flipped = match rel {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (c.iter().map(|&v| -v).collect(), flipped, -*b)
                } else {
                    (c.clone(), *rel, *b)
                }
            })
            .collect();
        let n_slack = norm.iter().filter(|r| r.1 != Relation::Eq).count();
        let n_art = norm.iter().filter(|r| r.1 != Relation::Le).count();
        let first_artificial = n + n_slack;
        let width = first_artificial + n_art;
        let mut a = Vec::with_capacity(norm.len());
        let mut basis = Vec::with_capacity(norm.len());
        let (mut s, mut art) = (n, first_artificial);
        for (coeffs, rel, rhs) in norm {
            let mut row = coeffs;
            row.resize(width + 1, T::zero());
            row[width] = rhs;
            match rel {
                Relation::Le => {
                    row[s] = T::one();
                    basis.push(s);
                    s += 1;
                }
                Relation::Ge => {
                    row[s] = -T::one();
                    s += 1;
                    row[art] = T::one();
                    basis.push(art);
                    art += 1;
                }
                Relation::Eq => {
                    row[art] = T::one();
                    basis.push(art);
                    art += 1;
                }
            }
            a.push(row);
        }
        Tableau {
            opts,
            original: a.clone(),
            a,
            identity: basis.clone(),
            basis,
            n_struct: n,
            first_artificial,
            width,
            objective: lp.objective.clone(),
            pivots: 0,
            since_refactor: 0,
        }
    }

    fn solve(mut self) -> Result<LpOutcome<T>> {
        let feas = T::of(self.opts.feasibility_tolerance);
        if self.first_artificial < self.width {
            let mut cost = vec![T::zero(); self.width];
            for c in cost.iter_mut().skip(self.first_artificial) {
                *c = -T::one();
            }
            let scale = self.a.iter().fold(T::one(), |m, r| m.max(r[self.width].abs()));
            match self.optimize(&cost, self.width, Some(-feas * scale))? {
                Phase::Unbounded => unreachable!("phase one objective is bounded above by zero"),
                Phase::Optimal(value) => {
                    if -value > feas * scale {
                        return Ok(LpOutcome::Infeasible);
                    }
                }
            }
            self.drive_out_artificials()?;
        }
        let mut cost = self.objective.clone();
        cost.resize(self.width, T::zero());
        match self.optimize(&cost, self.first_artificial, None)? {
            Phase::Unbounded => Ok(LpOutcome::Unbounded),
            Phase::Optimal(_) => {
                self.refactor();
                let mut x = vec![T::zero(); self.n_struct];
                for (r, &b) in self.basis.iter().enumerate() {
                    if b < self.n_struct {
                        x[b] = self.a[r][self.width].max(T::zero());
                    }
                }
                let value = x.iter().zip(&self.objective).map(|(&xi, &ci)| xi * ci).sum();
                Ok(LpOutcome::Optimal { x, value, pivots: self.pivots })
            }
        }
    }

    /// `z_j - c_j` for every column plus the objective value last.
    fn reduced_costs(&self, cost: &[T]) -> Vec<T> {
        let mut z: Vec<T> = (0..=self.width).map(|j| if j < self.width { -cost[j] } else { T::zero() }).collect();
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = cost[b];
            if cb != T::zero() {
                for (zj, &v) in z.iter_mut().zip(&self.a[r]) {
                    *zj += cb * v;
                }
            }
        }
        for &b in &self.basis {
            z[b] = T::zero();
        }
        z
    }

    /// Maximizes `cost · x` with entering columns restricted to `< allowed`,
    /// stopping early once the objective reaches `target`.
    fn optimize(&mut self, cost: &[T], allowed: usize, target: Option<T>) -> Result<Phase<T>> {
        let piv_tol = T::of(self.opts.pivot_tolerance);
        let feas = T::of(self.opts.feasibility_tolerance);
        let opt_tol = T::of(self.opts.optimality_tolerance);
        let mut z = self.reduced_costs(cost);
        let mut bland = false;
        let mut degenerate = 0usize;
        loop {
            if self.since_refactor >= self.opts.refactor_every.max(1) {
                self.refactor();
                z = self.reduced_costs(cost);
            }
            if target.is_some_and(|t| z[self.width] >= t) {
                return Ok(Phase::Optimal(z[self.width]));
            }
            let entering = if bland {
                (0..allowed).find(|&j| z[j] < -opt_tol)
            } else {
                let mut best: Option<(usize, T)> = None;
                for (j, &zj) in z.iter().enumerate().take(allowed) {
                    if zj < -opt_tol && best.is_none_or(|(_, v)| zj < v) {
                        best = Some((j, zj));
                    }
                }
                best.map(|(j, _)| j)
            };
            let Some(col) = entering else {
                return Ok(Phase::Optimal(z[self.width]));
            };

            let mut theta: Option<T> = None;
            for line in &self.a {
                let arc = line[col];
                if arc > piv_tol {
                    let ratio = line[self.width].max(T::zero()) / arc;
                    theta = Some(theta.map_or(ratio, |t| t.min(ratio)));
                }
            }
            let Some(theta) = theta else {
                return Ok(Phase::Unbounded);
            };
            let tie = feas * (T::one() + theta);
            let mut leave: Option<usize> = None;
            for (r, line) in self.a.iter().enumerate() {
                let arc = line[col];
                if arc <= piv_tol || line[self.width].max(T::zero()) / arc > theta + tie {
                    continue;
                }
                let better = match leave {
                    None => true,
                    Some(l) => self.lex_less(r, l, col),
                };
                if better {
                    leave = Some(r);
                }
            }
            let row = leave.expect("pass one found a candidate row");
            let step = self.a[row][self.width].max(T::zero()) / self.a[row][col];
            if step <= feas {
                degenerate += 1;
                if degenerate >= self.opts.degenerate_run {
                    bland = true;
                }
            } else {
                degenerate = 0;
                bland = false;
            }
            self.pivot(row, col, &mut z)?;
        }
    }

    /// Lexicographic comparison of rows `r` and `l` scaled by their entries
    /// in `col`, over the rhs and then the columns of `B⁻¹`.
    fn lex_less(&self, r: usize, l: usize, col: usize) -> bool {
        let tol = T::of(self.opts.feasibility_tolerance);
        let (ar, al) = (self.a[r][col], self.a[l][col]);
        let keys = std::iter::once(self.width).chain(self.identity.iter().copied());
        for c in keys {
            let (x, y) = (self.a[r][c] / ar, self.a[l][c] / al);
            if x < y - tol {
                return true;
            }
            if x > y + tol {
                return false;
            }
        }
        self.basis[r] < self.basis[l]
    }

    fn pivot(&mut self, row: usize, col: usize, z: &mut [T]) -> Result<()> {
        self.pivots += 1;
        self.since_refactor += 1;
        if self.pivots > self.opts.max_pivots {
            return Err(Error::Inconclusive(format!("simplex exceeded {} pivots", self.opts.max_pivots)));
        }
        let drop = T::epsilon() * T::of(64.0);
        let p = self.a[row][col];
        let pivot_row: Vec<T> = self.a[row].iter().map(|&v| v / p).collect();
        for (r, line) in self.a.iter_mut().enumerate() {
            if r == row {
                continue;
            }
            let f = line[col];
            if f != T::zero() {
                for (v, &pv) in line.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                    if v.abs() < drop {
                        *v = T::zero();
                    }
                }
                line[col] = T::zero();
            }
        }
        let f = z[col];
        if f != T::zero() {
            for (v, &pv) in z.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            z[col] = T::zero();
        }
        self.a[row] = pivot_row;
        self.basis[row] = col;
        self.clamp_rhs();
        Ok(())
    }

    fn clamp_rhs(&mut self) {
        let tiny = T::of(self.opts.feasibility_tolerance);
        for line in &mut self.a {
            if line[self.width] < tiny {
                line[self.width] = line[self.width].max(T::zero()).min(tiny);
                if line[self.width] < tiny * T::of(1e-3) {
                    line[self.width] = T::zero();
                }
            }
        }
    }

    /// Rebuilds the tableau as `B⁻¹ · original` by Gauss-Jordan elimination
    /// with partial pivoting. Keeps the current rows if `B` looks singular.
    fn refactor(&mut self) {
        self.since_refactor = 0;
        let m = self.basis.len();
        let mut aug: Vec<Vec<T>> = self.original.clone();
        // Column k of B is original column basis[k]; eliminate it into e_k.
        let mut order: Vec<usize> = (0..m).collect();
        for k in 0..m {
            let bk = self.basis[k];
            let Some(p) = (k..m).max_by(|&x, &y| {
                aug[order[x]][bk].abs().partial_cmp(&aug[order[y]][bk].abs()).unwrap_or(std::cmp::Ordering::Equal)
            }) else {
                return;
            };
            if aug[order[p]][bk].abs() < T::of(1e-12) {
                return;
            }
            order.swap(k, p);
            let pr = order[k];
            let pv = aug[pr][bk];
            aug[pr].iter_mut().for_each(|v| *v /= pv);
            let pivot_row = aug[pr].clone();
            for (r, line) in aug.iter_mut().enumerate() {
                if r == pr {
                    continue;
                }
                let f = line[bk];
                if f != T::zero() {
                    for (v, &w) in line.iter_mut().zip(&pivot_row) {
                        *v -= f * w;
                    }
                }
            }
        }
        self.a = order.iter().map(|&r| std::mem::take(&mut aug[r])).collect();
        for (k, &b) in self.basis.iter().enumerate() {
            for (r, line) in self.a.iter_mut().enumerate() {
                line[b] = if r == k { T::one() } else { T::zero() };
            }
        }
        self.clamp_rhs();
    }

    /// Pivots basic artificials out after phase one; rows where that is
    /// impossible are linearly dependent and get dropped.
    fn drive_out_artificials(&mut self) -> Result<()> {
        let tol = T::of(self.opts.pivot_tolerance);
        let mut r = 0;
        while r < self.a.len() {
            if self.basis[r] >= self.first_artificial {
                let col = (0..self.first_artificial).filter(|&j| self.a[r][j].abs() > tol).max_by(|&i, &j| {
                    self.a[r][i].abs().partial_cmp(&self.a[r][j].abs()).unwrap_or(std::cmp::Ordering::Equal)
                });
                match col {
                    Some(c) => {
                        let mut scratch = vec![T::zero(); self.width + 1];
                        self.pivot(r, c, &mut scratch)?;
                    }
                    None => {
                        self.a.remove(r);
                        self.original.remove(r);
                        self.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        self.refactor();
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn optimal(out: LpOutcome<f64>) -> (Vec<f64>, f64) {
        match out {
            LpOutcome::Optimal { x, value, .. } => (x, value),
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn textbook_program() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → (2, 6), 36.
        let mut lp = LinearProgram::new(vec![3.0, 5.0]);
        lp.add_constraint(vec![1.0, 0.0], Relation::Le, 4.0).unwrap();
        lp.add_constraint(vec![0.0, 2.0], Relation::Le, 12.0).unwrap();
        lp.add_constraint(vec![3.0, 2.0], Relation::Le, 18.0).unwrap();
        let (x, v) = optimal(lp.solve(&LpOptions::default()).unwrap());
        assert!((v - 36.0).abs() < 1e-9);
        assert!((x[0] - 2.0).abs() < 1e-9 && (x[1] - 6.0).abs() < 1e-9);
    }

    #[test]
    fn equality_and_ge_rows() {
        // max x + y, x + y = 3, x ≥ 1, y ≥ 1, x - y ≤ 0 (via negative rhs flip).
        let mut lp = LinearProgram::new(vec![1.0, 2.0]);
        lp.add_constraint(vec![1.0, 1.0], Relation::Eq, 3.0).unwrap();
        lp.add_constraint(vec![1.0, 0.0], Relation::Ge, 1.0).unwrap();
        lp.add_constraint(vec![-1.0, 0.0], Relation::Le, -1.0).unwrap();
        let (x, v) = optimal(lp.solve(&LpOptions::default()).unwrap());
        assert!((v - 5.0).abs() < 1e-9, "{x:?}");
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(vec![1.0]);
        lp.add_constraint(vec![1.0], Relation::Le, 1.0).unwrap();
        lp.add_constraint(vec![1.0], Relation::Ge, 2.0).unwrap();
        assert_eq!(lp.solve(&LpOptions::default()).unwrap(), LpOutcome::Infeasible);
        let mut lp = LinearProgram::new(vec![1.0, 0.0]);
        lp.add_constraint(vec![-1.0, 1.0], Relation::Le, 1.0).unwrap();
        assert_eq!(lp.solve(&LpOptions::default()).unwrap(), LpOutcome::Unbounded);
        assert!(LinearProgram::new(vec![1.0]).add_constraint(vec![], Relation::Le, 0.0).is_err());
    }

    #[test]
    fn redundant_equalities_are_dropped() {
        let mut lp = LinearProgram::new(vec![1.0, 1.0]);
        lp.add_constraint(vec![1.0, 1.0], Relation::Eq, 2.0).unwrap();
        lp.add_constraint(vec![2.0, 2.0], Relation::Eq, 4.0).unwrap();
        let (_, v) = optimal(lp.solve(&LpOptions::default()).unwrap());
        assert!((v - 2.0).abs() < 1e-9);
    }

    #[test]
    fn beale_cycling_example_terminates() {
        // Classic instance on which pure Dantzig pricing cycles.
        let mut lp = LinearProgram::new(vec![0.75, -150.0, 0.02, -6.0]);
        lp.add_constraint(vec![0.25, -60.0, -0.04, 9.0], Relation::Le, 0.0).unwrap();
        lp.add_constraint(vec![0.5, -90.0, -0.02, 3.0], Relation::Le, 0.0).unwrap();
        lp.add_constraint(vec![0.0, 0.0, 1.0, 0.0], Relation::Le, 1.0).unwrap();
        let opts = LpOptions { degenerate_run: 3, ..LpOptions::default() };
        let (_, v) = optimal(lp.solve(&opts).unwrap());
        assert!((v - 0.05).abs() < 1e-9);
    }

    /// Brute-force oracle for `max cᵀx, Ax ≤ b, x ≥ 0` in two variables:
    /// enumerate every intersection of two constraint lines.
    fn vertex_oracle(c: &[f64; 2], rows: &[([f64; 2], f64)]) -> Option<f64> {
        let mut lines: Vec<([f64; 2], f64)> = rows.to_vec();
        lines.push(([-1.0, 0.0], 0.0));
        lines.push(([0.0, -1.0], 0.0));
        let mut best: Option<f64> = None;
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let (a, b) = (lines[i], lines[j]);
                let det = a.0[0] * b.0[1] - a.0[1] * b.0[0];
                if det.abs() < 1e-12 {
                    continue;
                }
                let x = (a.1 * b.0[1] - a.0[1] * b.1) / det;
                let y = (a.0[0] * b.1 - a.1 * b.0[0]) / det;
                if lines.iter().all(|(r, rhs)| r[0] * x + r[1] * y <= rhs + 1e-9) {
                    let v = c[0] * x + c[1] * y;
                    best = Some(best.map_or(v, |bv: f64| bv.max(v)));
                }
            }
        }
        best
    }

    proptest! {
        #[test]
        fn matches_vertex_enumeration(
            c in prop::array::uniform2(-2.0f64..2.0),
            rows in prop::collection::vec((prop::array::uniform2(0.1f64..3.0), 0.5f64..5.0), 1..6),
        ) {
            // Positive coefficients and rhs keep the region bounded and nonempty.
            let mut lp = LinearProgram::new(c.to_vec());
            for (r, b) in &rows {
                lp.add_constraint(r.to_vec(), Relation::Le, *b).unwrap();
            }
            let (_, v) = optimal(lp.solve(&LpOptions::default()).unwrap());
            let oracle = vertex_oracle(&c, &rows).unwrap();
            prop_assert!((v - oracle).abs() < 1e-8, "{v} vs {oracle}");
        }
    }
}
