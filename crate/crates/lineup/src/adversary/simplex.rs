//! Dense two-phase simplex with Bland's rule, plus an exact-arithmetic
//! recheck of the final basis.
//!
//! The LPs here are tiny (at most a few thousand rows) but heavily
//! degenerate, so the pivot rule favors termination over speed. After the
//! floating-point solve, the final basis is re-solved in rational
//! arithmetic: the basic structural variables satisfy a small square
//! system once slack-basic rows are peeled off, so certification costs a
//! rational elimination of size at most the variable count.

use num::rational::BigRational;
use num::{Signed, Zero};

const TOL: f64 = 1e-9;

/// `sum coeffs . x (<=|=) rhs` with `rhs >= 0`; coefficient lists must not
/// repeat a variable.
#[derive(Debug, Clone)]
pub(crate) struct LpRow {
    pub coeffs: Vec<(usize, f64)>,
    pub rhs: f64,
    pub equality: bool,
}

/// Maximize `objective . x` subject to the rows and `x >= 0`.
#[derive(Debug, Clone)]
pub(crate) struct LinearProgram {
    pub n_vars: usize,
    pub rows: Vec<LpRow>,
    pub objective: Vec<f64>,
}

#[derive(Debug, Clone)]
pub(crate) enum LpOutcome {
    Optimal {
        value: f64,
        solution: Vec<f64>,
        /// Exact value and solution recomputed from the final basis, when
        /// the rational recheck succeeds.
        certified: Option<(f64, Vec<f64>)>,
    },
    Unbounded,
    Infeasible,
}

pub(crate) fn maximize(lp: &LinearProgram) -> LpOutcome {
    Tableau::new(lp).solve(lp)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BasicVar {
    Structural(usize),
    /// Slack of the original row with this index.
    Slack(usize),
    /// Artificial introduced for the original row with this index.
    Artificial(usize),
}

struct Tableau {
    n_vars: usize,
    n_slacks: usize,
    /// Column layout: structurals, then slacks, then artificials.
    cols: usize,
    /// Row-major body, one extra column for the rhs.
    body: Vec<f64>,
    basis: Vec<BasicVar>,
    /// Original row index per tableau row (rows can be dropped as
    /// redundant between phases).
    origin: Vec<usize>,
    slack_col_of_row: Vec<Option<usize>>,
    art_col_of_row: Vec<Option<usize>>,
}

impl Tableau {
    fn new(lp: &LinearProgram) -> Self {
        let m = lp.rows.len();
        let n_slacks = lp.rows.iter().filter(|r| !r.equality).count();
        let n_arts = m - n_slacks;
        let cols = lp.n_vars + n_slacks + n_arts;
        let mut body = vec![0.0; m * (cols + 1)];
        let mut basis = Vec::with_capacity(m);
        let mut slack_col_of_row = vec![None; m];
        let mut art_col_of_row = vec![None; m];
        let mut next_slack = lp.n_vars;
        let mut next_art = lp.n_vars + n_slacks;
        for (i, row) in lp.rows.iter().enumerate() {
            debug_assert!(row.rhs >= 0.0, "rows are normalized to rhs >= 0");
            let base = i * (cols + 1);
            for &(var, coef) in &row.coeffs {
                body[base + var] += coef;
            }
            body[base + cols] = row.rhs;
            if row.equality {
                body[base + next_art] = 1.0;
                art_col_of_row[i] = Some(next_art);
                basis.push(BasicVar::Artificial(i));
                next_art += 1;
            } else {
                body[base + next_slack] = 1.0;
                slack_col_of_row[i] = Some(next_slack);
                basis.push(BasicVar::Slack(i));
                next_slack += 1;
            }
        }
        Tableau {
            n_vars: lp.n_vars,
            n_slacks,
            cols,
            body,
            basis,
            origin: (0..m).collect(),
            slack_col_of_row,
            art_col_of_row,
        }
    }

    fn rows(&self) -> usize {
        self.basis.len()
    }

    fn at(&self, row: usize, col: usize) -> f64 {
        self.body[row * (self.cols + 1) + col]
    }

    fn rhs(&self, row: usize) -> f64 {
        self.at(row, self.cols)
    }

    fn col_of_basic(&self, var: BasicVar) -> usize {
        match var {
            BasicVar::Structural(j) => j,
            BasicVar::Slack(r) => self.slack_col_of_row[r].unwrap(),
            BasicVar::Artificial(r) => self.art_col_of_row[r].unwrap(),
        }
    }

    fn pivot(&mut self, row: usize, col: usize, z_row: &mut [f64]) {
        let width = self.cols + 1;
        let pivot = self.at(row, col);
        let base = row * width;
        for j in 0..width {
            self.body[base + j] /= pivot;
        }
        for i in 0..self.rows() {
            if i == row {
                continue;
            }
            let factor = self.at(i, col);
            if factor == 0.0 {
                continue;
            }
            let other = i * width;
            for j in 0..width {
                self.body[other + j] -= factor * self.body[base + j];
            }
        }
        let factor = z_row[col];
        if factor != 0.0 {
            for j in 0..self.cols {
                z_row[j] -= factor * self.body[base + j];
            }
        }
    }

    fn reduced_costs(&self, cost: &dyn Fn(usize) -> f64) -> Vec<f64> {
        let mut z_row: Vec<f64> = (0..self.cols).map(cost).collect();
        for i in 0..self.rows() {
            let cb = cost(self.col_of_basic(self.basis[i]));
            if cb == 0.0 {
                continue;
            }
            for j in 0..self.cols {
                z_row[j] -= cb * self.at(i, j);
            }
        }
        z_row
    }

    /// Objective of the current basic solution under `cost`.
    fn basic_value(&self, cost: &dyn Fn(usize) -> f64) -> f64 {
        (0..self.rows())
            .map(|i| cost(self.col_of_basic(self.basis[i])) * self.rhs(i))
            .sum()
    }

    /// Bland's rule: smallest improving column enters, smallest basic
    /// index among minimum ratios leaves. Returns false on unboundedness.
    fn run(&mut self, z_row: &mut Vec<f64>, allow: &dyn Fn(usize) -> bool) -> bool {
        loop {
            let entering = (0..self.cols).find(|&j| allow(j) && z_row[j] > TOL);
            let Some(q) = entering else { return true };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows() {
                let a = self.at(i, q);
                if a > TOL {
                    let ratio = self.rhs(i) / a;
                    let better = match leave {
                        None => true,
                        Some((r, best)) => {
                            ratio < best - TOL
                                || (ratio < best + TOL
                                    && self.bland_index(self.basis[i])
                                        < self.bland_index(self.basis[r]))
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = leave else { return false };
            self.pivot(r, q, z_row);
            self.basis[r] = self.var_of_col(q);
        }
    }

    fn bland_index(&self, var: BasicVar) -> usize {
        self.col_of_basic(var)
    }

    fn var_of_col(&self, col: usize) -> BasicVar {
        if col < self.n_vars {
            BasicVar::Structural(col)
        } else if col < self.n_vars + self.n_slacks {
            BasicVar::Slack(
                self.slack_col_of_row
                    .iter()
                    .position(|&c| c == Some(col))
                    .expect("slack column maps to a row"),
            )
        } else {
            BasicVar::Artificial(
                self.art_col_of_row
                    .iter()
                    .position(|&c| c == Some(col))
                    .expect("artificial column maps to a row"),
            )
        }
    }

    fn drop_row(&mut self, row: usize) {
        let width = self.cols + 1;
        let start = row * width;
        self.body.drain(start..start + width);
        self.basis.remove(row);
        self.origin.remove(row);
    }

    fn solve(mut self, lp: &LinearProgram) -> LpOutcome {
        // Phase 1: drive the artificials to zero.
        if self.basis.iter().any(|b| matches!(b, BasicVar::Artificial(_))) {
            let art_start = self.n_vars + self.n_slacks;
            let phase1_cost = move |j: usize| if j >= art_start { -1.0 } else { 0.0 };
            let mut z_row = self.reduced_costs(&phase1_cost);
            if !self.run(&mut z_row, &|_| true) {
                unreachable!("phase-1 objective is bounded above by zero");
            }
            if self.basic_value(&phase1_cost) < -1e-7 {
                return LpOutcome::Infeasible;
            }
            // Pivot remaining zero-valued artificials out, or drop their
            // rows as redundant.
            let mut i = 0;
            while i < self.rows() {
                if matches!(self.basis[i], BasicVar::Artificial(_)) {
                    let col = (0..self.n_vars + self.n_slacks)
                        .find(|&j| self.at(i, j).abs() > TOL);
                    match col {
                        Some(j) => {
                            let mut dummy = vec![0.0; self.cols];
                            self.pivot(i, j, &mut dummy);
                            self.basis[i] = self.var_of_col(j);
                            i += 1;
                        }
                        None => {
                            self.drop_row(i);
                        }
                    }
                } else {
                    i += 1;
                }
            }
        }

        // Phase 2 on the real objective; artificial columns stay out.
        let phase2_cost = |j: usize| if j < lp.objective.len() { lp.objective[j] } else { 0.0 };
        let mut z_row = self.reduced_costs(&phase2_cost);
        let n_real = self.n_vars + self.n_slacks;
        if !self.run(&mut z_row, &|j| j < n_real) {
            return LpOutcome::Unbounded;
        }

        let mut solution = vec![0.0; self.n_vars];
        for (i, &b) in self.basis.iter().enumerate() {
            if let BasicVar::Structural(j) = b {
                solution[j] = self.rhs(i);
            }
        }
        let value = (0..self.n_vars).map(|j| lp.objective[j] * solution[j]).sum();
        let certified = certify(lp, &self.basis, &self.origin).map(|(v, x)| {
            let value = rational_to_f64(&v);
            let sol = x.iter().map(rational_to_f64).collect();
            (value, sol)
        });
        LpOutcome::Optimal { value, solution, certified }
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    use num::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite coefficient")
}

/// Re-solves the final basis exactly. Slack-basic rows are peeled off
/// (their slack absorbs the residual), leaving a square rational system in
/// the basic structural variables. Returns the exact objective value and
/// full structural solution, or `None` if the basis cannot be certified
/// (singular system or a negativity/deleted-row check fails).
fn certify(
    lp: &LinearProgram,
    basis: &[BasicVar],
    kept_rows: &[usize],
) -> Option<(BigRational, Vec<BigRational>)> {
    let structural: Vec<usize> = basis
        .iter()
        .filter_map(|b| match b {
            BasicVar::Structural(j) => Some(*j),
            _ => None,
        })
        .collect();
    if basis.iter().any(|b| matches!(b, BasicVar::Artificial(_))) {
        return None;
    }
    let slack_rows: std::collections::HashSet<usize> = basis
        .iter()
        .filter_map(|b| match b {
            BasicVar::Slack(r) => Some(*r),
            _ => None,
        })
        .collect();
    // Tight rows: every kept row whose slack is nonbasic (equalities
    // included); rows dropped as redundant are verified at the end.
    let tight_rows: Vec<usize> = kept_rows
        .iter()
        .copied()
        .filter(|r| !slack_rows.contains(r))
        .collect();
    if tight_rows.len() != structural.len() {
        return None;
    }
    let k = structural.len();
    let col_of: std::collections::HashMap<usize, usize> = structural
        .iter()
        .enumerate()
        .map(|(idx, &j)| (j, idx))
        .collect();

    // Dense k x (k+1) rational system.
    let zero = BigRational::zero();
    let mut system: Vec<Vec<BigRational>> = Vec::with_capacity(k);
    for &r in &tight_rows {
        let mut row = vec![zero.clone(); k + 1];
        for &(var, coef) in &lp.rows[r].coeffs {
            if let Some(&idx) = col_of.get(&var) {
                row[idx] += rat(coef);
            }
        }
        row[k] = rat(lp.rows[r].rhs);
        system.push(row);
    }
    let values = gaussian_solve(&mut system)?;
    if values.iter().any(|v| v.is_negative()) {
        return None;
    }

    let mut solution = vec![zero.clone(); lp.n_vars];
    for (idx, &j) in structural.iter().enumerate() {
        solution[j] = values[idx].clone();
    }
    // Exact feasibility of every original row (tight rows hold by
    // construction; this also covers rows dropped as redundant).
    for row in &lp.rows {
        let mut lhs = zero.clone();
        for &(var, coef) in &row.coeffs {
            lhs += rat(coef) * &solution[var];
        }
        let rhs = rat(row.rhs);
        if (row.equality && lhs != rhs) || (!row.equality && lhs > rhs) {
            return None;
        }
    }
    let mut value = zero;
    for (j, x) in solution.iter().enumerate() {
        if lp.objective[j] != 0.0 && !x.is_zero() {
            value += rat(lp.objective[j]) * x;
        }
    }
    Some((value, solution))
}

/// Exact Gaussian elimination on a k x (k+1) augmented system.
fn gaussian_solve(system: &mut [Vec<BigRational>]) -> Option<Vec<BigRational>> {
    let k = system.len();
    for col in 0..k {
        let pivot_row = (col..k).find(|&r| !system[r][col].is_zero())?;
        system.swap(col, pivot_row);
        let pivot = system[col][col].clone();
        for j in col..=k {
            system[col][j] = &system[col][j] / &pivot;
        }
        for r in 0..k {
            if r != col && !system[r][col].is_zero() {
                let factor = system[r][col].clone();
                for j in col..=k {
                    let delta = &factor * &system[col][j];
                    system[r][j] -= delta;
                }
            }
        }
    }
    Some((0..k).map(|r| system[r][k].clone()).collect())
}
