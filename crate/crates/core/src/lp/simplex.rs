//! Revised primal simplex on an LU-factorized basis.
//!
//! Operates on the standardized form `min c'x  s.t.  Mx = rhs, x >= 0`
//! where columns are stored sparsely. Callers assemble the column pool
//! (structural, slack and artificial columns), pick a starting basis and
//! drive phases themselves. Columns can be appended between solves; an
//! optimal basis stays valid, which is what the cutting-plane loops rely
//! on for warm starts.
//!
//! Basis solves go through a dense LU factorization with partial
//! pivoting plus a product-form eta chain; the basis is refactorized
//! once the chain grows long and again at every optimality claim, so
//! the reported solution is always checked against a fresh
//! factorization.

use thiserror::Error;

/// Sparse column: row indices (strictly increasing) and values.
#[derive(Clone, Debug)]
pub struct Column {
    pub rows: Vec<u32>,
    pub vals: Vec<f64>,
}

impl Column {
    pub fn new(mut entries: Vec<(u32, f64)>) -> Self {
        entries.sort_unstable_by_key(|&(r, _)| r);
        debug_assert!(entries.windows(2).all(|w| w[0].0 != w[1].0), "duplicate row in column");
        Column {
            rows: entries.iter().map(|&(r, _)| r).collect(),
            vals: entries.iter().map(|&(_, v)| v).collect(),
        }
    }

    fn dot(&self, dense: &[f64]) -> f64 {
        self.rows
            .iter()
            .zip(&self.vals)
            .map(|(&r, &v)| dense[r as usize] * v)
            .sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Unbounded,
}

#[derive(Debug, Error)]
pub enum SimplexError {
    #[error("simplex iteration limit exceeded after {0} pivots")]
    IterationLimit(u64),
    #[error("numerically singular basis")]
    SingularBasis,
    #[error("basis lost primal feasibility (residual {0:.3e})")]
    FeasibilityLost(f64),
}

const RC_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const DEGENERATE_STEP: f64 = 1e-12;
/// Consecutive degenerate pivots before switching to Bland's rule.
const BLAND_TRIGGER: u32 = 400;
/// Eta-chain length that triggers refactorization.
const REFRESH_ETAS: usize = 192;

struct Eta {
    row: usize,
    w: Vec<f64>,
}

/// Dense LU factors of the basis, `P B = L U`, with the row swaps kept
/// as LAPACK-style ipiv.
struct LuFactors {
    m: usize,
    /// Row-major; strict lower triangle holds L (unit diagonal), the
    /// rest holds U.
    lu: Vec<f64>,
    ipiv: Vec<usize>,
}

impl LuFactors {
    fn factor(m: usize, dense_cols: impl Fn(usize, &mut [f64])) -> Result<Self, SimplexError> {
        let mut lu = vec![0.0; m * m];
        {
            let mut col = vec![0.0; m];
            for c in 0..m {
                col.iter_mut().for_each(|v| *v = 0.0);
                dense_cols(c, &mut col);
                for r in 0..m {
                    lu[r * m + c] = col[r];
                }
            }
        }
        let mut ipiv = vec![0usize; m];
        for k in 0..m {
            let mut piv = k;
            let mut best = lu[k * m + k].abs();
            for r in k + 1..m {
                let v = lu[r * m + k].abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best < 1e-11 {
                return Err(SimplexError::SingularBasis);
            }
            ipiv[k] = piv;
            if piv != k {
                for j in 0..m {
                    lu.swap(k * m + j, piv * m + j);
                }
            }
            let d = lu[k * m + k];
            let (head, tail) = lu.split_at_mut((k + 1) * m);
            let krow = &head[k * m..k * m + m];
            for (ri, rrow) in tail.chunks_exact_mut(m).enumerate() {
                let r = k + 1 + ri;
                let _ = r;
                let f = rrow[k] / d;
                if f == 0.0 {
                    continue;
                }
                rrow[k] = f;
                for j in k + 1..m {
                    rrow[j] -= f * krow[j];
                }
            }
        }
        Ok(LuFactors { m, lu, ipiv })
    }

    /// Solve `B x = b` in place.
    fn ftran(&self, x: &mut [f64]) {
        let m = self.m;
        for k in 0..m {
            let piv = self.ipiv[k];
            if piv != k {
                x.swap(k, piv);
            }
        }
        // L z = Pb (unit lower)
        for r in 1..m {
            let row = &self.lu[r * m..r * m + r];
            let mut acc = x[r];
            for (j, &l) in row.iter().enumerate() {
                acc -= l * x[j];
            }
            x[r] = acc;
        }
        // U x = z
        for r in (0..m).rev() {
            let row = &self.lu[r * m..(r + 1) * m];
            let mut acc = x[r];
            for j in r + 1..m {
                acc -= row[j] * x[j];
            }
            x[r] = acc / row[r];
        }
    }

    /// Solve `B' y = c` in place.
    fn btran(&self, y: &mut [f64]) {
        let m = self.m;
        // U' w = c (forward substitution on the transpose)
        for r in 0..m {
            let mut acc = y[r];
            for j in 0..r {
                acc -= self.lu[j * m + r] * y[j];
            }
            y[r] = acc / self.lu[r * m + r];
        }
        // L' z = w (backward, unit diagonal)
        for r in (0..m).rev() {
            let mut acc = y[r];
            for j in r + 1..m {
                acc -= self.lu[j * m + r] * y[j];
            }
            y[r] = acc;
        }
        for k in (0..m).rev() {
            let piv = self.ipiv[k];
            if piv != k {
                y.swap(k, piv);
            }
        }
    }
}

pub struct RevisedSimplex {
    m: usize,
    cols: Vec<Column>,
    cost: Vec<f64>,
    /// Columns excluded from pricing (retired artificials).
    blocked: Vec<bool>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    /// Column id -> basis row, or usize::MAX when nonbasic.
    basis_row: Vec<usize>,
    lu: Option<LuFactors>,
    etas: Vec<Eta>,
    xb: Vec<f64>,
    pivots: u64,
}

impl RevisedSimplex {
    /// New instance with `m` equality rows and the given right-hand side.
    pub fn new(rhs: Vec<f64>) -> Self {
        let m = rhs.len();
        RevisedSimplex {
            m,
            cols: Vec::new(),
            cost: Vec::new(),
            blocked: Vec::new(),
            rhs,
            basis: Vec::new(),
            basis_row: Vec::new(),
            lu: None,
            etas: Vec::new(),
            xb: Vec::new(),
            pivots: 0,
        }
    }

    pub fn num_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn pivots(&self) -> u64 {
        self.pivots
    }

    pub fn add_column(&mut self, col: Column, cost: f64) -> usize {
        debug_assert!(col.rows.iter().all(|&r| (r as usize) < self.m));
        self.cols.push(col);
        self.cost.push(cost);
        self.blocked.push(false);
        self.basis_row.push(usize::MAX);
        self.cols.len() - 1
    }

    pub fn set_cost(&mut self, col: usize, cost: f64) {
        self.cost[col] = cost;
    }

    pub fn block_column(&mut self, col: usize) {
        self.blocked[col] = true;
    }

    pub fn is_basic(&self, col: usize) -> bool {
        self.basis_row[col] != usize::MAX
    }

    /// Replace the right-hand side and recompute the basic values
    /// against the current basis. Used to install and later remove an
    /// anti-degeneracy perturbation.
    pub fn set_rhs(&mut self, rhs: Vec<f64>) -> Result<(), SimplexError> {
        assert_eq!(rhs.len(), self.m);
        self.rhs = rhs;
        if self.basis.len() == self.m && self.m > 0 {
            self.refactor()?;
        }
        Ok(())
    }

    /// Install a basis and factorize it.
    pub fn set_basis(&mut self, basis: Vec<usize>) -> Result<(), SimplexError> {
        assert_eq!(basis.len(), self.m);
        for r in self.basis_row.iter_mut() {
            *r = usize::MAX;
        }
        for (r, &c) in basis.iter().enumerate() {
            self.basis_row[c] = r;
        }
        self.basis = basis;
        self.refactor()
    }

    /// Identity (slack) basis convenience; equivalent to [`set_basis`]
    /// but asserts the columns really are unit vectors.
    pub fn set_identity_basis(&mut self, basis: Vec<usize>) {
        for (r, &c) in basis.iter().enumerate() {
            let col = &self.cols[c];
            assert!(col.rows.len() == 1 && col.rows[0] as usize == r && col.vals[0] == 1.0);
        }
        self.set_basis(basis).expect("identity basis cannot be singular");
    }

    fn refactor(&mut self) -> Result<(), SimplexError> {
        if self.m == 0 {
            self.lu = None;
            self.etas.clear();
            self.xb.clear();
            return Ok(());
        }
        let cols = &self.cols;
        let basis = &self.basis;
        let lu = LuFactors::factor(self.m, |c, out| {
            let col = &cols[basis[c]];
            for (&r, &v) in col.rows.iter().zip(&col.vals) {
                out[r as usize] = v;
            }
        })?;
        self.lu = Some(lu);
        self.etas.clear();
        // fresh basic values
        let mut xb = self.rhs.clone();
        self.lu.as_ref().unwrap().ftran(&mut xb);
        self.xb = xb;
        Ok(())
    }

    /// `w = B^-1 a_col` for any column in the pool.
    fn ftran_col(&self, col: usize) -> Vec<f64> {
        let mut w = vec![0.0; self.m];
        let c = &self.cols[col];
        for (&r, &v) in c.rows.iter().zip(&c.vals) {
            w[r as usize] = v;
        }
        self.lu.as_ref().expect("basis factorized").ftran(&mut w);
        for eta in &self.etas {
            let t = w[eta.row] / eta.w[eta.row];
            if t != 0.0 {
                for (wi, &ei) in w.iter_mut().zip(&eta.w) {
                    *wi -= t * ei;
                }
                w[eta.row] = t;
            } else {
                w[eta.row] = 0.0;
            }
        }
        w
    }

    /// Simplex multipliers `y = B^-T c_B` for the current basis.
    pub fn duals(&self) -> Vec<f64> {
        let mut y: Vec<f64> = self.basis.iter().map(|&c| self.cost[c]).collect();
        for eta in self.etas.iter().rev() {
            let mut acc = y[eta.row];
            for (i, (&w, &yi)) in eta.w.iter().zip(y.iter()).enumerate() {
                if i != eta.row {
                    acc -= w * yi;
                }
            }
            y[eta.row] = acc / eta.w[eta.row];
        }
        if let Some(lu) = &self.lu {
            lu.btran(&mut y);
        }
        y
    }

    pub fn objective(&self) -> f64 {
        self.basis
            .iter()
            .zip(&self.xb)
            .map(|(&c, &x)| self.cost[c] * x)
            .sum()
    }

    /// Value of a column in the current basic solution.
    pub fn value(&self, col: usize) -> f64 {
        match self.basis_row[col] {
            usize::MAX => 0.0,
            r => self.xb[r],
        }
    }

    /// Run primal simplex iterations from the current basis until optimal
    /// or unbounded. Optimality is only declared on a freshly
    /// refactorized basis.
    pub fn solve(&mut self, max_pivots: u64) -> Result<SolveStatus, SimplexError> {
        if self.m == 0 {
            return Ok(SolveStatus::Optimal);
        }
        if self.lu.is_none() {
            self.refactor()?;
        }
        let mut degenerate_streak = 0u32;
        let mut used = 0u64;
        loop {
            let y = self.duals();
            let bland = degenerate_streak >= BLAND_TRIGGER;
            let entering = self.price(&y, bland);
            let q = match entering {
                None => {
                    if self.etas.is_empty() {
                        self.check_feasibility()?;
                        return Ok(SolveStatus::Optimal);
                    }
                    // confirm against a fresh factorization
                    self.refactor()?;
                    continue;
                }
                Some(q) => q,
            };
            let w = self.ftran_col(q);
            let leave = self.ratio_test(&w, bland);
            let r = match leave {
                None => return Ok(SolveStatus::Unbounded),
                Some(r) => r,
            };
            let step = self.xb[r].max(0.0) / w[r];
            if step.abs() <= DEGENERATE_STEP {
                degenerate_streak += 1;
            } else {
                degenerate_streak = 0;
            }
            self.pivot(q, r, w);
            used += 1;
            self.pivots += 1;
            if used > max_pivots {
                return Err(SimplexError::IterationLimit(self.pivots));
            }
            if self.etas.len() >= REFRESH_ETAS {
                self.refactor()?;
            }
        }
    }

    fn check_feasibility(&self) -> Result<(), SimplexError> {
        let worst = self.xb.iter().fold(0.0f64, |acc, &v| acc.min(v));
        if worst < -1e-6 {
            return Err(SimplexError::FeasibilityLost(-worst));
        }
        Ok(())
    }

    /// Most-negative reduced cost (Dantzig), or least-index under Bland.
    fn price(&self, y: &[f64], bland: bool) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (j, col) in self.cols.iter().enumerate() {
            if self.blocked[j] || self.basis_row[j] != usize::MAX {
                continue;
            }
            let rc = self.cost[j] - col.dot(y);
            if rc < -RC_TOL {
                if bland {
                    return Some(j);
                }
                if best.map_or(true, |(_, b)| rc < b) {
                    best = Some((j, rc));
                }
            }
        }
        best.map(|(j, _)| j)
    }

    /// Choose the leaving row: min ratio xb/w over w > tol. Ties break
    /// toward the largest pivot element (or smallest basis id under Bland).
    fn ratio_test(&self, w: &[f64], bland: bool) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (r, &wr) in w.iter().enumerate() {
            if wr <= PIVOT_TOL {
                continue;
            }
            let ratio = self.xb[r].max(0.0) / wr;
            match best {
                None => best = Some((r, ratio)),
                Some((br, bratio)) => {
                    if ratio < bratio - 1e-12 {
                        best = Some((r, ratio));
                    } else if ratio < bratio + 1e-12 {
                        let better = if bland {
                            self.basis[r] < self.basis[br]
                        } else {
                            wr > w[br]
                        };
                        if better {
                            best = Some((r, ratio));
                        }
                    }
                }
            }
        }
        best.map(|(r, _)| r)
    }

    fn pivot(&mut self, q: usize, r: usize, w: Vec<f64>) {
        let theta = self.xb[r].max(0.0) / w[r];
        for (i, (xi, &wi)) in self.xb.iter_mut().zip(&w).enumerate() {
            if i != r {
                *xi -= theta * wi;
                if *xi < 0.0 && *xi > -1e-11 {
                    *xi = 0.0;
                }
            }
        }
        self.xb[r] = theta;
        let leaving = self.basis[r];
        self.basis_row[leaving] = usize::MAX;
        self.basis[r] = q;
        self.basis_row[q] = r;
        self.etas.push(Eta { row: r, w });
    }

    /// Pivot basic columns listed in `retire` out of the basis where a
    /// usable replacement exists, then block them from future pricing.
    /// Rows whose entire eligible pivot row vanishes keep their retired
    /// column basic at value zero; such rows stay at zero thereafter.
    pub fn retire_columns(&mut self, retire: &[usize]) {
        for &c in retire {
            let r = self.basis_row[c];
            if r != usize::MAX {
                // e_r' B^-1 via a unit btran gives the pivot row
                let mut row = vec![0.0; self.m];
                row[r] = 1.0;
                for eta in self.etas.iter().rev() {
                    let mut acc = row[eta.row];
                    for (i, (&w, &yi)) in eta.w.iter().zip(row.iter()).enumerate() {
                        if i != eta.row {
                            acc -= w * yi;
                        }
                    }
                    row[eta.row] = acc / eta.w[eta.row];
                }
                if let Some(lu) = &self.lu {
                    lu.btran(&mut row);
                }
                let mut replacement = None;
                for (j, col) in self.cols.iter().enumerate() {
                    if self.blocked[j] || self.basis_row[j] != usize::MAX || retire.contains(&j) {
                        continue;
                    }
                    if col.dot(&row).abs() > 1e-7 {
                        replacement = Some(j);
                        break;
                    }
                }
                if let Some(q) = replacement {
                    let w = self.ftran_col(q);
                    self.pivot(q, r, w);
                }
            }
        }
        for &c in retire {
            self.blocked[c] = true;
        }
    }
}
