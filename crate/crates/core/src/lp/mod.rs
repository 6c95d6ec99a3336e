//! Linear-programming layer: a generic solver interface plus the two
//! spreading-metric relaxations solved by lazy constraint generation.
//!
//! The relaxation for linear arrangement minimizes the metric length of
//! the edges subject to triangle inequalities and spreading constraints
//! `sum_{v in S} d(u,v) >= (|S|^2 - 1)/4`. The vertex-separation variant
//! adds one interval-length variable per vertex with `x_u + x_v >= d(u,v)`
//! on edges. Both constraint families are exponential; they are enforced
//! through separation oracles, with prefix sets handling spreading exactly.

mod program;
mod simplex;
mod spreading;

pub use program::{lp_solve, ConstraintRow, LinearProgram, LpOutcome, Relation};
pub use simplex::{Column, RevisedSimplex, SimplexError, SolveStatus};
pub use spreading::{
    separate_spreading, separate_triangle, solve_mla_lp, solve_mla_lp_opts, solve_vs_lp,
    solve_vs_lp_opts, CutLoopOpts, SpreadingViolation, TriangleViolation, DEFAULT_EPS,
    TRIANGLE_CAP,
};

use thiserror::Error;

/// Feasibility and objective tolerance used across both relaxations.
pub const FEASIBILITY_EPS: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum LpError {
    #[error("constraint generation did not converge within {0} rounds")]
    RoundLimit(usize),
    #[error("lp numerical failure: {0}")]
    Numerical(#[from] SimplexError),
    #[error("relaxation pre-condition violated: {0}")]
    Precondition(String),
    #[error("solution failed validation: {0}")]
    Validation(String),
}

/// Symmetric pairwise distance table with zero diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct Metric {
    n: usize,
    d: Vec<f64>,
}

impl Metric {
    pub fn zero(n: usize) -> Self {
        Metric { n, d: vec![0.0; n * n] }
    }

    /// The metric of the identity ordering: `d(i,j) = |i - j|`. Feasible
    /// for the spreading constraints, so it doubles as a cheap reference
    /// point in tests and degenerate cases.
    pub fn line(n: usize) -> Self {
        let mut m = Metric::zero(n);
        for i in 0..n {
            for j in i + 1..n {
                m.set(i, j, (j - i) as f64);
            }
        }
        m
    }

    /// Build from a symmetric closure of `f` (called with `u < v`).
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Metric::zero(n);
        for u in 0..n {
            for v in u + 1..n {
                m.set(u, v, f(u, v));
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.d[u * self.n + v]
    }

    /// Set `d(u,v)` and `d(v,u)` together.
    pub fn set(&mut self, u: usize, v: usize, val: f64) {
        self.d[u * self.n + v] = val;
        self.d[v * self.n + u] = val;
    }

    /// Row of distances from `u`.
    pub fn row(&self, u: usize) -> &[f64] {
        &self.d[u * self.n..(u + 1) * self.n]
    }

    pub fn max_value(&self) -> f64 {
        self.d.iter().copied().fold(0.0, f64::max)
    }

    pub fn scaled(&self, s: f64) -> Metric {
        Metric { n: self.n, d: self.d.iter().map(|&v| v * s).collect() }
    }
}

/// Index of unordered pair `{u,v}` within the `n*(n-1)/2` pair variables.
#[inline]
pub(crate) fn pair_index(n: usize, u: usize, v: usize) -> usize {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    a * n - a * (a + 1) / 2 + (b - a - 1)
}

/// Solution of the linear-arrangement relaxation: the spreading metric
/// and its objective value (a lower bound on the optimal arrangement cost).
#[derive(Clone, Debug)]
pub struct MetricSolution {
    pub metric: Metric,
    pub objective: f64,
    /// Constraint-generation rounds used.
    pub rounds: usize,
}

/// Solution of the vertex-separation relaxation: metric, per-vertex
/// interval lengths and the objective `P* = sum x_u` (so `P*/n` lower
/// bounds the vertex separation number).
#[derive(Clone, Debug)]
pub struct VsLpSolution {
    pub metric: Metric,
    pub x: Vec<f64>,
    pub objective: f64,
    pub rounds: usize,
}

/// Plain-text dump of a solved metric, one variable per line. Format is
/// for debugging only and not stability-guaranteed.
pub fn dump_metric(metric: &Metric, objective: f64) -> String {
    let mut out = format!("objective {objective}\n");
    for u in 0..metric.n() {
        for v in u + 1..metric.n() {
            out.push_str(&format!("d {u} {v} {}\n", metric.get(u, v)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_index_is_a_bijection() {
        for n in 2..9 {
            let mut seen = vec![false; n * (n - 1) / 2];
            for u in 0..n {
                for v in u + 1..n {
                    let idx = pair_index(n, u, v);
                    assert_eq!(idx, pair_index(n, v, u));
                    assert!(!seen[idx]);
                    seen[idx] = true;
                }
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn line_metric_values() {
        let m = Metric::line(5);
        assert_eq!(m.get(0, 4), 4.0);
        assert_eq!(m.get(2, 2), 0.0);
        assert_eq!(m.get(3, 1), 2.0);
        assert_eq!(m.max_value(), 4.0);
    }
}
