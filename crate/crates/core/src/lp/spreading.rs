//! The two spreading-metric relaxations, solved by lazy constraint
//! generation.
//!
//! Both programs have one distance variable per unordered vertex pair,
//! with the pairwise floor `d(u,v) >= 3/4` absorbed into a variable
//! shift. The exponential spreading family is separated exactly: for a
//! fixed center and set size, the left-hand side is minimized by the
//! nearest-prefix set, so checking sorted prefix sums per center covers
//! every subset. Triangle inequalities are separated by enumeration with
//! a per-round cap on added rows.
//!
//! Internally each working LP is solved through its dual, so generated
//! rows become columns: the basis size stays fixed at the variable count
//! and the previous optimal basis warm-starts every round.

use std::collections::HashSet;

use super::simplex::{Column, RevisedSimplex, SolveStatus};
use super::{pair_index, LpError, Metric, MetricSolution, VsLpSolution, FEASIBILITY_EPS};
use crate::graph::Graph;

/// Default separation / feasibility tolerance.
pub const DEFAULT_EPS: f64 = FEASIBILITY_EPS;
/// Most-violated triangle rows added per round.
pub const TRIANGLE_CAP: usize = 5000;
/// Pairwise distance floor from the two-element spreading sets.
const PAIR_FLOOR: f64 = 0.75;

#[derive(Clone, Copy, Debug)]
pub struct CutLoopOpts {
    pub eps: f64,
    pub max_rounds: usize,
    pub triangle_cap: usize,
}

impl Default for CutLoopOpts {
    fn default() -> Self {
        CutLoopOpts { eps: DEFAULT_EPS, max_rounds: 200, triangle_cap: TRIANGLE_CAP }
    }
}

/// A violated spreading constraint: `sum_{v in set} d(center, v)` falls
/// short of `(|set|^2 - 1)/4` by `shortfall`. The set includes the center.
#[derive(Clone, Debug)]
pub struct SpreadingViolation {
    pub center: usize,
    pub set: Vec<usize>,
    pub shortfall: f64,
}

/// A violated triangle inequality `d(u,w) > d(u,v) + d(v,w)`.
#[derive(Clone, Debug)]
pub struct TriangleViolation {
    pub u: usize,
    pub v: usize,
    pub w: usize,
    pub amount: f64,
}

/// Exact spreading separation. For each center, sorts the distances and
/// tests every prefix size; any subset constraint is dominated by one of
/// these prefix sets. Returns all violated (center, prefix set) pairs.
pub fn separate_spreading(d: &Metric, eps: f64) -> Vec<SpreadingViolation> {
    let n = d.n();
    let mut out = Vec::new();
    let mut order: Vec<usize> = Vec::with_capacity(n.saturating_sub(1));
    for u in 0..n {
        order.clear();
        order.extend((0..n).filter(|&v| v != u));
        order.sort_by(|&a, &b| {
            d.get(u, a)
                .partial_cmp(&d.get(u, b))
                .unwrap()
                .then(a.cmp(&b))
        });
        let mut prefix = 0.0;
        for (taken, &v) in order.iter().enumerate() {
            prefix += d.get(u, v);
            let k = taken + 2; // set size including the center
            let required = ((k * k - 1) as f64) / 4.0;
            if prefix < required - eps {
                let mut set = Vec::with_capacity(k);
                set.push(u);
                set.extend_from_slice(&order[..=taken]);
                out.push(SpreadingViolation { center: u, set, shortfall: required - prefix });
            }
        }
    }
    out
}

/// Exhaustive O(n^3) triangle separation, returning at most `cap` rows
/// ordered by decreasing violation.
pub fn separate_triangle(d: &Metric, eps: f64, cap: usize) -> Vec<TriangleViolation> {
    let n = d.n();
    let mut out = Vec::new();
    for u in 0..n {
        for w in u + 1..n {
            let duw = d.get(u, w);
            for v in 0..n {
                if v == u || v == w {
                    continue;
                }
                let amount = duw - d.get(u, v) - d.get(v, w);
                if amount > eps {
                    out.push(TriangleViolation { u, v, w, amount });
                }
            }
        }
    }
    out.sort_by(|a, b| {
        b.amount
            .partial_cmp(&a.amount)
            .unwrap()
            .then((a.u, a.v, a.w).cmp(&(b.u, b.v, b.w)))
    });
    out.truncate(cap);
    out
}

/// Working LP shared by both relaxations, held in dual (column) form.
/// Rows of the dual correspond to primal variables: the `P = n(n-1)/2`
/// shifted pair variables first, then any extra variables.
struct SpreadLp {
    n: usize,
    sim: RevisedSimplex,
    seen: HashSet<Vec<u32>>,
    budget: u64,
}

impl SpreadLp {
    /// `primal_costs` is the primal objective vector (pair variables
    /// first); it becomes the dual right-hand side, so it must be
    /// non-negative for the all-slack warm start.
    fn new(n: usize, primal_costs: Vec<f64>) -> Self {
        debug_assert!(primal_costs.iter().all(|&c| c >= 0.0));
        let rows = primal_costs.len();
        let mut sim = RevisedSimplex::new(primal_costs);
        let slack_basis: Vec<usize> = (0..rows)
            .map(|r| sim.add_column(Column::new(vec![(r as u32, 1.0)]), 0.0))
            .collect();
        sim.set_identity_basis(slack_basis);
        SpreadLp { n, sim, seen: HashSet::new(), budget: 400_000 }
    }

    /// Add the primal row `sum_{v in set, v != center} e(center,v) >= rhs`
    /// as a dual column. Returns false when already present.
    fn add_spreading(&mut self, center: usize, set: &[usize]) -> bool {
        let mut key: Vec<u32> = Vec::with_capacity(set.len() + 2);
        key.push(0);
        key.push(center as u32);
        let mut members: Vec<u32> = set.iter().filter(|&&v| v != center).map(|&v| v as u32).collect();
        members.sort_unstable();
        key.extend_from_slice(&members);
        if !self.seen.insert(key) {
            return false;
        }
        let k = set.len();
        let rhs = ((k - 1) * (k - 2)) as f64 / 4.0;
        let entries: Vec<(u32, f64)> = set
            .iter()
            .filter(|&&v| v != center)
            .map(|&v| (pair_index(self.n, center, v) as u32, 1.0))
            .collect();
        self.sim.add_column(Column::new(entries), -rhs);
        true
    }

    /// Add the primal row `e(u,v) + e(v,w) - e(u,w) >= -3/4`.
    fn add_triangle(&mut self, u: usize, v: usize, w: usize) -> bool {
        let (a, b) = (u.min(w), u.max(w));
        if !self.seen.insert(vec![1, a as u32, v as u32, b as u32]) {
            return false;
        }
        let entries = vec![
            (pair_index(self.n, u, v) as u32, 1.0),
            (pair_index(self.n, v, w) as u32, 1.0),
            (pair_index(self.n, u, w) as u32, -1.0),
        ];
        self.sim.add_column(Column::new(entries), PAIR_FLOOR);
        true
    }

    fn solve(&mut self) -> Result<(), LpError> {
        match self.sim.solve(self.budget)? {
            SolveStatus::Optimal => Ok(()),
            // The dual can only be unbounded if the primal working set is
            // infeasible, which spreading systems never are.
            SolveStatus::Unbounded => {
                Err(LpError::Validation("dual of a feasible relaxation reported unbounded".into()))
            }
        }
    }

    /// Recover the primal point from the dual multipliers: the value of
    /// primal variable j is the negated multiplier of dual row j, and the
    /// multipliers of an optimal basis are non-positive there.
    fn primal_values(&self) -> Vec<f64> {
        self.sim.duals().iter().map(|&y| (-y).max(0.0)).collect()
    }

    fn metric_from(&self, primal: &[f64]) -> Metric {
        let mut metric = Metric::zero(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                metric.set(u, v, PAIR_FLOOR + primal[pair_index(self.n, u, v)]);
            }
        }
        metric
    }
}

/// Solve the linear-arrangement relaxation for `g`.
pub fn solve_mla_lp(g: &Graph) -> Result<MetricSolution, LpError> {
    solve_mla_lp_opts(g, &CutLoopOpts::default())
}

pub fn solve_mla_lp_opts(g: &Graph, opts: &CutLoopOpts) -> Result<MetricSolution, LpError> {
    let n = g.n();
    if n <= 1 {
        return Ok(MetricSolution { metric: Metric::zero(n), objective: 0.0, rounds: 0 });
    }
    if g.m() == 0 {
        // Zero objective; the line metric keeps every invariant intact.
        return Ok(MetricSolution { metric: Metric::line(n), objective: 0.0, rounds: 0 });
    }
    let pairs = n * (n - 1) / 2;
    let mut costs = vec![0.0; pairs];
    for e in g.edges() {
        costs[pair_index(n, e.u, e.v)] = e.w;
    }
    let mut lp = SpreadLp::new(n, costs);
    for round in 1..=opts.max_rounds {
        lp.solve()?;
        let primal = lp.primal_values();
        let metric = lp.metric_from(&primal);
        let sv = separate_spreading(&metric, opts.eps);
        let tv = separate_triangle(&metric, opts.eps, opts.triangle_cap);
        if sv.is_empty() && tv.is_empty() {
            let objective: f64 = g.edges().iter().map(|e| e.w * metric.get(e.u, e.v)).sum();
            let from_duals = -lp.sim.objective() + PAIR_FLOOR * g.total_weight();
            if (objective - from_duals).abs() > 1e-4 * (1.0 + objective.abs()) {
                return Err(LpError::Validation(format!(
                    "objective mismatch: primal {objective} vs dual {from_duals}"
                )));
            }
            return Ok(MetricSolution { metric, objective, rounds: round });
        }
        let mut added = false;
        for v in &sv {
            added |= lp.add_spreading(v.center, &v.set);
        }
        for t in &tv {
            added |= lp.add_triangle(t.u, t.v, t.w);
        }
        if !added {
            return Err(LpError::Validation(
                "separation keeps reporting rows that are already present".into(),
            ));
        }
    }
    Err(LpError::RoundLimit(opts.max_rounds))
}

/// Solve the vertex-separation relaxation for `g`.
pub fn solve_vs_lp(g: &Graph) -> Result<VsLpSolution, LpError> {
    solve_vs_lp_opts(g, &CutLoopOpts::default())
}

pub fn solve_vs_lp_opts(g: &Graph, opts: &CutLoopOpts) -> Result<VsLpSolution, LpError> {
    let n = g.n();
    if n <= 1 {
        return Ok(VsLpSolution { metric: Metric::zero(n), x: vec![0.0; n], objective: 0.0, rounds: 0 });
    }
    if g.m() == 0 {
        return Ok(VsLpSolution { metric: Metric::line(n), x: vec![0.0; n], objective: 0.0, rounds: 0 });
    }
    let pairs = n * (n - 1) / 2;
    // Pair variables carry no cost; the x variables carry cost one.
    let mut costs = vec![0.0; pairs + n];
    for c in costs.iter_mut().skip(pairs) {
        *c = 1.0;
    }
    let mut lp = SpreadLp::new(n, costs);
    // Edge rows x_u + x_v - e(u,v) >= 3/4 are known up front.
    for e in g.edges() {
        let entries = vec![
            ((pairs + e.u) as u32, 1.0),
            ((pairs + e.v) as u32, 1.0),
            (pair_index(n, e.u, e.v) as u32, -1.0),
        ];
        lp.sim.add_column(Column::new(entries), -PAIR_FLOOR);
    }
    for round in 1..=opts.max_rounds {
        lp.solve()?;
        let primal = lp.primal_values();
        let metric = lp.metric_from(&primal);
        let sv = separate_spreading(&metric, opts.eps);
        let tv = separate_triangle(&metric, opts.eps, opts.triangle_cap);
        if sv.is_empty() && tv.is_empty() {
            let x: Vec<f64> = primal[pairs..].to_vec();
            for e in g.edges() {
                if x[e.u] + x[e.v] < metric.get(e.u, e.v) - opts.eps {
                    return Err(LpError::Validation(format!(
                        "edge ({},{}) violates x_u + x_v >= d",
                        e.u, e.v
                    )));
                }
            }
            let objective: f64 = x.iter().sum();
            let from_duals = -lp.sim.objective();
            if (objective - from_duals).abs() > 1e-4 * (1.0 + objective.abs()) {
                return Err(LpError::Validation(format!(
                    "objective mismatch: primal {objective} vs dual {from_duals}"
                )));
            }
            return Ok(VsLpSolution { metric, x, objective, rounds: round });
        }
        let mut added = false;
        for v in &sv {
            added |= lp.add_spreading(v.center, &v.set);
        }
        for t in &tv {
            added |= lp.add_triangle(t.u, t.v, t.w);
        }
        if !added {
            return Err(LpError::Validation(
                "separation keeps reporting rows that are already present".into(),
            ));
        }
    }
    Err(LpError::RoundLimit(opts.max_rounds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{lp_solve, LinearProgram, LpOutcome, Relation};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn path(n: usize) -> Graph {
        Graph::unweighted(n, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    /// Reference LP with every constraint of the arrangement relaxation
    /// enumerated outright: all (S, u) spreading rows (u need not lie in
    /// S) and all triangle rows. Only usable for tiny n.
    fn brute_force_mla_lp(g: &Graph) -> f64 {
        let n = g.n();
        let pairs = n * (n - 1) / 2;
        let mut obj = vec![0.0; pairs];
        for e in g.edges() {
            obj[pair_index(n, e.u, e.v)] = e.w;
        }
        let mut p = LinearProgram::new(pairs, obj);
        for far_a in 0..n {
            for far_b in far_a + 1..n {
                for mid in 0..n {
                    if mid == far_a || mid == far_b {
                        continue;
                    }
                    p.add_row(
                        vec![
                            (pair_index(n, far_a, mid), 1.0),
                            (pair_index(n, mid, far_b), 1.0),
                            (pair_index(n, far_a, far_b), -1.0),
                        ],
                        Relation::Ge,
                        0.0,
                    );
                }
            }
        }
        for mask in 1u32..(1 << n) {
            let set: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            if set.len() < 2 {
                continue;
            }
            let k = set.len() as f64;
            for u in 0..n {
                let coeffs: Vec<(usize, f64)> = set
                    .iter()
                    .filter(|&&v| v != u)
                    .map(|&v| (pair_index(n, u, v), 1.0))
                    .collect();
                p.add_row(coeffs, Relation::Ge, (k * k - 1.0) / 4.0);
            }
        }
        match lp_solve(&p).unwrap() {
            LpOutcome::Optimal { objective, .. } => objective,
            other => panic!("brute-force LP not optimal: {other:?}"),
        }
    }

    #[test]
    fn single_edge_metric() {
        let g = Graph::unweighted(2, [(0, 1)]).unwrap();
        let sol = solve_mla_lp(&g).unwrap();
        assert!((sol.objective - 0.75).abs() < 1e-8);
        assert!((sol.metric.get(0, 1) - 0.75).abs() < 1e-8);
    }

    #[test]
    fn p3_metric_matches_brute_force() {
        let g = path(3);
        let brute = brute_force_mla_lp(&g);
        assert!((brute - 2.0).abs() < 1e-7, "expected 2, got {brute}");
        let sol = solve_mla_lp(&g).unwrap();
        assert!((sol.objective - 2.0).abs() < 1e-6, "{}", sol.objective);
    }

    #[test]
    fn small_graphs_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..12 {
            let n = 4 + (trial % 2);
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|_| rng.gen::<f64>() < 0.6)
                .collect();
            if edges.is_empty() {
                continue;
            }
            let g = Graph::unweighted(n, edges).unwrap();
            let brute = brute_force_mla_lp(&g);
            let sol = solve_mla_lp(&g).unwrap();
            assert!(
                (sol.objective - brute).abs() < 1e-6 * (1.0 + brute),
                "n={n} lazy {} vs brute {brute}",
                sol.objective
            );
        }
    }

    #[test]
    fn edgeless_graph_short_circuits() {
        let g = Graph::unweighted(5, []).unwrap();
        let sol = solve_mla_lp(&g).unwrap();
        assert_eq!(sol.objective, 0.0);
        assert!(separate_spreading(&sol.metric, DEFAULT_EPS).is_empty());
        let vs = solve_vs_lp(&g).unwrap();
        assert_eq!(vs.objective, 0.0);
        assert!(vs.x.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn solved_metrics_pass_separation() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..8 {
            let n = rng.gen_range(4..9);
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|_| rng.gen::<f64>() < 0.5)
                .collect();
            let g = Graph::unweighted(n, edges).unwrap();
            let sol = solve_mla_lp(&g).unwrap();
            assert!(separate_spreading(&sol.metric, DEFAULT_EPS).is_empty());
            assert!(separate_triangle(&sol.metric, DEFAULT_EPS, 10).is_empty());
            for u in 0..n {
                for v in u + 1..n {
                    assert!(sol.metric.get(u, v) >= 0.75 - DEFAULT_EPS);
                }
            }
        }
    }

    #[test]
    fn doubling_weights_doubles_objective() {
        let g1 = Graph::new(4, [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 1.0), (0, 3, 1.5)]).unwrap();
        let g2 = Graph::new(4, [(0, 1, 2.0), (1, 2, 4.0), (2, 3, 2.0), (0, 3, 3.0)]).unwrap();
        let a = solve_mla_lp(&g1).unwrap().objective;
        let b = solve_mla_lp(&g2).unwrap().objective;
        assert!((b - 2.0 * a).abs() < 1e-6 * (1.0 + b), "{a} {b}");
    }

    #[test]
    fn spreading_separation_examples() {
        // all-zero distances violate every prefix at k = 2 and 3
        let d = Metric::zero(3);
        let v = separate_spreading(&d, 1e-9);
        let for_u0: Vec<_> = v.iter().filter(|s| s.center == 0).collect();
        assert_eq!(for_u0.len(), 2);
        assert_eq!(for_u0[0].set.len(), 2);
        assert_eq!(for_u0[1].set.len(), 3);

        // integral line metric is spreading-feasible
        let d = Metric::line(5);
        assert!(separate_spreading(&d, 1e-9).is_empty());
    }

    #[test]
    fn triangle_separation_examples() {
        let mut d = Metric::zero(3);
        d.set(0, 1, 1.0);
        d.set(1, 2, 1.0);
        d.set(0, 2, 3.0);
        let v = separate_triangle(&d, 1e-9, 100);
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].u, v[0].v, v[0].w), (0, 1, 2));
        assert!((v[0].amount - 1.0).abs() < 1e-12);

        // cut metric of a bipartition is a metric
        let cut = Metric::from_fn(6, |u, v| if (u < 3) != (v < 3) { 1.0 } else { 0.0 });
        assert!(separate_triangle(&cut, 1e-9, 100).is_empty());
        assert!(separate_triangle(&Metric::line(6), 1e-9, 100).is_empty());
    }

    /// For fixed center and set size, no sampled subset beats the sorted
    /// prefix — the dominance behind exact prefix separation.
    #[test]
    fn prefix_sets_dominate_random_subsets() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let g = Graph::unweighted(7, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (0, 6), (2, 5)])
            .unwrap();
        let sol = solve_mla_lp(&g).unwrap();
        let d = &sol.metric;
        let n = 7;
        for _ in 0..200 {
            let u = rng.gen_range(0..n);
            let k = rng.gen_range(2..=n);
            let mut others: Vec<usize> = (0..n).filter(|&v| v != u).collect();
            for i in (1..others.len()).rev() {
                let j = rng.gen_range(0..=i);
                others.swap(i, j);
            }
            let sampled: f64 = others[..k - 1].iter().map(|&v| d.get(u, v)).sum();
            let mut dists: Vec<f64> = (0..n).filter(|&v| v != u).map(|v| d.get(u, v)).collect();
            dists.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let prefix: f64 = dists[..k - 1].iter().sum();
            assert!(sampled >= prefix - 1e-9);
        }
    }

    #[test]
    fn vs_lp_single_edge() {
        let g = Graph::unweighted(2, [(0, 1)]).unwrap();
        let sol = solve_vs_lp(&g).unwrap();
        assert!((sol.objective - 0.75).abs() < 1e-8, "{}", sol.objective);
        assert!((sol.x[0] + sol.x[1] - 0.75).abs() < 1e-8);
        assert!((sol.metric.get(0, 1) - 0.75).abs() < 1e-8);
    }

    #[test]
    fn vs_lp_star_lemma7_direction() {
        // VS(star) = 1, so P*/n <= 1 must hold
        let g = Graph::unweighted(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let sol = solve_vs_lp(&g).unwrap();
        assert!(sol.objective / 4.0 <= 1.0 + 1e-9);
        assert!(separate_spreading(&sol.metric, DEFAULT_EPS).is_empty());
        assert!(separate_triangle(&sol.metric, DEFAULT_EPS, 10).is_empty());
        assert!(sol.x.iter().all(|&x| x >= 0.0));
    }
}
