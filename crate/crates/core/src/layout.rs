//! Partition-and-arrange drivers: cut the graph into ordered pieces at
//! every (size class, radius scale) round, lay the pieces out in
//! production order, and recurse into each piece with a freshly solved
//! relaxation. The edge variant yields the cutwidth/arrangement ordering;
//! the vertex variant additionally pulls cut vertices out as singleton
//! pieces placed ahead of their round.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::decompose::{
    beta_factor, build_nets, compute_scales, compute_scales_with_gamma, metric_decomposition,
    metric_vertex_decomposition, vertex_scales, DecomposeError, ScaleParams,
};
use crate::derive_seed;
use crate::graph::{
    mla_cost, path_decomposition_from_ordering, validate_path_decomposition, Graph, Ordering,
    PathDecomposition,
};
use crate::lp::{
    solve_mla_lp_opts, solve_vs_lp_opts, CutLoopOpts, LpError, Metric, MetricSolution,
    VsLpSolution,
};
use crate::oracle::{largest_spreading_scale, lpcw_lower_bound, FlowMetricSolution, OracleError};

#[derive(Debug, Error)]
pub enum LayoutError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

/// Knobs for the recursive solvers.
#[derive(Clone, Debug)]
pub struct SolveConfig {
    pub seed: u64,
    /// Override the scale ratio (must be >= 2).
    pub gamma_override: Option<f64>,
    pub max_lp_rounds: usize,
    pub retry_cap: u32,
    /// Re-derive the proven prefix bounds from the trace on every level.
    pub audit: bool,
    /// Experimental: solve the flow-metric LP once at the root and reuse
    /// rescaled induced metrics in the recursion instead of re-solving.
    pub reuse_metric: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            seed: 0,
            gamma_override: None,
            max_lp_rounds: 200,
            retry_cap: 64,
            audit: true,
            reuse_metric: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PieceKind {
    /// Ball-grown piece around a net terminal.
    Net { terminal: usize },
    /// Singleton holding one cut vertex from the vertex variant.
    CutVertex,
}

#[derive(Clone, Debug)]
pub struct ArrangedPiece {
    pub vertices: Vec<usize>,
    pub size_class: usize,
    pub radius_scale: usize,
    pub kind: PieceKind,
    /// Boundary weight in the residual graph when the piece was produced.
    pub cut_weight: f64,
}

/// One (size class, radius scale) cutting round.
#[derive(Clone, Debug)]
pub struct TraceRound {
    pub size_class: usize,
    pub radius_scale: usize,
    pub terminals: Vec<usize>,
    pub radii: Vec<f64>,
    pub piece_sizes: Vec<usize>,
    pub cut_weight: f64,
    pub cut_vertex_count: usize,
    pub retries: u32,
}

/// Pieces in arrangement order plus the per-round audit trace.
#[derive(Clone, Debug)]
pub struct OrderedPieces {
    pub n: usize,
    pub pieces: Vec<ArrangedPiece>,
    pub trace: Vec<TraceRound>,
}

/// Ordered partition for the edge objectives: iterate size classes
/// outer, radius scales inner, cut the residual graph around each net
/// with radius `2 Delta_i`, and keep the pieces in production order.
pub fn partition_and_arrange(
    g: &Graph,
    sol: &MetricSolution,
    params: &ScaleParams,
    retry_cap: u32,
    rng: &mut ChaCha8Rng,
) -> Result<OrderedPieces, LayoutError> {
    let n = g.n();
    check_partition_inputs(n, sol.metric.n(), params)?;
    let scales = vertex_scales(&sol.metric, params)?;
    let nets = build_nets(&scales, params);
    let mut active = vec![true; n];
    let mut remaining = n;
    let mut pieces = Vec::new();
    let mut trace = Vec::new();
    for j in params.class_range() {
        for i in params.class_range() {
            let terminals = nets.terminals(i, j);
            if terminals.is_empty() {
                continue;
            }
            let radius = 2.0 * params.delta(i);
            let res =
                metric_decomposition(g, &active, terminals, &sol.metric, radius, retry_cap, rng)?;
            let mut piece_sizes = Vec::new();
            for (t, piece) in res.pieces.iter().enumerate() {
                if piece.is_empty() {
                    continue;
                }
                check_piece_size(piece.len(), j, params, terminals[t])?;
                for &v in piece {
                    active[v] = false;
                }
                remaining -= piece.len();
                piece_sizes.push(piece.len());
                pieces.push(ArrangedPiece {
                    vertices: piece.clone(),
                    size_class: j,
                    radius_scale: i,
                    kind: PieceKind::Net { terminal: terminals[t] },
                    cut_weight: res.piece_cut_weights[t],
                });
            }
            trace.push(TraceRound {
                size_class: j,
                radius_scale: i,
                terminals: terminals.to_vec(),
                radii: res.radii,
                piece_sizes,
                cut_weight: res.cut_edge_weight,
                cut_vertex_count: 0,
                retries: res.retries,
            });
        }
    }
    if remaining != 0 {
        return Err(LayoutError::Invariant(format!(
            "{remaining} vertices left uncovered by the net pieces"
        )));
    }
    Ok(OrderedPieces { n, pieces, trace })
}

/// Vertex variant: every round first places the removed cut vertices as
/// singleton pieces (ascending id), then that round's net pieces.
pub fn partition_and_arrange_vertex(
    g: &Graph,
    sol: &VsLpSolution,
    params: &ScaleParams,
    retry_cap: u32,
    rng: &mut ChaCha8Rng,
) -> Result<OrderedPieces, LayoutError> {
    let n = g.n();
    check_partition_inputs(n, sol.metric.n(), params)?;
    let scales = vertex_scales(&sol.metric, params)?;
    let nets = build_nets(&scales, params);
    let mut active = vec![true; n];
    let mut remaining = n;
    let mut pieces = Vec::new();
    let mut trace = Vec::new();
    for j in params.class_range() {
        for i in params.class_range() {
            let terminals = nets.terminals(i, j);
            if terminals.is_empty() {
                continue;
            }
            let radius = 2.0 * params.delta(i);
            let res = metric_vertex_decomposition(
                g, &active, terminals, &sol.metric, &sol.x, radius, retry_cap, rng,
            )?;
            for &w in &res.cut_vertices {
                active[w] = false;
                remaining -= 1;
                pieces.push(ArrangedPiece {
                    vertices: vec![w],
                    size_class: j,
                    radius_scale: i,
                    kind: PieceKind::CutVertex,
                    cut_weight: 0.0,
                });
            }
            let mut piece_sizes = Vec::new();
            for (t, piece) in res.pieces.iter().enumerate() {
                if piece.is_empty() {
                    continue;
                }
                check_piece_size(piece.len(), j, params, terminals[t])?;
                for &v in piece {
                    active[v] = false;
                }
                remaining -= piece.len();
                piece_sizes.push(piece.len());
                pieces.push(ArrangedPiece {
                    vertices: piece.clone(),
                    size_class: j,
                    radius_scale: i,
                    kind: PieceKind::Net { terminal: terminals[t] },
                    cut_weight: 0.0,
                });
            }
            trace.push(TraceRound {
                size_class: j,
                radius_scale: i,
                terminals: terminals.to_vec(),
                radii: res.radii,
                piece_sizes,
                cut_weight: 0.0,
                cut_vertex_count: res.cut_vertices.len(),
                retries: res.retries,
            });
        }
    }
    if remaining != 0 {
        return Err(LayoutError::Invariant(format!(
            "{remaining} vertices left uncovered by cut vertices and net pieces"
        )));
    }
    Ok(OrderedPieces { n, pieces, trace })
}

fn check_partition_inputs(n: usize, metric_n: usize, params: &ScaleParams) -> Result<(), LayoutError> {
    if n < 3 {
        return Err(LayoutError::Invariant(format!("partitioning needs n >= 3, got {n}")));
    }
    if metric_n != n || params.n != n {
        return Err(LayoutError::Invariant(format!(
            "size mismatch: graph {n}, metric {metric_n}, params {}",
            params.n
        )));
    }
    Ok(())
}

fn check_piece_size(
    len: usize,
    class: usize,
    params: &ScaleParams,
    terminal: usize,
) -> Result<(), LayoutError> {
    let limit = params.size(class - 2);
    if len as f64 > limit + 1e-9 {
        return Err(LayoutError::Invariant(format!(
            "piece of terminal {terminal} has {len} vertices, above n_(j-2) = {limit}"
        )));
    }
    Ok(())
}

/// Outcome of re-deriving a proven prefix bound from the trace.
#[derive(Clone, Debug)]
pub struct AuditReport {
    pub ok: bool,
    pub checks: usize,
    /// Smallest `bound - lhs` over all checks (negative means failure).
    pub worst_margin: f64,
    pub first_failure: Option<String>,
}

const AUDIT_EPS: f64 = 1e-6;

/// Edge-variant prefix audit: cumulative production-time boundary weight
/// up to each net piece stays within
/// `beta * log2(n/|S_v|) * objective / n`.
pub fn audit_edge_bound(op: &OrderedPieces, params: &ScaleParams, objective: f64) -> AuditReport {
    let n = params.n as f64;
    let mut prefix = 0.0;
    let mut report = AuditReport { ok: true, checks: 0, worst_margin: f64::INFINITY, first_failure: None };
    for piece in &op.pieces {
        prefix += piece.cut_weight;
        if let PieceKind::Net { terminal } = piece.kind {
            let bound = params.beta * (n / piece.vertices.len() as f64).log2() * objective / n;
            report.observe(prefix, bound, || {
                format!("prefix cut {prefix} exceeds bound {bound} at terminal {terminal}")
            });
        }
    }
    report
}

/// Vertex-variant audit: for every net piece of size class `j`, the
/// total number of cut vertices removed at classes `2..=j` stays within
/// `beta * log2(n/|S_v|) * objective / n`.
pub fn audit_vertex_bound(op: &OrderedPieces, params: &ScaleParams, objective: f64) -> AuditReport {
    let n = params.n as f64;
    let top = params.ell + 1;
    let mut removed_by_class = vec![0usize; top + 1];
    for piece in &op.pieces {
        if piece.kind == PieceKind::CutVertex {
            removed_by_class[piece.size_class] += 1;
        }
    }
    let mut cumulative = vec![0usize; top + 2];
    for j in 2..=top {
        cumulative[j] = cumulative[j - 1] + removed_by_class[j];
    }
    let mut report = AuditReport { ok: true, checks: 0, worst_margin: f64::INFINITY, first_failure: None };
    for piece in &op.pieces {
        if let PieceKind::Net { terminal } = piece.kind {
            let lhs = cumulative[piece.size_class] as f64;
            let bound = params.beta * (n / piece.vertices.len() as f64).log2() * objective / n;
            report.observe(lhs, bound, || {
                format!("cut-vertex prefix {lhs} exceeds bound {bound} at terminal {terminal}")
            });
        }
    }
    report
}

impl AuditReport {
    fn observe(&mut self, lhs: f64, bound: f64, describe: impl FnOnce() -> String) {
        self.checks += 1;
        let margin = bound - lhs;
        if margin < self.worst_margin {
            self.worst_margin = margin;
        }
        if lhs > bound + AUDIT_EPS && self.ok {
            self.ok = false;
            self.first_failure = Some(describe());
        }
    }
}

/// Per-level trace entry of a recursive run.
#[derive(Clone, Debug)]
pub struct LevelTrace {
    pub depth: usize,
    pub n: usize,
    pub objective: f64,
    pub rounds: Vec<TraceRound>,
}

#[derive(Clone, Debug)]
pub struct RunStats {
    /// Relaxation objective of the root instance (L* or P*).
    pub root_objective: f64,
    pub gamma: f64,
    pub ell: usize,
    pub beta: f64,
    pub total_retries: u64,
    pub audit_checked: bool,
    pub audit_ok: bool,
    pub audit_failure: Option<String>,
    pub levels: Vec<LevelTrace>,
}

/// A computed ordering together with its run statistics.
#[derive(Clone, Debug)]
pub struct LayoutRun {
    pub ordering: Ordering,
    pub stats: RunStats,
}

fn root_stats(n: usize, cfg: &SolveConfig) -> Result<RunStats, LayoutError> {
    let (gamma, ell, beta) = if n >= 3 {
        let params = scales_for(n, cfg)?;
        (params.gamma, params.ell, params.beta)
    } else {
        (2.0, 1, beta_factor(n))
    };
    Ok(RunStats {
        root_objective: 0.0,
        gamma,
        ell,
        beta,
        total_retries: 0,
        audit_checked: false,
        audit_ok: true,
        audit_failure: None,
        levels: Vec::new(),
    })
}

fn scales_for(n: usize, cfg: &SolveConfig) -> Result<ScaleParams, LayoutError> {
    Ok(match cfg.gamma_override {
        Some(gamma) => compute_scales_with_gamma(n, gamma)?,
        None => compute_scales(n)?,
    })
}

fn lp_opts(cfg: &SolveConfig) -> CutLoopOpts {
    CutLoopOpts { max_rounds: cfg.max_lp_rounds, ..Default::default() }
}

/// The approximation guarantee factor `beta(n) * log2(n)` (extended
/// below the recursion threshold, where any ordering is optimal anyway).
pub fn guarantee_bound_factor(n: usize) -> f64 {
    beta_factor(n) * (n.max(2) as f64).log2()
}

/// Compute a vertex ordering approximating minimum cutwidth (and,
/// simultaneously, minimum linear arrangement).
pub fn cutwidth_order(g: &Graph, cfg: &SolveConfig) -> Result<LayoutRun, LayoutError> {
    let mut stats = root_stats(g.n(), cfg)?;
    let seq = if cfg.reuse_metric {
        let ids: Vec<usize> = (0..g.n()).collect();
        let flow = if g.n() >= 3 && g.m() > 0 { Some(lpcw_lower_bound(g)?) } else { None };
        cw_recurse(g, &ids, cfg.seed, 0, cfg, flow.as_ref(), &mut stats)?
    } else {
        let ids: Vec<usize> = (0..g.n()).collect();
        cw_recurse(g, &ids, cfg.seed, 0, cfg, None, &mut stats)?
    };
    let ordering = Ordering::from_sequence(&seq)
        .map_err(|e| LayoutError::Invariant(format!("recursion produced a non-permutation: {e}")))?;
    Ok(LayoutRun { ordering, stats })
}

fn cw_recurse(
    g: &Graph,
    ids: &[usize],
    seed: u64,
    depth: usize,
    cfg: &SolveConfig,
    flow: Option<&FlowMetricSolution>,
    stats: &mut RunStats,
) -> Result<Vec<usize>, LayoutError> {
    let n = g.n();
    if n <= 2 || g.m() == 0 {
        return Ok((0..n).collect());
    }
    let params = scales_for(n, cfg)?;
    let sol = match flow {
        Some(flow) => match reuse_metric_for(flow, ids, g) {
            Some(sol) => sol,
            None => solve_mla_lp_opts(g, &lp_opts(cfg))?,
        },
        None => solve_mla_lp_opts(g, &lp_opts(cfg))?,
    };
    if depth == 0 {
        stats.root_objective = sol.objective;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let op = partition_and_arrange(g, &sol, &params, cfg.retry_cap, &mut rng)?;
    stats.total_retries += op.trace.iter().map(|t| t.retries as u64).sum::<u64>();
    if cfg.audit && flow.is_none() {
        let report = audit_edge_bound(&op, &params, sol.objective);
        stats.record_audit(report);
    }
    stats.push_level(depth, n, sol.objective, &op, ids);
    let mut seq = Vec::with_capacity(n);
    for (idx, piece) in op.pieces.iter().enumerate() {
        if piece.vertices.len() == 1 {
            seq.push(piece.vertices[0]);
            continue;
        }
        if piece.vertices.len() >= n {
            return Err(LayoutError::Invariant("piece failed to shrink".into()));
        }
        let (sub, map) = g.induced(&piece.vertices);
        let child_ids: Vec<usize> = map.iter().map(|&v| ids[v]).collect();
        let child_seed = derive_seed(seed, idx as u64);
        let child = cw_recurse(&sub, &child_ids, child_seed, depth + 1, cfg, flow, stats)?;
        seq.extend(child.into_iter().map(|v| map[v]));
    }
    Ok(seq)
}

/// Restrict the flow-metric tables to the live original ids, rescale to
/// spreading feasibility, and package as a metric solution. `None` when
/// no usable scale exists (callers fall back to re-solving).
fn reuse_metric_for(
    flow: &FlowMetricSolution,
    ids: &[usize],
    g: &Graph,
) -> Option<MetricSolution> {
    let restricted = Metric::from_fn(ids.len(), |a, b| {
        ids.iter().map(|&x| flow.tables[x].get(ids[a], ids[b])).sum()
    });
    let scale = largest_spreading_scale(&restricted);
    if scale <= 0.0 {
        log::warn!("induced metric admits no spreading scale; re-solving this level");
        return None;
    }
    let metric = restricted.scaled(1.0 / scale);
    let objective = g.edges().iter().map(|e| e.w * metric.get(e.u, e.v)).sum();
    Some(MetricSolution { metric, objective, rounds: 0 })
}

impl RunStats {
    fn record_audit(&mut self, report: AuditReport) {
        self.audit_checked = true;
        if !report.ok {
            self.audit_ok = false;
            if self.audit_failure.is_none() {
                self.audit_failure = report.first_failure;
            }
        }
    }

    fn push_level(&mut self, depth: usize, n: usize, objective: f64, op: &OrderedPieces, ids: &[usize]) {
        let rounds = op
            .trace
            .iter()
            .map(|r| TraceRound {
                terminals: r.terminals.iter().map(|&t| ids[t]).collect(),
                ..r.clone()
            })
            .collect();
        self.levels.push(LevelTrace { depth, n, objective, rounds });
    }
}

/// Verify the simultaneous arrangement guarantee
/// `mla_cost <= beta(n) * log2(n) * lstar` and report the measured ratio
/// against the bound.
#[derive(Clone, Debug)]
pub struct GuaranteeCheck {
    pub ok: bool,
    /// `cost / bound`; zero when both vanish.
    pub ratio: f64,
    pub bound: f64,
}

pub fn mla_guarantee_check(g: &Graph, pi: &Ordering, lstar: f64) -> GuaranteeCheck {
    let cost = mla_cost(g, pi);
    let bound = guarantee_bound_factor(g.n()) * lstar;
    let ok = cost <= bound + 1e-9 * (1.0 + bound);
    let ratio = if bound > 0.0 {
        cost / bound
    } else if cost == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    GuaranteeCheck { ok, ratio, bound }
}

/// Compute a vertex ordering approximating the vertex separation number.
pub fn pathwidth_order(g: &Graph, cfg: &SolveConfig) -> Result<LayoutRun, LayoutError> {
    let mut stats = root_stats(g.n(), cfg)?;
    let ids: Vec<usize> = (0..g.n()).collect();
    let seq = pw_recurse(g, &ids, cfg.seed, 0, cfg, &mut stats)?;
    let ordering = Ordering::from_sequence(&seq)
        .map_err(|e| LayoutError::Invariant(format!("recursion produced a non-permutation: {e}")))?;
    Ok(LayoutRun { ordering, stats })
}

fn pw_recurse(
    g: &Graph,
    ids: &[usize],
    seed: u64,
    depth: usize,
    cfg: &SolveConfig,
    stats: &mut RunStats,
) -> Result<Vec<usize>, LayoutError> {
    let n = g.n();
    if n <= 2 || g.m() == 0 {
        return Ok((0..n).collect());
    }
    let sol = solve_vs_lp_opts(g, &lp_opts(cfg))?;
    if depth == 0 {
        stats.root_objective = sol.objective;
    }
    let params = scales_for(n, cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let op = partition_and_arrange_vertex(g, &sol, &params, cfg.retry_cap, &mut rng)?;
    stats.total_retries += op.trace.iter().map(|t| t.retries as u64).sum::<u64>();
    if cfg.audit {
        let report = audit_vertex_bound(&op, &params, sol.objective);
        stats.record_audit(report);
    }
    stats.push_level(depth, n, sol.objective, &op, ids);
    let mut seq = Vec::with_capacity(n);
    for (idx, piece) in op.pieces.iter().enumerate() {
        if piece.vertices.len() == 1 {
            seq.push(piece.vertices[0]);
            continue;
        }
        if piece.vertices.len() >= n {
            return Err(LayoutError::Invariant("piece failed to shrink".into()));
        }
        let (sub, map) = g.induced(&piece.vertices);
        let child_ids: Vec<usize> = map.iter().map(|&v| ids[v]).collect();
        let child_seed = derive_seed(seed, idx as u64);
        let child = pw_recurse(&sub, &child_ids, child_seed, depth + 1, cfg, stats)?;
        seq.extend(child.into_iter().map(|v| map[v]));
    }
    Ok(seq)
}

/// Run the pathwidth pipeline and emit the induced path decomposition
/// (validated before returning).
pub fn pathwidth_decomposition(
    g: &Graph,
    cfg: &SolveConfig,
) -> Result<(PathDecomposition, LayoutRun), LayoutError> {
    let run = pathwidth_order(g, cfg)?;
    let pd = path_decomposition_from_ordering(g, &run.ordering);
    if let Err(v) = validate_path_decomposition(g, &pd) {
        return Err(LayoutError::Invariant(format!("emitted decomposition invalid: {v}")));
    }
    Ok((pd, run))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cutwidth_cost, vs_cost};
    use crate::lp::{solve_mla_lp, solve_vs_lp};
    use crate::oracle::{exact_cutwidth, exact_vs, random_graph, GraphFamily};

    fn cfg(seed: u64) -> SolveConfig {
        SolveConfig { seed, ..Default::default() }
    }

    #[test]
    fn partition_covers_everything_with_small_pieces() {
        for seed in 0..10 {
            let n = 12;
            let g = random_graph(n, GraphFamily::Gnm { m: 20 }, seed).unwrap();
            let sol = solve_mla_lp(&g).unwrap();
            let params = compute_scales(n).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let op = partition_and_arrange(&g, &sol, &params, 64, &mut rng).unwrap();
            let mut seen = vec![false; n];
            for piece in &op.pieces {
                assert!(piece.vertices.len() * 2 <= n, "net piece above n/2");
                for &v in &piece.vertices {
                    assert!(!seen[v]);
                    seen[v] = true;
                }
            }
            assert!(seen.iter().all(|&s| s));
            // production order respects ascending (j, i)
            let keys: Vec<(usize, usize)> =
                op.pieces.iter().map(|p| (p.size_class, p.radius_scale)).collect();
            let mut sorted = keys.clone();
            sorted.sort();
            assert_eq!(keys, sorted);
        }
    }

    #[test]
    fn triangle_splits_into_singletons() {
        let g = random_graph(3, GraphFamily::Complete, 0).unwrap();
        let sol = solve_mla_lp(&g).unwrap();
        let params = compute_scales(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let op = partition_and_arrange(&g, &sol, &params, 64, &mut rng).unwrap();
        assert!(op.pieces.len() >= 2);
        assert!(op.pieces.iter().all(|p| p.vertices.len() == 1));
    }

    #[test]
    fn edge_audit_holds_on_seeded_graphs() {
        for seed in 0..15 {
            let n = 8 + (seed as usize % 9);
            let m = (n * (n - 1) / 2).min(2 * n);
            let g = random_graph(n, GraphFamily::Gnm { m }, 1000 + seed).unwrap();
            if g.m() == 0 {
                continue;
            }
            let sol = solve_mla_lp(&g).unwrap();
            let params = compute_scales(n).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let op = partition_and_arrange(&g, &sol, &params, 64, &mut rng).unwrap();
            let report = audit_edge_bound(&op, &params, sol.objective);
            assert!(report.ok, "seed {seed}: {:?}", report.first_failure);
            assert!(report.checks > 0);
        }
    }

    #[test]
    fn vertex_audit_holds_on_seeded_graphs() {
        for seed in 0..15 {
            let n = 8 + (seed as usize % 9);
            let m = (n * (n - 1) / 2).min(2 * n);
            let g = random_graph(n, GraphFamily::Gnm { m }, 2000 + seed).unwrap();
            if g.m() == 0 {
                continue;
            }
            let sol = solve_vs_lp(&g).unwrap();
            let params = compute_scales(n).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let op = partition_and_arrange_vertex(&g, &sol, &params, 64, &mut rng).unwrap();
            let mut seen = vec![false; n];
            for piece in &op.pieces {
                for &v in &piece.vertices {
                    assert!(!seen[v], "seed {seed}: overlap at {v}");
                    seen[v] = true;
                }
            }
            assert!(seen.iter().all(|&s| s), "seed {seed}: not a partition");
            let report = audit_vertex_bound(&op, &params, sol.objective);
            assert!(report.ok, "seed {seed}: {:?}", report.first_failure);
        }
    }

    #[test]
    fn cutwidth_order_base_cases() {
        let empty = Graph::unweighted(4, []).unwrap();
        let run = cutwidth_order(&empty, &cfg(1)).unwrap();
        assert_eq!(run.ordering, Ordering::identity(4));
        assert_eq!(cutwidth_cost(&empty, &run.ordering), 0.0);
        assert_eq!(run.stats.root_objective, 0.0);

        let k2 = Graph::unweighted(2, [(0, 1)]).unwrap();
        let run = cutwidth_order(&k2, &cfg(1)).unwrap();
        assert_eq!(run.ordering, Ordering::identity(2));
    }

    #[test]
    fn cutwidth_order_is_deterministic_and_audited() {
        let g = random_graph(14, GraphFamily::Gnm { m: 24 }, 5).unwrap();
        let a = cutwidth_order(&g, &cfg(7)).unwrap();
        let b = cutwidth_order(&g, &cfg(7)).unwrap();
        assert_eq!(a.ordering, b.ordering);
        assert!(a.stats.audit_checked);
        assert!(a.stats.audit_ok, "{:?}", a.stats.audit_failure);
        let c = cutwidth_order(&g, &cfg(8)).unwrap();
        // different seed may or may not change the order, but must be valid
        assert_eq!(c.ordering.sequence().len(), 14);
    }

    #[test]
    fn cutwidth_order_within_theorem_bound_small() {
        for seed in 0..8 {
            let n = 5 + (seed as usize % 3);
            let g = random_graph(n, GraphFamily::Gnp { p: 0.5 }, 300 + seed).unwrap();
            let run = cutwidth_order(&g, &cfg(seed)).unwrap();
            let alg = cutwidth_cost(&g, &run.ordering);
            let exact = exact_cutwidth(&g).unwrap().value;
            let bound = guarantee_bound_factor(n) * exact;
            assert!(alg <= bound + 1e-9, "seed {seed}: alg {alg} vs bound {bound}");
            // simultaneous arrangement guarantee in its provable form
            let check = mla_guarantee_check(&g, &run.ordering, run.stats.root_objective);
            assert!(check.ok, "seed {seed}: ratio {}", check.ratio);
        }
    }

    #[test]
    fn pathwidth_order_star_and_bounds() {
        let star = random_graph(8, GraphFamily::Star, 0).unwrap();
        let run = pathwidth_order(&star, &cfg(3)).unwrap();
        let vs = vs_cost(&star, &run.ordering);
        assert!(vs as f64 <= guarantee_bound_factor(8), "vs {vs}");
        for seed in 0..6 {
            let n = 5 + (seed as usize % 3);
            let g = random_graph(n, GraphFamily::Gnp { p: 0.5 }, 400 + seed).unwrap();
            let run = pathwidth_order(&g, &cfg(seed)).unwrap();
            let alg = vs_cost(&g, &run.ordering) as f64;
            let exact = exact_vs(&g).unwrap().value;
            assert!(
                alg <= guarantee_bound_factor(n) * exact.max(0.0) + 1e-9 || exact == 0.0,
                "seed {seed}: alg {alg} exact {exact}"
            );
            assert!(run.stats.audit_ok, "{:?}", run.stats.audit_failure);
        }
    }

    #[test]
    fn pathwidth_decomposition_is_valid_and_tight_to_vs() {
        for seed in 0..6 {
            let n = 6 + (seed as usize % 4);
            let g = random_graph(n, GraphFamily::Gnm { m: n + 3 }, 500 + seed).unwrap();
            let (pd, run) = pathwidth_decomposition(&g, &cfg(seed)).unwrap();
            assert!(validate_path_decomposition(&g, &pd).is_ok());
            assert!(pd.width() <= vs_cost(&g, &run.ordering));
        }
    }

    #[test]
    fn mla_guarantee_check_cases() {
        let k2 = Graph::unweighted(2, [(0, 1)]).unwrap();
        let check = mla_guarantee_check(&k2, &Ordering::identity(2), 0.75);
        assert!(check.ok);
        assert!(check.ratio < 1.0);

        let p3 = Graph::unweighted(3, [(0, 1), (1, 2)]).unwrap();
        let check = mla_guarantee_check(&p3, &Ordering::identity(3), 2.0);
        assert!(check.ok);

        let empty = Graph::unweighted(3, []).unwrap();
        let check = mla_guarantee_check(&empty, &Ordering::identity(3), 0.0);
        assert!(check.ok);
        assert_eq!(check.ratio, 0.0);
    }

    #[test]
    fn reuse_metric_flag_produces_valid_orderings() {
        let g = random_graph(8, GraphFamily::Gnm { m: 13 }, 21).unwrap();
        let mut config = cfg(2);
        config.reuse_metric = true;
        let run = cutwidth_order(&g, &config).unwrap();
        assert_eq!(run.ordering.sequence().len(), 8);
        let again = cutwidth_order(&g, &config).unwrap();
        assert_eq!(run.ordering, again.ordering);
    }

    #[test]
    fn gamma_override_is_honored() {
        let g = random_graph(10, GraphFamily::Gnm { m: 16 }, 9).unwrap();
        let mut config = cfg(4);
        config.gamma_override = Some(3.0);
        let run = cutwidth_order(&g, &config).unwrap();
        assert_eq!(run.stats.gamma, 3.0);
        assert_eq!(run.ordering.sequence().len(), 10);
        config.gamma_override = Some(1.0);
        assert!(cutwidth_order(&g, &config).is_err());
    }
}
