//! Weighted undirected graphs, vertex orderings and path decompositions.
//!
//! Vertices are dense integer ids `0..n`. Parallel edges are merged at
//! construction by summing weights; self-loops are rejected. Cutwidth and
//! linear-arrangement costs honor edge weights, the vertex separation
//! number counts vertices and ignores weights.

use std::fmt;
use thiserror::Error;

/// A single undirected edge with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// Weighted undirected simple graph.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(usize, f64)>>,
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("vertex id {id} out of range for n={n}")]
    VertexOutOfRange { id: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge ({u},{v}) has non-positive weight {w}")]
    NonPositiveWeight { u: usize, v: usize, w: f64 },
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Graph {
        line: usize,
        #[source]
        source: GraphError,
    },
    #[error("missing header line \"n m\"")]
    MissingHeader,
    #[error("expected {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
}

impl Graph {
    /// Build a graph from an edge list. Duplicate pairs are merged by
    /// summing their weights.
    pub fn new(n: usize, raw: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self, GraphError> {
        let mut merged: std::collections::BTreeMap<(usize, usize), f64> = std::collections::BTreeMap::new();
        for (u, v, w) in raw {
            if u >= n {
                return Err(GraphError::VertexOutOfRange { id: u, n });
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange { id: v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(GraphError::NonPositiveWeight { u, v, w });
            }
            let key = (u.min(v), u.max(v));
            *merged.entry(key).or_insert(0.0) += w;
        }
        let edges: Vec<Edge> = merged.into_iter().map(|((u, v), w)| Edge { u, v, w }).collect();
        let mut adj = vec![Vec::new(); n];
        for e in &edges {
            adj[e.u].push((e.v, e.w));
            adj[e.v].push((e.u, e.w));
        }
        Ok(Graph { n, edges, adj })
    }

    /// Unweighted convenience constructor (all weights 1).
    pub fn unweighted(n: usize, raw: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        Self::new(n, raw.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbors of `u` with edge weights.
    pub fn neighbors(&self, u: usize) -> &[(usize, f64)] {
        &self.adj[u]
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    pub fn weighted_degree(&self, u: usize) -> f64 {
        self.adj[u].iter().map(|&(_, w)| w).sum()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].iter().any(|&(x, _)| x == v)
    }

    /// Total weight of edges with exactly one endpoint in `s`.
    pub fn cut_weight(&self, s: &[usize]) -> f64 {
        let mut mask = vec![false; self.n];
        for &v in s {
            mask[v] = true;
        }
        self.cut_weight_mask(&mask)
    }

    /// `cut_weight` with the set given as a membership mask.
    pub fn cut_weight_mask(&self, in_s: &[bool]) -> f64 {
        self.edges
            .iter()
            .filter(|e| in_s[e.u] != in_s[e.v])
            .map(|e| e.w)
            .sum()
    }

    /// Vertices of `s` with at least one neighbor outside `s`, sorted.
    pub fn boundary_vertices(&self, s: &[usize]) -> Vec<usize> {
        let mut mask = vec![false; self.n];
        for &v in s {
            mask[v] = true;
        }
        let mut out: Vec<usize> = s
            .iter()
            .copied()
            .filter(|&u| self.adj[u].iter().any(|&(v, _)| !mask[v]))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Induced subgraph on `verts`. Returns the subgraph (with fresh ids
    /// `0..verts.len()` in the order given) and the new-to-old id map.
    pub fn induced(&self, verts: &[usize]) -> (Graph, Vec<usize>) {
        let mut old_to_new = vec![usize::MAX; self.n];
        for (new, &old) in verts.iter().enumerate() {
            old_to_new[old] = new;
        }
        let edges = self.edges.iter().filter_map(|e| {
            let (nu, nv) = (old_to_new[e.u], old_to_new[e.v]);
            (nu != usize::MAX && nv != usize::MAX).then_some((nu, nv, e.w))
        });
        let g = Graph::new(verts.len(), edges).expect("induced subgraph of a valid graph is valid");
        (g, verts.to_vec())
    }

    /// Serialize in the edge-list format accepted by [`parse_graph`].
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for e in &self.edges {
            if e.w == 1.0 {
                out.push_str(&format!("{} {}\n", e.u, e.v));
            } else {
                out.push_str(&format!("{} {} {}\n", e.u, e.v, e.w));
            }
        }
        out
    }
}

/// Parse the edge-list format: first non-comment line `n m`, then `m`
/// lines `u v [w]` (weight defaults to 1), `#` starts a comment,
/// 0-based vertex ids. Duplicate pairs are merged by summing weights.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut raw: Vec<(usize, usize, f64)> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let content = match line.find('#') {
            Some(p) => &line[..p],
            None => line,
        };
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if header.is_none() {
            if fields.len() != 2 {
                return Err(ParseError::Malformed {
                    line: lineno,
                    msg: format!("expected header \"n m\", got {:?}", content.trim()),
                });
            }
            let n = fields[0].parse::<usize>().map_err(|e| ParseError::Malformed {
                line: lineno,
                msg: format!("bad vertex count: {e}"),
            })?;
            let m = fields[1].parse::<usize>().map_err(|e| ParseError::Malformed {
                line: lineno,
                msg: format!("bad edge count: {e}"),
            })?;
            header = Some((n, m));
            continue;
        }
        if fields.len() != 2 && fields.len() != 3 {
            return Err(ParseError::Malformed {
                line: lineno,
                msg: format!("expected \"u v [w]\", got {:?}", content.trim()),
            });
        }
        let u = fields[0].parse::<usize>().map_err(|e| ParseError::Malformed {
            line: lineno,
            msg: format!("bad vertex id: {e}"),
        })?;
        let v = fields[1].parse::<usize>().map_err(|e| ParseError::Malformed {
            line: lineno,
            msg: format!("bad vertex id: {e}"),
        })?;
        let w = match fields.get(2) {
            Some(t) => t.parse::<f64>().map_err(|e| ParseError::Malformed {
                line: lineno,
                msg: format!("bad weight: {e}"),
            })?,
            None => 1.0,
        };
        // Validate eagerly so the error carries the offending line number.
        let n = header.unwrap().0;
        let check = if u >= n {
            Some(GraphError::VertexOutOfRange { id: u, n })
        } else if v >= n {
            Some(GraphError::VertexOutOfRange { id: v, n })
        } else if u == v {
            Some(GraphError::SelfLoop(u))
        } else if !(w > 0.0) || !w.is_finite() {
            Some(GraphError::NonPositiveWeight { u, v, w })
        } else {
            None
        };
        if let Some(source) = check {
            return Err(ParseError::Graph { line: lineno, source });
        }
        raw.push((u, v, w));
    }
    let (n, m) = header.ok_or(ParseError::MissingHeader)?;
    if raw.len() != m {
        return Err(ParseError::EdgeCount { expected: m, found: raw.len() });
    }
    Graph::new(n, raw).map_err(|source| ParseError::Graph { line: 0, source })
}

/// A vertex ordering, stored as 0-based positions (`pos[v]` = position
/// of vertex `v`). Reports use 1-based positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ordering {
    pos: Vec<usize>,
}

#[derive(Debug, Error)]
#[error("position list is not a permutation of 0..{0}")]
pub struct NotAPermutation(pub usize);

impl Ordering {
    pub fn identity(n: usize) -> Self {
        Ordering { pos: (0..n).collect() }
    }

    /// From per-vertex positions.
    pub fn from_positions(pos: Vec<usize>) -> Result<Self, NotAPermutation> {
        let n = pos.len();
        let mut seen = vec![false; n];
        for &p in &pos {
            if p >= n || seen[p] {
                return Err(NotAPermutation(n));
            }
            seen[p] = true;
        }
        Ok(Ordering { pos })
    }

    /// From the left-to-right vertex sequence.
    pub fn from_sequence(seq: &[usize]) -> Result<Self, NotAPermutation> {
        let n = seq.len();
        let mut pos = vec![usize::MAX; n];
        for (p, &v) in seq.iter().enumerate() {
            if v >= n || pos[v] != usize::MAX {
                return Err(NotAPermutation(n));
            }
            pos[v] = p;
        }
        Ok(Ordering { pos })
    }

    pub fn n(&self) -> usize {
        self.pos.len()
    }

    pub fn position(&self, v: usize) -> usize {
        self.pos[v]
    }

    pub fn positions(&self) -> &[usize] {
        &self.pos
    }

    pub fn positions_1based(&self) -> Vec<usize> {
        self.pos.iter().map(|p| p + 1).collect()
    }

    /// Left-to-right vertex sequence (inverse permutation).
    pub fn sequence(&self) -> Vec<usize> {
        let mut seq = vec![0; self.pos.len()];
        for (v, &p) in self.pos.iter().enumerate() {
            seq[p] = v;
        }
        seq
    }
}

/// Maximum weight crossing any prefix cut; 0 when `n <= 1`.
pub fn cutwidth_cost(g: &Graph, pi: &Ordering) -> f64 {
    debug_assert_eq!(g.n(), pi.n());
    let mut best: f64 = 0.0;
    let mut cut = 0.0;
    let mut placed = vec![false; g.n()];
    let seq = pi.sequence();
    for (i, &v) in seq.iter().enumerate() {
        for &(u, w) in g.neighbors(v) {
            if placed[u] {
                cut -= w;
            } else {
                cut += w;
            }
        }
        placed[v] = true;
        if i + 1 < g.n() && cut > best {
            best = cut;
        }
    }
    best.max(0.0)
}

/// Linear-arrangement cost as total weighted edge stretch
/// `sum w(u,v) * |pos(u) - pos(v)|`.
pub fn mla_cost(g: &Graph, pi: &Ordering) -> f64 {
    g.edges()
        .iter()
        .map(|e| e.w * (pi.position(e.u) as f64 - pi.position(e.v) as f64).abs())
        .sum()
}

/// Linear-arrangement cost as the sum of all prefix-cut weights.
/// Equals [`mla_cost`]; both routes are kept and cross-checked in tests.
pub fn mla_cost_prefix_sum(g: &Graph, pi: &Ordering) -> f64 {
    let mut total = 0.0;
    let mut cut = 0.0;
    let mut placed = vec![false; g.n()];
    for &v in &pi.sequence() {
        for &(u, w) in g.neighbors(v) {
            if placed[u] {
                cut -= w;
            } else {
                cut += w;
            }
        }
        placed[v] = true;
        total += cut;
    }
    total
}

/// Vertex separation number of the ordering: the maximum, over prefix
/// cuts, of the count of prefix vertices with a neighbor in the suffix.
/// Weights are ignored.
pub fn vs_cost(g: &Graph, pi: &Ordering) -> usize {
    let n = g.n();
    if n <= 1 {
        return 0;
    }
    // Vertex u is active at cuts pos(u)..last_neighbor_pos(u)-1 (0-based cut
    // after position i covers prefix positions 0..=i).
    let mut diff = vec![0i64; n + 1];
    for u in 0..n {
        let last = g.neighbors(u).iter().map(|&(v, _)| pi.position(v)).max();
        if let Some(last) = last {
            if last > pi.position(u) {
                diff[pi.position(u)] += 1;
                diff[last] -= 1;
            }
        }
    }
    let mut best = 0i64;
    let mut cur = 0i64;
    for i in 0..n {
        cur += diff[i];
        best = best.max(cur);
    }
    best as usize
}

/// A path decomposition: a sequence of bags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathDecomposition {
    pub bags: Vec<Vec<usize>>,
}

impl PathDecomposition {
    /// `max |X_i| - 1`, or 0 for an empty decomposition.
    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(1).saturating_sub(1)
    }
}

/// First violated path-decomposition condition, with witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PdViolation {
    VertexNotCovered { v: usize },
    EdgeNotCovered { u: usize, v: usize },
    /// Vertex `v` is in bags `first` and `last` but missing from `mid`.
    NotContiguous { v: usize, first: usize, mid: usize, last: usize },
}

impl fmt::Display for PdViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PdViolation::VertexNotCovered { v } => write!(f, "vertex {v} not covered by any bag"),
            PdViolation::EdgeNotCovered { u, v } => write!(f, "edge ({u},{v}) not contained in any bag"),
            PdViolation::NotContiguous { v, first, mid, last } => write!(
                f,
                "vertex {v} appears in bags {first} and {last} but not in bag {mid}"
            ),
        }
    }
}

/// Check the three path-decomposition conditions: vertices covered,
/// edges covered, and `X_i ∩ X_k ⊆ X_j` for `i <= j <= k`.
pub fn validate_path_decomposition(g: &Graph, pd: &PathDecomposition) -> Result<(), PdViolation> {
    let n = g.n();
    let r = pd.bags.len();
    // first/last bag per vertex plus per-bag membership for the interval check
    let mut first = vec![usize::MAX; n];
    let mut last = vec![usize::MAX; n];
    let mut member = vec![vec![false; n]; r];
    for (i, bag) in pd.bags.iter().enumerate() {
        for &v in bag {
            member[i][v] = true;
            if first[v] == usize::MAX {
                first[v] = i;
            }
            last[v] = i;
        }
    }
    for v in 0..n {
        if first[v] == usize::MAX {
            return Err(PdViolation::VertexNotCovered { v });
        }
    }
    for e in g.edges() {
        if !(0..r).any(|i| member[i][e.u] && member[i][e.v]) {
            return Err(PdViolation::EdgeNotCovered { u: e.u, v: e.v });
        }
    }
    for v in 0..n {
        for mid in first[v]..=last[v] {
            if !member[mid][v] {
                return Err(PdViolation::NotContiguous { v, first: first[v], mid, last: last[v] });
            }
        }
    }
    Ok(())
}

/// Kinnersley-style bags from an ordering: bag `i` holds the vertex at
/// position `i` plus every earlier vertex with a neighbor at position
/// `>= i`. The width is at most `vs_cost(g, pi)`.
pub fn path_decomposition_from_ordering(g: &Graph, pi: &Ordering) -> PathDecomposition {
    let n = g.n();
    let seq = pi.sequence();
    let mut bags = Vec::with_capacity(n);
    // vertex u occupies bags pos(u)..=max(pos(u), last neighbor position)
    let mut reach = vec![0usize; n];
    for u in 0..n {
        let last = g.neighbors(u).iter().map(|&(v, _)| pi.position(v)).max().unwrap_or(0);
        reach[u] = last.max(pi.position(u));
    }
    for i in 0..n {
        let mut bag = vec![seq[i]];
        for (u, &r) in reach.iter().enumerate() {
            if pi.position(u) < i && r >= i {
                bag.push(u);
            }
        }
        bag.sort_unstable();
        bags.push(bag);
    }
    PathDecomposition { bags }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn path(n: usize) -> Graph {
        Graph::unweighted(n, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    fn complete(n: usize) -> Graph {
        Graph::unweighted(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    fn star(n: usize) -> Graph {
        Graph::unweighted(n, (1..n).map(|v| (0, v))).unwrap()
    }

    fn random_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|_| rng.gen::<f64>() < p)
            .collect::<Vec<_>>();
        Graph::unweighted(n, edges).unwrap()
    }

    #[test]
    fn parse_basic_formats() {
        let g = parse_graph("3 2\n0 1\n1 2\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 2);
        assert!(g.edges().iter().all(|e| e.w == 1.0));

        let g = parse_graph("2 1\n0 1 2.5\n").unwrap();
        assert_eq!(g.m(), 1);
        assert_eq!(g.edges()[0].w, 2.5);

        // duplicate pair merged by summing weights
        let g = parse_graph("2 2\n0 1 1\n0 1 2\n").unwrap();
        assert_eq!(g.m(), 1);
        assert_eq!(g.edges()[0].w, 3.0);
    }

    #[test]
    fn parse_comments_and_errors() {
        let g = parse_graph("# a comment\n3 1 # trailing\n\n0 2 1.5\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 1);

        let err = parse_graph("2 1\n0 5\n").unwrap_err();
        assert!(matches!(err, ParseError::Graph { line: 2, .. }), "{err}");
        let err = parse_graph("2 1\n0 0\n").unwrap_err();
        assert!(matches!(err, ParseError::Graph { line: 2, .. }));
        let err = parse_graph("2 1\n0 1 -3\n").unwrap_err();
        assert!(matches!(err, ParseError::Graph { line: 2, .. }));
        let err = parse_graph("2 1\nnope\n").unwrap_err();
        assert!(matches!(err, ParseError::Malformed { line: 2, .. }));
        assert!(matches!(parse_graph(""), Err(ParseError::MissingHeader)));
        assert!(matches!(parse_graph("2 2\n0 1\n"), Err(ParseError::EdgeCount { .. })));
    }

    #[test]
    fn edge_list_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..25 {
            let g = random_graph(8, 0.4, &mut rng);
            let text = g.to_edge_list();
            let h = parse_graph(&text).unwrap();
            assert_eq!(h.to_edge_list(), text);
        }
    }

    #[test]
    fn cut_weight_examples() {
        let g = path(3);
        assert_eq!(g.cut_weight(&[0]), 1.0);
        let k4 = complete(4);
        assert_eq!(k4.cut_weight(&[0, 1]), 4.0);
        assert_eq!(k4.cut_weight(&[0, 1, 2, 3]), 0.0);
        assert_eq!(k4.cut_weight(&[]), 0.0);
    }

    #[test]
    fn cut_weight_complement_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let g = random_graph(9, 0.5, &mut rng);
            let s: Vec<usize> = (0..9).filter(|_| rng.gen::<bool>()).collect();
            let comp: Vec<usize> = (0..9).filter(|v| !s.contains(v)).collect();
            assert!((g.cut_weight(&s) - g.cut_weight(&comp)).abs() < 1e-12);
        }
    }

    #[test]
    fn boundary_vertices_examples() {
        let s5 = star(5);
        assert_eq!(s5.boundary_vertices(&[0]), vec![0]);
        assert_eq!(s5.boundary_vertices(&[0, 1]), vec![0]);
        let k4 = complete(4);
        assert_eq!(k4.boundary_vertices(&[0, 1]), vec![0, 1]);
    }

    #[test]
    fn cutwidth_cost_examples() {
        let g = path(3);
        assert_eq!(cutwidth_cost(&g, &Ordering::identity(3)), 1.0);
        let k4 = complete(4);
        // middle cut is always 2x2 regardless of the order
        assert_eq!(cutwidth_cost(&k4, &Ordering::identity(4)), 4.0);
        assert_eq!(cutwidth_cost(&k4, &Ordering::from_sequence(&[2, 0, 3, 1]).unwrap()), 4.0);
        let empty = Graph::unweighted(4, []).unwrap();
        assert_eq!(cutwidth_cost(&empty, &Ordering::identity(4)), 0.0);
        let single = Graph::unweighted(1, []).unwrap();
        assert_eq!(cutwidth_cost(&single, &Ordering::identity(1)), 0.0);
    }

    #[test]
    fn mla_cost_examples() {
        let g = path(3);
        assert_eq!(mla_cost(&g, &Ordering::identity(3)), 2.0);
        let k2 = Graph::unweighted(2, [(0, 1)]).unwrap();
        assert_eq!(mla_cost(&k2, &Ordering::identity(2)), 1.0);
        // middle vertex of P3 placed last: stretches 1 + 2
        let pi = Ordering::from_sequence(&[0, 2, 1]).unwrap();
        assert_eq!(mla_cost(&g, &pi), 3.0);
    }

    #[test]
    fn mla_two_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let n = rng.gen_range(2..10);
            let g = random_graph(n, 0.5, &mut rng);
            let mut seq: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                let j = rng.gen_range(0..=i);
                seq.swap(i, j);
            }
            let pi = Ordering::from_sequence(&seq).unwrap();
            let a = mla_cost(&g, &pi);
            let b = mla_cost_prefix_sum(&g, &pi);
            assert!((a - b).abs() <= 1e-9, "stretch {a} vs prefix {b}");
            // per-ordering sandwich: CW <= L <= n*CW
            let cw = cutwidth_cost(&g, &pi);
            assert!(cw <= a + 1e-9);
            assert!(a <= n as f64 * cw + 1e-9);
        }
    }

    #[test]
    fn vs_cost_examples() {
        let s = star(6);
        // center first: every cut has only the center active
        let mut seq = vec![0];
        seq.extend(1..6);
        assert_eq!(vs_cost(&s, &Ordering::from_sequence(&seq).unwrap()), 1);
        let k4 = complete(4);
        assert_eq!(vs_cost(&k4, &Ordering::identity(4)), 3);
        let empty = Graph::unweighted(5, []).unwrap();
        assert_eq!(vs_cost(&empty, &Ordering::identity(5)), 0);
    }

    #[test]
    fn path_decomposition_from_ordering_examples() {
        let s = star(5);
        let pi = Ordering::from_sequence(&[0, 1, 2, 3, 4]).unwrap();
        let pd = path_decomposition_from_ordering(&s, &pi);
        assert_eq!(pd.width(), 1);
        assert!(validate_path_decomposition(&s, &pd).is_ok());

        let k2 = Graph::unweighted(2, [(0, 1)]).unwrap();
        let pd = path_decomposition_from_ordering(&k2, &Ordering::identity(2));
        assert_eq!(pd.width(), 1);
        assert!(validate_path_decomposition(&k2, &pd).is_ok());

        let p4 = path(4);
        let pd = path_decomposition_from_ordering(&p4, &Ordering::identity(4));
        assert_eq!(pd.width(), 1);
        for (i, bag) in pd.bags.iter().enumerate().skip(1) {
            assert_eq!(bag, &vec![i - 1, i]);
        }
    }

    #[test]
    fn path_decomposition_random_graphs_valid_and_within_vs() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let n = rng.gen_range(2..12);
            let g = random_graph(n, 0.4, &mut rng);
            let mut seq: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                let j = rng.gen_range(0..=i);
                seq.swap(i, j);
            }
            let pi = Ordering::from_sequence(&seq).unwrap();
            let pd = path_decomposition_from_ordering(&g, &pi);
            assert_eq!(validate_path_decomposition(&g, &pd), Ok(()));
            assert!(pd.width() <= vs_cost(&g, &pi));
        }
    }

    #[test]
    fn validate_detects_violations() {
        let p3 = path(3);
        let pd = PathDecomposition { bags: vec![vec![0, 1], vec![2]] };
        assert_eq!(
            validate_path_decomposition(&p3, &pd),
            Err(PdViolation::EdgeNotCovered { u: 1, v: 2 })
        );
        let empty2 = Graph::unweighted(2, []).unwrap();
        let pd = PathDecomposition { bags: vec![vec![0], vec![1], vec![0]] };
        assert_eq!(
            validate_path_decomposition(&empty2, &pd),
            Err(PdViolation::NotContiguous { v: 0, first: 0, mid: 1, last: 2 })
        );
        let pd = PathDecomposition { bags: vec![vec![0]] };
        assert_eq!(
            validate_path_decomposition(&empty2, &pd),
            Err(PdViolation::VertexNotCovered { v: 1 })
        );
    }

    #[test]
    fn ordering_checks() {
        assert!(Ordering::from_positions(vec![0, 0]).is_err());
        assert!(Ordering::from_positions(vec![0, 2]).is_err());
        assert!(Ordering::from_sequence(&[1, 1]).is_err());
        let pi = Ordering::from_sequence(&[2, 0, 1]).unwrap();
        assert_eq!(pi.positions(), &[1, 2, 0]);
        assert_eq!(pi.sequence(), vec![2, 0, 1]);
        assert_eq!(pi.positions_1based(), vec![2, 3, 1]);
    }
}
