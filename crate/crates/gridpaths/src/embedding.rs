//! Orthogonal grid embeddings of planar graphs with maximum degree at most four.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap, HashSet};

use thiserror::Error;

use crate::graph_core::{edge_key, k_subdivide, max_degree, subdivision_label, Edge, LabeledGraph};
use crate::grid_geom::{path_intersection, Dir, GridPath, GridPoint, Intersection};
use crate::representation::Representation;
use crate::solvers::{Meter, SearchBudget};

pub const MAX_EDGE_BENDS: usize = 4;

/// Vertex positions and one rectilinear path per edge, oriented from the smaller label.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OrthogonalEmbedding {
    pub vertex_points: BTreeMap<String, GridPoint>,
    pub edge_paths: BTreeMap<Edge, GridPath>,
}

impl OrthogonalEmbedding {
    pub fn scaled(&self, k: i64) -> OrthogonalEmbedding {
        OrthogonalEmbedding {
            vertex_points: self.vertex_points.iter().map(|(l, p)| (l.clone(), p.scale(k))).collect(),
            edge_paths: self.edge_paths.iter().map(|(e, p)| (e.clone(), p.scaled(k))).collect(),
        }
    }

    /// The path of edge uv oriented from u to v.
    pub fn route(&self, u: &str, v: &str) -> Option<GridPath> {
        let p = self.edge_paths.get(&edge_key(u, v))?;
        Some(if u <= v { p.clone() } else { p.reversed() })
    }

    pub fn bend_counts(&self) -> BTreeMap<Edge, u32> {
        self.edge_paths.iter().map(|(e, p)| (e.clone(), p.bends() as u32)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EmbeddingViolation {
    MissingVertex(String),
    UnknownVertex(String),
    SharedPoint(String, String),
    MissingEdge(String, String),
    UnknownEdge(String, String),
    EndpointMismatch(String, String),
    TooManyBends(String, String, usize),
    PathsMeet(Edge, Edge),
    PassesThroughVertex(Edge, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EmbeddingReport {
    pub violations: Vec<EmbeddingViolation>,
}

impl EmbeddingReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_embedding(g: &LabeledGraph, emb: &OrthogonalEmbedding) -> EmbeddingReport {
    use EmbeddingViolation as V;
    let mut out = Vec::new();
    for v in g.vertices() {
        if !emb.vertex_points.contains_key(v) {
            out.push(V::MissingVertex(v.to_string()));
        }
    }
    let mut by_point: BTreeMap<GridPoint, &str> = BTreeMap::new();
    for (l, &p) in &emb.vertex_points {
        if !g.has_vertex(l) {
            out.push(V::UnknownVertex(l.clone()));
        }
        if let Some(other) = by_point.insert(p, l) {
            out.push(V::SharedPoint(other.to_string(), l.clone()));
        }
    }
    for (u, v) in g.edges() {
        if !emb.edge_paths.contains_key(&(u.clone(), v.clone())) {
            out.push(V::MissingEdge(u, v));
        }
    }
    for ((u, v), p) in &emb.edge_paths {
        if !g.has_edge(u, v) {
            out.push(V::UnknownEdge(u.clone(), v.clone()));
        }
        let ends = (emb.vertex_points.get(u), emb.vertex_points.get(v));
        if ends != (Some(&p.start()), Some(&p.end())) {
            out.push(V::EndpointMismatch(u.clone(), v.clone()));
        }
        if p.bends() > MAX_EDGE_BENDS {
            out.push(V::TooManyBends(u.clone(), v.clone(), p.bends()));
        }
        for (&q, w) in &by_point {
            if *w != u && *w != v && p.contains(q) {
                out.push(V::PassesThroughVertex((u.clone(), v.clone()), w.to_string()));
            }
        }
    }
    let edges: Vec<(&Edge, &GridPath)> = emb.edge_paths.iter().collect();
    for (i, (e, p)) in edges.iter().enumerate() {
        for (f, q) in &edges[i + 1..] {
            let shared: BTreeSet<GridPoint> =
                [p.start(), p.end()].into_iter().filter(|&x| x == q.start() || x == q.end()).collect();
            let ok = match path_intersection(p, q) {
                Intersection::Overlap => false,
                Intersection::Finite(pts) => pts.iter().all(|x| shared.contains(x)),
            };
            if !ok {
                out.push(V::PathsMeet((*e).clone(), (*f).clone()));
            }
        }
    }
    EmbeddingReport { violations: out }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureKind {
    BudgetExhausted,
    /// Every placement tried by the embedder failed; this is relative to the box and the router.
    SpaceExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbedError {
    #[error("vertex {0} has degree {1} > 4")]
    DegreeTooHigh(String, usize),
    #[error("no embedding found: {0:?}")]
    Failure(FailureKind),
}

struct Embedder {
    labels: Vec<String>,
    adj: Vec<Vec<usize>>,
    order: Vec<usize>,
    side: i64,
    max_bends: usize,
    meter: Meter,
    pos: Vec<Option<GridPoint>>,
    occupied: HashSet<GridPoint>,
    ports: HashMap<usize, Vec<Dir>>,
    routes: BTreeMap<(usize, usize), GridPath>,
}

impl Embedder {
    fn inside(&self, q: GridPoint) -> bool {
        q.x >= 0 && q.y >= 0 && q.x < self.side && q.y < self.side
    }

    fn port_free(&self, v: usize, d: Dir) -> bool {
        !self.ports.get(&v).is_some_and(|ps| ps.contains(&d))
    }

    /// Fewest bends first, then shortest; returns the point sequence of all lattice steps.
    fn route(&self, from: usize, to: usize) -> Option<Vec<GridPoint>> {
        let (s, t) = (self.pos[from]?, self.pos[to]?);
        type State = (GridPoint, Dir, usize);
        let mut dist: HashMap<State, (usize, i64)> = HashMap::new();
        let mut prev: HashMap<State, State> = HashMap::new();
        let mut heap = BinaryHeap::new();
        for d in Dir::ALL {
            if !self.port_free(from, d) {
                continue;
            }
            let q = s.offset(d, 1);
            if !self.inside(q) || (q != t && self.occupied.contains(&q)) {
                continue;
            }
            let st = (q, d, 0);
            dist.insert(st, (0, 1));
            heap.push(Reverse(((0usize, 1i64), (q.x, q.y, d.index(), 0usize))));
        }
        let decode = |x: i64, y: i64, di: usize, b: usize| (GridPoint::new(x, y), Dir::ALL[di], b);
        while let Some(Reverse((cost, (x, y, di, b)))) = heap.pop() {
            let st = decode(x, y, di, b);
            if dist.get(&st) != Some(&cost) {
                continue;
            }
            let (q, d, _) = st;
            if q == t {
                if !self.port_free(to, d.opposite()) {
                    continue;
                }
                let mut seq = vec![q];
                let mut cur = st;
                while let Some(&p) = prev.get(&cur) {
                    seq.push(p.0);
                    cur = p;
                }
                seq.push(s);
                seq.reverse();
                return Some(seq);
            }
            for nd in Dir::ALL {
                if nd == d.opposite() {
                    continue;
                }
                let nb = b + usize::from(nd != d);
                if nb > self.max_bends {
                    continue;
                }
                let nq = q.offset(nd, 1);
                if !self.inside(nq) || (nq != t && self.occupied.contains(&nq)) {
                    continue;
                }
                let nst = (nq, nd, nb);
                let ncost = (nb, cost.1 + 1);
                if dist.get(&nst).is_none_or(|&c| ncost < c) {
                    dist.insert(nst, ncost);
                    prev.insert(nst, st);
                    heap.push(Reverse((ncost, (nq.x, nq.y, nd.index(), nb))));
                }
            }
        }
        None
    }

    fn commit(&mut self, u: usize, v: usize, steps: &[GridPoint]) {
        let first = Dir::between(steps[0], steps[1]).unwrap();
        let n = steps.len();
        let last = Dir::between(steps[n - 2], steps[n - 1]).unwrap();
        self.ports.entry(u).or_default().push(first);
        self.ports.entry(v).or_default().push(last.opposite());
        for &q in &steps[1..n - 1] {
            self.occupied.insert(q);
        }
        let corners: Vec<GridPoint> = (0..n)
            .filter(|&i| i == 0 || i == n - 1 || Dir::between(steps[i - 1], steps[i]) != Dir::between(steps[i], steps[i + 1]))
            .map(|i| steps[i])
            .collect();
        self.routes.insert((u, v), GridPath::new(corners).unwrap());
    }

    fn uncommit(&mut self, u: usize, v: usize) {
        let p = self.routes.remove(&(u, v)).unwrap();
        let pts = p.lattice_points();
        for q in &pts[1..pts.len() - 1] {
            self.occupied.remove(q);
        }
        let seq = p.seq();
        let first = Dir::between(seq[0], seq[1]).unwrap();
        let last = Dir::between(seq[seq.len() - 2], seq[seq.len() - 1]).unwrap();
        self.ports.get_mut(&u).unwrap().retain(|&d| d != first);
        self.ports.get_mut(&v).unwrap().retain(|&d| d != last.opposite());
    }

    fn free_ports(&self, v: usize) -> usize {
        let p = self.pos[v].unwrap();
        Dir::ALL
            .iter()
            .filter(|&&d| self.port_free(v, d) && self.inside(p.offset(d, 1)) && !self.occupied.contains(&p.offset(d, 1)))
            .count()
    }

    fn candidates(&self, v: usize) -> Vec<GridPoint> {
        let placed: Vec<GridPoint> = self.adj[v].iter().filter_map(|&w| self.pos[w]).collect();
        let mut pts: Vec<GridPoint> = (0..self.side)
            .flat_map(|x| (0..self.side).map(move |y| GridPoint::new(x, y)))
            .filter(|q| !self.occupied.contains(q))
            .collect();
        let c = self.side / 2;
        pts.sort_by_key(|&q| {
            let d: i64 = if placed.is_empty() {
                q.manhattan(GridPoint::new(c, c))
            } else {
                placed.iter().map(|&p| q.manhattan(p)).sum()
            };
            (d, q.y, q.x)
        });
        pts
    }

    fn place(&mut self, depth: usize) -> Result<bool, FailureKind> {
        self.meter.tick().map_err(|_| FailureKind::BudgetExhausted)?;
        if depth == self.order.len() {
            return Ok(true);
        }
        let v = self.order[depth];
        for q in self.candidates(v) {
            self.meter.tick().map_err(|_| FailureKind::BudgetExhausted)?;
            self.pos[v] = Some(q);
            self.occupied.insert(q);
            let mut routed = Vec::new();
            let mut ok = true;
            let placed_nb: Vec<usize> = self.adj[v].iter().copied().filter(|&w| w != v && self.pos[w].is_some()).collect();
            for w in placed_nb {
                let (a, b) = if self.labels[w] < self.labels[v] { (w, v) } else { (v, w) };
                match self.route(a, b) {
                    Some(steps) => {
                        self.commit(a, b, &steps);
                        routed.push((a, b));
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                ok = (0..depth + 1).all(|i| {
                    let u = self.order[i];
                    let pending = self.adj[u].iter().filter(|&&w| self.pos[w].is_none()).count();
                    self.free_ports(u) >= pending
                });
            }
            if ok && self.place(depth + 1)? {
                return Ok(true);
            }
            for (a, b) in routed.into_iter().rev() {
                self.uncommit(a, b);
            }
            self.occupied.remove(&q);
            self.pos[v] = None;
        }
        Ok(false)
    }
}

/// Deterministic backtracking embedder: BFS vertex order, candidate points nearest to
/// placed neighbours, fewest-bend routing with at most `max_bends` bends per edge.
pub fn embed_orthogonal_with(
    g: &LabeledGraph,
    grid_side: i64,
    max_bends: usize,
    budget: &SearchBudget,
) -> Result<OrthogonalEmbedding, EmbedError> {
    if let Some(v) = g.vertices().find(|v| g.degree(v) > 4) {
        return Err(EmbedError::DegreeTooHigh(v.to_string(), g.degree(v)));
    }
    debug_assert!(max_degree(g) <= 4);
    let (labels, adj) = g.indexed();
    let n = labels.len();
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    while order.len() < n {
        let root = (0..n).filter(|&v| !seen[v]).max_by_key(|&v| (adj[v].len(), Reverse(v))).unwrap();
        seen[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let mut e = Embedder {
        labels,
        adj,
        order,
        side: grid_side,
        max_bends: max_bends.min(MAX_EDGE_BENDS),
        meter: Meter::new(budget),
        pos: vec![None; n],
        occupied: HashSet::new(),
        ports: HashMap::new(),
        routes: BTreeMap::new(),
    };
    match e.place(0) {
        Err(kind) => Err(EmbedError::Failure(kind)),
        Ok(false) => Err(EmbedError::Failure(FailureKind::SpaceExhausted)),
        Ok(true) => {
            let vertex_points = (0..n).map(|i| (e.labels[i].clone(), e.pos[i].unwrap())).collect();
            let edge_paths = e
                .routes
                .iter()
                .map(|(&(a, b), p)| ((e.labels[a].clone(), e.labels[b].clone()), p.clone()))
                .collect();
            let emb = OrthogonalEmbedding { vertex_points, edge_paths };
            debug_assert!(validate_embedding(g, &emb).is_valid());
            Ok(emb)
        }
    }
}

pub fn embed_orthogonal(g: &LabeledGraph, grid_side: i64, budget: &SearchBudget) -> Result<OrthogonalEmbedding, EmbedError> {
    embed_orthogonal_with(g, grid_side, MAX_EDGE_BENDS, budget)
}

/// A 1-bend CPG representation of the 2-subdivision of `g`, read off an embedding whose
/// edges have at most three bends. Labels follow `k_subdivide`.
pub fn subdivision_rep(g: &LabeledGraph, emb: &OrthogonalEmbedding) -> Option<Representation> {
    if max_degree(g) > 3 || emb.edge_paths.values().any(|p| p.bends() > 3) || !validate_embedding(g, emb).is_valid() {
        return None;
    }
    let emb = emb.scaled(4);
    let port = |v: &str, w: &str| {
        let r = emb.route(v, w).unwrap();
        Dir::between(r.seq()[0], r.seq()[1]).unwrap()
    };
    let mut rep = Representation::cpg();
    // offset of each subdivision path from its vertex point: 0 when it ends on the vertex path's interior
    let mut offset: BTreeMap<(String, String), i64> = BTreeMap::new();
    for v in g.vertices() {
        let c = emb.vertex_points[v];
        let nbrs: Vec<&str> = g.neighbors(v).collect();
        let dirs: Vec<Dir> = nbrs.iter().map(|w| port(v, w)).collect();
        let axis = dirs.iter().find(|d| dirs.contains(&d.opposite())).copied();
        let seq = match (axis, dirs.as_slice()) {
            (Some(d), _) => vec![c.offset(d, 1), c.offset(d.opposite(), 1)],
            (None, []) => vec![c, c.offset(Dir::East, 1)],
            (None, [d]) => vec![c, c.offset(*d, 1)],
            (None, [d1, d2]) => vec![c.offset(*d1, 1), c, c.offset(*d2, 1)],
            _ => return None,
        };
        rep.insert(v, GridPath::new(seq).ok()?);
        for (w, d) in nbrs.iter().zip(&dirs) {
            let inner = axis.is_some_and(|a| *d != a && *d != a.opposite());
            offset.insert((v.to_string(), w.to_string()), if inner { 0 } else { 1 });
        }
    }
    for (u, v) in g.edges() {
        let r = emb.route(&u, &v).unwrap();
        let len = r.length();
        let (from, to) = (offset[&(u.clone(), v.clone())], len - offset[&(v.clone(), u.clone())]);
        let bend_pos: Vec<i64> = r.bend_points().iter().map(|&b| r.position(b).unwrap()).collect();
        let split = match bend_pos.as_slice() {
            [] => (from + to) / 2,
            [p] => *p,
            [p, q] => (p + q) / 2,
            [_, q, _] => *q,
            _ => return None,
        };
        rep.insert(subdivision_label(&u, &v, 1), r.sub_path(from, split));
        rep.insert(subdivision_label(&u, &v, 2), r.sub_path(split, to));
    }
    debug_assert_eq!(crate::representation::derive_graph(&rep).ok(), Some(k_subdivide(g, 2)));
    Some(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_core::{complete_graph, cycle_graph};
    use crate::representation::{derive_graph, validate};

    fn k23() -> LabeledGraph {
        LabeledGraph::from_edges("K23", &[], [("x", "1"), ("x", "2"), ("x", "3"), ("y", "1"), ("y", "2"), ("y", "3")])
    }

    fn layout(g: &LabeledGraph, pts: &[(&str, (i64, i64))], routes: &[(&str, &str, &[(i64, i64)])]) -> OrthogonalEmbedding {
        let mut emb = OrthogonalEmbedding::default();
        for (l, (x, y)) in pts {
            emb.vertex_points.insert(l.to_string(), GridPoint::new(*x, *y));
        }
        for (u, v, s) in routes {
            let p = crate::grid_geom::path_from_sequence(s).unwrap();
            emb.edge_paths.insert(edge_key(u, v), if u <= v { p } else { p.reversed() });
        }
        assert_eq!(g.edge_count(), emb.edge_paths.len());
        emb
    }

    const K4_POINTS: &[(&str, (i64, i64))] = &[("1", (0, 0)), ("2", (2, 0)), ("3", (1, 1)), ("4", (1, 3))];

    #[test]
    fn hand_drawn_k4() {
        let g = complete_graph(4);
        let mut routes: Vec<(&str, &str, &[(i64, i64)])> = vec![
            ("1", "2", &[(0, 0), (2, 0)]),
            ("1", "3", &[(0, 0), (0, 1), (1, 1)]),
            ("2", "3", &[(2, 0), (2, 1), (1, 1)]),
            ("3", "4", &[(1, 1), (1, 3)]),
            ("1", "4", &[(0, 0), (-1, 0), (-1, 3), (1, 3)]),
            ("2", "4", &[(2, 0), (3, 0), (3, 3), (1, 3)]),
        ];
        assert!(validate_embedding(&g, &layout(&g, K4_POINTS, &routes)).is_valid());

        routes[5] = ("2", "4", &[(2, 0), (2, -1), (-2, -1), (-2, 2), (1, 2), (1, 3)]);
        let report = validate_embedding(&g, &layout(&g, K4_POINTS, &routes));
        assert!(report.violations.contains(&EmbeddingViolation::PathsMeet(edge_key("1", "4"), edge_key("2", "4"))));

        routes[5] = ("2", "4", &[(2, 0), (3, 0), (3, -1), (4, -1), (4, 4), (1, 4), (1, 3)]);
        let report = validate_embedding(&g, &layout(&g, K4_POINTS, &routes));
        assert_eq!(report.violations, vec![EmbeddingViolation::TooManyBends("2".into(), "4".into(), 5)]);
    }

    #[test]
    fn embeds_small_planar_graphs() {
        for (g, side) in [(cycle_graph(4), 3), (k23(), 8), (complete_graph(4), 6)] {
            let emb = embed_orthogonal(&g, side, &SearchBudget::default()).unwrap();
            assert!(validate_embedding(&g, &emb).is_valid());
            assert!(validate_embedding(&g, &emb.scaled(2)).is_valid());
        }
    }

    #[test]
    fn k5_fails() {
        let g = complete_graph(5);
        assert_eq!(
            embed_orthogonal(&g, 3, &SearchBudget::default()),
            Err(EmbedError::Failure(FailureKind::SpaceExhausted))
        );
        let star = LabeledGraph::from_edges("star", &[], (1..=5).map(|i| ("c", ["1", "2", "3", "4", "5"][i - 1])));
        assert!(matches!(embed_orthogonal(&star, 9, &SearchBudget::default()), Err(EmbedError::DegreeTooHigh(..))));
    }

    #[test]
    fn subdivision_of_k4() {
        let g = complete_graph(4);
        let emb = embed_orthogonal_with(&g, 8, 3, &SearchBudget::default()).unwrap();
        let rep = subdivision_rep(&g, &emb).unwrap();
        assert!(validate(&rep).is_valid());
        assert!(rep.max_bends() <= 1);
        assert_eq!(derive_graph(&rep).unwrap(), k_subdivide(&g, 2));
    }
}
