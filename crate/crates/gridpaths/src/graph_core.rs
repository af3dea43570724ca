//! Labeled simple graphs and the transformations used by the constructions.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("loop at vertex {0}")]
    Loop(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("bend count {count} for edge {u}-{v} is outside 0..=4")]
    CountOutOfRange { u: String, v: String, count: u32 },
    #[error("no bend count given for edge {0}-{1}")]
    MissingCount(String, String),
}

/// Role tags carried next to a graph (terminals, anchors, secondary and sewing vertices).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct VertexTag {
    pub label: String,
    pub tags: BTreeSet<String>,
}

/// Finite simple undirected graph on string labels, stored in sorted order.
#[derive(Debug, Clone, Default)]
pub struct LabeledGraph {
    pub name: String,
    adj: BTreeMap<String, BTreeSet<String>>,
    tags: BTreeMap<String, BTreeSet<String>>,
}

/// Equality is labeled structural equality; names and tags are ignored.
impl PartialEq for LabeledGraph {
    fn eq(&self, other: &Self) -> bool {
        self.adj == other.adj
    }
}

impl Eq for LabeledGraph {}

pub type Edge = (String, String);

pub fn edge_key(u: &str, v: &str) -> Edge {
    if u <= v {
        (u.to_string(), v.to_string())
    } else {
        (v.to_string(), u.to_string())
    }
}

impl LabeledGraph {
    pub fn new(name: impl Into<String>) -> Self {
        LabeledGraph { name: name.into(), ..Default::default() }
    }

    pub fn from_edges<'a>(name: &str, vertices: &[&str], edges: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        let mut g = LabeledGraph::new(name);
        for v in vertices {
            g.add_vertex(*v);
        }
        for (u, v) in edges {
            g.add_edge(u, v).expect("valid edge");
        }
        g
    }

    pub fn add_vertex(&mut self, v: impl Into<String>) {
        self.adj.entry(v.into()).or_default();
    }

    /// Adds an edge, creating missing endpoints. Repeated edges are ignored.
    pub fn add_edge(&mut self, u: &str, v: &str) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::Loop(u.to_string()));
        }
        self.adj.entry(u.to_string()).or_default().insert(v.to_string());
        self.adj.entry(v.to_string()).or_default().insert(u.to_string());
        Ok(())
    }

    pub fn remove_vertex(&mut self, v: &str) {
        if let Some(ns) = self.adj.remove(v) {
            for n in ns {
                if let Some(s) = self.adj.get_mut(&n) {
                    s.remove(v);
                }
            }
        }
        self.tags.remove(v);
    }

    pub fn tag(&mut self, v: &str, tag: impl Into<String>) {
        self.tags.entry(v.to_string()).or_default().insert(tag.into());
    }

    pub fn tags_of(&self, v: &str) -> impl Iterator<Item = &str> {
        self.tags.get(v).into_iter().flat_map(|s| s.iter().map(String::as_str))
    }

    pub fn vertex_tags(&self) -> Vec<VertexTag> {
        self.tags
            .iter()
            .map(|(l, t)| VertexTag { label: l.clone(), tags: t.clone() })
            .collect()
    }

    pub fn has_vertex(&self, v: &str) -> bool {
        self.adj.contains_key(v)
    }

    pub fn has_edge(&self, u: &str, v: &str) -> bool {
        self.adj.get(u).is_some_and(|s| s.contains(v))
    }

    pub fn vertices(&self) -> impl Iterator<Item = &str> {
        self.adj.keys().map(String::as_str)
    }

    pub fn neighbors(&self, v: &str) -> impl Iterator<Item = &str> {
        self.adj.get(v).into_iter().flat_map(|s| s.iter().map(String::as_str))
    }

    pub fn degree(&self, v: &str) -> usize {
        self.adj.get(v).map_or(0, BTreeSet::len)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    /// Edges as (smaller, larger) label pairs in lexicographic order.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for (u, ns) in &self.adj {
            for v in ns.range::<String, _>((std::ops::Bound::Excluded(u.clone()), std::ops::Bound::Unbounded)) {
                out.push((u.clone(), v.clone()));
            }
        }
        out
    }

    /// Vertices indexed 0..n in label order together with the index adjacency lists.
    pub fn indexed(&self) -> (Vec<String>, Vec<Vec<usize>>) {
        let labels: Vec<String> = self.adj.keys().cloned().collect();
        let index: BTreeMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let adj = labels
            .iter()
            .map(|l| self.adj[l].iter().map(|n| index[n.as_str()]).collect())
            .collect();
        (labels, adj)
    }

    pub fn induced(&self, keep: &BTreeSet<String>) -> LabeledGraph {
        let mut g = LabeledGraph::new(self.name.clone());
        for v in keep {
            if self.has_vertex(v) {
                g.add_vertex(v.clone());
                for n in self.neighbors(v) {
                    if keep.contains(n) {
                        g.add_edge(v, n).unwrap();
                    }
                }
            }
        }
        g
    }

    pub fn relabeled(&self, f: impl Fn(&str) -> String) -> LabeledGraph {
        let mut g = LabeledGraph::new(self.name.clone());
        for v in self.vertices() {
            g.add_vertex(f(v));
        }
        for (u, v) in self.edges() {
            g.add_edge(&f(&u), &f(&v)).unwrap();
        }
        for (v, ts) in &self.tags {
            for t in ts {
                g.tag(&f(v), t.clone());
            }
        }
        g
    }

    /// Disjoint union; labels must not collide.
    pub fn absorb(&mut self, other: &LabeledGraph) {
        for v in other.vertices() {
            self.add_vertex(v);
        }
        for (u, v) in other.edges() {
            self.add_edge(&u, &v).unwrap();
        }
        for (v, ts) in &other.tags {
            for t in ts {
                self.tag(v, t.clone());
            }
        }
    }

    pub fn connected_components(&self) -> Vec<BTreeSet<String>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for v in self.vertices() {
            if seen.contains(v) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut stack = vec![v.to_string()];
            while let Some(x) = stack.pop() {
                if !comp.insert(x.clone()) {
                    continue;
                }
                for n in self.neighbors(&x) {
                    if !comp.contains(n) {
                        stack.push(n.to_string());
                    }
                }
            }
            seen.extend(comp.iter().cloned());
            out.push(comp);
        }
        out
    }
}

/// Replaces every edge uv (u < v) by the path u, uv#1, ..., uv#k, v.
pub fn k_subdivide(g: &LabeledGraph, k: usize) -> LabeledGraph {
    let mut out = LabeledGraph::new(format!("{}-sub{}", g.name, k));
    for v in g.vertices() {
        out.add_vertex(v);
    }
    for (u, v) in g.edges() {
        let mut prev = u.clone();
        for i in 1..=k {
            let w = subdivision_label(&u, &v, i);
            out.add_edge(&prev, &w).unwrap();
            prev = w;
        }
        out.add_edge(&prev, &v).unwrap();
    }
    out
}

pub fn subdivision_label(u: &str, v: &str, i: usize) -> String {
    let (a, b) = edge_key(u, v);
    format!("{a}-{b}#{i}")
}

pub fn line_graph_label(u: &str, v: &str) -> String {
    let (a, b) = edge_key(u, v);
    format!("{a}|{b}")
}

pub fn line_graph(g: &LabeledGraph) -> LabeledGraph {
    let mut out = LabeledGraph::new(format!("L({})", g.name));
    for (u, v) in g.edges() {
        out.add_vertex(line_graph_label(&u, &v));
    }
    for v in g.vertices() {
        let inc: Vec<String> = g.neighbors(v).map(|n| line_graph_label(v, n)).collect();
        for i in 0..inc.len() {
            for j in i + 1..inc.len() {
                out.add_edge(&inc[i], &inc[j]).unwrap();
            }
        }
    }
    out
}

/// Labels of one diamond chain for edge uv, listed from the u side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiamondChain {
    /// Connector vertices z_0 = u, z_1, ..., z_{k+1}; z_{k+1} is joined to v.
    pub joints: Vec<String>,
    /// The two side vertices of each diamond.
    pub sides: Vec<(String, String)>,
}

pub fn diamond_chain_labels(u: &str, v: &str, k: usize) -> DiamondChain {
    let (a, b) = edge_key(u, v);
    let mut joints = vec![a.clone()];
    let mut sides = Vec::new();
    for j in 1..=k + 1 {
        sides.push((format!("{a}-{b}#d{j}a"), format!("{a}-{b}#d{j}b")));
        joints.push(format!("{a}-{b}#z{j}"));
    }
    DiamondChain { joints, sides }
}

/// Substitutes each edge by a chain of bend+1 diamonds followed by a single edge.
pub fn diamond_chain_substitute(
    g: &LabeledGraph,
    bend_counts: &BTreeMap<Edge, u32>,
) -> Result<LabeledGraph, GraphError> {
    let mut out = LabeledGraph::new(format!("D({})", g.name));
    for v in g.vertices() {
        out.add_vertex(v);
    }
    for (u, v) in g.edges() {
        let k = *bend_counts
            .get(&(u.clone(), v.clone()))
            .ok_or_else(|| GraphError::MissingCount(u.clone(), v.clone()))?;
        if k > 4 {
            return Err(GraphError::CountOutOfRange { u, v, count: k });
        }
        let chain = diamond_chain_labels(&u, &v, k as usize);
        for (j, (s1, s2)) in chain.sides.iter().enumerate() {
            let (z0, z1) = (&chain.joints[j], &chain.joints[j + 1]);
            for (x, y) in [(z0, s1), (z0, s2), (s1, s2), (s1, z1), (s2, z1)] {
                out.add_edge(x, y).unwrap();
            }
        }
        out.add_edge(chain.joints.last().unwrap(), &v).unwrap();
    }
    Ok(out)
}

pub fn triangles(g: &LabeledGraph) -> Vec<[String; 3]> {
    let mut out = Vec::new();
    for (u, v) in g.edges() {
        for w in g.neighbors(&v) {
            if w > v.as_str() && g.has_edge(&u, w) {
                out.push([u.clone(), v.clone(), w.to_string()]);
            }
        }
    }
    out
}

pub fn is_triangle_free(g: &LabeledGraph) -> bool {
    triangles(g).is_empty()
}

pub fn is_k4_free(g: &LabeledGraph) -> bool {
    !triangles(g).iter().any(|[a, b, c]| {
        g.neighbors(c)
            .any(|d| d > c.as_str() && g.has_edge(a, d) && g.has_edge(b, d))
    })
}

pub fn max_degree(g: &LabeledGraph) -> usize {
    g.vertices().map(|v| g.degree(v)).max().unwrap_or(0)
}

/// Degrees in non-increasing order.
pub fn degree_sequence(g: &LabeledGraph) -> Vec<usize> {
    let mut d: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    d.sort_unstable_by(|a, b| b.cmp(a));
    d
}

pub fn complete_graph(n: usize) -> LabeledGraph {
    let mut g = LabeledGraph::new(format!("K{n}"));
    let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    for l in &labels {
        g.add_vertex(l.clone());
    }
    for i in 0..n {
        for j in i + 1..n {
            g.add_edge(&labels[i], &labels[j]).unwrap();
        }
    }
    g
}

pub fn cycle_graph(n: usize) -> LabeledGraph {
    let mut g = LabeledGraph::new(format!("C{n}"));
    for i in 0..n {
        g.add_edge(&(i + 1).to_string(), &((i + 1) % n + 1).to_string()).unwrap();
    }
    g
}
