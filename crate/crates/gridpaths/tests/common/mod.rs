//! Seeded instance generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::time::Duration;

use gridpaths::embedding::{embed_orthogonal_with, OrthogonalEmbedding};
use gridpaths::graph_core::{is_triangle_free, max_degree, LabeledGraph};
use gridpaths::grid_geom::{Dir, GridPath, GridPoint};
use gridpaths::representation::{derive_graph, validate, Representation};
use gridpaths::sat_reduction::{validate_exactly3bounded, Formula, Literal};
use gridpaths::solvers::SearchBudget;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn short_budget() -> SearchBudget {
    SearchBudget { node_limit: 2_000_000, wall_limit: Duration::from_secs(5) }
}

fn graph_of(name: &str, n: usize, edges: &[(usize, usize)]) -> LabeledGraph {
    let mut g = LabeledGraph::new(name);
    for v in 0..n {
        g.add_vertex(v.to_string());
    }
    for &(u, v) in edges {
        g.add_edge(&u.to_string(), &v.to_string()).unwrap();
    }
    g
}

/// Grows K4 by splitting two edges at a common vertex and joining the new vertices, which
/// keeps the graph cubic and planar.
pub fn random_cubic_planar(rng: &mut ChaCha8Rng, n: usize) -> LabeledGraph {
    assert!(n >= 4 && n.is_multiple_of(2));
    let mut edges: Vec<(usize, usize)> = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let mut count = 4;
    while count < n {
        let u = rng.gen_range(0..count);
        let mut incident: Vec<usize> = (0..edges.len()).filter(|&i| edges[i].0 == u || edges[i].1 == u).collect();
        incident.shuffle(rng);
        let (x, y) = (count, count + 1);
        for (&i, new) in incident[..2].iter().zip([x, y]) {
            let (a, b) = edges[i];
            let other = if a == u { b } else { a };
            edges[i] = (u, new);
            edges.push((new, other));
        }
        edges.push((x, y));
        count += 2;
    }
    graph_of(&format!("cubic{n}"), n, &edges)
}

/// First box side in which the embedder succeeds with at most `max_bends` bends per edge.
pub fn embed_small(g: &LabeledGraph, max_bends: usize) -> Option<OrthogonalEmbedding> {
    let n = g.vertex_count() as i64;
    (2..=n + 3).find_map(|side| embed_orthogonal_with(g, side, max_bends, &short_budget()).ok())
}

/// Random formula with a planar incidence graph in which every variable occurs three times
/// with both polarities. With `prism` false the clauses are the edges of a random cubic planar
/// graph on `n` vertices; otherwise they are one colour class of the prism over an `n`-cycle.
pub fn random_formula(rng: &mut ChaCha8Rng, n: usize, prism: bool) -> Formula {
    let (nvars, clauses): (usize, Vec<Vec<usize>>) = if prism {
        assert!(n >= 4 && n.is_multiple_of(2));
        // Prism vertices (i, side); colour classes by parity of i + side.
        let id = |i: usize, side: usize| (i % n) + side * n;
        let nb = |i: usize, side: usize| vec![id(i + 1, side), id(i + n - 1, side), id(i, 1 - side)];
        let class = |p: usize| (0..n).flat_map(move |i| (0..2).map(move |s| (i, s))).filter(move |&(i, s)| (i + s) % 2 == p);
        let var_of: BTreeMap<usize, usize> = class(0).enumerate().map(|(k, (i, s))| (id(i, s), k)).collect();
        (n, class(1).map(|(i, s)| nb(i, s).iter().map(|v| var_of[v]).collect()).collect())
    } else {
        let g = random_cubic_planar(rng, n);
        let idx = |v: &str| v.parse::<usize>().unwrap();
        (n, g.edges().iter().map(|(u, v)| vec![idx(u), idx(v)]).collect())
    };
    let mut polarity: Vec<Vec<bool>> = (0..nvars)
        .map(|_| {
            let pos = rng.gen_range(1..=2);
            let mut p: Vec<bool> = (0..3).map(|k| k < pos).collect();
            p.shuffle(rng);
            p
        })
        .collect();
    let vars: Vec<String> = (1..=nvars).map(|i| format!("x{i}")).collect();
    let clauses = clauses
        .into_iter()
        .map(|c| c.into_iter().map(|v| Literal { var: vars[v].clone(), positive: polarity[v].pop().unwrap() }).collect())
        .collect();
    let f = Formula { variables: vars, clauses };
    assert!(validate_exactly3bounded(&f).is_valid());
    f
}

/// Random graph with maximum degree `max_deg` on `n` vertices and about `m` edges.
pub fn random_bounded_graph(rng: &mut ChaCha8Rng, n: usize, m: usize, max_deg: usize, triangle_free: bool) -> LabeledGraph {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut deg = vec![0; n];
    for _ in 0..m * 20 {
        if edges.len() == m {
            break;
        }
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let (u, v) = (u.min(v), u.max(v));
        if u == v || edges.contains(&(u, v)) || deg[u] == max_deg || deg[v] == max_deg {
            continue;
        }
        if triangle_free {
            let adj = |a: usize, b: usize| edges.contains(&(a.min(b), a.max(b)));
            if (0..n).any(|w| adj(u, w) && adj(v, w)) {
                continue;
            }
        }
        edges.push((u, v));
        deg[u] += 1;
        deg[v] += 1;
    }
    graph_of(&format!("rand{n}_{m}"), n, &edges)
}

/// Drops straight segments into a box one at a time, keeping only those that leave a valid
/// representation of a triangle-free graph with maximum degree three that touches what is
/// already there.
pub fn random_straight_rep(rng: &mut ChaCha8Rng, paths: usize, side: i64) -> (LabeledGraph, Representation) {
    let mut rep = Representation::cpg();
    let mut label = 0;
    for _ in 0..paths * 200 {
        if rep.paths.len() == paths {
            break;
        }
        let a = GridPoint::new(rng.gen_range(0..side), rng.gen_range(0..side));
        let d = *[Dir::East, Dir::North].choose(rng).unwrap();
        let b = a.offset(d, rng.gen_range(1..=4));
        let mut next = rep.clone();
        next.insert(label.to_string(), GridPath::new(vec![a, b]).unwrap());
        if !validate(&next).is_valid() {
            continue;
        }
        let g = derive_graph(&next).unwrap();
        let touches = rep.paths.is_empty() || g.degree(&label.to_string()) > 0;
        if touches && is_triangle_free(&g) && max_degree(&g) <= 3 {
            rep = next;
            label += 1;
        }
    }
    (derive_graph(&rep).unwrap(), rep)
}
