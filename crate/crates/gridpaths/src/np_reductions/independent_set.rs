use std::collections::{BTreeMap, BTreeSet};

use super::{ReductionError, ReductionOutput};
use crate::graph_core::{is_triangle_free, LabeledGraph};
use crate::grid_geom::{path_intersection, GridPath, Intersection};
use crate::representation::{contact_points, derive_graph, normalize_b01, refine, validate, Representation};

/// The five pieces a path is cut into, in order along the path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Piece {
    First,
    Link(u8),
    Second,
}

impl Piece {
    pub const ORDER: [Piece; 5] = [Piece::First, Piece::Link(1), Piece::Link(2), Piece::Link(3), Piece::Second];

    pub fn label(self, u: &str) -> String {
        match self {
            Piece::First => format!("{u}:1"),
            Piece::Second => format!("{u}:2"),
            Piece::Link(j) => format!("{u}:s{j}"),
        }
    }
}

/// Splits a piece label back into its vertex and piece.
pub fn is_piece_label(label: &str) -> Option<(&str, Piece)> {
    let (u, tail) = label.rsplit_once(':')?;
    let piece = match tail {
        "1" => Piece::First,
        "2" => Piece::Second,
        "s1" => Piece::Link(1),
        "s2" => Piece::Link(2),
        "s3" => Piece::Link(3),
        _ => return None,
    };
    Some((u, piece))
}

fn bad(msg: impl Into<String>) -> ReductionError {
    ReductionError::PreconditionViolated(msg.into())
}

/// Degrees 2 and 3 only, cubic vertices pairwise at distance three through two degree-2 vertices.
fn check_two_subdivision_of_cubic(g: &LabeledGraph) -> Result<(), ReductionError> {
    if !is_triangle_free(g) {
        return Err(bad("graph has a triangle"));
    }
    for v in g.vertices() {
        let deg = g.degree(v);
        let cubic_nbrs = g.neighbors(v).filter(|w| g.degree(w) == 3).count();
        let ok = match deg {
            3 => cubic_nbrs == 0 && g.neighbors(v).all(|w| g.degree(w) == 2),
            2 => cubic_nbrs == 1,
            _ => false,
        };
        if !ok {
            return Err(bad(format!("{v} breaks the 2-subdivision pattern")));
        }
    }
    Ok(())
}

/// Replaces every path by a chain of five 0-bend paths; the independence number grows by
/// exactly twice the number of vertices.
pub fn reduce_is(g: &LabeledGraph, rep: &Representation) -> Result<ReductionOutput, ReductionError> {
    check_two_subdivision_of_cubic(g)?;
    if rep.max_bends() > 1 {
        return Err(bad("a path has more than one bend"));
    }
    if !validate(rep).is_valid() || derive_graph(rep).ok().as_ref() != Some(g) {
        return Err(bad("representation does not derive the graph"));
    }
    let norm = normalize_b01(g, rep).map_err(|e| bad(e.to_string()))?;
    let r = refine(&norm, 4);
    let occupied = contact_points(&r);

    let mut out_rep = Representation::cpg();
    let mut out_graph = LabeledGraph::new(format!("IS({})", g.name));
    let mut vertex_map = BTreeMap::new();
    let mut oriented: BTreeMap<&str, (GridPath, i64)> = BTreeMap::new();
    for (u, p) in &r.paths {
        let (p, split) = if p.bends() == 0 {
            let p = if p.start() <= p.end() { p.clone() } else { p.reversed() };
            let mut t = p.length() / 2;
            if occupied.contains_key(&p.point_at(t)) {
                t += 1;
            }
            (p, t)
        } else {
            let p = if p.end_direction(true).is_horizontal() { p.clone() } else { p.reversed() };
            let t = p.start().manhattan(p.bend_points()[0]);
            (p, t)
        };
        if split + 3 >= p.length() || (split..=split + 3).any(|k| occupied.contains_key(&p.point_at(k))) {
            return Err(bad(format!("stub window of {u} is not contact-free")));
        }
        let cuts = [0, split, split + 1, split + 2, split + 3, p.length()];
        for (i, piece) in Piece::ORDER.iter().enumerate() {
            let label = piece.label(u);
            out_rep.insert(label.clone(), p.sub_path(cuts[i], cuts[i + 1]));
            vertex_map.insert(label.clone(), u.clone());
            out_graph.add_vertex(label);
        }
        for w in Piece::ORDER.windows(2) {
            out_graph.add_edge(&w[0].label(u), &w[1].label(u)).unwrap();
        }
        oriented.insert(u, (p, split));
    }
    let side = |u: &str, q| {
        let (p, split) = &oriented[u];
        if p.position(q).expect("contact lies on the path") < *split {
            Piece::First
        } else {
            Piece::Second
        }
    };
    for (u, v) in g.edges() {
        let Intersection::Finite(pts) = path_intersection(&r.paths[&u], &r.paths[&v]) else {
            return Err(bad("paths overlap"));
        };
        let q = *pts.first().ok_or_else(|| bad(format!("{u} and {v} do not touch")))?;
        out_graph.add_edge(&side(&u, q).label(&u), &side(&v, q).label(&v)).unwrap();
    }
    Ok(ReductionOutput { out_graph, out_rep, vertex_map })
}

/// Independent set of the output built from one of the input graph.
pub fn lift_is_solution(g: &LabeledGraph, s: &BTreeSet<String>) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for u in g.vertices() {
        let pieces: &[Piece] = if s.contains(u) {
            &[Piece::First, Piece::Second, Piece::Link(2)]
        } else {
            &[Piece::Link(1), Piece::Link(3)]
        };
        out.extend(pieces.iter().map(|p| p.label(u)));
    }
    out
}

/// Vertices whose two end pieces both lie in `s`.
pub fn project_is_solution(g: &LabeledGraph, s: &BTreeSet<String>) -> BTreeSet<String> {
    g.vertices()
        .filter(|u| s.contains(&Piece::First.label(u)) && s.contains(&Piece::Second.label(u)))
        .map(str::to_string)
        .collect()
}
