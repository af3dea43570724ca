use std::collections::BTreeMap;

use super::{ReductionError, ReductionOutput};
use crate::embedding::{validate_embedding, OrthogonalEmbedding};
use crate::graph_core::{diamond_chain_labels, diamond_chain_substitute, max_degree, LabeledGraph};
use crate::grid_geom::{Dir, GridPath, GridPoint};
use crate::representation::{Representation, Semantics};

fn path(points: &[GridPoint]) -> GridPath {
    GridPath::new(points.to_vec()).expect("diamond paths are well formed")
}

/// Paths of one diamond chain along `route` (oriented from the chain's first joint),
/// with one unit of the refined grid per step. Returns (sides of each diamond, joints).
fn chain_geometry(route: &GridPath) -> (Vec<GridPath>, Vec<GridPath>) {
    let pts = route.seq();
    let k = pts.len() - 2;
    let dir = |j: usize| Dir::between(pts[j], pts[j + 1]).expect("rectilinear route");
    let (u, v) = (pts[0], pts[k + 1]);
    let first = dir(0);
    let last = dir(k);
    let mut sides = Vec::with_capacity(k + 1);
    let mut joints = Vec::with_capacity(k + 1);

    // The first diamond hooks onto the vertical path of u.
    let first_end = if first.is_horizontal() {
        let hook = if first == Dir::East { Dir::South } else { Dir::North };
        sides.push(path(&[u.offset(hook, 1), u, u.offset(first, 2)]));
        u.offset(first, 2)
    } else {
        sides.push(path(&[u.offset(first, 1), u.offset(first, 3)]));
        u.offset(first, 3)
    };
    let mut joint_start = first_end.offset(first.opposite(), 1);
    for j in 1..=k {
        let (dout, q) = (dir(j), pts[j]);
        joints.push(path(&[joint_start, q, q.offset(dout, 2)]));
        let end = if j < k {
            pts[j + 1].offset(dout, -2)
        } else if dout.is_horizontal() {
            v.offset(dout, -1)
        } else {
            v.offset(dout, -2)
        };
        sides.push(path(&[q.offset(dout, 1), end]));
        joint_start = end.offset(dout, -1);
    }
    let tail = if last.is_horizontal() {
        let turn = if last == Dir::East { Dir::North } else { Dir::South };
        vec![joint_start, v, v.offset(turn, 1)]
    } else {
        vec![joint_start, v.offset(last, -1)]
    };
    joints.push(path(&tail));
    (sides, joints)
}

/// Replaces every edge by a chain of diamonds, one per segment of its embedded route, and
/// draws the result as a 1-bend EPG representation.
pub fn reduce_3col(g: &LabeledGraph, emb: &OrthogonalEmbedding) -> Result<ReductionOutput, ReductionError> {
    if max_degree(g) > 4 {
        return Err(ReductionError::PreconditionViolated("degree above 4".into()));
    }
    let report = validate_embedding(g, emb);
    if !report.is_valid() {
        return Err(ReductionError::EmbeddingInvalid(format!("{:?}", report.violations)));
    }
    let bends: BTreeMap<_, _> = emb.bend_counts();
    let out_graph = diamond_chain_substitute(g, &bends).map_err(|e| ReductionError::EmbeddingInvalid(e.to_string()))?;
    let fine = emb.scaled(8);
    let mut out_rep = Representation::new(Semantics::Epg);
    out_rep.refinement_level = 3;
    let mut vertex_map = BTreeMap::new();

    for v in g.vertices() {
        let c = fine.vertex_points[v];
        let used = |d: Dir| {
            g.neighbors(v).any(|w| fine.route(v, w).is_some_and(|r| r.end_direction(true).opposite() == d))
        };
        let reach = |d: Dir| if used(d) { 2 } else { 1 };
        out_rep.insert(v, path(&[c.offset(Dir::South, reach(Dir::South)), c.offset(Dir::North, reach(Dir::North))]));
        vertex_map.insert(v.to_string(), v.to_string());
    }
    for (a, b) in g.edges() {
        let route = fine.route(&a, &b).expect("validated embedding");
        let chain = diamond_chain_labels(&a, &b, route.bends());
        let (sides, joints) = chain_geometry(&route);
        let edge = format!("{a}|{b}");
        for (j, p) in sides.iter().enumerate() {
            let (s1, s2) = &chain.sides[j];
            out_rep.insert(s1.clone(), p.clone());
            out_rep.insert(s2.clone(), p.clone());
            vertex_map.insert(s1.clone(), edge.clone());
            vertex_map.insert(s2.clone(), edge.clone());
        }
        for (j, p) in joints.into_iter().enumerate() {
            out_rep.insert(chain.joints[j + 1].clone(), p);
            vertex_map.insert(chain.joints[j + 1].clone(), edge.clone());
        }
    }
    Ok(ReductionOutput { out_graph, out_rep, vertex_map })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::embed_orthogonal;
    use crate::graph_core::{complete_graph, cycle_graph};
    use crate::representation::{derive_graph, validate};
    use crate::solvers::{is_k_colorable, SearchBudget};

    fn check(g: &LabeledGraph, side: i64) -> ReductionOutput {
        let budget = SearchBudget::default();
        let emb = embed_orthogonal(g, side, &budget).unwrap();
        let out = reduce_3col(g, &emb).unwrap();
        let report = validate(&out.out_rep);
        assert!(report.is_valid(), "{:?}", report.violations);
        assert!(out.out_rep.max_bends() <= 1);
        assert_eq!(derive_graph(&out.out_rep).unwrap(), out.out_graph);
        let extra: usize = emb.bend_counts().values().map(|&k| 3 * (k as usize + 1)).sum();
        assert_eq!(out.out_graph.vertex_count(), g.vertex_count() + extra);
        let col = |h: &LabeledGraph| is_k_colorable(h, 3, &budget).unwrap().is_some();
        assert_eq!(col(g), col(&out.out_graph));
        out
    }

    #[test]
    fn k4_and_c5() {
        let k4 = check(&complete_graph(4), 6);
        assert!(is_k_colorable(&k4.out_graph, 3, &SearchBudget::default()).unwrap().is_none());
        let c5 = check(&cycle_graph(5), 6);
        assert!(is_k_colorable(&c5.out_graph, 3, &SearchBudget::default()).unwrap().is_some());
    }

    #[test]
    fn degree_five_rejected() {
        let star = LabeledGraph::from_edges("s", &[], [("0", "1"), ("0", "2"), ("0", "3"), ("0", "4"), ("0", "5")]);
        assert!(matches!(
            reduce_3col(&star, &OrthogonalEmbedding::default()),
            Err(ReductionError::PreconditionViolated(_))
        ));
    }
}
