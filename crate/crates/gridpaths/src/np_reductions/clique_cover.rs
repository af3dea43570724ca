use std::collections::{BTreeMap, BTreeSet};

use super::{ReductionError, ReductionOutput};
use crate::graph_core::{
    edge_key, is_triangle_free, k_subdivide, line_graph, line_graph_label, max_degree, subdivision_label, LabeledGraph,
};
use crate::grid_geom::{Dir, GridPath, GridPoint};
use crate::representation::{
    contact_points, derive_graph, normal_form_report, normalize_b01, refine, validate, Representation,
};

fn bad(msg: impl Into<String>) -> ReductionError {
    ReductionError::PreconditionViolated(msg.into())
}

fn segment(a: GridPoint, b: GridPoint) -> GridPath {
    GridPath::new(vec![a, b]).expect("distinct collinear points")
}

/// Direction from the endpoint `at` into the 0-bend path `p`.
fn inward(p: &GridPath, at: GridPoint) -> Dir {
    let other = if p.start() == at { p.end() } else { p.start() };
    Dir::between(at, other).expect("0-bend path")
}

/// Cuts `by` units off the end of `p` lying at `at`.
fn shortened(p: &GridPath, at: GridPoint, by: i64) -> Option<GridPath> {
    let d = inward(p, at);
    let other = if p.start() == at { p.end() } else { p.start() };
    (p.length() > by).then(|| segment(at.offset(d, by), other))
}

/// Inserts the two subdivision paths at every contact point. `None` if some path would vanish.
fn subdivide_in_place(rep: &Representation, times: u32) -> Option<Representation> {
    let r = refine(rep, times);
    let mut out = r.clone();
    for (p, labels) in contact_points(&r) {
        let labels: Vec<&String> = labels.iter().collect();
        let chosen = *labels.iter().find(|l| r.paths[l.as_str()].is_endpoint(p))?;
        let other = *labels.iter().find(|l| *l != &chosen)?;
        let path = out.paths[chosen].clone();
        let d = inward(&path, p);
        out.paths.insert(chosen.clone(), shortened(&path, p, 2)?);
        let (lo, hi) = edge_key(chosen, other);
        let (near, far) = if *chosen == lo { (1, 2) } else { (2, 1) };
        out.insert(subdivision_label(&lo, &hi, far), segment(p, p.offset(d, 1)));
        out.insert(subdivision_label(&lo, &hi, near), segment(p.offset(d, 1), p.offset(d, 2)));
    }
    Some(out)
}

/// Orders a component of a graph with maximum degree 2 along its path or cycle.
fn walk(adj: &BTreeMap<&str, Vec<&str>>, comp: &BTreeSet<&str>) -> (Vec<String>, bool) {
    let start = comp.iter().find(|v| adj[*v].len() < 2).or_else(|| comp.iter().next()).copied().unwrap();
    let cyclic = adj[start].len() == 2;
    let mut order = vec![start];
    let mut prev: Option<&str> = None;
    let mut cur = start;
    loop {
        let next = adj[cur].iter().copied().filter(|&w| Some(w) != prev && w != start).min();
        match next {
            Some(w) if !order.contains(&w) => {
                prev = Some(cur);
                cur = w;
                order.push(w);
            }
            _ => break,
        }
    }
    (order.into_iter().map(str::to_string).collect(), cyclic)
}

/// A 0-bend representation of the line graph of the 2-subdivision of `g`, whose minimum
/// clique cover equals the minimum vertex cover of that 2-subdivision.
pub fn reduce_cc(g: &LabeledGraph, rep: &Representation) -> Result<ReductionOutput, ReductionError> {
    if !is_triangle_free(g) || max_degree(g) > 3 {
        return Err(bad("graph must be triangle-free and subcubic"));
    }
    if rep.max_bends() > 0 {
        return Err(bad("representation must have 0 bends"));
    }
    if !validate(rep).is_valid() || derive_graph(rep).ok().as_ref() != Some(g) {
        return Err(bad("representation does not derive the graph"));
    }
    let norm = normalize_b01(g, rep).map_err(|e| bad(e.to_string()))?;
    if norm.max_bends() > 0 || !normal_form_report(&norm).map(|r| r.all()).unwrap_or(false) {
        return Err(bad("representation cannot be normalised without bends"));
    }
    let sub = k_subdivide(g, 2);
    let r1 = subdivide_in_place(&norm, 2)
        .or_else(|| subdivide_in_place(&norm, 3))
        .ok_or_else(|| bad("subdivision paths do not fit"))?;
    debug_assert_eq!(derive_graph(&r1).ok().as_ref(), Some(&sub));
    let mut r2 = refine(&r1, 1);

    let cubic: BTreeSet<&str> = sub.vertices().filter(|v| sub.degree(v) == 3).collect();
    let mut implants: BTreeMap<String, GridPath> = BTreeMap::new();
    let mut vertex_map = BTreeMap::new();
    let touching_at = |r: &Representation, me: &str, q: GridPoint| -> Vec<String> {
        sub.neighbors(me).filter(|n| r.paths[*n].contains(q)).map(str::to_string).collect()
    };
    for &c in &cubic {
        let p = r2.paths[c].clone();
        let inner: Vec<(String, GridPoint)> = sub
            .neighbors(c)
            .flat_map(|n| r2.paths[n].endpoints().into_iter().map(move |e| (n.to_string(), e)))
            .filter(|(_, e)| p.is_interior(*e))
            .collect();
        let [(n3, q)] = inner.as_slice() else {
            return Err(bad(format!("{c} does not strictly contain exactly one endpoint")));
        };
        let (n1, n2) = (touching_at(&r2, c, p.start()), touching_at(&r2, c, p.end()));
        let ([n1], [n2]) = (n1.as_slice(), n2.as_slice()) else {
            return Err(bad(format!("{c} is not touched once at each end")));
        };
        let d = inward(&r2.paths[n3], *q);
        let pieces = [
            (n1, segment(p.start(), *q)),
            (n2, segment(*q, p.end())),
            (n3, segment(*q, q.offset(d, 1))),
        ];
        let trimmed = shortened(&r2.paths[n3], *q, 1).ok_or_else(|| bad("implant leaves an empty path"))?;
        r2.paths.insert(n3.clone(), trimmed);
        for (n, path) in pieces {
            let label = line_graph_label(c, n);
            vertex_map.insert(label.clone(), c.to_string());
            implants.insert(label, path);
        }
    }

    let mut out_rep = Representation::cpg();
    let rest: BTreeSet<&str> = sub.vertices().filter(|v| !cubic.contains(v)).collect();
    let adj: BTreeMap<&str, Vec<&str>> =
        rest.iter().map(|&v| (v, sub.neighbors(v).filter(|w| rest.contains(w)).collect())).collect();
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    for &v in &rest {
        if seen.contains(v) {
            continue;
        }
        let mut comp = BTreeSet::from([v]);
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            for &w in &adj[x] {
                if comp.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.extend(comp.iter().copied());
        let (order, cyclic) = walk(&adj, &comp);
        if order.len() == 1 {
            if sub.degree(&order[0]) > 0 {
                return Err(bad(format!("snake {} has a single path", order[0])));
            }
            continue;
        }
        let paths: Vec<GridPath> = order.iter().map(|l| r2.paths[l].clone()).collect();
        if cyclic {
            for (i, x) in order.iter().enumerate() {
                let label = line_graph_label(x, &order[(i + 1) % order.len()]);
                vertex_map.insert(label.clone(), x.clone());
                out_rep.insert(label, paths[i].clone());
            }
            continue;
        }
        let collinear = |i: usize| {
            let (a, b) = (&paths[i], &paths[i + 1]);
            a.end_direction(true).is_horizontal() == b.end_direction(true).is_horizontal()
        };
        let i = (0..order.len() - 1)
            .filter(|&i| collinear(i))
            .min_by_key(|&i| edge_key(&order[i], &order[i + 1]))
            .ok_or_else(|| bad(format!("snake through {} has no collinear pair", order[0])))?;
        let (a, b) = (&paths[i], &paths[i + 1]);
        let shared = a.endpoints().into_iter().find(|e| b.is_endpoint(*e)).expect("consecutive paths touch");
        let far = |p: &GridPath| if p.start() == shared { p.end() } else { p.start() };
        let merged = segment(far(a), far(b));
        let mut merged_paths = paths[..i].to_vec();
        merged_paths.push(merged);
        merged_paths.extend_from_slice(&paths[i + 2..]);
        for (m, p) in merged_paths.into_iter().enumerate() {
            let label = line_graph_label(&order[m], &order[m + 1]);
            vertex_map.insert(label.clone(), order[m].clone());
            out_rep.insert(label, p);
        }
    }
    for (l, p) in implants {
        out_rep.insert(l, p);
    }
    let mut out_graph = line_graph(&sub);
    out_graph.name = format!("L({})", sub.name);
    Ok(ReductionOutput { out_graph, out_rep, vertex_map })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_core::{complete_graph, cycle_graph};
    use crate::grid_geom::path_from_sequence;
    use crate::np_reductions::independent_set::tests::k4_subdivision_rep;
    use crate::solvers::{min_clique_cover, min_vertex_cover, SearchBudget};

    #[test]
    fn k4_subdivision_instance() {
        let g = k_subdivide(&complete_graph(4), 2);
        let out = reduce_cc(&g, &k4_subdivision_rep()).unwrap();
        assert!(validate(&out.out_rep).is_valid());
        assert_eq!(out.out_rep.max_bends(), 0);
        assert_eq!(derive_graph(&out.out_rep).unwrap(), out.out_graph);
        let budget = SearchBudget::default();
        let (theta, _) = min_clique_cover(&out.out_graph, &budget).unwrap();
        let (beta, _) = min_vertex_cover(&k_subdivide(&g, 2), &budget).unwrap();
        assert_eq!(theta, beta);
        assert_eq!(min_vertex_cover(&g, &budget).unwrap().0, 9);
    }

    #[test]
    fn square_cycle() {
        let g = cycle_graph(4);
        let mut r = Representation::cpg();
        for (l, s) in [("1", [(0, 0), (2, 0)]), ("2", [(2, 0), (2, 2)]), ("3", [(2, 2), (0, 2)]), ("4", [(0, 2), (0, 0)])] {
            r.insert(l, path_from_sequence(&s).unwrap());
        }
        let out = reduce_cc(&g, &r).unwrap();
        assert_eq!(out.out_graph.vertex_count(), 12);
        assert!(validate(&out.out_rep).is_valid());
        assert_eq!(derive_graph(&out.out_rep).unwrap(), out.out_graph);
    }
}
