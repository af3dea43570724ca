use std::collections::{BTreeMap, VecDeque};

use super::{Meter, SearchBudget, SolverError};
use crate::graph_core::LabeledGraph;
use crate::grid_geom::{path_intersection, Dir, GridPath, GridPoint, Intersection};
use crate::representation::{derive_graph, validate, Representation, Semantics};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Representation),
    NotFoundInBox,
    BudgetExceeded,
}

/// Every path with at most `k` bends inside `[0, side)²`, each listed in one orientation.
fn path_pool(k: usize, side: i64) -> Vec<GridPath> {
    fn grow(seq: &mut Vec<GridPoint>, last: Option<Dir>, k: usize, side: i64, out: &mut Vec<GridPath>) {
        let here = *seq.last().unwrap();
        for d in Dir::ALL {
            if let Some(l) = last {
                if l.is_horizontal() == d.is_horizontal() {
                    continue;
                }
            }
            for len in 1..side {
                let q = here.offset(d, len);
                if q.x < 0 || q.y < 0 || q.x >= side || q.y >= side {
                    break;
                }
                seq.push(q);
                if let Ok(p) = GridPath::new(seq.clone()) {
                    let r = p.reversed();
                    out.push(if r.seq() < p.seq() { r } else { p });
                    if seq.len() - 2 < k {
                        grow(seq, Some(d), k, side, out);
                    }
                }
                seq.pop();
            }
        }
    }
    let mut out = Vec::new();
    for x in 0..side {
        for y in 0..side {
            grow(&mut vec![GridPoint::new(x, y)], None, k, side, &mut out);
        }
    }
    out.sort_by(|a, b| a.seq().cmp(b.seq()));
    out.dedup();
    out
}

fn is_canonical(p: &GridPath) -> bool {
    let s = p.seq();
    Dir::between(s[0], s[1]) == Some(Dir::East) && (s.len() == 2 || Dir::between(s[1], s[2]) == Some(Dir::North))
}

fn compatible(p: &GridPath, q: &GridPath, adjacent: bool) -> bool {
    match path_intersection(p, q) {
        Intersection::Overlap => false,
        Intersection::Finite(pts) => {
            if pts.is_empty() {
                return !adjacent;
            }
            adjacent && pts.iter().all(|&x| !(p.is_interior(x) && q.is_interior(x)))
        }
    }
}

/// Bounded-grid backtracking search for a CPG representation with at most `k` bends per path,
/// growing the box up to `grid_side`.
pub fn search_cpg_rep(g: &LabeledGraph, k: usize, grid_side: i64, budget: &SearchBudget) -> SearchOutcome {
    let (labels, adj) = g.indexed();
    let n = labels.len();
    if n == 0 {
        return SearchOutcome::Found(Representation::cpg());
    }
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    while order.len() < n {
        let root = (0..n).filter(|&v| !seen[v]).max_by_key(|&v| (adj[v].len(), std::cmp::Reverse(v))).unwrap();
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(u) = queue.pop_front() {
            order.push(u);
            let mut next: Vec<usize> = adj[u].iter().copied().filter(|&w| !seen[w]).collect();
            next.sort_by_key(|&w| std::cmp::Reverse(adj[w].len()));
            for w in next {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    let mut meter = Meter::new(budget);
    for side in 1..=grid_side {
        match place_in_box(&order, &adj, k, side, &mut meter) {
            Err(_) => return SearchOutcome::BudgetExceeded,
            Ok(None) => {}
            Ok(Some(placed)) => {
                let paths: BTreeMap<String, GridPath> = labels.into_iter().zip(placed).collect();
                let rep = Representation { semantics: Semantics::Cpg, paths, refinement_level: 0 };
                debug_assert!(validate(&rep).is_valid());
                debug_assert_eq!(derive_graph(&rep).as_ref(), Ok(g));
                return SearchOutcome::Found(rep);
            }
        }
    }
    SearchOutcome::NotFoundInBox
}

/// Exhaustive placement inside `[0, grid_side)²`.
fn place_in_box(
    order: &[usize],
    adj: &[Vec<usize>],
    k: usize,
    grid_side: i64,
    meter: &mut Meter,
) -> Result<Option<Vec<GridPath>>, SolverError> {
    let mut pool = path_pool(k, grid_side);
    pool.sort_by_key(|p| (p.length(), p.bends()));
    let cell = |q: GridPoint| (q.x * grid_side + q.y) as usize;
    let cells = (grid_side * grid_side) as usize;
    let mut ending_at = vec![Vec::new(); cells];
    let mut through = vec![Vec::new(); cells];
    for (i, p) in pool.iter().enumerate() {
        for q in p.lattice_points() {
            through[cell(q)].push(i);
        }
        ending_at[cell(p.start())].push(i);
        if p.start() != p.end() {
            ending_at[cell(p.end())].push(i);
        }
    }
    let centre = GridPoint::new(grid_side / 2, grid_side / 2);
    let mut first: Vec<GridPath> = pool
        .iter()
        .filter_map(|p| {
            if is_canonical(p) {
                Some(p.clone())
            } else {
                let r = p.reversed();
                is_canonical(&r).then_some(r)
            }
        })
        .collect();
    first.sort_by_key(|p| (p.start().manhattan(centre), p.length()));
    let mut placed: Vec<Option<GridPath>> = vec![None; order.len()];

    struct Ctx<'a> {
        order: &'a [usize],
        adj: &'a [Vec<usize>],
        pool: &'a [GridPath],
        first: &'a [GridPath],
        cell: &'a dyn Fn(GridPoint) -> usize,
        ending_at: &'a [Vec<usize>],
        through: &'a [Vec<usize>],
    }

    /// Pool indices of paths that could touch `q`: an endpoint on `q` or running through an
    /// endpoint of `q`.
    fn touching(c: &Ctx, q: &GridPath) -> Vec<usize> {
        let mut out: Vec<usize> = q.lattice_points().iter().flat_map(|&x| c.ending_at[(c.cell)(x)].iter().copied()).collect();
        for x in q.endpoints() {
            out.extend_from_slice(&c.through[(c.cell)(x)]);
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    fn rec(c: &Ctx, depth: usize, placed: &mut Vec<Option<GridPath>>, meter: &mut Meter) -> Result<bool, SolverError> {
        meter.tick()?;
        if depth == c.order.len() {
            return Ok(true);
        }
        let v = c.order[depth];
        let earlier = &c.order[..depth];
        let candidates: Vec<&GridPath> = if depth == 0 {
            c.first.iter().collect()
        } else if let Some(&u) = earlier.iter().find(|u| c.adj[v].contains(u)) {
            touching(c, placed[u].as_ref().unwrap()).into_iter().map(|i| &c.pool[i]).collect()
        } else {
            c.pool.iter().collect()
        };
        for cand in candidates {
            let ok = earlier.iter().all(|&u| {
                let q = placed[u].as_ref().unwrap();
                compatible(cand, q, c.adj[v].contains(&u))
            });
            if ok {
                placed[v] = Some(cand.clone());
                if rec(c, depth + 1, placed, meter)? {
                    return Ok(true);
                }
                placed[v] = None;
            }
        }
        Ok(false)
    }

    let ctx = Ctx {
        order,
        adj,
        pool: &pool,
        first: &first,
        cell: &cell,
        ending_at: &ending_at,
        through: &through,
    };
    Ok(rec(&ctx, 0, &mut placed, meter)?.then(|| placed.into_iter().map(Option::unwrap).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_core::complete_graph;

    #[test]
    fn pool_sizes() {
        // straight paths in a 3x3 box: 3 rows x 3 segments x 2 axes
        assert_eq!(path_pool(0, 3).len(), 18);
        assert!(path_pool(1, 3).iter().all(|p| p.bends() <= 1));
    }

    #[test]
    fn finds_triangle_and_k4() {
        for n in [3, 4] {
            let g = complete_graph(n);
            match search_cpg_rep(&g, 0, 5, &SearchBudget::default()) {
                SearchOutcome::Found(r) => assert_eq!(derive_graph(&r).unwrap(), g),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn k5_has_no_straight_witness() {
        let g = complete_graph(5);
        assert_eq!(search_cpg_rep(&g, 0, 4, &SearchBudget::default()), SearchOutcome::NotFoundInBox);
    }
}
