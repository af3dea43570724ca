//! Exact exponential-time oracles for small instances.

mod bits;
mod search;

use std::collections::{BTreeMap, BTreeSet};
use std::time::Duration;

use thiserror::Error;
use web_time::Instant;

use crate::graph_core::{triangles, LabeledGraph};
use crate::sat_reduction::{Assignment, Formula};
use bits::Bits;

pub use search::{search_cpg_rep, SearchOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub node_limit: u64,
    pub wall_limit: Duration,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { node_limit: 500_000_000, wall_limit: Duration::from_secs(120) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("search budget exceeded")]
    BudgetExceeded,
}

pub(crate) struct Meter {
    start: Instant,
    nodes: u64,
    budget: SearchBudget,
}

impl Meter {
    pub(crate) fn new(budget: &SearchBudget) -> Self {
        Meter { start: Instant::now(), nodes: 0, budget: *budget }
    }

    pub(crate) fn tick(&mut self) -> Result<(), SolverError> {
        self.nodes += 1;
        if self.nodes > self.budget.node_limit
            || (self.nodes.is_multiple_of(64) && self.start.elapsed() > self.budget.wall_limit)
        {
            return Err(SolverError::BudgetExceeded);
        }
        Ok(())
    }
}

fn to_bits(adj: &[Vec<usize>]) -> Vec<Bits> {
    let n = adj.len();
    adj.iter().map(|ns| Bits::from_iter(n, ns.iter().copied())).collect()
}

struct Mis<'a> {
    nb: &'a [Bits],
    meter: Meter,
}

impl Mis<'_> {
    fn degree(&self, v: usize, alive: &Bits) -> usize {
        self.nb[v].and_count(alive)
    }

    /// Greedy clique cover of `alive`; its size bounds the independence number.
    fn upper_bound(&self, alive: &Bits) -> usize {
        let mut cliques: Vec<Bits> = Vec::new();
        for v in alive.iter() {
            match cliques.iter_mut().find(|c| c.is_subset_of(&self.nb[v])) {
                Some(c) => c.insert(v),
                None => cliques.push(Bits::from_iter(alive.universe(), [v])),
            }
        }
        cliques.len()
    }

    fn solve(&mut self, mut alive: Bits) -> Result<Vec<usize>, SolverError> {
        self.meter.tick()?;
        let mut taken = Vec::new();
        loop {
            let low = alive.iter().find(|&v| self.degree(v, &alive) <= 1);
            match low {
                Some(v) => {
                    taken.push(v);
                    alive.remove(v);
                    alive.subtract(&self.nb[v]);
                }
                None => break,
            }
        }
        if alive.is_empty() {
            return Ok(taken);
        }
        let comps = components(self.nb, &alive);
        if comps.len() > 1 {
            for c in comps {
                taken.extend(self.solve(c)?);
            }
            return Ok(taken);
        }
        let v = alive.iter().max_by_key(|&v| (self.degree(v, &alive), std::cmp::Reverse(v))).unwrap();
        if self.degree(v, &alive) == 2 {
            taken.extend(cycle_pick(self.nb, &alive));
            return Ok(taken);
        }
        // a neighbour whose closed neighbourhood lies inside v's makes v useless
        let mut closed_v = self.nb[v].and(&alive);
        closed_v.insert(v);
        let dominated = self.nb[v].and(&alive).iter().any(|u| {
            let mut closed_u = self.nb[u].and(&alive);
            closed_u.insert(u);
            closed_u.is_subset_of(&closed_v)
        });
        let mut without = alive.clone();
        without.remove(v);
        if dominated {
            taken.extend(self.solve(without)?);
            return Ok(taken);
        }
        let mut with_v = without.clone();
        with_v.subtract(&self.nb[v]);
        let mut a = self.solve(with_v)?;
        a.push(v);
        if self.upper_bound(&without) > a.len() {
            let b = self.solve(without)?;
            if b.len() > a.len() {
                a = b;
            }
        }
        taken.extend(a);
        Ok(taken)
    }
}

fn components(nb: &[Bits], alive: &Bits) -> Vec<Bits> {
    let mut left = alive.clone();
    let mut out = Vec::new();
    while let Some(s) = left.first() {
        let mut comp = Bits::from_iter(alive.universe(), [s]);
        let mut stack = vec![s];
        left.remove(s);
        while let Some(u) = stack.pop() {
            for w in nb[u].and(&left).iter() {
                left.remove(w);
                comp.insert(w);
                stack.push(w);
            }
        }
        out.push(comp);
    }
    out
}

/// Maximum independent set of a disjoint union of cycles.
fn cycle_pick(nb: &[Bits], alive: &Bits) -> Vec<usize> {
    let mut out = Vec::new();
    for comp in components(nb, alive) {
        let start = comp.first().unwrap();
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        loop {
            let next = nb[cur].and(&comp).iter().find(|&w| w != prev && w != start);
            match next {
                Some(w) if !order.contains(&w) => {
                    order.push(w);
                    prev = cur;
                    cur = w;
                }
                _ => break,
            }
        }
        out.extend(order.iter().step_by(2).take(order.len() / 2).copied());
    }
    out
}

/// Maximum independent set of a graph given by adjacency lists.
pub fn mis_indexed(adj: &[Vec<usize>], budget: &SearchBudget) -> Result<Vec<usize>, SolverError> {
    let nb = to_bits(adj);
    let mut m = Mis { nb: &nb, meter: Meter::new(budget) };
    let all = Bits::full(adj.len());
    let mut s = m.solve(all)?;
    s.sort();
    Ok(s)
}

pub fn max_independent_set(g: &LabeledGraph, budget: &SearchBudget) -> Result<(usize, BTreeSet<String>), SolverError> {
    let (labels, adj) = g.indexed();
    let s = mis_indexed(&adj, budget)?;
    let set: BTreeSet<String> = s.into_iter().map(|i| labels[i].clone()).collect();
    Ok((set.len(), set))
}

pub fn min_vertex_cover(g: &LabeledGraph, budget: &SearchBudget) -> Result<(usize, BTreeSet<String>), SolverError> {
    let (alpha, s) = max_independent_set(g, budget)?;
    let cover: BTreeSet<String> = g.vertices().filter(|v| !s.contains(*v)).map(String::from).collect();
    debug_assert_eq!(alpha + cover.len(), g.vertex_count());
    Ok((cover.len(), cover))
}

pub fn is_independent(g: &LabeledGraph, s: &BTreeSet<String>) -> bool {
    s.iter().all(|u| s.iter().all(|v| !g.has_edge(u, v)))
}

/// All maximal cliques (Bron–Kerbosch with pivoting).
pub fn maximal_cliques(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let nb = to_bits(adj);
    let n = adj.len();
    let mut out = Vec::new();
    fn rec(nb: &[Bits], r: &mut Vec<usize>, p: Bits, mut x: Bits, out: &mut Vec<Vec<usize>>) {
        if p.is_empty() && x.is_empty() {
            out.push(r.clone());
            return;
        }
        let pivot = p.iter().chain(x.iter()).max_by_key(|&u| nb[u].and_count(&p)).unwrap();
        let mut p = p;
        for v in p.minus(&nb[pivot]).iter().collect::<Vec<_>>() {
            r.push(v);
            rec(nb, r, p.and(&nb[v]), x.and(&nb[v]), out);
            r.pop();
            p.remove(v);
            x.insert(v);
        }
    }
    rec(&nb, &mut Vec::new(), Bits::full(n), Bits::empty(n), &mut out);
    for c in &mut out {
        c.sort();
    }
    out.sort();
    out
}

struct Cover<'a> {
    nb: &'a [Bits],
    cliques: &'a [Bits],
    holders: Vec<Vec<usize>>,
    best: Vec<usize>,
    meter: Meter,
}

impl Cover<'_> {
    fn lower_bound(&self, uncovered: &Bits) -> usize {
        let mut left = uncovered.clone();
        let mut k = 0;
        while let Some(v) = left.iter().min_by_key(|&v| self.nb[v].and_count(&left)) {
            k += 1;
            left.remove(v);
            left.subtract(&self.nb[v]);
        }
        k
    }

    fn rec(&mut self, uncovered: Bits, chosen: &mut Vec<usize>) -> Result<(), SolverError> {
        self.meter.tick()?;
        if uncovered.is_empty() {
            if chosen.len() < self.best.len() {
                self.best = chosen.clone();
            }
            return Ok(());
        }
        if chosen.len() + self.lower_bound(&uncovered) >= self.best.len() {
            return Ok(());
        }
        let v = uncovered.iter().min_by_key(|&v| self.holders[v].len()).unwrap();
        let mut options = self.holders[v].clone();
        options.sort_by_key(|&c| std::cmp::Reverse(self.cliques[c].and_count(&uncovered)));
        for c in options {
            chosen.push(c);
            self.rec(uncovered.minus(&self.cliques[c]), chosen)?;
            chosen.pop();
        }
        Ok(())
    }
}

/// Minimum clique cover, returned as a partition of the vertex set.
pub fn min_clique_cover(g: &LabeledGraph, budget: &SearchBudget) -> Result<(usize, Vec<BTreeSet<String>>), SolverError> {
    let (labels, adj) = g.indexed();
    let n = labels.len();
    let nb = to_bits(&adj);
    let cliques: Vec<Bits> = maximal_cliques(&adj).into_iter().map(|c| Bits::from_iter(n, c)).collect();
    let mut holders = vec![Vec::new(); n];
    for (i, c) in cliques.iter().enumerate() {
        for v in c.iter() {
            holders[v].push(i);
        }
    }
    // greedy start
    let mut greedy = Vec::new();
    let mut left = Bits::full(n);
    while !left.is_empty() {
        let c = (0..cliques.len()).max_by_key(|&c| (cliques[c].and_count(&left), std::cmp::Reverse(c))).unwrap();
        greedy.push(c);
        left = left.minus(&cliques[c]);
    }
    let mut cover = Cover { nb: &nb, cliques: &cliques, holders, best: greedy, meter: Meter::new(budget) };
    cover.rec(Bits::full(n), &mut Vec::new())?;
    let mut seen = Bits::empty(n);
    let mut parts = Vec::new();
    for &c in &cover.best {
        let fresh = cliques[c].minus(&seen);
        seen = seen.or(&cliques[c]);
        if !fresh.is_empty() {
            parts.push(fresh.iter().map(|i| labels[i].clone()).collect());
        }
    }
    Ok((parts.len(), parts))
}

/// Decides k-colourability; returns a colouring when one exists.
pub fn is_k_colorable(
    g: &LabeledGraph,
    k: usize,
    budget: &SearchBudget,
) -> Result<Option<BTreeMap<String, usize>>, SolverError> {
    let (labels, adj) = g.indexed();
    let n = labels.len();
    let mut color = vec![usize::MAX; n];
    let mut meter = Meter::new(budget);

    fn rec(adj: &[Vec<usize>], k: usize, color: &mut [usize], meter: &mut Meter) -> Result<bool, SolverError> {
        meter.tick()?;
        // most saturated uncoloured vertex first
        let pick = (0..adj.len()).filter(|&v| color[v] == usize::MAX).max_by_key(|&v| {
            let sat: BTreeSet<usize> = adj[v].iter().map(|&u| color[u]).filter(|&c| c != usize::MAX).collect();
            (sat.len(), adj[v].len(), std::cmp::Reverse(v))
        });
        let Some(v) = pick else { return Ok(true) };
        let used: BTreeSet<usize> = adj[v].iter().map(|&u| color[u]).collect();
        let max_used = color.iter().filter(|&&c| c != usize::MAX).max().map_or(0, |&c| c + 1);
        for c in 0..k.min(max_used + 1) {
            if !used.contains(&c) {
                color[v] = c;
                if rec(adj, k, color, meter)? {
                    return Ok(true);
                }
            }
        }
        color[v] = usize::MAX;
        Ok(false)
    }

    if n > 0 && k == 0 {
        return Ok(None);
    }
    if rec(&adj, k, &mut color, &mut meter)? {
        Ok(Some(labels.into_iter().zip(color).collect()))
    } else {
        Ok(None)
    }
}

pub fn is_proper_coloring(g: &LabeledGraph, c: &BTreeMap<String, usize>) -> bool {
    g.edges().iter().all(|(u, v)| c[u] != c[v])
}

/// Maximum number of pairwise edge-disjoint triangles.
pub fn max_edge_disjoint_triangles(g: &LabeledGraph, budget: &SearchBudget) -> Result<usize, SolverError> {
    let tri = triangles(g);
    let conflicts: Vec<Vec<usize>> = (0..tri.len())
        .map(|i| {
            (0..tri.len())
                .filter(|&j| j != i && tri[i].iter().filter(|v| tri[j].contains(v)).count() >= 2)
                .collect()
        })
        .collect();
    Ok(mis_indexed(&conflicts, budget)?.len())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatResult {
    Sat(Assignment),
    Unsat,
}

/// DPLL with unit propagation.
pub fn sat_solve(f: &Formula) -> SatResult {
    let index: BTreeMap<&str, usize> = f.variables.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
    let clauses: Vec<Vec<(usize, bool)>> = f
        .clauses
        .iter()
        .map(|c| c.iter().map(|l| (index[l.var.as_str()], l.positive)).collect())
        .collect();
    let mut vals: Vec<Option<bool>> = vec![None; f.variables.len()];

    fn dpll(clauses: &[Vec<(usize, bool)>], vals: &mut Vec<Option<bool>>) -> bool {
        let snapshot = vals.clone();
        loop {
            let mut unit = None;
            for c in clauses {
                if c.iter().any(|&(v, s)| vals[v] == Some(s)) {
                    continue;
                }
                let open: Vec<_> = c.iter().filter(|&&(v, _)| vals[v].is_none()).collect();
                match open.len() {
                    0 => {
                        *vals = snapshot;
                        return false;
                    }
                    1 => {
                        unit = Some(*open[0]);
                        break;
                    }
                    _ => {}
                }
            }
            match unit {
                Some((v, s)) => vals[v] = Some(s),
                None => break,
            }
        }
        let branch = clauses
            .iter()
            .filter(|c| !c.iter().any(|&(v, s)| vals[v] == Some(s)))
            .min_by_key(|c| c.len())
            .and_then(|c| c.iter().find(|&&(v, _)| vals[v].is_none()).copied());
        let Some((v, s)) = branch else { return true };
        for choice in [s, !s] {
            vals[v] = Some(choice);
            if dpll(clauses, vals) {
                return true;
            }
            vals[v] = None;
        }
        *vals = snapshot;
        false
    }

    if dpll(&clauses, &mut vals) {
        SatResult::Sat(f.variables.iter().cloned().zip(vals.into_iter().map(|v| v.unwrap_or(true))).collect())
    } else {
        SatResult::Unsat
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_core::{complete_graph, cycle_graph, k_subdivide};
    use crate::sat_reduction::Literal;

    fn b() -> SearchBudget {
        SearchBudget::default()
    }

    fn brute_alpha(g: &LabeledGraph) -> usize {
        let (_, adj) = g.indexed();
        let n = adj.len();
        (0u32..1 << n)
            .filter(|m| (0..n).all(|v| m & (1 << v) == 0 || adj[v].iter().all(|&u| m & (1 << u) == 0)))
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn independence_numbers() {
        assert_eq!(max_independent_set(&cycle_graph(5), &b()).unwrap().0, 2);
        assert_eq!(max_independent_set(&complete_graph(6), &b()).unwrap().0, 1);
        let s = k_subdivide(&complete_graph(4), 2);
        let (a, w) = max_independent_set(&s, &b()).unwrap();
        assert_eq!(a, brute_alpha(&s));
        assert!(is_independent(&s, &w));
        assert_eq!(min_vertex_cover(&s, &b()).unwrap().0, 16 - a);
    }

    #[test]
    fn clique_covers() {
        assert_eq!(min_clique_cover(&complete_graph(3), &b()).unwrap().0, 1);
        assert_eq!(min_clique_cover(&cycle_graph(5), &b()).unwrap().0, 3);
        let mut e = LabeledGraph::new("e");
        for v in ["a", "b", "c", "d"] {
            e.add_vertex(v);
        }
        assert_eq!(min_clique_cover(&e, &b()).unwrap().0, 4);
    }

    #[test]
    fn colourings() {
        assert!(is_k_colorable(&complete_graph(4), 3, &b()).unwrap().is_none());
        let c5 = cycle_graph(5);
        let c = is_k_colorable(&c5, 3, &b()).unwrap().unwrap();
        assert!(is_proper_coloring(&c5, &c));
        assert!(is_k_colorable(&c5, 2, &b()).unwrap().is_none());
    }

    #[test]
    fn triangle_packing() {
        assert_eq!(max_edge_disjoint_triangles(&complete_graph(4), &b()).unwrap(), 1);
        assert_eq!(max_edge_disjoint_triangles(&cycle_graph(6), &b()).unwrap(), 0);
    }

    #[test]
    fn sat() {
        let phi0 = Formula::new(
            &["x", "y"],
            vec![
                vec![Literal::pos("x"), Literal::pos("y")],
                vec![Literal::pos("x"), Literal::neg("y")],
                vec![Literal::neg("x"), Literal::neg("y")],
            ],
        );
        match sat_solve(&phi0) {
            SatResult::Sat(a) => {
                assert!(phi0.satisfied_by(&a));
                assert_eq!(a, [("x".to_string(), true), ("y".to_string(), false)].into_iter().collect());
            }
            SatResult::Unsat => panic!(),
        }
        let contra = Formula::new(&["x"], vec![vec![Literal::pos("x")], vec![Literal::neg("x")]]);
        assert_eq!(sat_solve(&contra), SatResult::Unsat);
        assert_eq!(sat_solve(&Formula::default()), SatResult::Sat(Assignment::new()));
    }

    #[test]
    fn budget_is_enforced() {
        let tiny = SearchBudget { node_limit: 1, wall_limit: Duration::from_secs(1) };
        assert_eq!(
            max_independent_set(&k_subdivide(&complete_graph(4), 2), &tiny),
            Err(SolverError::BudgetExceeded)
        );
    }
}
