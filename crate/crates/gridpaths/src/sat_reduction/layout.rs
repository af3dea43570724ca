use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use super::assembly::{
    assign_r_values, clause_label, eater_bundle, terminal_id, var_label, ReductionArtifacts, VAR_PAIRS,
};
use super::formula::{clause_vertex, incidence_graph, variable_vertex, Assignment};
use super::SatReductionError;
use crate::constructions::GadgetBundle;
use crate::embedding::{validate_embedding, OrthogonalEmbedding};
use crate::grid_geom::{Dir, GridPath, GridPoint, Isometry};
use crate::representation::Representation;

/// Gadget lattice unit, in grid units.
const U: i64 = 256;
/// One embedding unit, in grid units.
const SCALE: i64 = 64 * U;
/// Half the side of a gadget square, in gadget units.
const HALF: i64 = 20;
/// Length of the short arm that carries an end-eater, in grid units.
const STUB: i64 = 24;
/// Corners a connector route may have; see `chain_paths`.
const MAX_ROUTE_CORNERS: u32 = 6;

fn pt(x: i64, y: i64) -> GridPoint {
    GridPoint::new(x, y)
}

fn step(p: GridPoint, d: Dir, len: i64) -> GridPoint {
    p.offset(d, len)
}

/// Drops repeated points and straight-through points.
fn simplify(points: &[GridPoint]) -> Vec<GridPoint> {
    let mut out: Vec<GridPoint> = Vec::with_capacity(points.len());
    for &p in points {
        if out.last() == Some(&p) {
            continue;
        }
        if out.len() >= 2 {
            let (a, b) = (out[out.len() - 2], out[out.len() - 1]);
            if Dir::between(a, b) == Dir::between(b, p) {
                out.pop();
            }
        }
        out.push(p);
    }
    out
}

fn path(points: &[GridPoint]) -> Result<GridPath, SatReductionError> {
    GridPath::new(simplify(points)).map_err(|e| SatReductionError::EmbeddingTooTight(format!("{e}")))
}

/// A terminal as drawn inside a gadget square (gadget units, local frame).
#[derive(Debug, Clone)]
struct TermGeom {
    one: bool,
    /// For a 1-valued terminal, the single free contact point and its exit.
    /// For a 0-valued one, the contact points on the bridge.
    options: Vec<(GridPoint, Dir)>,
    bridge: Option<Vec<GridPoint>>,
}

#[derive(Debug, Clone)]
struct LocalGadget {
    paths: Vec<(String, Vec<GridPoint>)>,
    terminals: BTreeMap<String, TermGeom>,
}

impl LocalGadget {
    fn transformed(&self, iso: Isometry, offset: GridPoint) -> LocalGadget {
        let f = |p: GridPoint| iso.apply(pt(p.x - offset.x, p.y - offset.y));
        LocalGadget {
            paths: self.paths.iter().map(|(l, s)| (l.clone(), s.iter().map(|&p| f(p)).collect())).collect(),
            terminals: self
                .terminals
                .iter()
                .map(|(k, t)| {
                    let t = TermGeom {
                        one: t.one,
                        options: t.options.iter().map(|&(p, d)| (f(p), iso.apply_dir(d))).collect(),
                        bridge: t.bridge.as_ref().map(|b| b.iter().map(|&p| f(p)).collect()),
                    };
                    (k.clone(), t)
                })
                .collect(),
        }
    }
}

fn seq(points: &[(i64, i64)]) -> Vec<GridPoint> {
    points.iter().map(|&(x, y)| pt(x, y)).collect()
}

/// Variable core with the geometric cycle A-B-C-D; `roles` names the gadget vertex drawn as A, B, C, D.
fn variable_core(x: &str, roles: [&str; 4], r: &BTreeMap<String, u8>) -> LocalGadget {
    let geo = [
        ("e", seq(&[(0, 0), (4, 0)])),
        (roles[0], seq(&[(4, 0), (4, 3), (-6, 3)])),
        (roles[1], seq(&[(0, 3), (0, 0), (-5, 0)])),
        (roles[2], seq(&[(0, 0), (0, -3), (10, -3)])),
        (roles[3], seq(&[(4, -3), (4, 0), (9, 0)])),
    ];
    let paths = geo.iter().map(|(role, s)| (var_label(x, role), s.clone())).collect();
    let sides: [([&str; 2], TermGeom); 4] = [
        ([roles[0], roles[1]], TermGeom { one: true, options: vec![(pt(0, 3), Dir::North)], bridge: None }),
        ([roles[2], roles[3]], TermGeom { one: true, options: vec![(pt(4, -3), Dir::South)], bridge: None }),
        (
            [roles[1], roles[2]],
            TermGeom {
                one: false,
                options: vec![(pt(-1, -2), Dir::South), (pt(-2, -1), Dir::West)],
                bridge: Some(seq(&[(-2, 0), (-2, -2), (0, -2)])),
            },
        ),
        (
            [roles[3], roles[0]],
            TermGeom {
                one: false,
                options: vec![(pt(5, 2), Dir::North), (pt(6, 1), Dir::East)],
                bridge: Some(seq(&[(6, 0), (6, 2), (4, 2)])),
            },
        ),
    ];
    let mut terminals = BTreeMap::new();
    for (pair, _) in VAR_PAIRS {
        let (u, v) = pair.split_at(1);
        let (_, geom) = sides
            .iter()
            .find(|(s, _)| (s[0] == u && s[1] == v) || (s[0] == v && s[1] == u))
            .expect("every pair is a side of the cycle");
        let id = terminal_id(&(variable_vertex(x), pair.to_string()));
        debug_assert_eq!(geom.one, r[&id] == 1);
        terminals.insert(id, geom.clone());
    }
    LocalGadget { paths, terminals }
}

/// Role orders (A, B, C, D) that put value 1 on the positive pairs.
const TRUE_ROLES: [[&str; 4]; 4] = [["b", "c", "d", "a"], ["c", "b", "a", "d"], ["d", "a", "b", "c"], ["a", "d", "c", "b"]];
const FALSE_ROLES: [[&str; 4]; 4] = [["a", "b", "c", "d"], ["b", "a", "d", "c"], ["c", "d", "a", "b"], ["d", "c", "b", "a"]];

/// Clause core; `slots[k]` is the terminal number drawn in slot W, N and the zero slot.
fn clause_core(j: usize, slots: [usize; 3]) -> LocalGadget {
    let shapes: [(Vec<GridPoint>, Vec<GridPoint>, TermGeom); 3] = [
        (
            seq(&[(-4, -2), (-4, 2)]),
            seq(&[(-2, 0), (-2, -2), (-5, -2)]),
            TermGeom { one: true, options: vec![(pt(-4, -2), Dir::South)], bridge: None },
        ),
        (
            seq(&[(2, 4), (-2, 4)]),
            seq(&[(0, 2), (2, 2), (2, 5)]),
            TermGeom { one: true, options: vec![(pt(2, 4), Dir::East)], bridge: None },
        ),
        (
            seq(&[(0, 0), (3, 0)]),
            seq(&[(0, 0), (0, -3)]),
            TermGeom {
                one: false,
                options: vec![(pt(1, -2), Dir::South), (pt(2, -1), Dir::East)],
                bridge: Some(seq(&[(2, 0), (2, -2), (0, -2)])),
            },
        ),
    ];
    let mut paths = vec![(clause_label(j, "o"), seq(&[(-4, 0), (0, 0), (0, 4)]))];
    let mut terminals = BTreeMap::new();
    for (slot, (p, q, geom)) in shapes.into_iter().enumerate() {
        let k = slots[slot];
        paths.push((clause_label(j, &format!("p{k}")), p));
        paths.push((clause_label(j, &format!("q{k}")), q));
        terminals.insert(terminal_id(&(clause_vertex(j), k.to_string())), geom);
    }
    LocalGadget { paths, terminals }
}

/// A connector end to be routed inside one square: from the port in direction `port`
/// to one of the terminal's contact options.
#[derive(Debug, Clone)]
struct Request {
    edge: String,
    terminal: String,
    port: Dir,
    /// Bends allowed inside the gadget square.
    max_bends: u32,
}

#[derive(Debug, Clone)]
struct LocalRoute {
    /// port ... contact, in gadget units, every lattice point listed.
    cells: Vec<GridPoint>,
    bends: u32,
}

fn lattice_of(s: &[GridPoint]) -> Vec<GridPoint> {
    let mut out = vec![s[0]];
    for w in s.windows(2) {
        let d = Dir::between(w[0], w[1]).expect("axis-aligned");
        let mut p = w[0];
        while p != w[1] {
            p = step(p, d, 1);
            out.push(p);
        }
    }
    out
}

const SIDE: usize = (2 * HALF + 1) as usize;

/// Occupied lattice points of one gadget square, |x|, |y| <= HALF.
#[derive(Clone)]
struct Occupancy(Vec<bool>);

impl Occupancy {
    fn new() -> Self {
        Occupancy(vec![false; SIDE * SIDE])
    }

    fn index(p: GridPoint) -> Option<usize> {
        (p.x.abs() <= HALF && p.y.abs() <= HALF).then(|| (p.x + HALF) as usize * SIDE + (p.y + HALF) as usize)
    }

    fn contains(&self, p: GridPoint) -> bool {
        Self::index(p).is_some_and(|i| self.0[i])
    }

    fn set(&mut self, p: GridPoint, value: bool) {
        if let Some(i) = Self::index(p) {
            self.0[i] = value;
        }
    }

    fn extend(&mut self, pts: impl IntoIterator<Item = GridPoint>) {
        for p in pts {
            self.set(p, true);
        }
    }
}

/// Fewest-bend, then shortest, lattice route inside the square.
fn route_local(
    port: GridPoint,
    inward: Dir,
    targets: &[(GridPoint, Dir)],
    blocked: &Occupancy,
    max_bends: u32,
) -> Option<LocalRoute> {
    let inside = |p: GridPoint| p.x.abs() < HALF && p.y.abs() < HALF;
    let arrival = |p: GridPoint| targets.iter().find(|t| t.0 == p).map(|t| t.1.opposite());
    let state = |p: GridPoint, d: Dir| Occupancy::index(p).map(|i| i * 4 + d.index());
    let mut best: Vec<(u32, i64)> = vec![(u32::MAX, i64::MAX); SIDE * SIDE * 4];
    let mut prev: Vec<Option<(GridPoint, Dir)>> = vec![None; SIDE * SIDE * 4];
    let mut heap = BinaryHeap::new();
    best[state(port, inward)?] = (0, 0);
    heap.push(Reverse((0u32, 0i64, port, inward)));
    while let Some(Reverse((b, len, p, d))) = heap.pop() {
        if best[state(p, d)?] != (b, len) {
            continue;
        }
        let here = arrival(p);
        if here == Some(d) {
            let mut cells = vec![p];
            let mut cur = (p, d);
            while let Some(q) = prev[state(cur.0, cur.1)?] {
                cells.push(q.0);
                cur = q;
            }
            cells.reverse();
            return Some(LocalRoute { cells, bends: b });
        }
        if here.is_some() && p != port {
            continue;
        }
        for nd in [d, d.rotate_ccw(), d.rotate_cw()] {
            let nb = b + u32::from(nd != d);
            if nb > max_bends {
                continue;
            }
            let q = step(p, nd, 1);
            let target_ok = arrival(q) == Some(nd);
            if !target_ok && (!inside(q) || blocked.contains(q)) {
                continue;
            }
            let Some(key) = state(q, nd) else { continue };
            let cand = (nb, len + 1);
            if cand < best[key] {
                best[key] = cand;
                prev[key] = Some((p, d));
                heap.push(Reverse((nb, len + 1, q, nd)));
            }
        }
    }
    None
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for i in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(i, n - 1);
            out.push(p);
        }
    }
    out.sort();
    out
}

/// Routes every request inside the gadget, trying each routing order; only results scoring
/// below `beat` are returned.
fn route_gadget(g: &LocalGadget, requests: &[Request], beat: (u32, u32)) -> Option<(Vec<LocalRoute>, (u32, u32))> {
    let mut base = Occupancy::new();
    for (_, s) in &g.paths {
        base.extend(lattice_of(s));
    }
    for r in requests {
        let t = &g.terminals[&r.terminal];
        if let Some(b) = &t.bridge {
            base.extend(lattice_of(b));
        }
    }
    for r in requests {
        base.set(step(pt(0, 0), r.port, HALF), true);
    }
    let mut best: Option<(Vec<LocalRoute>, (u32, u32))> = None;
    let mut bound = beat;
    for order in permutations(requests.len()) {
        let mut blocked = base.clone();
        let mut routes: Vec<Option<LocalRoute>> = vec![None; requests.len()];
        let mut ok = true;
        for &k in &order {
            let r = &requests[k];
            let port = step(pt(0, 0), r.port, HALF);
            blocked.set(port, false);
            let t = &g.terminals[&r.terminal];
            let cap = r.max_bends.min(bound.0);
            let found = route_local(port, r.port.opposite(), &t.options, &blocked, cap);
            blocked.set(port, true);
            match found {
                Some(route) => {
                    blocked.extend(route.cells.iter().copied());
                    routes[k] = Some(route);
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let routes: Vec<LocalRoute> = routes.into_iter().map(Option::unwrap).collect();
        let score = (
            routes.iter().map(|r| r.bends).max().unwrap_or(0),
            routes.iter().map(|r| r.bends).sum(),
        );
        if score < bound {
            bound = score;
            best = Some((routes, score));
        }
    }
    best
}

/// A gadget square after layout: placed core paths, bridges in use and one local route per request.
struct PlacedGadget {
    gadget: LocalGadget,
    routes: BTreeMap<String, LocalRoute>,
}

fn place_gadget(candidates: Vec<LocalGadget>, requests: &[Request]) -> Option<PlacedGadget> {
    let mut best: Option<(LocalGadget, Vec<LocalRoute>, (u32, u32))> = None;
    for base in candidates {
        for iso in Isometry::all_linear() {
            let g = base.transformed(iso, pt(0, 0));
            let beat = best.as_ref().map_or((u32::MAX, u32::MAX), |b| b.2);
            if let Some((routes, score)) = route_gadget(&g, requests, beat) {
                best = Some((g, routes, score));
            }
        }
    }
    let (gadget, routes, _) = best?;
    let routes = requests.iter().zip(routes).map(|(r, lr)| (r.edge.clone(), lr)).collect();
    Some(PlacedGadget { gadget, routes })
}

fn shifted(g: LocalGadget, offset: GridPoint) -> LocalGadget {
    g.transformed(Isometry::IDENTITY, offset)
}

fn to_global(center: GridPoint, p: GridPoint) -> GridPoint {
    pt(center.x * SCALE + p.x * U, center.y * SCALE + p.y * U)
}

fn port_dir(emb: &OrthogonalEmbedding, u: &str, v: &str) -> Dir {
    emb.route(u, v).expect("edge of H").end_direction(true).opposite()
}

/// Builds a CPG representation of `arts.graph` from a satisfying assignment and an
/// orthogonal embedding of the incidence graph.
pub fn build_reduction_rep(
    arts: &ReductionArtifacts,
    a: &Assignment,
    emb: &OrthogonalEmbedding,
) -> Result<Representation, SatReductionError> {
    let r = assign_r_values(arts, a)?;
    let f = &arts.formula;
    let h = incidence_graph(f);
    let report = validate_embedding(&h, emb);
    if !report.is_valid() {
        return Err(SatReductionError::PreconditionViolated(format!(
            "embedding of the incidence graph is invalid: {:?}",
            report.violations
        )));
    }
    let mut rep = Representation::cpg();
    let mut placed: BTreeMap<String, PlacedGadget> = BTreeMap::new();

    let mut candidates: BTreeMap<String, Vec<LocalGadget>> = BTreeMap::new();
    for x in &f.variables {
        let roles = if a[x] { TRUE_ROLES } else { FALSE_ROLES };
        let list = roles.iter().map(|ro| shifted(variable_core(x, *ro, &r), pt(2, 0))).collect();
        candidates.insert(variable_vertex(x), list);
    }
    for j in 1..=f.clauses.len() {
        let cj = clause_vertex(j);
        let zero = (1..=3).find(|k| r[&terminal_id(&(cj.clone(), k.to_string()))] == 0).expect("one zero per clause");
        let ones: Vec<usize> = (1..=3).filter(|&k| k != zero).collect();
        let orders = [[ones[0], ones[1], zero], [ones[1], ones[0], zero]];
        candidates.insert(cj, orders.iter().map(|o| shifted(clause_core(j, *o), pt(-1, 1))).collect());
    }

    // Local bends per (gadget, connector); lowered on whichever end bends more until every
    // connector fits its corner budget.
    let budget = |u: &str, v: &str| MAX_ROUTE_CORNERS.saturating_sub(emb.route(u, v).expect("edge of H").bends() as u32);
    let mut allow: BTreeMap<(String, String), u32> = BTreeMap::new();
    for (edge, c) in &arts.connector_index {
        let b = budget(&c.variable_terminal.0, &c.clause_terminal.0).min(3);
        allow.insert((c.variable_terminal.0.clone(), edge.clone()), b);
        allow.insert((c.clause_terminal.0.clone(), edge.clone()), b);
    }
    let mut dirty: BTreeSet<String> = candidates.keys().cloned().collect();
    while !dirty.is_empty() {
        for g in std::mem::take(&mut dirty) {
            let requests: Vec<Request> = arts
                .connector_index
                .iter()
                .filter_map(|(e, c)| {
                    let (mine, other) = if c.variable_terminal.0 == g {
                        (&c.variable_terminal, &c.clause_terminal)
                    } else if c.clause_terminal.0 == g {
                        (&c.clause_terminal, &c.variable_terminal)
                    } else {
                        return None;
                    };
                    Some(Request {
                        edge: e.clone(),
                        terminal: terminal_id(mine),
                        port: port_dir(emb, &g, &other.0),
                        max_bends: allow[&(g.clone(), e.clone())],
                    })
                })
                .collect();
            let pg = place_gadget(candidates[&g].clone(), &requests)
                .ok_or_else(|| SatReductionError::EmbeddingTooTight(format!("no local routing for {g}")))?;
            placed.insert(g, pg);
        }
        for (edge, c) in &arts.connector_index {
            let (vx, cj) = (&c.variable_terminal.0, &c.clause_terminal.0);
            let b = budget(vx, cj);
            let (lv, lc) = (placed[vx].routes[edge].bends, placed[cj].routes[edge].bends);
            if lv + lc > b {
                let (side, other) = if lv >= lc { (vx, lc) } else { (cj, lv) };
                allow.insert((side.clone(), edge.clone()), b.saturating_sub(other));
                dirty.insert(side.clone());
            }
        }
    }
    for (cj, tf) in &arts.false_terminators {
        let t = &placed[cj].gadget.terminals[&terminal_id(&tf.terminal)];
        let (p, exit) = t.options[0];
        let start = to_global(emb.vertex_points[cj], p);
        rep.insert(tf.label.clone(), path(&[start, step(start, exit, STUB)])?);
    }

    for g in placed.keys() {
        let c = emb.vertex_points[g];
        let pg = &placed[g];
        for (label, s) in &pg.gadget.paths {
            let pts: Vec<GridPoint> = s.iter().map(|&p| to_global(c, p)).collect();
            rep.insert(label.clone(), path(&pts)?);
        }
    }

    for (edge, conn) in &arts.connector_index {
        let (vx, cj) = (&conn.variable_terminal.0, &conn.clause_terminal.0);
        let (vt, ct) = (terminal_id(&conn.variable_terminal), terminal_id(&conn.clause_terminal));
        let from_variable = r[&vt] == 1;
        let (src, snk, src_t, snk_t) = if from_variable { (vx, cj, vt, ct) } else { (cj, vx, ct, vt) };
        let local = |g: &str| -> Vec<GridPoint> {
            let c = emb.vertex_points[g];
            placed[g].routes[edge].cells.iter().map(|&p| to_global(c, p)).collect()
        };
        let global = emb.route(src, snk).expect("edge of H").scaled(SCALE);
        let global = global.sub_path(HALF * U, global.length() - HALF * U);
        let mut pts: Vec<GridPoint> = local(src).into_iter().rev().collect();
        pts.extend_from_slice(global.seq());
        pts.extend(local(snk));
        let route = path(&pts)?;
        let sink_geom = &placed[snk.as_str()].gadget.terminals[&snk_t];
        debug_assert!(placed[src.as_str()].gadget.terminals[&src_t].one);
        let chain = chain_paths(&route, local(src).len() as i64 - 1, sink_geom.one)?;
        let labels = if from_variable { conn.labels.clone() } else { conn.labels.iter().rev().cloned().collect() };
        for (label, p) in labels.iter().zip(chain) {
            rep.insert(label.clone(), p);
        }
        if !sink_geom.one {
            let c = emb.vertex_points[snk.as_str()];
            let bridge: Vec<GridPoint> =
                sink_geom.bridge.as_ref().expect("zero terminal").iter().map(|&p| to_global(c, p)).collect();
            rep.insert(labels[6].clone(), path(&bridge)?);
        }
    }

    let eater = eater_bundle(arts.i);
    for (owner, _) in &arts.anchor_index {
        let p = rep.paths.get(owner).ok_or_else(|| {
            SatReductionError::EmbeddingTooTight(format!("no path laid out for {owner}"))
        })?;
        let (end, out) = (p.end(), p.end_direction(false));
        splice_eater(&mut rep, &eater, owner, end, out);
    }
    rep.refinement_level = 0;
    Ok(rep)
}

/// Cuts the connector route into the seven chain paths. `src_cells` is the number of
/// gadget-unit steps on the source side before the global part.
fn chain_paths(
    route: &GridPath,
    src_cells: i64,
    sink_one: bool,
) -> Result<Vec<GridPath>, SatReductionError> {
    let corners: Vec<GridPoint> = route.bend_points().to_vec();
    let n = if sink_one { 6 } else { 5 };
    let required: Vec<i64> = corners.iter().skip(1).map(|&c| route.position(c).unwrap()).collect();
    if required.len() > n {
        return Err(SatReductionError::EmbeddingTooTight(format!(
            "connector route has {} corners, room for {}",
            corners.len(),
            n + 1
        )));
    }
    let port_pos = src_cells * U;
    let base = corners.first().map(|&c| route.position(c).unwrap()).unwrap_or(0).max(port_pos);
    let mut ks: Vec<i64> = required.clone();
    ks.extend((0..(n - required.len()) as i64).map(|k| base + U / 2 + k * U));
    ks.sort_unstable();
    let corner_set: BTreeSet<i64> = required.iter().copied().collect();
    let kpts: Vec<GridPoint> = ks.iter().map(|&k| route.point_at(k)).collect();
    let stub_dir = |i: usize| -> Dir {
        let k = ks[i];
        if corner_set.contains(&k) {
            Dir::between(route.point_at(k - 1), kpts[i]).unwrap()
        } else {
            Dir::between(kpts[i], route.point_at(k + 1)).unwrap().rotate_ccw()
        }
    };
    let mut out = vec![route.sub_path(0, ks[0])];
    let end = route.end();
    for i in 0..n {
        let arm = step(kpts[i], stub_dir(i), STUB);
        out.push(if i + 1 < n {
            path(&[kpts[i + 1], kpts[i], arm])?
        } else if sink_one {
            path(&[arm, kpts[i], end])?
        } else {
            path(&[end, kpts[i], arm])?
        });
    }
    Ok(out)
}

/// Places a copy of the eater so that its anchor path meets `owner` exactly at `end`,
/// with the body beyond `end` in direction `out`.
fn splice_eater(rep: &mut Representation, eater: &GadgetBundle, owner: &str, end: GridPoint, out: Dir) {
    let anchor = &eater.anchors[0];
    let lin = Isometry::all_linear().find(|l| l.apply_dir(anchor.free_dir) == out.opposite()).expect("some rotation");
    let a = lin.linear(anchor.point);
    let iso = lin.with_shift(pt(end.x - a.x, end.y - a.y));
    for (l, p) in &eater.rep.paths {
        rep.insert(super::eater_label(owner, l), p.map(|q| iso.apply(q)));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::embed_orthogonal_with;
    use crate::representation::{derive_graph, validate};
    use crate::sat_reduction::{build_reduction_graph, example_formula, extract_assignment, terminal_r_value};
    use crate::solvers::SearchBudget;

    #[test]
    fn local_router_prefers_fewer_bends() {
        let target = [(pt(0, 5), Dir::South)];
        let r = route_local(pt(HALF, 0), Dir::West, &target, &Occupancy::new(), 3).unwrap();
        assert_eq!(r.bends, 1);
        assert_eq!(r.cells.first(), Some(&pt(HALF, 0)));
        assert_eq!(r.cells.len() as i64, HALF + 6);
        let mut blocked = Occupancy::new();
        blocked.set(pt(0, 2), true);
        let r = route_local(pt(HALF, 0), Dir::West, &target, &blocked, 3).unwrap();
        assert_eq!(r.bends, 3);
        assert!(route_local(pt(HALF, 0), Dir::West, &target, &blocked, 2).is_none());
        assert_eq!(r.cells[r.cells.len() - 2..], [pt(0, 4), pt(0, 5)]);
        assert!(!r.cells.contains(&pt(0, 2)));
    }

    #[test]
    fn eaters_fit_beside_a_stub() {
        for i in 1..=3 {
            let b = eater_bundle(i);
            let a = &b.anchors[0];
            assert!(b.rep.paths[&a.label].contains(a.point));
            let (lo, hi) = b.rep.bbox().unwrap();
            let reach = [a.point.x - lo.x, hi.x - a.point.x, a.point.y - lo.y, hi.y - a.point.y];
            assert!(reach.iter().all(|&d| d + STUB < U / 2), "{reach:?}");
        }
    }

    #[test]
    fn example_round_trip() {
        let f = example_formula();
        let h = incidence_graph(&f);
        let emb = embed_orthogonal_with(&h, 6, 2, &SearchBudget::default()).unwrap();
        let a: Assignment = [("x".to_string(), true), ("y".to_string(), false)].into();
        for i in 1..=3u8 {
            let arts = build_reduction_graph(&f, i).unwrap();
            let rep = build_reduction_rep(&arts, &a, &emb).unwrap();
            let report = validate(&rep);
            assert!(report.is_valid(), "{:?}", &report.violations[..report.violations.len().min(5)]);
            assert_eq!(rep.max_bends(), usize::from(i.max(1)));
            let derived = derive_graph(&rep).unwrap();
            assert_eq!(derived, arts.graph);
            let expected = assign_r_values(&arts, &a).unwrap();
            for (t, v) in &expected {
                assert_eq!(terminal_r_value(&rep, &arts, t).unwrap(), *v, "{t}");
            }
            let got = extract_assignment(&rep, &arts).unwrap();
            assert!(f.satisfied_by(&got));
        }
    }
}
