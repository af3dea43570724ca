//! Named gadget graphs together with concrete path representations.

use crate::graph_core::LabeledGraph;
use crate::grid_geom::{path_from_sequence, Dir, GridPath, GridPoint};
use crate::representation::{refine, Representation};

/// A splice site: a point on the anchor vertex's path from which a straight ray
/// in `free_dir` leaves the bounding box without meeting any path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Anchor {
    pub label: String,
    pub point: GridPoint,
    pub free_dir: Dir,
    pub bbox: (GridPoint, GridPoint),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetBundle {
    pub graph: LabeledGraph,
    pub rep: Representation,
    pub anchors: Vec<Anchor>,
}

type Table<'a> = &'a [(&'a str, &'a [(i64, i64)])];

fn rep_from_table(table: Table) -> Representation {
    let mut rep = Representation::cpg();
    for (label, pts) in table {
        rep.insert(*label, path_from_sequence(pts).expect("table path"));
    }
    rep
}

fn bundle(graph: LabeledGraph, rep: Representation, anchor: (&str, (i64, i64), Dir)) -> GadgetBundle {
    let bbox = rep.bbox().expect("non-empty gadget");
    let (label, (x, y), free_dir) = anchor;
    GadgetBundle { graph, rep, anchors: vec![Anchor { label: label.to_string(), point: GridPoint::new(x, y), free_dir, bbox }] }
}

pub fn secondary_label(i: usize) -> String {
    format!("alpha{i}")
}

pub fn sewing_label(i: usize, j: usize) -> String {
    format!("u{i}.{j}")
}

/// The separator graph G_k: a, b, twenty secondary vertices, and for each consecutive
/// pair of secondaries a sewing path of k+2 vertices joined to both.
pub fn separator_graph(k: usize) -> LabeledGraph {
    let mut g = LabeledGraph::new(format!("G{k}"));
    g.add_edge("a", "b").unwrap();
    for i in 1..=20 {
        let al = secondary_label(i);
        g.add_edge("a", &al).unwrap();
        g.add_edge("b", &al).unwrap();
    }
    for i in 1..20 {
        for j in 1..=k + 2 {
            let u = sewing_label(i, j);
            g.add_edge(&secondary_label(i), &u).unwrap();
            g.add_edge(&secondary_label(i + 1), &u).unwrap();
            if j > 1 {
                g.add_edge(&sewing_label(i, j - 1), &u).unwrap();
            }
        }
    }
    g
}

/// Turn `m` of a staircase rising from `(s, h)`: east and north unit steps alternate.
fn stair(s: i64, h: i64, m: i64) -> GridPoint {
    GridPoint::new(s + (m + 1) / 2, h + m / 2)
}

/// G_k with a (k+1)-bend representation: nested staircases between a horizontal
/// P_a and a P_b closing them off, sewn together by unit zig-zags.
pub fn build_separator(k: usize) -> GadgetBundle {
    let kk = k as i64;
    let even = k.is_multiple_of(2);
    let (x_end, y_end) = if even { (23 + kk / 2, 22 + kk / 2) } else { (22 + (kk + 1) / 2, 23 + (kk - 1) / 2) };
    let mut rep = Representation::cpg();
    rep.insert("a", path_from_sequence(&[(1, 0), (x_end, 0)]).unwrap());
    let b = if even { vec![(x_end, 0), (x_end, y_end)] } else { vec![(x_end, 0), (x_end, y_end), (1, y_end)] };
    rep.insert("b", path_from_sequence(&b).unwrap());
    let corner = |i: i64| (1 + i, 22 - i);
    for i in 1..=20 {
        let (s, h) = corner(i);
        let mut seq = vec![GridPoint::new(s, 0)];
        seq.extend((0..=kk).map(|m| stair(s, h, m)));
        let last = stair(s, h, kk);
        seq.push(if even { GridPoint::new(x_end, last.y) } else { GridPoint::new(last.x, y_end) });
        rep.insert(secondary_label(i as usize), GridPath::new(seq).unwrap());
    }
    for i in 1..20 {
        let (s, h) = corner(i);
        let (s2, h2) = corner(i + 1);
        let zig = |j: i64| {
            if j == 0 {
                GridPoint::new(s, h - 1)
            } else if j % 2 == 1 {
                stair(s2, h2, j - 1)
            } else {
                stair(s, h, j - 1)
            }
        };
        for j in 1..=kk + 2 {
            let p = GridPath::new(vec![zig(j - 1), zig(j)]).unwrap();
            rep.insert(sewing_label(i as usize, j as usize), p);
        }
    }
    let graph = separator_graph(k);
    GadgetBundle { graph, rep, anchors: Vec::new() }
}

const GV_PATHS: Table = &[
    ("v", &[(0, 2), (3, 2)]),
    ("s", &[(2, 2), (2, 0), (4, 0)]),
    ("t", &[(2, 1), (3, 1), (3, 3)]),
    ("a", &[(1, 2), (1, 1), (2, 1)]),
    ("b", &[(4, 0), (4, 2), (3, 2)]),
    ("c", &[(2, 2), (2, 3), (3, 3)]),
];

fn gv_graph(prime: &str) -> LabeledGraph {
    let mut g = LabeledGraph::new("G(v)");
    let l = |x: &str| if x == "v" { x.to_string() } else { format!("{x}{prime}") };
    for (x, y) in [("v", "s"), ("s", "t"), ("t", "v")] {
        g.add_edge(&l(x), &l(y)).unwrap();
    }
    for x in ["a", "b", "c"] {
        for y in ["v", "s", "t"] {
            g.add_edge(&l(x), &l(y)).unwrap();
        }
    }
    g
}

/// G(v): a triangle v, s, t with three more vertices each adjacent to all of it.
/// Its representation leaves only the west end of P_v free.
pub fn build_gv() -> GadgetBundle {
    bundle(gv_graph(""), rep_from_table(GV_PATHS), ("v", (0, 2), Dir::West))
}

const E1_PATHS: Table = &[
    ("v", &[(-3, 2), (2, 2)]),
    ("s", &[(1, 2), (1, 0), (3, 0)]),
    ("t", &[(1, 1), (2, 1), (2, 3)]),
    ("a", &[(0, 2), (0, 1), (1, 1)]),
    ("b", &[(3, 0), (3, 2), (2, 2)]),
    ("c", &[(1, 2), (1, 3), (2, 3)]),
    ("s'", &[(-2, 2), (-2, 0), (-4, 0)]),
    ("t'", &[(-2, 1), (-3, 1), (-3, 3)]),
    ("a'", &[(-1, 2), (-1, 1), (-2, 1)]),
    ("b'", &[(-4, 0), (-4, 2), (-3, 2)]),
    ("c'", &[(-2, 2), (-2, 3), (-3, 3)]),
];

const E2_EDGE_WALK: &[u32] = &[
    1, 2, 3, 4, 8, 7, 6, 5, 1, 4, 2, 11, 3, 12, 4, 13, 7, 14, 6, 9, 5, 8, 6, 15, 14, 13, 8, 12, 13, 18, 7, 5, 10, 9, 1,
    10, 2, 16, 10, 11, 16, 15, 9, 14, 18, 15, 17, 18, 16, 17, 11, 12, 17, 3, 1,
];

const E2_PATHS: Table = &[
    ("1", &[(1, 5), (0, 5), (0, 2), (2, 2)]),
    ("2", &[(1, 5), (1, 3), (2, 3)]),
    ("3", &[(1, 5), (3, 5), (3, 4)]),
    ("4", &[(1, 5), (1, 6), (4, 6), (4, 4)]),
    ("5", &[(5, 1), (5, 0), (2, 0), (2, 2)]),
    ("6", &[(5, 1), (3, 1), (3, 2)]),
    ("7", &[(5, 1), (5, 3), (4, 3)]),
    ("8", &[(5, 1), (6, 1), (6, 4), (4, 4)]),
    ("9", &[(2, 2), (3, 2)]),
    ("10", &[(2, 2), (2, 3)]),
    ("11", &[(2, 3), (2, 4), (3, 4)]),
    ("12", &[(4, 4), (3, 4)]),
    ("13", &[(4, 4), (4, 3)]),
    ("14", &[(3, 2), (4, 2), (4, 3)]),
    ("15", &[(3, 3), (3, 2)]),
    ("16", &[(3, 3), (2, 3)]),
    ("17", &[(3, 3), (3, 4)]),
    ("18", &[(3, 3), (4, 3)]),
];

/// One copy of the planar piece of E3; `p` is "" or "'".
const E3_COPY_EDGES: &[(&str, &str)] = &[
    ("1", "2"), ("2", "3"), ("3", "4"), ("4", "5"), ("5", "1"),
    ("1", "c"), ("c", "2"), ("2", "f"), ("f", "3"), ("3", "e"),
    ("e", "4"), ("4", "b"), ("b", "5"), ("5", "a"), ("a", "1"),
    ("a", "c"), ("c", "f"), ("f", "e"), ("e", "b"), ("b", "a"),
    ("a", "d"), ("d", "b"), ("c", "d"), ("d", "e"), ("d", "f"),
];

const E3_CROSS_EDGES: &[(&str, &str)] = &[
    ("1'", "2"), ("1'", "3"), ("1'", "4"), ("1'", "5"), ("2'", "5"),
    ("2'", "1"), ("3'", "1"), ("4'", "1"), ("5'", "1"), ("5'", "2"),
];

const E3_PATHS: Table = &[
    ("1", &[(2, 10), (2, 8), (4, 8), (4, 10)]),
    ("2", &[(2, 8), (2, 2), (5, 2), (5, 4)]),
    ("3", &[(7, 7), (7, 8), (9, 8), (9, 3), (5, 3)]),
    ("4", &[(5, 8), (7, 8)]),
    ("5", &[(4, 8), (5, 8), (5, 9), (7, 9)]),
    ("a", &[(4, 8), (4, 5), (5, 5), (5, 7)]),
    ("b", &[(5, 8), (5, 7), (6, 7)]),
    ("c", &[(3, 8), (3, 4), (5, 4), (5, 5)]),
    ("d", &[(6, 7), (6, 6), (7, 6), (7, 5), (5, 5)]),
    ("e", &[(6, 8), (6, 7), (7, 7)]),
    ("f", &[(7, 6), (7, 7), (8, 7), (8, 4), (5, 4)]),
    ("1'", &[(7, 8), (7, 9), (10, 9), (10, 2), (5, 2)]),
    ("2'", &[(7, 9), (7, 10), (4, 10), (4, 11), (10, 11)]),
    ("3'", &[(4, 10), (2, 10), (2, 14), (11, 14), (11, 13)]),
    ("4'", &[(10, 1), (10, 0), (0, 0), (0, 10), (2, 10)]),
    ("5'", &[(10, 2), (10, 1), (1, 1), (1, 8), (2, 8)]),
    ("a'", &[(10, 2), (11, 2), (11, 11), (13, 11)]),
    ("b'", &[(10, 1), (13, 1), (13, 13), (12, 13)]),
    ("c'", &[(10, 9), (10, 11), (11, 11)]),
    ("d'", &[(11, 11), (11, 12), (12, 12), (12, 13)]),
    ("e'", &[(11, 13), (12, 13), (12, 15), (1, 15), (1, 10)]),
    ("f'", &[(10, 11), (10, 13), (11, 13), (11, 12)]),
];

pub fn e2_graph() -> LabeledGraph {
    let mut g = LabeledGraph::new("E2");
    for w in E2_EDGE_WALK.windows(2) {
        g.add_edge(&w[0].to_string(), &w[1].to_string()).unwrap();
    }
    g
}

pub fn e3_graph() -> LabeledGraph {
    let mut g = LabeledGraph::new("E3");
    for p in ["", "'"] {
        for (u, v) in E3_COPY_EDGES {
            g.add_edge(&format!("{u}{p}"), &format!("{v}{p}")).unwrap();
        }
    }
    for (u, v) in E3_CROSS_EDGES {
        g.add_edge(u, v).unwrap();
    }
    g
}

/// End-eating graph E_i with an i-bend representation without free endpoints.
///
/// E1 is stored refined once so that P_v has an unoccupied lattice point.
pub fn build_end_eater(i: u8) -> Option<GadgetBundle> {
    let b = match i {
        1 => {
            let mut g = gv_graph("");
            g.absorb(&gv_graph("'"));
            g.name = "E1".into();
            let rep = refine(&rep_from_table(E1_PATHS), 1);
            bundle(g, rep, ("v", (-1, 4), Dir::North))
        }
        2 => bundle(e2_graph(), rep_from_table(E2_PATHS), ("1", (0, 3), Dir::West)),
        3 => bundle(e3_graph(), rep_from_table(E3_PATHS), ("4'", (5, 0), Dir::South)),
        _ => return None,
    };
    Some(b)
}
