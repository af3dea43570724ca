//! CPG/EPG semantics over a labelled family of grid paths.

mod normalize;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph_core::LabeledGraph;
use crate::grid_geom::{path_intersection, GridPath, GridPoint, Intersection};
use crate::solvers::{self, SearchBudget};

pub use normalize::{normal_form_report, normalize_b01, NormalFormReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    Cpg,
    Epg,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("representation has a 4-contact point at {0}")]
    FourContactPresent(GridPoint),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("search budget exceeded")]
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    pub semantics: Semantics,
    pub paths: BTreeMap<String, GridPath>,
    pub refinement_level: u32,
}

impl Representation {
    pub fn new(semantics: Semantics) -> Self {
        Representation { semantics, paths: BTreeMap::new(), refinement_level: 0 }
    }

    pub fn cpg() -> Self {
        Self::new(Semantics::Cpg)
    }

    pub fn with_paths<'a>(semantics: Semantics, paths: impl IntoIterator<Item = (&'a str, GridPath)>) -> Self {
        let mut r = Self::new(semantics);
        for (l, p) in paths {
            r.paths.insert(l.to_string(), p);
        }
        r
    }

    pub fn insert(&mut self, label: impl Into<String>, path: GridPath) {
        self.paths.insert(label.into(), path);
    }

    pub fn max_bends(&self) -> usize {
        self.paths.values().map(|p| p.bends()).max().unwrap_or(0)
    }

    pub fn bbox(&self) -> Option<(GridPoint, GridPoint)> {
        let mut it = self.paths.values().map(|p| p.bbox());
        let first = it.next()?;
        Some(it.fold(first, |(lo, hi), (a, b)| {
            (
                GridPoint::new(lo.x.min(a.x), lo.y.min(a.y)),
                GridPoint::new(hi.x.max(b.x), hi.y.max(b.y)),
            )
        }))
    }

    pub fn map_points(&self, f: impl Fn(GridPoint) -> GridPoint) -> Representation {
        Representation {
            semantics: self.semantics,
            paths: self.paths.iter().map(|(l, p)| (l.clone(), p.map(&f))).collect(),
            refinement_level: self.refinement_level,
        }
    }

    /// Label pairs whose bounding boxes meet, found by a sweep over x.
    pub fn candidate_pairs(&self) -> Vec<(&str, &str)> {
        let mut items: Vec<(&str, GridPoint, GridPoint)> =
            self.paths.iter().map(|(l, p)| {
                let (lo, hi) = p.bbox();
                (l.as_str(), lo, hi)
            }).collect();
        items.sort_by_key(|&(l, lo, _)| (lo.x, l));
        let mut out = Vec::new();
        for i in 0..items.len() {
            let (a, alo, ahi) = items[i];
            for &(b, blo, bhi) in &items[i + 1..] {
                if blo.x > ahi.x {
                    break;
                }
                if blo.y <= ahi.y && alo.y <= bhi.y {
                    out.push(if a < b { (a, b) } else { (b, a) });
                }
            }
        }
        out.sort();
        out
    }

    /// All pairwise intersections that are not empty.
    pub fn touching_pairs(&self) -> Vec<(&str, &str, Intersection)> {
        self.candidate_pairs()
            .into_iter()
            .filter_map(|(a, b)| {
                let x = path_intersection(&self.paths[a], &self.paths[b]);
                (!x.is_empty()).then_some((a, b, x))
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    Overlap,
    InteriorContact(GridPoint),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub a: String,
    pub b: String,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidityReport {
    pub violations: Vec<Violation>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate(rep: &Representation) -> ValidityReport {
    let mut report = ValidityReport::default();
    if rep.semantics == Semantics::Epg {
        return report;
    }
    for (a, b, x) in rep.touching_pairs() {
        let (pa, pb) = (&rep.paths[a], &rep.paths[b]);
        match x {
            Intersection::Overlap => report.violations.push(Violation {
                a: a.into(),
                b: b.into(),
                kind: ViolationKind::Overlap,
            }),
            Intersection::Finite(pts) => {
                for q in pts {
                    if pa.is_interior(q) && pb.is_interior(q) {
                        report.violations.push(Violation {
                            a: a.into(),
                            b: b.into(),
                            kind: ViolationKind::InteriorContact(q),
                        });
                    }
                }
            }
        }
    }
    report
}

fn require_valid(rep: &Representation) -> Result<(), RepError> {
    match validate(rep).violations.first() {
        None => Ok(()),
        Some(v) => Err(RepError::InvalidRepresentation(format!("{} and {}: {:?}", v.a, v.b, v.kind))),
    }
}

pub fn derive_graph(rep: &Representation) -> Result<LabeledGraph, RepError> {
    require_valid(rep)?;
    Ok(derive_unchecked(rep))
}

fn derive_unchecked(rep: &Representation) -> LabeledGraph {
    let mut g = LabeledGraph::new("derived");
    for l in rep.paths.keys() {
        g.add_vertex(l.clone());
    }
    for (a, b, x) in rep.touching_pairs() {
        let adjacent = match rep.semantics {
            Semantics::Cpg => true,
            Semantics::Epg => x == Intersection::Overlap,
        };
        if adjacent {
            g.add_edge(a, b).expect("distinct labels");
        }
    }
    g
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ContactClass {
    TwoContact,
    TypeIIa,
    TypeIIb,
    FourContact,
    /// Three paths meeting at a common endpoint.
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContactPoint {
    pub point: GridPoint,
    pub labels: BTreeSet<String>,
    pub class: ContactClass,
}

impl ContactPoint {
    pub fn multiplicity(&self) -> usize {
        self.labels.len()
    }
}

/// Weights are kept in halves so every value stays integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct HalfWeight {
    pub start: u32,
    pub end: u32,
}

impl HalfWeight {
    pub fn total(&self) -> u32 {
        self.start + self.end
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContactReport {
    pub contact_points: Vec<ContactPoint>,
    pub free_endpoints: Vec<(String, GridPoint)>,
    /// `None` under EPG semantics, where weights are undefined.
    pub weights: Option<BTreeMap<String, HalfWeight>>,
}

impl ContactReport {
    pub fn free_count(&self) -> usize {
        self.free_endpoints.len()
    }

    /// Twice the total weight.
    pub fn doubled_weight_sum(&self) -> Option<u32> {
        self.weights.as_ref().map(|w| w.values().map(HalfWeight::total).sum())
    }
}

/// Every lattice point lying on two or more paths, with the paths through it.
pub fn contact_points(rep: &Representation) -> BTreeMap<GridPoint, BTreeSet<String>> {
    let mut at: BTreeMap<GridPoint, BTreeSet<String>> = BTreeMap::new();
    for (a, b, x) in rep.touching_pairs() {
        if let Intersection::Finite(pts) = x {
            for q in pts {
                let e = at.entry(q).or_default();
                e.insert(a.to_string());
                e.insert(b.to_string());
            }
        }
    }
    at
}

fn classify_contact(rep: &Representation, q: GridPoint, labels: &BTreeSet<String>) -> ContactClass {
    match labels.len() {
        2 => ContactClass::TwoContact,
        3 => {
            let paths = labels.iter().map(|l| &rep.paths[l]);
            if paths.clone().any(|p| p.bend_points().contains(&q)) {
                ContactClass::TypeIIb
            } else if paths.clone().any(|p| p.is_interior(q)) {
                ContactClass::TypeIIa
            } else {
                ContactClass::Other
            }
        }
        _ => ContactClass::FourContact,
    }
}

pub fn contact_report(rep: &Representation) -> Result<ContactReport, RepError> {
    require_valid(rep)?;
    let at = contact_points(rep);
    let contact_points = at
        .iter()
        .map(|(&q, labels)| ContactPoint { point: q, labels: labels.clone(), class: classify_contact(rep, q, labels) })
        .collect();
    let mut free_endpoints = Vec::new();
    for (l, p) in &rep.paths {
        for q in p.endpoints() {
            if !at.contains_key(&q) {
                free_endpoints.push((l.clone(), q));
            }
        }
    }
    let weights = (rep.semantics == Semantics::Cpg).then(|| {
        rep.paths
            .iter()
            .map(|(l, p)| {
                let w = |q: GridPoint| -> u32 {
                    at.get(&q)
                        .into_iter()
                        .flatten()
                        .filter(|o| *o != l)
                        .map(|o| if rep.paths[o].is_interior(q) { 2 } else { 1 })
                        .sum()
                };
                (l.clone(), HalfWeight { start: w(p.start()), end: w(p.end()) })
            })
            .collect()
    });
    Ok(ContactReport { contact_points, free_endpoints, weights })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TriangleBound {
    pub max_packing: usize,
    pub bound: i64,
    pub holds: bool,
}

pub fn triangle_bound_check(rep: &Representation) -> Result<TriangleBound, RepError> {
    let report = contact_report(rep)?;
    if let Some(c) = report.contact_points.iter().find(|c| c.multiplicity() >= 4) {
        return Err(RepError::FourContactPresent(c.point));
    }
    let g = derive_unchecked(rep);
    let tri: Vec<&BTreeSet<String>> =
        report.contact_points.iter().filter(|c| c.multiplicity() == 3).map(|c| &c.labels).collect();
    let conflicts: Vec<Vec<usize>> = (0..tri.len())
        .map(|i| (0..tri.len()).filter(|&j| j != i && tri[i].intersection(tri[j]).count() >= 2).collect())
        .collect();
    let max_packing = solvers::mis_indexed(&conflicts, &SearchBudget::default())
        .map_err(|_| RepError::BudgetExceeded)?
        .len();
    let bound = g.edge_count() as i64 - 2 * g.vertex_count() as i64 + report.free_count() as i64;
    Ok(TriangleBound { max_packing, bound, holds: max_packing as i64 >= bound })
}

pub fn refine(rep: &Representation, times: u32) -> Representation {
    let k = 1i64 << times;
    let mut out = rep.map_points(|p| p.scale(k));
    out.refinement_level += times;
    out
}

pub fn point_label(q: GridPoint) -> String {
    format!("p({},{})", q.x, q.y)
}

/// Plane graph on contact points and free endpoints with one subdivision vertex per path portion.
pub fn contact_plane_graph(rep: &Representation) -> Result<LabeledGraph, RepError> {
    let report = contact_report(rep)?;
    let special: BTreeSet<GridPoint> = report
        .contact_points
        .iter()
        .map(|c| c.point)
        .chain(report.free_endpoints.iter().map(|&(_, q)| q))
        .collect();
    let mut g = LabeledGraph::new("contact-plane");
    for &q in &special {
        g.add_vertex(point_label(q));
    }
    for (l, p) in &rep.paths {
        let mut stops: Vec<(i64, GridPoint)> = special
            .iter()
            .filter_map(|&q| p.position(q).map(|t| (t, q)))
            .collect();
        stops.sort();
        for (k, w) in stops.windows(2).enumerate() {
            let mid = format!("seg:{l}#{k}");
            g.add_vertex(mid.clone());
            g.add_edge(&mid, &point_label(w[0].1)).expect("fresh vertex");
            g.add_edge(&mid, &point_label(w[1].1)).expect("fresh vertex");
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_core::complete_graph;
    use crate::grid_geom::path_from_sequence;

    fn rep(items: &[(&str, &[(i64, i64)])]) -> Representation {
        Representation::with_paths(
            Semantics::Cpg,
            items.iter().map(|(l, s)| (*l, path_from_sequence(s).unwrap())),
        )
    }

    fn three_star() -> Representation {
        rep(&[("1", &[(0, 0), (0, 2)]), ("2", &[(-2, 0), (2, 0)]), ("3", &[(0, -2), (0, 0)])])
    }

    #[test]
    fn crossing_is_invalid_cpg_but_fine_epg() {
        let mut r = rep(&[("a", &[(0, 0), (2, 0)]), ("b", &[(1, -1), (1, 1)])]);
        assert!(!validate(&r).is_valid());
        r.semantics = Semantics::Epg;
        assert!(validate(&r).is_valid());
        assert_eq!(derive_graph(&r).unwrap().edge_count(), 0);
        let o = rep(&[("a", &[(0, 0), (3, 0)]), ("b", &[(1, 0), (2, 0)])]);
        assert_eq!(validate(&o).violations[0].kind, ViolationKind::Overlap);
    }

    #[test]
    fn three_contact_gives_triangle() {
        let r = three_star();
        let g = derive_graph(&r).unwrap();
        assert_eq!(g.relabeled(|s| s.to_string()).edges(), complete_graph(3).edges());
        let c = contact_report(&r).unwrap();
        assert_eq!(c.contact_points.len(), 1);
        assert_eq!(c.contact_points[0].class, ContactClass::TypeIIa);
        assert_eq!(c.free_count(), 4);
    }

    #[test]
    fn isolated_path_stats() {
        let r = rep(&[("a", &[(0, 0), (0, 5)])]);
        let c = contact_report(&r).unwrap();
        assert_eq!(c.free_count(), 2);
        assert!(c.contact_points.is_empty());
        assert_eq!(c.doubled_weight_sum(), Some(0));
        let h = contact_plane_graph(&r).unwrap();
        assert_eq!((h.vertex_count(), h.edge_count()), (3, 2));
    }

    #[test]
    fn star_plane_graph() {
        let ends = rep(&[("a", &[(0, 0), (1, 0)]), ("b", &[(0, 0), (0, 1)]), ("c", &[(0, 0), (-1, 0)])]);
        let h = contact_plane_graph(&ends).unwrap();
        // 1 contact + 3 free ends + 3 portions
        assert_eq!((h.vertex_count(), h.edge_count()), (7, 6));
        let h = contact_plane_graph(&three_star()).unwrap();
        assert_eq!((h.vertex_count(), h.edge_count()), (9, 8));
    }

    #[test]
    fn weights_in_halves() {
        let r = three_star();
        let w = contact_report(&r).unwrap().weights.unwrap();
        // path 1 starts inside "2" and on the end of "3"
        assert_eq!(w["1"], HalfWeight { start: 2 + 1, end: 0 });
        assert_eq!(w["2"].total(), 0);
    }

    #[test]
    fn bend_contact_is_type_two_b() {
        let r = rep(&[
            ("a", &[(0, 2), (0, 0), (2, 0)]),
            ("b", &[(-2, 0), (0, 0)]),
            ("c", &[(0, -2), (0, 0)]),
        ]);
        let c = contact_report(&r).unwrap();
        assert_eq!(c.contact_points[0].class, ContactClass::TypeIIb);
        let t = rep(&[("a", &[(0, 0), (1, 0)]), ("b", &[(0, 0), (0, 1)]), ("c", &[(0, 0), (-1, 0)])]);
        assert_eq!(contact_report(&t).unwrap().contact_points[0].class, ContactClass::Other);
    }

    #[test]
    fn refine_scales() {
        let r = rep(&[("a", &[(0, 0), (1, 0)])]);
        let r2 = refine(&r, 1);
        assert_eq!(r2.paths["a"].seq(), &[GridPoint::new(0, 0), GridPoint::new(2, 0)]);
        assert_eq!(r2.refinement_level, 1);
        assert_eq!(refine(&r, 4).paths["a"].length(), 16);
    }

    #[test]
    fn four_contact_rejected_by_triangle_check() {
        let r = rep(&[
            ("a", &[(0, 0), (1, 0)]),
            ("b", &[(0, 0), (0, 1)]),
            ("c", &[(0, 0), (-1, 0)]),
            ("d", &[(0, 0), (0, -1)]),
        ]);
        assert!(matches!(triangle_bound_check(&r), Err(RepError::FourContactPresent(_))));
    }

    #[test]
    fn sweep_matches_all_pairs() {
        let r = three_star();
        assert_eq!(r.candidate_pairs().len(), 3);
    }
}
