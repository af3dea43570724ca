use std::collections::BTreeSet;

use super::{contact_points, derive_graph, refine, RepError, Representation};
use crate::graph_core::{is_triangle_free, max_degree, LabeledGraph};
use crate::grid_geom::{Dir, GridPath, GridPoint, Intersection, Isometry};

/// Mechanical check of the three normal-form properties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalFormReport {
    pub touch_at_most_once: bool,
    pub strict_containment_iff_cubic: bool,
    pub no_bend_contact: bool,
}

impl NormalFormReport {
    pub fn all(&self) -> bool {
        self.touch_at_most_once && self.strict_containment_iff_cubic && self.no_bend_contact
    }
}

pub fn normal_form_report(rep: &Representation) -> Result<NormalFormReport, RepError> {
    let g = derive_graph(rep)?;
    let touch_at_most_once = rep
        .touching_pairs()
        .iter()
        .all(|(_, _, x)| matches!(x, Intersection::Finite(s) if s.len() == 1));
    let strict_containment_iff_cubic = rep.paths.iter().all(|(l, p)| {
        let holds = rep
            .paths
            .iter()
            .any(|(m, q)| m != l && q.endpoints().iter().any(|&e| p.is_interior(e)));
        holds == (g.degree(l) == 3)
    });
    let at = contact_points(rep);
    let no_bend_contact = rep.paths.values().all(|p| p.bend_points().iter().all(|b| !at.contains_key(b)));
    Ok(NormalFormReport { touch_at_most_once, strict_containment_iff_cubic, no_bend_contact })
}

/// Positions along `p` of points shared with other paths.
fn contact_positions(rep: &Representation, label: &str) -> Vec<i64> {
    let p = &rep.paths[label];
    let mut out = BTreeSet::new();
    for (a, b, x) in rep.touching_pairs() {
        if a != label && b != label {
            continue;
        }
        if let Intersection::Finite(pts) = x {
            out.extend(pts.into_iter().filter_map(|q| p.position(q)));
        }
    }
    out.into_iter().collect()
}

/// Cuts `label` back from the endpoint `from` to its nearest contact point.
/// When that contact is the opposite endpoint, the whole first segment is dropped instead.
fn shorten_from(rep: &mut Representation, label: &str, from: GridPoint) -> Result<(), RepError> {
    let p = rep.paths[label].clone();
    let p = if p.start() == from { p } else { p.reversed() };
    let len = p.length();
    let nearest = contact_positions_on(rep, label, &p).into_iter().find(|&t| t > 0);
    let cut = match nearest {
        Some(t) if t < len => p.sub_path(t, len),
        _ => {
            if p.bends() == 0 {
                return Err(RepError::PreconditionViolated(format!("cannot shorten straight path {label}")));
            }
            let first = p.position(p.seq()[1]).unwrap();
            p.sub_path(first, len)
        }
    };
    rep.paths.insert(label.to_string(), cut);
    Ok(())
}

fn contact_positions_on(rep: &Representation, label: &str, oriented: &GridPath) -> Vec<i64> {
    let orig = &rep.paths[label];
    let len = orig.length();
    let flip = orig.start() != oriented.start();
    let mut v: Vec<i64> = contact_positions(rep, label).into_iter().map(|t| if flip { len - t } else { t }).collect();
    v.sort();
    v
}

fn double_touch(rep: &Representation) -> Option<(String, GridPoint)> {
    for (a, b, x) in rep.touching_pairs() {
        let Intersection::Finite(pts) = x else { continue };
        if pts.len() < 2 {
            continue;
        }
        let (pa, pb) = (&rep.paths[a], &rep.paths[b]);
        let a_in_b = pa.endpoints().iter().filter(|&&e| pb.contains(e)).count();
        let b_in_a = pb.endpoints().iter().filter(|&&e| pa.contains(e)).count();
        let (victim, path, other) = if a_in_b == 2 {
            (a, pa, pb)
        } else if b_in_a == 2 {
            (b, pb, pa)
        } else if a < b {
            (a, pa, pb)
        } else {
            (b, pb, pa)
        };
        let from = *path.endpoints().iter().find(|&&e| other.contains(e))?;
        return Some((victim.to_string(), from));
    }
    None
}

fn shorten_free_ends(rep: &mut Representation) -> Result<(), RepError> {
    let labels: Vec<String> = rep.paths.keys().cloned().collect();
    for l in labels {
        for at_start in [true, false] {
            let p = rep.paths[&l].clone();
            let e = if at_start { p.start() } else { p.end() };
            let others_touch = rep.paths.iter().any(|(m, q)| *m != l && q.contains(e));
            if others_touch {
                continue;
            }
            let oriented = if at_start { p.clone() } else { p.reversed() };
            let len = p.length();
            let nearest = contact_positions_on(rep, &l, &oriented).into_iter().find(|&t| t > 0);
            if let Some(t) = nearest {
                if t < len {
                    let cut = oriented.sub_path(t, len);
                    rep.paths.insert(l.clone(), if at_start { cut } else { cut.reversed() });
                }
            }
        }
    }
    Ok(())
}

/// A path touched at one of its bend points, with the touching path.
fn bend_touch(rep: &Representation) -> Option<(String, String, GridPoint)> {
    let at = contact_points(rep);
    for (l, p) in &rep.paths {
        for b in p.bend_points() {
            if let Some(labels) = at.get(b) {
                let other = labels.iter().find(|m| *m != l)?;
                return Some((l.clone(), other.clone(), *b));
            }
        }
    }
    None
}

fn neighbour_dirs(p: &GridPath, q: GridPoint) -> Vec<Dir> {
    let s = p.seq();
    let mut out = Vec::new();
    for w in s.windows(2) {
        if w[0] == q {
            out.push(Dir::between(w[0], w[1]).unwrap());
        }
        if w[1] == q {
            out.push(Dir::between(w[1], w[0]).unwrap());
        }
    }
    out
}

/// Moves the touching path off the bend by shifting the half-column below it one unit aside.
fn resolve_bend_touch(rep: &Representation, bent: &str, toucher: &str, b: GridPoint) -> Result<Representation, RepError> {
    let arms = neighbour_dirs(&rep.paths[bent], b);
    let incoming = neighbour_dirs(&rep.paths[toucher], b);
    let (Some(&d_in), 2) = (incoming.first(), arms.len()) else {
        return Err(RepError::PreconditionViolated(format!("unexpected contact at {b}")));
    };
    let iso = Isometry::all_linear()
        .find(|t| {
            t.apply_dir(d_in) == Dir::South
                && arms.iter().map(|&d| t.apply_dir(d)).collect::<BTreeSet<_>>()
                    == [Dir::North, Dir::East].into_iter().collect()
        })
        .ok_or_else(|| RepError::PreconditionViolated(format!("touch at {b} uses a bend arm")))?;
    let inv = iso.inverse();
    let canon = rep.map_points(|p| iso.apply(p));
    let c = iso.apply(b);
    let mut out = canon.clone();
    for (l, p) in &canon.paths {
        let s = p.seq();
        let mut shift = vec![false; s.len()];
        for i in [0, s.len() - 1] {
            if s[i].x == c.x && s[i].y <= c.y {
                shift[i] = true;
            }
        }
        for i in 0..s.len() - 1 {
            if s[i].x == c.x && s[i + 1].x == c.x && s[i].y.max(s[i + 1].y) <= c.y {
                shift[i] = true;
                shift[i + 1] = true;
            }
        }
        if shift.iter().any(|&f| f) {
            let seq = s
                .iter()
                .zip(&shift)
                .map(|(&q, &f)| if f { GridPoint::new(q.x + 1, q.y) } else { q })
                .collect();
            let np = GridPath::new(seq)
                .map_err(|e| RepError::PreconditionViolated(format!("shift broke path {l}: {e}")))?;
            out.paths.insert(l.clone(), np);
        }
    }
    Ok(out.map_points(|p| inv.apply(p)))
}

/// Brings a representation of a subcubic triangle-free graph with at most one bend per path
/// into the normal form: single touches, strict containment exactly at cubic vertices, no bend contacts.
pub fn normalize_b01(g: &LabeledGraph, rep: &Representation) -> Result<Representation, RepError> {
    let bad = |m: &str| Err(RepError::PreconditionViolated(m.to_string()));
    if max_degree(g) > 3 {
        return bad("degree above 3");
    }
    if !is_triangle_free(g) {
        return bad("graph has a triangle");
    }
    if rep.max_bends() > 1 {
        return bad("a path has more than one bend");
    }
    let derived = derive_graph(rep).map_err(|e| RepError::PreconditionViolated(e.to_string()))?;
    if derived != *g {
        return bad("representation does not derive the graph");
    }
    let mut r = rep.clone();
    let mut guard = 4 * r.paths.len() + 4;
    while let Some((label, from)) = double_touch(&r) {
        shorten_from(&mut r, &label, from)?;
        guard -= 1;
        if guard == 0 {
            return bad("double touches do not resolve");
        }
    }
    shorten_free_ends(&mut r)?;
    r = refine(&r, 1);
    let mut guard = 4 * r.paths.len() + 4;
    while let Some((bent, toucher, b)) = bend_touch(&r) {
        if r.paths.values().any(|p| p.seq().iter().any(|q| q.x % 2 != 0 || q.y % 2 != 0)) {
            r = refine(&r, 1);
            continue;
        }
        r = resolve_bend_touch(&r, &bent, &toucher, b)?;
        guard -= 1;
        if guard == 0 {
            return bad("bend contacts do not resolve");
        }
    }
    if derive_graph(&r).ok().as_ref() != Some(g) {
        return Err(RepError::InvalidRepresentation("normalization changed the graph".into()));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid_geom::path_from_sequence;
    use crate::representation::Semantics;

    fn rep(items: &[(&str, &[(i64, i64)])]) -> Representation {
        Representation::with_paths(
            Semantics::Cpg,
            items.iter().map(|(l, s)| (*l, path_from_sequence(s).unwrap())),
        )
    }

    #[test]
    fn double_touch_is_removed() {
        // both ends of `a` lie on `b`
        let r = rep(&[("a", &[(0, 0), (0, 2), (2, 2)]), ("b", &[(-1, 0), (2, 0), (2, 3)])]);
        let g = derive_graph(&r).unwrap();
        let n = normalize_b01(&g, &r).unwrap();
        let Intersection::Finite(pts) = crate::grid_geom::path_intersection(&n.paths["a"], &n.paths["b"]) else {
            panic!()
        };
        assert_eq!(pts.len(), 1);
        assert!(normal_form_report(&n).unwrap().all());
    }

    #[test]
    fn bend_contact_is_moved() {
        let r = rep(&[("p", &[(0, 3), (0, 0), (3, 0)]), ("q", &[(0, -3), (0, 0)])]);
        let g = derive_graph(&r).unwrap();
        assert!(!normal_form_report(&r).unwrap().no_bend_contact);
        let n = normalize_b01(&g, &r).unwrap();
        assert_eq!(derive_graph(&n).unwrap(), g);
        assert!(normal_form_report(&n).unwrap().all());
    }

    #[test]
    fn every_orientation_of_a_bend_contact() {
        let base = rep(&[("p", &[(0, 3), (0, 0), (3, 0)]), ("q", &[(0, -3), (0, 0)])]);
        let alt = rep(&[("p", &[(0, 3), (0, 0), (3, 0)]), ("q", &[(-3, 0), (0, 0)])]);
        for r in [base, alt] {
            for iso in Isometry::all_linear() {
                let t = r.map_points(|p| iso.apply(p));
                let g = derive_graph(&t).unwrap();
                let n = normalize_b01(&g, &t).unwrap();
                assert!(normal_form_report(&n).unwrap().all(), "{iso:?}");
            }
        }
    }

    #[test]
    fn free_ends_are_trimmed() {
        let r = rep(&[
            ("a", &[(0, 0), (10, 0)]),
            ("b", &[(3, 0), (3, 4)]),
            ("c", &[(6, 0), (6, -4)]),
        ]);
        let g = derive_graph(&r).unwrap();
        let n = normalize_b01(&g, &r).unwrap();
        assert!(normal_form_report(&n).unwrap().all());
        assert_eq!(n.paths["a"].length(), 6);
    }

    #[test]
    fn rejects_triangles() {
        let r = rep(&[("1", &[(0, 0), (0, 2)]), ("2", &[(0, 0), (2, 0)]), ("3", &[(-2, 0), (0, 0)])]);
        let g = derive_graph(&r).unwrap();
        assert!(matches!(normalize_b01(&g, &r), Err(RepError::PreconditionViolated(_))));
    }
}
