use std::collections::BTreeMap;

use serde::Serialize;

use super::formula::{clause_vertex, validate_exactly3bounded, variable_vertex, Assignment, Formula};
use super::SatReductionError;
use crate::constructions::{build_end_eater, GadgetBundle};
use crate::graph_core::LabeledGraph;
use crate::grid_geom::{path_intersection, Intersection};
use crate::representation::{derive_graph, validate, Representation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
    Clause,
}

/// (gadget vertex of H, pair name): pairs are "bc", "da", "ab", "cd" or "1", "2", "3".
pub type TerminalKey = (String, String);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Terminal {
    pub labels: (String, String),
    pub polarity: Polarity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Connector {
    pub variable_terminal: TerminalKey,
    pub clause_terminal: TerminalKey,
    /// t_xc, t_1, ..., t_5, t_cx
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FalseTerminator {
    pub label: String,
    pub terminal: TerminalKey,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionArtifacts {
    #[serde(skip)]
    pub formula: Formula,
    #[serde(skip)]
    pub graph: LabeledGraph,
    pub i: u8,
    pub terminal_index: BTreeMap<String, Terminal>,
    /// (path that spends an end in an eater, anchor vertex of that eater copy)
    pub anchor_index: Vec<(String, String)>,
    /// keyed by the H-edge "V[x]|C[j]"
    pub connector_index: BTreeMap<String, Connector>,
    /// keyed by clause vertex
    pub false_terminators: BTreeMap<String, FalseTerminator>,
}

pub fn terminal_id(key: &TerminalKey) -> String {
    format!("{}:{}", key.0, key.1)
}

pub fn h_edge_id(x: &str, j: usize) -> String {
    format!("{}|{}", variable_vertex(x), clause_vertex(j))
}

pub fn eater_label(owner: &str, label: &str) -> String {
    format!("{owner}/E:{label}")
}

pub(crate) fn eater_bundle(i: u8) -> GadgetBundle {
    build_end_eater(i).expect("i in 1..=3")
}

pub(crate) const VAR_PAIRS: [(&str, Polarity); 4] =
    [("bc", Polarity::Positive), ("da", Polarity::Positive), ("ab", Polarity::Negative), ("cd", Polarity::Negative)];

pub(crate) fn var_label(x: &str, role: &str) -> String {
    format!("{}.{role}", variable_vertex(x))
}

pub(crate) fn clause_label(j: usize, role: &str) -> String {
    format!("{}.{role}", clause_vertex(j))
}

pub(crate) fn connector_labels(x: &str, j: usize) -> Vec<String> {
    let base = format!("L[{x},{j}]");
    let mut out = vec![format!("{base}.txc")];
    out.extend((1..=5).map(|k| format!("{base}.t{k}")));
    out.push(format!("{base}.tcx"));
    out
}

/// Assembles G_i(f) with one fresh E_i copy per end-eating attachment.
pub fn build_reduction_graph(f: &Formula, i: u8) -> Result<ReductionArtifacts, SatReductionError> {
    if !(1..=3).contains(&i) {
        return Err(SatReductionError::PreconditionViolated(format!("i = {i} is not 1, 2 or 3")));
    }
    let report = validate_exactly3bounded(f);
    if !report.is_valid() {
        return Err(SatReductionError::PreconditionViolated(format!("{:?}", report.issues)));
    }
    if let Some(j) = f.clauses.iter().position(|c| c.len() < 2) {
        return Err(SatReductionError::PreconditionViolated(format!("clause {} has fewer than two literals", j + 1)));
    }
    let eater = eater_bundle(i);
    let anchor = eater.anchors[0].label.clone();
    let mut g = LabeledGraph::new(format!("G{i}(phi)"));
    let mut arts = ReductionArtifacts {
        formula: f.clone(),
        graph: LabeledGraph::default(),
        i,
        terminal_index: BTreeMap::new(),
        anchor_index: Vec::new(),
        connector_index: BTreeMap::new(),
        false_terminators: BTreeMap::new(),
    };
    let eat = |g: &mut LabeledGraph, arts: &mut ReductionArtifacts, owner: &str| {
        let copy = eater.graph.relabeled(|l| eater_label(owner, l));
        g.absorb(&copy);
        let a = eater_label(owner, &anchor);
        g.add_edge(owner, &a).unwrap();
        arts.anchor_index.push((owner.to_string(), a));
    };

    for x in &f.variables {
        let l = |r: &str| var_label(x, r);
        for (u, v) in [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")] {
            g.add_edge(&l(u), &l(v)).unwrap();
            g.add_edge(&l("e"), &l(u)).unwrap();
        }
        for r in ["a", "b", "c", "d"] {
            eat(&mut g, &mut arts, &l(r));
        }
        for (pair, polarity) in VAR_PAIRS {
            let (u, v) = pair.split_at(1);
            arts.terminal_index.insert(
                terminal_id(&(variable_vertex(x), pair.to_string())),
                Terminal { labels: (l(u), l(v)), polarity },
            );
        }
    }
    for (j0, clause) in f.clauses.iter().enumerate() {
        let j = j0 + 1;
        let l = |r: &str| clause_label(j, r);
        for k in 1..=3 {
            let (p, q) = (l(&format!("p{k}")), l(&format!("q{k}")));
            g.add_edge(&l("o"), &p).unwrap();
            g.add_edge(&l("o"), &q).unwrap();
            g.add_edge(&p, &q).unwrap();
            eat(&mut g, &mut arts, &p);
            eat(&mut g, &mut arts, &q);
            arts.terminal_index.insert(
                terminal_id(&(clause_vertex(j), k.to_string())),
                Terminal { labels: (p, q), polarity: Polarity::Clause },
            );
        }
        if clause.len() == 2 {
            let tf = l("tf");
            let key = (clause_vertex(j), "3".to_string());
            for m in ["p3", "q3"] {
                g.add_edge(&tf, &l(m)).unwrap();
            }
            eat(&mut g, &mut arts, &tf);
            arts.false_terminators.insert(clause_vertex(j), FalseTerminator { label: tf, terminal: key });
        }
    }
    let mut next_pair: BTreeMap<(String, bool), usize> = BTreeMap::new();
    for (j0, clause) in f.clauses.iter().enumerate() {
        let j = j0 + 1;
        for (k, lit) in clause.iter().enumerate() {
            let slot = next_pair.entry((lit.var.clone(), lit.positive)).or_default();
            let pair = if lit.positive { ["bc", "da"][*slot] } else { ["ab", "cd"][*slot] };
            *slot += 1;
            let vt = (variable_vertex(&lit.var), pair.to_string());
            let ct = (clause_vertex(j), (k + 1).to_string());
            let labels = connector_labels(&lit.var, j);
            for w in labels.windows(2) {
                g.add_edge(&w[0], &w[1]).unwrap();
            }
            let (vl, cl) = (&arts.terminal_index[&terminal_id(&vt)].labels, &arts.terminal_index[&terminal_id(&ct)].labels);
            for m in [&vl.0, &vl.1] {
                g.add_edge(&labels[0], m).unwrap();
            }
            for m in [&cl.0, &cl.1] {
                g.add_edge(&labels[6], m).unwrap();
            }
            for t in &labels[1..6] {
                eat(&mut g, &mut arts, t);
            }
            arts.connector_index
                .insert(h_edge_id(&lit.var, j), Connector { variable_terminal: vt, clause_terminal: ct, labels });
        }
    }
    arts.graph = g;
    Ok(arts)
}

/// R-values realised by the builder: variable terminals follow the truth value, and in
/// every clause the first satisfied literal's terminal gets 0.
pub fn assign_r_values(arts: &ReductionArtifacts, a: &Assignment) -> Result<BTreeMap<String, u8>, SatReductionError> {
    let f = &arts.formula;
    if !f.variables.iter().all(|v| a.contains_key(v)) || !f.satisfied_by(a) {
        return Err(SatReductionError::AssignmentDoesNotSatisfy);
    }
    let mut out = BTreeMap::new();
    for x in &f.variables {
        for (pair, polarity) in VAR_PAIRS {
            let one = (polarity == Polarity::Positive) == a[x];
            out.insert(terminal_id(&(variable_vertex(x), pair.to_string())), u8::from(one));
        }
    }
    for (j0, clause) in f.clauses.iter().enumerate() {
        let chosen = clause.iter().position(|l| l.holds(a) == Some(true)).unwrap();
        for k in 0..3 {
            out.insert(terminal_id(&(clause_vertex(j0 + 1), (k + 1).to_string())), u8::from(k != chosen));
        }
    }
    Ok(out)
}

/// Evaluates the R-value definition on path geometry.
pub fn terminal_r_value(rep: &Representation, arts: &ReductionArtifacts, terminal: &str) -> Result<u8, SatReductionError> {
    let t = arts
        .terminal_index
        .get(terminal)
        .ok_or_else(|| SatReductionError::InvalidRepresentation(format!("unknown terminal {terminal}")))?;
    let get = |l: &str| {
        rep.paths.get(l).ok_or_else(|| SatReductionError::InvalidRepresentation(format!("missing path {l}")))
    };
    let (py, pz) = (get(&t.labels.0)?, get(&t.labels.1)?);
    let gadget = terminal.split(':').next().unwrap();
    let meet = match path_intersection(py, pz) {
        Intersection::Finite(pts) => pts,
        Intersection::Overlap => {
            return Err(SatReductionError::InvalidRepresentation(format!("{terminal}: paths overlap")))
        }
    };
    if t.polarity == Polarity::Clause {
        let o = get(&format!("{gadget}.o"))?;
        let zero = meet.iter().any(|&r| py.is_endpoint(r) && pz.is_endpoint(r) && o.is_interior(r));
        Ok(u8::from(!zero))
    } else {
        let e = get(&format!("{gadget}.e"))?;
        Ok(u8::from(meet.iter().any(|&r| !e.contains(r))))
    }
}

pub fn extract_assignment(rep: &Representation, arts: &ReductionArtifacts) -> Result<Assignment, SatReductionError> {
    if !validate(rep).is_valid() || derive_graph(rep).ok().as_ref() != Some(&arts.graph) {
        return Err(SatReductionError::InvalidRepresentation("not a CPG representation of the reduction graph".into()));
    }
    let mut out = Assignment::new();
    for x in &arts.formula.variables {
        let mut r = [0u8; 4];
        for (k, (pair, _)) in VAR_PAIRS.iter().enumerate() {
            r[k] = terminal_r_value(rep, arts, &terminal_id(&(variable_vertex(x), pair.to_string())))?;
        }
        let value = match r {
            [1, 1, 0, 0] => true,
            [0, 0, 1, 1] => false,
            other => return Err(SatReductionError::InconsistentRValues(format!("{x}: {other:?}"))),
        };
        out.insert(x.clone(), value);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sat_reduction::example_formula;

    #[test]
    fn example_graph_size() {
        let arts = build_reduction_graph(&example_formula(), 1).unwrap();
        assert_eq!(arts.graph.vertex_count(), 2 * (5 + 4 * 11) + 3 * (7 + 6 * 11) + 6 * (7 + 5 * 11) + 3 * (1 + 11));
        assert_eq!(arts.graph.vertex_count(), 725);
        for (owner, a) in &arts.anchor_index {
            assert!(arts.graph.has_edge(owner, a));
        }
        for t in arts.terminal_index.values() {
            assert!(arts.graph.has_edge(&t.labels.0, &t.labels.1));
        }
        let x_pairs: Vec<&str> = arts
            .connector_index
            .values()
            .filter(|c| c.variable_terminal.0 == "V[x]")
            .map(|c| c.variable_terminal.1.as_str())
            .collect();
        assert_eq!(x_pairs, vec!["bc", "da", "ab"]);
        let e2 = build_reduction_graph(&example_formula(), 2).unwrap();
        assert_eq!(e2.graph.vertex_count(), 2 * (5 + 4 * 18) + 3 * (7 + 6 * 18) + 6 * (7 + 5 * 18) + 3 * (1 + 18));
    }

    #[test]
    fn r_values_for_example() {
        let arts = build_reduction_graph(&example_formula(), 1).unwrap();
        let a: Assignment = [("x".to_string(), true), ("y".to_string(), false)].into();
        let r = assign_r_values(&arts, &a).unwrap();
        assert_eq!(r["V[x]:bc"], 1);
        assert_eq!(r["V[x]:da"], 1);
        assert_eq!(r["V[x]:ab"], 0);
        assert_eq!(r["V[y]:bc"], 0);
        for j in 1..=3 {
            let zeros = (1..=3).filter(|k| r[&format!("C[{j}]:{k}")] == 0).count();
            assert_eq!(zeros, 1);
        }
        for c in arts.connector_index.values() {
            assert!(r[&terminal_id(&c.variable_terminal)] + r[&terminal_id(&c.clause_terminal)] > 0);
        }
        let bad: Assignment = [("x".to_string(), false), ("y".to_string(), false)].into();
        assert_eq!(assign_r_values(&arts, &bad), Err(SatReductionError::AssignmentDoesNotSatisfy));
    }
}
