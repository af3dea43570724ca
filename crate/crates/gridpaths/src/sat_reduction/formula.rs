use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::graph_core::LabeledGraph;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: String,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: &str) -> Self {
        Literal { var: var.to_string(), positive: true }
    }

    pub fn neg(var: &str) -> Self {
        Literal { var: var.to_string(), positive: false }
    }

    pub fn holds(&self, a: &Assignment) -> Option<bool> {
        a.get(&self.var).map(|&v| v == self.positive)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.var)
        } else {
            write!(f, "!{}", self.var)
        }
    }
}

pub type Assignment = BTreeMap<String, bool>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("clause {0} has more than three literals")]
    ClauseTooLong(usize),
    #[error("clause {0} mentions variable {1} twice")]
    RepeatedVariable(usize, String),
    #[error("clause {0} mentions undeclared variable {1}")]
    UnknownVariable(usize, String),
    #[error("variable {0} declared twice")]
    DuplicateVariable(String),
    #[error("clause {0} is empty")]
    EmptyClauseProduced(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Formula {
    pub variables: Vec<String>,
    pub clauses: Vec<Vec<Literal>>,
}

impl Formula {
    pub fn new(variables: &[&str], clauses: Vec<Vec<Literal>>) -> Self {
        Formula { variables: variables.iter().map(|s| s.to_string()).collect(), clauses }
    }

    /// Checks the structural invariants: at most three literals per clause, no repeated variable.
    pub fn check(&self) -> Result<(), FormulaError> {
        let mut seen = BTreeSet::new();
        for v in &self.variables {
            if !seen.insert(v) {
                return Err(FormulaError::DuplicateVariable(v.clone()));
            }
        }
        for (i, c) in self.clauses.iter().enumerate() {
            if c.len() > 3 {
                return Err(FormulaError::ClauseTooLong(i));
            }
            let mut in_clause = BTreeSet::new();
            for l in c {
                if !seen.contains(&l.var) {
                    return Err(FormulaError::UnknownVariable(i, l.var.clone()));
                }
                if !in_clause.insert(&l.var) {
                    return Err(FormulaError::RepeatedVariable(i, l.var.clone()));
                }
            }
        }
        Ok(())
    }

    pub fn satisfied_by(&self, a: &Assignment) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.holds(a) == Some(true)))
    }

    /// (positive, negative) occurrence counts.
    pub fn occurrences(&self, var: &str) -> (usize, usize) {
        let mut out = (0, 0);
        for l in self.clauses.iter().flatten().filter(|l| l.var == var) {
            if l.positive {
                out.0 += 1;
            } else {
                out.1 += 1;
            }
        }
        out
    }
}

/// Repeatedly fixes variables occurring with a single polarity (or not at all) and drops
/// the clauses they satisfy.
pub fn preprocess_formula(f: &Formula) -> Result<(Formula, Assignment), FormulaError> {
    f.check()?;
    if let Some(i) = f.clauses.iter().position(|c| c.is_empty()) {
        return Err(FormulaError::EmptyClauseProduced(i));
    }
    let mut out = f.clone();
    let mut forced = Assignment::new();
    loop {
        let pure = out.variables.iter().find_map(|v| match out.occurrences(v) {
            (_, 0) => Some((v.clone(), true)),
            (0, _) => Some((v.clone(), false)),
            _ => None,
        });
        let Some((v, value)) = pure else { break };
        out.clauses.retain(|c| !c.iter().any(|l| l.var == v));
        out.variables.retain(|w| *w != v);
        forced.insert(v, value);
    }
    Ok((out, forced))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundednessIssue {
    ClauseSize { clause: usize, len: usize },
    OccurrenceCount { var: String, count: usize },
    PolarityCount { var: String, positive: usize, negative: usize },
    Malformed(FormulaError),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BoundednessReport {
    pub issues: Vec<BoundednessIssue>,
}

impl BoundednessReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Clauses of one to three literals, every variable in exactly three clauses, at most two
/// occurrences of each polarity.
pub fn validate_exactly3bounded(f: &Formula) -> BoundednessReport {
    let mut issues = Vec::new();
    for (i, c) in f.clauses.iter().enumerate() {
        if c.is_empty() || c.len() > 3 {
            issues.push(BoundednessIssue::ClauseSize { clause: i, len: c.len() });
        }
    }
    if let Err(e) = f.check() {
        if !matches!(e, FormulaError::ClauseTooLong(_)) {
            issues.push(BoundednessIssue::Malformed(e));
        }
    }
    for v in &f.variables {
        let (positive, negative) = f.occurrences(v);
        if positive + negative != 3 {
            issues.push(BoundednessIssue::OccurrenceCount { var: v.clone(), count: positive + negative });
        }
        if positive > 2 || negative > 2 {
            issues.push(BoundednessIssue::PolarityCount { var: v.clone(), positive, negative });
        }
    }
    BoundednessReport { issues }
}

pub fn variable_vertex(x: &str) -> String {
    format!("V[{x}]")
}

/// Clause vertices are numbered from 1 in formula order.
pub fn clause_vertex(j: usize) -> String {
    format!("C[{j}]")
}

/// Bipartite variable/clause incidence graph.
pub fn incidence_graph(f: &Formula) -> LabeledGraph {
    let mut h = LabeledGraph::new("H");
    for v in &f.variables {
        h.add_vertex(variable_vertex(v));
    }
    for (j, c) in f.clauses.iter().enumerate() {
        let cv = clause_vertex(j + 1);
        h.add_vertex(cv.clone());
        for l in c {
            h.add_edge(&variable_vertex(&l.var), &cv).unwrap();
        }
    }
    h
}

/// x, y with clauses (x | y), (x | !y), (!x | !y).
pub fn example_formula() -> Formula {
    Formula::new(
        &["x", "y"],
        vec![
            vec![Literal::pos("x"), Literal::pos("y")],
            vec![Literal::pos("x"), Literal::neg("y")],
            vec![Literal::neg("x"), Literal::neg("y")],
        ],
    )
}
