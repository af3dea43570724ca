//! Reduction from exactly-3-bounded planar SAT to CPG recognition.

mod assembly;
mod formula;
mod layout;

use thiserror::Error;

use crate::embedding::{embed_orthogonal_with, OrthogonalEmbedding};
use crate::representation::Representation;
use crate::solvers::SearchBudget;

pub use assembly::{
    assign_r_values, build_reduction_graph, eater_label, extract_assignment, h_edge_id, terminal_id,
    terminal_r_value, Connector, FalseTerminator, Polarity, ReductionArtifacts, Terminal, TerminalKey,
};
pub use formula::{
    clause_vertex, example_formula, incidence_graph, preprocess_formula, validate_exactly3bounded, variable_vertex,
    Assignment, BoundednessIssue, BoundednessReport, Formula, FormulaError, Literal,
};
pub use layout::build_reduction_rep;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SatReductionError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("assignment does not satisfy the formula")]
    AssignmentDoesNotSatisfy,
    #[error("embedding too tight: {0}")]
    EmbeddingTooTight(String),
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("inconsistent R-values: {0}")]
    InconsistentRValues(String),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

/// Embeddings of the incidence graph to try, one bend per edge before two, smaller boxes first.
pub fn incidence_embeddings<'a>(f: &Formula, budget: &'a SearchBudget) -> impl Iterator<Item = OrthogonalEmbedding> + 'a {
    let h = incidence_graph(f);
    let n = h.vertex_count() as i64;
    (1..=2usize)
        .flat_map(move |bends| (2..=n + 4).map(move |side| (bends, side)))
        .scan(Vec::<OrthogonalEmbedding>::new(), move |seen, (bends, side)| {
            let found = embed_orthogonal_with(&h, side, bends, budget).ok().filter(|e| !seen.contains(e));
            if let Some(e) = &found {
                seen.push(e.clone());
            }
            Some(found)
        })
        .flatten()
}

/// Lays out the reduction on the first incidence embedding, among at most `tries`, whose
/// connectors fit.
pub fn layout_reduction(
    arts: &ReductionArtifacts,
    a: &Assignment,
    budget: &SearchBudget,
    tries: usize,
) -> Result<(Representation, OrthogonalEmbedding), SatReductionError> {
    let mut last = SatReductionError::EmbeddingTooTight("incidence graph did not embed".into());
    for emb in incidence_embeddings(&arts.formula, budget).take(tries) {
        match build_reduction_rep(arts, a, &emb) {
            Ok(rep) => return Ok((rep, emb)),
            Err(e @ SatReductionError::EmbeddingTooTight(_)) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}
