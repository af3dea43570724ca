//! Reductions that turn a representation of an input graph into a representation of a
//! harder instance: independent set, clique cover and 3-colouring.

mod clique_cover;
mod coloring;
mod independent_set;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph_core::LabeledGraph;
use crate::representation::Representation;

pub use clique_cover::reduce_cc;
pub use coloring::reduce_3col;
pub use independent_set::{is_piece_label, lift_is_solution, project_is_solution, reduce_is, Piece};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionOutput {
    pub out_graph: LabeledGraph,
    pub out_rep: Representation,
    /// Output label to the input vertex or edge it stems from.
    pub vertex_map: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("embedding invalid: {0}")]
    EmbeddingInvalid(String),
}
