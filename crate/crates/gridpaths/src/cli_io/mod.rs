//! File formats, SVG output and the command-line surface.

#[cfg(feature = "cli")]
pub mod cli;
mod formats;
mod svg;

use thiserror::Error;

pub use formats::{
    read_dimacs, read_embedding, read_graph, read_representation, write_dimacs, write_embedding, write_graph,
    write_representation,
};
pub use svg::{render_embedding, render_representation, RenderOptions};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
