//! Contact and edge-intersection graphs of grid paths.

pub mod cli_io;
pub mod constructions;
pub mod embedding;
pub mod graph_core;
pub mod grid_geom;
pub mod np_reductions;
pub mod representation;
pub mod sat_reduction;
pub mod solvers;
