//! Dirichlet-Poincaré constants and profiles of finite subgraphs of
//! bounded-degree graphs.

pub mod cli;
pub mod error;
pub mod generators;
pub mod graph;
pub mod isoperimetry;
pub mod profiles;
pub mod solvers;
pub mod verify;

pub use error::{Error, Result};
