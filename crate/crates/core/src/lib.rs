#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cutspace;
pub mod dynamics;
mod error;
pub mod exhaustive;
pub mod generate;
pub mod graph;
pub mod heuristic;
pub mod linalg;
pub mod spectral;
pub mod stability;

pub use crate::cutspace::{CutSetVector, SpanningTree};
pub use crate::error::{Error, Result};
pub use crate::graph::{Component, Edge, Laplacian, WeightedGraph};
pub use crate::linalg::{eigen_sym, SpectralSummary, SquareMatrix};
pub use crate::spectral::{fiedler, Fiedler};
pub use crate::stability::{Jacobian2, LocalDynamics, StabilityVerdict};
