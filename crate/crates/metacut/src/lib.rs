//! File formats, report types, parallel drivers and the command-line front
//! end for `metacut-core`.

pub mod cli;
pub mod document;
pub mod dot;
pub mod parallel;
pub mod report;
pub mod trajectory;

pub use document::{parse_document, parse_network, DocError, Network, NetworkDocument};
pub use dot::emit_dot;
pub use trajectory::write_trajectory_csv;
