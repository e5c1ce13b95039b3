//! Exact list coloring and choosability checks for complete multipartite graphs.

pub mod cache;
pub mod canon;
pub mod catalog;
pub mod colorset;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod io;
pub mod naive;
pub mod reduction;
pub mod solver;
pub mod strategy;
pub mod suites;
pub mod verifier;

pub use colorset::{Color, ColorSet, MAX_COLORS};
pub use error::{Error, Result};
pub use graph::{Coloring, Graph, ListAssignment, PartitionShape};
