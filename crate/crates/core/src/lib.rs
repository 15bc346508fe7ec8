//! Exact algorithms for MinPAC: choose a strongly connected spanning subgraph
//! of a weighted digraph minimizing the sum, over vertices, of the heaviest
//! chosen out-arc.

pub mod bounds;
pub mod exec;
pub mod fpt;
pub mod generators;
pub mod graph;
pub mod io;
pub mod kernel;
pub mod oracle;
