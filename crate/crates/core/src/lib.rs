//! Detection and resolution of build conflicts in three-way merges of Java
//! projects.

pub mod detect;
pub mod eval;
pub mod example;
pub mod graph_diff;
pub mod java;
pub mod merge;
pub mod peg;
pub mod pipeline;
pub mod resolution;
pub mod rules;
pub mod similarity;
pub mod tree_diff;
