//! The labeled implication digraph ("cylinder") of a complete pivoted formula, its loop-free
//! intervals, and the closed digraphs glued from them.

mod closed;
mod cylinder;
mod dot;
pub mod fixtures;
mod graph;

use thiserror::Error;

pub use closed::{build_closed_digraphs, chain_labels, chains, ClosedDigraph, ClosedVertex, Side};
pub use cylinder::{build_cylinder, interval, is_skew_symmetric, nec_literals, reachable_from, Interval};
pub use dot::{label_string, to_dot};
pub use graph::{Label, LabeledDigraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CylinderError {
    #[error("pivoted formula is not complete: one-literal pairs remain")]
    Incomplete,
    #[error("more than {0} chains")]
    ChainCap(usize),
    #[error("digraph has a cycle")]
    Cyclic,
}
