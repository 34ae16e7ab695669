//! Nested digraphs and the layered search for compatible antichains over linearized
//! columns, plus the end-to-end decision procedure and exact brute-force counterparts.

mod antichain;
mod compat;
mod decide;
mod digraph;
mod lin;

use thiserror::Error;

pub use antichain::{
    closed_antichain_bruteforce, column_antichain_bruteforce, label_pivots, minimize_three_way, sigma_entries,
    tau_size, tau_tilde_member, three_way_check, ThreeWay,
};
pub use compat::{compatible, consistent};
pub use decide::{decide, decide_pivoted, witness_from_label, ClosedReport, Combine, DecideConfig, Decision};
pub use digraph::{filter_cap, max_nested, max_nested_bruteforce, valid_paths, NestedDigraph};
pub use lin::{lin_search, LinOutcome};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NestedError {
    #[error("nested filter blowup: {work} steps exceed the |V|^6 bound of {cap}")]
    FilterBlowup { work: u64, cap: u64 },
}
