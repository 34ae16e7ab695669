//! Pivoted 3-SAT: formulas of the form `⋀ᵢ (aᵢ ∨ Sᵢ) ∧ (¬aᵢ ∨ S'ᵢ)` where each `S` is a
//! conjunction of two-literal disjunctions over atoms that are never pivots.

mod certify;
mod entry;
pub mod fixtures;
mod model;
mod pcnf;
mod transform;

use thiserror::Error;

pub use certify::{certify_equisat, flip_entry_literal, TransformCertificate};
pub use entry::{Entry, Polarity};
pub use model::{AtomOrigin, Pair, PivotBlock, PivotedFormula};
pub use pcnf::{parse_pcnf, write_pcnf};
pub use transform::{complete, expand, pivoted_to_cnf, to_pivoted};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PivotError {
    #[error("pivoted formula is not complete: one-literal pairs remain")]
    Incomplete,
    #[error("atom {0} is both a pivot and an entry literal")]
    PivotInEntry(u32),
    #[error("malformed pivoted formula: {0}")]
    Malformed(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}
