//! Plain CNF formulas with clauses of at most three literals, their truth
//! semantics, DIMACS I/O, an exact backtracking oracle, and a 2-SAT solver
//! that reports its refutations as a pair of forcing implication chains.

mod cnf;
mod dimacs;
mod literal;
mod oracle;
mod twosat;
mod verdict;

use thiserror::Error;

pub use cnf::{evaluate, CnfFormula, Valuation};
pub use dimacs::{parse_dimacs, write_dimacs};
pub use literal::{Clause, Literal};
pub use oracle::{brute_force_sat, brute_force_sat_with_cap, exhaustive_sat, DEFAULT_ORACLE_CAP};
pub use twosat::{solve_2sat, Contradiction, Implication, TwoSatOutcome};
pub use verdict::{Counters, Status, Verdict};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("atom ids start at 1")]
    ZeroAtom,
    #[error("literal {0} does not fit in an atom id")]
    AtomTooLarge(i64),
    #[error("empty clause")]
    EmptyClause,
    #[error("clause has {0} literals, at most 3 allowed")]
    ClauseTooLong(usize),
    #[error("atom {atom} exceeds declared atom count {num_atoms}")]
    AtomOutOfRange { atom: u32, num_atoms: u32 },
    #[error("valuation covers {given} atoms, formula needs {needed}")]
    PartialValuation { needed: u32, given: usize },
    #[error("2-SAT input contains a clause of length {0}")]
    NotTwoCnf(usize),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("internal error: {0}")]
    Internal(String),
}
