//! Differential verification of the decision pipeline against exact oracles: random
//! instance generation, campaigns, counterexample shrinking, bound probes and the
//! property suites.

mod bounds;
mod campaign;
mod config;
mod differential;
mod generate;
mod mutation;
pub mod random;
mod shrink;
mod suites;

use thiserror::Error;

pub use bounds::{probe_bounds, probe_decision, BoundRow};
pub use campaign::{findings_of, run_campaign, CampaignReport, InstanceRow, ScoreRow, Totals};
pub use config::{CampaignConfig, Suite};
pub use differential::{
    judge_verdict, run_differential, ClaimResult, DiffOptions, Finding, FindingKey, FindingKind, InstanceResult,
    CLAIM_COLUMNS, CLAIM_CYLINDER, CLAIM_EQUISAT, CLAIM_FILTER, CLAIM_LIFTING, CLAIM_ORACLE, CLAIM_SEARCH,
    CLAIM_VERDICT, CLAIM_WITNESS,
};
pub use generate::{distinct_clauses, generate_random_3cnf, instance_seeds};
pub use mutation::{corrupt, mutation_guard, Corruption, MutationReport};
pub use shrink::{compact_atoms, is_one_minimal, reproduces, shrink};
pub use suites::{
    completion_suite, equisat_suite, nested_maximality_suite, structural_suite, three_way_suite, two_sat_suite,
    SuiteReport,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("config parse error: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("finding does not reproduce: {0}")]
    NotReproducing(String),
    #[error("strict mode: {0}")]
    Strict(String),
}
