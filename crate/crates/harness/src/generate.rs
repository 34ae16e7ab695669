use std::collections::HashSet;

use formula_core::{CnfFormula, Literal};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{CampaignConfig, HarnessError};

/// Number of distinct clauses on three distinct atoms out of `n`.
pub fn distinct_clauses(n: u32) -> usize {
    let n = n as usize;
    if n < 3 {
        return 0;
    }
    8 * n * (n - 1) * (n - 2) / 6
}

/// Per-instance seeds, drawn in order from one stream seeded by `seed`.
pub fn instance_seeds(seed: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.next_u64()).collect()
}

/// A random 3-CNF: the atom count and clause count are uniform in the configured ranges,
/// then clauses are drawn uniformly (three distinct atoms, independent signs) without
/// repetition.
pub fn generate_random_3cnf(cfg: &CampaignConfig, seed: u64) -> Result<CnfFormula, HarnessError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(cfg.min_atoms..=cfg.max_atoms);
    let hi = cfg.max_clauses.min(distinct_clauses(n));
    let m = rng.gen_range(cfg.min_clauses..=hi);
    let mut seen = HashSet::new();
    let mut lists = Vec::with_capacity(m);
    while lists.len() < m {
        let mut atoms: Vec<u32> = rand::seq::index::sample(&mut rng, n as usize, 3)
            .into_iter()
            .map(|a| a as u32 + 1)
            .collect();
        atoms.sort_unstable();
        let clause: Vec<Literal> = atoms.into_iter().map(|a| Literal::new(a, rng.gen_bool(0.5)).expect("atom ≥ 1")).collect();
        if seen.insert(clause.clone()) {
            lists.push(clause);
        }
    }
    Ok(CnfFormula::from_literal_lists(n, &lists).expect("valid literals"))
}
