use std::collections::BTreeMap;

use formula_core::{brute_force_sat_with_cap, evaluate, CnfFormula, Status, Valuation, Verdict};
use nested::{decide, DecideConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{generate_random_3cnf, instance_seeds, judge_verdict, CampaignConfig, ClaimResult, DiffOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Corruption {
    /// SAT becomes UNSAT and the reverse.
    FlipStatus,
    /// The verdict is replaced by an ABORT.
    Abort,
    /// A SAT verdict keeps its status but carries a valuation that is not a model.
    BadWitness,
}

/// Applies `c` to `v`. `None` when the corruption does not apply (a bad witness needs a
/// SAT verdict and a formula some valuation falsifies).
pub fn corrupt(f: &CnfFormula, v: &Verdict, c: Corruption) -> Option<Verdict> {
    let mut out = v.clone();
    match c {
        Corruption::FlipStatus => {
            out.status = match v.status {
                Status::Sat => Status::Unsat,
                Status::Unsat => Status::Sat,
                Status::Abort => return None,
            };
            out.witness = None;
        }
        Corruption::Abort => {
            out.status = Status::Abort;
            out.witness = None;
            out.abort_reason = Some("injected".into());
        }
        Corruption::BadWitness => {
            if v.status != Status::Sat {
                return None;
            }
            let n = f.num_atoms();
            out.witness = (0..1u64 << n.min(20))
                .map(|bits| Valuation::from_bits(n, bits))
                .find(|w| !evaluate(f, w).unwrap_or(true));
            out.witness.as_ref()?;
        }
    }
    Some(out)
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct MutationReport {
    pub mutations: usize,
    pub detected: usize,
    /// `(applied, detected)` per corruption.
    pub by_kind: BTreeMap<String, (usize, usize)>,
}

impl MutationReport {
    pub fn rate(&self) -> f64 {
        if self.mutations == 0 {
            return 0.0;
        }
        self.detected as f64 / self.mutations as f64
    }
}

/// Corrupts the pipeline verdict of `count` agreeing campaign instances with seeded
/// corruptions and counts how many the verdict judge flags.
pub fn mutation_guard(cfg: &CampaignConfig, count: usize) -> MutationReport {
    let opts = DiffOptions::from(cfg);
    let dcfg = DecideConfig {
        combine: opts.combine,
        budget_scale: opts.budget_scale,
        witness: true,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x6d75_7461_7465);
    let mut report = MutationReport::default();
    let kinds = [Corruption::FlipStatus, Corruption::Abort, Corruption::BadWitness];
    let mut index = 0;
    let mut seeds = Vec::new();
    while report.mutations < count {
        if index == seeds.len() {
            seeds = instance_seeds(cfg.seed, seeds.len() * 2 + count);
        }
        let f = generate_random_3cnf(cfg, seeds[index]).expect("validated config");
        index += 1;
        let oracle = brute_force_sat_with_cap(&f, opts.oracle_cap);
        let pipeline = decide(&f, &dcfg).verdict;
        let (claims, findings) = judge_verdict(&f, &oracle, &pipeline);
        if !findings.is_empty() || claims.iter().any(|(_, r)| *r == ClaimResult::Fail) {
            continue;
        }
        let start = rng.gen_range(0..kinds.len());
        let Some((kind, bad)) = (0..kinds.len())
            .map(|k| kinds[(start + k) % kinds.len()])
            .find_map(|k| corrupt(&f, &pipeline, k).map(|v| (k, v)))
        else {
            continue;
        };
        let (claims, findings) = judge_verdict(&f, &oracle, &bad);
        let caught = !findings.is_empty() || claims.iter().any(|(_, r)| *r == ClaimResult::Fail);
        report.mutations += 1;
        let slot = report.by_kind.entry(format!("{kind:?}")).or_default();
        slot.0 += 1;
        if caught {
            report.detected += 1;
            slot.1 += 1;
        }
    }
    report
}
