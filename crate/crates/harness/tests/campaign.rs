use std::collections::HashSet;

use formula_core::{parse_dimacs, write_dimacs, CnfFormula, Status, Verdict};
use harness::{
    corrupt, generate_random_3cnf, is_one_minimal, mutation_guard, probe_bounds, run_campaign, run_differential, shrink,
    CampaignConfig, ClaimResult, Corruption, DiffOptions, FindingKind, CLAIM_CYLINDER, CLAIM_FILTER, CLAIM_LIFTING,
    CLAIM_VERDICT,
};
use pivot_transform::{expand, fixtures};

fn small(instances: usize) -> CampaignConfig {
    CampaignConfig {
        seed: 11,
        instances,
        max_atoms: 7,
        max_clauses: 20,
        ..CampaignConfig::default()
    }
}

#[test]
fn golden_formula_for_a_fixed_seed() {
    let cfg = CampaignConfig {
        min_atoms: 5,
        max_atoms: 5,
        min_clauses: 10,
        max_clauses: 10,
        ..CampaignConfig::default()
    };
    let f = generate_random_3cnf(&cfg, 7).unwrap();
    let golden = include_str!("golden/seed7_5x10.cnf");
    assert_eq!(write_dimacs(&f), golden);
    assert_eq!(parse_dimacs(golden.as_bytes()).unwrap(), f);
}

#[test]
fn generated_formulas_are_duplicate_free_3cnf() {
    let cfg = CampaignConfig {
        min_atoms: 3,
        max_atoms: 6,
        min_clauses: 0,
        max_clauses: 40,
        ..CampaignConfig::default()
    };
    for seed in 0..300 {
        let f = generate_random_3cnf(&cfg, seed).unwrap();
        assert!((3..=6).contains(&f.num_atoms()));
        let mut seen = HashSet::new();
        for c in f.clauses() {
            assert_eq!(c.len(), 3);
            let atoms: HashSet<u32> = c.literals().iter().map(|l| l.atom()).collect();
            assert_eq!(atoms.len(), 3);
            assert!(seen.insert(c.clone()), "duplicate clause in seed {seed}");
        }
    }
    let empty = CampaignConfig {
        min_clauses: 0,
        max_clauses: 0,
        ..CampaignConfig::default()
    };
    assert_eq!(generate_random_3cnf(&empty, 3).unwrap().num_clauses(), 0);
    let impossible = CampaignConfig {
        min_atoms: 3,
        max_atoms: 3,
        min_clauses: 9,
        max_clauses: 9,
        ..CampaignConfig::default()
    };
    assert!(generate_random_3cnf(&impossible, 0).is_err());
}

#[test]
fn fixture_and_trivial_instances() {
    let opts = DiffOptions::default();
    let d = nested::decide_pivoted(&fixtures::psi1(), &nested::DecideConfig::default());
    assert_eq!(d.verdict.status, Status::Unsat);

    // Re-pivoting the clause form puts everything under the single pivot x3. Each
    // closed digraph then has its own antichain while the formula is unsatisfiable, so
    // the pipeline disagrees with the oracle and the harness must say so.
    let psi1 = expand(&fixtures::psi1());
    let r = run_differential(&psi1, &opts);
    assert_eq!(r.oracle, Status::Unsat);
    if r.pipeline != Status::Unsat {
        assert_eq!(r.claim(CLAIM_VERDICT), ClaimResult::Fail);
        assert!(r.findings.iter().any(|f| f.kind == FindingKind::VerdictMismatch));
    }

    let contradiction = CnfFormula::from_dimacs_lists(3, &[&[1], &[-1]]);
    let r = run_differential(&contradiction, &opts);
    assert_eq!((r.oracle, r.pipeline), (Status::Unsat, Status::Unsat));
    assert!(r.findings.is_empty());
}

#[test]
fn corrupted_verdicts_become_findings() {
    let f = CnfFormula::from_dimacs_lists(3, &[&[1, 2, 3], &[-1, 2, -3]]);
    let opts = DiffOptions::default();
    let honest = run_differential(&f, &opts);
    assert!(honest.agrees() && honest.findings.is_empty());
    let oracle = formula_core::brute_force_sat(&f);
    for c in [Corruption::FlipStatus, Corruption::Abort, Corruption::BadWitness] {
        let bad = corrupt(&f, &oracle, c).unwrap();
        let (claims, findings) = harness::judge_verdict(&f, &oracle, &bad);
        assert!(!findings.is_empty() || claims.iter().any(|(_, r)| *r == ClaimResult::Fail), "{c:?}");
    }
    let unsat = Verdict::unsat(Default::default());
    assert!(corrupt(&f, &unsat, Corruption::BadWitness).is_none());
}

#[test]
fn mutation_guard_catches_everything() {
    let r = mutation_guard(&small(0), 60);
    assert_eq!(r.mutations, 60);
    assert_eq!(r.detected, 60);
    assert_eq!(r.by_kind.len(), 3);
}

#[test]
fn campaigns_are_reproducible_and_findings_minimal() {
    let cfg = small(300);
    let a = run_campaign(&cfg).unwrap();
    let b = run_campaign(&cfg).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.scoreboard_csv(), b.scoreboard_csv());
    let t = &a.totals;
    assert_eq!(t.instances, 300);
    assert_eq!(t.agreements + t.mismatches + t.aborts, t.instances);
    assert_eq!(a.outcomes.values().sum::<usize>(), t.instances);
    assert_eq!(a.bound_rows.len(), 3 * t.instances);
    let opts = DiffOptions::from(&cfg);
    for f in &a.findings {
        assert!(f.minimized.is_some());
        assert!(is_one_minimal(f, &opts), "{} {}", f.kind, f.claim);
        assert!(f.smallest().clauses().iter().all(|c| c.len() == 3));
        let again = shrink(f, &opts).unwrap();
        assert_eq!(again.minimized, f.minimized, "shrinking a minimal finding changes it");
    }
}

#[test]
fn shrinking_rejects_non_reproducing_findings() {
    let cfg = small(200);
    let report = run_campaign(&CampaignConfig { shrink: false, ..cfg.clone() }).unwrap();
    let Some(f) = report.findings.iter().find(|f| f.kind == FindingKind::VerdictMismatch) else {
        panic!("no mismatch in 200 instances");
    };
    let mut fake = f.clone();
    fake.instance = CnfFormula::from_dimacs_lists(3, &[&[1, 2, 3]]);
    assert!(shrink(&fake, &DiffOptions::from(&cfg)).is_err());
}

#[test]
fn bound_rows_for_tiny_and_fixture_instances() {
    let opts = DiffOptions::default();
    let tiny = CnfFormula::from_dimacs_lists(3, &[&[1, 2, 3]]);
    for row in probe_bounds(&tiny, &opts) {
        assert_ne!(row.status, ClaimResult::Fail, "{row:?}");
    }
    let rows = probe_bounds(&expand(&fixtures::psi2()), &opts);
    let claims: Vec<&str> = rows.iter().map(|r| r.claim.as_str()).collect();
    assert_eq!(claims, [CLAIM_CYLINDER, CLAIM_LIFTING, CLAIM_FILTER]);
    assert!(rows.iter().all(|r| r.status == ClaimResult::Pass), "{rows:?}");
    let lifting = &rows[1];
    assert!(lifting.measured > 0 && lifting.linear_ratio.is_some());
}

#[test]
fn aborts_line_up_with_failing_bound_rows() {
    let cfg = CampaignConfig {
        budget_scale: 0.01,
        shrink: false,
        ..small(300)
    };
    let report = run_campaign(&cfg).unwrap();
    assert!(report.totals.aborts > 0, "budget scale too generous to test aborts");
    for row in &report.instances {
        let failing: Vec<_> = report
            .bound_rows
            .iter()
            .filter(|b| b.index == Some(row.index) && b.status == ClaimResult::Fail)
            .collect();
        assert_eq!(row.pipeline == Status::Abort, failing.len() == 1, "instance {}", row.index);
    }
}
