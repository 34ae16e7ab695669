use formula_core::{brute_force_sat, brute_force_sat_with_cap, evaluate, CnfFormula, Literal, Status};
use pivot_transform::{
    certify_equisat, complete, expand, fixtures, flip_entry_literal, parse_pcnf, pivoted_to_cnf, to_pivoted,
    write_pcnf, AtomOrigin,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CAP: u32 = 128;

fn random_3cnf(rng: &mut ChaCha8Rng, max_atoms: u32, max_clauses: usize) -> CnfFormula {
    let n = rng.gen_range(3..=max_atoms);
    let m = rng.gen_range(0..=max_clauses);
    let lists: Vec<Vec<Literal>> = (0..m)
        .map(|_| {
            let mut atoms: Vec<u32> = Vec::new();
            let len = if rng.gen_bool(0.8) { 3 } else { rng.gen_range(1..=2) };
            while atoms.len() < len {
                let a = rng.gen_range(1..=n);
                if !atoms.contains(&a) {
                    atoms.push(a);
                }
            }
            atoms.into_iter().map(|a| Literal::new(a, rng.gen_bool(0.5)).unwrap()).collect()
        })
        .collect();
    CnfFormula::from_literal_lists(n, &lists).unwrap()
}

#[test]
fn transform_preserves_satisfiability() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut sat, mut unsat) = (0, 0);
    for _ in 0..1_500 {
        let f = random_3cnf(&mut rng, 12, 70);
        let pf = to_pivoted(&f);
        let cert = certify_equisat(&f, &pf, CAP);
        assert!(cert.agree, "disagreement on {f}");
        let done = complete(&pf);
        let cert = certify_equisat(&f, &done, CAP);
        assert!(cert.agree, "completion disagreement on {f}");
        match cert.original_status {
            Status::Sat => sat += 1,
            _ => unsat += 1,
        }
    }
    assert!(sat > 100 && unsat > 100, "sample is lopsided: {sat} sat / {unsat} unsat");
}

#[test]
fn pivoted_models_restrict_to_models_of_the_input() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..500 {
        let f = random_3cnf(&mut rng, 10, 40);
        let cnf = pivoted_to_cnf(&complete(&to_pivoted(&f))).unwrap();
        let v = brute_force_sat_with_cap(&cnf, CAP);
        if let Some(w) = v.witness {
            assert!(evaluate(&f, &w.restrict(f.num_atoms())).unwrap(), "{f}");
        }
    }
}

#[test]
fn structural_invariants_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1_000 {
        let f = random_3cnf(&mut rng, 12, 60);
        let pf = to_pivoted(&f);
        let pivots: Vec<u32> = (1..=pf.m()).map(|i| pf.pivot_atom(i)).collect();
        for atom in pf.entry_atoms() {
            assert!(!pivots.contains(&atom), "pivot {atom} used as entry in {pf}");
        }
        for atom in 1..=f.num_atoms() {
            assert_eq!(pf.origin(atom), AtomOrigin::Original);
        }
        let done = complete(&pf);
        assert!(done.is_complete());
        assert_eq!(complete(&done), done);
        assert_eq!(done.m(), pf.m());
        assert_eq!(parse_pcnf(&write_pcnf(&done)).unwrap(), done);
        assert_eq!(parse_pcnf(&write_pcnf(&pf)).unwrap(), pf);
    }
}

#[test]
fn mutation_is_detected_at_least_sometimes() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut caught = 0;
    for seed in 0..300u64 {
        let f = random_3cnf(&mut rng, 8, 30);
        let pf = complete(&to_pivoted(&f));
        let Some(mutant) = flip_entry_literal(&pf, seed) else {
            continue;
        };
        if !certify_equisat(&f, &mutant, CAP).agree {
            caught += 1;
        }
    }
    assert!(caught > 0, "no single-literal corruption changed a verdict");
}

#[test]
fn fixtures_have_the_stated_verdicts() {
    let psi1 = pivoted_to_cnf(&fixtures::psi1()).unwrap();
    let psi2 = pivoted_to_cnf(&fixtures::psi2()).unwrap();
    let variant = pivoted_to_cnf(&fixtures::psi1_variant()).unwrap();
    assert_eq!(psi2.num_clauses(), 8);
    assert_eq!(brute_force_sat(&psi1).status, Status::Unsat);
    assert_eq!(brute_force_sat(&psi2).status, Status::Sat);
    assert_eq!(brute_force_sat(&variant).status, Status::Sat);
}

proptest! {
    #[test]
    fn completion_preserves_the_oracle_verdict(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_3cnf(&mut rng, 9, 35);
        let pf = to_pivoted(&f);
        let a = brute_force_sat_with_cap(&expand(&pf), CAP).status;
        let b = brute_force_sat_with_cap(&expand(&complete(&pf)), CAP).status;
        prop_assert_eq!(a, b);
    }
}
