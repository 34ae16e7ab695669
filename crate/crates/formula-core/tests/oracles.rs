use formula_core::{
    brute_force_sat, evaluate, exhaustive_sat, parse_dimacs, solve_2sat, write_dimacs, Clause, CnfFormula, Literal,
    Status, Valuation,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn all_two_clauses(num_atoms: u32) -> Vec<Clause> {
    let lits: Vec<Literal> = (1..=num_atoms).flat_map(|a| [Literal::pos(a), Literal::neg(a)]).collect();
    let mut out: Vec<Clause> = lits.iter().map(|&l| Clause::new(&[l]).unwrap().unwrap()).collect();
    for i in 0..lits.len() {
        for j in i + 1..lits.len() {
            if let Some(c) = Clause::new(&[lits[i], lits[j]]).unwrap() {
                out.push(c);
            }
        }
    }
    out
}

fn subsets_up_to(pool: &[Clause], max: usize, start: usize, current: &mut Vec<Clause>, visit: &mut impl FnMut(&[Clause])) {
    visit(current);
    if current.len() == max {
        return;
    }
    for i in start..pool.len() {
        current.push(pool[i].clone());
        subsets_up_to(pool, max, i + 1, current, visit);
        current.pop();
    }
}

#[test]
fn two_sat_matches_both_oracles_on_every_small_family_member() {
    let pool = all_two_clauses(3);
    assert_eq!(pool.len(), 18);
    let mut checked = 0usize;
    subsets_up_to(&pool, 6, 0, &mut Vec::new(), &mut |clauses| {
        let f = CnfFormula::new(3, clauses.to_vec()).unwrap();
        let expected = exhaustive_sat(&f).is_some();
        let oracle = brute_force_sat(&f);
        let out = solve_2sat(&f).unwrap();
        assert_eq!(oracle.status == Status::Sat, expected, "oracle on {f}");
        assert_eq!(out.verdict.status == Status::Sat, expected, "2-SAT on {f}");
        match out.contradiction {
            Some(w) => assert!(w.replays(&f), "witness replay on {f}"),
            None => assert!(evaluate(&f, out.verdict.witness.as_ref().unwrap()).unwrap()),
        }
        checked += 1;
    });
    assert_eq!(checked, 31_180);
}

fn random_cnf(rng: &mut ChaCha8Rng, max_atoms: u32, max_len: usize, max_clauses: usize) -> CnfFormula {
    let n = rng.gen_range(1..=max_atoms);
    let m = rng.gen_range(0..=max_clauses);
    let lists: Vec<Vec<Literal>> = (0..m)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            (0..len)
                .map(|_| Literal::new(rng.gen_range(1..=n), rng.gen_bool(0.5)).unwrap())
                .collect()
        })
        .collect();
    CnfFormula::from_literal_lists(n, &lists).unwrap()
}

#[test]
fn two_sat_matches_oracle_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x2a7);
    for _ in 0..2_000 {
        let f = random_cnf(&mut rng, 12, 2, 30);
        let oracle = brute_force_sat(&f);
        let out = solve_2sat(&f).unwrap();
        assert_eq!(oracle.status, out.verdict.status, "{f}");
        if let Some(w) = out.contradiction {
            assert!(w.replays(&f));
        }
    }
}

#[test]
fn backtracking_oracle_matches_enumeration_on_three_cnf() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..1_000 {
        let f = random_cnf(&mut rng, 8, 3, 40);
        let v = brute_force_sat(&f);
        assert_eq!(v.status == Status::Sat, exhaustive_sat(&f).is_some(), "{f}");
        if let Some(w) = &v.witness {
            assert!(evaluate(&f, w).unwrap());
        }
    }
}

proptest! {
    #[test]
    fn evaluate_is_clausewise_conjunction(
        clauses in proptest::collection::vec(proptest::collection::vec((1u32..=6, any::<bool>()), 1..=3), 0..12),
        bits in 0u64..64,
    ) {
        let lists: Vec<Vec<Literal>> = clauses
            .iter()
            .map(|c| c.iter().map(|&(a, n)| Literal::new(a, n).unwrap()).collect())
            .collect();
        let f = CnfFormula::from_literal_lists(6, &lists).unwrap();
        let v = Valuation::from_bits(6, bits);
        let direct = lists.iter().all(|c| {
            let tautology = c.iter().any(|l| c.contains(&l.negate()));
            tautology || c.iter().any(|l| ((bits >> (l.atom() - 1)) & 1 == 1) != l.is_negated())
        });
        prop_assert_eq!(evaluate(&f, &v).unwrap(), direct);
    }

    #[test]
    fn dimacs_round_trip(
        clauses in proptest::collection::vec(proptest::collection::vec((1u32..=9, any::<bool>()), 1..=3), 0..15),
    ) {
        let lists: Vec<Vec<Literal>> = clauses
            .iter()
            .map(|c| c.iter().map(|&(a, n)| Literal::new(a, n).unwrap()).collect())
            .collect();
        let f = CnfFormula::from_literal_lists(9, &lists).unwrap();
        prop_assert_eq!(parse_dimacs(write_dimacs(&f).as_bytes()).unwrap(), f);
    }
}
