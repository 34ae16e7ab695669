//! Seeded generators for the property suites.

use cylinder::{Label, LabeledDigraph};
use formula_core::{CnfFormula, Literal};
use nested::NestedDigraph;
use pivot_transform::{AtomOrigin, Entry, Pair, PivotedFormula, Polarity};
use rand::Rng;

fn distinct_atoms<R: Rng>(rng: &mut R, n: u32, len: usize) -> Vec<u32> {
    let mut atoms: Vec<u32> = Vec::with_capacity(len);
    while atoms.len() < len {
        let a = rng.gen_range(1..=n);
        if !atoms.contains(&a) {
            atoms.push(a);
        }
    }
    atoms
}

/// Clauses of one to `max_len` literals over distinct atoms.
pub fn random_cnf<R: Rng>(rng: &mut R, min_atoms: u32, max_atoms: u32, max_len: usize, max_clauses: usize) -> CnfFormula {
    let n = rng.gen_range(min_atoms..=max_atoms);
    let m = rng.gen_range(0..=max_clauses);
    let lists: Vec<Vec<Literal>> = (0..m)
        .map(|_| {
            let len = rng.gen_range(1..=max_len.min(n as usize));
            distinct_atoms(rng, n, len)
                .into_iter()
                .map(|a| Literal::new(a, rng.gen_bool(0.5)).expect("atom ≥ 1"))
                .collect()
        })
        .collect();
    CnfFormula::from_literal_lists(n, &lists).expect("valid literals")
}

/// A 3-CNF where most clauses have three literals and the rest one or two.
pub fn random_3cnf<R: Rng>(rng: &mut R, max_atoms: u32, max_clauses: usize) -> CnfFormula {
    let n = rng.gen_range(3..=max_atoms);
    let m = rng.gen_range(0..=max_clauses);
    let lists: Vec<Vec<Literal>> = (0..m)
        .map(|_| {
            let len = if rng.gen_bool(0.8) { 3 } else { rng.gen_range(1..=2) };
            distinct_atoms(rng, n, len)
                .into_iter()
                .map(|a| Literal::new(a, rng.gen_bool(0.5)).expect("atom ≥ 1"))
                .collect()
        })
        .collect();
    CnfFormula::from_literal_lists(n, &lists).expect("valid literals")
}

/// A pivoted formula with 1 to 4 pivots, up to 6 entry atoms and blocks mixing one- and
/// two-literal pairs.
pub fn random_pivoted<R: Rng>(rng: &mut R) -> PivotedFormula {
    let m = rng.gen_range(1..=4u32);
    let k = rng.gen_range(2..=6u32);
    let mut pivots = Vec::new();
    let block = |rng: &mut R| -> Vec<Pair> {
        (0..rng.gen_range(0..=4))
            .map(|_| {
                let lit = |rng: &mut R, a: u32| Literal::new(m + a, rng.gen_bool(0.5)).expect("atom ≥ 1");
                if rng.gen_bool(0.3) {
                    let a = rng.gen_range(1..=k);
                    Pair::one(lit(rng, a))
                } else {
                    let atoms = distinct_atoms(rng, k, 2);
                    Pair::two(lit(rng, atoms[0]), lit(rng, atoms[1]))
                }
            })
            .collect()
    };
    for i in 1..=m {
        let pos = block(rng);
        let neg = block(rng);
        pivots.push((i, pos, neg));
    }
    PivotedFormula::from_pivots(pivots, vec![AtomOrigin::Original; (m + k) as usize]).expect("well-formed blocks")
}

pub fn random_label<R: Rng>(rng: &mut R, pivots: u32, max_len: usize) -> Label {
    let mut l = Label::new();
    for _ in 0..rng.gen_range(1..=max_len) {
        let polarity = if rng.gen_bool(0.5) { Polarity::Positive } else { Polarity::Negative };
        l.insert(Entry::new(rng.gen_range(1..=pivots), polarity));
    }
    l
}

/// A DAG on `0..n` with edges from lower to higher ids and random non-empty labels.
pub fn random_labeled_dag<R: Rng>(rng: &mut R, max_vertices: u32, pivots: u32) -> LabeledDigraph<u32> {
    let n = rng.gen_range(2..=max_vertices);
    let density = rng.gen_range(0.25..0.55);
    let mut g = LabeledDigraph::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                g.add_edge(u, v, random_label(rng, pivots, 3));
            }
        }
    }
    g
}

/// A nested digraph on up to `max_vertices` vertices rooted at 0, with random vertex-set
/// labels that usually contain the edge target.
pub fn random_nested<R: Rng>(rng: &mut R, max_vertices: usize) -> NestedDigraph {
    let n = rng.gen_range(2..=max_vertices);
    let mut g = NestedDigraph::new(n, 0);
    let density = rng.gen_range(0.15..0.6);
    for u in 0..n {
        for v in 1..n {
            if u != v && rng.gen_bool(density) {
                let mut l = g.empty_set();
                if rng.gen_bool(0.9) {
                    l.insert(v);
                }
                for z in 1..n {
                    if rng.gen_bool(0.6) {
                        l.insert(z);
                    }
                }
                g.add_edge(u, v, l);
            }
        }
    }
    g
}
