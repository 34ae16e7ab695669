use std::collections::BTreeSet;

use cylinder::{build_closed_digraphs, build_cylinder, chains, interval, is_skew_symmetric, Label, LabeledDigraph, Side};
use formula_core::{CnfFormula, Literal};
use pivot_transform::{complete, to_pivoted};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_digraph(rng: &mut ChaCha8Rng, n: u32) -> LabeledDigraph<u32> {
    let mut g = LabeledDigraph::new();
    for v in 0..n {
        g.add_vertex(v);
    }
    let density = rng.gen_range(0.1..0.5);
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(density) {
                g.add_edge(u, v, Label::new());
            }
        }
    }
    g
}

/// Same fixed point, computed on a boolean matrix with Warshall closure.
fn matrix_interval(g: &LabeledDigraph<u32>, n: u32, p: u32, q: u32) -> BTreeSet<(u32, u32)> {
    let n = n as usize;
    let (p, q) = (p as usize, q as usize);
    let mut adj = vec![vec![false; n]; n];
    for (u, v, _) in g.edges() {
        if *v as usize != p && *u as usize != q {
            adj[*u as usize][*v as usize] = true;
        }
    }
    let mut alive = vec![true; n];
    loop {
        let mut reach = adj.clone();
        for k in 0..n {
            for i in 0..n {
                if reach[i][k] {
                    for j in 0..n {
                        if reach[k][j] {
                            reach[i][j] = true;
                        }
                    }
                }
            }
        }
        if !reach[p][q] {
            return BTreeSet::new();
        }
        let mut changed = false;
        for v in 0..n {
            let keep = alive[v] && (v == p || reach[p][v]) && (v == q || reach[v][q]) && !reach[v][v];
            if alive[v] && !keep {
                alive[v] = false;
                changed = true;
                for w in 0..n {
                    adj[v][w] = false;
                    adj[w][v] = false;
                }
            }
        }
        if !changed {
            break;
        }
        if !alive[p] || !alive[q] {
            return BTreeSet::new();
        }
    }
    let mut out = BTreeSet::new();
    for u in 0..n {
        for v in 0..n {
            if adj[u][v] {
                out.insert((u as u32, v as u32));
            }
        }
    }
    out
}

#[test]
fn interval_matches_matrix_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut nonempty = 0;
    for _ in 0..2_000 {
        let n = rng.gen_range(2..=8);
        let g = random_digraph(&mut rng, n);
        let p = rng.gen_range(0..n);
        let q = rng.gen_range(0..n);
        let iv = interval(&g, &p, &q);
        let got: BTreeSet<(u32, u32)> = iv.graph.edges().map(|(u, v, _)| (*u, *v)).collect();
        let want = if p == q { BTreeSet::new() } else { matrix_interval(&g, n, p, q) };
        assert_eq!(got, want, "p={p} q={q} edges={:?}", g.edges().map(|(u, v, _)| (*u, *v)).collect::<Vec<_>>());
        if !got.is_empty() {
            nonempty += 1;
            assert!(iv.graph.is_acyclic());
            assert_eq!(iv.graph.tops(), vec![p]);
            assert_eq!(iv.graph.roots(), vec![q]);
        }
    }
    assert!(nonempty > 200, "only {nonempty} non-empty intervals");
}

#[test]
fn acyclic_restriction_loses_nothing() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..500 {
        let n = rng.gen_range(2..=8);
        let mut g = LabeledDigraph::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(0.4) {
                    g.add_edge(u, v, Label::new());
                }
            }
        }
        let iv = interval(&g, &0, &(n - 1));
        if iv.is_empty() {
            continue;
        }
        for (u, v, _) in g.edges() {
            let on_path = g.backward_closure(u).contains(&0) && g.forward_closure(v).contains(&(n - 1));
            assert_eq!(iv.graph.has_edge(u, v), on_path);
        }
    }
}

fn random_3cnf(rng: &mut ChaCha8Rng, max_atoms: u32, max_clauses: usize) -> CnfFormula {
    let n = rng.gen_range(3..=max_atoms);
    let m = rng.gen_range(1..=max_clauses);
    let lists: Vec<Vec<Literal>> = (0..m)
        .map(|_| {
            let mut atoms = Vec::new();
            while atoms.len() < 3 {
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
fn cylinders_are_skew_symmetric_and_closed_digraphs_are_well_formed() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut closed_seen = 0;
    for _ in 0..500 {
        let f = random_3cnf(&mut rng, 10, 30);
        let pf = complete(&to_pivoted(&f));
        let cyl = build_cylinder(&pf).unwrap();
        assert!(is_skew_symmetric(&cyl), "{pf}");
        let lits = cyl.num_vertices();
        assert!(cyl.num_edges() <= lits * lits);
        for c in build_closed_digraphs(&cyl) {
            closed_seen += 1;
            let a = c.nec.unwrap();
            assert!(c.graph.is_acyclic());
            assert!(c.num_edges() <= lits * lits);
            assert_eq!(c.graph.tops().len(), 1);
            assert_eq!(c.graph.roots().len(), 1);
            assert_eq!(c.graph.tops()[0].lit, a.negate());
            assert_eq!(c.graph.roots()[0].side, Side::Even);
            for (u, v, l) in c.graph.edges() {
                assert_eq!(cyl.label(&u.lit, &v.lit), Some(l));
            }
            for ch in chains(&c.graph, 10_000).unwrap_or_default() {
                assert!(ch.iter().any(|x| x.side == Side::Glue));
            }
        }
    }
    assert!(closed_seen > 50, "only {closed_seen} closed digraphs");
}
