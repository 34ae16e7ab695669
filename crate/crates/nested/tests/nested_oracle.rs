use std::collections::BTreeSet;

use cylinder::{Label, LabeledDigraph};
use nested::{lin_search, max_nested, max_nested_bruteforce, minimize_three_way, three_way_check, valid_paths, NestedDigraph};
use pivot_transform::{Entry, Polarity};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_nested(rng: &mut ChaCha8Rng) -> NestedDigraph {
    let n = rng.gen_range(2..=10);
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

#[test]
fn max_nested_matches_path_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut nonempty = 0;
    for _ in 0..1_500 {
        let g = random_nested(&mut rng);
        let depth = rng.gen_range(1..=4);
        let (fast, _) = max_nested(&g, depth).unwrap();
        let slow = max_nested_bruteforce(&g, depth);
        assert_eq!(fast, slow, "depth {depth}: {g:?}");
        let before: BTreeSet<Vec<usize>> = valid_paths(&g, depth).into_iter().collect();
        let after: BTreeSet<Vec<usize>> = valid_paths(&fast, depth).into_iter().collect();
        assert_eq!(before, after, "maximality lost a path");
        let used: BTreeSet<(usize, usize)> = after.iter().flat_map(|p| p.windows(2).map(|w| (w[0], w[1]))).collect();
        let kept: BTreeSet<(usize, usize)> = fast.edges().map(|(u, v, _)| (u, v)).collect();
        assert_eq!(used, kept, "an output edge lies on no valid path");
        if !fast.is_empty() {
            nonempty += 1;
        }
    }
    assert!(nonempty > 300, "only {nonempty} non-empty results");
}

fn random_label(rng: &mut ChaCha8Rng, pivots: u32, max_len: usize) -> Label {
    let len = rng.gen_range(1..=max_len);
    (0..len)
        .map(|_| {
            let p = rng.gen_range(1..=pivots);
            Entry::new(p, if rng.gen_bool(0.5) { Polarity::Positive } else { Polarity::Negative })
        })
        .collect()
}

#[test]
fn layered_search_keeps_label_discipline() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..400 {
        let k = rng.gen_range(1..=6);
        let cols: Vec<Vec<Label>> = (0..k)
            .map(|_| (0..rng.gen_range(1..=4)).map(|_| random_label(&mut rng, 4, 2)).collect())
            .collect();
        let out = lin_search(&cols).unwrap();
        for (w, d) in &out.finals {
            assert!(d.respects_label_discipline(), "final digraph of {w}");
            assert!(d.edges().all(|(_, v, _)| out.column_of[v] < out.column_of[*w]));
        }
        if let Some(ids) = &out.antichain {
            assert_eq!(ids.len(), k);
        }
    }
}

fn random_closed_dag(rng: &mut ChaCha8Rng) -> LabeledDigraph<u32> {
    let n = rng.gen_range(2..=8);
    let mut g = LabeledDigraph::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.4) {
                g.add_edge(u, v, random_label(rng, 3, 3));
            }
        }
    }
    g
}

#[test]
fn three_statements_agree_on_random_closed_digraphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let (mut checked, mut blocked) = (0, 0);
    while checked < 600 {
        let g = random_closed_dag(&mut rng);
        if g.num_edges() == 0 {
            continue;
        }
        let r = three_way_check(&g, 100_000).unwrap();
        if !r.consistent() {
            let w = minimize_three_way(&g, 100_000);
            panic!("disagreement {r:?}; minimized witness: {:?}", w.edges().collect::<Vec<_>>());
        }
        checked += 1;
        if r.no_antichain {
            blocked += 1;
        }
    }
    assert!(blocked > 30 && blocked < 570, "{blocked} of {checked} without antichain");
}
