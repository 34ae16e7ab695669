use std::collections::BTreeSet;

use cylinder::{chain_labels, chains, CylinderError, Label, LabeledDigraph};
use pivot_transform::{Entry, Polarity};
use serde::Serialize;

use crate::compatible;

/// One pairwise-compatible edge per column, by backtracking. Returns positions.
pub fn column_antichain_bruteforce(columns: &[Vec<Label>]) -> Option<Vec<usize>> {
    fn go(columns: &[Vec<Label>], acc: &Label, chosen: &mut Vec<usize>) -> bool {
        let c = chosen.len();
        if c == columns.len() {
            return true;
        }
        for (i, l) in columns[c].iter().enumerate() {
            if compatible(acc, l) {
                let mut next = acc.clone();
                next.extend(l.iter().copied());
                chosen.push(i);
                if go(columns, &next, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    go(columns, &Label::new(), &mut chosen).then_some(chosen)
}

/// A set of edges meeting every chain whose labels have a consistent union, found by
/// branching on the edges of the first chain not yet met.
///
/// Isolated vertices are not chains.
pub fn closed_antichain_bruteforce<V: Ord + Clone>(
    g: &LabeledDigraph<V>,
    chain_cap: usize,
) -> Result<Option<Vec<(V, V)>>, CylinderError> {
    let all = chains(g, chain_cap)?;
    let edge_sets: Vec<Vec<(V, V)>> = all
        .iter()
        .map(|ch| ch.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect())
        .collect();

    fn go<V: Ord + Clone>(
        g: &LabeledDigraph<V>,
        chains: &[Vec<(V, V)>],
        chosen: &mut BTreeSet<(V, V)>,
        acc: &Label,
    ) -> bool {
        let Some(open) = chains.iter().find(|ch| !ch.iter().any(|e| chosen.contains(e))) else {
            return true;
        };
        for e in open {
            let l = g.label(&e.0, &e.1).expect("chain edge");
            if !compatible(acc, l) {
                continue;
            }
            let mut next = acc.clone();
            next.extend(l.iter().copied());
            chosen.insert(e.clone());
            if go(g, chains, chosen, &next) {
                return true;
            }
            chosen.remove(e);
        }
        false
    }
    let mut chosen = BTreeSet::new();
    Ok(go(g, &edge_sets, &mut chosen, &Label::new()).then(|| chosen.into_iter().collect()))
}

/// Largest pivot index in any label.
pub fn label_pivots<V: Ord + Clone>(g: &LabeledDigraph<V>) -> u32 {
    g.edges().flat_map(|(_, _, l)| l.iter().map(|e| e.pivot)).max().unwrap_or(0)
}

/// Total map `σ` on pivots `1..=m` encoded as a bit mask: bit `i-1` set picks `(i,2)`.
fn sigma_entry(sigma: u64, pivot: u32) -> Entry {
    if sigma >> (pivot - 1) & 1 == 1 {
        Entry::new(pivot, Polarity::Negative)
    } else {
        Entry::new(pivot, Polarity::Positive)
    }
}

fn active(label: &Label, sigma: u64) -> bool {
    label.iter().any(|e| sigma_entry(sigma, e.pivot) == *e)
}

pub fn sigma_entries(sigma: u64, m: u32) -> Vec<Entry> {
    (1..=m).map(|i| sigma_entry(sigma, i)).collect()
}

/// A total map under which no top-to-root path is fully active, by reachability over
/// active edges.
pub fn tau_tilde_member<V: Ord + Clone>(g: &LabeledDigraph<V>) -> Option<u64> {
    let m = label_pivots(g);
    assert!(m <= 20, "too many pivots to enumerate");
    let tops: Vec<V> = g.tops().into_iter().filter(|t| g.out_degree(t) > 0).collect();
    (0..1u64 << m).find(|&sigma| {
        let mut seen: BTreeSet<V> = tops.iter().cloned().collect();
        let mut stack = tops.clone();
        while let Some(u) = stack.pop() {
            if g.out_degree(&u) == 0 {
                return false;
            }
            for w in g.successors(&u) {
                if active(g.label(&u, w).expect("edge"), sigma) && seen.insert(w.clone()) {
                    stack.push(w.clone());
                }
            }
        }
        true
    })
}

/// Number of total maps under which some chain is fully active, found chain by chain.
pub fn tau_size<V: Ord + Clone>(g: &LabeledDigraph<V>, chain_cap: usize) -> Result<u64, CylinderError> {
    let m = label_pivots(g);
    assert!(m <= 20, "too many pivots to enumerate");
    let mut hit = vec![false; 1usize << m];
    for ch in chains(g, chain_cap)? {
        let labels = chain_labels(g, &ch);
        for (sigma, slot) in hit.iter_mut().enumerate() {
            if !*slot && labels.iter().all(|l| active(l, sigma as u64)) {
                *slot = true;
            }
        }
    }
    Ok(hit.iter().filter(|h| **h).count() as u64)
}

/// The three statements that must agree on a closed digraph: no total map escapes every
/// chain, the maps caught by chains are all `2^m` maps, and no compatible antichain exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThreeWay {
    pub pivots: u32,
    pub tau_tilde_empty: bool,
    pub tau_is_everything: bool,
    pub no_antichain: bool,
}

impl ThreeWay {
    pub fn consistent(&self) -> bool {
        self.tau_tilde_empty == self.tau_is_everything && self.tau_is_everything == self.no_antichain
    }
}

pub fn three_way_check<V: Ord + Clone>(g: &LabeledDigraph<V>, chain_cap: usize) -> Result<ThreeWay, CylinderError> {
    let m = label_pivots(g);
    let tilde = tau_tilde_member(g);
    let size = tau_size(g, chain_cap)?;
    let anti = closed_antichain_bruteforce(g, chain_cap)?;
    Ok(ThreeWay {
        pivots: m,
        tau_tilde_empty: tilde.is_none(),
        tau_is_everything: size == 1u64 << m,
        no_antichain: anti.is_none(),
    })
}

/// Drops edges one at a time while the three statements still disagree.
pub fn minimize_three_way<V: Ord + Clone>(g: &LabeledDigraph<V>, chain_cap: usize) -> LabeledDigraph<V> {
    let disagrees = |h: &LabeledDigraph<V>| three_way_check(h, chain_cap).map(|r| !r.consistent()).unwrap_or(false);
    let mut cur = g.clone();
    if !disagrees(&cur) {
        return cur;
    }
    loop {
        let edges: Vec<(V, V)> = cur.edges().map(|(u, v, _)| (u.clone(), v.clone())).collect();
        let mut shrunk = false;
        for (u, v) in edges {
            let mut h = cur.clone();
            h.remove_edge(&u, &v);
            if disagrees(&h) {
                cur = h;
                shrunk = true;
                break;
            }
        }
        if !shrunk {
            return cur;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(items: &[i32]) -> Label {
        items
            .iter()
            .map(|&x| if x > 0 { Entry::pos(x as u32) } else { Entry::neg((-x) as u32) })
            .collect()
    }

    #[test]
    fn diamond() {
        // 1 → 2 → 4 and 1 → 3 → 4
        let mut g = LabeledDigraph::new();
        g.add_edge(1u32, 2, l(&[1]));
        g.add_edge(2u32, 4, l(&[2]));
        g.add_edge(1u32, 3, l(&[-1]));
        g.add_edge(3u32, 4, l(&[-2]));
        let r = three_way_check(&g, 100).unwrap();
        assert!(r.consistent());
        assert!(!r.no_antichain);
        assert_eq!(tau_size(&g, 100).unwrap(), 2);
        let ach = closed_antichain_bruteforce(&g, 100).unwrap().unwrap();
        assert_eq!(ach.len(), 2);
    }

    #[test]
    fn forced_contradiction() {
        // Both chains are active under every map.
        let mut g = LabeledDigraph::new();
        g.add_edge(1u32, 2, l(&[1]));
        g.add_edge(1u32, 3, l(&[-1]));
        g.add_edge(2u32, 4, l(&[1, -1]));
        g.add_edge(3u32, 4, l(&[1, -1]));
        let r = three_way_check(&g, 100).unwrap();
        assert!(r.consistent());
        assert!(r.no_antichain && r.tau_tilde_empty);
        assert!(tau_tilde_member(&g).is_none());
    }

    #[test]
    fn columns_bruteforce() {
        let cols = vec![vec![l(&[1]), l(&[-1])], vec![l(&[1, 2])]];
        assert_eq!(column_antichain_bruteforce(&cols), Some(vec![0, 0]));
        let cols = vec![vec![l(&[1])], vec![l(&[-1])]];
        assert_eq!(column_antichain_bruteforce(&cols), None);
    }
}
