use std::collections::BTreeMap;

use cylinder::Label;
use formula_core::Counters;

use crate::{compatible, consistent, filter_cap, max_nested, NestedDigraph, NestedError};

/// Result of the layered search over columns of labeled edges.
#[derive(Debug, Clone)]
pub struct LinOutcome {
    pub num_columns: usize,
    /// Edge ids (column by column, top to root) with their labels.
    pub labels: Vec<Label>,
    pub column_of: Vec<usize>,
    /// Last-column edges whose final nested digraph is non-empty.
    pub finals: Vec<(usize, NestedDigraph)>,
    /// One edge id per column read off a final digraph, in column order.
    pub antichain: Option<Vec<usize>>,
    /// The filter call closest to its `|V|⁶` bound, as `(work, bound)`.
    pub peak_filter: Option<(u64, u64)>,
    pub counters: Counters,
}

impl LinOutcome {
    pub fn found(&self) -> bool {
        self.antichain.is_some()
    }

    /// Union of the labels on the reported antichain.
    pub fn antichain_label(&self) -> Option<Label> {
        self.antichain
            .as_ref()
            .map(|ids| ids.iter().flat_map(|&i| self.labels[i].iter().copied()).collect())
    }

    /// True iff the reported antichain is pairwise compatible.
    pub fn antichain_is_compatible(&self) -> bool {
        self.antichain_label().is_some_and(|l| consistent(&l))
    }
}

/// Searches for one pairwise-compatible edge per column.
///
/// Every edge of a later column `w` keeps a nested digraph `G(w)` whose valid paths list
/// compatible choices from the earlier columns, deepest column last. Column by column,
/// `G(w)` becomes the union over compatible `v` of `G(v) ∩ G(w)`, reduced to its maximal
/// nested part and with `v` inserted under the root.
pub fn lin_search(columns: &[Vec<Label>]) -> Result<LinOutcome, NestedError> {
    let mut labels = Vec::new();
    let mut column_of = Vec::new();
    let mut ids: Vec<Vec<usize>> = Vec::new();
    for (c, col) in columns.iter().enumerate() {
        let mut these = Vec::new();
        for l in col {
            these.push(labels.len());
            labels.push(l.clone());
            column_of.push(c);
        }
        ids.push(these);
    }
    let n = labels.len();
    let root = n;
    let k = columns.len();
    let compat: Vec<Vec<bool>> = (0..n)
        .map(|a| (0..n).map(|b| compatible(&labels[a], &labels[b])).collect())
        .collect();
    let mut counters = Counters::new();
    counters.set("nested.columns", k as u64);
    counters.set("nested.vertices", n as u64);
    let mut outcome = LinOutcome {
        num_columns: k,
        labels,
        column_of,
        finals: Vec::new(),
        antichain: None,
        peak_filter: None,
        counters: Counters::new(),
    };
    if k == 0 {
        outcome.antichain = Some(Vec::new());
        outcome.counters = counters;
        return Ok(outcome);
    }
    if k == 1 {
        for &w in &ids[0] {
            if compat[w][w] {
                outcome.finals.push((w, NestedDigraph::new(n + 1, root)));
            }
        }
        outcome.antichain = outcome.finals.first().map(|(w, _)| vec![*w]);
        outcome.counters = counters;
        return Ok(outcome);
    }

    let mut g: BTreeMap<usize, NestedDigraph> = BTreeMap::new();
    for col in &ids[1..] {
        for &w in col {
            let mut d = NestedDigraph::new(n + 1, root);
            for &u in &ids[0] {
                if compat[u][w] {
                    let l = d.set_of([u]);
                    d.add_edge(root, u, l);
                }
            }
            g.insert(w, d);
        }
    }

    let mut work = 0u64;
    for r in 1..k - 1 {
        let mut next: BTreeMap<usize, NestedDigraph> = BTreeMap::new();
        for col in &ids[r + 1..] {
            for &w in col {
                let old_w = &g[&w];
                let mut acc = NestedDigraph::new(n + 1, root);
                if !old_w.is_empty() {
                    for &v in &ids[r] {
                        if !compat[v][w] || g[&v].is_empty() {
                            continue;
                        }
                        let both = g[&v].intersection(old_w);
                        let (reduced, spent) = max_nested(&both, r)?;
                        work += spent;
                        note_peak(&mut outcome.peak_filter, spent, filter_cap(&both));
                        counters.add("nested.filter_calls", 1);
                        if reduced.is_empty() {
                            continue;
                        }
                        acc.union_with(&reduced.insert_below_root(v));
                    }
                }
                counters.max("nested.max_edges", acc.num_edges() as u64);
                next.insert(w, acc);
            }
        }
        g = next;
    }

    for &w in &ids[k - 1] {
        if !compat[w][w] {
            continue;
        }
        let (reduced, spent) = max_nested(&g[&w], k - 1)?;
        work += spent;
        note_peak(&mut outcome.peak_filter, spent, filter_cap(&g[&w]));
        counters.add("nested.filter_calls", 1);
        if !reduced.is_empty() {
            outcome.finals.push((w, reduced));
        }
    }
    counters.set("nested.work", work);
    counters.set("nested.finals", outcome.finals.len() as u64);
    if let Some((w, d)) = outcome.finals.first() {
        let path = first_valid_path(d, k - 1).expect("non-empty maximal nested digraph has a valid path");
        let mut chosen: Vec<usize> = path[1..].to_vec();
        chosen.reverse();
        chosen.push(*w);
        outcome.antichain = Some(chosen);
    }
    outcome.counters = counters;
    Ok(outcome)
}

fn note_peak(peak: &mut Option<(u64, u64)>, work: u64, cap: u64) {
    let ratio = |(w, c): (u64, u64)| w as f64 / c.max(1) as f64;
    if peak.map_or(true, |p| ratio((work, cap)) > ratio(p)) {
        *peak = Some((work, cap));
    }
}

fn first_valid_path(d: &NestedDigraph, depth: usize) -> Option<Vec<usize>> {
    fn walk(d: &NestedDigraph, depth: usize, path: &mut Vec<usize>, seen: &mut Vec<fixedbitset::FixedBitSet>) -> bool {
        if seen.len() == depth {
            return true;
        }
        let x = *path.last().expect("path starts at the root");
        for (y, l) in d.successors(x) {
            if !l.contains(y) || !seen.iter().all(|s| s.contains(y)) {
                continue;
            }
            path.push(y);
            seen.push(l.clone());
            if walk(d, depth, path, seen) {
                return true;
            }
            seen.pop();
            path.pop();
        }
        false
    }
    let mut path = vec![d.root()];
    walk(d, depth, &mut path, &mut Vec::new()).then_some(path)
}
