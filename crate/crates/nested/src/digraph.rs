use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use fixedbitset::FixedBitSet;

use crate::NestedError;

/// Digraph over vertex ids `0..universe` whose edges carry vertex sets.
///
/// A path `root = x₀ → x₁ → … → x_k` is valid when, for every `t ≤ t'`, the vertex `x_{t'}`
/// lies in the label of the edge entering `x_t`. Edges point away from the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestedDigraph {
    universe: usize,
    root: usize,
    succ: BTreeMap<usize, BTreeMap<usize, FixedBitSet>>,
}

impl NestedDigraph {
    pub fn new(universe: usize, root: usize) -> Self {
        assert!(root < universe, "root outside the universe");
        Self {
            universe,
            root,
            succ: BTreeMap::new(),
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// An empty vertex set sized for this digraph.
    pub fn empty_set(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.universe)
    }

    pub fn set_of(&self, items: impl IntoIterator<Item = usize>) -> FixedBitSet {
        let mut s = self.empty_set();
        s.extend(items);
        s
    }

    /// Adds `u → v`; an existing label is united with `label`.
    pub fn add_edge(&mut self, u: usize, v: usize, label: FixedBitSet) {
        assert!(u < self.universe && v < self.universe, "vertex outside the universe");
        match self.succ.entry(u).or_default().entry(v) {
            std::collections::btree_map::Entry::Occupied(mut o) => o.get_mut().union_with(&label),
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(label);
            }
        }
    }

    pub fn label(&self, u: usize, v: usize) -> Option<&FixedBitSet> {
        self.succ.get(&u).and_then(|m| m.get(&v))
    }

    pub fn successors(&self, u: usize) -> impl Iterator<Item = (usize, &FixedBitSet)> {
        self.succ.get(&u).into_iter().flatten().map(|(v, l)| (*v, l))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &FixedBitSet)> {
        self.succ.iter().flat_map(|(u, m)| m.iter().map(move |(v, l)| (*u, *v, l)))
    }

    pub fn num_edges(&self) -> usize {
        self.succ.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.num_edges() == 0
    }

    /// Root plus every edge endpoint.
    pub fn vertices(&self) -> BTreeSet<usize> {
        let mut out: BTreeSet<usize> = [self.root].into();
        for (u, v, _) in self.edges() {
            out.insert(u);
            out.insert(v);
        }
        out
    }

    /// Edge-wise union; shared edges get the union of labels.
    pub fn union_with(&mut self, other: &NestedDigraph) {
        assert_eq!((self.universe, self.root), (other.universe, other.root));
        for (u, v, l) in other.edges() {
            self.add_edge(u, v, l.clone());
        }
    }

    /// Edges present in both, labeled by the intersection of labels.
    pub fn intersection(&self, other: &NestedDigraph) -> NestedDigraph {
        assert_eq!((self.universe, self.root), (other.universe, other.root));
        let mut out = NestedDigraph::new(self.universe, self.root);
        for (u, v, l) in self.edges() {
            if let Some(m) = other.label(u, v) {
                let mut both = l.clone();
                both.intersect_with(m);
                out.add_edge(u, v, both);
            }
        }
        out
    }

    /// Puts `v` between the root and its former children.
    ///
    /// The new edge `root → v` is labeled by `v` and every non-root vertex; the edges
    /// `v → x` take over the labels of the old `root → x`.
    pub fn insert_below_root(&self, v: usize) -> NestedDigraph {
        let mut out = NestedDigraph::new(self.universe, self.root);
        let mut all = self.set_of(self.vertices());
        all.set(self.root, false);
        all.insert(v);
        out.add_edge(self.root, v, all);
        for (a, b, l) in self.edges() {
            let from = if a == self.root { v } else { a };
            out.add_edge(from, b, l.clone());
        }
        out
    }

    /// Every edge `x → y` has `y` in its label, and the label only names `y` and vertices
    /// below `y`.
    pub fn respects_label_discipline(&self) -> bool {
        self.edges().all(|(_, y, l)| {
            if !l.contains(y) {
                return false;
            }
            let below = self.below(y);
            l.ones().all(|z| below.contains(&z))
        })
    }

    fn below(&self, y: usize) -> BTreeSet<usize> {
        let mut seen: BTreeSet<usize> = [y].into();
        let mut stack = vec![y];
        while let Some(u) = stack.pop() {
            for (w, _) in self.successors(u) {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen
    }
}

/// Every valid path with exactly `depth` edges from the root, by enumeration.
pub fn valid_paths(g: &NestedDigraph, depth: usize) -> Vec<Vec<usize>> {
    fn walk(g: &NestedDigraph, depth: usize, path: &mut Vec<usize>, labels: &mut Vec<FixedBitSet>, out: &mut Vec<Vec<usize>>) {
        if labels.len() == depth {
            out.push(path.clone());
            return;
        }
        let x = *path.last().expect("path starts at the root");
        let next: Vec<(usize, FixedBitSet)> = g.successors(x).map(|(y, l)| (y, l.clone())).collect();
        for (y, l) in next {
            if !l.contains(y) || !labels.iter().all(|earlier| earlier.contains(y)) {
                continue;
            }
            path.push(y);
            labels.push(l);
            walk(g, depth, path, labels, out);
            labels.pop();
            path.pop();
        }
    }
    let mut out = Vec::new();
    walk(g, depth, &mut vec![g.root], &mut Vec::new(), &mut out);
    out
}

/// The largest sub-digraph whose edges all lie on valid depth-`depth` paths, computed by
/// enumerating those paths. Each edge label becomes the set of vertices that follow the
/// edge on some valid path through it.
pub fn max_nested_bruteforce(g: &NestedDigraph, depth: usize) -> NestedDigraph {
    let mut out = NestedDigraph::new(g.universe, g.root);
    for path in valid_paths(g, depth) {
        for t in 1..path.len() {
            let later = out.set_of(path[t..].iter().copied());
            out.add_edge(path[t - 1], path[t], later);
        }
    }
    out
}

/// Work allowed for one [`max_nested`] call: `|V|⁶` over the vertices that carry edges.
pub fn filter_cap(g: &NestedDigraph) -> u64 {
    (g.vertices().len() as u64).saturating_pow(6)
}

/// Same result as [`max_nested_bruteforce`], by dynamic programming over
/// (vertex, label intersection so far, depth) states.
///
/// `work` counts examined transitions; more than `|V|⁶` aborts.
pub fn max_nested(g: &NestedDigraph, depth: usize) -> Result<(NestedDigraph, u64), NestedError> {
    let cap = filter_cap(g);
    let mut dp = Dp {
        g,
        depth,
        memo: HashMap::new(),
        work: 0,
        cap,
    };
    let mut start = g.empty_set();
    start.insert_range(..);
    let mut out = NestedDigraph::new(g.universe, g.root);
    if depth == 0 {
        return Ok((out, 0));
    }
    if dp.below(g.root, &start, 0)?.is_none() {
        return Ok((out, dp.work));
    }
    let mut visited: HashSet<(usize, FixedBitSet, usize)> = HashSet::new();
    let mut stack = vec![(g.root, start, 0usize)];
    while let Some((x, a, d)) = stack.pop() {
        if d == depth || !visited.insert((x, a.clone(), d)) {
            continue;
        }
        for (y, l) in g.successors(x) {
            let Some(next) = step(&a, y, l) else {
                continue;
            };
            if let Some(below) = dp.below(y, &next, d + 1)? {
                out.add_edge(x, y, below);
                stack.push((y, next, d + 1));
            }
        }
    }
    Ok((out, dp.work))
}

fn step(a: &FixedBitSet, y: usize, l: &FixedBitSet) -> Option<FixedBitSet> {
    if !a.contains(y) || !l.contains(y) {
        return None;
    }
    let mut next = a.clone();
    next.intersect_with(l);
    Some(next)
}

struct Dp<'a> {
    g: &'a NestedDigraph,
    depth: usize,
    memo: HashMap<(usize, FixedBitSet, usize), Option<FixedBitSet>>,
    work: u64,
    cap: u64,
}

impl Dp<'_> {
    /// Vertices at positions `d..` of valid completions from state `(x, a, d)`, or `None`
    /// when there is no completion.
    fn below(&mut self, x: usize, a: &FixedBitSet, d: usize) -> Result<Option<FixedBitSet>, NestedError> {
        if d == self.depth {
            let mut s = self.g.empty_set();
            s.insert(x);
            return Ok(Some(s));
        }
        let key = (x, a.clone(), d);
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        let mut acc: Option<FixedBitSet> = None;
        let succ: Vec<(usize, FixedBitSet)> = self.g.successors(x).map(|(y, l)| (y, l.clone())).collect();
        for (y, l) in succ {
            self.work += 1;
            if self.work > self.cap {
                return Err(NestedError::FilterBlowup { work: self.work, cap: self.cap });
            }
            let Some(next) = step(a, y, &l) else {
                continue;
            };
            if let Some(b) = self.below(y, &next, d + 1)? {
                let slot = acc.get_or_insert_with(|| {
                    let mut s = self.g.empty_set();
                    s.insert(x);
                    s
                });
                slot.union_with(&b);
            }
        }
        self.memo.insert(key, acc.clone());
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize, &[usize])]) -> NestedDigraph {
        let mut g = NestedDigraph::new(n, 0);
        for (u, v, l) in edges {
            let s = g.set_of(l.iter().copied());
            g.add_edge(*u, *v, s);
        }
        g
    }

    #[test]
    fn labels_gate_later_vertices() {
        // 0 → 1 → 2 is valid only if 2 is in the label of 0 → 1.
        let g = graph(4, &[(0, 1, &[1]), (1, 2, &[2]), (0, 3, &[3, 2]), (3, 2, &[2])]);
        assert_eq!(valid_paths(&g, 2), vec![vec![0, 3, 2]]);
        let (m, _) = max_nested(&g, 2).unwrap();
        assert_eq!(m, max_nested_bruteforce(&g, 2));
        assert_eq!(m.num_edges(), 2);
        assert_eq!(m.label(0, 3).unwrap().ones().collect::<Vec<_>>(), vec![2, 3]);
    }

    #[test]
    fn insertion_keeps_discipline() {
        let g = graph(5, &[(0, 1, &[1, 2]), (1, 2, &[2])]);
        let h = g.insert_below_root(3);
        assert_eq!(valid_paths(&h, 3), vec![vec![0, 3, 1, 2]]);
        assert!(h.respects_label_discipline());
        assert_eq!(h.label(3, 1).unwrap().ones().collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn intersection_and_union() {
        let a = graph(4, &[(0, 1, &[1, 2]), (0, 2, &[2])]);
        let b = graph(4, &[(0, 1, &[1, 3]), (0, 3, &[3])]);
        let i = a.intersection(&b);
        assert_eq!(i.num_edges(), 1);
        assert_eq!(i.label(0, 1).unwrap().ones().collect::<Vec<_>>(), vec![1]);
        let mut u = a.clone();
        u.union_with(&b);
        assert_eq!(u.num_edges(), 3);
        assert_eq!(u.label(0, 1).unwrap().ones().collect::<Vec<_>>(), vec![1, 2, 3]);
    }

    #[test]
    fn empty_when_depth_unreachable() {
        let g = graph(3, &[(0, 1, &[1])]);
        let (m, _) = max_nested(&g, 2).unwrap();
        assert!(m.is_empty());
    }
}
