use std::collections::{BTreeMap, BTreeSet, VecDeque};

use pivot_transform::Entry;

/// Edge label: a set of block entries.
pub type Label = BTreeSet<Entry>;

/// Directed graph without parallel edges whose edges carry entry sets.
///
/// Ordered containers keep every traversal and serialization deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledDigraph<V: Ord + Clone> {
    vertices: BTreeSet<V>,
    succ: BTreeMap<V, BTreeSet<V>>,
    pred: BTreeMap<V, BTreeSet<V>>,
    labels: BTreeMap<(V, V), Label>,
}

impl<V: Ord + Clone> Default for LabeledDigraph<V> {
    fn default() -> Self {
        Self::new()
    }
}

impl<V: Ord + Clone> LabeledDigraph<V> {
    pub fn new() -> Self {
        Self {
            vertices: BTreeSet::new(),
            succ: BTreeMap::new(),
            pred: BTreeMap::new(),
            labels: BTreeMap::new(),
        }
    }

    pub fn add_vertex(&mut self, v: V) {
        if self.vertices.insert(v.clone()) {
            self.succ.insert(v.clone(), BTreeSet::new());
            self.pred.insert(v, BTreeSet::new());
        }
    }

    /// Adds `u ⇒ v`; if the edge exists its label becomes the union.
    pub fn add_edge(&mut self, u: V, v: V, label: Label) {
        self.add_vertex(u.clone());
        self.add_vertex(v.clone());
        self.succ.get_mut(&u).expect("vertex").insert(v.clone());
        self.pred.get_mut(&v).expect("vertex").insert(u.clone());
        self.labels.entry((u, v)).or_default().extend(label);
    }

    pub fn remove_edge(&mut self, u: &V, v: &V) -> Option<Label> {
        let label = self.labels.remove(&(u.clone(), v.clone()))?;
        self.succ.get_mut(u).expect("vertex").remove(v);
        self.pred.get_mut(v).expect("vertex").remove(u);
        Some(label)
    }

    pub fn remove_vertex(&mut self, v: &V) {
        if !self.vertices.remove(v) {
            return;
        }
        let outs = self.succ.remove(v).unwrap_or_default();
        let ins = self.pred.remove(v).unwrap_or_default();
        for w in outs {
            self.labels.remove(&(v.clone(), w.clone()));
            if let Some(p) = self.pred.get_mut(&w) {
                p.remove(v);
            }
        }
        for u in ins {
            self.labels.remove(&(u.clone(), v.clone()));
            if let Some(s) = self.succ.get_mut(&u) {
                s.remove(v);
            }
        }
    }

    pub fn contains_vertex(&self, v: &V) -> bool {
        self.vertices.contains(v)
    }

    pub fn has_edge(&self, u: &V, v: &V) -> bool {
        self.labels.contains_key(&(u.clone(), v.clone()))
    }

    pub fn label(&self, u: &V, v: &V) -> Option<&Label> {
        self.labels.get(&(u.clone(), v.clone()))
    }

    pub fn label_mut(&mut self, u: &V, v: &V) -> Option<&mut Label> {
        self.labels.get_mut(&(u.clone(), v.clone()))
    }

    pub fn vertices(&self) -> impl Iterator<Item = &V> {
        self.vertices.iter()
    }

    pub fn vertex_set(&self) -> &BTreeSet<V> {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (&V, &V, &Label)> {
        self.labels.iter().map(|((u, v), l)| (u, v, l))
    }

    pub fn successors(&self, v: &V) -> impl Iterator<Item = &V> {
        self.succ.get(v).into_iter().flatten()
    }

    pub fn predecessors(&self, v: &V) -> impl Iterator<Item = &V> {
        self.pred.get(v).into_iter().flatten()
    }

    pub fn out_degree(&self, v: &V) -> usize {
        self.succ.get(v).map_or(0, BTreeSet::len)
    }

    pub fn in_degree(&self, v: &V) -> usize {
        self.pred.get(v).map_or(0, BTreeSet::len)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Vertices with no incoming edge.
    pub fn tops(&self) -> Vec<V> {
        self.vertices.iter().filter(|v| self.in_degree(v) == 0).cloned().collect()
    }

    /// Vertices with no outgoing edge.
    pub fn roots(&self) -> Vec<V> {
        self.vertices.iter().filter(|v| self.out_degree(v) == 0).cloned().collect()
    }

    /// Vertices reachable from `start`, `start` included.
    pub fn forward_closure(&self, start: &V) -> BTreeSet<V> {
        self.closure(start, true)
    }

    /// Vertices that reach `end`, `end` included.
    pub fn backward_closure(&self, end: &V) -> BTreeSet<V> {
        self.closure(end, false)
    }

    fn closure(&self, start: &V, forward: bool) -> BTreeSet<V> {
        let mut seen = BTreeSet::new();
        if !self.contains_vertex(start) {
            return seen;
        }
        seen.insert(start.clone());
        let mut queue = VecDeque::from([start.clone()]);
        while let Some(u) = queue.pop_front() {
            let next: Vec<V> = if forward {
                self.successors(&u).cloned().collect()
            } else {
                self.predecessors(&u).cloned().collect()
            };
            for w in next {
                if seen.insert(w.clone()) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Union of forward closures of several vertices.
    pub fn forward_closure_of<'a>(&self, starts: impl IntoIterator<Item = &'a V>) -> BTreeSet<V>
    where
        V: 'a,
    {
        let mut out = BTreeSet::new();
        for s in starts {
            if !out.contains(s) {
                out.extend(self.forward_closure(s));
            }
        }
        out
    }

    /// Union of backward closures of several vertices.
    pub fn backward_closure_of<'a>(&self, ends: impl IntoIterator<Item = &'a V>) -> BTreeSet<V>
    where
        V: 'a,
    {
        let mut out = BTreeSet::new();
        for s in ends {
            if !out.contains(s) {
                out.extend(self.backward_closure(s));
            }
        }
        out
    }

    /// Subgraph induced by `keep`.
    pub fn induced(&self, keep: &BTreeSet<V>) -> Self {
        let mut g = Self::new();
        for v in self.vertices.iter().filter(|v| keep.contains(v)) {
            g.add_vertex(v.clone());
        }
        for ((u, v), l) in &self.labels {
            if keep.contains(u) && keep.contains(v) {
                g.add_edge(u.clone(), v.clone(), l.clone());
            }
        }
        g
    }

    /// Vertices lying on some directed cycle (including self-loops).
    pub fn cycle_vertices(&self) -> BTreeSet<V> {
        self.vertices
            .iter()
            .filter(|v| {
                self.successors(v)
                    .any(|w| w == *v || self.forward_closure(w).contains(*v))
            })
            .cloned()
            .collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.cycle_vertices().is_empty()
    }

    /// Vertices in a topological order (ties by vertex order). `None` if cyclic.
    pub fn topological_order(&self) -> Option<Vec<V>> {
        let mut indeg: BTreeMap<V, usize> = self.vertices.iter().map(|v| (v.clone(), self.in_degree(v))).collect();
        let mut ready: BTreeSet<V> = indeg.iter().filter(|(_, d)| **d == 0).map(|(v, _)| v.clone()).collect();
        let mut order = Vec::with_capacity(self.vertices.len());
        while let Some(v) = ready.pop_first() {
            for w in self.successors(&v) {
                let d = indeg.get_mut(w).expect("vertex");
                *d -= 1;
                if *d == 0 {
                    ready.insert(w.clone());
                }
            }
            order.push(v);
        }
        (order.len() == self.vertices.len()).then_some(order)
    }

    /// Relabels vertices through `f`, which must be injective.
    pub fn map_vertices<W: Ord + Clone>(&self, f: impl Fn(&V) -> W) -> LabeledDigraph<W> {
        let mut g = LabeledDigraph::new();
        for v in &self.vertices {
            g.add_vertex(f(v));
        }
        for ((u, v), l) in &self.labels {
            g.add_edge(f(u), f(v), l.clone());
        }
        assert_eq!(g.num_vertices(), self.num_vertices(), "vertex map is not injective");
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(edges: &[(u32, u32)]) -> LabeledDigraph<u32> {
        let mut g = LabeledDigraph::new();
        for &(u, v) in edges {
            g.add_edge(u, v, Label::new());
        }
        g
    }

    #[test]
    fn labels_merge_on_repeated_edges() {
        let mut gr = LabeledDigraph::new();
        gr.add_edge(1u32, 2, [Entry::pos(1)].into());
        gr.add_edge(1u32, 2, [Entry::neg(2)].into());
        assert_eq!(gr.num_edges(), 1);
        assert_eq!(gr.label(&1, &2).unwrap().len(), 2);
    }

    #[test]
    fn vertex_removal_drops_incident_edges() {
        let mut gr = g(&[(1, 2), (2, 3), (3, 1)]);
        gr.remove_vertex(&2);
        assert_eq!(gr.num_edges(), 1);
        assert!(gr.has_edge(&3, &1));
        assert_eq!(gr.in_degree(&3), 0);
    }

    #[test]
    fn cycles_and_topological_order() {
        let gr = g(&[(1, 2), (2, 3), (3, 2), (3, 4)]);
        assert_eq!(gr.cycle_vertices(), [2, 3].into());
        assert!(gr.topological_order().is_none());
        let dag = g(&[(3, 1), (1, 2), (3, 2)]);
        assert_eq!(dag.topological_order().unwrap(), vec![3, 1, 2]);
    }

    #[test]
    fn closures() {
        let gr = g(&[(1, 2), (2, 3), (4, 3)]);
        assert_eq!(gr.forward_closure(&1), [1, 2, 3].into());
        assert_eq!(gr.backward_closure(&3), [1, 2, 3, 4].into());
        assert_eq!(gr.tops(), vec![1, 4]);
        assert_eq!(gr.roots(), vec![3]);
    }
}
