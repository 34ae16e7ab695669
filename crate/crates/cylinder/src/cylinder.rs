use std::collections::{BTreeMap, BTreeSet, VecDeque};

use formula_core::Literal;
use pivot_transform::PivotedFormula;

use crate::{CylinderError, Label, LabeledDigraph};

/// Builds the implication digraph of a complete pivoted formula.
///
/// Vertices are all entry literals and their negations. Each pair `(a ∨ b)` contributes
/// `¬a ⇒ b` and `¬b ⇒ a`, labeled by every entry whose block contains that pair.
pub fn build_cylinder(pf: &PivotedFormula) -> Result<LabeledDigraph<Literal>, CylinderError> {
    if !pf.is_complete() {
        return Err(CylinderError::Incomplete);
    }
    let mut g = LabeledDigraph::new();
    for atom in pf.entry_atoms() {
        g.add_vertex(Literal::pos(atom));
        g.add_vertex(Literal::neg(atom));
    }
    for (entry, block) in pf.entries() {
        for pair in &block.pairs {
            let [a, b] = pair.literals() else {
                unreachable!("complete formula");
            };
            let label: Label = [entry].into();
            g.add_edge(a.negate(), *b, label.clone());
            g.add_edge(b.negate(), *a, label);
        }
    }
    Ok(g)
}

/// True iff `¬a ⇒ b` and `¬b ⇒ a` always come together with equal labels.
pub fn is_skew_symmetric(g: &LabeledDigraph<Literal>) -> bool {
    g.edges().all(|(u, v, l)| g.label(&v.negate(), &u.negate()) == Some(l))
}

/// Everything reachable from `a`, found by a worklist loop.
///
/// Returns the sub-digraph and the number of edge inspections, which never exceeds `|E|`.
pub fn reachable_from<V: Ord + Clone>(g: &LabeledDigraph<V>, a: &V) -> (LabeledDigraph<V>, u64) {
    let mut out = LabeledDigraph::new();
    let mut work = 0u64;
    if !g.contains_vertex(a) {
        return (out, work);
    }
    out.add_vertex(a.clone());
    let mut seen: BTreeSet<V> = [a.clone()].into();
    let mut queue = VecDeque::from([a.clone()]);
    while let Some(u) = queue.pop_front() {
        for w in g.successors(&u) {
            work += 1;
            out.add_edge(u.clone(), w.clone(), g.label(&u, w).cloned().unwrap_or_default());
            if seen.insert(w.clone()) {
                queue.push_back(w.clone());
            }
        }
    }
    (out, work)
}

/// The loop-free sub-digraph of paths from `from` to `to`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval<V: Ord + Clone> {
    pub from: V,
    pub to: V,
    pub graph: LabeledDigraph<V>,
    pub passes: u32,
}

impl<V: Ord + Clone> Interval<V> {
    pub fn is_empty(&self) -> bool {
        self.graph.num_edges() == 0
    }
}

/// Computes the interval `[p, q]`.
///
/// Edges entering `p` and leaving `q` are ignored, so the endpoints act as source and sink.
/// The graph is restricted to vertices reachable from `p` and reaching `q`. Then vertices
/// on a cycle are deleted and the restriction is redone, until no cycle is left. The result
/// is empty when `p = q` or when `q` is no longer reachable.
pub fn interval<V: Ord + Clone>(g: &LabeledDigraph<V>, p: &V, q: &V) -> Interval<V> {
    let empty = |passes| Interval {
        from: p.clone(),
        to: q.clone(),
        graph: LabeledDigraph::new(),
        passes,
    };
    if p == q || !g.contains_vertex(p) || !g.contains_vertex(q) {
        return empty(0);
    }
    let mut h = g.clone();
    let into_p: Vec<V> = h.predecessors(p).cloned().collect();
    for u in into_p {
        h.remove_edge(&u, p);
    }
    let out_of_q: Vec<V> = h.successors(q).cloned().collect();
    for w in out_of_q {
        h.remove_edge(q, &w);
    }
    let mut passes = 0;
    loop {
        passes += 1;
        let fwd = h.forward_closure(p);
        if !fwd.contains(q) {
            return empty(passes);
        }
        let bwd = h.backward_closure(q);
        let keep: BTreeSet<V> = fwd.intersection(&bwd).cloned().collect();
        h = h.induced(&keep);
        let cyclic = h.cycle_vertices();
        if cyclic.is_empty() {
            break;
        }
        for v in &cyclic {
            h.remove_vertex(v);
        }
        if !h.contains_vertex(p) || !h.contains_vertex(q) {
            return empty(passes);
        }
    }
    Interval {
        from: p.clone(),
        to: q.clone(),
        graph: h,
        passes,
    }
}

/// Atoms `a` (given as the positive literal) with both `[¬a, a]` and `[a, ¬a]` non-empty.
pub fn nec_literals(g: &LabeledDigraph<Literal>) -> Vec<Literal> {
    let atoms: BTreeMap<u32, ()> = g.vertices().map(|l| (l.atom(), ())).collect();
    atoms
        .keys()
        .map(|&atom| Literal::pos(atom))
        .filter(|&a| {
            g.contains_vertex(&a.negate())
                && !interval(g, &a.negate(), &a).is_empty()
                && !interval(g, &a, &a.negate()).is_empty()
        })
        .collect()
}
