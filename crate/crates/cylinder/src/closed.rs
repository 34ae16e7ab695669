use std::fmt;

use formula_core::Literal;

use crate::{interval, nec_literals, CylinderError, Label, LabeledDigraph};

/// Which copy of the cylinder a closed-digraph vertex belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    /// Interior of `[¬a, a]`, plus its start `¬a`.
    Odd,
    /// The shared vertex `a`.
    Glue,
    /// Interior of `[a, ¬a]`, plus its end `¬a`.
    Even,
    /// Vertex of a hand-built digraph that came from no interval.
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClosedVertex {
    pub lit: Literal,
    pub side: Side,
}

impl ClosedVertex {
    pub fn new(lit: Literal, side: Side) -> Self {
        Self { lit, side }
    }

    pub fn plain(lit: Literal) -> Self {
        Self::new(lit, Side::Plain)
    }
}

impl fmt::Display for ClosedVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::Odd => write!(f, "{}'", self.lit),
            Side::Glue | Side::Plain => write!(f, "{}", self.lit),
            Side::Even => write!(f, "{}\"", self.lit),
        }
    }
}

/// A loop-free digraph from a single top to a single root.
///
/// For an atom `a` with both intervals non-empty this is `[¬a, a]` followed by `[a, ¬a]`,
/// glued at `a`. Its chains are the candidate contradictions `¬a ⇒ … ⇒ a ⇒ … ⇒ ¬a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedDigraph {
    pub nec: Option<Literal>,
    pub graph: LabeledDigraph<ClosedVertex>,
}

impl ClosedDigraph {
    /// Wraps an arbitrary acyclic digraph.
    pub fn from_dag(graph: LabeledDigraph<ClosedVertex>) -> Result<Self, CylinderError> {
        if !graph.is_acyclic() {
            return Err(CylinderError::Cyclic);
        }
        Ok(Self { nec: None, graph })
    }

    pub fn num_vertices(&self) -> usize {
        self.graph.num_vertices()
    }

    pub fn num_edges(&self) -> usize {
        self.graph.num_edges()
    }
}

/// One closed digraph per atom with both intervals non-empty, ordered by atom.
pub fn build_closed_digraphs(cyl: &LabeledDigraph<Literal>) -> Vec<ClosedDigraph> {
    nec_literals(cyl)
        .into_iter()
        .map(|a| {
            let na = a.negate();
            let odd = interval(cyl, &na, &a).graph;
            let even = interval(cyl, &a, &na).graph;
            let tag = |v: &Literal, side: Side| {
                if *v == a {
                    ClosedVertex::new(*v, Side::Glue)
                } else {
                    ClosedVertex::new(*v, side)
                }
            };
            let mut g = LabeledDigraph::new();
            for (u, v, l) in odd.edges() {
                g.add_edge(tag(u, Side::Odd), tag(v, Side::Odd), l.clone());
            }
            for (u, v, l) in even.edges() {
                g.add_edge(tag(u, Side::Even), tag(v, Side::Even), l.clone());
            }
            ClosedDigraph { nec: Some(a), graph: g }
        })
        .collect()
}

/// All maximal paths (top to root) of an acyclic digraph, as vertex sequences.
///
/// Fails once more than `cap` chains have been found.
pub fn chains<V: Ord + Clone>(g: &LabeledDigraph<V>, cap: usize) -> Result<Vec<Vec<V>>, CylinderError> {
    if !g.is_acyclic() {
        return Err(CylinderError::Cyclic);
    }
    let mut out = Vec::new();
    for top in g.tops() {
        if g.out_degree(&top) == 0 {
            continue;
        }
        let mut path = vec![top];
        extend(g, &mut path, &mut out, cap)?;
    }
    Ok(out)
}

fn extend<V: Ord + Clone>(
    g: &LabeledDigraph<V>,
    path: &mut Vec<V>,
    out: &mut Vec<Vec<V>>,
    cap: usize,
) -> Result<(), CylinderError> {
    let last = path.last().expect("non-empty path").clone();
    if g.out_degree(&last) == 0 {
        if out.len() == cap {
            return Err(CylinderError::ChainCap(cap));
        }
        out.push(path.clone());
        return Ok(());
    }
    for w in g.successors(&last) {
        path.push(w.clone());
        extend(g, path, out, cap)?;
        path.pop();
    }
    Ok(())
}

/// Edge labels along a vertex sequence.
pub fn chain_labels<V: Ord + Clone>(g: &LabeledDigraph<V>, chain: &[V]) -> Vec<Label> {
    chain
        .windows(2)
        .map(|w| g.label(&w[0], &w[1]).cloned().expect("chain edge"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{build_cylinder, fixtures};
    use pivot_transform::{fixtures as pf, Entry};

    #[test]
    fn psi1_closed_digraph_of_p1() {
        let cyl = build_cylinder(&pf::psi1()).unwrap();
        let closed = build_closed_digraphs(&cyl);
        assert_eq!(closed.len(), 3);
        let c = &closed[0];
        assert_eq!(c.nec, Some(Literal::pos(pf::P1)));
        let top = ClosedVertex::new(Literal::neg(pf::P1), Side::Odd);
        let root = ClosedVertex::new(Literal::neg(pf::P1), Side::Even);
        assert_eq!(c.graph.tops(), vec![top]);
        assert_eq!(c.graph.roots(), vec![root]);
        assert_eq!(c.num_edges(), 8);
        let all = chains(&c.graph, 100).unwrap();
        assert_eq!(all.len(), 4);
        let odd: Label = [Entry::pos(1), Entry::neg(1)].into();
        let even: Label = [Entry::pos(2), Entry::neg(2)].into();
        for ch in &all {
            assert_eq!(chain_labels(&c.graph, ch), vec![odd.clone(), odd.clone(), even.clone(), even.clone()]);
        }
    }

    #[test]
    fn lattice_has_sixteen_chains() {
        let c = fixtures::lattice();
        assert_eq!(chains(&c.graph, 100).unwrap().len(), 16);
        assert_eq!(chains(&c.graph, 15), Err(CylinderError::ChainCap(15)));
    }

    #[test]
    fn cyclic_input_is_rejected() {
        let mut g = LabeledDigraph::new();
        let (x, y) = (ClosedVertex::plain(Literal::pos(1)), ClosedVertex::plain(Literal::pos(2)));
        g.add_edge(x, y, Label::new());
        g.add_edge(y, x, Label::new());
        assert_eq!(ClosedDigraph::from_dag(g), Err(CylinderError::Cyclic));
    }
}
