//! Hand-built closed digraphs.

use formula_core::Literal;

use crate::{ClosedDigraph, ClosedVertex, Label, LabeledDigraph};

/// Layered lattice on `p1 … p8` with unlabeled edges
/// `p1,p2 → p3,p4 → p5,p6 → p7,p8`. It has 16 chains.
///
/// Vertex `pᵢ` is encoded as the positive literal of atom `i`.
pub fn lattice() -> ClosedDigraph {
    let p = |i: u32| ClosedVertex::plain(Literal::pos(i));
    let mut g = LabeledDigraph::new();
    for layer in 0..3 {
        let base = 2 * layer + 1;
        for u in base..base + 2 {
            for v in base + 2..base + 4 {
                g.add_edge(p(u), p(v), Label::new());
            }
        }
    }
    ClosedDigraph::from_dag(g).expect("lattice is acyclic")
}
