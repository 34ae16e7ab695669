//! Small hand-written pivoted formulas over pivots `a₁ = 1`, `a₂ = 2` and entry atoms
//! `p₁ = 3`, `q₁ = 4`, `q₂ = 5`.

use formula_core::Literal;

use crate::{AtomOrigin, Pair, PivotedFormula};

pub const A1: u32 = 1;
pub const A2: u32 = 2;
pub const P1: u32 = 3;
pub const Q1: u32 = 4;
pub const Q2: u32 = 5;

fn pair(p: i64, q: i64) -> Pair {
    Pair::two(Literal::from_dimacs(p).unwrap(), Literal::from_dimacs(q).unwrap())
}

fn build(blocks: [Vec<Pair>; 4]) -> PivotedFormula {
    let [a1, na1, a2, na2] = blocks;
    PivotedFormula::from_pivots(vec![(A1, a1, na1), (A2, a2, na2)], vec![AtomOrigin::Original; 5])
        .expect("fixture is well formed")
}

/// Unsatisfiable: both `a₁` blocks force `p₁`, both `a₂` blocks force `¬p₁`.
pub fn psi1() -> PivotedFormula {
    let p = P1 as i64;
    let (q1, q2) = (Q1 as i64, Q2 as i64);
    build([
        vec![pair(p, q1), pair(p, -q1)],
        vec![pair(p, q1), pair(p, -q1)],
        vec![pair(-p, q2), pair(-p, -q2)],
        vec![pair(-p, q2), pair(-p, -q2)],
    ])
}

/// Variant whose `¬a₂` block reads `(p₁∨q₂)∧(p₁∨¬q₂)`. Satisfiable with `a₂` true and `p₁` true.
pub fn psi1_variant() -> PivotedFormula {
    let p = P1 as i64;
    let (q1, q2) = (Q1 as i64, Q2 as i64);
    build([
        vec![pair(p, q1), pair(p, -q1)],
        vec![pair(p, q1), pair(p, -q1)],
        vec![pair(-p, q2), pair(-p, -q2)],
        vec![pair(p, q2), pair(p, -q2)],
    ])
}

/// Satisfiable: `p₁` and `q₂` true satisfy every block.
pub fn psi2() -> PivotedFormula {
    let p = P1 as i64;
    let (q1, q2) = (Q1 as i64, Q2 as i64);
    build([
        vec![pair(p, q1), pair(-p, q2)],
        vec![pair(p, q1), pair(-p, q2)],
        vec![pair(p, -q1), pair(-p, -q2)],
        vec![pair(p, -q1), pair(-p, q2)],
    ])
}
