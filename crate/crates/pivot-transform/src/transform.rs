use std::collections::BTreeSet;

use formula_core::{Clause, CnfFormula, Literal};

use crate::{AtomOrigin, Pair, PivotBlock, PivotError, PivotedFormula};

struct Builder {
    origins: Vec<AtomOrigin>,
    pivots: Vec<(u32, Vec<Pair>, Vec<Pair>)>,
}

impl Builder {
    fn fresh(&mut self, origin: AtomOrigin) -> u32 {
        self.origins.push(origin);
        self.origins.len() as u32
    }
}

fn rest_pair(clause: &Clause, without: u32) -> Pair {
    let rest: Vec<Literal> = clause.literals().iter().copied().filter(|l| l.atom() != without).collect();
    match rest.as_slice() {
        [q] => Pair::one(*q),
        [p, q] => Pair::two(*p, *q),
        _ => unreachable!("clause shape checked by caller"),
    }
}

fn as_pair(clause: &Clause) -> Pair {
    match clause.literals() {
        [q] => Pair::one(*q),
        [p, q] => Pair::two(*p, *q),
        _ => unreachable!("only short clauses reach the tail"),
    }
}

/// Rewrites a 3-CNF formula into pivoted form.
///
/// 1. Direct pivots: atoms taken by descending occurrence count (ties to the lowest id)
///    that occur in no unit clause and share no clause with an already chosen pivot.
///    Every clause mentioning a direct pivot moves into that pivot's blocks.
/// 2. While three-literal clauses remain, the most frequent atom `p` among them is put
///    under a fresh pivot `r`: `block(r) = {(x∨y) : (p∨x∨y)} ∪ {(¬p)}` and
///    `block(¬r) = {(x∨y) : (¬p∨x∨y)} ∪ {(p)}`, which forces `r ↔ p`.
/// 3. The remaining one- and two-literal clauses go into both blocks of a fresh `t`.
///    The `t` pivot is also used when nothing else produced a pivot.
///
/// Atoms `1..=f.num_atoms()` keep their ids; fresh atoms follow.
pub fn to_pivoted(f: &CnfFormula) -> PivotedFormula {
    let mut b = Builder {
        origins: vec![AtomOrigin::Original; f.num_atoms() as usize],
        pivots: Vec::new(),
    };
    let n = f.num_atoms() as usize;

    let mut occurrences = vec![0usize; n + 1];
    let mut in_unit = vec![false; n + 1];
    for c in f.clauses() {
        for l in c.literals() {
            occurrences[l.atom() as usize] += 1;
        }
        if let [l] = c.literals() {
            in_unit[l.atom() as usize] = true;
        }
    }
    let mut order: Vec<u32> = (1..=f.num_atoms()).filter(|&a| occurrences[a as usize] > 0).collect();
    order.sort_by_key(|&a| (std::cmp::Reverse(occurrences[a as usize]), a));

    let mut consumed = vec![false; f.num_clauses()];
    let mut blocked = vec![false; n + 1];
    for atom in order {
        if in_unit[atom as usize] || blocked[atom as usize] {
            continue;
        }
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (ci, c) in f.clauses().iter().enumerate() {
            let Some(lit) = c.literals().iter().find(|l| l.atom() == atom) else {
                continue;
            };
            debug_assert!(!consumed[ci]);
            consumed[ci] = true;
            for l in c.literals() {
                blocked[l.atom() as usize] = true;
            }
            if lit.is_negated() {
                neg.push(rest_pair(c, atom));
            } else {
                pos.push(rest_pair(c, atom));
            }
        }
        b.pivots.push((atom, pos, neg));
    }

    let mut residual: Vec<&Clause> = f
        .clauses()
        .iter()
        .zip(&consumed)
        .filter(|(_, used)| !**used)
        .map(|(c, _)| c)
        .collect();

    loop {
        let mut counts = vec![0usize; n + 1];
        for c in residual.iter().filter(|c| c.len() == 3) {
            for l in c.literals() {
                counts[l.atom() as usize] += 1;
            }
        }
        let Some(p) = (1..=n).filter(|&a| counts[a] > 0).max_by_key(|&a| (counts[a], std::cmp::Reverse(a))) else {
            break;
        };
        let p = p as u32;
        let r = b.fresh(AtomOrigin::FreshR);
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        residual.retain(|c| {
            if c.len() != 3 {
                return true;
            }
            match c.literals().iter().find(|l| l.atom() == p) {
                Some(lit) if lit.is_negated() => neg.push(rest_pair(c, p)),
                Some(_) => pos.push(rest_pair(c, p)),
                None => return true,
            }
            false
        });
        pos.push(Pair::one(Literal::neg(p)));
        neg.push(Pair::one(Literal::pos(p)));
        b.pivots.push((r, pos, neg));
    }

    if !residual.is_empty() || b.pivots.is_empty() {
        let t = b.fresh(AtomOrigin::FreshT);
        let tail: Vec<Pair> = residual.iter().map(|c| as_pair(c)).collect();
        b.pivots.push((t, tail.clone(), tail));
    }

    let pf = PivotedFormula::from_pivots(b.pivots, b.origins).expect("construction keeps pivots out of entries");
    let distinct: BTreeSet<u32> = f.clauses().iter().flat_map(|c| c.literals().iter().map(|l| l.atom())).collect();
    assert!(
        pf.blocks().len() <= 2 * (distinct.len() + pf.strata() + 1),
        "pivot block count exceeds the size bound"
    );
    pf
}

/// Replaces every one-literal pair `(q)` by `(q ∨ r_q), (q ∨ ¬r_q)` with a fresh `r_q`.
pub fn complete(pf: &PivotedFormula) -> PivotedFormula {
    if pf.is_complete() {
        return pf.clone();
    }
    let mut origins = pf.origins().to_vec();
    let mut blocks = Vec::with_capacity(pf.blocks().len());
    for block in pf.blocks() {
        let mut pairs = Vec::with_capacity(block.pairs.len());
        for pair in &block.pairs {
            match pair.literals() {
                [q] => {
                    origins.push(AtomOrigin::FreshCompletion);
                    let r = origins.len() as u32;
                    pairs.push(Pair::two(*q, Literal::pos(r)));
                    pairs.push(Pair::two(*q, Literal::neg(r)));
                }
                _ => pairs.push(pair.clone()),
            }
        }
        blocks.push(PivotBlock {
            pivot: block.pivot,
            pairs,
        });
    }
    PivotedFormula::new(blocks, origins).expect("completion keeps the formula well formed")
}

/// Expands a complete pivoted formula into its clauses `(pivot ∨ p ∨ q)`.
pub fn pivoted_to_cnf(pf: &PivotedFormula) -> Result<CnfFormula, PivotError> {
    if !pf.is_complete() {
        return Err(PivotError::Incomplete);
    }
    Ok(expand(pf))
}

/// Clause expansion that also accepts one-literal pairs, giving `(pivot ∨ q)`.
pub fn expand(pf: &PivotedFormula) -> CnfFormula {
    let mut clauses = Vec::with_capacity(pf.num_pairs());
    for block in pf.blocks() {
        for pair in &block.pairs {
            let mut lits = vec![block.pivot];
            lits.extend_from_slice(pair.literals());
            clauses.push(Clause::new(&lits).expect("short clause").expect("pivot is not an entry atom"));
        }
    }
    CnfFormula::new(pf.num_atoms(), clauses).expect("atoms are tagged")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn already_pivoted_shape() {
        // p=1 q=2 r=3 s=4 u=5
        let f = CnfFormula::from_dimacs_lists(5, &[&[1, 2, 3], &[-1, 4, 5]]);
        let pf = to_pivoted(&f);
        assert_eq!(pf.m(), 1);
        assert_eq!(pf.pivot_atom(1), 1);
        assert_eq!(pf.blocks()[0].pairs, vec![Pair::two(Literal::pos(2), Literal::pos(3))]);
        assert_eq!(pf.blocks()[1].pairs, vec![Pair::two(Literal::pos(4), Literal::pos(5))]);
        assert_eq!(pf.num_atoms(), 5);
    }

    #[test]
    fn empty_formula_gets_a_single_t_pivot() {
        let f = CnfFormula::new(0, vec![]).unwrap();
        let pf = to_pivoted(&f);
        assert_eq!(pf.m(), 1);
        assert_eq!(pf.origin(pf.pivot_atom(1)), AtomOrigin::FreshT);
        assert!(pf.blocks().iter().all(|b| b.pairs.is_empty()));
    }

    #[test]
    fn completion_pads_single_literals() {
        let pf = PivotedFormula::from_pivots(
            vec![(1, vec![Pair::one(Literal::pos(2))], vec![])],
            vec![AtomOrigin::Original; 2],
        )
        .unwrap();
        let done = complete(&pf);
        assert_eq!(
            done.blocks()[0].pairs,
            vec![
                Pair::two(Literal::pos(2), Literal::pos(3)),
                Pair::two(Literal::pos(2), Literal::neg(3))
            ]
        );
        assert_eq!(done.origin(3), AtomOrigin::FreshCompletion);
        assert_eq!(complete(&done), done);
    }

    #[test]
    fn expansion_is_one_clause_per_pair() {
        let pf = PivotedFormula::from_pivots(
            vec![(1, vec![Pair::two(Literal::pos(2), Literal::pos(3))], vec![])],
            vec![AtomOrigin::Original; 3],
        )
        .unwrap();
        let cnf = pivoted_to_cnf(&pf).unwrap();
        assert_eq!(cnf.clauses(), &[Clause::from_dimacs(&[1, 2, 3])]);
    }

    #[test]
    fn incomplete_formula_is_refused() {
        let pf = PivotedFormula::from_pivots(
            vec![(1, vec![Pair::one(Literal::pos(2))], vec![])],
            vec![AtomOrigin::Original; 2],
        )
        .unwrap();
        assert!(matches!(pivoted_to_cnf(&pf), Err(PivotError::Incomplete)));
    }

    #[test]
    fn units_stay_in_the_tail() {
        let f = CnfFormula::from_dimacs_lists(3, &[&[1], &[-1, 2, 3]]);
        let pf = to_pivoted(&f);
        // atom 1 occurs in a unit so it cannot be a direct pivot; 2 or 3 can.
        assert!(pf.direct_pivots() >= 1);
        assert_ne!(pf.pivot_atom(1), 1);
        let last = pf.m();
        assert_eq!(pf.origin(pf.pivot_atom(last)), AtomOrigin::FreshT);
    }
}
