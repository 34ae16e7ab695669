use std::collections::VecDeque;

use serde::Serialize;

use crate::{evaluate, Counters, CnfFormula, FormulaError, Literal, Valuation, Verdict};

/// One implication `from ⇒ to` read off clause `clause_index` of the formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Implication {
    pub from: Literal,
    pub to: Literal,
    pub clause_index: usize,
}

/// An atom `a` together with chains `¬a ⇒ … ⇒ a` and `a ⇒ … ⇒ ¬a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Contradiction {
    pub atom: u32,
    pub to_positive: Vec<Implication>,
    pub to_negative: Vec<Implication>,
}

impl Contradiction {
    /// Checks both chains edge by edge against the clauses of `f`.
    pub fn replays(&self, f: &CnfFormula) -> bool {
        let a = Literal::pos(self.atom);
        chain_replays(f, &self.to_positive, a.negate(), a) && chain_replays(f, &self.to_negative, a, a.negate())
    }
}

fn chain_replays(f: &CnfFormula, chain: &[Implication], start: Literal, end: Literal) -> bool {
    if chain.is_empty() || chain[0].from != start || chain[chain.len() - 1].to != end {
        return false;
    }
    if chain.windows(2).any(|w| w[0].to != w[1].from) {
        return false;
    }
    chain.iter().all(|imp| {
        let Some(clause) = f.clauses().get(imp.clause_index) else {
            return false;
        };
        if imp.from == imp.to.negate() {
            clause.len() == 1 && clause.contains(imp.to)
        } else {
            clause.len() == 2 && clause.contains(imp.from.negate()) && clause.contains(imp.to)
        }
    })
}

#[derive(Debug, Clone)]
pub struct TwoSatOutcome {
    pub verdict: Verdict,
    pub contradiction: Option<Contradiction>,
}

struct ImplicationGraph {
    /// `succ[l]` lists `(target, clause_index)` for literal index `l`.
    succ: Vec<Vec<(usize, usize)>>,
}

impl ImplicationGraph {
    fn build(f: &CnfFormula) -> Self {
        let mut succ = vec![Vec::new(); 2 * f.num_atoms() as usize];
        for (ci, clause) in f.clauses().iter().enumerate() {
            match clause.literals() {
                [l] => succ[l.negate().index()].push((l.index(), ci)),
                [p, q] => {
                    succ[p.negate().index()].push((q.index(), ci));
                    succ[q.negate().index()].push((p.index(), ci));
                }
                _ => unreachable!("checked by caller"),
            }
        }
        Self { succ }
    }

    fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// Breadth-first search; returns the parent edge of each reached vertex.
    fn bfs(&self, start: usize, steps: &mut u64) -> Vec<Option<(usize, usize)>> {
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.succ.len()];
        let mut seen = vec![false; self.succ.len()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &(v, ci) in &self.succ[u] {
                *steps += 1;
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some((u, ci));
                    queue.push_back(v);
                }
            }
        }
        parent
    }

    fn reachable(&self, start: usize, steps: &mut u64) -> Vec<bool> {
        let parent = self.bfs(start, steps);
        let mut out: Vec<bool> = parent.iter().map(Option::is_some).collect();
        out[start] = true;
        out
    }
}

fn extract_path(parent: &[Option<(usize, usize)>], start: usize, end: usize) -> Option<Vec<Implication>> {
    if start == end {
        return None;
    }
    let mut path = Vec::new();
    let mut cur = end;
    while cur != start {
        let (prev, ci) = parent[cur]?;
        path.push(Implication {
            from: Literal::from_index(prev),
            to: Literal::from_index(cur),
            clause_index: ci,
        });
        cur = prev;
    }
    path.reverse();
    Some(path)
}

/// Decides a 2-CNF formula by the forcing-chain criterion.
///
/// UNSAT iff some atom `a` has both `¬a ⇒* a` and `a ⇒* ¬a` in the implication graph.
/// UNSAT outcomes carry both chains; SAT outcomes carry a checked model.
pub fn solve_2sat(f: &CnfFormula) -> Result<TwoSatOutcome, FormulaError> {
    if let Some(c) = f.clauses().iter().find(|c| c.len() > 2) {
        return Err(FormulaError::NotTwoCnf(c.len()));
    }
    let graph = ImplicationGraph::build(f);
    let mut counters = Counters::new();
    counters.set("twosat.vertices", graph.succ.len() as u64);
    counters.set("twosat.edges", graph.edge_count() as u64);
    let mut steps = 0u64;

    let mut forced_false = vec![false; f.num_atoms() as usize + 1];
    for atom in 1..=f.num_atoms() {
        let a = Literal::pos(atom);
        let from_neg = graph.bfs(a.negate().index(), &mut steps);
        let from_pos = graph.bfs(a.index(), &mut steps);
        let up = extract_path(&from_neg, a.negate().index(), a.index());
        let down = extract_path(&from_pos, a.index(), a.negate().index());
        match (up, down) {
            (Some(to_positive), Some(to_negative)) => {
                counters.set("twosat.bfs_steps", steps);
                let contradiction = Contradiction {
                    atom,
                    to_positive,
                    to_negative,
                };
                debug_assert!(contradiction.replays(f));
                return Ok(TwoSatOutcome {
                    verdict: Verdict::unsat(counters),
                    contradiction: Some(contradiction),
                });
            }
            (_, Some(_)) => forced_false[atom as usize] = true,
            _ => {}
        }
    }

    // No atom is forced both ways: choose a literal that does not imply its
    // complement and make everything it reaches true.
    let mut value: Vec<Option<bool>> = vec![None; f.num_atoms() as usize + 1];
    for atom in 1..=f.num_atoms() {
        if value[atom as usize].is_some() {
            continue;
        }
        let chosen = if forced_false[atom as usize] {
            Literal::neg(atom)
        } else {
            Literal::pos(atom)
        };
        let reach = graph.reachable(chosen.index(), &mut steps);
        for (idx, hit) in reach.iter().enumerate() {
            if *hit {
                let lit = Literal::from_index(idx);
                let slot = &mut value[lit.atom() as usize];
                debug_assert!(slot.is_none() || *slot == Some(!lit.is_negated()));
                *slot = Some(!lit.is_negated());
            }
        }
    }
    counters.set("twosat.bfs_steps", steps);
    let model = Valuation::new(value[1..].iter().map(|v| v.unwrap_or(false)).collect());
    if !evaluate(f, &model)? {
        return Err(FormulaError::Internal("2-SAT model construction failed".into()));
    }
    Ok(TwoSatOutcome {
        verdict: Verdict::sat(Some(model), counters),
        contradiction: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Status;

    #[test]
    fn single_clause_is_sat() {
        let f = CnfFormula::from_dimacs_lists(2, &[&[1, 2]]);
        let out = solve_2sat(&f).unwrap();
        assert_eq!(out.verdict.status, Status::Sat);
        assert!(evaluate(&f, out.verdict.witness.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn all_four_sign_patterns_are_unsat() {
        let f = CnfFormula::from_dimacs_lists(2, &[&[1, 2], &[1, -2], &[-1, 2], &[-1, -2]]);
        let out = solve_2sat(&f).unwrap();
        assert_eq!(out.verdict.status, Status::Unsat);
        assert!(out.contradiction.unwrap().replays(&f));
    }

    #[test]
    fn witness_shape_for_three_atom_example() {
        // (a|b)&(~b|a)&(~a|c)&(~c|~a) with a=1, b=2, c=3
        let f = CnfFormula::from_dimacs_lists(3, &[&[1, 2], &[-2, 1], &[-1, 3], &[-3, -1]]);
        let out = solve_2sat(&f).unwrap();
        assert_eq!(out.verdict.status, Status::Unsat);
        let w = out.contradiction.unwrap();
        assert_eq!(w.atom, 1);
        assert_eq!(w.to_positive.first().unwrap().from, Literal::neg(1));
        assert_eq!(w.to_positive.last().unwrap().to, Literal::pos(1));
        assert_eq!(w.to_negative.first().unwrap().from, Literal::pos(1));
        assert_eq!(w.to_negative.last().unwrap().to, Literal::neg(1));
        assert!(w.replays(&f));
    }

    #[test]
    fn unit_clauses_become_self_edges_of_the_complement() {
        let f = CnfFormula::from_dimacs_lists(1, &[&[1], &[-1]]);
        let w = solve_2sat(&f).unwrap().contradiction.unwrap();
        assert_eq!(w.to_positive.len(), 1);
        assert_eq!(w.to_negative.len(), 1);
        assert!(w.replays(&f));
    }

    #[test]
    fn three_literal_clause_is_rejected() {
        let f = CnfFormula::from_dimacs_lists(3, &[&[1, 2, 3]]);
        assert!(matches!(solve_2sat(&f), Err(FormulaError::NotTwoCnf(3))));
    }

    #[test]
    fn tampered_witness_fails_replay() {
        let f = CnfFormula::from_dimacs_lists(2, &[&[1, 2], &[1, -2], &[-1, 2], &[-1, -2]]);
        let mut w = solve_2sat(&f).unwrap().contradiction.unwrap();
        w.to_positive[0].clause_index = (w.to_positive[0].clause_index + 1) % 4;
        assert!(!w.replays(&f));
    }
}
