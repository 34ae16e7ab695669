use crate::{evaluate, Counters, CnfFormula, Literal, Valuation, Verdict};

pub const DEFAULT_ORACLE_CAP: u32 = 24;

/// Exact SAT decision with the default atom cap.
pub fn brute_force_sat(f: &CnfFormula) -> Verdict {
    brute_force_sat_with_cap(f, DEFAULT_ORACLE_CAP)
}

/// Exact backtracking search with unit propagation.
///
/// Formulas with more than `cap` atoms are not attempted and yield ABORT("oracle cap").
pub fn brute_force_sat_with_cap(f: &CnfFormula, cap: u32) -> Verdict {
    let mut counters = Counters::new();
    counters.set("oracle.atoms", f.num_atoms() as u64);
    if f.num_atoms() > cap {
        return Verdict::abort("oracle cap", counters);
    }
    let mut search = Search {
        clauses: f.clauses().iter().map(|c| c.literals().to_vec()).collect(),
        assignment: vec![None; f.num_atoms() as usize + 1],
        trail: Vec::new(),
        nodes: 0,
        propagations: 0,
    };
    let found = search.solve();
    counters.set("oracle.nodes", search.nodes);
    counters.set("oracle.propagations", search.propagations);
    if found {
        let witness = Valuation::new(
            search.assignment[1..]
                .iter()
                .map(|v| v.unwrap_or(false))
                .collect(),
        );
        debug_assert!(evaluate(f, &witness).unwrap());
        Verdict::sat(Some(witness), counters)
    } else {
        Verdict::unsat(counters)
    }
}

/// Plain enumeration of all `2^n` valuations. Independent cross-check for tiny formulas.
pub fn exhaustive_sat(f: &CnfFormula) -> Option<Valuation> {
    assert!(f.num_atoms() <= 24, "exhaustive enumeration is for tiny formulas");
    (0..1u64 << f.num_atoms())
        .map(|bits| Valuation::from_bits(f.num_atoms(), bits))
        .find(|v| evaluate(f, v).expect("total valuation"))
}

struct Search {
    clauses: Vec<Vec<Literal>>,
    assignment: Vec<Option<bool>>,
    trail: Vec<u32>,
    nodes: u64,
    propagations: u64,
}

enum ClauseState {
    Satisfied,
    Conflict,
    Unit(Literal),
    Open(Literal),
}

impl Search {
    fn value(&self, lit: Literal) -> Option<bool> {
        self.assignment[lit.atom() as usize].map(|v| lit.holds_under(v))
    }

    fn assign(&mut self, lit: Literal) {
        self.assignment[lit.atom() as usize] = Some(!lit.is_negated());
        self.trail.push(lit.atom());
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let atom = self.trail.pop().expect("trail entry");
            self.assignment[atom as usize] = None;
        }
    }

    fn state(&self, clause: &[Literal]) -> ClauseState {
        let mut unassigned = None;
        let mut free = 0;
        for &lit in clause {
            match self.value(lit) {
                Some(true) => return ClauseState::Satisfied,
                Some(false) => {}
                None => {
                    free += 1;
                    unassigned = Some(lit);
                }
            }
        }
        match (free, unassigned) {
            (0, _) => ClauseState::Conflict,
            (1, Some(l)) => ClauseState::Unit(l),
            (_, Some(l)) => ClauseState::Open(l),
            _ => unreachable!(),
        }
    }

    /// Propagates units to a fixpoint; returns false on conflict.
    fn propagate(&mut self) -> bool {
        loop {
            let mut changed = false;
            for i in 0..self.clauses.len() {
                match self.state(&self.clauses[i]) {
                    ClauseState::Conflict => return false,
                    ClauseState::Unit(l) => {
                        self.propagations += 1;
                        self.assign(l);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn solve(&mut self) -> bool {
        self.nodes += 1;
        let mark = self.trail.len();
        if !self.propagate() {
            self.undo_to(mark);
            return false;
        }
        let branch = self.clauses.iter().find_map(|c| match self.state(c) {
            ClauseState::Open(l) => Some(l),
            _ => None,
        });
        let Some(lit) = branch else {
            return true;
        };
        for choice in [lit, lit.negate()] {
            let inner = self.trail.len();
            self.assign(choice);
            if self.solve() {
                return true;
            }
            self.undo_to(inner);
        }
        self.undo_to(mark);
        false
    }
}
