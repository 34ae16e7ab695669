use std::fmt;

use serde::{Deserialize, Serialize};

use crate::FormulaError;

/// A propositional literal: an atom id (starting at 1) with a polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Literal {
    atom: u32,
    negated: bool,
}

impl Literal {
    pub fn new(atom: u32, negated: bool) -> Result<Self, FormulaError> {
        if atom == 0 {
            return Err(FormulaError::ZeroAtom);
        }
        Ok(Self { atom, negated })
    }

    /// Positive literal for `atom`. Panics on atom 0.
    pub fn pos(atom: u32) -> Self {
        assert!(atom >= 1, "atom ids start at 1");
        Self {
            atom,
            negated: false,
        }
    }

    /// Negative literal for `atom`. Panics on atom 0.
    pub fn neg(atom: u32) -> Self {
        assert!(atom >= 1, "atom ids start at 1");
        Self {
            atom,
            negated: true,
        }
    }

    pub fn from_dimacs(value: i64) -> Result<Self, FormulaError> {
        if value == 0 {
            return Err(FormulaError::ZeroAtom);
        }
        let atom = u32::try_from(value.unsigned_abs()).map_err(|_| FormulaError::AtomTooLarge(value))?;
        Ok(Self {
            atom,
            negated: value < 0,
        })
    }

    pub fn to_dimacs(self) -> i64 {
        if self.negated {
            -(self.atom as i64)
        } else {
            self.atom as i64
        }
    }

    pub fn atom(self) -> u32 {
        self.atom
    }

    pub fn is_negated(self) -> bool {
        self.negated
    }

    pub fn negate(self) -> Self {
        Self {
            atom: self.atom,
            negated: !self.negated,
        }
    }

    /// Value of the literal when its atom takes `atom_value`.
    pub fn holds_under(self, atom_value: bool) -> bool {
        atom_value != self.negated
    }

    /// Dense index in `0..2n`: `2(atom-1)` for the positive literal, `+1` for the negative one.
    pub fn index(self) -> usize {
        2 * (self.atom as usize - 1) + usize::from(self.negated)
    }

    pub fn from_index(index: usize) -> Self {
        Self {
            atom: (index / 2) as u32 + 1,
            negated: index % 2 == 1,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "~x{}", self.atom)
        } else {
            write!(f, "x{}", self.atom)
        }
    }
}

/// A disjunction of one to three distinct, non-complementary literals.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    /// Builds a clause, collapsing duplicates while keeping first-occurrence order.
    ///
    /// Returns `Ok(None)` for a tautology (a clause containing both `l` and `~l`).
    pub fn new(literals: &[Literal]) -> Result<Option<Self>, FormulaError> {
        let mut kept: Vec<Literal> = Vec::with_capacity(literals.len());
        for &lit in literals {
            if kept.contains(&lit.negate()) {
                return Ok(None);
            }
            if !kept.contains(&lit) {
                kept.push(lit);
            }
        }
        match kept.len() {
            0 => Err(FormulaError::EmptyClause),
            1..=3 => Ok(Some(Self { literals: kept })),
            n => Err(FormulaError::ClauseTooLong(n)),
        }
    }

    /// Convenience constructor from DIMACS integers; panics on invalid input.
    pub fn from_dimacs(values: &[i64]) -> Self {
        let lits: Vec<Literal> = values
            .iter()
            .map(|&v| Literal::from_dimacs(v).expect("valid literal"))
            .collect();
        Self::new(&lits)
            .expect("valid clause")
            .expect("non-tautological clause")
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn max_atom(&self) -> u32 {
        self.literals.iter().map(|l| l.atom()).max().unwrap_or(0)
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.literals.contains(&lit)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, lit) in self.literals.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{lit}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negation_is_an_involution() {
        let l = Literal::pos(4);
        assert_eq!(l.negate().negate(), l);
        assert_ne!(l.negate(), l);
    }

    #[test]
    fn atom_zero_is_rejected() {
        assert!(matches!(Literal::new(0, false), Err(FormulaError::ZeroAtom)));
        assert!(matches!(Literal::from_dimacs(0), Err(FormulaError::ZeroAtom)));
    }

    #[test]
    fn dense_index_round_trips() {
        for i in 0..40 {
            assert_eq!(Literal::from_index(i).index(), i);
        }
        assert_eq!(Literal::neg(1).index(), 1);
    }

    #[test]
    fn duplicates_collapse_and_tautologies_vanish() {
        let c = Clause::new(&[Literal::pos(1), Literal::pos(1), Literal::neg(2)])
            .unwrap()
            .unwrap();
        assert_eq!(c.literals(), &[Literal::pos(1), Literal::neg(2)]);
        assert!(Clause::new(&[Literal::pos(1), Literal::neg(1)]).unwrap().is_none());
    }

    #[test]
    fn clause_length_bounds() {
        let four: Vec<Literal> = (1..=4).map(Literal::pos).collect();
        assert!(matches!(Clause::new(&four), Err(FormulaError::ClauseTooLong(4))));
        assert!(matches!(Clause::new(&[]), Err(FormulaError::EmptyClause)));
    }
}
