use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Clause, FormulaError, Literal};

/// A conjunction of clauses over atoms `1..=num_atoms`. The empty conjunction is ⊤.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CnfFormula {
    num_atoms: u32,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(num_atoms: u32, clauses: Vec<Clause>) -> Result<Self, FormulaError> {
        for clause in &clauses {
            let max = clause.max_atom();
            if max > num_atoms {
                return Err(FormulaError::AtomOutOfRange {
                    atom: max,
                    num_atoms,
                });
            }
        }
        Ok(Self { num_atoms, clauses })
    }

    /// Builds a formula from raw literal lists, dropping tautological clauses.
    pub fn from_literal_lists(num_atoms: u32, lists: &[Vec<Literal>]) -> Result<Self, FormulaError> {
        let mut clauses = Vec::with_capacity(lists.len());
        for (i, lits) in lists.iter().enumerate() {
            match Clause::new(lits)? {
                Some(c) => clauses.push(c),
                None => log::info!("clause {} is a tautology and was dropped", i + 1),
            }
        }
        Self::new(num_atoms, clauses)
    }

    /// Test helper: DIMACS-style integer lists. Panics on malformed input.
    pub fn from_dimacs_lists(num_atoms: u32, lists: &[&[i64]]) -> Self {
        let lists: Vec<Vec<Literal>> = lists
            .iter()
            .map(|c| c.iter().map(|&v| Literal::from_dimacs(v).expect("literal")).collect())
            .collect();
        Self::from_literal_lists(num_atoms, &lists).expect("well-formed formula")
    }

    pub fn num_atoms(&self) -> u32 {
        self.num_atoms
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_two_cnf(&self) -> bool {
        self.clauses.iter().all(|c| c.len() <= 2)
    }

    /// Same clauses with the atom universe widened (never narrowed below the largest used atom).
    pub fn with_num_atoms(&self, num_atoms: u32) -> Result<Self, FormulaError> {
        Self::new(num_atoms, self.clauses.clone())
    }

    /// Largest atom id actually used by some clause.
    pub fn max_used_atom(&self) -> u32 {
        self.clauses.iter().map(Clause::max_atom).max().unwrap_or(0)
    }
}

impl fmt::Display for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            return write!(f, "T");
        }
        for (i, c) in self.clauses.iter().enumerate() {
            if i > 0 {
                write!(f, " & ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A total truth assignment to atoms `1..=len`.
///
/// Serialized as the list of true literals in DIMACS form, e.g. `[1, -2, 3]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Valuation {
    values: Vec<bool>,
}

impl Valuation {
    pub fn new(values: Vec<bool>) -> Self {
        Self { values }
    }

    pub fn all_false(num_atoms: u32) -> Self {
        Self {
            values: vec![false; num_atoms as usize],
        }
    }

    /// Decodes bit `i` of `bits` as the value of atom `i+1`.
    pub fn from_bits(num_atoms: u32, bits: u64) -> Self {
        Self {
            values: (0..num_atoms).map(|i| (bits >> i) & 1 == 1).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, atom: u32) -> Option<bool> {
        if atom == 0 {
            return None;
        }
        self.values.get(atom as usize - 1).copied()
    }

    pub fn set(&mut self, atom: u32, value: bool) {
        let idx = atom as usize - 1;
        if idx >= self.values.len() {
            self.values.resize(idx + 1, false);
        }
        self.values[idx] = value;
    }

    pub fn literal_holds(&self, lit: Literal) -> Option<bool> {
        self.get(lit.atom()).map(|v| lit.holds_under(v))
    }

    /// Keeps atoms `1..=num_atoms` only.
    pub fn restrict(&self, num_atoms: u32) -> Self {
        Self {
            values: self.values.iter().copied().take(num_atoms as usize).collect(),
        }
    }

    pub fn to_dimacs(&self) -> Vec<i64> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| if v { i as i64 + 1 } else { -(i as i64 + 1) })
            .collect()
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }
}

impl Serialize for Valuation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_dimacs().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Valuation {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = Vec::<i64>::deserialize(deserializer)?;
        let mut values = vec![false; raw.len()];
        for v in raw {
            let idx = v.unsigned_abs() as usize;
            if idx == 0 || idx > values.len() {
                return Err(serde::de::Error::custom(format!("atom {v} out of range")));
            }
            values[idx - 1] = v > 0;
        }
        Ok(Self { values })
    }
}

/// True iff every clause has a literal true under `v`.
pub fn evaluate(f: &CnfFormula, v: &Valuation) -> Result<bool, FormulaError> {
    if (v.len() as u64) < f.num_atoms() as u64 {
        return Err(FormulaError::PartialValuation {
            needed: f.num_atoms(),
            given: v.len(),
        });
    }
    Ok(f.clauses().iter().all(|c| {
        c.literals()
            .iter()
            .any(|&l| v.literal_holds(l).expect("valuation covers the formula"))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_true_disjunct_suffices() {
        let f = CnfFormula::from_dimacs_lists(2, &[&[1, 2]]);
        let v = Valuation::new(vec![false, true]);
        assert!(evaluate(&f, &v).unwrap());
    }

    #[test]
    fn conjugated_units_are_false_everywhere() {
        let f = CnfFormula::from_dimacs_lists(1, &[&[1], &[-1]]);
        for bits in 0..2 {
            assert!(!evaluate(&f, &Valuation::from_bits(1, bits)).unwrap());
        }
    }

    #[test]
    fn empty_formula_is_true() {
        let f = CnfFormula::new(3, vec![]).unwrap();
        assert!(evaluate(&f, &Valuation::all_false(3)).unwrap());
    }

    #[test]
    fn partial_valuation_is_a_contract_violation() {
        let f = CnfFormula::from_dimacs_lists(3, &[&[1, 3]]);
        assert!(matches!(
            evaluate(&f, &Valuation::all_false(2)),
            Err(FormulaError::PartialValuation { needed: 3, given: 2 })
        ));
    }

    #[test]
    fn out_of_range_atoms_are_rejected() {
        let c = Clause::from_dimacs(&[1, 5]);
        assert!(CnfFormula::new(4, vec![c]).is_err());
    }

    #[test]
    fn tautologies_are_dropped() {
        let f = CnfFormula::from_dimacs_lists(2, &[&[1, -1, 2], &[2]]);
        assert_eq!(f.num_clauses(), 1);
    }

    #[test]
    fn valuation_json_round_trip() {
        let v = Valuation::new(vec![true, false, true]);
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, "[1,-2,3]");
        let back: Valuation = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
    }
}
