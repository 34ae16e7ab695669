use std::collections::BTreeSet;
use std::fmt;

use formula_core::Literal;
use serde::{Deserialize, Serialize};

use crate::{Entry, PivotError, Polarity};

/// Where an atom of a pivoted formula comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AtomOrigin {
    Original,
    FreshR,
    FreshT,
    FreshCompletion,
}

impl AtomOrigin {
    pub fn tag(self) -> &'static str {
        match self {
            AtomOrigin::Original => "original",
            AtomOrigin::FreshR => "fresh-r",
            AtomOrigin::FreshT => "fresh-t",
            AtomOrigin::FreshCompletion => "fresh-completion",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "original" => Some(AtomOrigin::Original),
            "fresh-r" => Some(AtomOrigin::FreshR),
            "fresh-t" => Some(AtomOrigin::FreshT),
            "fresh-completion" => Some(AtomOrigin::FreshCompletion),
            _ => None,
        }
    }
}

/// A guarded disjunction of one or two literals. Complete formulas only hold two-literal pairs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Pair(Vec<Literal>);

impl Pair {
    pub fn two(p: Literal, q: Literal) -> Self {
        assert!(p != q && p != q.negate(), "pair literals must be distinct atoms");
        Self(vec![p, q])
    }

    pub fn one(q: Literal) -> Self {
        Self(vec![q])
    }

    pub fn literals(&self) -> &[Literal] {
        &self.0
    }

    pub fn is_complete(&self) -> bool {
        self.0.len() == 2
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.as_slice() {
            [q] => write!(f, "({q})"),
            [p, q] => write!(f, "({p} | {q})"),
            _ => unreachable!(),
        }
    }
}

/// The pairs guarded by one pivot literal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PivotBlock {
    pub pivot: Literal,
    pub pairs: Vec<Pair>,
}

/// A pivoted formula: for each pivot `aᵢ`, the blocks of `aᵢ` and `¬aᵢ`.
///
/// The clause reading is `⋀ᵢ (aᵢ ∨ ⋀ block(aᵢ)) ∧ (¬aᵢ ∨ ⋀ block(¬aᵢ))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PivotedFormula {
    blocks: Vec<PivotBlock>,
    origins: Vec<AtomOrigin>,
}

impl PivotedFormula {
    /// Builds and validates. `blocks[2(i-1)]` is guarded by `aᵢ`, `blocks[2(i-1)+1]` by `¬aᵢ`.
    pub fn new(blocks: Vec<PivotBlock>, origins: Vec<AtomOrigin>) -> Result<Self, PivotError> {
        let pf = Self { blocks, origins };
        pf.validate()?;
        Ok(pf)
    }

    /// Builds from `(pivot atom, positive pairs, negative pairs)` triples.
    pub fn from_pivots(pivots: Vec<(u32, Vec<Pair>, Vec<Pair>)>, origins: Vec<AtomOrigin>) -> Result<Self, PivotError> {
        let mut blocks = Vec::with_capacity(2 * pivots.len());
        for (atom, pos, neg) in pivots {
            blocks.push(PivotBlock {
                pivot: Literal::pos(atom),
                pairs: pos,
            });
            blocks.push(PivotBlock {
                pivot: Literal::neg(atom),
                pairs: neg,
            });
        }
        Self::new(blocks, origins)
    }

    fn validate(&self) -> Result<(), PivotError> {
        if self.blocks.is_empty() || self.blocks.len() % 2 != 0 {
            return Err(PivotError::Malformed(format!(
                "expected two blocks per pivot, found {}",
                self.blocks.len()
            )));
        }
        let n = self.num_atoms();
        let mut pivots = BTreeSet::new();
        for (i, pair) in self.blocks.chunks(2).enumerate() {
            let (pos, neg) = (&pair[0], &pair[1]);
            if pos.pivot.is_negated() || neg.pivot != pos.pivot.negate() {
                return Err(PivotError::Malformed(format!("pivot {} blocks are not a ±a pair", i + 1)));
            }
            if !pivots.insert(pos.pivot.atom()) {
                return Err(PivotError::Malformed(format!("atom {} is a pivot twice", pos.pivot.atom())));
            }
        }
        for block in &self.blocks {
            for pair in &block.pairs {
                let lits = pair.literals();
                if lits.is_empty() || lits.len() > 2 {
                    return Err(PivotError::Malformed("pairs hold one or two literals".into()));
                }
                if lits.len() == 2 && lits[0].atom() == lits[1].atom() {
                    return Err(PivotError::Malformed(format!("degenerate pair {pair}")));
                }
                for l in lits {
                    if l.atom() > n || block.pivot.atom() > n {
                        return Err(PivotError::Malformed(format!("atom {} has no origin tag", l.atom())));
                    }
                    if pivots.contains(&l.atom()) {
                        return Err(PivotError::PivotInEntry(l.atom()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn num_atoms(&self) -> u32 {
        self.origins.len() as u32
    }

    pub fn origins(&self) -> &[AtomOrigin] {
        &self.origins
    }

    pub fn origin(&self, atom: u32) -> AtomOrigin {
        self.origins[atom as usize - 1]
    }

    /// Number of pivots `m`.
    pub fn m(&self) -> u32 {
        (self.blocks.len() / 2) as u32
    }

    pub fn blocks(&self) -> &[PivotBlock] {
        &self.blocks
    }

    pub fn pivot_atom(&self, index: u32) -> u32 {
        self.blocks[2 * (index as usize - 1)].pivot.atom()
    }

    pub fn block(&self, entry: Entry) -> &PivotBlock {
        let base = 2 * (entry.pivot as usize - 1);
        match entry.polarity {
            Polarity::Positive => &self.blocks[base],
            Polarity::Negative => &self.blocks[base + 1],
        }
    }

    /// Blocks paired with their entries, in pivot order.
    pub fn entries(&self) -> impl Iterator<Item = (Entry, &PivotBlock)> {
        self.blocks.iter().enumerate().map(|(i, b)| {
            let pivot = (i / 2) as u32 + 1;
            let polarity = if i % 2 == 0 {
                Polarity::Positive
            } else {
                Polarity::Negative
            };
            (Entry::new(pivot, polarity), b)
        })
    }

    pub fn is_complete(&self) -> bool {
        self.blocks.iter().all(|b| b.pairs.iter().all(Pair::is_complete))
    }

    pub fn num_pairs(&self) -> usize {
        self.blocks.iter().map(|b| b.pairs.len()).sum()
    }

    pub fn count_origin(&self, origin: AtomOrigin) -> usize {
        self.origins.iter().filter(|&&o| o == origin).count()
    }

    /// Pivots whose atom is an original atom of the input.
    pub fn direct_pivots(&self) -> usize {
        (1..=self.m())
            .filter(|&i| self.origin(self.pivot_atom(i)) == AtomOrigin::Original)
            .count()
    }

    /// Number of deeper strata, i.e. fresh r pivots.
    pub fn strata(&self) -> usize {
        (1..=self.m())
            .filter(|&i| self.origin(self.pivot_atom(i)) == AtomOrigin::FreshR)
            .count()
    }

    /// Atoms occurring in some pair (entry literals).
    pub fn entry_atoms(&self) -> BTreeSet<u32> {
        self.blocks
            .iter()
            .flat_map(|b| b.pairs.iter().flat_map(|p| p.literals().iter().map(|l| l.atom())))
            .collect()
    }
}

impl fmt::Display for PivotedFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, " & ")?;
            }
            write!(f, "{} | [", block.pivot)?;
            for (j, p) in block.pairs.iter().enumerate() {
                if j > 0 {
                    write!(f, " & ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}
