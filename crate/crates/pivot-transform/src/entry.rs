use std::fmt;

use serde::{Deserialize, Serialize};

/// Which block of a pivot an entry selects: the block guarded by `aᵢ` (1) or by `¬aᵢ` (2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Self {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }

    /// 1 for the positive block, 2 for the negative one.
    pub fn code(self) -> u8 {
        match self {
            Polarity::Positive => 1,
            Polarity::Negative => 2,
        }
    }
}

/// An entry `(i, j)`: pivot index `i` (from 1) and block polarity `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Entry {
    pub pivot: u32,
    pub polarity: Polarity,
}

impl Entry {
    pub fn new(pivot: u32, polarity: Polarity) -> Self {
        Self { pivot, polarity }
    }

    pub fn pos(pivot: u32) -> Self {
        Self::new(pivot, Polarity::Positive)
    }

    pub fn neg(pivot: u32) -> Self {
        Self::new(pivot, Polarity::Negative)
    }

    /// The other block of the same pivot.
    pub fn conjugate(self) -> Self {
        Self::new(self.pivot, self.polarity.flip())
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.pivot, self.polarity.code())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_groups_by_pivot() {
        let mut v = vec![Entry::neg(2), Entry::pos(2), Entry::neg(1)];
        v.sort();
        assert_eq!(v, vec![Entry::neg(1), Entry::pos(2), Entry::neg(2)]);
        assert_eq!(Entry::pos(3).conjugate(), Entry::neg(3));
        assert_eq!(Entry::neg(3).to_string(), "(3,2)");
    }
}
