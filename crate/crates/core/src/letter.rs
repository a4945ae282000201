//! Letters of the ordered alphabet, letter sets and the two edge/bracket colors.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{LiebraError, Result};

/// Largest supported alphabet. Letter sets are stored as `u32` bitmasks.
pub const MAX_LETTERS: usize = 31;

/// The letter `x_i` of the alphabet `x_1 < x_2 < ... < x_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Letter(u8);

impl Letter {
    /// Panics if `index` is outside `1..=MAX_LETTERS`.
    pub fn new(index: u8) -> Self {
        assert!(
            index >= 1 && (index as usize) <= MAX_LETTERS,
            "letter index {index} out of range"
        );
        Letter(index)
    }

    pub fn try_new(index: u32) -> Result<Self> {
        if index == 0 || index as usize > MAX_LETTERS {
            return Err(LiebraError::LetterOutOfRange {
                letter: Letter(index.min(255) as u8),
                n: MAX_LETTERS,
            });
        }
        Ok(Letter(index as u8))
    }

    #[inline]
    pub fn index(self) -> u8 {
        self.0
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// Edge color of a two-colored graph, or vertex color of a 2v-colored binary tree.
///
/// `Red` is the bracket `[.,.]`, `Blue` is `<.,.>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Color {
    #[serde(rename = "r")]
    Red,
    #[serde(rename = "b")]
    Blue,
}

impl Color {
    pub const BOTH: [Color; 2] = [Color::Red, Color::Blue];

    pub fn flip(self) -> Color {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }

    pub fn code(self) -> char {
        match self {
            Color::Red => 'r',
            Color::Blue => 'b',
        }
    }

    pub fn from_code(c: char) -> Option<Color> {
        match c {
            'r' | 'R' => Some(Color::Red),
            'b' | 'B' => Some(Color::Blue),
            _ => None,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

/// A finite set of letters, stored as a bitmask (bit `i` is letter `x_i`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LetterSet(u32);

impl LetterSet {
    pub const EMPTY: LetterSet = LetterSet(0);

    /// The full alphabet `{x_1, ..., x_n}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_LETTERS, "alphabet size {n} too large");
        LetterSet(((1u64 << (n + 1)) - 2) as u32)
    }

    pub fn singleton(x: Letter) -> Self {
        LetterSet(1 << x.0)
    }

    pub fn from_bits(bits: u32) -> Self {
        LetterSet(bits & !1)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn contains(self, x: Letter) -> bool {
        self.0 & (1 << x.0) != 0
    }

    pub fn insert(&mut self, x: Letter) -> bool {
        let had = self.contains(x);
        self.0 |= 1 << x.0;
        !had
    }

    pub fn remove(&mut self, x: Letter) {
        self.0 &= !(1 << x.0);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: LetterSet) -> LetterSet {
        LetterSet(self.0 | other.0)
    }

    pub fn intersection(self, other: LetterSet) -> LetterSet {
        LetterSet(self.0 & other.0)
    }

    pub fn difference(self, other: LetterSet) -> LetterSet {
        LetterSet(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: LetterSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: LetterSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn min(self) -> Option<Letter> {
        (self.0 != 0).then(|| Letter(self.0.trailing_zeros() as u8))
    }

    pub fn max(self) -> Option<Letter> {
        (self.0 != 0).then(|| Letter(31 - self.0.leading_zeros() as u8))
    }

    /// Letters in increasing order.
    pub fn iter(self) -> impl Iterator<Item = Letter> + Clone {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros();
                bits &= bits - 1;
                Some(Letter(i as u8))
            }
        })
    }

    /// Whether the set is exactly `{x_1, ..., x_k}` for `k = len()`.
    pub fn is_initial(self) -> bool {
        self == LetterSet::full(self.len())
    }
}

impl FromIterator<Letter> for LetterSet {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        let mut s = LetterSet::EMPTY;
        for x in iter {
            s.insert(x);
        }
        s
    }
}

impl fmt::Display for LetterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

pub(crate) fn check_alphabet(n: usize) -> Result<()> {
    if n == 0 {
        Err(LiebraError::EmptyAlphabet)
    } else if n > MAX_LETTERS {
        Err(LiebraError::AlphabetTooLarge(n))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_set_has_expected_letters() {
        let s = LetterSet::full(4);
        assert_eq!(s.len(), 4);
        assert_eq!(s.min(), Some(Letter::new(1)));
        assert_eq!(s.max(), Some(Letter::new(4)));
        assert!(s.is_initial());
        assert_eq!(s.iter().map(Letter::index).collect::<Vec<_>>(), vec![1, 2, 3, 4]);
        assert_eq!(LetterSet::full(0), LetterSet::EMPTY);
        assert_eq!(LetterSet::full(MAX_LETTERS).len(), MAX_LETTERS);
    }

    #[test]
    fn set_algebra() {
        let a: LetterSet = [1, 3, 5].map(Letter::new).into_iter().collect();
        let b: LetterSet = [3, 4].map(Letter::new).into_iter().collect();
        assert_eq!(a.union(b).len(), 4);
        assert_eq!(a.intersection(b), LetterSet::singleton(Letter::new(3)));
        assert_eq!(a.difference(b).len(), 2);
        assert!(!a.is_initial());
        assert_eq!(a.to_string(), "{x1,x3,x5}");
    }
}
