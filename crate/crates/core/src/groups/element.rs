use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A letter of a word in a free group: generator index (0-based) and orientation.
///
/// Letters order as `a < A < b < B < ...`, which fixes the lexicographic part
/// of the length-then-lex order on reduced words.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub generator: u16,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: u16, inverse: bool) -> Self {
        Self { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Self { generator: self.generator, inverse: !self.inverse }
    }

    pub fn to_char(self) -> char {
        let base = if self.inverse { b'A' } else { b'a' };
        (base + self.generator as u8) as char
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'a'..='z' => Some(Self::new(c as u16 - 'a' as u16, false)),
            'A'..='Z' => Some(Self::new(c as u16 - 'A' as u16, true)),
            _ => None,
        }
    }
}

/// Canonical form of a group element.
///
/// Which variant is meaningful depends on the owning [`GroupDescriptor`](super::GroupDescriptor):
/// integers carry one integer, lattices a coordinate vector, finite groups a
/// table id and free groups a freely reduced word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupElement {
    Int(i64),
    Lattice(Vec<i64>),
    Finite(usize),
    Word(Vec<Letter>),
}

impl GroupElement {
    fn variant_rank(&self) -> u8 {
        match self {
            GroupElement::Int(_) => 0,
            GroupElement::Lattice(_) => 1,
            GroupElement::Finite(_) => 2,
            GroupElement::Word(_) => 3,
        }
    }

    /// Parses a free-group word written over `a..z` (generators) and `A..Z`
    /// (inverses). The empty string and `"1"` denote the identity. The word
    /// is freely reduced.
    pub fn word(s: &str) -> Option<Self> {
        if s == "1" {
            return Some(GroupElement::Word(Vec::new()));
        }
        let mut letters: Vec<Letter> = Vec::with_capacity(s.len());
        for c in s.chars() {
            let l = Letter::from_char(c)?;
            if letters.last() == Some(&l.inv()) {
                letters.pop();
            } else {
                letters.push(l);
            }
        }
        Some(GroupElement::Word(letters))
    }

    pub fn lattice(coords: &[i64]) -> Self {
        GroupElement::Lattice(coords.to_vec())
    }
}

impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        use GroupElement::*;
        match (self, other) {
            (Int(a), Int(b)) => a.cmp(b),
            (Lattice(a), Lattice(b)) => a.cmp(b),
            (Finite(a), Finite(b)) => a.cmp(b),
            (Word(a), Word(b)) => a.len().cmp(&b.len()).then_with(|| a.cmp(b)),
            _ => self.variant_rank().cmp(&other.variant_rank()),
        }
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Int(k) => write!(f, "{k}"),
            GroupElement::Lattice(v) => {
                write!(f, "(")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            GroupElement::Finite(id) => write!(f, "#{id}"),
            GroupElement::Word(w) if w.is_empty() => write!(f, "1"),
            GroupElement::Word(w) => {
                for l in w {
                    write!(f, "{}", l.to_char())?;
                }
                Ok(())
            }
        }
    }
}
