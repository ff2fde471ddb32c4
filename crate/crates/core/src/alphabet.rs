//! Alphabets, the gap-augmented symbol set and the canonical ordering of
//! symbol pairs.
//!
//! Pairs are ordered row-major over `letters ++ [gap]`, with the gap-gap pair
//! (which would be last) left out. For a `k`-letter alphabet this gives
//! `(k + 1)^2 - 1` coordinates; for `{a, b}` the order is
//! `aa, ab, aG, ba, bb, bG, Ga, Gb`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Character used for the gap symbol in text renderings.
pub const GAP_CHAR: char = '-';

/// A letter (by its index in the alphabet) or the gap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Letter(u8),
    Gap,
}

impl Symbol {
    pub fn is_gap(self) -> bool {
        matches!(self, Symbol::Gap)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<char>", into = "Vec<char>")]
pub struct Alphabet {
    letters: Vec<char>,
}

impl Alphabet {
    pub fn new<I: IntoIterator<Item = char>>(letters: I) -> Result<Self> {
        let letters: Vec<char> = letters.into_iter().collect();
        if letters.len() < 2 {
            return Err(Error::InvalidAlphabet(format!(
                "need at least 2 letters, got {}",
                letters.len()
            )));
        }
        if letters.len() > u8::MAX as usize {
            return Err(Error::InvalidAlphabet("too many letters".into()));
        }
        for (i, &c) in letters.iter().enumerate() {
            if c == GAP_CHAR || c.is_whitespace() {
                return Err(Error::InvalidAlphabet(format!("{c:?} is reserved")));
            }
            if letters[..i].contains(&c) {
                return Err(Error::InvalidAlphabet(format!("duplicate letter {c:?}")));
            }
        }
        Ok(Alphabet { letters })
    }

    /// The alphabet whose letters are the characters of `s`, in order.
    pub fn parse(s: &str) -> Result<Self> {
        Alphabet::new(s.chars())
    }

    pub fn binary() -> Self {
        Alphabet { letters: vec!['a', 'b'] }
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    /// Number of letters `k`, not counting the gap.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of pair coordinates, `(k + 1)^2 - 1`.
    pub fn dim(&self) -> usize {
        let s = self.len() + 1;
        s * s - 1
    }

    /// All symbols of the augmented alphabet, gap last.
    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.len() as u8).map(Symbol::Letter).chain(std::iter::once(Symbol::Gap))
    }

    pub fn letter_index(&self, c: char) -> Result<u8> {
        self.letters
            .iter()
            .position(|&l| l == c)
            .map(|i| i as u8)
            .ok_or(Error::UnknownLetter(c))
    }

    pub fn letter(&self, index: u8) -> Result<char> {
        self.letters
            .get(index as usize)
            .copied()
            .ok_or(Error::LetterOutOfRange(index as usize))
    }

    pub fn symbol_from_char(&self, c: char) -> Result<Symbol> {
        if c == GAP_CHAR {
            Ok(Symbol::Gap)
        } else {
            self.letter_index(c).map(Symbol::Letter)
        }
    }

    pub fn symbol_char(&self, s: Symbol) -> char {
        match s {
            Symbol::Letter(i) => self.letters[i as usize],
            Symbol::Gap => GAP_CHAR,
        }
    }

    fn code(&self, s: Symbol) -> Result<usize> {
        match s {
            Symbol::Letter(i) if (i as usize) < self.len() => Ok(i as usize),
            Symbol::Letter(i) => Err(Error::LetterOutOfRange(i as usize)),
            Symbol::Gap => Ok(self.len()),
        }
    }

    /// Canonical coordinate of the pair `(u, v)`.
    pub fn pair_index(&self, u: Symbol, v: Symbol) -> Result<usize> {
        if u.is_gap() && v.is_gap() {
            return Err(Error::GapGapColumn);
        }
        Ok(self.code(u)? * (self.len() + 1) + self.code(v)?)
    }

    /// Inverse of [`Alphabet::pair_index`].
    pub fn pair_at(&self, index: usize) -> Result<(Symbol, Symbol)> {
        if index >= self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: index + 1 });
        }
        let s = self.len() + 1;
        let decode = |c: usize| if c == self.len() { Symbol::Gap } else { Symbol::Letter(c as u8) };
        Ok((decode(index / s), decode(index % s)))
    }

    /// Human-readable label such as `"aG"` for a coordinate.
    pub fn pair_label(&self, index: usize) -> String {
        match self.pair_at(index) {
            Ok((u, v)) => {
                let c = |s: Symbol| if s.is_gap() { 'G' } else { self.symbol_char(s) };
                format!("{}{}", c(u), c(v))
            }
            Err(_) => "?".into(),
        }
    }

    /// Coordinates whose first symbol is a letter.
    pub fn x_letter_coords(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim()).filter(move |&i| matches!(self.pair_at(i), Ok((Symbol::Letter(_), _))))
    }

    /// Coordinates whose second symbol is a letter.
    pub fn y_letter_coords(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim()).filter(move |&i| matches!(self.pair_at(i), Ok((_, Symbol::Letter(_)))))
    }
}

impl TryFrom<Vec<char>> for Alphabet {
    type Error = Error;

    fn try_from(letters: Vec<char>) -> Result<Self> {
        Alphabet::new(letters)
    }
}

impl From<Alphabet> for Vec<char> {
    fn from(a: Alphabet) -> Vec<char> {
        a.letters
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.letters.iter().try_for_each(|c| write!(f, "{c}"))
    }
}
