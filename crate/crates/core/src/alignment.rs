//! Gapped alignments of two letter strings.

use std::fmt;

use crate::alphabet::{Alphabet, Symbol, GAP_CHAR};
use crate::dist::DistVector;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::scoring::ScoringFunction;
use crate::sequence::LetterString;

/// One move of a monotone alignment path.
///
/// `Diagonal` pairs the next letters of `x` and `y`, `Horizontal` pairs the
/// next letter of `x` with a gap and `Vertical` pairs a gap with the next
/// letter of `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    Diagonal,
    Horizontal,
    Vertical,
}

impl Step {
    /// Tie-breaking priority order.
    pub const ALL: [Step; 3] = [Step::Diagonal, Step::Horizontal, Step::Vertical];

    pub fn bit(self) -> u8 {
        match self {
            Step::Diagonal => 1,
            Step::Horizontal => 2,
            Step::Vertical => 4,
        }
    }

    /// Grid offset `(di, dj)` consumed by the step.
    pub fn delta(self) -> (usize, usize) {
        match self {
            Step::Diagonal => (1, 1),
            Step::Horizontal => (1, 0),
            Step::Vertical => (0, 1),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Step::Diagonal => 'D',
            Step::Horizontal => 'H',
            Step::Vertical => 'V',
        }
    }

    pub fn from_char(c: char) -> Result<Step> {
        match c {
            'D' => Ok(Step::Diagonal),
            'H' => Ok(Step::Horizontal),
            'V' => Ok(Step::Vertical),
            other => Err(Error::InvalidPath(format!("unknown step {other:?}"))),
        }
    }
}

/// Ordered list of aligned symbol pairs; no column is gap-gap.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Alignment {
    columns: Vec<(Symbol, Symbol)>,
}

impl Alignment {
    pub fn new(columns: Vec<(Symbol, Symbol)>) -> Result<Self> {
        if columns.iter().any(|(u, v)| u.is_gap() && v.is_gap()) {
            return Err(Error::GapGapColumn);
        }
        Ok(Alignment { columns })
    }

    /// Parses the two-row gapped text form, e.g. `"aab-b"` over `"a-bab"`.
    pub fn from_rows(alphabet: &Alphabet, top: &str, bottom: &str) -> Result<Self> {
        let top: Vec<char> = top.chars().collect();
        let bottom: Vec<char> = bottom.chars().collect();
        if top.len() != bottom.len() {
            return Err(Error::InvalidAlignment("rows differ in length".into()));
        }
        let columns = top
            .iter()
            .zip(&bottom)
            .map(|(&u, &v)| Ok((alphabet.symbol_from_char(u)?, alphabet.symbol_from_char(v)?)))
            .collect::<Result<Vec<_>>>()?;
        Alignment::new(columns)
    }

    /// Builds the alignment traced by `steps` through `x` and `y`.
    pub fn from_steps(x: &LetterString, y: &LetterString, steps: &[Step]) -> Result<Self> {
        let (mut i, mut j) = (0, 0);
        let mut columns = Vec::with_capacity(steps.len());
        for &step in steps {
            let (di, dj) = step.delta();
            if i + di > x.len() || j + dj > y.len() {
                return Err(Error::InvalidPath("path leaves the grid".into()));
            }
            let u = if di == 1 { Symbol::Letter(x.letters()[i]) } else { Symbol::Gap };
            let v = if dj == 1 { Symbol::Letter(y.letters()[j]) } else { Symbol::Gap };
            columns.push((u, v));
            i += di;
            j += dj;
        }
        if (i, j) != (x.len(), y.len()) {
            return Err(Error::InvalidPath(format!("path ends at ({i}, {j})")));
        }
        Ok(Alignment { columns })
    }

    pub fn columns(&self) -> &[(Symbol, Symbol)] {
        &self.columns
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn steps(&self) -> Vec<Step> {
        self.columns
            .iter()
            .map(|(u, v)| match (u.is_gap(), v.is_gap()) {
                (false, false) => Step::Diagonal,
                (false, true) => Step::Horizontal,
                _ => Step::Vertical,
            })
            .collect()
    }

    /// Letters of `x` in this alignment (the non-gap top symbols).
    pub fn x_side(&self) -> Vec<u8> {
        self.columns
            .iter()
            .filter_map(|(u, _)| match u {
                Symbol::Letter(l) => Some(*l),
                Symbol::Gap => None,
            })
            .collect()
    }

    pub fn y_side(&self) -> Vec<u8> {
        self.columns
            .iter()
            .filter_map(|(_, v)| match v {
                Symbol::Letter(l) => Some(*l),
                Symbol::Gap => None,
            })
            .collect()
    }

    /// `true` when the alignment is an alignment of `x` with `y`.
    pub fn aligns(&self, x: &LetterString, y: &LetterString) -> bool {
        self.x_side() == x.letters() && self.y_side() == y.letters()
    }

    pub fn pair_counts(&self, alphabet: &Alphabet) -> Result<Vec<u32>> {
        let mut counts = vec![0u32; alphabet.dim()];
        for &(u, v) in &self.columns {
            counts[alphabet.pair_index(u, v)?] += 1;
        }
        Ok(counts)
    }

    /// `S_pi`: sum of the column scores.
    pub fn score<T: Scalar>(&self, scoring: &ScoringFunction<T>) -> Result<T> {
        self.columns
            .iter()
            .try_fold(T::zero(), |acc, &(u, v)| Ok(acc + scoring.get(u, v)?))
    }

    /// Empirical distribution vector: column counts divided by the common
    /// string length.
    pub fn empirical_distribution(&self, alphabet: &Alphabet) -> Result<DistVector> {
        let (nx, ny) = (self.x_side().len(), self.y_side().len());
        if nx != ny {
            return Err(Error::UnequalLengths { x: nx, y: ny });
        }
        if nx == 0 {
            return Err(Error::InvalidArgument("empty alignment has no distribution".into()));
        }
        DistVector::new(self.pair_counts(alphabet)?, nx)
    }

    pub fn to_rows(&self, alphabet: &Alphabet) -> (String, String) {
        let top = self.columns.iter().map(|&(u, _)| alphabet.symbol_char(u)).collect();
        let bottom = self.columns.iter().map(|&(_, v)| alphabet.symbol_char(v)).collect();
        (top, bottom)
    }

    /// The "all gaps" alignment `x1 - x2 - ... / - y1 - y2 ...`, legal for
    /// every pair of equal-length strings.
    pub fn all_gaps(x: &LetterString, y: &LetterString) -> Self {
        let mut columns = Vec::with_capacity(x.len() + y.len());
        let (xs, ys) = (x.letters(), y.letters());
        for i in 0..xs.len().max(ys.len()) {
            if let Some(&a) = xs.get(i) {
                columns.push((Symbol::Letter(a), Symbol::Gap));
            }
            if let Some(&b) = ys.get(i) {
                columns.push((Symbol::Gap, Symbol::Letter(b)));
            }
        }
        Alignment { columns }
    }
}

/// Free-function form of [`Alignment::score`].
pub fn score_alignment<T: Scalar>(alignment: &Alignment, scoring: &ScoringFunction<T>) -> Result<T> {
    alignment.score(scoring)
}

/// Free-function form of [`Alignment::empirical_distribution`].
pub fn empirical_distribution(alignment: &Alignment, alphabet: &Alphabet) -> Result<DistVector> {
    alignment.empirical_distribution(alphabet)
}

/// Renders a step sequence as a string over `{D, H, V}`.
pub fn steps_to_string(steps: &[Step]) -> String {
    steps.iter().map(|s| s.as_char()).collect()
}

pub fn steps_from_str(s: &str) -> Result<Vec<Step>> {
    s.chars().map(Step::from_char).collect()
}

/// Column display used by `Display`: letters as indices, gaps as `-`.
impl fmt::Display for Alignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = |s: Symbol| match s {
            Symbol::Letter(l) => char::from_digit(l as u32, 36).unwrap_or('?'),
            Symbol::Gap => GAP_CHAR,
        };
        let top: String = self.columns.iter().map(|&(u, _)| sym(u)).collect();
        let bottom: String = self.columns.iter().map(|&(_, v)| sym(v)).collect();
        write!(f, "{top}\n{bottom}")
    }
}
