//! Letter strings and i.i.d. string generation.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};

/// Tolerance on the total mass of a letter distribution.
pub const DISTRIBUTION_SUM_TOLERANCE: f64 = 1e-12;

/// A string over an alphabet, stored as letter indices. Never contains gaps.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LetterString(Vec<u8>);

impl LetterString {
    pub fn from_indices(alphabet: &Alphabet, indices: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i as usize >= alphabet.len()) {
            return Err(Error::LetterOutOfRange(bad as usize));
        }
        Ok(LetterString(indices))
    }

    pub fn reversed(&self) -> Self {
        LetterString(self.0.iter().rev().copied().collect())
    }

    pub fn parse(alphabet: &Alphabet, text: &str) -> Result<Self> {
        text.chars()
            .map(|c| alphabet.letter_index(c))
            .collect::<Result<Vec<_>>>()
            .map(LetterString)
    }

    pub fn to_text(&self, alphabet: &Alphabet) -> String {
        self.0.iter().map(|&i| alphabet.letters()[i as usize]).collect()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Copy with position `i` replaced by `letter`.
    pub fn with_substitution(&self, i: usize, letter: u8) -> Self {
        let mut v = self.0.clone();
        v[i] = letter;
        LetterString(v)
    }

    /// Copy with `letter` appended.
    pub fn with_appended(&self, letter: u8) -> Self {
        let mut v = self.0.clone();
        v.push(letter);
        LetterString(v)
    }

    /// Number of occurrences of each letter.
    pub fn letter_counts(&self, alphabet: &Alphabet) -> Vec<usize> {
        let mut counts = vec![0; alphabet.len()];
        for &l in &self.0 {
            counts[l as usize] += 1;
        }
        counts
    }
}

/// A validated probability distribution over the letters of an alphabet.
#[derive(Debug, Clone)]
pub struct LetterDistribution {
    probs: Vec<f64>,
    index: WeightedIndex<f64>,
}

impl LetterDistribution {
    pub fn new(alphabet: &Alphabet, probs: &[f64]) -> Result<Self> {
        if probs.len() != alphabet.len() {
            return Err(Error::InvalidDistribution(format!(
                "expected {} probabilities, got {}",
                alphabet.len(),
                probs.len()
            )));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidDistribution(format!("bad probability {p}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > DISTRIBUTION_SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {total}")));
        }
        let index = WeightedIndex::new(probs)
            .map_err(|e| Error::InvalidDistribution(e.to_string()))?;
        Ok(LetterDistribution { probs: probs.to_vec(), index })
    }

    pub fn uniform(alphabet: &Alphabet) -> Self {
        let k = alphabet.len();
        LetterDistribution::new(alphabet, &vec![1.0 / k as f64; k])
            .expect("uniform distribution is valid")
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> LetterString {
        LetterString((0..n).map(|_| self.index.sample(rng) as u8).collect())
    }
}

/// Draws `n` i.i.d. letters from `probs`.
pub fn generate_iid_string<R: Rng + ?Sized>(
    alphabet: &Alphabet,
    probs: &[f64],
    n: usize,
    rng: &mut R,
) -> Result<LetterString> {
    Ok(LetterDistribution::new(alphabet, probs)?.sample(n, rng))
}
