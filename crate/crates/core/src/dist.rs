//! Empirical distribution vectors of aligned symbol pairs.

use serde::{Deserialize, Serialize};

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Pair counts of an alignment together with the divisor `n`.
///
/// Coordinate `i` of the distribution is `counts[i] / n`, in the canonical
/// pair order of the alphabet. Counts are kept as integers so that vectors
/// compare and deduplicate exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DistVector {
    counts: Vec<u32>,
    n: usize,
}

impl DistVector {
    pub fn new(counts: Vec<u32>, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("distribution divisor must be positive".into()));
        }
        Ok(DistVector { counts, n })
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    pub fn coord<T: Scalar>(&self, i: usize) -> T {
        T::from_ratio(self.counts[i] as u64, self.n as u64)
    }

    pub fn coords<T: Scalar>(&self) -> Vec<T> {
        (0..self.dim()).map(|i| self.coord(i)).collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords::<f64>()
    }

    /// Sum over coordinates whose first symbol is a letter, i.e. the share of
    /// `x` letters accounted for. Equals one for every alignment.
    pub fn x_marginal<T: Scalar>(&self, alphabet: &Alphabet) -> T {
        alphabet.x_letter_coords().fold(T::zero(), |acc, i| acc + self.coord::<T>(i))
    }

    /// Sum over coordinates whose second symbol is a letter.
    pub fn y_marginal<T: Scalar>(&self, alphabet: &Alphabet) -> T {
        alphabet.y_letter_coords().fold(T::zero(), |acc, i| acc + self.coord::<T>(i))
    }

    /// Total over all coordinates; exceeds one whenever gaps are present.
    pub fn total<T: Scalar>(&self) -> T {
        (0..self.dim()).fold(T::zero(), |acc, i| acc + self.coord::<T>(i))
    }
}

/// Euclidean distance between two points given as slices.
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}
