//! Scoring functions on pairs of symbols from the gap-augmented alphabet.

use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, Symbol};
use crate::dist::DistVector;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A real table `S(u, v)` over all symbol pairs except gap-gap.
///
/// Values are stored in the canonical pair order of the alphabet, so the
/// value vector doubles as the coefficient vector of the linear functional
/// `p -> sum_i S_i p_i` on distribution vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "ScoringRepr<T>",
    into = "ScoringRepr<T>",
    bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>")
)]
pub struct ScoringFunction<T> {
    alphabet: Alphabet,
    values: Vec<T>,
}

#[derive(Serialize, Deserialize)]
struct ScoringRepr<T> {
    letters: Alphabet,
    values: Vec<T>,
}

impl<T: Scalar> TryFrom<ScoringRepr<T>> for ScoringFunction<T> {
    type Error = Error;

    fn try_from(r: ScoringRepr<T>) -> Result<Self> {
        ScoringFunction::new(r.letters, r.values)
    }
}

impl<T: Scalar> From<ScoringFunction<T>> for ScoringRepr<T> {
    fn from(s: ScoringFunction<T>) -> Self {
        ScoringRepr { letters: s.alphabet, values: s.values }
    }
}

impl<T: Scalar> ScoringFunction<T> {
    /// Builds a scoring function from its score vector.
    pub fn new(alphabet: Alphabet, values: Vec<T>) -> Result<Self> {
        if values.len() != alphabet.dim() {
            return Err(Error::DimensionMismatch { expected: alphabet.dim(), found: values.len() });
        }
        if values.iter().any(|v| !v.to_f64().is_finite()) {
            return Err(Error::InvalidArgument("scores must be finite".into()));
        }
        Ok(ScoringFunction { alphabet, values })
    }

    pub fn from_fn<F: FnMut(Symbol, Symbol) -> T>(alphabet: Alphabet, mut f: F) -> Self {
        let values = (0..alphabet.dim())
            .map(|i| {
                let (u, v) = alphabet.pair_at(i).expect("index below dim");
                f(u, v)
            })
            .collect();
        ScoringFunction { alphabet, values }
    }

    /// One for identical letters, zero for everything else.
    pub fn lcs(alphabet: Alphabet) -> Self {
        ScoringFunction::from_fn(alphabet, |u, v| match (u, v) {
            (Symbol::Letter(a), Symbol::Letter(b)) if a == b => T::one(),
            _ => T::zero(),
        })
    }

    pub fn constant(alphabet: Alphabet, c: T) -> Self {
        ScoringFunction::from_fn(alphabet, |_, _| c)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// The score vector in canonical pair order.
    pub fn score_vector(&self) -> &[T] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, u: Symbol, v: Symbol) -> Result<T> {
        Ok(self.values[self.alphabet.pair_index(u, v)?])
    }

    #[inline]
    pub fn letter_letter(&self, a: u8, b: u8) -> T {
        self.values[a as usize * (self.alphabet.len() + 1) + b as usize]
    }

    #[inline]
    pub fn letter_gap(&self, a: u8) -> T {
        self.values[a as usize * (self.alphabet.len() + 1) + self.alphabet.len()]
    }

    #[inline]
    pub fn gap_letter(&self, b: u8) -> T {
        self.values[self.alphabet.len() * (self.alphabet.len() + 1) + b as usize]
    }

    /// Largest absolute entry.
    pub fn norm_inf(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| T::max_of(m, v.abs()))
    }

    /// Largest change of a single entry when one of its two symbols is
    /// replaced: the maximum of `|S(c,d) - S(c,e)|` and `|S(d,c) - S(e,c)|`
    /// over symbols `c, d, e` (gap-gap excluded).
    ///
    /// Both the row and the column spread are needed: substituting a letter
    /// of `x` moves the first argument of a column, substituting a letter of
    /// `y` moves the second one.
    pub fn norm_delta(&self) -> T {
        let s = self.alphabet.len() + 1;
        let mut best = T::zero();
        for c in 0..s {
            let row = (0..s).filter(|&d| !(c == s - 1 && d == s - 1)).map(|d| self.values[c * s + d]);
            let col = (0..s).filter(|&d| !(c == s - 1 && d == s - 1)).map(|d| self.values[d * s + c]);
            for line in [spread(row), spread(col)] {
                best = T::max_of(best, line);
            }
        }
        best
    }

    /// Maximum spread within rows only (first symbol held fixed).
    pub fn row_spread(&self) -> T {
        let s = self.alphabet.len() + 1;
        (0..s).fold(T::zero(), |best, c| {
            let row = (0..s).filter(|&d| !(c == s - 1 && d == s - 1)).map(|d| self.values[c * s + d]);
            T::max_of(best, spread(row))
        })
    }

    /// `f_S(p)`: the score vector dotted with the distribution vector.
    pub fn eval_f(&self, p: &DistVector) -> Result<T> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: p.dim() });
        }
        Ok(self
            .values
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (i, &v)| acc + v * p.coord::<T>(i)))
    }

    /// `f_S` on an arbitrary real point.
    pub fn eval_point(&self, p: &[f64]) -> Result<f64> {
        if p.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: p.len() });
        }
        Ok(self.values.iter().zip(p).map(|(v, x)| v.to_f64() * x).sum())
    }

    pub fn to_f64(&self) -> ScoringFunction<f64> {
        ScoringFunction {
            alphabet: self.alphabet.clone(),
            values: self.values.iter().map(|v| v.to_f64()).collect(),
        }
    }

    pub fn map<U: Scalar, F: FnMut(T) -> U>(&self, f: F) -> ScoringFunction<U> {
        ScoringFunction { alphabet: self.alphabet.clone(), values: self.values.iter().copied().map(f).collect() }
    }
}

fn spread<T: Scalar, I: Iterator<Item = T>>(mut it: I) -> T {
    let Some(first) = it.next() else {
        return T::zero();
    };
    let (lo, hi) = it.fold((first, first), |(lo, hi), v| {
        (if v < lo { v } else { lo }, if v > hi { v } else { hi })
    });
    hi - lo
}

impl<T: Scalar + Float> ScoringFunction<T>
where
    StandardNormal: Distribution<T>,
{
    /// Uniform draw from the unit sphere of score vectors, by normalizing
    /// independent standard normal coordinates.
    pub fn sample_uniform_sphere<R: Rng + ?Sized>(alphabet: Alphabet, rng: &mut R) -> Self {
        let dim = alphabet.dim();
        loop {
            let v: Vec<T> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
            let norm = v.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt();
            if norm > T::zero() {
                return ScoringFunction { alphabet, values: v.into_iter().map(|x| x / norm).collect() };
            }
        }
    }

    pub fn euclidean_norm(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn binary() -> Alphabet {
        Alphabet::binary()
    }

    #[test]
    fn norms_of_presets() {
        let c = ScoringFunction::constant(binary(), 3.5);
        assert_eq!(c.norm_delta(), 0.0);
        assert_eq!(ScoringFunction::<f64>::constant(binary(), 0.0).norm_inf(), 0.0);
        let lcs = ScoringFunction::<f64>::lcs(binary());
        assert_eq!(lcs.norm_delta(), 1.0);
        assert_eq!(lcs.norm_inf(), 1.0);
    }

    #[test]
    fn norm_delta_on_a_single_row() {
        // row "a" holds {0, -2, 5}; all other entries zero.
        let s = ScoringFunction::new(binary(), vec![0.0, -2.0, 5.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(s.norm_delta(), 7.0);
        assert_eq!(s.row_spread(), 7.0);
        let t = ScoringFunction::new(binary(), vec![-3.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(t.norm_inf(), 3.0);
    }

    #[test]
    fn norm_delta_sees_column_spread() {
        // rows constant, columns not: S(a, .) = 0, S(b, .) = 10.
        let s = ScoringFunction::new(binary(), vec![0.0, 0.0, 0.0, 10.0, 10.0, 10.0, 0.0, 0.0]).unwrap();
        assert_eq!(s.row_spread(), 0.0);
        assert_eq!(s.norm_delta(), 10.0);
    }

    #[test]
    fn eval_f_zero_and_exact() {
        let s = ScoringFunction::<Rational64>::lcs(binary());
        let zero = DistVector::new(vec![0; 8], 4).unwrap();
        assert_eq!(s.eval_f(&zero).unwrap(), Rational64::from_integer(0));
        let pi = DistVector::new(vec![1, 0, 1, 0, 2, 0, 1, 0], 4).unwrap();
        assert_eq!(s.eval_f(&pi).unwrap(), Rational64::new(3, 4));
        let bad = DistVector::new(vec![0; 3], 4).unwrap();
        assert!(s.eval_f(&bad).is_err());
    }

    #[test]
    fn sphere_samples_are_unit_and_distinct() {
        let a = ScoringFunction::<f64>::sample_uniform_sphere(binary(), &mut ChaCha8Rng::seed_from_u64(1));
        let b = ScoringFunction::<f64>::sample_uniform_sphere(binary(), &mut ChaCha8Rng::seed_from_u64(2));
        assert!((a.euclidean_norm() - 1.0).abs() <= 1e-12);
        assert!((b.euclidean_norm() - 1.0).abs() <= 1e-12);
        assert_ne!(a, b);
        let f = ScoringFunction::<f32>::sample_uniform_sphere(binary(), &mut ChaCha8Rng::seed_from_u64(1));
        assert!((f.euclidean_norm() - 1.0).abs() <= 1e-6);
    }

    #[test]
    fn json_round_trip_and_validation() {
        let s = ScoringFunction::<f64>::lcs(binary());
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"letters":["a","b"],"values":[1.0,0.0,0.0,0.0,1.0,0.0,0.0,0.0]}"#);
        let back: ScoringFunction<f64> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<ScoringFunction<f64>>(r#"{"letters":["a","b"],"values":[1.0]}"#).is_err());
    }
}
