//! Optimal global alignment by dynamic programming, and the set of all
//! optimal alignments as a DAG over the score table.
//!
//! The table `T` has shape `(|x| + 1) x (|y| + 1)` with
//!
//! ```text
//! T[0][0] = 0
//! T[i][j] = max(T[i-1][j-1] + S(x_i, y_j), T[i-1][j] + S(x_i, G), T[i][j-1] + S(G, y_j))
//! ```
//!
//! An edge into a cell is optimal when its candidate value ties the cell
//! value (see [`Scalar::ties`]). Every path from `(0,0)` to `(|x|,|y|)` made
//! of optimal edges is an optimal alignment and vice versa.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use crate::alignment::{Alignment, Step};
use crate::alphabet::{Alphabet, Symbol};
use crate::dist::DistVector;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::scoring::ScoringFunction;
use crate::sequence::LetterString;

/// Default bound on the number of distinct count vectors kept per cell.
pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

/// `L_S(x, y)`, computed with two rolling rows. Strings may differ in length.
pub fn optimal_score<T: Scalar>(x: &LetterString, y: &LetterString, scoring: &ScoringFunction<T>) -> T {
    let ys = y.letters();
    let n = ys.len();
    let mut prev: Vec<T> = Vec::with_capacity(n + 1);
    prev.push(T::zero());
    for j in 0..n {
        let v = prev[j] + scoring.gap_letter(ys[j]);
        prev.push(v);
    }
    let gap_row: Vec<T> = ys.iter().map(|&b| scoring.gap_letter(b)).collect();
    let mut cur = vec![T::zero(); n + 1];
    for &a in x.letters() {
        let del = scoring.letter_gap(a);
        let sub: Vec<T> = ys.iter().map(|&b| scoring.letter_letter(a, b)).collect();
        cur[0] = prev[0] + del;
        for j in 0..n {
            let d = prev[j] + sub[j];
            let h = prev[j + 1] + del;
            let v = cur[j] + gap_row[j];
            cur[j + 1] = T::max_of(T::max_of(d, h), v);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[n]
}

/// Full score table, row-major with `|y| + 1` columns.
#[derive(Debug, Clone)]
pub struct ScoreTable<T> {
    rows: usize,
    cols: usize,
    values: Vec<T>,
}

impl<T: Scalar> ScoreTable<T> {
    pub fn fill(x: &LetterString, y: &LetterString, scoring: &ScoringFunction<T>) -> Self {
        let (xs, ys) = (x.letters(), y.letters());
        let (rows, cols) = (xs.len() + 1, ys.len() + 1);
        let mut values = vec![T::zero(); rows * cols];
        for j in 1..cols {
            values[j] = values[j - 1] + scoring.gap_letter(ys[j - 1]);
        }
        for i in 1..rows {
            let a = xs[i - 1];
            let del = scoring.letter_gap(a);
            values[i * cols] = values[(i - 1) * cols] + del;
            for j in 1..cols {
                let b = ys[j - 1];
                let d = values[(i - 1) * cols + j - 1] + scoring.letter_letter(a, b);
                let h = values[(i - 1) * cols + j] + del;
                let v = values[i * cols + j - 1] + scoring.gap_letter(b);
                values[i * cols + j] = T::max_of(T::max_of(d, h), v);
            }
        }
        ScoreTable { rows, cols, values }
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[i * self.cols + j]
    }

    pub fn final_value(&self) -> T {
        self.values[self.values.len() - 1]
    }
}

/// Candidate value of the edge `step` entering cell `(i, j)`.
fn edge_value<T: Scalar>(
    table: &ScoreTable<T>,
    x: &[u8],
    y: &[u8],
    scoring: &ScoringFunction<T>,
    i: usize,
    j: usize,
    step: Step,
) -> Option<T> {
    match step {
        Step::Diagonal if i > 0 && j > 0 => {
            Some(table.get(i - 1, j - 1) + scoring.letter_letter(x[i - 1], y[j - 1]))
        }
        Step::Horizontal if i > 0 => Some(table.get(i - 1, j) + scoring.letter_gap(x[i - 1])),
        Step::Vertical if j > 0 => Some(table.get(i, j - 1) + scoring.gap_letter(y[j - 1])),
        _ => None,
    }
}

/// Pair coordinate of the column produced by `step` entering `(i, j)`.
fn step_pair(alphabet: &Alphabet, x: &[u8], y: &[u8], i: usize, j: usize, step: Step) -> usize {
    let (u, v) = match step {
        Step::Diagonal => (Symbol::Letter(x[i - 1]), Symbol::Letter(y[j - 1])),
        Step::Horizontal => (Symbol::Letter(x[i - 1]), Symbol::Gap),
        Step::Vertical => (Symbol::Gap, Symbol::Letter(y[j - 1])),
    };
    alphabet.pair_index(u, v).expect("letters validated on construction")
}

fn predecessor(i: usize, j: usize, step: Step) -> (usize, usize) {
    let (di, dj) = step.delta();
    (i - di, j - dj)
}

/// The DAG of optimal edges, restricted to cells on some optimal path.
#[derive(Debug, Clone)]
pub struct OptimalDag {
    rows: usize,
    cols: usize,
    /// Bitmask of optimal incoming steps per cell.
    mask: Vec<u8>,
    /// Cell lies on at least one optimal path.
    live: Vec<bool>,
}

impl OptimalDag {
    pub fn build<T: Scalar>(x: &LetterString, y: &LetterString, scoring: &ScoringFunction<T>) -> (T, Self) {
        let table = ScoreTable::fill(x, y, scoring);
        let (xs, ys) = (x.letters(), y.letters());
        let (rows, cols) = (table.rows, table.cols);
        let mut mask = vec![0u8; rows * cols];
        for i in 0..rows {
            for j in 0..cols {
                let best = table.get(i, j);
                for step in Step::ALL {
                    if let Some(c) = edge_value(&table, xs, ys, scoring, i, j, step) {
                        if T::ties(c, best) {
                            mask[i * cols + j] |= step.bit();
                        }
                    }
                }
            }
        }
        let mut live = vec![false; rows * cols];
        live[rows * cols - 1] = true;
        for idx in (0..rows * cols).rev() {
            if !live[idx] {
                continue;
            }
            let (i, j) = (idx / cols, idx % cols);
            for step in Step::ALL {
                if mask[idx] & step.bit() != 0 {
                    let (pi, pj) = predecessor(i, j, step);
                    live[pi * cols + pj] = true;
                }
            }
        }
        (table.final_value(), OptimalDag { rows, cols, mask, live })
    }

    fn steps_into(&self, i: usize, j: usize) -> impl Iterator<Item = Step> + '_ {
        let m = self.mask[i * self.cols + j];
        Step::ALL.into_iter().filter(move |s| m & s.bit() != 0)
    }

    pub fn is_live(&self, i: usize, j: usize) -> bool {
        self.live[i * self.cols + j]
    }

    /// Number of optimal paths from the origin to every cell (zero off the DAG).
    pub fn path_counts(&self) -> Vec<BigUint> {
        let mut counts = vec![BigUint::zero(); self.rows * self.cols];
        counts[0] = BigUint::one();
        for i in 0..self.rows {
            for j in 0..self.cols {
                if (i, j) == (0, 0) || !self.is_live(i, j) {
                    continue;
                }
                let mut total = BigUint::zero();
                for step in self.steps_into(i, j) {
                    let (pi, pj) = predecessor(i, j, step);
                    total += &counts[pi * self.cols + pj];
                }
                counts[i * self.cols + j] = total;
            }
        }
        counts
    }
}

/// Forward propagation of distinct pair-count vectors over the cells
/// selected by `live`, following the steps in `mask`. Returns the vectors
/// reaching the final cell and whether no cell ever exceeded `cap`.
fn propagate_count_sets<M, L>(
    x: &LetterString,
    y: &LetterString,
    alphabet: &Alphabet,
    cap: usize,
    mask: M,
    live: L,
) -> (BTreeSet<Vec<u32>>, bool)
where
    M: Fn(usize, usize) -> u8,
    L: Fn(usize, usize) -> bool,
{
    let (xs, ys) = (x.letters(), y.letters());
    let cols = ys.len() + 1;
    let mut exhaustive = true;
    let mut prev: Vec<BTreeSet<Vec<u32>>> = vec![BTreeSet::new(); cols];
    let mut cur: Vec<BTreeSet<Vec<u32>>> = vec![BTreeSet::new(); cols];
    for i in 0..=xs.len() {
        for j in 0..cols {
            let mut set = BTreeSet::new();
            if (i, j) == (0, 0) {
                set.insert(vec![0u32; alphabet.dim()]);
            } else if live(i, j) {
                let m = mask(i, j);
                for step in Step::ALL.into_iter().filter(|s| m & s.bit() != 0) {
                    let source = match step {
                        Step::Diagonal => &prev[j - 1],
                        Step::Horizontal => &prev[j],
                        Step::Vertical => &cur[j - 1],
                    };
                    let k = step_pair(alphabet, xs, ys, i, j, step);
                    for v in source {
                        let mut w = v.clone();
                        w[k] += 1;
                        set.insert(w);
                    }
                }
                if set.len() > cap {
                    exhaustive = false;
                    set = set.into_iter().take(cap).collect();
                }
            }
            cur[j] = set;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    (std::mem::take(&mut prev[cols - 1]), exhaustive)
}

/// `SET*(x, y)` for one instance: the optimal score, the distinct
/// empirical distributions of optimal alignments, and how many optimal
/// alignments there are.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimalSet<T> {
    pub score: T,
    pub dists: Vec<DistVector>,
    pub exhaustive: bool,
    #[serde(serialize_with = "serialize_biguint")]
    pub count: BigUint,
}

fn serialize_biguint<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn require_equal_nonempty(x: &LetterString, y: &LetterString) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::UnequalLengths { x: x.len(), y: y.len() });
    }
    if x.is_empty() {
        return Err(Error::InvalidArgument("strings must be nonempty".into()));
    }
    Ok(x.len())
}

/// Distinct empirical distributions of all optimal alignments.
///
/// If some cell accumulates more than `cap` distinct count vectors, the set
/// is truncated and `exhaustive` is `false`. `count` is always exact.
pub fn enumerate_optimal<T: Scalar>(
    x: &LetterString,
    y: &LetterString,
    scoring: &ScoringFunction<T>,
    cap: usize,
) -> Result<OptimalSet<T>> {
    let n = require_equal_nonempty(x, y)?;
    let (score, dag) = OptimalDag::build(x, y, scoring);
    let count = dag.path_counts().pop().unwrap_or_default();
    let cols = dag.cols;
    let (sets, exhaustive) = propagate_count_sets(
        x,
        y,
        scoring.alphabet(),
        cap,
        |i, j| dag.mask[i * cols + j],
        |i, j| dag.is_live(i, j),
    );
    let dists = sets.into_iter().map(|c| DistVector::new(c, n)).collect::<Result<_>>()?;
    Ok(OptimalSet { score, dists, exhaustive, count })
}

/// Distinct empirical distributions of all alignments of `x` and `y`
/// (the set `SET(x, y)`), with the same cap semantics as
/// [`enumerate_optimal`].
pub fn enumerate_distributions(
    x: &LetterString,
    y: &LetterString,
    alphabet: &Alphabet,
    cap: usize,
) -> Result<(Vec<DistVector>, bool)> {
    let n = require_equal_nonempty(x, y)?;
    let all = Step::ALL.iter().fold(0u8, |m, s| m | s.bit());
    let (sets, exhaustive) = propagate_count_sets(x, y, alphabet, cap, |i, j| {
        let mut m = all;
        if i == 0 {
            m &= !(Step::Diagonal.bit() | Step::Horizontal.bit());
        }
        if j == 0 {
            m &= !(Step::Diagonal.bit() | Step::Vertical.bit());
        }
        m
    }, |_, _| true);
    let dists = sets.into_iter().map(|c| DistVector::new(c, n)).collect::<Result<_>>()?;
    Ok((dists, exhaustive))
}

/// Picks an index with probability proportional to `weights`.
fn choose_weighted<R: Rng + ?Sized>(weights: &[&BigUint], rng: &mut R) -> usize {
    let bits = weights.iter().map(|w| w.bits()).max().unwrap_or(0);
    let shift = bits.saturating_sub(62);
    let scaled: Vec<u64> = weights.iter().map(|w| (*w >> shift).to_u64().unwrap_or(0)).collect();
    let total: u64 = scaled.iter().sum();
    let mut r = rng.random_range(0..total);
    for (idx, &w) in scaled.iter().enumerate() {
        if r < w {
            return idx;
        }
        r -= w;
    }
    scaled.len() - 1
}

/// Precomputed optimal-alignment DAG with path counts, for drawing many
/// uniform optimal alignments and for optimizing secondary objectives over
/// the optimal set.
#[derive(Debug, Clone)]
pub struct OptimalAlignments<'a, T> {
    x: &'a LetterString,
    y: &'a LetterString,
    scoring: &'a ScoringFunction<T>,
    score: T,
    dag: OptimalDag,
    counts: Vec<BigUint>,
}

impl<'a, T: Scalar> OptimalAlignments<'a, T> {
    pub fn new(x: &'a LetterString, y: &'a LetterString, scoring: &'a ScoringFunction<T>) -> Self {
        let (score, dag) = OptimalDag::build(x, y, scoring);
        let counts = dag.path_counts();
        OptimalAlignments { x, y, scoring, score, dag, counts }
    }

    pub fn score(&self) -> T {
        self.score
    }

    /// Number of optimal alignments.
    pub fn count(&self) -> &BigUint {
        self.counts.last().expect("table is never empty")
    }

    /// Uniformly random optimal alignment: walking back from the final
    /// cell, each incoming optimal edge is taken with probability
    /// proportional to the number of optimal paths through it.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Alignment {
        let cols = self.dag.cols;
        let (mut i, mut j) = (self.dag.rows - 1, cols - 1);
        let mut steps = Vec::with_capacity(i + j);
        while (i, j) != (0, 0) {
            let options: Vec<Step> = self.dag.steps_into(i, j).collect();
            let weights: Vec<&BigUint> = options
                .iter()
                .map(|&s| {
                    let (pi, pj) = predecessor(i, j, s);
                    &self.counts[pi * cols + pj]
                })
                .collect();
            let step = options[choose_weighted(&weights, rng)];
            steps.push(step);
            (i, j) = predecessor(i, j, step);
        }
        steps.reverse();
        Alignment::from_steps(self.x, self.y, &steps).expect("DAG paths are admissible")
    }

    /// Maximizes `<direction, counts>` over optimal alignments. Returns the
    /// maximal value and the pair counts of a maximizer (ties broken by the
    /// fixed step priority).
    pub fn support(&self, direction: &[f64]) -> Result<(f64, Vec<u32>)> {
        let alphabet = self.scoring.alphabet();
        if direction.len() != alphabet.dim() {
            return Err(Error::DimensionMismatch { expected: alphabet.dim(), found: direction.len() });
        }
        let (xs, ys) = (self.x.letters(), self.y.letters());
        let (rows, cols) = (self.dag.rows, self.dag.cols);
        let mut best = vec![f64::NEG_INFINITY; rows * cols];
        let mut choice = vec![Step::Diagonal; rows * cols];
        best[0] = 0.0;
        for i in 0..rows {
            for j in 0..cols {
                if (i, j) == (0, 0) || !self.dag.is_live(i, j) {
                    continue;
                }
                for step in self.dag.steps_into(i, j) {
                    let (pi, pj) = predecessor(i, j, step);
                    let v = best[pi * cols + pj] + direction[step_pair(alphabet, xs, ys, i, j, step)];
                    if v > best[i * cols + j] {
                        best[i * cols + j] = v;
                        choice[i * cols + j] = step;
                    }
                }
            }
        }
        let mut counts = vec![0u32; alphabet.dim()];
        let (mut i, mut j) = (rows - 1, cols - 1);
        while (i, j) != (0, 0) {
            let step = choice[i * cols + j];
            counts[step_pair(alphabet, xs, ys, i, j, step)] += 1;
            (i, j) = predecessor(i, j, step);
        }
        Ok((best[rows * cols - 1], counts))
    }

    /// Distribution vector of the optimal alignment extreme in `direction`.
    pub fn extreme_distribution(&self, direction: &[f64]) -> Result<DistVector> {
        let n = require_equal_nonempty(self.x, self.y)?;
        DistVector::new(self.support(direction)?.1, n)
    }
}

/// One uniformly random optimal alignment of equal-length strings.
pub fn sample_optimal<T: Scalar, R: Rng + ?Sized>(
    x: &LetterString,
    y: &LetterString,
    scoring: &ScoringFunction<T>,
    rng: &mut R,
) -> Result<Alignment> {
    require_equal_nonempty(x, y)?;
    Ok(OptimalAlignments::new(x, y, scoring).sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn strings(a: &Alphabet, x: &str, y: &str) -> (LetterString, LetterString) {
        (LetterString::parse(a, x).unwrap(), LetterString::parse(a, y).unwrap())
    }

    #[test]
    fn worked_example_score() {
        let a = Alphabet::binary();
        let (x, y) = strings(&a, "abab", "aabb");
        assert_eq!(optimal_score(&x, &y, &ScoringFunction::<f64>::lcs(a.clone())), 3.0);
        assert_eq!(optimal_score(&x, &y, &ScoringFunction::<i64>::lcs(a.clone())), 3);
        assert_eq!(optimal_score(&x, &y, &ScoringFunction::<Rational64>::lcs(a)), Rational64::from_integer(3));
    }

    #[test]
    fn identical_strings_match_only() {
        let a = Alphabet::parse("acgt").unwrap();
        let (x, _) = strings(&a, "gattacagt", "");
        assert_eq!(optimal_score(&x, &x, &ScoringFunction::<i64>::lcs(a)), 9);
    }

    #[test]
    fn empty_and_unequal_strings() {
        let a = Alphabet::binary();
        let s = ScoringFunction::new(a.clone(), vec![1.0, -1.0, -0.5, -1.0, 1.0, -0.5, -0.25, -0.25]).unwrap();
        let (e, x) = strings(&a, "", "ab");
        assert_eq!(optimal_score(&e, &e, &s), 0.0);
        assert_eq!(optimal_score(&e, &x, &s), -0.5);
        assert_eq!(optimal_score(&x, &e, &s), -1.0);
        assert!(enumerate_optimal(&e, &x, &s, 10).is_err());
    }

    #[test]
    fn table_agrees_with_rolling_rows() {
        let a = Alphabet::binary();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let s = ScoringFunction::<f64>::sample_uniform_sphere(a.clone(), &mut rng);
            let x = crate::sequence::LetterDistribution::uniform(&a).sample(13, &mut rng);
            let y = crate::sequence::LetterDistribution::uniform(&a).sample(9, &mut rng);
            assert_eq!(ScoreTable::fill(&x, &y, &s).final_value(), optimal_score(&x, &y, &s));
        }
    }

    #[test]
    fn enumerate_worked_example() {
        let a = Alphabet::binary();
        let (x, y) = strings(&a, "abab", "aabb");
        let s = ScoringFunction::<Rational64>::lcs(a.clone());
        let set = enumerate_optimal(&x, &y, &s, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(set.score, Rational64::from_integer(3));
        assert!(set.exhaustive);
        assert!(!set.dists.is_empty());
        for d in &set.dists {
            assert_eq!(s.eval_f(d).unwrap() * Rational64::from_integer(4), set.score);
        }
    }

    #[test]
    fn enumerate_single_optimum() {
        let a = Alphabet::binary();
        let (x, y) = strings(&a, "aa", "aa");
        let s = ScoringFunction::<f64>::lcs(a.clone());
        let set = enumerate_optimal(&x, &y, &s, 10).unwrap();
        // "aa" vs "aa": besides the diagonal path, no other alignment reaches 2.
        assert_eq!(set.count, BigUint::from(1u32));
        assert_eq!(set.dists.len(), 1);
        assert_eq!(set.dists[0].to_f64()[0], 1.0);
    }

    #[test]
    fn cap_truncates_but_counts_stay_exact() {
        let a = Alphabet::binary();
        let (x, y) = strings(&a, "abababab", "babababa");
        let s = ScoringFunction::<f64>::lcs(a.clone());
        let full = enumerate_optimal(&x, &y, &s, DEFAULT_ENUMERATION_CAP).unwrap();
        let capped = enumerate_optimal(&x, &y, &s, 1).unwrap();
        assert!(full.exhaustive);
        assert!(full.dists.len() > 1);
        assert!(!capped.exhaustive);
        assert_eq!(capped.dists.len(), 1);
        assert_eq!(full.count, capped.count);
    }

    #[test]
    fn constant_positive_scoring_counts_all_gap_paths() {
        let a = Alphabet::binary();
        let (x, y) = strings(&a, "abababab", "babababa");
        let s = ScoringFunction::<f64>::constant(a.clone(), 1.0);
        let set = enumerate_optimal(&x, &y, &s, DEFAULT_ENUMERATION_CAP).unwrap();
        // every optimal path avoids diagonals: C(16, 8) of them, one distribution.
        assert_eq!(set.count, BigUint::from(12870u32));
        assert_eq!(set.dists.len(), 1);
        assert_eq!(set.score, 16.0);
    }

    #[test]
    fn samples_are_optimal() {
        let a = Alphabet::parse("abc").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let dist = crate::sequence::LetterDistribution::uniform(&a);
        for _ in 0..10 {
            let s = ScoringFunction::<f64>::sample_uniform_sphere(a.clone(), &mut rng);
            let (x, y) = (dist.sample(30, &mut rng), dist.sample(30, &mut rng));
            let al = sample_optimal(&x, &y, &s, &mut rng).unwrap();
            assert!(al.aligns(&x, &y));
            assert!((al.score(&s).unwrap() - optimal_score(&x, &y, &s)).abs() <= 1e-9);
        }
    }

    #[test]
    fn unique_optimum_is_always_sampled() {
        let a = Alphabet::binary();
        let (x, y) = strings(&a, "abba", "abba");
        let s = ScoringFunction::<f64>::lcs(a.clone());
        let opt = OptimalAlignments::new(&x, &y, &s);
        assert_eq!(*opt.count(), BigUint::from(1u32));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..20 {
            assert_eq!(opt.sample(&mut rng).steps(), vec![Step::Diagonal; 4]);
        }
    }

    #[test]
    fn support_picks_extremes_of_the_optimal_face() {
        let a = Alphabet::binary();
        let (x, y) = strings(&a, "abab", "aabb");
        let s = ScoringFunction::<f64>::lcs(a.clone());
        let opt = OptimalAlignments::new(&x, &y, &s);
        let set = enumerate_optimal(&x, &y, &s, DEFAULT_ENUMERATION_CAP).unwrap();
        for k in 0..a.dim() {
            for sign in [1.0, -1.0] {
                let mut dir = vec![0.0; a.dim()];
                dir[k] = sign;
                let (v, counts) = opt.support(&dir).unwrap();
                let brute = set.dists.iter().map(|d| sign * d.counts()[k] as f64).fold(f64::MIN, f64::max);
                assert_eq!(v, brute);
                assert!(set.dists.iter().any(|d| d.counts() == counts.as_slice()));
            }
        }
    }

    #[test]
    fn all_alignment_distributions_of_worked_example() {
        let a = Alphabet::binary();
        let (x, y) = strings(&a, "aabb", "abab");
        let (all, exhaustive) = enumerate_distributions(&x, &y, &a, DEFAULT_ENUMERATION_CAP).unwrap();
        assert!(exhaustive);
        for want in [[1, 0, 1, 0, 2, 0, 1, 0], [1, 1, 0, 1, 1, 0, 0, 0], [1, 1, 0, 0, 1, 1, 1, 0]] {
            assert!(all.iter().any(|d| d.counts() == want), "{want:?}");
        }
    }
}
