//! Order of fluctuation of the optimal score under a letter-substitution
//! criterion.

use rand::Rng;
use serde::Serialize;

use super::{check_grid, check_trials, lambda::sample_scores, linear_fit, mean, run_trials, sample_variance, LinearFit, StringModel};
use crate::engine::ScoreTable;
use crate::error::{Error, Result};
use crate::scoring::ScoringFunction;
use crate::sequence::LetterString;

fn check_letters(scoring: &ScoringFunction<f64>, a: u8, b: u8) -> Result<()> {
    let k = scoring.alphabet().len();
    for l in [a, b] {
        if l as usize >= k {
            return Err(Error::LetterOutOfRange(l as usize));
        }
    }
    if a == b {
        return Err(Error::InvalidArgument("substituted letters must differ".into()));
    }
    Ok(())
}

/// Average change of the optimal score when one occurrence of `a` in `x`,
/// chosen uniformly, is replaced by `b`; zero when `x` has no `a`.
///
/// Uses a forward and a backward score table: every path crosses the row of
/// the substituted letter through exactly one diagonal or horizontal edge,
/// so each substitution costs `O(|y|)` instead of a fresh alignment.
pub fn perturbation_expectation(x: &LetterString, y: &LetterString, scoring: &ScoringFunction<f64>, a: u8, b: u8) -> Result<f64> {
    check_letters(scoring, a, b)?;
    let positions: Vec<usize> = x.letters().iter().enumerate().filter(|&(_, &l)| l == a).map(|(i, _)| i).collect();
    if positions.is_empty() {
        return Ok(0.0);
    }
    let (n, m) = (x.len(), y.len());
    let forward = ScoreTable::fill(x, y, scoring);
    let backward = ScoreTable::fill(&x.reversed(), &y.reversed(), scoring);
    let suffix = |i: usize, j: usize| backward.get(n - i, m - j);
    let base = forward.final_value();
    let ys = y.letters();
    let del = scoring.letter_gap(b);
    let total: f64 = positions
        .iter()
        .map(|&p| {
            let best = (0..=m)
                .map(|w| {
                    let mut v = forward.get(p, w) + del + suffix(p + 1, w);
                    if w < m {
                        v = v.max(forward.get(p, w) + scoring.letter_letter(b, ys[w]) + suffix(p + 1, w + 1));
                    }
                    v
                })
                .fold(f64::NEG_INFINITY, f64::max);
            best - base
        })
        .sum();
    Ok(total / positions.len() as f64)
}

/// `sum_c p_(a,c) (S(b,c) - S(a,c))` over letters and the gap.
pub fn criterion_value(scoring: &ScoringFunction<f64>, p: &[f64], a: u8, b: u8) -> Result<f64> {
    check_letters(scoring, a, b)?;
    if p.len() != scoring.dim() {
        return Err(Error::DimensionMismatch { expected: scoring.dim(), found: p.len() });
    }
    let s = scoring.alphabet().len() + 1;
    let v = scoring.score_vector();
    let (ra, rb) = (a as usize * s, b as usize * s);
    Ok((0..s).map(|c| p[ra + c] * (v[rb + c] - v[ra + c])).sum())
}

/// Ordered letter pair with the largest criterion value.
pub fn best_letter_pair(scoring: &ScoringFunction<f64>, p: &[f64]) -> Result<(u8, u8, f64)> {
    let k = scoring.alphabet().len() as u8;
    let mut best: Option<(u8, u8, f64)> = None;
    for a in 0..k {
        for b in (0..k).filter(|&b| b != a) {
            let v = criterion_value(scoring, p, a, b)?;
            if best.is_none_or(|(_, _, bv)| v > bv) {
                best = Some((a, b, v));
            }
        }
    }
    Ok(best.expect("alphabets have at least two letters"))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FluctuationConfig {
    pub n_grid: Vec<usize>,
    pub trials: usize,
    /// Instances per `n` for the perturbation frequency.
    pub perturbation_trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FluctuationRow {
    pub n: usize,
    pub mean_score: f64,
    pub variance: f64,
    pub variance_over_n: f64,
    pub mean_perturbation: f64,
    /// Fraction of instances whose perturbation expectation is at least `epsilon`.
    pub perturbation_frequency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FluctuationReport {
    pub a: char,
    pub b: char,
    pub q_a: f64,
    pub criterion_value: f64,
    pub epsilon: f64,
    pub criterion_met: bool,
    pub trials: usize,
    pub perturbation_trials: usize,
    pub rows: Vec<FluctuationRow>,
    pub fit: Option<LinearFit>,
    /// Largest over smallest `Var / n` across the grid.
    pub variance_ratio: Option<f64>,
}

#[allow(clippy::too_many_arguments)]
pub fn fluctuation_experiment<R: Rng + ?Sized>(
    scoring: &ScoringFunction<f64>,
    model: &StringModel,
    a: u8,
    b: u8,
    p_hat: &[f64],
    config: &FluctuationConfig,
    rng: &mut R,
) -> Result<FluctuationReport> {
    check_grid(&config.n_grid)?;
    check_trials(config.trials)?;
    let criterion = criterion_value(scoring, p_hat, a, b)?;
    let q_a = model.probs_x()[a as usize];
    if q_a == 0.0 {
        return Err(Error::InvalidArgument(format!("letter {a} never occurs in x (q_a = 0)")));
    }
    let epsilon = criterion / (4.0 * q_a);
    let mut rows = Vec::with_capacity(config.n_grid.len());
    for &n in &config.n_grid {
        let seed = rng.random();
        let scores = sample_scores(scoring, model, n, config.trials, seed);
        let variance = sample_variance(&scores);
        let seed = rng.random();
        let perturbations = run_trials(seed, config.perturbation_trials, |_, trng| {
            let (x, y) = model.sample_pair(n, trng);
            perturbation_expectation(&x, &y, scoring, a, b)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let hits = perturbations.iter().filter(|&&v| v >= epsilon).count();
        rows.push(FluctuationRow {
            n,
            mean_score: mean(&scores),
            variance,
            variance_over_n: variance / n as f64,
            mean_perturbation: mean(&perturbations),
            perturbation_frequency: if perturbations.is_empty() { 0.0 } else { hits as f64 / perturbations.len() as f64 },
        });
    }
    let ns: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let vars: Vec<f64> = rows.iter().map(|r| r.variance).collect();
    let fit = if rows.len() >= 2 { Some(linear_fit(&ns, &vars)?) } else { None };
    let ratios = rows.iter().map(|r| r.variance_over_n);
    let (lo, hi) = ratios.fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    let alphabet = scoring.alphabet();
    Ok(FluctuationReport {
        a: alphabet.letter(a)?,
        b: alphabet.letter(b)?,
        q_a,
        criterion_value: criterion,
        epsilon,
        criterion_met: criterion > 0.0,
        trials: config.trials,
        perturbation_trials: config.perturbation_trials,
        rows,
        fit,
        variance_ratio: (lo > 0.0).then(|| hi / lo),
    })
}
