//! Seeded Monte Carlo experiments on random string pairs.
//!
//! Every experiment draws one child seed per task from the caller's RNG and
//! runs its trials in parallel, each trial on its own ChaCha stream
//! `(child seed, trial index)`. Results are folded in trial order, so the
//! output does not depend on the number of worker threads.

mod convergence;
mod fluctuation;
mod lambda;
mod tail;

pub use convergence::{
    point_convergence_experiment, set_convergence_experiment, within_trial_diameter, PointConvergenceConfig,
    PointConvergenceReport, PointConvergenceRow, SetConvergenceConfig, SetConvergenceReport, SetConvergenceRow,
    TrialSpread,
};
pub use fluctuation::{
    best_letter_pair, criterion_value, fluctuation_experiment, perturbation_expectation, FluctuationConfig,
    FluctuationReport, FluctuationRow,
};
pub use lambda::{bracket_width, c_n, estimate_lambda, mcdiarmid_half_width, sample_scores, LambdaEstimate};
pub use tail::{tail_bound_check, TailReport};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::sequence::{LetterDistribution, LetterString};

/// Letter distributions of the two independent random strings.
#[derive(Debug, Clone)]
pub struct StringModel {
    alphabet: Alphabet,
    x: LetterDistribution,
    y: LetterDistribution,
}

impl StringModel {
    pub fn new(alphabet: Alphabet, probs_x: &[f64], probs_y: &[f64]) -> Result<Self> {
        let x = LetterDistribution::new(&alphabet, probs_x)?;
        let y = LetterDistribution::new(&alphabet, probs_y)?;
        Ok(StringModel { alphabet, x, y })
    }

    /// Both strings uniform over the alphabet.
    pub fn uniform(alphabet: Alphabet) -> Self {
        let x = LetterDistribution::uniform(&alphabet);
        StringModel { alphabet, y: x.clone(), x }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn probs_x(&self) -> &[f64] {
        self.x.probs()
    }

    pub fn probs_y(&self) -> &[f64] {
        self.y.probs()
    }

    pub fn sample_pair<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> (LetterString, LetterString) {
        let x = self.x.sample(n, rng);
        let y = self.y.sample(n, rng);
        (x, y)
    }
}

/// RNG for one trial: the child seed selects the key, the trial index the
/// ChaCha stream.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Runs `trials` independent trials in parallel and returns their outputs
/// in trial order.
pub fn run_trials<O, F>(seed: u64, trials: usize, f: F) -> Vec<O>
where
    O: Send,
    F: Fn(usize, &mut ChaCha8Rng) -> O + Sync + Send,
{
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t as u64);
            f(t, &mut rng)
        })
        .collect()
}

pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

/// Unbiased sample variance (zero for fewer than two values).
pub fn sample_variance(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (values.len() - 1) as f64
}

pub fn std_err(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    (sample_variance(values) / values.len() as f64).sqrt()
}

/// Ordinary least squares fit `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Undefined when `y` is constant.
    pub r_squared: Option<f64>,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InvalidArgument("linear fit needs at least two paired points".into()));
    }
    let (mx, my) = (mean(xs), mean(ys));
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("linear fit needs distinct x values".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let ss_res: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let r_squared = (ss_tot > 0.0).then(|| 1.0 - ss_res / ss_tot);
    Ok(LinearFit { slope, intercept, r_squared })
}

pub(crate) fn check_grid(n_grid: &[usize]) -> Result<()> {
    if n_grid.is_empty() {
        return Err(Error::InvalidArgument("n_grid must not be empty".into()));
    }
    if n_grid.contains(&0) {
        return Err(Error::InvalidArgument("n_grid entries must be positive".into()));
    }
    if n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("n_grid must be strictly increasing".into()));
    }
    Ok(())
}

pub(crate) fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trials_are_ordered_and_reproducible() {
        let a = run_trials(5, 64, |t, rng| (t, rng.random::<u64>()));
        let b = run_trials(5, 64, |t, rng| (t, rng.random::<u64>()));
        assert_eq!(a, b);
        assert!(a.iter().enumerate().all(|(i, (t, _))| i == *t));
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = pool.install(|| run_trials(5, 64, |t, rng| (t, rng.random::<u64>())));
        assert_eq!(a, c);
        assert_ne!(a[0].1, a[1].1);
    }

    #[test]
    fn variance_and_fit() {
        assert_eq!(sample_variance(&[1.0, 2.0, 3.0, 4.0]), 5.0 / 3.0);
        assert_eq!(sample_variance(&[2.0]), 0.0);
        let fit = linear_fit(&[1.0, 2.0, 3.0], &[3.0, 5.0, 7.0]).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12 && (fit.intercept - 1.0).abs() < 1e-12);
        assert!((fit.r_squared.unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(linear_fit(&[1.0, 2.0], &[0.0, 0.0]).unwrap().r_squared, None);
        assert!(linear_fit(&[1.0, 1.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn grid_validation() {
        assert!(check_grid(&[8, 16]).is_ok());
        assert!(check_grid(&[16, 8]).is_err());
        assert!(check_grid(&[]).is_err());
        assert!(check_grid(&[0, 4]).is_err());
    }
}
