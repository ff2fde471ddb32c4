use rand::Rng;
use serde::Serialize;

use super::{check_trials, lambda::sample_scores, mean, StringModel};
use crate::error::{Error, Result};
use crate::scoring::ScoringFunction;

/// Empirical tail frequencies of `L_n / n` around its mean, next to the
/// McDiarmid bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailReport {
    pub n: usize,
    pub trials: usize,
    pub eps: f64,
    pub lambda_hat: f64,
    pub upper_frequency: f64,
    pub lower_frequency: f64,
    /// `exp(-eps^2 n / |S|_delta^2)`.
    pub proof_bound: f64,
    /// `exp(-K n)` with `K = eps^2 / (4 |S|_delta^2)`.
    pub stated_bound: f64,
    /// Binomial standard deviation of a frequency at `proof_bound`.
    pub binomial_sd: f64,
    pub upper_ok: bool,
    pub lower_ok: bool,
    /// `|S|_delta = 0`: the score does not fluctuate at all.
    pub degenerate: bool,
    /// False when `trials` is too small to ever observe an event at the
    /// bound's rate.
    pub informative: bool,
}

pub fn tail_bound_check<R: Rng + ?Sized>(
    scoring: &ScoringFunction<f64>,
    model: &StringModel,
    n: usize,
    trials: usize,
    eps: f64,
    rng: &mut R,
) -> Result<TailReport> {
    check_trials(trials)?;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    let seed = rng.random();
    let rescaled: Vec<f64> = sample_scores(scoring, model, n, trials, seed).into_iter().map(|l| l / n as f64).collect();
    let lambda_hat = mean(&rescaled);
    let frequency = |hit: &dyn Fn(f64) -> bool| rescaled.iter().filter(|&&v| hit(v)).count() as f64 / trials as f64;
    let upper_frequency = frequency(&|v| v >= lambda_hat + eps);
    let lower_frequency = frequency(&|v| v <= lambda_hat - eps);

    let delta = scoring.norm_delta();
    let degenerate = delta == 0.0;
    let (proof_bound, stated_bound) = if degenerate {
        (0.0, 0.0)
    } else {
        let r = eps * eps * n as f64 / (delta * delta);
        ((-r).exp(), (-r / 4.0).exp())
    };
    let binomial_sd = (proof_bound * (1.0 - proof_bound) / trials as f64).sqrt();
    let limit = proof_bound + 3.0 * binomial_sd;
    Ok(TailReport {
        n,
        trials,
        eps,
        lambda_hat,
        upper_frequency,
        lower_frequency,
        proof_bound,
        stated_bound,
        binomial_sd,
        upper_ok: upper_frequency <= limit,
        lower_ok: lower_frequency <= limit,
        degenerate,
        informative: degenerate || proof_bound * trials as f64 >= 1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn huge_eps_never_hits() {
        let a = Alphabet::binary();
        let r = tail_bound_check(&ScoringFunction::lcs(a.clone()), &StringModel::uniform(a), 40, 200, 10.0, &mut ChaCha8Rng::seed_from_u64(1))
            .unwrap();
        assert_eq!((r.upper_frequency, r.lower_frequency), (0.0, 0.0));
        assert!(r.upper_ok && r.lower_ok && !r.degenerate && !r.informative);
    }

    #[test]
    fn constant_scoring_is_degenerate() {
        let a = Alphabet::binary();
        let s = ScoringFunction::constant(a.clone(), 1.0);
        let r = tail_bound_check(&s, &StringModel::uniform(a), 20, 50, 0.01, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        assert!(r.degenerate && r.upper_ok && r.lower_ok);
        assert_eq!((r.upper_frequency, r.lower_frequency), (0.0, 0.0));
    }
}
