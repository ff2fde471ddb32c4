use rand::Rng;
use serde::Serialize;

use super::{check_trials, mean, run_trials, std_err, StringModel};
use crate::engine::optimal_score;
use crate::error::{Error, Result};
use crate::scoring::ScoringFunction;

/// Monte Carlo estimate of `lambda_n(S) = E[L_n(S)] / n` with its
/// concentration certificates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaEstimate {
    pub n: usize,
    pub trials: usize,
    pub mean: f64,
    pub std_err: f64,
    pub confidence: f64,
    /// Half-width of the McDiarmid confidence interval for `mean`.
    pub mcdiarmid_eps: f64,
    pub c_n: f64,
    /// `mean + c_n |S|_delta sqrt(ln n / n) + 2 |S|_inf / n`.
    pub bracket_hi: f64,
    pub norm_delta: f64,
    pub norm_inf: f64,
}

/// `sqrt((2 ln 3 + 2 ln(n + 2)) / ln n)`, defined for `n >= 2`.
pub fn c_n(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument("c_n needs n >= 2".into()));
    }
    let n = n as f64;
    Ok(((2.0 * 3f64.ln() + 2.0 * (n + 2.0).ln()) / n.ln()).sqrt())
}

/// Distance from `lambda_n` to the upper end of the bracket containing the
/// limit `lambda`.
pub fn bracket_width(norm_delta: f64, norm_inf: f64, n: usize) -> Result<f64> {
    let nf = n as f64;
    Ok(c_n(n)? * norm_delta * (nf.ln() / nf).sqrt() + 2.0 * norm_inf / nf)
}

/// Half-width `eps` with `P[|mean - lambda_n| >= eps] <= 1 - confidence`.
///
/// The mean of `trials` rescaled scores is a function of `2 n trials`
/// independent letters, each moving it by at most `|S|_delta / (n trials)`,
/// so McDiarmid gives `2 exp(-eps^2 n trials / |S|_delta^2)`.
pub fn mcdiarmid_half_width(norm_delta: f64, n: usize, trials: usize, confidence: f64) -> Result<f64> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::InvalidArgument("confidence must lie in (0, 1)".into()));
    }
    if n == 0 || trials == 0 {
        return Err(Error::InvalidArgument("n and trials must be positive".into()));
    }
    Ok(norm_delta * ((2.0 / (1.0 - confidence)).ln() / (n as f64 * trials as f64)).sqrt())
}

/// Optimal scores `L_n(S)` of `trials` independent string pairs, in trial order.
pub fn sample_scores(scoring: &ScoringFunction<f64>, model: &StringModel, n: usize, trials: usize, seed: u64) -> Vec<f64> {
    run_trials(seed, trials, |_, rng| {
        let (x, y) = model.sample_pair(n, rng);
        optimal_score(&x, &y, scoring)
    })
}

pub fn estimate_lambda<R: Rng + ?Sized>(
    scoring: &ScoringFunction<f64>,
    model: &StringModel,
    n: usize,
    trials: usize,
    confidence: f64,
    rng: &mut R,
) -> Result<LambdaEstimate> {
    if n < 2 {
        return Err(Error::InvalidArgument("n must be at least 2".into()));
    }
    check_trials(trials)?;
    if scoring.alphabet() != model.alphabet() {
        return Err(Error::InvalidArgument("scoring and string model use different alphabets".into()));
    }
    let seed = rng.random();
    let rescaled: Vec<f64> = sample_scores(scoring, model, n, trials, seed).into_iter().map(|l| l / n as f64).collect();
    let (norm_delta, norm_inf) = (scoring.norm_delta(), scoring.norm_inf());
    let m = mean(&rescaled);
    Ok(LambdaEstimate {
        n,
        trials,
        mean: m,
        std_err: std_err(&rescaled),
        confidence,
        mcdiarmid_eps: mcdiarmid_half_width(norm_delta, n, trials, confidence)?,
        c_n: c_n(n)?,
        bracket_hi: m + bracket_width(norm_delta, norm_inf, n)?,
        norm_delta,
        norm_inf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn constant_scoring_is_deterministic() {
        let model = StringModel::uniform(Alphabet::binary());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (c, want) in [(0.5, 1.0), (-0.5, -0.5)] {
            let s = ScoringFunction::constant(Alphabet::binary(), c);
            let est = estimate_lambda(&s, &model, 20, 10, 0.95, &mut rng).unwrap();
            assert!((est.mean - want).abs() < 1e-12, "{c}: {}", est.mean);
            assert_eq!(est.std_err, 0.0);
            assert_eq!(est.mcdiarmid_eps, 0.0);
        }
    }

    #[test]
    fn point_mass_match_only_gives_one() {
        let a = Alphabet::binary();
        let model = StringModel::new(a.clone(), &[1.0, 0.0], &[1.0, 0.0]).unwrap();
        let est = estimate_lambda(&ScoringFunction::lcs(a), &model, 30, 5, 0.9, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(est.mean, 1.0);
    }

    #[test]
    fn bracket_constant() {
        assert!((c_n(2).unwrap() - ((2.0 * 3f64.ln() + 2.0 * 4f64.ln()) / 2f64.ln()).sqrt()).abs() < 1e-15);
        assert!(c_n(1).is_err());
        let mut prev = f64::INFINITY;
        for n in 3..2000 {
            let w = bracket_width(1.0, 1.0, n).unwrap();
            assert!(w < prev, "bracket width not decreasing at n={n}");
            prev = w;
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let a = Alphabet::binary();
        let model = StringModel::uniform(a.clone());
        let s = ScoringFunction::lcs(a);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(estimate_lambda(&s, &model, 1, 5, 0.9, &mut rng).is_err());
        assert!(estimate_lambda(&s, &model, 5, 0, 0.9, &mut rng).is_err());
        assert!(estimate_lambda(&s, &model, 5, 5, 1.0, &mut rng).is_err());
    }
}
