//! Convergence of the alignment-distribution sets and of optimal points.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::Rng;
use serde::Serialize;

use super::{check_grid, check_trials, lambda::sample_scores, mcdiarmid_half_width, mean, run_trials, std_err, StringModel};
use crate::alignment::{Alignment, Step};
use crate::dist::{euclidean, DistVector};
use crate::engine::{enumerate_optimal, optimal_score, OptimalAlignments};
use crate::error::{Error, Result};
use crate::geometry::{diameter, project_onto_polyhedron, random_unit_vector, HalfSpace};
use crate::scoring::ScoringFunction;
use crate::sequence::LetterString;

/// Up to this many optimal alignments the optimal set is enumerated and its
/// diameter computed exactly.
const EXACT_DIAMETER_COUNT: u64 = 4096;
const DYKSTRA_TOLERANCE: f64 = 1e-12;
const DYKSTRA_SWEEPS: usize = 200_000;
/// Score comparisons against a bound allow this much rounding.
const BOUND_SLACK: f64 = 1e-9;

/// Spread of the optimal distributions of one instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialSpread {
    /// Diameter of the optimal distribution set (a lower bound unless `exact`).
    pub diameter: f64,
    pub exact: bool,
    /// Mean of the uniformly sampled optimal distributions.
    pub sample_mean: Vec<f64>,
    pub log2_count: f64,
}

fn log2_biguint(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 52 {
        return v.to_f64().unwrap_or(0.0).log2();
    }
    let shift = bits - 52;
    ((v >> shift).to_f64().unwrap_or(0.0)).log2() + shift as f64
}

/// Diameter of `SET*(x, y)`: exact from enumeration when the number of
/// optimal alignments is small, otherwise the largest distance between
/// extreme optimal distributions along the coordinate axes, along
/// `random_directions` random directions, and among `samples` uniform samples.
pub fn within_trial_diameter<R: Rng + ?Sized>(
    x: &LetterString,
    y: &LetterString,
    scoring: &ScoringFunction<f64>,
    samples: usize,
    random_directions: usize,
    rng: &mut R,
) -> Result<TrialSpread> {
    if samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample per trial".into()));
    }
    if x.len() != y.len() || x.is_empty() {
        return Err(Error::UnequalLengths { x: x.len(), y: y.len() });
    }
    let n = x.len();
    let alphabet = scoring.alphabet();
    let opt = OptimalAlignments::new(x, y, scoring);
    let log2_count = log2_biguint(opt.count());
    let sampled: Vec<Vec<f64>> = (0..samples)
        .map(|_| opt.sample(rng).empirical_distribution(alphabet).map(|d| d.to_f64()))
        .collect::<Result<_>>()?;
    let dim = alphabet.dim();
    let sample_mean: Vec<f64> = (0..dim).map(|k| sampled.iter().map(|p| p[k]).sum::<f64>() / samples as f64).collect();

    let small = opt.count().to_u64().is_some_and(|c| c <= EXACT_DIAMETER_COUNT);
    if small {
        let set = enumerate_optimal(x, y, scoring, EXACT_DIAMETER_COUNT as usize)?;
        let points: Vec<Vec<f64>> = set.dists.iter().map(DistVector::to_f64).collect();
        return Ok(TrialSpread { diameter: diameter(&points), exact: set.exhaustive, sample_mean, log2_count });
    }

    let mut points = sampled;
    let mut directions = Vec::with_capacity(2 * dim + random_directions);
    for k in 0..dim {
        for sign in [1.0, -1.0] {
            let mut d = vec![0.0; dim];
            d[k] = sign;
            directions.push(d);
        }
    }
    directions.extend((0..random_directions).map(|_| random_unit_vector::<f64, _>(dim, rng)));
    for d in &directions {
        let (_, counts) = opt.support(d)?;
        points.push(DistVector::new(counts, n)?.to_f64());
    }
    points.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
    points.dedup();
    Ok(TrialSpread { diameter: diameter(&points), exact: false, sample_mean, log2_count })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointConvergenceConfig {
    pub n_grid: Vec<usize>,
    pub trials: usize,
    pub samples_per_trial: usize,
    pub random_directions: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointConvergenceRow {
    pub n: usize,
    pub mean_diameter: f64,
    pub diameter_std_err: f64,
    /// Fraction of trials whose diameter was computed exactly.
    pub exact_fraction: f64,
    /// Mean distance of per-trial sample means from their grand mean.
    pub dispersion: f64,
    pub dispersion_std_err: f64,
    pub mean_log2_count: f64,
    pub grand_mean: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointConvergenceReport {
    pub rows: Vec<PointConvergenceRow>,
    /// Grand mean of optimal distributions at the largest `n`.
    pub p_hat: Vec<f64>,
    pub p_hat_dispersion: f64,
    pub diameter_decreasing: bool,
    pub dispersion_decreasing: bool,
}

pub fn point_convergence_experiment<R: Rng + ?Sized>(
    scoring: &ScoringFunction<f64>,
    model: &StringModel,
    config: &PointConvergenceConfig,
    rng: &mut R,
) -> Result<PointConvergenceReport> {
    check_grid(&config.n_grid)?;
    check_trials(config.trials)?;
    let dim = scoring.dim();
    let mut rows = Vec::with_capacity(config.n_grid.len());
    for &n in &config.n_grid {
        let seed = rng.random();
        let spreads = run_trials(seed, config.trials, |_, trng| {
            let (x, y) = model.sample_pair(n, trng);
            within_trial_diameter(&x, &y, scoring, config.samples_per_trial, config.random_directions, trng)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let diameters: Vec<f64> = spreads.iter().map(|s| s.diameter).collect();
        let grand_mean: Vec<f64> = (0..dim).map(|k| mean(&spreads.iter().map(|s| s.sample_mean[k]).collect::<Vec<_>>())).collect();
        let offsets: Vec<f64> = spreads.iter().map(|s| euclidean(&s.sample_mean, &grand_mean)).collect();
        rows.push(PointConvergenceRow {
            n,
            mean_diameter: mean(&diameters),
            diameter_std_err: std_err(&diameters),
            exact_fraction: spreads.iter().filter(|s| s.exact).count() as f64 / spreads.len() as f64,
            dispersion: mean(&offsets),
            dispersion_std_err: std_err(&offsets),
            mean_log2_count: mean(&spreads.iter().map(|s| s.log2_count).collect::<Vec<_>>()),
            grand_mean,
        });
    }
    let last = rows.last().expect("nonempty grid");
    let (first, last_ref) = (&rows[0], last);
    Ok(PointConvergenceReport {
        p_hat: last.grand_mean.clone(),
        p_hat_dispersion: last.dispersion,
        diameter_decreasing: last_ref.mean_diameter <= first.mean_diameter,
        dispersion_decreasing: last_ref.dispersion <= first.dispersion,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SetConvergenceConfig {
    pub n_grid: Vec<usize>,
    pub trials: usize,
    /// Random scorings per trial whose optimal alignments extend the proxy.
    pub auxiliary_scorings: usize,
    /// Uniformly random lattice paths per trial added to the proxy.
    pub random_alignments: usize,
    /// Trials behind each `lambda_n` estimate.
    pub lambda_trials: usize,
    /// Per-trial failure budget shared by the reference half-spaces.
    pub alpha: f64,
    /// Confidence of the `lambda_n` intervals.
    pub confidence: f64,
    /// Length for the reference estimate of the limit; defaults to twice
    /// the largest grid value.
    pub reference_n: Option<usize>,
}

/// Estimate of `lambda_n(S_i)` and the half-space bound derived from it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HalfSpaceBound {
    pub lambda_hat: f64,
    pub std_err: f64,
    pub ci_half_width: f64,
    /// Right-hand side of the `H_n^+` constraint: `lambda_hat + margin`.
    pub bound: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SetConvergenceRow {
    pub n: usize,
    pub bounds: Vec<HalfSpaceBound>,
    /// Fraction of trials in which some `L_n(S_i)/n` exceeded its bound.
    pub violation_rate: f64,
    pub union_bound: f64,
    pub binomial_sd: f64,
    /// Mean over trials of `max_p d(p, cap H_n^+)` over proxy points.
    pub distance_plus: f64,
    pub distance_plus_std_err: f64,
    /// Same against the half-spaces at the reference estimate of the limit.
    pub distance_ref: f64,
    pub distance_ref_std_err: f64,
    /// Mean diameter of the proxy point set.
    pub proxy_diameter: f64,
    pub mean_proxy_points: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SetConvergenceReport {
    pub rows: Vec<SetConvergenceRow>,
    pub reference_n: usize,
    pub reference_lambda: Vec<f64>,
    pub lambda_monotone: bool,
    pub distance_plus_non_increasing: bool,
    pub distance_ref_non_increasing: bool,
    pub violations_within_bound: bool,
}

fn random_alignment<R: Rng + ?Sized>(x: &LetterString, y: &LetterString, rng: &mut R) -> Alignment {
    let (n, m) = (x.len(), y.len());
    let (mut i, mut j) = (0, 0);
    let mut steps = Vec::with_capacity(n + m);
    while (i, j) != (n, m) {
        let options: Vec<Step> = Step::ALL
            .into_iter()
            .filter(|s| {
                let (di, dj) = s.delta();
                i + di <= n && j + dj <= m
            })
            .collect();
        let s = options[rng.random_range(0..options.len())];
        let (di, dj) = s.delta();
        (i, j) = (i + di, j + dj);
        steps.push(s);
    }
    Alignment::from_steps(x, y, &steps).expect("steps stay inside the grid")
}

fn halfspaces(scorings: &[ScoringFunction<f64>], bounds: &[f64]) -> Result<Vec<HalfSpace<f64>>> {
    scorings
        .iter()
        .zip(bounds)
        .filter(|(s, _)| s.score_vector().iter().any(|&v| v != 0.0))
        .map(|(s, &b)| HalfSpace::from_functional(s.score_vector(), b))
        .collect()
}

fn max_distance(points: &[Vec<f64>], hs: &[HalfSpace<f64>]) -> Result<f64> {
    points.iter().try_fold(0.0f64, |m, p| Ok(m.max(project_onto_polyhedron(p, hs, DYKSTRA_TOLERANCE, DYKSTRA_SWEEPS)?.1)))
}

fn trend_ok(values: &[(f64, f64)]) -> bool {
    values.windows(2).all(|w| w[1].0 <= w[0].0 + 2.0 * (w[0].1 + w[1].1))
}

pub fn set_convergence_experiment<R: Rng + ?Sized>(
    references: &[ScoringFunction<f64>],
    model: &StringModel,
    config: &SetConvergenceConfig,
    rng: &mut R,
) -> Result<SetConvergenceReport> {
    check_grid(&config.n_grid)?;
    check_trials(config.trials)?;
    check_trials(config.lambda_trials)?;
    if references.is_empty() {
        return Err(Error::InvalidArgument("need at least one reference scoring".into()));
    }
    if !(config.alpha > 0.0 && config.alpha < 1.0) {
        return Err(Error::InvalidArgument("alpha must lie in (0, 1)".into()));
    }
    let alphabet = model.alphabet().clone();
    let k = references.len() as f64;
    let max_n = *config.n_grid.last().expect("nonempty grid");
    let reference_n = config.reference_n.unwrap_or(2 * max_n);

    let reference_lambda: Vec<f64> = references
        .iter()
        .map(|s| {
            let seed = rng.random();
            mean(&sample_scores(s, model, reference_n, config.lambda_trials, seed)) / reference_n as f64
        })
        .collect();
    let ref_halfspaces = halfspaces(references, &reference_lambda)?;

    let mut rows = Vec::with_capacity(config.n_grid.len());
    for &n in &config.n_grid {
        let nf = n as f64;
        let bounds = references
            .iter()
            .map(|s| {
                let seed = rng.random();
                let rescaled: Vec<f64> =
                    sample_scores(s, model, n, config.lambda_trials, seed).into_iter().map(|l| l / nf).collect();
                let lambda_hat = mean(&rescaled);
                let ci = mcdiarmid_half_width(s.norm_delta(), n, config.lambda_trials, config.confidence)?;
                let margin = s.norm_delta() * ((k / config.alpha).ln() / nf).sqrt() + ci;
                Ok(HalfSpaceBound { lambda_hat, std_err: std_err(&rescaled), ci_half_width: ci, bound: lambda_hat + margin, margin })
            })
            .collect::<Result<Vec<_>>>()?;
        let plus = halfspaces(references, &bounds.iter().map(|b| b.bound).collect::<Vec<_>>())?;

        let seed = rng.random();
        let outcomes = run_trials(seed, config.trials, |_, trng| -> Result<(bool, f64, f64, f64, usize)> {
            let (x, y) = model.sample_pair(n, trng);
            let violated = references
                .iter()
                .zip(&bounds)
                .any(|(s, b)| optimal_score(&x, &y, s) / nf > b.bound + BOUND_SLACK);
            let mut points = Vec::new();
            let auxiliary: Vec<ScoringFunction<f64>> = (0..config.auxiliary_scorings)
                .map(|_| ScoringFunction::sample_uniform_sphere(alphabet.clone(), trng))
                .collect();
            for s in references.iter().chain(&auxiliary) {
                let a = OptimalAlignments::new(&x, &y, s).sample(trng);
                points.push(a.empirical_distribution(&alphabet)?.to_f64());
            }
            points.push(Alignment::all_gaps(&x, &y).empirical_distribution(&alphabet)?.to_f64());
            for _ in 0..config.random_alignments {
                points.push(random_alignment(&x, &y, trng).empirical_distribution(&alphabet)?.to_f64());
            }
            points.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
            points.dedup();
            let d_plus = max_distance(&points, &plus)?;
            let d_ref = max_distance(&points, &ref_halfspaces)?;
            Ok((violated, d_plus, d_ref, diameter(&points), points.len()))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

        let trials = outcomes.len() as f64;
        let d_plus: Vec<f64> = outcomes.iter().map(|o| o.1).collect();
        let d_ref: Vec<f64> = outcomes.iter().map(|o| o.2).collect();
        rows.push(SetConvergenceRow {
            n,
            bounds,
            violation_rate: outcomes.iter().filter(|o| o.0).count() as f64 / trials,
            union_bound: config.alpha,
            binomial_sd: (config.alpha * (1.0 - config.alpha) / trials).sqrt(),
            distance_plus: mean(&d_plus),
            distance_plus_std_err: std_err(&d_plus),
            distance_ref: mean(&d_ref),
            distance_ref_std_err: std_err(&d_ref),
            proxy_diameter: mean(&outcomes.iter().map(|o| o.3).collect::<Vec<_>>()),
            mean_proxy_points: outcomes.iter().map(|o| o.4 as f64).sum::<f64>() / trials,
        });
    }

    let lambda_monotone = (0..references.len()).all(|i| {
        rows.iter().enumerate().all(|(a, ra)| {
            rows[a + 1..].iter().all(|rb| {
                let (x, y) = (&ra.bounds[i], &rb.bounds[i]);
                x.lambda_hat <= y.lambda_hat + 2.0 * (x.std_err + y.std_err)
            })
        })
    });
    let plus: Vec<(f64, f64)> = rows.iter().map(|r| (r.distance_plus, r.distance_plus_std_err)).collect();
    let refd: Vec<(f64, f64)> = rows.iter().map(|r| (r.distance_ref, r.distance_ref_std_err)).collect();
    Ok(SetConvergenceReport {
        distance_plus_non_increasing: trend_ok(&plus),
        distance_ref_non_increasing: trend_ok(&refd),
        violations_within_bound: rows.iter().all(|r| r.violation_rate <= r.union_bound + 3.0 * r.binomial_sd),
        lambda_monotone,
        reference_n,
        reference_lambda,
        rows,
    })
}
