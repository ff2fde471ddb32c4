use std::collections::hash_map::RandomState;
use std::fs;
use std::hash::{BuildHasher, Hasher};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aligndist::engine::enumerate_distributions;
use aligndist::experiments::{
    best_letter_pair, estimate_lambda, fluctuation_experiment, point_convergence_experiment, set_convergence_experiment,
    tail_bound_check, trial_rng, FluctuationConfig, PointConvergenceConfig, SetConvergenceConfig, StringModel,
};
use aligndist::lattice::{build_lattice, EdgeProportions, LatticePath};
use aligndist::report::{write_csv, Envelope, Row, Tabular};
use aligndist::{enumerate_optimal, Alphabet, DistVector, LetterDistribution, LetterString, Rational, Scoring};
use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

#[derive(Parser)]
#[command(name = "aligndist", version, about = "Optimal alignments and the distribution of aligned letter pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score one pair of strings and list its optimal and feasible distributions.
    Align(Run),
    /// Solve one instance as a last-passage path and report edge proportions.
    Lpp(Run),
    /// Estimate lambda_n = E[L_n] / n with concentration bounds.
    Lambda(Run),
    /// Track the distance of optimal distributions to the outer approximation.
    SetConvergence(Run),
    /// Track within-trial diameter and across-trial dispersion of optimal distributions.
    PointConvergence(Run),
    /// Measure Var[L_n] growth under the letter-substitution criterion.
    Fluctuation(Run),
    /// Compare empirical tail frequencies of L_n/n with exponential bounds.
    TailCheck(Run),
}

#[derive(Args)]
struct Run {
    /// JSON config file; an emitted report (with a "config" field) also works.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory for <command>.csv and <command>.json.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Worker threads (default: all available cores).
    #[arg(long)]
    threads: Option<usize>,
    #[command(flatten)]
    overrides: Config,
}

/// Experiment configuration. Every field can come from the config file and
/// be overridden on the command line.
#[derive(Args, Serialize, Deserialize, Default, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
struct Config {
    #[arg(skip)]
    #[serde(skip_serializing_if = "Option::is_none")]
    command: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    /// Alphabet letters, e.g. "ab".
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    alphabet: Option<String>,
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    probs_x: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    probs_y: Option<Vec<f64>>,
    /// lcs | constant:<c> | sphere:<seed> | table:<v1>,<v2>,...
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    scoring: Option<String>,
    /// Reference scorings for set-convergence (repeatable).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    scorings: Option<Vec<String>>,
    /// Number of uniform-sphere reference scorings when --scorings is absent.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    references: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    x: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    y: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    n_grid: Option<Vec<usize>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    trials: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    confidence: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    eps: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    /// Enumeration cap on distinct distributions per cell.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    cap: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    samples_per_trial: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    random_directions: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    auxiliary_scorings: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    random_alignments: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda_trials: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    reference_n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    perturbation_trials: Option<usize>,
    /// Letter pair "ab" for the fluctuation criterion (a replaced by b);
    /// chosen automatically when absent.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pair: Option<String>,
    /// String length and trial count used to estimate the limit distribution
    /// for the fluctuation criterion.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    p_hat_n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    p_hat_trials: Option<usize>,
}

macro_rules! override_fields {
    ($base:expr, $over:expr; $($field:ident),* $(,)?) => {
        $( if $over.$field.is_some() { $base.$field = $over.$field.clone(); } )*
    };
}

impl Config {
    fn apply(&mut self, over: &Config) {
        override_fields!(self, over; seed, alphabet, probs_x, probs_y, scoring, scorings, references, x, y, n, n_grid,
            trials, confidence, eps, alpha, cap, samples_per_trial, random_directions, auxiliary_scorings,
            random_alignments, lambda_trials, reference_n, perturbation_trials, pair, p_hat_n, p_hat_trials);
    }
}

/// A config error that names the field responsible.
#[derive(Debug)]
struct FieldError {
    field: &'static str,
    message: String,
}

impl std::fmt::Display for FieldError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invalid config field `{}`: {}", self.field, self.message)
    }
}

impl std::error::Error for FieldError {}

fn field_err(field: &'static str, message: impl std::fmt::Display) -> anyhow::Error {
    FieldError { field, message: message.to_string() }.into()
}

fn load_config(path: &Path) -> Result<Config> {
    let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let mut value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
    if value.get("schema_version").is_some() {
        value = value.get("config").cloned().ok_or_else(|| anyhow!("report {} has no `config` field", path.display()))?;
    }
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        anyhow!("invalid config field `{path}`: {}", e.into_inner())
    })
}

fn fresh_seed() -> u64 {
    let mut h = RandomState::new().build_hasher();
    h.write_u128(std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_nanos()).unwrap_or(0));
    h.finish()
}

fn positive(field: &'static str, v: usize) -> Result<usize> {
    if v == 0 {
        return Err(field_err(field, "must be at least 1"));
    }
    Ok(v)
}

fn probability(field: &'static str, v: f64) -> Result<f64> {
    if !(v > 0.0 && v < 1.0) {
        return Err(field_err(field, format!("{v} is not in (0, 1)")));
    }
    Ok(v)
}

fn parse_scoring(field: &'static str, text: &str, alphabet: &Alphabet) -> Result<Scoring> {
    let (kind, arg) = text.split_once(':').unwrap_or((text, ""));
    let scoring = match kind {
        "lcs" if arg.is_empty() => Scoring::lcs(alphabet.clone()),
        "constant" => {
            let c: f64 = arg.parse().map_err(|_| field_err(field, format!("bad constant `{arg}`")))?;
            Scoring::constant(alphabet.clone(), c)
        }
        "sphere" => {
            let seed: u64 = arg.parse().map_err(|_| field_err(field, format!("bad sphere seed `{arg}`")))?;
            Scoring::sample_uniform_sphere(alphabet.clone(), &mut trial_rng(seed, 0))
        }
        "table" => {
            let values: Vec<f64> = arg
                .split(',')
                .map(|v| v.trim().parse())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| field_err(field, format!("bad table `{arg}`")))?;
            Scoring::new(alphabet.clone(), values).map_err(|e| field_err(field, e))?
        }
        _ => return Err(field_err(field, format!("unknown scoring `{text}` (expected lcs, constant:<c>, sphere:<seed> or table:<values>)"))),
    };
    Ok(scoring)
}

/// A validated run: the resolved config (defaults filled in, only fields the
/// command uses) plus the objects built from it.
struct Resolved {
    config: Config,
    seed: u64,
    alphabet: Alphabet,
    model: StringModel,
}

fn resolve_common(command: &str, input: &Config, out: &mut Config) -> Result<Resolved> {
    if let Some(c) = &input.command {
        if c != command {
            return Err(field_err("command", format!("config is for `{c}`, not `{command}`")));
        }
    }
    out.command = Some(command.to_string());
    let seed = input.seed.ok_or_else(|| field_err("seed", "missing"))?;
    out.seed = Some(seed);
    let letters = input.alphabet.clone().unwrap_or_else(|| "ab".into());
    let alphabet = Alphabet::parse(&letters).map_err(|e| field_err("alphabet", e))?;
    out.alphabet = Some(letters);
    let uniform = vec![1.0 / alphabet.len() as f64; alphabet.len()];
    let px = input.probs_x.clone().unwrap_or_else(|| uniform.clone());
    let py = input.probs_y.clone().unwrap_or(uniform);
    LetterDistribution::new(&alphabet, &px).map_err(|e| field_err("probs_x", e))?;
    LetterDistribution::new(&alphabet, &py).map_err(|e| field_err("probs_y", e))?;
    let model = StringModel::new(alphabet.clone(), &px, &py).map_err(|e| field_err("probs_y", e))?;
    out.probs_x = Some(px);
    out.probs_y = Some(py);
    Ok(Resolved { config: out.clone(), seed, alphabet, model })
}

fn resolve_scoring(input: &Config, out: &mut Config, alphabet: &Alphabet) -> Result<Scoring> {
    let text = input.scoring.clone().unwrap_or_else(|| "lcs".into());
    let scoring = parse_scoring("scoring", &text, alphabet)?;
    out.scoring = Some(text);
    Ok(scoring)
}

fn resolve_grid(input: &Config, out: &mut Config, default: &[usize]) -> Result<Vec<usize>> {
    let grid = input.n_grid.clone().unwrap_or_else(|| default.to_vec());
    if grid.is_empty() {
        return Err(field_err("n_grid", "must not be empty"));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) || grid[0] == 0 {
        return Err(field_err("n_grid", "must be positive and strictly increasing"));
    }
    out.n_grid = Some(grid.clone());
    Ok(grid)
}

macro_rules! resolved_field {
    ($input:expr, $out:expr, $field:ident, $default:expr) => {{
        let v = $input.$field.unwrap_or($default);
        $out.$field = Some(v);
        v
    }};
}

fn emit<R: Serialize + Tabular>(run: &Run, command: &str, resolved: &Resolved, report: &R) -> Result<()> {
    let envelope = Envelope::new(command, resolved.seed, &resolved.config, report)?;
    fs::create_dir_all(&run.out_dir).with_context(|| format!("creating {}", run.out_dir.display()))?;
    let mut csv = Vec::new();
    write_csv(&mut csv, resolved.seed, &envelope.config_hash, &report.rows())?;
    let csv_path = run.out_dir.join(format!("{command}.csv"));
    let json_path = run.out_dir.join(format!("{command}.json"));
    fs::write(&csv_path, csv).with_context(|| format!("writing {}", csv_path.display()))?;
    fs::write(&json_path, envelope.to_json()? + "\n").with_context(|| format!("writing {}", json_path.display()))?;
    Ok(())
}

#[derive(Serialize)]
struct DistEntry {
    counts: Vec<u32>,
    coords: Vec<String>,
}

impl From<&DistVector> for DistEntry {
    fn from(d: &DistVector) -> Self {
        DistEntry { counts: d.counts().to_vec(), coords: d.coords::<Rational>().iter().map(|c| c.to_string()).collect() }
    }
}

#[derive(Serialize)]
struct AlignReport {
    x: String,
    y: String,
    score: f64,
    optimal_count: String,
    pair_labels: Vec<String>,
    optimal: Vec<DistEntry>,
    optimal_exhaustive: bool,
    feasible: Vec<DistEntry>,
    feasible_exhaustive: bool,
}

impl Tabular for AlignReport {
    fn rows(&self) -> Vec<Row> {
        let n = self.x.chars().count();
        vec![
            Row::new(n, "score", self.score),
            Row::new(n, "optimal_count", self.optimal_count.parse().unwrap_or(f64::INFINITY)),
            Row::new(n, "optimal_distributions", self.optimal.len() as f64),
            Row::new(n, "optimal_exhaustive", f64::from(u8::from(self.optimal_exhaustive))),
            Row::new(n, "feasible_distributions", self.feasible.len() as f64),
            Row::new(n, "feasible_exhaustive", f64::from(u8::from(self.feasible_exhaustive))),
        ]
    }
}

#[derive(Serialize)]
struct LppReport {
    x: String,
    y: String,
    n: usize,
    weight: f64,
    min_weight: f64,
    path: LatticePath,
    alignment_top: String,
    alignment_bottom: String,
    proportions: EdgeProportions,
}

impl Tabular for LppReport {
    fn rows(&self) -> Vec<Row> {
        vec![
            Row::new(self.n, "max_weight", self.weight),
            Row::new(self.n, "min_weight", self.min_weight),
            Row::new(self.n, "diagonal", self.proportions.diagonal),
            Row::new(self.n, "horizontal", self.proportions.horizontal),
            Row::new(self.n, "vertical", self.proportions.vertical),
        ]
    }
}

/// The instance strings: given explicitly, or drawn from the model.
fn instance(input: &Config, out: &mut Config, r: &Resolved) -> Result<(LetterString, LetterString)> {
    match (&input.x, &input.y) {
        (Some(x), Some(y)) => {
            let xs = LetterString::parse(&r.alphabet, x).map_err(|e| field_err("x", e))?;
            let ys = LetterString::parse(&r.alphabet, y).map_err(|e| field_err("y", e))?;
            if xs.len() != ys.len() {
                return Err(field_err("y", format!("length {} differs from x's length {}", ys.len(), xs.len())));
            }
            if xs.is_empty() {
                return Err(field_err("x", "must not be empty"));
            }
            out.x = Some(x.clone());
            out.y = Some(y.clone());
            Ok((xs, ys))
        }
        (None, None) => {
            let n = positive("n", resolved_field!(input, out, n, 10))?;
            Ok(r.model.sample_pair(n, &mut trial_rng(r.seed, 0)))
        }
        (Some(_), None) => Err(field_err("y", "required when x is given")),
        (None, Some(_)) => Err(field_err("x", "required when y is given")),
    }
}

fn show(d: &DistEntry) -> String {
    format!("({})", d.coords.join(", "))
}

fn align(run: &Run, input: &Config) -> Result<()> {
    let mut out = Config::default();
    let mut r = resolve_common("align", input, &mut out)?;
    let scoring = resolve_scoring(input, &mut out, &r.alphabet)?;
    let (x, y) = instance(input, &mut out, &r)?;
    let cap = positive("cap", resolved_field!(input, out, cap, 10_000))?;
    r.config = out;
    let optimal = enumerate_optimal(&x, &y, &scoring, cap)?;
    let (feasible, feasible_exhaustive) = enumerate_distributions(&x, &y, &r.alphabet, cap)?;
    let report = AlignReport {
        x: x.to_text(&r.alphabet),
        y: y.to_text(&r.alphabet),
        score: optimal.score,
        optimal_count: optimal.count.to_string(),
        pair_labels: (0..r.alphabet.dim()).map(|i| r.alphabet.pair_label(i)).collect(),
        optimal: optimal.dists.iter().map(DistEntry::from).collect(),
        optimal_exhaustive: optimal.exhaustive,
        feasible: feasible.iter().map(DistEntry::from).collect(),
        feasible_exhaustive,
    };
    emit(run, "align", &r, &report)?;
    println!(
        "align: score {} over {} optimal alignments, {} optimal and {} feasible distributions (exhaustive={})",
        report.score,
        report.optimal_count,
        report.optimal.len(),
        report.feasible.len(),
        report.optimal_exhaustive && report.feasible_exhaustive
    );
    println!("pairs: ({})", report.pair_labels.join(", "));
    for d in &report.optimal {
        println!("optimal  {}", show(d));
    }
    const SHOWN: usize = 50;
    for d in report.feasible.iter().take(SHOWN) {
        println!("feasible {}", show(d));
    }
    if report.feasible.len() > SHOWN {
        println!("feasible ... {} more in align.json", report.feasible.len() - SHOWN);
    }
    Ok(())
}

fn lpp(run: &Run, input: &Config) -> Result<()> {
    let mut out = Config::default();
    let mut r = resolve_common("lpp", input, &mut out)?;
    let scoring = resolve_scoring(input, &mut out, &r.alphabet)?;
    let (x, y) = instance(input, &mut out, &r)?;
    r.config = out;
    let lattice = build_lattice(&x, &y, &scoring)?;
    let (weight, path) = lattice.max_weight_path();
    let (min_weight, _) = lattice.min_weight_path();
    let (top, bottom) = lattice.decode(&path)?.to_rows(&r.alphabet);
    let proportions = path.edge_proportions(x.len())?;
    let report = LppReport {
        x: x.to_text(&r.alphabet),
        y: y.to_text(&r.alphabet),
        n: x.len(),
        weight,
        min_weight,
        path,
        alignment_top: top,
        alignment_bottom: bottom,
        proportions,
    };
    emit(run, "lpp", &r, &report)?;
    println!(
        "lpp: n={} max weight {} via {} (diagonal {:.4}, horizontal {:.4}, vertical {:.4})",
        report.n, report.weight, report.path, proportions.diagonal, proportions.horizontal, proportions.vertical
    );
    Ok(())
}

fn lambda(run: &Run, input: &Config) -> Result<()> {
    let mut out = Config::default();
    let mut r = resolve_common("lambda", input, &mut out)?;
    let scoring = resolve_scoring(input, &mut out, &r.alphabet)?;
    let n = resolved_field!(input, out, n, 100);
    if n < 2 {
        return Err(field_err("n", "must be at least 2"));
    }
    let trials = positive("trials", resolved_field!(input, out, trials, 100))?;
    let confidence = probability("confidence", resolved_field!(input, out, confidence, 0.95))?;
    r.config = out;
    let est = estimate_lambda(&scoring, &r.model, n, trials, confidence, &mut trial_rng(r.seed, 0))?;
    emit(run, "lambda", &r, &est)?;
    println!(
        "lambda: n={} trials={} lambda_hat={:.6} (std err {:.6}, {}% McDiarmid half-width {:.6}, upper bracket {:.6})",
        est.n,
        est.trials,
        est.mean,
        est.std_err,
        est.confidence * 100.0,
        est.mcdiarmid_eps,
        est.bracket_hi
    );
    Ok(())
}

fn tail_check(run: &Run, input: &Config) -> Result<()> {
    let mut out = Config::default();
    let mut r = resolve_common("tail-check", input, &mut out)?;
    let scoring = resolve_scoring(input, &mut out, &r.alphabet)?;
    let n = positive("n", resolved_field!(input, out, n, 100))?;
    let trials = positive("trials", resolved_field!(input, out, trials, 1000))?;
    let eps = resolved_field!(input, out, eps, 0.05);
    if !(eps > 0.0) {
        return Err(field_err("eps", "must be positive"));
    }
    r.config = out;
    let t = tail_bound_check(&scoring, &r.model, n, trials, eps, &mut trial_rng(r.seed, 0))?;
    emit(run, "tail-check", &r, &t)?;
    println!(
        "tail-check: n={} eps={} upper {:.4}, lower {:.4} vs bound {:.4} ({}){}",
        t.n,
        t.eps,
        t.upper_frequency,
        t.lower_frequency,
        t.proof_bound,
        if t.upper_ok && t.lower_ok { "within bound" } else { "BOUND EXCEEDED" },
        if t.informative { "" } else { ", too few trials to be informative" }
    );
    Ok(())
}

fn point_convergence(run: &Run, input: &Config) -> Result<()> {
    let mut out = Config::default();
    let mut r = resolve_common("point-convergence", input, &mut out)?;
    let scoring = resolve_scoring(input, &mut out, &r.alphabet)?;
    let config = PointConvergenceConfig {
        n_grid: resolve_grid(input, &mut out, &[50, 100, 200, 400])?,
        trials: positive("trials", resolved_field!(input, out, trials, 50))?,
        samples_per_trial: resolved_field!(input, out, samples_per_trial, 4),
        random_directions: resolved_field!(input, out, random_directions, 8),
    };
    r.config = out;
    let rep = point_convergence_experiment(&scoring, &r.model, &config, &mut trial_rng(r.seed, 0))?;
    emit(run, "point-convergence", &r, &rep)?;
    let (first, last) = (&rep.rows[0], &rep.rows[rep.rows.len() - 1]);
    println!(
        "point-convergence: diameter {:.4} -> {:.4}, dispersion {:.4} -> {:.4} (n {} -> {})",
        first.mean_diameter, last.mean_diameter, first.dispersion, last.dispersion, first.n, last.n
    );
    Ok(())
}

fn set_convergence(run: &Run, input: &Config) -> Result<()> {
    let mut out = Config::default();
    let mut r = resolve_common("set-convergence", input, &mut out)?;
    let specs = match &input.scorings {
        Some(s) if s.is_empty() => return Err(field_err("scorings", "must not be empty")),
        Some(s) => s.clone(),
        None => {
            let k = positive("references", input.references.unwrap_or(10))?;
            (1..=k as u64).map(|i| format!("sphere:{}", r.seed.wrapping_add(i))).collect()
        }
    };
    let scorings = specs.iter().map(|s| parse_scoring("scorings", s, &r.alphabet)).collect::<Result<Vec<_>>>()?;
    out.scorings = Some(specs);
    let config = SetConvergenceConfig {
        n_grid: resolve_grid(input, &mut out, &[16, 32, 64, 128])?,
        trials: positive("trials", resolved_field!(input, out, trials, 40))?,
        auxiliary_scorings: resolved_field!(input, out, auxiliary_scorings, 20),
        random_alignments: resolved_field!(input, out, random_alignments, 10),
        lambda_trials: positive("lambda_trials", resolved_field!(input, out, lambda_trials, 200))?,
        alpha: probability("alpha", resolved_field!(input, out, alpha, 0.05))?,
        confidence: probability("confidence", resolved_field!(input, out, confidence, 0.95))?,
        reference_n: input.reference_n,
    };
    out.reference_n = input.reference_n;
    r.config = out;
    let rep = set_convergence_experiment(&scorings, &r.model, &config, &mut trial_rng(r.seed, 0))?;
    emit(run, "set-convergence", &r, &rep)?;
    let (first, last) = (&rep.rows[0], &rep.rows[rep.rows.len() - 1]);
    println!(
        "set-convergence: distance to H_n+ {:.4} -> {:.4}, to reference {:.4} -> {:.4}, max violation rate {:.3} (n {} -> {})",
        first.distance_plus,
        last.distance_plus,
        first.distance_ref,
        last.distance_ref,
        rep.rows.iter().map(|row| row.violation_rate).fold(0.0, f64::max),
        first.n,
        last.n
    );
    Ok(())
}

fn fluctuation(run: &Run, input: &Config) -> Result<()> {
    let mut out = Config::default();
    let mut r = resolve_common("fluctuation", input, &mut out)?;
    let scoring = resolve_scoring(input, &mut out, &r.alphabet)?;
    let config = FluctuationConfig {
        n_grid: resolve_grid(input, &mut out, &[100, 200, 400, 800])?,
        trials: positive("trials", resolved_field!(input, out, trials, 200))?,
        perturbation_trials: resolved_field!(input, out, perturbation_trials, 50),
    };
    let p_hat_n = positive("p_hat_n", resolved_field!(input, out, p_hat_n, 400))?;
    let p_hat_trials = positive("p_hat_trials", resolved_field!(input, out, p_hat_trials, 20))?;
    let pair = match &input.pair {
        None => None,
        Some(p) => {
            let letters: Vec<char> = p.chars().collect();
            let [a, b] = letters[..] else {
                return Err(field_err("pair", "expected two letters, e.g. \"ab\""));
            };
            let a = r.alphabet.letter_index(a).map_err(|e| field_err("pair", e))?;
            let b = r.alphabet.letter_index(b).map_err(|e| field_err("pair", e))?;
            if a == b {
                return Err(field_err("pair", "letters must differ"));
            }
            out.pair = Some(p.clone());
            Some((a, b))
        }
    };
    r.config = out;
    let mut rng = trial_rng(r.seed, 0);
    let probe = PointConvergenceConfig { n_grid: vec![p_hat_n], trials: p_hat_trials, samples_per_trial: 1, random_directions: 0 };
    let p_hat = point_convergence_experiment(&scoring, &r.model, &probe, &mut rng)?.p_hat;
    let (a, b) = match pair {
        Some(p) => p,
        None => {
            let (a, b, _) = best_letter_pair(&scoring, &p_hat)?;
            (a, b)
        }
    };
    let rep = fluctuation_experiment(&scoring, &r.model, a, b, &p_hat, &config, &mut rng)?;
    emit(run, "fluctuation", &r, &rep)?;
    if !rep.criterion_met {
        let value = if rep.criterion_value == 0.0 { "0".to_string() } else { format!("{:.4}", rep.criterion_value) };
        println!("fluctuation: criterion not met (value {value})");
    } else {
        let fit = rep.fit.as_ref();
        println!(
            "fluctuation: criterion met (value {:.4}, {} -> {}), Var/n slope {:.4}, R^2 {:.3}, max/min Var/n {:.2}",
            rep.criterion_value,
            rep.a,
            rep.b,
            fit.map_or(f64::NAN, |f| f.slope),
            fit.and_then(|f| f.r_squared).unwrap_or(f64::NAN),
            rep.variance_ratio.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}

fn execute(command: &Command) -> Result<()> {
    let (name, run) = match command {
        Command::Align(r) => ("align", r),
        Command::Lpp(r) => ("lpp", r),
        Command::Lambda(r) => ("lambda", r),
        Command::SetConvergence(r) => ("set-convergence", r),
        Command::PointConvergence(r) => ("point-convergence", r),
        Command::Fluctuation(r) => ("fluctuation", r),
        Command::TailCheck(r) => ("tail-check", r),
    };
    let mut config = match &run.config {
        Some(path) => load_config(path)?,
        None => Config::default(),
    };
    config.apply(&run.overrides);
    if config.seed.is_none() {
        // Echo the generated seed so the run can be repeated.
        let seed = fresh_seed();
        eprintln!("seed: {seed}");
        config.seed = Some(seed);
    }
    if let Some(threads) = run.threads {
        if threads == 0 {
            bail!(field_err("threads", "must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    }
    match name {
        "align" => align(run, &config),
        "lpp" => lpp(run, &config),
        "lambda" => lambda(run, &config),
        "set-convergence" => set_convergence(run, &config),
        "point-convergence" => point_convergence(run, &config),
        "fluctuation" => fluctuation(run, &config),
        _ => tail_check(run, &config),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 2 for numerical failures inside the library, 1 for everything else.
fn exit_code(e: &anyhow::Error) -> u8 {
    let numerical = e
        .chain()
        .any(|c| matches!(c.downcast_ref::<aligndist::Error>(), Some(aligndist::Error::ProjectionDidNotConverge { .. })));
    if numerical {
        2
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let numerical = anyhow::Error::from(aligndist::Error::ProjectionDidNotConverge { iterations: 10 });
        assert_eq!(exit_code(&numerical.context("set-convergence")), 2);
        assert_eq!(exit_code(&field_err("n", "must be at least 1")), 1);
        assert_eq!(exit_code(&anyhow::Error::from(aligndist::Error::GapGapColumn)), 1);
    }
}
