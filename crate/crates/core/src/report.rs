//! CSV and JSON emission of experiment results.
//!
//! CSV files have the header `seed,config_hash,n,statistic,value` and one
//! row per grid point and statistic. JSON files wrap the full report in an
//! envelope carrying the schema version, crate version, seed, config hash
//! and the config itself, so a run can be replayed from its output.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::experiments::{FluctuationReport, LambdaEstimate, PointConvergenceReport, SetConvergenceReport, TailReport};

pub const SCHEMA_VERSION: u32 = 1;
pub const CRATE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Config serialized with object keys in sorted order.
pub fn canonical_json<C: Serialize>(config: &C) -> Result<String> {
    let value = serde_json::to_value(config).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(value.to_string())
}

/// Hex SHA-256 of the canonical JSON form of `config`.
pub fn config_hash<C: Serialize>(config: &C) -> Result<String> {
    let digest = Sha256::digest(canonical_json(config)?.as_bytes());
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub n: usize,
    pub statistic: String,
    pub value: f64,
}

impl Row {
    pub fn new(n: usize, statistic: impl Into<String>, value: f64) -> Self {
        Row { n, statistic: statistic.into(), value }
    }
}

/// Flattening of a report into CSV rows.
pub trait Tabular {
    fn rows(&self) -> Vec<Row>;
}

pub fn write_csv<W: Write>(mut out: W, seed: u64, config_hash: &str, rows: &[Row]) -> io::Result<()> {
    writeln!(out, "seed,config_hash,n,statistic,value")?;
    for r in rows {
        writeln!(out, "{seed},{config_hash},{},{},{}", r.n, r.statistic, r.value)?;
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct Envelope<'a, R> {
    pub schema_version: u32,
    pub crate_version: &'static str,
    pub command: &'a str,
    pub seed: u64,
    pub config_hash: String,
    pub config: Value,
    pub report: &'a R,
}

impl<'a, R: Serialize> Envelope<'a, R> {
    pub fn new<C: Serialize>(command: &'a str, seed: u64, config: &C, report: &'a R) -> Result<Self> {
        Ok(Envelope {
            schema_version: SCHEMA_VERSION,
            crate_version: CRATE_VERSION,
            command,
            seed,
            config_hash: config_hash(config)?,
            config: serde_json::to_value(config).map_err(|e| Error::InvalidArgument(e.to_string()))?,
            report,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::InvalidArgument(e.to_string()))
    }
}

impl Tabular for LambdaEstimate {
    fn rows(&self) -> Vec<Row> {
        let n = self.n;
        vec![
            Row::new(n, "lambda_hat", self.mean),
            Row::new(n, "std_err", self.std_err),
            Row::new(n, "mcdiarmid_eps", self.mcdiarmid_eps),
            Row::new(n, "c_n", self.c_n),
            Row::new(n, "bracket_hi", self.bracket_hi),
        ]
    }
}

impl Tabular for TailReport {
    fn rows(&self) -> Vec<Row> {
        let n = self.n;
        vec![
            Row::new(n, "lambda_hat", self.lambda_hat),
            Row::new(n, "upper_frequency", self.upper_frequency),
            Row::new(n, "lower_frequency", self.lower_frequency),
            Row::new(n, "proof_bound", self.proof_bound),
            Row::new(n, "stated_bound", self.stated_bound),
            Row::new(n, "binomial_sd", self.binomial_sd),
        ]
    }
}

impl Tabular for SetConvergenceReport {
    fn rows(&self) -> Vec<Row> {
        let mut rows = Vec::new();
        for r in &self.rows {
            for (i, b) in r.bounds.iter().enumerate() {
                rows.push(Row::new(r.n, format!("lambda_hat_{i}"), b.lambda_hat));
                rows.push(Row::new(r.n, format!("bound_{i}"), b.bound));
            }
            rows.push(Row::new(r.n, "violation_rate", r.violation_rate));
            rows.push(Row::new(r.n, "union_bound", r.union_bound));
            rows.push(Row::new(r.n, "distance_plus", r.distance_plus));
            rows.push(Row::new(r.n, "distance_plus_std_err", r.distance_plus_std_err));
            rows.push(Row::new(r.n, "distance_ref", r.distance_ref));
            rows.push(Row::new(r.n, "distance_ref_std_err", r.distance_ref_std_err));
            rows.push(Row::new(r.n, "proxy_diameter", r.proxy_diameter));
        }
        rows
    }
}

impl Tabular for PointConvergenceReport {
    fn rows(&self) -> Vec<Row> {
        let mut rows = Vec::new();
        for r in &self.rows {
            rows.push(Row::new(r.n, "mean_diameter", r.mean_diameter));
            rows.push(Row::new(r.n, "diameter_std_err", r.diameter_std_err));
            rows.push(Row::new(r.n, "dispersion", r.dispersion));
            rows.push(Row::new(r.n, "dispersion_std_err", r.dispersion_std_err));
            rows.push(Row::new(r.n, "mean_log2_count", r.mean_log2_count));
            for (k, v) in r.grand_mean.iter().enumerate() {
                rows.push(Row::new(r.n, format!("grand_mean_{k}"), *v));
            }
        }
        rows
    }
}

impl Tabular for FluctuationReport {
    fn rows(&self) -> Vec<Row> {
        let mut rows = Vec::new();
        for r in &self.rows {
            rows.push(Row::new(r.n, "mean_score", r.mean_score));
            rows.push(Row::new(r.n, "variance", r.variance));
            rows.push(Row::new(r.n, "variance_over_n", r.variance_over_n));
            rows.push(Row::new(r.n, "mean_perturbation", r.mean_perturbation));
            rows.push(Row::new(r.n, "perturbation_frequency", r.perturbation_frequency));
        }
        rows.push(Row::new(0, "criterion_value", self.criterion_value));
        rows.push(Row::new(0, "epsilon", self.epsilon));
        if let Some(fit) = self.fit {
            rows.push(Row::new(0, "slope", fit.slope));
            if let Some(r2) = fit.r_squared {
                rows.push(Row::new(0, "r_squared", r2));
            }
        }
        rows
    }
}
