//! The experiment harness: each function reproduces one study as a
//! [`ResultTable`] that serializes to plot-ready CSV.
//!
//! Error-rate columns: `error_rate` counts trials whose sampled decision
//! disagrees with the exact-posterior decision on the same observations
//! (the quantity that shrinks with sample size). The `*_cause_error_rate`
//! columns count decisions that differ from the generating cause; the
//! exact-posterior rule itself has irreducible error of that kind, so those
//! columns are reported for both the estimator and the oracle.
//!
//! Every experiment is bit-reproducible from `(config, seed)`: trials are
//! independent work items on derived RNG streams and aggregation runs in a
//! fixed order, so any degree of parallelism emits identical tables.

mod convergence;
mod exp1;
mod exp2;
mod exp3;
mod exp4;
mod lemma;
mod multi;
mod samediff;
mod theorem1;

pub use exp1::exp1_population;
pub use exp2::exp2_convergence;
pub use exp3::exp3_sweep;
pub use exp4::exp4_disparity;
pub use lemma::lemma1_check;
pub use multi::exp_multi;
pub use samediff::exp_samediff;
pub use theorem1::theorem1_check;

use thiserror::Error;

use crate::config::{ConfigError, ExperimentConfig};
use crate::model::ModelError;
use crate::neural::CircuitError;
use crate::oracle::OracleError;
use crate::sampler::EstimatorError;
use crate::table::ResultTable;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Estimator(#[from] EstimatorError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("pool stayed silent after {attempts} emission attempts")]
    SilentPoolRetries { attempts: usize },
    #[error("{0}")]
    Limits(String),
}

/// A fresh table carrying the standard metadata block: experiment name,
/// code version and the full config echo.
fn new_table<S: Into<String>>(
    name: &str,
    columns: impl IntoIterator<Item = S>,
    config: &ExperimentConfig,
) -> ResultTable {
    let mut table = ResultTable::new(columns);
    table.push_metadata("experiment", name);
    table.push_metadata("version", env!("CARGO_PKG_VERSION"));
    config.echo_into(&mut table);
    table
}

/// Wilson 95% score interval for a binomial proportion.
pub fn wilson_interval(successes: usize, n: usize) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959963984540054f64;
    let n_f = n as f64;
    let p = successes as f64 / n_f;
    let z2 = z * z;
    let denom = 1.0 + z2 / n_f;
    let center = (p + z2 / (2.0 * n_f)) / denom;
    let half = z / denom * (p * (1.0 - p) / n_f + z2 / (4.0 * n_f * n_f)).sqrt();
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if successes == n { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

/// Guards the stream-id packing limits of the harness.
fn check_limits(config: &ExperimentConfig, repetitions: usize) -> Result<(), ExperimentError> {
    if repetitions > (u8::MAX as usize) + 1 {
        return Err(ExperimentError::Limits(format!(
            "repetitions must be at most 256 for stream derivation, got {repetitions}"
        )));
    }
    if config.sample_sizes.len() > 64 {
        return Err(ExperimentError::Limits(format!(
            "at most 64 sample sizes supported, got {}",
            config.sample_sizes.len()
        )));
    }
    Ok(())
}
