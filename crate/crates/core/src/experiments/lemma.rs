//! Empirical verification of the two concentration bounds behind the
//! convergence proof: the ratio-of-sums bound and its reciprocal form.
//!
//! `X ~ Normal(lemma_mu_x, lemma_sigma_x^2)` and `Y ~ Normal(lemma_mu_y,
//! lemma_sigma_y^2)` are drawn independently. For each `(N, epsilon)` cell
//! the table reports the empirical frequency of
//! `|sum(X)/sum(Y) - mu_x/mu_y| < epsilon` next to the guaranteed lower
//! bound `1 - 16 sigma_x^2/(N mu_y^2 eps^2) - 16 mu_x^2 sigma_y^2/(N mu_y^4
//! eps^2)`, and likewise `|1/mean(X) - 1/mu_x| < epsilon` against
//! `1 - sigma_x^2/(N mu_x^2 eps^2)`. Negative bounds are clipped to zero.

use rayon::prelude::*;

use super::{new_table, ExperimentError};
use crate::config::{ConfigError, ExperimentConfig};
use crate::real::Real as _;
use crate::rng::{domain, stream, stream_id};
use crate::table::{ResultTable, Value};

const MIN_ABS_MEAN: f64 = 1e-9;

/// Ratio and reciprocal statistics of one repetition at sample size `n`.
pub(crate) fn ratio_and_reciprocal(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let sum_x: f64 = xs.iter().sum();
    let sum_y: f64 = ys.iter().sum();
    (sum_x / sum_y, xs.len() as f64 / sum_x)
}

pub fn lemma1_check(config: &ExperimentConfig) -> Result<ResultTable, ExperimentError> {
    if config.lemma_mu_x.abs() < MIN_ABS_MEAN {
        return Err(ConfigError::Invalid {
            field: "lemma_mu_x",
            message: "must be bounded away from zero (lemma precondition)".to_string(),
        }
        .into());
    }
    if config.lemma_mu_y.abs() < MIN_ABS_MEAN {
        return Err(ConfigError::Invalid {
            field: "lemma_mu_y",
            message: "must be bounded away from zero (lemma precondition)".to_string(),
        }
        .into());
    }
    if config.sample_sizes.len() > u16::MAX as usize {
        return Err(ExperimentError::Limits("too many sample sizes".to_string()));
    }

    let (mu_x, sd_x) = (config.lemma_mu_x, config.lemma_sigma_x);
    let (mu_y, sd_y) = (config.lemma_mu_y, config.lemma_sigma_y);
    let target_ratio = mu_x / mu_y;
    let target_recip = 1.0 / mu_x;

    let mut table = new_table(
        "lemma_bounds",
        [
            "n_samples",
            "epsilon",
            "lemma1_bound",
            "lemma1_frequency",
            "lemma2_bound",
            "lemma2_frequency",
        ],
        config,
    );

    for (size_idx, &n) in config.sample_sizes.iter().enumerate() {
        // One (ratio, reciprocal) pair per repetition; epsilon rows share
        // the same draws.
        let stats: Vec<(f64, f64)> = (0..config.repetitions as u32)
            .into_par_iter()
            .map(|rep| {
                let mut rng_x =
                    stream(config.seed, stream_id(domain::LEMMA_X, 0, size_idx as u16, rep));
                let mut rng_y =
                    stream(config.seed, stream_id(domain::LEMMA_Y, 0, size_idx as u16, rep));
                let xs: Vec<f64> = (0..n)
                    .map(|_| mu_x + sd_x * f64::standard_normal(&mut rng_x))
                    .collect();
                let ys: Vec<f64> = (0..n)
                    .map(|_| mu_y + sd_y * f64::standard_normal(&mut rng_y))
                    .collect();
                ratio_and_reciprocal(&xs, &ys)
            })
            .collect();

        for &epsilon in &config.epsilons {
            let n_f = n as f64;
            let e2 = epsilon * epsilon;
            let bound1 = 1.0
                - 16.0 * sd_x * sd_x / (n_f * mu_y * mu_y * e2)
                - 16.0 * mu_x * mu_x * sd_y * sd_y / (n_f * mu_y.powi(4) * e2);
            let bound2 = 1.0 - sd_x * sd_x / (n_f * mu_x * mu_x * e2);

            let hits1 = stats
                .iter()
                .filter(|(ratio, _)| (ratio - target_ratio).abs() < epsilon)
                .count();
            let hits2 = stats
                .iter()
                .filter(|(_, recip)| (recip - target_recip).abs() < epsilon)
                .count();
            let reps = stats.len() as f64;
            table.push_row(vec![
                Value::Int(n as i64),
                Value::Float(epsilon),
                Value::Float(bound1.max(0.0)),
                Value::Float(hits1 as f64 / reps),
                Value::Float(bound2.max(0.0)),
                Value::Float(hits2 as f64 / reps),
            ]);
        }
    }
    Ok(table)
}
