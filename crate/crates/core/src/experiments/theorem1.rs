//! Empirical convergence check: distribution of `|p_hat - p_exact|` versus
//! sample size on a fixed observation set, with the empirical probability of
//! landing within each configured epsilon.

use rayon::prelude::*;

use super::{check_limits, new_table, ExperimentError};
use crate::config::ExperimentConfig;
use crate::oracle::exact_posterior;
use crate::rng::{domain, stream, stream_id};
use crate::sampler::is_posterior;
use crate::table::{ResultTable, Value};

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let idx = ((sorted.len() - 1) as f64 * q).round() as usize;
    sorted[idx]
}

pub fn theorem1_check(config: &ExperimentConfig) -> Result<ResultTable, ExperimentError> {
    check_limits(config, config.repetitions)?;
    if config.observations.len() > 1024 {
        return Err(ExperimentError::Limits(
            "at most 1024 observation vectors supported".to_string(),
        ));
    }
    let model = config.model()?;
    let exact: Vec<f64> = config
        .observations
        .iter()
        .map(|obs| exact_posterior(&model, obs).map_err(ExperimentError::from))
        .collect::<Result<_, _>>()?;

    let mut table = new_table(
        "theorem1_check",
        [
            "n_samples",
            "epsilon",
            "coverage",
            "mean_abs_error",
            "q50_abs_error",
            "q90_abs_error",
        ],
        config,
    );

    for (size_idx, &n_samples) in config.sample_sizes.iter().enumerate() {
        // One estimate per (repetition, observation); pooled error sample.
        let mut errors: Vec<f64> = (0..config.repetitions as u32)
            .into_par_iter()
            .flat_map_iter(|rep| {
                let model = &model;
                let exact = &exact;
                config.observations.iter().enumerate().map(move |(o, obs)| {
                    let slot = (o * 64 + size_idx) as u16;
                    let mut rng =
                        stream(config.seed, stream_id(domain::ESTIMATE, rep as u8, slot, 0));
                    is_posterior(model, obs, n_samples, &mut rng)
                        .map(|est| (est.p_c1 - exact[o]).abs())
                        .map_err(ExperimentError::from)
                })
            })
            .collect::<Result<_, _>>()?;
        errors.sort_by(|a, b| a.partial_cmp(b).expect("finite errors"));

        let mean = errors.iter().sum::<f64>() / errors.len() as f64;
        let q50 = quantile(&errors, 0.5);
        let q90 = quantile(&errors, 0.9);
        for &epsilon in &config.epsilons {
            let hits = errors.iter().filter(|&&e| e < epsilon).count();
            table.push_row(vec![
                Value::Int(n_samples as i64),
                Value::Float(epsilon),
                Value::Float(hits as f64 / errors.len() as f64),
                Value::Float(mean),
                Value::Float(q50),
                Value::Float(q90),
            ]);
        }
    }
    Ok(table)
}
