//! Shared driver for the generalization studies: error rate versus sample
//! size for a family of model variants (cue counts or object counts).

use rayon::prelude::*;

use super::{check_limits, new_table, wilson_interval, ExperimentError};
use crate::config::ExperimentConfig;
use crate::model::CueModel;
use crate::oracle::{decide, exact_posterior};
use crate::rng::{domain, stream, stream_id, StreamRng};
use crate::sampler::is_posterior;
use crate::table::{ResultTable, Value};

/// Runs `repetitions * n_trials` random worlds per variant and reports the
/// oracle-disagreement rate and mean absolute error per sample size,
/// aggregated over repetitions.
pub(super) fn variant_convergence(
    config: &ExperimentConfig,
    name: &str,
    variant_column: &str,
    variants: &[usize],
    make_model: impl Fn(&ExperimentConfig, usize, &mut StreamRng) -> Result<CueModel<f64>, ExperimentError>
        + Sync,
) -> Result<ResultTable, ExperimentError> {
    check_limits(config, config.repetitions)?;
    if variants.len() > 128 {
        return Err(ExperimentError::Limits(
            "at most 128 model variants supported".to_string(),
        ));
    }

    let mut table = new_table(
        name,
        [
            variant_column,
            "n_samples",
            "n_trials",
            "mean_abs_error",
            "error_rate",
            "error_rate_lo",
            "error_rate_hi",
        ],
        config,
    );

    for (v_idx, &variant) in variants.iter().enumerate() {
        let n_sizes = config.sample_sizes.len();
        let mut disagree = vec![0usize; n_sizes];
        let mut abs_err = vec![0.0f64; n_sizes];
        let total = config.repetitions * config.n_trials;

        for rep in 0..config.repetitions {
            // (per-size disagreement flags, per-size abs errors) per trial.
            let rows: Vec<(Vec<bool>, Vec<f64>)> = (0..config.n_trials as u32)
                .into_par_iter()
                .map(|t| -> Result<(Vec<bool>, Vec<f64>), ExperimentError> {
                    let mut rng = stream(
                        config.seed,
                        stream_id(domain::TRIAL, rep as u8, v_idx as u16, t),
                    );
                    let model = make_model(config, variant, &mut rng)?;
                    let trial = model.sample_trial(&mut rng);
                    let p = exact_posterior(&model, &trial.observations)?;
                    let oracle_decision = decide(p, 0.5);
                    let mut flags = Vec::with_capacity(n_sizes);
                    let mut errs = Vec::with_capacity(n_sizes);
                    for (size_idx, &n_samples) in config.sample_sizes.iter().enumerate() {
                        let slot = (v_idx * 64 + size_idx) as u16;
                        let mut est_rng =
                            stream(config.seed, stream_id(domain::ESTIMATE, rep as u8, slot, t));
                        let est = is_posterior(
                            &model,
                            &trial.observations,
                            n_samples,
                            &mut est_rng,
                        )?;
                        flags.push(est.decision != oracle_decision);
                        errs.push((est.p_c1 - p).abs());
                    }
                    Ok((flags, errs))
                })
                .collect::<Result<_, _>>()?;

            for (flags, errs) in &rows {
                for i in 0..n_sizes {
                    disagree[i] += flags[i] as usize;
                    abs_err[i] += errs[i];
                }
            }
        }

        for (size_idx, &n_samples) in config.sample_sizes.iter().enumerate() {
            let (lo, hi) = wilson_interval(disagree[size_idx], total);
            table.push_row(vec![
                Value::Int(variant as i64),
                Value::Int(n_samples as i64),
                Value::Int(total as i64),
                Value::Float(abs_err[size_idx] / total as f64),
                Value::Float(disagree[size_idx] as f64 / total as f64),
                Value::Float(lo),
                Value::Float(hi),
            ]);
        }
    }
    Ok(table)
}
