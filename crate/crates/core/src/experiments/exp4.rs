//! Experiment 4: proportion of common-cause reports as a function of the
//! stimulus disparity `S_2 - S_1`, for the oracle and for the estimator at
//! several sample sizes.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{check_limits, new_table, ExperimentError};
use crate::config::ExperimentConfig;
use crate::model::Cause;
use crate::oracle::{decide, exact_posterior};
use crate::rng::{domain, stream, stream_id};
use crate::sampler::is_posterior;
use crate::table::{ResultTable, Value};

struct BinTally {
    trials: usize,
    oracle_common: usize,
    is_common: Vec<usize>,
}

/// Disparity study: each trial is binned by its true stimulus disparity and
/// every bin reports the fraction of common-cause decisions per method.
pub fn exp4_disparity(config: &ExperimentConfig) -> Result<ResultTable, ExperimentError> {
    check_limits(config, 1)?;
    let model = config.model()?;
    let n_sizes = config.sample_sizes.len();
    let width = config.disparity_bin_width;

    // (bin, oracle decision, per-size decisions) per trial.
    let per_trial: Vec<(i64, bool, Vec<bool>)> = (0..config.n_trials as u32)
        .into_par_iter()
        .map(|t| -> Result<(i64, bool, Vec<bool>), ExperimentError> {
            let mut rng = stream(config.seed, stream_id(domain::TRIAL, 0, 0, t));
            let trial = model.sample_trial(&mut rng);
            let disparity = trial.stimuli[1] - trial.stimuli[0];
            let bin = (disparity / width).round() as i64;
            let p = exact_posterior(&model, &trial.observations)?;
            let oracle_common = decide(p, 0.5) == Cause::Common;
            let mut is_common = Vec::with_capacity(n_sizes);
            for (size_idx, &n_samples) in config.sample_sizes.iter().enumerate() {
                let mut est_rng = stream(
                    config.seed,
                    stream_id(domain::ESTIMATE, 0, size_idx as u16, t),
                );
                let est = is_posterior(&model, &trial.observations, n_samples, &mut est_rng)?;
                is_common.push(est.decision == Cause::Common);
            }
            Ok((bin, oracle_common, is_common))
        })
        .collect::<Result<_, _>>()?;

    let mut bins: BTreeMap<i64, BinTally> = BTreeMap::new();
    for (bin, oracle_common, is_common) in &per_trial {
        let tally = bins.entry(*bin).or_insert_with(|| BinTally {
            trials: 0,
            oracle_common: 0,
            is_common: vec![0; n_sizes],
        });
        tally.trials += 1;
        tally.oracle_common += *oracle_common as usize;
        for (slot, &common) in tally.is_common.iter_mut().zip(is_common) {
            *slot += common as usize;
        }
    }

    let mut columns = vec![
        "disparity".to_string(),
        "n_trials".to_string(),
        "low_count".to_string(),
        "p_common_oracle".to_string(),
    ];
    for &n in &config.sample_sizes {
        columns.push(format!("p_common_is_{n}"));
    }
    let mut table = new_table("exp4_disparity", columns, config);

    for (bin, tally) in &bins {
        let n = tally.trials as f64;
        let mut row = vec![
            Value::Float(*bin as f64 * width),
            Value::Int(tally.trials as i64),
            Value::Int((tally.trials < config.min_bin_count) as i64),
            Value::Float(tally.oracle_common as f64 / n),
        ];
        for &count in &tally.is_common {
            row.push(Value::Float(count as f64 / n));
        }
        table.push_row(row);
    }
    Ok(table)
}
