//! Experiment 1: per-neuron firing rates of the Poisson pool in one trial,
//! against the normalized likelihood profile.

use super::{new_table, ExperimentError};
use crate::config::ExperimentConfig;
use crate::neural::{build_pool, emit_spikes, CircuitError};
use crate::rng::{domain, stream, stream_id};
use crate::table::{ResultTable, Value};

const MAX_SILENT_RETRIES: usize = 64;

/// One trial of the circuit's second layer: rows are neurons with their
/// spike count, normalized rate and normalized likelihood.
pub fn exp1_population(config: &ExperimentConfig) -> Result<ResultTable, ExperimentError> {
    let model = config.model()?;

    let mut trial_rng = stream(config.seed, stream_id(domain::TRIAL, 0, 0, 0));
    let trial = model.sample_trial(&mut trial_rng);

    let mut pool_rng = stream(config.seed, stream_id(domain::POOL, 0, 0, 0));
    let pool = build_pool(model.clone(), config.pool_size, config.gain, &mut pool_rng)?;

    let mut response = None;
    for attempt in 0..MAX_SILENT_RETRIES {
        let mut spike_rng = stream(
            config.seed,
            stream_id(domain::SPIKE, 0, 0, attempt as u32),
        );
        match emit_spikes(&pool, &trial.observations, &mut spike_rng) {
            Ok(r) => {
                response = Some(r);
                break;
            }
            Err(CircuitError::SilentPool) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    let response = response.ok_or(ExperimentError::SilentPoolRetries {
        attempts: MAX_SILENT_RETRIES,
    })?;

    // Normalized likelihood profile over the same pool.
    let logliks: Vec<f64> = pool
        .preferred()
        .iter()
        .map(|n| model.log_likelihood_unchecked(&n.stimuli, &trial.observations))
        .collect();
    let peak = logliks.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = logliks.iter().map(|&l| (l - peak).exp()).collect();
    let total: f64 = weights.iter().sum();

    let mut table = new_table(
        "exp1_population",
        [
            "neuron",
            "spike_count",
            "normalized_rate",
            "normalized_likelihood",
            "from_common",
        ],
        config,
    );
    table.push_metadata(
        "observations_drawn",
        trial
            .observations
            .iter()
            .map(|x| format!("{x:?}"))
            .collect::<Vec<_>>()
            .join(" "),
    );
    table.push_metadata("true_cause", trial.true_cause.label().to_string());
    table.push_metadata("total_spikes", response.total().to_string());

    for (i, neuron) in pool.preferred().iter().enumerate() {
        table.push_row(vec![
            Value::Int(i as i64 + 1),
            Value::Int(response.counts()[i] as i64),
            Value::Float(response.normalized()[i]),
            Value::Float(weights[i] / total),
            Value::Int(neuron.from_common_cause as i64),
        ]);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_and_strided_row_counts() {
        let config = ExperimentConfig::default();
        let table = exp1_population(&config).unwrap();
        assert_eq!(table.n_rows(), 1000);
        assert_eq!(table.strided(config.stride).n_rows(), 34);
    }

    #[test]
    fn normalized_rate_column_sums_to_one() {
        let table = exp1_population(&ExperimentConfig::default()).unwrap();
        let sum: f64 = table.column_f64("normalized_rate").iter().sum();
        assert!((sum - 1.0).abs() < 1e-9, "sum = {sum}");
        let sum: f64 = table.column_f64("normalized_likelihood").iter().sum();
        assert!((sum - 1.0).abs() < 1e-9, "likelihood sum = {sum}");
    }

    #[test]
    fn rates_track_likelihoods_at_reference_gain() {
        let table = exp1_population(&ExperimentConfig::default()).unwrap();
        let rates = table.column_f64("normalized_rate");
        let liks = table.column_f64("normalized_likelihood");
        let mean_dev: f64 = rates
            .iter()
            .zip(&liks)
            .map(|(r, l)| (r - l).abs())
            .sum::<f64>()
            / rates.len() as f64;
        assert!(mean_dev < 0.002, "mean |rate - likelihood| = {mean_dev}");
    }
}
