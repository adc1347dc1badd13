//! Experiment 3: decision disagreement with the oracle across the noise
//! parameter grid, at a fixed sample size.

use rayon::prelude::*;

use super::{new_table, wilson_interval, ExperimentError};
use crate::config::ExperimentConfig;
use crate::model::{CueModel, TwoCueModel};
use crate::oracle::{decide, exact_posterior};
use crate::rng::{domain, stream, stream_id};
use crate::sampler::is_posterior;
use crate::table::{ResultTable, Value};

fn grid_values(min: f64, max: f64, step: f64) -> Vec<f64> {
    let count = ((max - min) / step).round() as usize + 1;
    (0..count).map(|i| min + step * i as f64).collect()
}

/// Error rate (decision vs. the oracle decision) for every
/// `(sigma_s, sigma_1, sigma_2)` cell at `n_samples` samples per estimate.
pub fn exp3_sweep(config: &ExperimentConfig) -> Result<ResultTable, ExperimentError> {
    let grid = grid_values(
        config.sigma_grid_min,
        config.sigma_grid_max,
        config.sigma_grid_step,
    );
    let cells = grid.len() * grid.len();
    if cells > u16::MAX as usize {
        return Err(ExperimentError::Limits(format!(
            "sigma grid of {cells} cells exceeds the supported 65535"
        )));
    }
    if config.sigma_s_values.len() > 256 {
        return Err(ExperimentError::Limits(
            "at most 256 sigma_s_values supported".to_string(),
        ));
    }

    let mut table = new_table(
        "exp3_sweep",
        [
            "sigma_s",
            "sigma_1",
            "sigma_2",
            "n_trials",
            "error_rate",
            "error_rate_lo",
            "error_rate_hi",
        ],
        config,
    );

    for (ss_idx, &sigma_s) in config.sigma_s_values.iter().enumerate() {
        for (i, &sigma_1) in grid.iter().enumerate() {
            for (j, &sigma_2) in grid.iter().enumerate() {
                let cell = (i * grid.len() + j) as u16;
                let model: CueModel<f64> =
                    TwoCueModel::new(config.prior_c1, sigma_s, sigma_1, sigma_2)?.into();

                let disagreements: Vec<bool> = (0..config.n_trials as u32)
                    .into_par_iter()
                    .map(|t| -> Result<bool, ExperimentError> {
                        let mut rng = stream(
                            config.seed,
                            stream_id(domain::TRIAL, ss_idx as u8, cell, t),
                        );
                        let trial = model.sample_trial(&mut rng);
                        let p = exact_posterior(&model, &trial.observations)?;
                        let mut est_rng = stream(
                            config.seed,
                            stream_id(domain::ESTIMATE, ss_idx as u8, cell, t),
                        );
                        let est = is_posterior(
                            &model,
                            &trial.observations,
                            config.n_samples,
                            &mut est_rng,
                        )?;
                        Ok(est.decision != decide(p, 0.5))
                    })
                    .collect::<Result<_, _>>()?;

                let wrong = disagreements.iter().filter(|&&d| d).count();
                let n = disagreements.len();
                let (lo, hi) = wilson_interval(wrong, n);
                table.push_row(vec![
                    Value::Float(sigma_s),
                    Value::Float(sigma_1),
                    Value::Float(sigma_2),
                    Value::Int(n as i64),
                    Value::Float(wrong as f64 / n as f64),
                    Value::Float(lo),
                    Value::Float(hi),
                ]);
            }
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_construction_is_inclusive() {
        assert_eq!(grid_values(1.0, 8.0, 1.0), vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]);
        assert_eq!(grid_values(1.0, 2.0, 0.5), vec![1.0, 1.5, 2.0]);
    }

    #[test]
    fn one_row_per_grid_cell() {
        let config = ExperimentConfig {
            sigma_s_values: vec![2.0, 4.0],
            sigma_grid_min: 2.0,
            sigma_grid_max: 6.0,
            sigma_grid_step: 2.0,
            n_trials: 10,
            n_samples: 50,
            ..ExperimentConfig::default()
        };
        let table = exp3_sweep(&config).unwrap();
        // 2 sigma_s values x 3 x 3 grid.
        assert_eq!(table.n_rows(), 18);
        let per_ss = table
            .column_f64("sigma_s")
            .iter()
            .filter(|&&v| v == 2.0)
            .count();
        assert_eq!(per_ss, 9);
        for v in table.column_f64("error_rate") {
            assert!((0.0..=1.0).contains(&v));
        }
    }
}
