//! Experiment 2: convergence and accuracy over randomized two-cue worlds.
//!
//! Each repetition draws `n_trials` worlds with per-trial noise parameters
//! uniform on `[sigma_lo, sigma_hi]`, then estimates the posterior at every
//! sample size. Rows report the mean absolute posterior error against the
//! oracle, the decision disagreement with the oracle, and the vs-cause error
//! rates of both the estimator and the oracle.

use rayon::prelude::*;

use super::{check_limits, new_table, wilson_interval, ExperimentError};
use crate::config::ExperimentConfig;
use crate::model::{Cause, CueModel, Trial, TwoCueModel};
use crate::oracle::{decide, exact_posterior};
use crate::real::Real as _;
use crate::rng::{domain, stream, stream_id};
use crate::sampler::is_posterior;
use crate::table::{ResultTable, Value};

pub(super) struct WorldTrial {
    pub model: CueModel<f64>,
    pub trial: Trial<f64>,
    pub p_exact: f64,
    pub decision_exact: Cause,
}

/// One randomized two-cue world on the trial's derived stream.
fn draw_world(config: &ExperimentConfig, rep: u8, index: u32) -> Result<WorldTrial, ExperimentError> {
    let mut rng = stream(config.seed, stream_id(domain::TRIAL, rep, 0, index));
    let sigma_s = f64::uniform(&mut rng, config.sigma_lo, config.sigma_hi);
    let sigma_1 = f64::uniform(&mut rng, config.sigma_lo, config.sigma_hi);
    let sigma_2 = f64::uniform(&mut rng, config.sigma_lo, config.sigma_hi);
    let model: CueModel<f64> =
        TwoCueModel::new(config.prior_c1, sigma_s, sigma_1, sigma_2)?.into();
    let trial = model.sample_trial(&mut rng);
    let p_exact = exact_posterior(&model, &trial.observations)?;
    Ok(WorldTrial {
        decision_exact: decide(p_exact, 0.5),
        p_exact,
        trial,
        model,
    })
}

pub fn exp2_convergence(config: &ExperimentConfig) -> Result<ResultTable, ExperimentError> {
    check_limits(config, config.repetitions)?;
    let mut table = new_table(
        "exp2_convergence",
        [
            "repetition",
            "n_samples",
            "mean_abs_error",
            "error_rate",
            "error_rate_lo",
            "error_rate_hi",
            "is_cause_error_rate",
            "is_cause_error_lo",
            "is_cause_error_hi",
            "oracle_cause_error_rate",
            "oracle_cause_error_lo",
            "oracle_cause_error_hi",
        ],
        config,
    );

    for rep in 0..config.repetitions {
        let worlds: Vec<WorldTrial> = (0..config.n_trials as u32)
            .into_par_iter()
            .map(|t| draw_world(config, rep as u8, t))
            .collect::<Result<_, _>>()?;

        let oracle_wrong = worlds
            .iter()
            .filter(|w| w.decision_exact != w.trial.true_cause)
            .count();

        for (size_idx, &n_samples) in config.sample_sizes.iter().enumerate() {
            // Per-trial estimates on (rep, size, trial)-derived streams.
            let decisions: Vec<(f64, Cause)> = worlds
                .par_iter()
                .enumerate()
                .map(|(t, world)| {
                    let mut rng = stream(
                        config.seed,
                        stream_id(domain::ESTIMATE, rep as u8, size_idx as u16, t as u32),
                    );
                    is_posterior(&world.model, &world.trial.observations, n_samples, &mut rng)
                        .map(|est| (est.p_c1, est.decision))
                })
                .collect::<Result<_, _>>()?;

            let mut abs_err_sum = 0.0;
            let mut disagree = 0usize;
            let mut wrong_cause = 0usize;
            for (world, &(p_hat, decision)) in worlds.iter().zip(&decisions) {
                abs_err_sum += (p_hat - world.p_exact).abs();
                disagree += (decision != world.decision_exact) as usize;
                wrong_cause += (decision != world.trial.true_cause) as usize;
            }

            let n = worlds.len();
            let (dis_lo, dis_hi) = wilson_interval(disagree, n);
            let (is_lo, is_hi) = wilson_interval(wrong_cause, n);
            let (or_lo, or_hi) = wilson_interval(oracle_wrong, n);
            table.push_row(vec![
                Value::Int(rep as i64),
                Value::Int(n_samples as i64),
                Value::Float(abs_err_sum / n as f64),
                Value::Float(disagree as f64 / n as f64),
                Value::Float(dis_lo),
                Value::Float(dis_hi),
                Value::Float(wrong_cause as f64 / n as f64),
                Value::Float(is_lo),
                Value::Float(is_hi),
                Value::Float(oracle_wrong as f64 / n as f64),
                Value::Float(or_lo),
                Value::Float(or_hi),
            ]);
        }
    }
    Ok(table)
}
