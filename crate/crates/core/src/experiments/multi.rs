//! Multi-stimuli causal inference: error rate versus sample size for each
//! configured cue count, with per-trial noise parameters uniform on
//! `[sigma_lo, sigma_hi]`.

use super::convergence::variant_convergence;
use super::ExperimentError;
use crate::config::ExperimentConfig;
use crate::model::{CueModel, MultiCueModel};
use crate::real::Real as _;
use crate::table::ResultTable;

pub fn exp_multi(config: &ExperimentConfig) -> Result<ResultTable, ExperimentError> {
    variant_convergence(
        config,
        "exp_multi",
        "n_cues",
        &config.cue_counts,
        |config, n_cues, rng| {
            let sigma_s = f64::uniform(rng, config.sigma_lo, config.sigma_hi);
            let sigmas = (0..n_cues)
                .map(|_| f64::uniform(rng, config.sigma_lo, config.sigma_hi))
                .collect();
            let model: CueModel<f64> =
                MultiCueModel::new(n_cues, config.prior_c1, sigma_s, sigmas)?.into();
            Ok(model)
        },
    )
}
