//! Same-different judgment: error rate versus sample size for each
//! configured object count. Noise parameters are uniform on
//! `[sigma_lo, sigma_hi]` per trial and the latent range is `half_range`.

use super::convergence::variant_convergence;
use super::ExperimentError;
use crate::config::ExperimentConfig;
use crate::model::{CueModel, SameDiffModel};
use crate::real::Real as _;
use crate::table::ResultTable;

pub fn exp_samediff(config: &ExperimentConfig) -> Result<ResultTable, ExperimentError> {
    variant_convergence(
        config,
        "exp_samediff",
        "n_objects",
        &config.object_counts,
        |config, n_objects, rng| {
            let sigma_s = f64::uniform(rng, config.sigma_lo, config.sigma_hi);
            let sigmas = (0..n_objects)
                .map(|_| f64::uniform(rng, config.sigma_lo, config.sigma_hi))
                .collect();
            let model: CueModel<f64> = SameDiffModel::new(
                n_objects,
                config.prior_c1,
                config.half_range,
                sigma_s,
                sigmas,
            )?
            .into();
            Ok(model)
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn produces_per_object_count_rows() {
        let config = ExperimentConfig {
            object_counts: vec![2, 3],
            sample_sizes: vec![50, 500],
            n_trials: 30,
            repetitions: 1,
            sigma_lo: 1.0,
            sigma_hi: 3.0,
            ..ExperimentConfig::default()
        };
        let table = exp_samediff(&config).unwrap();
        assert_eq!(table.n_rows(), 4);
        for v in table.column_f64("error_rate") {
            assert!((0.0..=1.0).contains(&v));
        }
        let a = exp_samediff(&config).unwrap();
        assert_eq!(a.to_csv_string(), table.to_csv_string());
    }
}
