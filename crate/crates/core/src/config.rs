//! Experiment configuration.
//!
//! Configs are flat `key = value` text: one assignment per line, `#` starts a
//! comment, lists are comma separated and observation vectors are separated
//! by `;` with whitespace between components. Unknown or duplicated keys are
//! errors. Every key has a default from the reference parameter set, so
//! the empty file is a valid config.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::model::{CueModel, ModelError, MultiCueModel, SameDiffModel, TwoCueModel};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{field}: {message}")]
    Invalid { field: &'static str, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn invalid(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field,
        message: message.into(),
    }
}

/// Which generative model a run builds from `sigma_s` / `sigmas`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    TwoCue,
    MultiCue,
    SameDiff,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelKind::TwoCue => write!(f, "two-cue"),
            ModelKind::MultiCue => write!(f, "multi-cue"),
            ModelKind::SameDiff => write!(f, "same-different"),
        }
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "two-cue" => Ok(ModelKind::TwoCue),
            "multi-cue" => Ok(ModelKind::MultiCue),
            "same-different" => Ok(ModelKind::SameDiff),
            other => Err(format!(
                "unknown model kind {other:?} (expected two-cue, multi-cue or same-different)"
            )),
        }
    }
}

/// Parameters for every experiment; unused keys are simply ignored by a
/// given experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub n_trials: usize,
    pub sample_sizes: Vec<usize>,
    pub repetitions: usize,
    pub disparity_bin_width: f64,
    pub output_path: String,

    pub model_kind: ModelKind,
    pub prior_c1: f64,
    pub sigma_s: f64,
    pub sigmas: Vec<f64>,
    pub half_range: f64,

    pub sigma_lo: f64,
    pub sigma_hi: f64,
    pub sigma_s_values: Vec<f64>,
    pub sigma_grid_min: f64,
    pub sigma_grid_max: f64,
    pub sigma_grid_step: f64,
    pub cue_counts: Vec<usize>,
    pub object_counts: Vec<usize>,

    pub pool_size: usize,
    pub gain: f64,
    pub stride: usize,

    pub n_samples: usize,
    pub observations: Vec<Vec<f64>>,
    pub epsilons: Vec<f64>,

    pub lemma_mu_x: f64,
    pub lemma_sigma_x: f64,
    pub lemma_mu_y: f64,
    pub lemma_sigma_y: f64,

    pub grid_half_width: f64,
    pub points_per_dim: usize,
    pub min_bin_count: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            n_trials: 1000,
            sample_sizes: vec![10, 50, 100, 300, 500, 1000, 3000, 10000],
            repetitions: 10,
            disparity_bin_width: 1.0,
            output_path: "out".to_string(),

            model_kind: ModelKind::TwoCue,
            prior_c1: 0.5,
            sigma_s: 4.0,
            sigmas: vec![6.0, 6.0],
            half_range: 10.0,

            sigma_lo: 3.0,
            sigma_hi: 7.0,
            sigma_s_values: vec![1.0, 2.0, 4.0, 8.0],
            sigma_grid_min: 1.0,
            sigma_grid_max: 8.0,
            sigma_grid_step: 1.0,
            cue_counts: vec![3, 10],
            object_counts: vec![3, 10],

            pool_size: 1000,
            gain: 10000.0,
            stride: 30,

            n_samples: 100_000,
            observations: vec![vec![0.0, 0.0]],
            epsilons: vec![0.05, 0.02, 0.01],

            lemma_mu_x: 2.0,
            lemma_sigma_x: 1.0,
            lemma_mu_y: 4.0,
            lemma_sigma_y: 1.0,

            grid_half_width: 8.0,
            points_per_dim: 1601,
            min_bin_count: 200,
        }
    }
}

impl ExperimentConfig {
    /// Parses config text over the defaults and validates the result.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut config = Self::default();
        let mut seen: Vec<String> = Vec::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Parse {
                line: line_no,
                message: format!("expected `key = value`, got {line:?}"),
            })?;
            let key = key.trim();
            let value = value.trim();
            if seen.iter().any(|k| k == key) {
                return Err(ConfigError::Parse {
                    line: line_no,
                    message: format!("duplicate key {key:?}"),
                });
            }
            seen.push(key.to_string());
            config
                .assign(key, value)
                .map_err(|e| match e {
                    err @ ConfigError::Invalid { .. } => err,
                    ConfigError::Parse { message, .. } => ConfigError::Parse {
                        line: line_no,
                        message,
                    },
                    other => other,
                })?;
        }
        config.validate()?;
        Ok(config)
    }

    fn assign(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "seed" => self.seed = parse_scalar(key, value)?,
            "n_trials" => self.n_trials = parse_scalar(key, value)?,
            "sample_sizes" => self.sample_sizes = parse_list(key, value)?,
            "repetitions" => self.repetitions = parse_scalar(key, value)?,
            "disparity_bin_width" => self.disparity_bin_width = parse_scalar(key, value)?,
            "output_path" => self.output_path = value.to_string(),
            "model_kind" => {
                self.model_kind = value.parse().map_err(|message: String| ConfigError::Parse {
                    line: 0,
                    message,
                })?
            }
            "prior_c1" => self.prior_c1 = parse_scalar(key, value)?,
            "sigma_s" => self.sigma_s = parse_scalar(key, value)?,
            "sigmas" => self.sigmas = parse_list(key, value)?,
            "sigma_1" => {
                let v: f64 = parse_scalar(key, value)?;
                if v <= 0.0 {
                    return Err(invalid("sigma_1", format!("must be positive, got {v}")));
                }
                if self.sigmas.is_empty() {
                    self.sigmas = vec![v];
                } else {
                    self.sigmas[0] = v;
                }
            }
            "sigma_2" => {
                let v: f64 = parse_scalar(key, value)?;
                if v <= 0.0 {
                    return Err(invalid("sigma_2", format!("must be positive, got {v}")));
                }
                while self.sigmas.len() < 2 {
                    self.sigmas.push(v);
                }
                self.sigmas[1] = v;
            }
            "half_range" => self.half_range = parse_scalar(key, value)?,
            "sigma_lo" => self.sigma_lo = parse_scalar(key, value)?,
            "sigma_hi" => self.sigma_hi = parse_scalar(key, value)?,
            "sigma_s_values" => self.sigma_s_values = parse_list(key, value)?,
            "sigma_grid_min" => self.sigma_grid_min = parse_scalar(key, value)?,
            "sigma_grid_max" => self.sigma_grid_max = parse_scalar(key, value)?,
            "sigma_grid_step" => self.sigma_grid_step = parse_scalar(key, value)?,
            "cue_counts" => self.cue_counts = parse_list(key, value)?,
            "object_counts" => self.object_counts = parse_list(key, value)?,
            "pool_size" => self.pool_size = parse_scalar(key, value)?,
            "gain" => self.gain = parse_scalar(key, value)?,
            "stride" => self.stride = parse_scalar(key, value)?,
            "n_samples" => self.n_samples = parse_scalar(key, value)?,
            "observations" => self.observations = parse_vectors(key, value)?,
            "epsilons" => self.epsilons = parse_list(key, value)?,
            "lemma_mu_x" => self.lemma_mu_x = parse_scalar(key, value)?,
            "lemma_sigma_x" => self.lemma_sigma_x = parse_scalar(key, value)?,
            "lemma_mu_y" => self.lemma_mu_y = parse_scalar(key, value)?,
            "lemma_sigma_y" => self.lemma_sigma_y = parse_scalar(key, value)?,
            "grid_half_width" => self.grid_half_width = parse_scalar(key, value)?,
            "points_per_dim" => self.points_per_dim = parse_scalar(key, value)?,
            "min_bin_count" => self.min_bin_count = parse_scalar(key, value)?,
            other => {
                return Err(ConfigError::Parse {
                    line: 0,
                    message: format!("unknown key {other:?}"),
                })
            }
        }
        Ok(())
    }

    /// Field-level validation; naming the offending field.
    pub fn validate(&self) -> Result<(), ConfigError> {
        fn positive(field: &'static str, v: f64) -> Result<(), ConfigError> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(invalid(field, format!("must be positive and finite, got {v}")))
            }
        }
        if self.n_trials < 1 {
            return Err(invalid("n_trials", "must be at least 1"));
        }
        if self.repetitions < 1 {
            return Err(invalid("repetitions", "must be at least 1"));
        }
        if self.sample_sizes.is_empty() {
            return Err(invalid("sample_sizes", "must not be empty"));
        }
        if self.sample_sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("sample_sizes", "must be strictly ascending"));
        }
        if self.sample_sizes[0] < 1 {
            return Err(invalid("sample_sizes", "entries must be at least 1"));
        }
        positive("disparity_bin_width", self.disparity_bin_width)?;
        if !(self.prior_c1 > 0.0 && self.prior_c1 < 1.0) {
            return Err(invalid(
                "prior_c1",
                format!("must lie strictly inside (0, 1), got {}", self.prior_c1),
            ));
        }
        positive("sigma_s", self.sigma_s)?;
        if self.sigmas.is_empty() {
            return Err(invalid("sigmas", "must not be empty"));
        }
        for &s in &self.sigmas {
            positive("sigmas", s)?;
        }
        positive("half_range", self.half_range)?;
        positive("sigma_lo", self.sigma_lo)?;
        positive("sigma_hi", self.sigma_hi)?;
        if self.sigma_lo >= self.sigma_hi {
            return Err(invalid("sigma_lo", "must be smaller than sigma_hi"));
        }
        if self.sigma_s_values.is_empty() {
            return Err(invalid("sigma_s_values", "must not be empty"));
        }
        for &s in &self.sigma_s_values {
            positive("sigma_s_values", s)?;
        }
        positive("sigma_grid_min", self.sigma_grid_min)?;
        positive("sigma_grid_step", self.sigma_grid_step)?;
        if self.sigma_grid_max < self.sigma_grid_min {
            return Err(invalid("sigma_grid_max", "must be >= sigma_grid_min"));
        }
        if self.cue_counts.is_empty() || self.cue_counts.iter().any(|&n| n < 2) {
            return Err(invalid("cue_counts", "entries must be at least 2"));
        }
        if self.object_counts.is_empty() || self.object_counts.iter().any(|&n| n < 2) {
            return Err(invalid("object_counts", "entries must be at least 2"));
        }
        if self.pool_size < 1 {
            return Err(invalid("pool_size", "must be at least 1"));
        }
        positive("gain", self.gain)?;
        if self.stride < 1 {
            return Err(invalid("stride", "must be at least 1"));
        }
        if self.n_samples < 1 {
            return Err(invalid("n_samples", "must be at least 1"));
        }
        if self.observations.is_empty() || self.observations.iter().any(|o| o.is_empty()) {
            return Err(invalid("observations", "must contain nonempty vectors"));
        }
        if self.epsilons.is_empty() {
            return Err(invalid("epsilons", "must not be empty"));
        }
        for &e in &self.epsilons {
            positive("epsilons", e)?;
        }
        positive("lemma_sigma_x", self.lemma_sigma_x)?;
        positive("lemma_sigma_y", self.lemma_sigma_y)?;
        positive("grid_half_width", self.grid_half_width)?;
        if self.points_per_dim < 101 || self.points_per_dim.is_multiple_of(2) {
            return Err(invalid(
                "points_per_dim",
                format!("must be an odd integer >= 101, got {}", self.points_per_dim),
            ));
        }
        Ok(())
    }

    /// Canonical text form; `parse(to_text(c)) == c`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        line("seed", self.seed.to_string());
        line("n_trials", self.n_trials.to_string());
        line("sample_sizes", join_list(&self.sample_sizes));
        line("repetitions", self.repetitions.to_string());
        line("disparity_bin_width", fmt_f64(self.disparity_bin_width));
        line("output_path", self.output_path.clone());
        line("model_kind", self.model_kind.to_string());
        line("prior_c1", fmt_f64(self.prior_c1));
        line("sigma_s", fmt_f64(self.sigma_s));
        line("sigmas", join_floats(&self.sigmas));
        line("half_range", fmt_f64(self.half_range));
        line("sigma_lo", fmt_f64(self.sigma_lo));
        line("sigma_hi", fmt_f64(self.sigma_hi));
        line("sigma_s_values", join_floats(&self.sigma_s_values));
        line("sigma_grid_min", fmt_f64(self.sigma_grid_min));
        line("sigma_grid_max", fmt_f64(self.sigma_grid_max));
        line("sigma_grid_step", fmt_f64(self.sigma_grid_step));
        line("cue_counts", join_list(&self.cue_counts));
        line("object_counts", join_list(&self.object_counts));
        line("pool_size", self.pool_size.to_string());
        line("gain", fmt_f64(self.gain));
        line("stride", self.stride.to_string());
        line("n_samples", self.n_samples.to_string());
        line(
            "observations",
            self.observations
                .iter()
                .map(|v| {
                    v.iter()
                        .map(|&x| fmt_f64(x))
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .collect::<Vec<_>>()
                .join("; "),
        );
        line("epsilons", join_floats(&self.epsilons));
        line("lemma_mu_x", fmt_f64(self.lemma_mu_x));
        line("lemma_sigma_x", fmt_f64(self.lemma_sigma_x));
        line("lemma_mu_y", fmt_f64(self.lemma_mu_y));
        line("lemma_sigma_y", fmt_f64(self.lemma_sigma_y));
        line("grid_half_width", fmt_f64(self.grid_half_width));
        line("points_per_dim", self.points_per_dim.to_string());
        line("min_bin_count", self.min_bin_count.to_string());
        out
    }

    /// Builds the configured generative model.
    pub fn model(&self) -> Result<CueModel<f64>, ConfigError> {
        let model = match self.model_kind {
            ModelKind::TwoCue => {
                if self.sigmas.len() != 2 {
                    return Err(invalid(
                        "sigmas",
                        format!("two-cue model needs exactly 2 entries, got {}", self.sigmas.len()),
                    ));
                }
                TwoCueModel::new(self.prior_c1, self.sigma_s, self.sigmas[0], self.sigmas[1])?
                    .into()
            }
            ModelKind::MultiCue => MultiCueModel::new(
                self.sigmas.len(),
                self.prior_c1,
                self.sigma_s,
                self.sigmas.clone(),
            )?
            .into(),
            ModelKind::SameDiff => SameDiffModel::new(
                self.sigmas.len(),
                self.prior_c1,
                self.half_range,
                self.sigma_s,
                self.sigmas.clone(),
            )?
            .into(),
        };
        Ok(model)
    }

    /// Echoes the full canonical config into a table's metadata block.
    pub fn echo_into(&self, table: &mut crate::table::ResultTable) {
        for line in self.to_text().lines() {
            if let Some((key, value)) = line.split_once(" = ") {
                table.push_metadata(key, value);
            }
        }
    }
}

fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

fn join_list(values: &[usize]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn join_floats(values: &[f64]) -> String {
    values
        .iter()
        .map(|&v| fmt_f64(v))
        .collect::<Vec<_>>()
        .join(", ")
}

fn parse_scalar<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value.parse().map_err(|e: T::Err| ConfigError::Parse {
        line: 0,
        message: format!("{key}: cannot parse {value:?} ({e})"),
    })
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>, ConfigError>
where
    T::Err: fmt::Display,
{
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse().map_err(|e: T::Err| ConfigError::Parse {
                line: 0,
                message: format!("{key}: cannot parse {s:?} ({e})"),
            })
        })
        .collect()
}

fn parse_vectors(key: &str, value: &str) -> Result<Vec<Vec<f64>>, ConfigError> {
    value
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|group| {
            group
                .split_whitespace()
                .map(|s| {
                    s.parse().map_err(|e: std::num::ParseFloatError| ConfigError::Parse {
                        line: 0,
                        message: format!("{key}: cannot parse {s:?} ({e})"),
                    })
                })
                .collect()
        })
        .collect()
}
