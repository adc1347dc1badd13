//! Sampling-based causal inference for cue combination.
//!
//! Deciding whether several noisy cues share one cause is a Bayesian
//! inference problem. This crate implements it three ways that must agree:
//!
//! * [`oracle`] — the exact posterior `P(C = 1 | x)` in closed form, with an
//!   independent trapezoid-quadrature oracle validating it;
//! * [`sampler`] — an importance-sampling estimator that draws stimulus
//!   vectors from the prior and averages the common-cause indicator under
//!   likelihood weights;
//! * [`neural`] — a population of Poisson tuning neurons with divisive
//!   normalization and indicator synapses that computes the same estimate in
//!   expectation.
//!
//! [`model`] defines the generative models (two-cue, multi-cue and
//! same-different judgment), [`experiments`] reproduces the studies as CSV
//! tables, and [`config`] holds the flat-text experiment configuration.
//!
//! Model math is generic over the scalar type through [`real::Real`]
//! (`f32` or `f64`); the experiment harness runs in `f64`.

pub mod config;
pub mod experiments;
pub mod model;
pub mod neural;
pub mod numeric;
pub mod oracle;
pub mod real;
pub mod rng;
pub mod sampler;
pub mod table;

pub use config::{ConfigError, ExperimentConfig, ModelKind};
pub use model::{Cause, CueModel, ModelError, StimulusSample, Trial};
pub use oracle::{decide, exact_posterior, quadrature_posterior, QuadratureSpec};
pub use real::Real;
pub use sampler::{is_posterior, is_posterior_batch, weighted_expectation, PosteriorEstimate};
pub use table::{ResultTable, Value};

/// `f64` instantiations (the harness default).
pub type TwoCueModel64 = model::TwoCueModel<f64>;
pub type MultiCueModel64 = model::MultiCueModel<f64>;
pub type SameDiffModel64 = model::SameDiffModel<f64>;
pub type CueModel64 = model::CueModel<f64>;
pub type PosteriorEstimate64 = sampler::PosteriorEstimate<f64>;
pub type NeuronPool64 = neural::NeuronPool<f64>;

/// `f32` instantiations.
pub type TwoCueModel32 = model::TwoCueModel<f32>;
pub type MultiCueModel32 = model::MultiCueModel<f32>;
pub type SameDiffModel32 = model::SameDiffModel<f32>;
pub type CueModel32 = model::CueModel<f32>;
pub type PosteriorEstimate32 = sampler::PosteriorEstimate<f32>;
pub type NeuronPool32 = neural::NeuronPool<f32>;
