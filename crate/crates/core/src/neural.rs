//! The four-layer spiking circuit.
//!
//! Layer one holds the observations. Layer two is a pool of independent
//! Poisson neurons whose preferred stimulus vectors are prior draws and whose
//! tuning curves are `gain * P(x | preferred)`. Divisive normalization turns
//! spike counts into weights, indicator synapses split the normalized drive
//! between the two cause hypotheses, and a max operation decides.

use rand::Rng;
use thiserror::Error;

use crate::model::{Cause, CueModel, ModelError, StimulusSample};
use crate::oracle::decide;
use crate::real::{cast, Real};
use crate::sampler::{is_posterior_from_samples, EstimatorError, PosteriorEstimate};

#[derive(Debug, Error)]
pub enum CircuitError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("pool must contain at least one neuron")]
    EmptyPool,
    #[error("gain must be positive and finite, got {value}")]
    NonPositiveGain { value: f64 },
    #[error("the pool emitted no spikes; retry or raise the gain")]
    SilentPool,
    #[error("response has {got} counts but the pool has {expected} neurons")]
    ResponseMismatch { expected: usize, got: usize },
}

/// A population of tuning neurons sampled from the stimulus prior.
#[derive(Debug, Clone)]
pub struct NeuronPool<T> {
    model: CueModel<T>,
    preferred: Vec<StimulusSample<T>>,
    gain: T,
}

impl<T: Real> NeuronPool<T> {
    pub fn model(&self) -> &CueModel<T> {
        &self.model
    }

    pub fn preferred(&self) -> &[StimulusSample<T>] {
        &self.preferred
    }

    pub fn gain(&self) -> T {
        self.gain
    }

    pub fn len(&self) -> usize {
        self.preferred.len()
    }

    pub fn is_empty(&self) -> bool {
        self.preferred.is_empty()
    }
}

/// Spike counts of one emission window plus their normalized form.
#[derive(Debug, Clone, PartialEq)]
pub struct SpikeResponse<T> {
    counts: Vec<u64>,
    total: u64,
    normalized: Vec<T>,
}

impl<T: Real> SpikeResponse<T> {
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// `r_i / R`; sums to one whenever the pool was not silent.
    pub fn normalized(&self) -> &[T] {
        &self.normalized
    }
}

/// Readout of the third and fourth layers: the normalized drive arriving at
/// each cause unit and the max decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Readout<T> {
    pub common_drive: T,
    pub separate_drive: T,
    pub decision: Cause,
}

/// Builds a pool of `pool_size` neurons with preferred stimuli drawn i.i.d.
/// from the model's prior.
pub fn build_pool<T, R>(
    model: CueModel<T>,
    pool_size: usize,
    gain: T,
    rng: &mut R,
) -> Result<NeuronPool<T>, CircuitError>
where
    T: Real,
    R: Rng + ?Sized,
{
    if pool_size == 0 {
        return Err(CircuitError::EmptyPool);
    }
    if !(gain > T::zero() && gain.is_finite()) {
        return Err(CircuitError::NonPositiveGain {
            value: gain.to_f64().unwrap_or(f64::NAN),
        });
    }
    let preferred = (0..pool_size)
        .map(|_| model.sample_prior_stimuli(rng))
        .collect();
    Ok(NeuronPool {
        model,
        preferred,
        gain,
    })
}

/// One emission window: neuron `i` fires `Poisson(gain * P(x | preferred_i))`
/// spikes, independently across the pool.
pub fn emit_spikes<T, R>(
    pool: &NeuronPool<T>,
    observations: &[T],
    rng: &mut R,
) -> Result<SpikeResponse<T>, CircuitError>
where
    T: Real,
    R: Rng + ?Sized,
{
    pool.model.check_observations(observations)?;
    let log_gain = pool.gain.ln();
    let mut counts = Vec::with_capacity(pool.len());
    let mut total = 0u64;
    for neuron in &pool.preferred {
        let rate = (log_gain
            + pool
                .model
                .log_likelihood_unchecked(&neuron.stimuli, observations))
        .exp();
        let count = T::poisson_count(rng, rate);
        total += count;
        counts.push(count);
    }
    if total == 0 {
        return Err(CircuitError::SilentPool);
    }
    let total_t = cast::<T>(total as f64);
    let normalized = counts
        .iter()
        .map(|&c| cast::<T>(c as f64) / total_t)
        .collect();
    Ok(SpikeResponse {
        counts,
        total,
        normalized,
    })
}

/// Indicator-weighted synaptic readout plus the max decision.
///
/// The common unit receives the normalized rates of common-provenance
/// neurons; the separate unit receives the complement, so the two drives sum
/// to one exactly.
pub fn readout<T: Real>(
    pool: &NeuronPool<T>,
    response: &SpikeResponse<T>,
) -> Result<Readout<T>, CircuitError> {
    if response.counts.len() != pool.len() {
        return Err(CircuitError::ResponseMismatch {
            expected: pool.len(),
            got: response.counts.len(),
        });
    }
    // Sum the counts in integer space before the one division; equivalent to
    // summing the normalized rates but exact at the endpoints.
    let mut common_spikes = 0u64;
    for (neuron, &count) in pool.preferred.iter().zip(&response.counts) {
        if neuron.from_common_cause {
            common_spikes += count;
        }
    }
    let common_drive = cast::<T>(common_spikes as f64) / cast::<T>(response.total as f64);
    let separate_drive = T::one() - common_drive;
    Ok(Readout {
        common_drive,
        separate_drive,
        decision: decide(common_drive, cast(0.5)),
    })
}

/// Full circuit pass: emit spikes, normalize, read out. The resulting
/// estimate's diagnostics hold the raw common/total spike counts.
pub fn circuit_infer<T, R>(
    pool: &NeuronPool<T>,
    observations: &[T],
    rng: &mut R,
) -> Result<PosteriorEstimate<T>, CircuitError>
where
    T: Real,
    R: Rng + ?Sized,
{
    let response = emit_spikes(pool, observations, rng)?;
    let read = readout(pool, &response)?;
    let common_spikes: u64 = pool
        .preferred
        .iter()
        .zip(response.counts())
        .filter(|(neuron, _)| neuron.from_common_cause)
        .map(|(_, &c)| c)
        .sum();
    Ok(PosteriorEstimate {
        p_c1: read.common_drive,
        n_samples: pool.len(),
        decision: read.decision,
        sum_common_weight: cast(common_spikes as f64),
        sum_total_weight: cast(response.total() as f64),
    })
}

/// The circuit's expectation: spike counts replaced by their means, which
/// reduces the readout to the importance-sampling estimate over the pool's
/// preferred stimuli.
pub fn expected_infer<T: Real>(
    pool: &NeuronPool<T>,
    observations: &[T],
) -> Result<PosteriorEstimate<T>, EstimatorError> {
    is_posterior_from_samples(&pool.model, observations, &pool.preferred)
}
