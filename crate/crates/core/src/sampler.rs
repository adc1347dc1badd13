//! Importance-sampling posterior estimation.
//!
//! The estimator draws stimulus vectors from the prior (ancestrally through
//! the cause), weights each draw by the observation likelihood and averages
//! the common-cause indicator. The numerator and denominator use the same
//! draws and a single shared max-shift, so the estimate is exactly invariant
//! to rescaling all weights. Summation order is fixed left-to-right to keep
//! results identical across runs and parallel schedules.

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::model::{Cause, CueModel, ModelError, StimulusSample};
use crate::oracle::decide;
use crate::real::{cast, Real};
use crate::rng::{domain, hashed_stream, StreamRng};

#[derive(Debug, Error)]
pub enum EstimatorError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("estimator degenerate: every importance weight underflowed to zero")]
    Degenerate,
}

/// A per-trial estimator failure, tagged with the trial index.
#[derive(Debug, Error)]
#[error("trial {index}: {source}")]
pub struct BatchError {
    pub index: usize,
    #[source]
    pub source: EstimatorError,
}

/// An importance-sampling estimate of `P(C = 1 | observations)`.
///
/// `sum_common_weight` and `sum_total_weight` are the max-shifted linear
/// accumulators behind the estimate; their ratio is exactly `p_c1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorEstimate<T> {
    pub p_c1: T,
    pub n_samples: usize,
    pub decision: Cause,
    pub sum_common_weight: T,
    pub sum_total_weight: T,
}

/// Self-normalized importance sampling of `E[value | B]` where `weight` is
/// the log-likelihood of the conditioning event under each draw.
///
/// The same draws feed numerator and denominator.
pub fn weighted_expectation<T, S, R, G, W, V>(
    mut sample_source: G,
    mut log_weight: W,
    mut value: V,
    n_samples: usize,
    rng: &mut R,
) -> Result<T, EstimatorError>
where
    T: Real,
    R: Rng + ?Sized,
    G: FnMut(&mut R) -> S,
    W: FnMut(&S) -> T,
    V: FnMut(&S) -> T,
{
    assert!(n_samples >= 1, "n_samples must be >= 1");
    let mut log_weights = Vec::with_capacity(n_samples);
    let mut values = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let s = sample_source(rng);
        log_weights.push(log_weight(&s));
        values.push(value(&s));
    }
    let (num, den) = shifted_sums(&log_weights, |i| values[i])?;
    Ok(num / den)
}

/// Estimates `P(C = 1 | observations)` from `n_samples` fresh prior draws.
pub fn is_posterior<T, R>(
    model: &CueModel<T>,
    observations: &[T],
    n_samples: usize,
    rng: &mut R,
) -> Result<PosteriorEstimate<T>, EstimatorError>
where
    T: Real,
    R: Rng + ?Sized,
{
    assert!(n_samples >= 1, "n_samples must be >= 1");
    model.check_observations(observations)?;
    // Draw-and-weight without materializing the samples; the RNG consumption
    // is identical to mapping sample_prior_stimuli over the stream.
    let mut stimuli = Vec::with_capacity(model.cue_count());
    let mut log_weights = Vec::with_capacity(n_samples);
    let mut common_flags = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let draw = model.fill_prior_stimuli(rng, &mut stimuli);
        log_weights.push(model.log_likelihood_unchecked(&stimuli, observations));
        common_flags.push(draw.from_common_cause);
    }
    let (num, den) = shifted_sums(&log_weights, |i| {
        if common_flags[i] {
            T::one()
        } else {
            T::zero()
        }
    })?;
    Ok(finish(num, den, n_samples))
}

/// Estimates the posterior from an existing sample set (for example a neuron
/// pool's preferred stimuli). This is the noise-free value the spiking
/// circuit computes in expectation.
pub fn is_posterior_from_samples<T: Real>(
    model: &CueModel<T>,
    observations: &[T],
    samples: &[StimulusSample<T>],
) -> Result<PosteriorEstimate<T>, EstimatorError> {
    assert!(!samples.is_empty(), "need at least one sample");
    model.check_observations(observations)?;
    for s in samples {
        if s.stimuli.len() != model.cue_count() {
            return Err(ModelError::LengthMismatch {
                expected: model.cue_count(),
                got: s.stimuli.len(),
            }
            .into());
        }
    }
    estimate(model, observations, samples)
}

fn estimate<T: Real>(
    model: &CueModel<T>,
    observations: &[T],
    samples: &[StimulusSample<T>],
) -> Result<PosteriorEstimate<T>, EstimatorError> {
    let log_weights: Vec<T> = samples
        .iter()
        .map(|s| model.log_likelihood_unchecked(&s.stimuli, observations))
        .collect();
    // The indicator is the provenance flag: common-branch draws satisfy the
    // equality event exactly (and the same-different range constraint by
    // construction).
    let (num, den) = shifted_sums(&log_weights, |i| {
        if samples[i].from_common_cause {
            T::one()
        } else {
            T::zero()
        }
    })?;
    Ok(finish(num, den, samples.len()))
}

fn finish<T: Real>(num: T, den: T, n_samples: usize) -> PosteriorEstimate<T> {
    let p_c1 = num / den;
    PosteriorEstimate {
        p_c1,
        n_samples,
        decision: decide(p_c1, cast(0.5)),
        sum_common_weight: num,
        sum_total_weight: den,
    }
}

/// Numerator and denominator of the self-normalized sum under one shared
/// max-shift, accumulated left-to-right.
fn shifted_sums<T: Real>(
    log_weights: &[T],
    value_at: impl Fn(usize) -> T,
) -> Result<(T, T), EstimatorError> {
    let mut peak = T::neg_infinity();
    for &lw in log_weights {
        if lw > peak {
            peak = lw;
        }
    }
    if peak == T::neg_infinity() {
        return Err(EstimatorError::Degenerate);
    }
    let mut num = T::zero();
    let mut den = T::zero();
    for (i, &lw) in log_weights.iter().enumerate() {
        let w = (lw - peak).exp();
        den += w;
        num += value_at(i) * w;
    }
    Ok((num, den))
}

/// The RNG stream a given observation vector uses inside
/// [`is_posterior_batch`]: derived from the seed and the observation bits,
/// so a trial keeps its stream wherever it appears in the set.
pub fn batch_observation_rng<T: Real>(seed: u64, observations: &[T]) -> StreamRng {
    let mut hash: u64 = 0x9E37_79B9_7F4A_7C15;
    for &x in observations {
        hash ^= x.to_f64().map(f64::to_bits).unwrap_or(0);
        hash = hash.wrapping_mul(0x0000_0100_0000_01B3);
        hash ^= hash >> 33;
    }
    hashed_stream(seed, domain::BATCH, hash)
}

/// Runs [`is_posterior`] once per observation vector, each on its own RNG
/// stream from [`batch_observation_rng`].
///
/// Trials are independent work items whose streams travel with the trial,
/// so the result is identical for any trial order, execution order or degree
/// of parallelism.
pub fn is_posterior_batch<T: Real>(
    model: &CueModel<T>,
    observation_set: &[Vec<T>],
    n_samples: usize,
    seed: u64,
) -> Result<Vec<PosteriorEstimate<T>>, BatchError> {
    observation_set
        .par_iter()
        .enumerate()
        .map(|(index, observations)| {
            let mut rng = batch_observation_rng(seed, observations);
            is_posterior(model, observations, n_samples, &mut rng)
                .map_err(|source| BatchError { index, source })
        })
        .collect()
}
