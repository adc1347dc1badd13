//! Generative cue models.
//!
//! Three variants share the same causal skeleton: a binary cause `C` selects
//! whether all stimuli collapse onto one latent value (`C = 1`, "common") or
//! are drawn independently (`C = 2`, "separate"), and each observation is the
//! matching stimulus plus Gaussian channel noise.
//!
//! The common branch has Dirac-delta semantics (all stimuli exactly equal).
//! We carry that as a provenance flag on each prior draw instead of comparing
//! floats, so indicator weights downstream are exact.

use rand::Rng;
use thiserror::Error;

use crate::numeric::log_normal_pdf;
use crate::real::Real;

/// The binary cause variable: one shared cause or separate causes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cause {
    Common,
    Separate,
}

impl Cause {
    /// The numeric label: 1 for a common cause, 2 for separate causes.
    pub fn label(self) -> u8 {
        match self {
            Cause::Common => 1,
            Cause::Separate => 2,
        }
    }
}

impl std::fmt::Display for Cause {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cause::Common => write!(f, "common"),
            Cause::Separate => write!(f, "separate"),
        }
    }
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("{field} must be positive and finite, got {value}")]
    NonPositive { field: &'static str, value: f64 },
    #[error("prior_c1 must lie strictly inside (0, 1), got {value}")]
    PriorOutOfRange { value: f64 },
    #[error("at least {min} cues required, got {got}")]
    TooFewCues { min: usize, got: usize },
    #[error("sigma vector has {got} entries but the model declares {expected} cues")]
    SigmaCountMismatch { expected: usize, got: usize },
    #[error("expected {expected} values (one per cue), got {got}")]
    LengthMismatch { expected: usize, got: usize },
}

fn check_positive<T: Real>(field: &'static str, value: T) -> Result<(), ModelError> {
    if value > T::zero() && value.is_finite() {
        Ok(())
    } else {
        Err(ModelError::NonPositive {
            field,
            value: value.to_f64().unwrap_or(f64::NAN),
        })
    }
}

fn check_prior<T: Real>(prior_c1: T) -> Result<(), ModelError> {
    if prior_c1 > T::zero() && prior_c1 < T::one() {
        Ok(())
    } else {
        Err(ModelError::PriorOutOfRange {
            value: prior_c1.to_f64().unwrap_or(f64::NAN),
        })
    }
}

/// Two cues with a shared Gaussian stimulus prior (the audio-visual case).
#[derive(Debug, Clone, PartialEq)]
pub struct TwoCueModel<T> {
    prior_c1: T,
    sigma_s: T,
    sigmas: [T; 2],
}

impl<T: Real> TwoCueModel<T> {
    pub fn new(prior_c1: T, sigma_s: T, sigma_1: T, sigma_2: T) -> Result<Self, ModelError> {
        check_prior(prior_c1)?;
        check_positive("sigma_s", sigma_s)?;
        check_positive("sigma_1", sigma_1)?;
        check_positive("sigma_2", sigma_2)?;
        Ok(Self {
            prior_c1,
            sigma_s,
            sigmas: [sigma_1, sigma_2],
        })
    }

    pub fn sigma_1(&self) -> T {
        self.sigmas[0]
    }

    pub fn sigma_2(&self) -> T {
        self.sigmas[1]
    }
}

/// `n >= 2` cues sharing one Gaussian stimulus prior.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiCueModel<T> {
    prior_c1: T,
    sigma_s: T,
    sigmas: Vec<T>,
}

impl<T: Real> MultiCueModel<T> {
    pub fn new(
        n_cues: usize,
        prior_c1: T,
        sigma_s: T,
        sigmas: Vec<T>,
    ) -> Result<Self, ModelError> {
        if n_cues < 2 {
            return Err(ModelError::TooFewCues { min: 2, got: n_cues });
        }
        if sigmas.len() != n_cues {
            return Err(ModelError::SigmaCountMismatch {
                expected: n_cues,
                got: sigmas.len(),
            });
        }
        check_prior(prior_c1)?;
        check_positive("sigma_s", sigma_s)?;
        for sigma in &sigmas {
            check_positive("sigmas", *sigma)?;
        }
        Ok(Self {
            prior_c1,
            sigma_s,
            sigmas,
        })
    }
}

/// Same-different judgment over `n >= 2` objects: the latent object value(s)
/// are uniform on `[-L, L]`, and separate objects add Gaussian spread around
/// their own latent value.
#[derive(Debug, Clone, PartialEq)]
pub struct SameDiffModel<T> {
    prior_c1: T,
    half_range: T,
    sigma_s: T,
    sigmas: Vec<T>,
}

impl<T: Real> SameDiffModel<T> {
    pub fn new(
        n_objects: usize,
        prior_c1: T,
        half_range: T,
        sigma_s: T,
        sigmas: Vec<T>,
    ) -> Result<Self, ModelError> {
        if n_objects < 2 {
            return Err(ModelError::TooFewCues { min: 2, got: n_objects });
        }
        if sigmas.len() != n_objects {
            return Err(ModelError::SigmaCountMismatch {
                expected: n_objects,
                got: sigmas.len(),
            });
        }
        check_prior(prior_c1)?;
        check_positive("half_range", half_range)?;
        check_positive("sigma_s", sigma_s)?;
        for sigma in &sigmas {
            check_positive("sigmas", *sigma)?;
        }
        Ok(Self {
            prior_c1,
            half_range,
            sigma_s,
            sigmas,
        })
    }

    pub fn half_range(&self) -> T {
        self.half_range
    }
}

/// Any of the three generative models, behind one sampling/density surface.
#[derive(Debug, Clone, PartialEq)]
pub enum CueModel<T> {
    TwoCue(TwoCueModel<T>),
    MultiCue(MultiCueModel<T>),
    SameDiff(SameDiffModel<T>),
}

impl<T> From<TwoCueModel<T>> for CueModel<T> {
    fn from(m: TwoCueModel<T>) -> Self {
        CueModel::TwoCue(m)
    }
}

impl<T> From<MultiCueModel<T>> for CueModel<T> {
    fn from(m: MultiCueModel<T>) -> Self {
        CueModel::MultiCue(m)
    }
}

impl<T> From<SameDiffModel<T>> for CueModel<T> {
    fn from(m: SameDiffModel<T>) -> Self {
        CueModel::SameDiff(m)
    }
}

/// One prior draw of the stimulus vector plus its generating branch.
///
/// `from_common_cause` records which mixture branch produced the draw; for
/// common-branch draws all `stimuli` entries are the same value (and `mu`
/// holds the shared uniform draw in the same-different model).
#[derive(Debug, Clone, PartialEq)]
pub struct StimulusSample<T> {
    pub stimuli: Vec<T>,
    pub from_common_cause: bool,
    pub mu: Option<T>,
}

/// Branch information of an allocation-free prior draw.
pub(crate) struct PriorDraw<T> {
    pub from_common_cause: bool,
    pub mu: Option<T>,
}

/// One generated world: the cause, the latent stimuli and the noisy cues.
#[derive(Debug, Clone, PartialEq)]
pub struct Trial<T> {
    pub true_cause: Cause,
    pub stimuli: Vec<T>,
    pub observations: Vec<T>,
}

impl<T: Real> CueModel<T> {
    pub fn cue_count(&self) -> usize {
        match self {
            CueModel::TwoCue(_) => 2,
            CueModel::MultiCue(m) => m.sigmas.len(),
            CueModel::SameDiff(m) => m.sigmas.len(),
        }
    }

    pub fn prior_c1(&self) -> T {
        match self {
            CueModel::TwoCue(m) => m.prior_c1,
            CueModel::MultiCue(m) => m.prior_c1,
            CueModel::SameDiff(m) => m.prior_c1,
        }
    }

    pub fn sigma_s(&self) -> T {
        match self {
            CueModel::TwoCue(m) => m.sigma_s,
            CueModel::MultiCue(m) => m.sigma_s,
            CueModel::SameDiff(m) => m.sigma_s,
        }
    }

    /// Per-cue channel noise standard deviations.
    pub fn sigmas(&self) -> &[T] {
        match self {
            CueModel::TwoCue(m) => &m.sigmas,
            CueModel::MultiCue(m) => &m.sigmas,
            CueModel::SameDiff(m) => &m.sigmas,
        }
    }

    /// The uniform half-range `L` for the same-different variant.
    pub fn half_range(&self) -> Option<T> {
        match self {
            CueModel::SameDiff(m) => Some(m.half_range),
            _ => None,
        }
    }

    /// Ancestral draw of the stimulus vector from `P(S_1, ..., S_n)`.
    ///
    /// With probability `prior_c1` the common branch fires: one latent value
    /// is copied into every slot. Otherwise each slot is drawn independently.
    pub fn sample_prior_stimuli<R: Rng + ?Sized>(&self, rng: &mut R) -> StimulusSample<T> {
        let mut stimuli = Vec::with_capacity(self.cue_count());
        let draw = self.fill_prior_stimuli(rng, &mut stimuli);
        StimulusSample {
            stimuli,
            from_common_cause: draw.from_common_cause,
            mu: draw.mu,
        }
    }

    /// Allocation-free prior draw into `stimuli` (cleared first). Consumes
    /// the RNG stream exactly like [`Self::sample_prior_stimuli`].
    pub(crate) fn fill_prior_stimuli<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        stimuli: &mut Vec<T>,
    ) -> PriorDraw<T> {
        let n = self.cue_count();
        stimuli.clear();
        let common = rng.random_bool(self.prior_c1().to_f64().expect("prior fits f64"));
        match self {
            CueModel::TwoCue(_) | CueModel::MultiCue(_) => {
                let sigma_s = self.sigma_s();
                if common {
                    let s = sigma_s * T::standard_normal(rng);
                    stimuli.resize(n, s);
                } else {
                    stimuli.extend((0..n).map(|_| sigma_s * T::standard_normal(rng)));
                }
                PriorDraw {
                    from_common_cause: common,
                    mu: None,
                }
            }
            CueModel::SameDiff(m) => {
                if common {
                    let mu = T::uniform(rng, -m.half_range, m.half_range);
                    stimuli.resize(n, mu);
                    PriorDraw {
                        from_common_cause: true,
                        mu: Some(mu),
                    }
                } else {
                    stimuli.extend((0..n).map(|_| {
                        let mu_i = T::uniform(rng, -m.half_range, m.half_range);
                        mu_i + m.sigma_s * T::standard_normal(rng)
                    }));
                    PriorDraw {
                        from_common_cause: false,
                        mu: None,
                    }
                }
            }
        }
    }

    /// Generates a full world: cause, stimuli, then noisy observations.
    pub fn sample_trial<R: Rng + ?Sized>(&self, rng: &mut R) -> Trial<T> {
        let sample = self.sample_prior_stimuli(rng);
        let observations = sample
            .stimuli
            .iter()
            .zip(self.sigmas())
            .map(|(&s, &sigma)| s + sigma * T::standard_normal(rng))
            .collect();
        Trial {
            true_cause: if sample.from_common_cause {
                Cause::Common
            } else {
                Cause::Separate
            },
            stimuli: sample.stimuli,
            observations,
        }
    }

    /// `ln P(observations | stimuli)`: the sum of per-cue Gaussian channel
    /// log-densities.
    pub fn log_likelihood(&self, stimuli: &[T], observations: &[T]) -> Result<T, ModelError> {
        let n = self.cue_count();
        if stimuli.len() != n {
            return Err(ModelError::LengthMismatch {
                expected: n,
                got: stimuli.len(),
            });
        }
        if observations.len() != n {
            return Err(ModelError::LengthMismatch {
                expected: n,
                got: observations.len(),
            });
        }
        Ok(self.log_likelihood_unchecked(stimuli, observations))
    }

    /// Validates that an observation vector matches the model's cue count.
    pub fn check_observations(&self, observations: &[T]) -> Result<(), ModelError> {
        if observations.len() == self.cue_count() {
            Ok(())
        } else {
            Err(ModelError::LengthMismatch {
                expected: self.cue_count(),
                got: observations.len(),
            })
        }
    }

    pub(crate) fn log_likelihood_unchecked(&self, stimuli: &[T], observations: &[T]) -> T {
        let mut total = T::zero();
        for ((&s, &x), &sigma) in stimuli.iter().zip(observations).zip(self.sigmas()) {
            total += log_normal_pdf(x, s, sigma);
        }
        total
    }
}
