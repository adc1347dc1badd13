//! Exact posterior `P(C = 1 | observations)` and an independent trapezoid
//! quadrature oracle for validating the closed forms.
//!
//! The Gaussian-family closed form marginalizes the latent stimuli with the
//! rank-one determinant and Sherman-Morrison identities, so the common-cause
//! likelihood costs O(n) for any cue count. The same-different closed form
//! reduces both branches to normal-CDF differences. Everything is evaluated
//! in log space.

use thiserror::Error;

use crate::model::{Cause, CueModel, ModelError};
use crate::numeric::{log_ndtr_diff, log_normal_pdf, log_sum_exp2};
use crate::real::{cast, Real};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("quadrature over {n} same-different objects exceeds the cost guard (max 3)")]
    CostGuard { n: usize },
    #[error("grid_half_width must be positive and finite, got {value}")]
    BadWidth { value: f64 },
    #[error("points_per_dim must be an odd integer >= 101, got {got}")]
    BadPoints { got: usize },
}

/// Grid parameters for [`quadrature_posterior`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    grid_half_width: f64,
    points_per_dim: usize,
}

impl QuadratureSpec {
    /// `grid_half_width` is measured in multiples of the relevant integrand
    /// standard deviation; `points_per_dim` must be odd so the grid is
    /// symmetric about its center.
    pub fn new(grid_half_width: f64, points_per_dim: usize) -> Result<Self, OracleError> {
        if !(grid_half_width > 0.0 && grid_half_width.is_finite()) {
            return Err(OracleError::BadWidth {
                value: grid_half_width,
            });
        }
        if points_per_dim < 101 || points_per_dim.is_multiple_of(2) {
            return Err(OracleError::BadPoints { got: points_per_dim });
        }
        Ok(Self {
            grid_half_width,
            points_per_dim,
        })
    }

    pub fn grid_half_width(&self) -> f64 {
        self.grid_half_width
    }

    pub fn points_per_dim(&self) -> usize {
        self.points_per_dim
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            grid_half_width: 8.0,
            points_per_dim: 1601,
        }
    }
}

/// Maps `p(C=1)` to a decision: common iff `p_c1 > threshold`.
///
/// The tie maps to [`Cause::Separate`] so error rates are reproducible.
pub fn decide<T: Real>(p_c1: T, threshold: T) -> Cause {
    if p_c1 > threshold {
        Cause::Common
    } else {
        Cause::Separate
    }
}

/// Exact posterior probability of a common cause given the observations.
pub fn exact_posterior<T: Real>(
    model: &CueModel<T>,
    observations: &[T],
) -> Result<T, ModelError> {
    model.check_observations(observations)?;
    let (log_l1, log_l2) = log_branch_likelihoods(model, observations);
    Ok(posterior_from_logs(model.prior_c1(), log_l1, log_l2))
}

fn posterior_from_logs<T: Real>(prior_c1: T, log_l1: T, log_l2: T) -> T {
    let la = prior_c1.ln() + log_l1;
    let lb = (T::one() - prior_c1).ln() + log_l2;
    (la - log_sum_exp2(la, lb)).exp()
}

/// Log-likelihoods of the two causal branches, `(ln L1, ln L2)`.
fn log_branch_likelihoods<T: Real>(model: &CueModel<T>, x: &[T]) -> (T, T) {
    match model {
        CueModel::TwoCue(_) | CueModel::MultiCue(_) => {
            let sigma_s2 = model.sigma_s() * model.sigma_s();
            let sigmas = model.sigmas();
            let n = sigmas.len();

            // L1: x ~ N(0, sigma_s^2 * 11^T + diag(sigma_i^2)); the rank-one
            // update gives det = (prod sigma_i^2) * a and the quadratic form
            // below, with a = 1 + sigma_s^2 * sum(1/sigma_i^2).
            let mut inv_sum = T::zero();
            let mut log_det_diag = T::zero();
            let mut q_diag = T::zero();
            let mut weighted_x = T::zero();
            for (&xi, &si) in x.iter().zip(sigmas) {
                let inv = T::one() / (si * si);
                inv_sum += inv;
                log_det_diag += (si * si).ln();
                q_diag += xi * xi * inv;
                weighted_x += xi * inv;
            }
            let a = T::one() + sigma_s2 * inv_sum;
            let q1 = q_diag - sigma_s2 * weighted_x * weighted_x / a;
            let log_l1 = -cast::<T>(n as f64)
                * crate::numeric::half_ln_two_pi::<T>()
                - cast::<T>(0.5) * (log_det_diag + a.ln())
                - cast::<T>(0.5) * q1;

            // L2: independent cues, each x_i ~ N(0, sigma_s^2 + sigma_i^2).
            let mut log_l2 = T::zero();
            for (&xi, &si) in x.iter().zip(sigmas) {
                log_l2 += log_normal_pdf(xi, T::zero(), (sigma_s2 + si * si).sqrt());
            }
            (log_l1, log_l2)
        }
        CueModel::SameDiff(m) => {
            let half_range = m.half_range();
            let sigmas = model.sigmas();
            let sigma_s2 = model.sigma_s() * model.sigma_s();

            // L1 = (1/2L) * Z * [Phi((L-m)/sqrt(v)) - Phi((-L-m)/sqrt(v))]
            // with v the product-of-Gaussians variance, m its mean and Z the
            // residual scale factor of the product.
            let mut inv_sum = T::zero();
            let mut weighted_x = T::zero();
            let mut q_diag = T::zero();
            let mut log_norms = T::zero();
            for (&xi, &si) in x.iter().zip(sigmas) {
                let inv = T::one() / (si * si);
                inv_sum += inv;
                weighted_x += xi * inv;
                q_diag += xi * xi * inv;
                log_norms += -si.ln() - crate::numeric::half_ln_two_pi::<T>();
            }
            let v = T::one() / inv_sum;
            let mean = v * weighted_x;
            let sv = v.sqrt();
            let log_scale = log_norms
                + crate::numeric::half_ln_two_pi::<T>()
                + sv.ln()
                - cast::<T>(0.5) * (q_diag - mean * mean / v);
            let log_mass = log_ndtr_diff((half_range - mean) / sv, (-half_range - mean) / sv);
            let log_l1 = -(cast::<T>(2.0) * half_range).ln() + log_scale + log_mass;

            // L2 = prod_i (1/2L) [Phi((x_i+L)/tau_i) - Phi((x_i-L)/tau_i)],
            // tau_i^2 = sigma_s^2 + sigma_i^2.
            let mut log_l2 = T::zero();
            for (&xi, &si) in x.iter().zip(sigmas) {
                let tau = (sigma_s2 + si * si).sqrt();
                log_l2 += -(cast::<T>(2.0) * half_range).ln()
                    + log_ndtr_diff((xi + half_range) / tau, (xi - half_range) / tau);
            }
            (log_l1, log_l2)
        }
    }
}

/// Posterior computed by trapezoid integration over the latent variables.
///
/// This is the brute-force oracle for [`exact_posterior`]: it never uses the
/// convolution, rank-one or CDF identities the closed form relies on. The
/// same-different separate branch needs a 2-D grid per object, so it is cost
/// guarded at 3 objects.
pub fn quadrature_posterior<T: Real>(
    model: &CueModel<T>,
    observations: &[T],
    spec: &QuadratureSpec,
) -> Result<T, OracleError> {
    model.check_observations(observations)?;
    let width = cast::<T>(spec.grid_half_width);
    let points = spec.points_per_dim;
    let (log_l1, log_l2) = match model {
        CueModel::TwoCue(_) | CueModel::MultiCue(_) => {
            let sigma_s = model.sigma_s();
            let sigmas = model.sigmas();

            // C=1: one shared latent stimulus.
            let mut precision = T::one() / (sigma_s * sigma_s);
            let mut weighted = T::zero();
            for (&xi, &si) in observations.iter().zip(sigmas) {
                precision += T::one() / (si * si);
                weighted += xi / (si * si);
            }
            let center = weighted / precision;
            let spread = (T::one() / precision).sqrt();
            let log_l1 = log_trapezoid(
                center - width * spread,
                center + width * spread,
                points,
                |s| {
                    let mut lf = log_normal_pdf(s, T::zero(), sigma_s);
                    for (&xi, &si) in observations.iter().zip(sigmas) {
                        lf += log_normal_pdf(xi, s, si);
                    }
                    lf
                },
            );

            // C=2: one 1-D integral per cue.
            let mut log_l2 = T::zero();
            for (&xi, &si) in observations.iter().zip(sigmas) {
                let precision = T::one() / (sigma_s * sigma_s) + T::one() / (si * si);
                let center = (xi / (si * si)) / precision;
                let spread = (T::one() / precision).sqrt();
                log_l2 += log_trapezoid(
                    center - width * spread,
                    center + width * spread,
                    points,
                    |s| log_normal_pdf(s, T::zero(), sigma_s) + log_normal_pdf(xi, s, si),
                );
            }
            (log_l1, log_l2)
        }
        CueModel::SameDiff(m) => {
            let n = model.cue_count();
            if n > 3 {
                return Err(OracleError::CostGuard { n });
            }
            let half_range = m.half_range();
            let sigma_s = model.sigma_s();
            let sigmas = model.sigmas();
            let log_two_l = (cast::<T>(2.0) * half_range).ln();

            // C=1: the shared mu is uniform on [-L, L]. The domain has hard
            // edges, so the trapezoid sum carries the Euler-Maclaurin
            // endpoint correction with the exact integrand derivative.
            let log_l1 = log_trapezoid_bounded(
                -half_range,
                half_range,
                points,
                |mu| {
                    let mut lf = -log_two_l;
                    for (&xi, &si) in observations.iter().zip(sigmas) {
                        lf += log_normal_pdf(xi, mu, si);
                    }
                    lf
                },
                |mu| {
                    let mut d = T::zero();
                    for (&xi, &si) in observations.iter().zip(sigmas) {
                        d += (xi - mu) / (si * si);
                    }
                    d
                },
            );

            // C=2: per object, a 2-D integral over (mu_i, s_i); the mu
            // dimension again gets the endpoint correction.
            let mut log_l2 = T::zero();
            for (&xi, &si) in observations.iter().zip(sigmas) {
                let margin = width * (sigma_s + si);
                let s_lo = (-half_range).min(xi) - margin;
                let s_hi = half_range.max(xi) + margin;
                log_l2 += log_trapezoid_2d(
                    (-half_range, half_range),
                    (s_lo, s_hi),
                    points,
                    |mu, s| {
                        -log_two_l + log_normal_pdf(s, mu, sigma_s) + log_normal_pdf(xi, s, si)
                    },
                    |mu, s| (s - mu) / (sigma_s * sigma_s),
                );
            }
            (log_l1, log_l2)
        }
    };
    Ok(posterior_from_logs(model.prior_c1(), log_l1, log_l2))
}

/// Log of a trapezoid integral of `exp(log_f)` over `[lo, hi]`, for
/// integrands that decay to negligible mass at the grid ends.
fn log_trapezoid<T: Real>(lo: T, hi: T, points: usize, log_f: impl Fn(T) -> T) -> T {
    let h = (hi - lo) / cast::<T>((points - 1) as f64);
    let mut peak = T::neg_infinity();
    for i in 0..points {
        let lf = log_f(lo + h * cast::<T>(i as f64));
        if lf > peak {
            peak = lf;
        }
    }
    if !peak.is_finite() {
        return T::neg_infinity();
    }
    let mut total = T::zero();
    for i in 0..points {
        let lf = log_f(lo + h * cast::<T>(i as f64));
        let w = if i == 0 || i == points - 1 {
            cast::<T>(0.5)
        } else {
            T::one()
        };
        total += w * (lf - peak).exp();
    }
    peak + (total * h).ln()
}

/// Trapezoid rule over a hard-edged interval, with the h^2 Euler-Maclaurin
/// endpoint term removed: `T + h^2/12 * (f'(lo) - f'(hi))`. `dlog_f` is the
/// exact log-derivative of the integrand, so `f' = f * dlog_f`.
fn log_trapezoid_bounded<T: Real>(
    lo: T,
    hi: T,
    points: usize,
    log_f: impl Fn(T) -> T,
    dlog_f: impl Fn(T) -> T,
) -> T {
    let h = (hi - lo) / cast::<T>((points - 1) as f64);
    let mut peak = T::neg_infinity();
    for i in 0..points {
        let lf = log_f(lo + h * cast::<T>(i as f64));
        if lf > peak {
            peak = lf;
        }
    }
    if !peak.is_finite() {
        return T::neg_infinity();
    }
    let mut total = T::zero();
    for i in 0..points {
        let lf = log_f(lo + h * cast::<T>(i as f64));
        let w = if i == 0 || i == points - 1 {
            cast::<T>(0.5)
        } else {
            T::one()
        };
        total += w * (lf - peak).exp();
    }
    let correction = (log_f(lo) - peak).exp() * dlog_f(lo) - (log_f(hi) - peak).exp() * dlog_f(hi);
    total += h / cast::<T>(12.0) * correction;
    peak + (total * h).ln()
}

/// Log of a 2-D trapezoid integral of `exp(log_f)` on a product grid. The
/// first dimension is treated as hard-edged and carries the Euler-Maclaurin
/// endpoint correction (via `dlog_f_a`, the log-derivative along it); the
/// second is expected to decay at its grid ends.
fn log_trapezoid_2d<T: Real>(
    a: (T, T),
    b: (T, T),
    points: usize,
    log_f: impl Fn(T, T) -> T,
    dlog_f_a: impl Fn(T, T) -> T,
) -> T {
    let ha = (a.1 - a.0) / cast::<T>((points - 1) as f64);
    let hb = (b.1 - b.0) / cast::<T>((points - 1) as f64);
    let mut peak = T::neg_infinity();
    for i in 0..points {
        let av = a.0 + ha * cast::<T>(i as f64);
        for j in 0..points {
            let lf = log_f(av, b.0 + hb * cast::<T>(j as f64));
            if lf > peak {
                peak = lf;
            }
        }
    }
    if !peak.is_finite() {
        return T::neg_infinity();
    }
    let half = cast::<T>(0.5);
    let mut total = T::zero();
    // d/da of the b-marginalized integrand at the two a-edges.
    let mut edge_derivative = T::zero();
    for i in 0..points {
        let av = a.0 + ha * cast::<T>(i as f64);
        let edge = i == 0 || i == points - 1;
        let wa = if edge { half } else { T::one() };
        let mut row = T::zero();
        let mut row_derivative = T::zero();
        for j in 0..points {
            let bv = b.0 + hb * cast::<T>(j as f64);
            let f = (log_f(av, bv) - peak).exp();
            let wb = if j == 0 || j == points - 1 { half } else { T::one() };
            row += wb * f;
            if edge {
                row_derivative += wb * f * dlog_f_a(av, bv);
            }
        }
        total += wa * row;
        if i == 0 {
            edge_derivative += row_derivative;
        } else if i == points - 1 {
            edge_derivative = edge_derivative - row_derivative;
        }
    }
    total += ha / cast::<T>(12.0) * edge_derivative;
    peak + (total * ha * hb).ln()
}
