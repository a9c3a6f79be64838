//! Smoothed best-response maps: the classical logit map and its
//! q-exponential (Tsallis) generalization.
//!
//! Given a payoff profile `phi` and a noise intensity `eta > 0`, the
//! response density is
//!
//! ```text
//! L(x)  proportional to  exp_q(phi(x) / eta)
//! ```
//!
//! where `exp_q` is the q-exponential
//!
//! ```text
//! exp_q(z) = (1 + (1 - q) z)^(-1/(q-1))   for q > 1, z <= 0
//!          = exp(z)                        for q = 1,
//! ```
//!
//! a heavier-tailed deformation of the exponential that approaches it as
//! `q -> 1`. Each map is the unique maximizer of an entropy-regularized
//! objective over densities: expected payoff minus `eta` times relative
//! entropy at `q = 1`, and a q-weighted payoff minus `eta` times the
//! Tsallis divergence for `q > 1` (both objectives are strictly concave,
//! so the first-order condition pins the maximizer). [`verify_maximizer`]
//! checks that optimality claim empirically with random feasible
//! perturbations.
//!
//! Numerics: weights are assembled in log space and shifted by the
//! largest log weight before exponentiation. For `q = 1` this is the
//! usual softmax stabilization `exp((phi_i - max phi)/eta)`; for `q > 1`
//! the shift cancels in the normalization and merely guards against
//! underflow of the common scale.

use crate::error::{Error, Result};
use crate::grid::{compensated_sum, Density};
use crate::payoff::PayoffProfile;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `q` values closer to 1 than this collapse to the classical branch.
pub const Q_SNAP_TOL: f64 = 1e-12;

/// A perturbation may beat the closed form by at most this much before
/// [`verify_maximizer`] reports failure.
pub const MAXIMIZER_MARGIN_TOL: f64 = 1e-12;

/// Noise intensity `eta > 0` and deformation order `q >= 1`.
///
/// `q` within [`Q_SNAP_TOL`] of 1 is stored as exactly 1, selecting the
/// classical branch everywhere downstream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogitSettings {
    eta: f64,
    q: f64,
}

impl LogitSettings {
    pub fn new(eta: f64, q: f64) -> Result<Self> {
        if !eta.is_finite() || eta <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "eta",
                value: eta,
                requirement: "a finite value > 0",
            });
        }
        if !q.is_finite() || q < 1.0 - Q_SNAP_TOL {
            return Err(Error::InvalidParameter {
                name: "q",
                value: q,
                requirement: "a finite value >= 1",
            });
        }
        let q = if (q - 1.0).abs() < Q_SNAP_TOL { 1.0 } else { q };
        Ok(Self { eta, q })
    }

    #[must_use]
    pub fn eta(&self) -> f64 {
        self.eta
    }

    #[must_use]
    pub fn q(&self) -> f64 {
        self.q
    }

    /// True when the settings select the classical (q = 1) branch.
    #[must_use]
    pub fn is_classical(&self) -> bool {
        self.q == 1.0
    }
}

/// The q-exponential; plain `exp` when `q` is within [`Q_SNAP_TOL`] of 1.
///
/// For `q > 1` the value is computed as
/// `exp(-ln(1 + (q-1)(-z)) / (q-1))`, which stays accurate as `q -> 1`
/// and maps large negative `z` to graceful underflow instead of NaN.
/// Arguments with a nonpositive base `1 + (1-q) z` are rejected.
pub fn q_exponential(z: f64, q: f64) -> Result<f64> {
    if !z.is_finite() {
        return Err(Error::InvalidParameter {
            name: "z",
            value: z,
            requirement: "a finite argument",
        });
    }
    if !q.is_finite() || q < 1.0 - Q_SNAP_TOL {
        return Err(Error::InvalidParameter {
            name: "q",
            value: q,
            requirement: "a finite value >= 1",
        });
    }
    if (q - 1.0).abs() < Q_SNAP_TOL {
        return Ok(z.exp());
    }
    let w = (q - 1.0) * (-z); // base is 1 + w
    if w <= -1.0 {
        return Err(Error::QExponentialDomain {
            z,
            q,
            base: 1.0 + w,
        });
    }
    Ok((-w.ln_1p() / (q - 1.0)).exp())
}

/// Log weights `ln exp_q(phi_i / eta)`, the stable intermediate of the map.
fn log_weights(values: &[f64], settings: &LogitSettings) -> Result<Vec<f64>> {
    let eta = settings.eta;
    if settings.is_classical() {
        values
            .iter()
            .enumerate()
            .map(|(index, &phi)| {
                if phi.is_finite() {
                    Ok(phi / eta)
                } else {
                    Err(Error::NonFinite { index, value: phi })
                }
            })
            .collect()
    } else {
        let qm1 = settings.q - 1.0;
        values
            .iter()
            .enumerate()
            .map(|(index, &phi)| {
                if !phi.is_finite() {
                    return Err(Error::NonFinite { index, value: phi });
                }
                if phi > 0.0 {
                    return Err(Error::PositivePayoff { index, value: phi });
                }
                Ok(-(qm1 * (-phi) / eta).ln_1p() / qm1)
            })
            .collect()
    }
}

/// The (generalized) logit response to a payoff profile: normalize
/// `exp_q(phi_i / eta)` to a unit-mass density.
///
/// For `q > 1` every profile value must be nonpositive. The all-underflow
/// case surfaces as [`Error::DegenerateWeights`]; the max-shift makes it
/// unreachable for finite profiles.
pub fn logit_map(profile: &PayoffProfile, settings: &LogitSettings) -> Result<Density> {
    let lw = log_weights(profile.values(), settings)?;
    let peak = lw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = lw.iter().map(|&l| (l - peak).exp()).collect();
    Density::from_weights(profile.grid(), &weights)
}

/// Relative entropy of `d` against the uniform density:
/// `integral of p ln p`, with `0 ln 0 = 0`. Nonnegative on unit mass.
#[must_use]
pub fn relative_entropy(d: &Density) -> f64 {
    let s = compensated_sum(
        d.values()
            .iter()
            .map(|&p| if p > 0.0 { p * p.ln() } else { 0.0 }),
    );
    d.grid().cell_width() * s
}

/// Tsallis divergence of order `q > 1` against the uniform density:
/// `integral of (1 - q + q p - p^q) / (1 - q)`.
///
/// Approaches [`relative_entropy`] as `q -> 1` from above; `q <= 1`
/// (including the snap window around 1) is rejected.
pub fn tsallis_divergence(d: &Density, q: f64) -> Result<f64> {
    if !q.is_finite() || q - 1.0 < Q_SNAP_TOL {
        return Err(Error::InvalidParameter {
            name: "q",
            value: q,
            requirement: "a finite value > 1 (use relative_entropy at q = 1)",
        });
    }
    let s = compensated_sum(
        d.values()
            .iter()
            .map(|&p| (1.0 - q + q * p - p.powf(q)) / (1.0 - q)),
    );
    Ok(d.grid().cell_width() * s)
}

/// The variational objective the logit map maximizes over unit-mass
/// densities on the same grid: expected payoff minus `eta` times the
/// matching divergence (q-weighted payoff and Tsallis divergence for
/// `q > 1`).
pub fn logit_objective(
    candidate: &Density,
    profile: &PayoffProfile,
    settings: &LogitSettings,
) -> Result<f64> {
    let (nc, np) = (candidate.grid().n_cells(), profile.grid().n_cells());
    if nc != np {
        return Err(Error::GridMismatch {
            left: nc,
            right: np,
        });
    }
    let h = candidate.grid().cell_width();
    if settings.is_classical() {
        let gain = h * compensated_sum(
            candidate
                .values()
                .iter()
                .zip(profile.values())
                .map(|(&p, &phi)| p * phi),
        );
        Ok(gain - settings.eta * relative_entropy(candidate))
    } else {
        let q = settings.q;
        let gain = h * compensated_sum(
            candidate
                .values()
                .iter()
                .zip(profile.values())
                .map(|(&p, &phi)| p.powf(q) * phi),
        );
        Ok(gain - settings.eta * tsallis_divergence(candidate, q)?)
    }
}

/// Outcome of the random-perturbation optimality check.
///
/// `worst_margin` is the smallest value of
/// `objective(closed form) - objective(perturbed)` seen across all
/// trials; the check passes when it stays above `-`[`MAXIMIZER_MARGIN_TOL`].
/// A failed report is a finding, not an error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerificationReport {
    pub passed: bool,
    pub trials: usize,
    pub worst_margin: f64,
    pub seed: u64,
}

/// Check empirically that [`logit_map`] maximizes [`logit_objective`].
///
/// Each trial moves a random amount of mass between two random cells of
/// the closed-form maximizer: the amount is drawn uniformly from
/// `(0, min(cell mass, 0.5) * cell_width]`, so feasibility (nonnegativity,
/// unit mass) holds by construction. Randomness comes from a ChaCha8
/// stream seeded with `seed`; the generator is fixed, so reports are
/// reproducible across runs and platforms.
pub fn verify_maximizer(
    profile: &PayoffProfile,
    settings: &LogitSettings,
    trials: usize,
    seed: u64,
) -> Result<VerificationReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter {
            name: "trials",
            value: 0.0,
            requirement: "at least 1 trial",
        });
    }
    let best = logit_map(profile, settings)?;
    let best_objective = logit_objective(&best, profile, settings)?;
    let grid = best.grid().clone();
    let (n, h) = (grid.n_cells(), grid.cell_width());

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_margin = f64::INFINITY;
    for _ in 0..trials {
        let from = rng.random_range(0..n);
        let mut to = rng.random_range(0..n - 1);
        if to >= from {
            to += 1;
        }
        let u = 1.0 - rng.random::<f64>(); // (0, 1]
        let cell_mass = best.values()[from] * h;
        let amount = u * cell_mass.min(0.5) * h;

        let mut perturbed = best.values().to_vec();
        perturbed[from] = (perturbed[from] - amount / h).max(0.0);
        perturbed[to] += amount / h;
        let candidate = Density::from_values(&grid, perturbed)
            .expect("pairwise transfer keeps the density feasible");

        let margin = best_objective - logit_objective(&candidate, profile, settings)?;
        if margin < worst_margin {
            worst_margin = margin;
        }
    }
    Ok(VerificationReport {
        passed: worst_margin >= -MAXIMIZER_MARGIN_TOL,
        trials,
        worst_margin,
        seed,
    })
}
