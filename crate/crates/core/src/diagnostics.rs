//! Summary statistics for population densities: where the mass sits, how
//! spread out it is, and how far the state is from game-theoretic
//! reference points.

use crate::error::{Error, Result};
use crate::grid::{compensated_sum, Density};
use crate::logit::{logit_map, relative_entropy, LogitSettings};
use crate::payoff::{expected_payoff, PayoffParams};

/// Halfwidth of the window used for `mass_near_nash` in [`summarize`].
pub const NASH_MASS_HALFWIDTH: f64 = 0.05;

/// One row of diagnostics for a density, as produced by [`summarize`].
#[derive(Debug, Clone, Copy)]
pub struct DiagnosticsRecord {
    /// Center of the highest cell (ties resolve to the leftmost).
    pub mode_x: f64,
    pub mean: f64,
    pub variance: f64,
    /// Mass within [`NASH_MASS_HALFWIDTH`] of the equilibrium action.
    pub mass_near_nash: f64,
    /// 1-Wasserstein distance to the point mass at the equilibrium.
    pub wasserstein_to_nash: f64,
    /// Stationarity gap `||L(mu) - mu||` under the supplied settings.
    pub l1_residual: f64,
    /// Kullback–Leibler divergence from the uniform density.
    pub entropy: f64,
}

/// Center of the cell carrying the most density; ties keep the leftmost
/// cell, so a uniform density reports its first cell.
#[must_use]
pub fn mode_location(d: &Density) -> f64 {
    let mut best = 0usize;
    for (i, &v) in d.values().iter().enumerate() {
        if v > d.values()[best] {
            best = i;
        }
    }
    d.grid().center(best)
}

/// L1 distance `integral |p - r|` between two densities on the same grid.
pub fn l1_distance(a: &Density, b: &Density) -> Result<f64> {
    if a.grid() != b.grid() {
        return Err(Error::GridMismatch {
            left: a.grid().n_cells(),
            right: b.grid().n_cells(),
        });
    }
    let h = a.grid().cell_width();
    Ok(h * compensated_sum(
        a.values()
            .iter()
            .zip(b.values())
            .map(|(&x, &y)| (x - y).abs()),
    ))
}

/// 1-Wasserstein distance from `d` to the point mass at `x0`, i.e.
/// `integral |x - x0| d(x) dx`, evaluated exactly on the piecewise
/// constant density (the cell containing `x0` is split at `x0`).
pub fn wasserstein1_to_point(d: &Density, x0: f64) -> Result<f64> {
    if !x0.is_finite() || !(0.0..=1.0).contains(&x0) {
        return Err(Error::InvalidParameter {
            name: "x0",
            value: x0,
            requirement: "a point in [0, 1]",
        });
    }
    let total = compensated_sum(d.values().iter().enumerate().map(|(i, &v)| {
        let (a, b) = d.grid().cell_bounds(i);
        let piece = if x0 <= a {
            ((b - x0).powi(2) - (a - x0).powi(2)) / 2.0
        } else if x0 >= b {
            ((x0 - a).powi(2) - (x0 - b).powi(2)) / 2.0
        } else {
            ((x0 - a).powi(2) + (b - x0).powi(2)) / 2.0
        };
        v * piece
    }));
    // the exact integral is nonnegative; compensation can leave -0.0
    Ok(total.max(0.0))
}

/// Mass within `halfwidth` of `center`, with the window clipped to the
/// unit interval.
pub fn concentration_mass(d: &Density, center: f64, halfwidth: f64) -> Result<f64> {
    if !center.is_finite() || !(0.0..=1.0).contains(&center) {
        return Err(Error::InvalidParameter {
            name: "center",
            value: center,
            requirement: "a point in [0, 1]",
        });
    }
    if !halfwidth.is_finite() || halfwidth <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "halfwidth",
            value: halfwidth,
            requirement: "a finite halfwidth > 0",
        });
    }
    d.mass_on_interval((center - halfwidth).max(0.0), (center + halfwidth).min(1.0))
}

/// Collect the full diagnostics row for a density relative to the
/// equilibrium action `nash_x` and the dynamic defined by
/// `settings`/`params`.
#[must_use]
pub fn summarize(
    d: &Density,
    settings: &LogitSettings,
    params: &PayoffParams,
    nash_x: f64,
) -> DiagnosticsRecord {
    let mapped = logit_map(&expected_payoff(d, params), settings)
        .expect("fishing payoff profiles are finite and negative");
    DiagnosticsRecord {
        mode_x: mode_location(d),
        mean: d.mean(),
        variance: d.variance(),
        mass_near_nash: concentration_mass(d, nash_x, NASH_MASS_HALFWIDTH)
            .expect("equilibrium actions lie inside the unit interval"),
        wasserstein_to_nash: wasserstein1_to_point(d, nash_x)
            .expect("equilibrium actions lie inside the unit interval"),
        l1_residual: l1_distance(&mapped, d).expect("same grid by construction"),
        entropy: relative_entropy(d),
    }
}
