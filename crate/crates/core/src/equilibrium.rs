//! The pure-strategy equilibrium of the underlying game.
//!
//! When every player picks the same action `x`, the relative-utility term
//! contributes `-alpha e^(-beta(x - x)) = -alpha` regardless of `x`, and a
//! symmetric equilibrium is a stationary point of the payoff a deviator
//! sees. Differentiating the kernel in its first argument at `y = x`
//! gives the first-order condition
//!
//! ```text
//! gamma (2x - 1) (x(1-x))^(-gamma-1) = alpha beta.
//! ```
//!
//! The left side vanishes at `x = 1/2` and grows without bound as
//! `x -> 1`, and it is the derivative of the strictly convex congestion
//! cost, so on `(1/2, 1)` it is continuous and strictly increasing: the
//! root exists, is unique, and bisection cannot miss it. For small
//! `alpha beta` the root sits near `1/2 + alpha beta / 32` (linearizing
//! the left side around 1/2, where its slope is `2 gamma 4^(gamma+1)`).

use crate::error::{Error, Result};

/// Offset keeping bisection strictly inside (1/2, 1), where the
/// condition's left side is finite.
const BRACKET_MARGIN: f64 = 1e-12;

/// Points probed when counting sign changes of the residual.
const SCAN_POINTS: usize = 1024;

/// A solved symmetric equilibrium.
#[derive(Debug, Clone, Copy)]
pub struct NashResult {
    /// The equilibrium action.
    pub x_hat: f64,
    /// First-order-condition residual at `x_hat`.
    pub residual: f64,
    /// Bisection iterations spent.
    pub iterations: usize,
    /// Sign changes of the residual across a uniform scan of (1/2, 1);
    /// 1 certifies the reported root is the only one the scan can see.
    pub sign_changes: usize,
}

/// First-order-condition residual
/// `gamma (2x - 1) (x(1-x))^(-gamma-1) - alpha beta`.
///
/// Negative below the equilibrium, positive above it; exactly
/// `-alpha beta` at `x = 1/2`.
pub fn nash_foc_residual(x: f64, params: &crate::payoff::PayoffParams) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::SingularAction { x });
    }
    let (alpha, beta, gamma) = (params.alpha(), params.beta(), params.gamma());
    Ok(gamma * (2.0 * x - 1.0) * (x * (1.0 - x)).powf(-gamma - 1.0) - alpha * beta)
}

/// Derivative of the residual in `x`, for diagnostics and tests.
///
/// Strictly positive on `[1/2, 1)`, which is what makes the bisection
/// bracket trustworthy.
pub fn nash_foc_derivative(x: f64, params: &crate::payoff::PayoffParams) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::SingularAction { x });
    }
    let gamma = params.gamma();
    let s = x * (1.0 - x);
    // d/dx [ gamma (2x-1) s^(-gamma-1) ] with s' = 1 - 2x
    Ok(gamma * s.powf(-gamma - 2.0) * (2.0 * s + (gamma + 1.0) * (2.0 * x - 1.0).powi(2)))
}

/// Solve the first-order condition by bisection on `(1/2, 1)`.
///
/// Runs until the bracket is narrower than `tol` *and* the residual at
/// its midpoint is within `tol`, so `x_hat` is pinned in both senses.
pub fn solve_pure_nash(params: &crate::payoff::PayoffParams, tol: f64) -> Result<NashResult> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "tol",
            value: tol,
            requirement: "a finite tolerance > 0",
        });
    }
    let mut lo = 0.5 + BRACKET_MARGIN;
    let mut hi = 1.0 - BRACKET_MARGIN;
    let f_lo = nash_foc_residual(lo, params)?;
    if f_lo >= 0.0 {
        // alpha beta so small the root is indistinguishable from 1/2
        return Ok(NashResult {
            x_hat: lo,
            residual: f_lo,
            iterations: 0,
            sign_changes: count_sign_changes(params)?,
        });
    }
    let mut iterations = 0usize;
    let (x_hat, residual) = loop {
        let mid = 0.5 * (lo + hi);
        let f_mid = nash_foc_residual(mid, params)?;
        if (hi - lo < tol && f_mid.abs() < tol) || iterations >= 200 {
            break (mid, f_mid);
        }
        if f_mid < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    };
    Ok(NashResult {
        x_hat,
        residual,
        iterations,
        sign_changes: count_sign_changes(params)?,
    })
}

fn count_sign_changes(params: &crate::payoff::PayoffParams) -> Result<usize> {
    let lo = 0.5 + BRACKET_MARGIN;
    let hi = 1.0 - BRACKET_MARGIN;
    let mut changes = 0usize;
    let mut prev = nash_foc_residual(lo, params)?.signum();
    for i in 1..SCAN_POINTS {
        let x = lo + (hi - lo) * i as f64 / (SCAN_POINTS - 1) as f64;
        let sign = nash_foc_residual(x, params)?.signum();
        if sign != prev {
            changes += 1;
            prev = sign;
        }
    }
    Ok(changes)
}
