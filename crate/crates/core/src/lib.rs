//! Logit dynamics on the unit interval, with a Tsallis-divergence
//! generalization that fattens the tails of the response.
//!
//! A continuum of identical players each pick an action `x` in `[0, 1]`.
//! The population is a density `mu` on that interval, and each player's
//! payoff couples to everyone else through a relative-utility term:
//!
//! ```text
//! f(x, y) = -(x(1-x))^(-gamma) - alpha e^(-beta (x - y)),
//! ```
//!
//! a congestion cost that blows up at the endpoints plus an envy penalty
//! against a player at `y`. Averaging over `y ~ mu` gives the expected
//! payoff profile `phi(x; mu)`, and the population relaxes toward the
//! perturbed best response
//!
//! ```text
//! L(mu)(x)  proportional to  exp_q(phi(x; mu) / eta),
//! ```
//!
//! where `exp_q` is the q-exponential. At `q = 1` this is the classical
//! logit response (entropy-regularized best reply with noise `eta`); for
//! `q > 1` the regularizer is a Tsallis divergence and the response keeps
//! polynomial rather than exponential tails, so rarely-played actions
//! retain visible mass even at small noise.
//!
//! The crate provides, in dependency order:
//!
//! - [`grid`]: cell-centered discretizations of `[0, 1]` and validated
//!   probability densities on them, with exact-mass arithmetic;
//! - [`payoff`]: the payoff kernel above, an `O(n)` evaluation of its
//!   expected profile through the exponential moment, and the
//!   [`PayoffModel`] plug-in trait for other games;
//! - [`logit`]: q-exponentials, the (generalized) logit map computed
//!   stably in log space, the variational objectives the map maximizes,
//!   and a randomized maximality verifier;
//! - [`dynamics`]: forward-Euler integration of `d mu/dt = L(mu) - mu`,
//!   damped fixed-point solution of `L(mu) = mu`, and the noise-free
//!   `q > 1` limit computed from a scalar fixed point;
//! - [`equilibrium`]: the symmetric pure equilibrium of the underlying
//!   game by bisection on its first-order condition;
//! - [`diagnostics`]: modes, moments, concentration masses, L1 and
//!   1-Wasserstein distances, and a one-call summary row.
//!
//! Everything numerical works on plain `f64` slices; densities carry
//! their grid and are validated once at the boundary, so the solvers can
//! assume unit mass and nonnegativity throughout.

pub mod diagnostics;
pub mod dynamics;
pub mod equilibrium;
pub mod error;
pub mod grid;
pub mod logit;
pub mod payoff;

pub use diagnostics::{
    concentration_mass, l1_distance, mode_location, summarize, wasserstein1_to_point,
    DiagnosticsRecord, NASH_MASS_HALFWIDTH,
};
pub use dynamics::{
    asymptotic_limit, euler_step, euler_step_with, simulate, simulate_with, steady_fixed_point,
    steady_fixed_point_with, SimulationResult, SolverConfig,
};
pub use equilibrium::{nash_foc_derivative, nash_foc_residual, solve_pure_nash, NashResult};
pub use error::{Error, Result};
pub use grid::{ActionGrid, Density, MASS_TOL};
pub use logit::{
    logit_map, logit_objective, q_exponential, relative_entropy, tsallis_divergence,
    verify_maximizer, LogitSettings, VerificationReport, MAXIMIZER_MARGIN_TOL, Q_SNAP_TOL,
};
pub use payoff::{exp_moment, expected_payoff, kernel, PayoffModel, PayoffParams, PayoffProfile};
