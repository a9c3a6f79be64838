//! Evolution of the population density under the (generalized) logit
//! dynamic, and its steady states.
//!
//! The dynamic moves the density toward its own logit response,
//!
//! ```text
//! d mu / dt = L(mu) - mu,
//! ```
//!
//! integrated here by forward Euler:
//! `mu <- (1 - dt) mu + dt L(mu)`. Every step is a convex combination of
//! two unit-mass densities, so mass and nonnegativity survive any
//! `dt <= 1` exactly; `dt = 1` degenerates to plain fixed-point iteration
//! of the map. Stationarity is always measured by the L1 residual
//! `||L(mu) - mu||`, never by the per-step displacement (which scales
//! with `dt` and would flatter small steps).
//!
//! For `q > 1` the steady equation also has a noise-free limit: as
//! `eta -> 0` the balance `L(mu) = mu` tends to
//!
//! ```text
//! p(x)  proportional to  (-phi(x; p))^(-1/(q-1)),
//! ```
//!
//! a density with no `eta` left in it. Under the fishing-tourism payoff
//! the profile depends on `p` only through the exponential moment `C`, so
//! [`asymptotic_limit`] collapses that fixed point to a scalar iteration
//! in `C`, started from the uniform density's moment. No such limit
//! exists at `q = 1`, where the steady states sharpen into a spike
//! instead of settling.

use crate::error::{Error, Result};
use crate::grid::{ActionGrid, Density};
use crate::logit::{logit_map, LogitSettings};
use crate::payoff::{exp_moment, PayoffModel, PayoffParams};

pub const DEFAULT_DT: f64 = 0.1;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_STEPS: usize = 1_000_000;
pub const DEFAULT_DAMPING: f64 = 1.0;

/// Everything a solver run needs. Fields are public; every solver entry
/// point validates them before touching the density.
#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    pub settings: LogitSettings,
    pub params: PayoffParams,
    /// Euler step size in (0, 1].
    pub dt: f64,
    pub max_steps: usize,
    /// Stationarity tolerance on the L1 residual.
    pub tol: f64,
    /// Relaxation weight in (0, 1] for [`steady_fixed_point`].
    pub damping: f64,
}

impl SolverConfig {
    /// Defaults: `dt = 0.1`, `tol = 1e-10`, `max_steps = 1e6`, `damping = 1`.
    #[must_use]
    pub fn new(settings: LogitSettings, params: PayoffParams) -> Self {
        Self {
            settings,
            params,
            dt: DEFAULT_DT,
            max_steps: DEFAULT_MAX_STEPS,
            tol: DEFAULT_TOL,
            damping: DEFAULT_DAMPING,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.dt.is_finite() || self.dt <= 0.0 || self.dt > 1.0 {
            return Err(Error::InvalidParameter {
                name: "dt",
                value: self.dt,
                requirement: "a step size in (0, 1]",
            });
        }
        if !self.tol.is_finite() || self.tol <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "tol",
                value: self.tol,
                requirement: "a finite tolerance > 0",
            });
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidParameter {
                name: "max_steps",
                value: 0.0,
                requirement: "at least 1 step",
            });
        }
        if !self.damping.is_finite() || self.damping <= 0.0 || self.damping > 1.0 {
            return Err(Error::InvalidParameter {
                name: "damping",
                value: self.damping,
                requirement: "a relaxation weight in (0, 1]",
            });
        }
        Ok(())
    }
}

/// Where a solver run ended up.
///
/// `residual` is the stationarity gap at `final_density`: the L1 norm of
/// `L(mu) - mu` for the dynamic solvers, and the absolute gap of the
/// exponential-moment iteration for [`asymptotic_limit`]. `converged`
/// implies `residual < tol`; running out of steps reports
/// `converged = false` rather than an error.
#[derive(Debug, Clone)]
pub struct SimulationResult {
    pub final_density: Density,
    pub steps_taken: usize,
    pub converged: bool,
    pub residual: f64,
    /// `(time, density)` snapshots when a stride was requested.
    pub trajectory: Option<Vec<(f64, Density)>>,
}

fn l1_gap(a: &Density, b: &Density) -> f64 {
    let h = a.grid().cell_width();
    h * crate::grid::compensated_sum(
        a.values()
            .iter()
            .zip(b.values())
            .map(|(&x, &y)| (x - y).abs()),
    )
}

/// Convex combination `(1 - w) current + w target`; exact on mass and sign.
fn relax(current: &Density, target: &Density, w: f64) -> Density {
    let values = current
        .values()
        .iter()
        .zip(target.values())
        .map(|(&c, &t)| (1.0 - w) * c + w * t)
        .collect();
    Density::from_values(current.grid(), values).expect("convex combination of unit-mass densities")
}

fn response<M: PayoffModel + ?Sized>(
    d: &Density,
    settings: &LogitSettings,
    model: &M,
) -> Result<Density> {
    logit_map(&model.profile(d)?, settings)
}

/// Shared relaxation loop: step toward the response with weight `w`
/// until the residual drops under `tol` or the step budget runs out.
fn iterate<M: PayoffModel + ?Sized>(
    initial: &Density,
    config: &SolverConfig,
    model: &M,
    w: f64,
    snapshot_every: Option<usize>,
) -> Result<SimulationResult> {
    config.validate()?;
    if snapshot_every == Some(0) {
        return Err(Error::InvalidParameter {
            name: "snapshot_every",
            value: 0.0,
            requirement: "a stride of at least 1",
        });
    }
    let mut trajectory: Option<Vec<(f64, Density)>> = snapshot_every.map(|_| Vec::new());
    let mut current = initial.clone();
    let mut steps = 0usize;
    loop {
        let mapped = response(&current, &config.settings, model)?;
        let residual = l1_gap(&mapped, &current);
        if let (Some(traj), Some(stride)) = (trajectory.as_mut(), snapshot_every) {
            if steps.is_multiple_of(stride) {
                traj.push((steps as f64 * config.dt, current.clone()));
            }
        }
        let converged = residual < config.tol;
        if converged || steps >= config.max_steps {
            if let (Some(traj), Some(stride)) = (trajectory.as_mut(), snapshot_every) {
                if !steps.is_multiple_of(stride) {
                    traj.push((steps as f64 * config.dt, current.clone()));
                }
            }
            return Ok(SimulationResult {
                final_density: current,
                steps_taken: steps,
                converged,
                residual,
                trajectory,
            });
        }
        current = relax(&current, &mapped, w);
        steps += 1;
    }
}

/// One forward Euler step `(1 - dt) d + dt L(d)` under the fishing payoff.
pub fn euler_step(d: &Density, config: &SolverConfig) -> Result<Density> {
    euler_step_with(d, config, &config.params)
}

/// One forward Euler step under any payoff model.
pub fn euler_step_with<M: PayoffModel + ?Sized>(
    d: &Density,
    config: &SolverConfig,
    model: &M,
) -> Result<Density> {
    config.validate()?;
    Ok(relax(d, &response(d, &config.settings, model)?, config.dt))
}

/// Integrate the dynamic by forward Euler until stationary.
///
/// Stops as soon as `||L(mu) - mu|| < tol`, reporting the residual of the
/// final state; hitting `max_steps` first reports `converged = false`.
/// With `snapshot_every = Some(k)` the trajectory records every k-th
/// state (times `steps * dt`) plus the final one.
pub fn simulate(
    initial: &Density,
    config: &SolverConfig,
    snapshot_every: Option<usize>,
) -> Result<SimulationResult> {
    simulate_with(initial, config, &config.params, snapshot_every)
}

/// [`simulate`] under any payoff model.
pub fn simulate_with<M: PayoffModel + ?Sized>(
    initial: &Density,
    config: &SolverConfig,
    model: &M,
    snapshot_every: Option<usize>,
) -> Result<SimulationResult> {
    iterate(initial, config, model, config.dt, snapshot_every)
}

/// Solve the steady equation `L(mu) = mu` by damped fixed-point iteration
/// `mu <- (1 - damping) mu + damping L(mu)`.
///
/// The fixed point does not depend on the damping weight; the weight only
/// trades robustness against speed.
pub fn steady_fixed_point(initial: &Density, config: &SolverConfig) -> Result<SimulationResult> {
    steady_fixed_point_with(initial, config, &config.params)
}

/// [`steady_fixed_point`] under any payoff model.
pub fn steady_fixed_point_with<M: PayoffModel + ?Sized>(
    initial: &Density,
    config: &SolverConfig,
    model: &M,
) -> Result<SimulationResult> {
    iterate(initial, config, model, config.damping, None)
}

/// The noise-free steady density for `q > 1` under the fishing payoff,
/// `p(x) proportional to (g(x) + alpha e^(-beta x) C)^(-1/(q-1))`,
/// found by iterating the scalar exponential-moment equation for `C`
/// from the uniform density's moment.
///
/// The result carries no `eta` dependence; `residual` is the final gap
/// `|C_next - C|`. Classical settings are rejected: at `q = 1` the small
/// noise limit concentrates instead of converging to a density.
pub fn asymptotic_limit(grid: &ActionGrid, config: &SolverConfig) -> Result<SimulationResult> {
    config.validate()?;
    if config.settings.is_classical() {
        return Err(Error::InvalidParameter {
            name: "q",
            value: config.settings.q(),
            requirement: "q > 1 (the q = 1 limit is a point mass, not a density)",
        });
    }
    let params = &config.params;
    let inv_exponent = -1.0 / (config.settings.q() - 1.0);
    let congestion: Vec<f64> = grid
        .centers()
        .iter()
        .map(|&x| (x * (1.0 - x)).powf(-params.gamma()))
        .collect();
    let decay: Vec<f64> = grid
        .centers()
        .iter()
        .map(|&x| (-params.beta() * x).exp())
        .collect();
    let density_for = |c: f64| -> Density {
        let weights: Vec<f64> = congestion
            .iter()
            .zip(&decay)
            .map(|(&g, &e)| (g + params.alpha() * e * c).powf(inv_exponent))
            .collect();
        Density::from_weights(grid, &weights).expect("weights are strictly positive")
    };

    let mut c = exp_moment(&Density::uniform(grid), params.beta());
    let mut steps = 0usize;
    loop {
        let d = density_for(c);
        let c_next = exp_moment(&d, params.beta());
        let residual = (c_next - c).abs();
        if residual < config.tol || steps >= config.max_steps {
            return Ok(SimulationResult {
                final_density: d,
                steps_taken: steps,
                converged: residual < config.tol,
                residual,
                trajectory: None,
            });
        }
        c = c_next;
        steps += 1;
    }
}
