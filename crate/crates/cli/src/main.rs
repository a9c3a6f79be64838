//! Command-line driver for the logit-dynamics toolkit.
//!
//! Subcommands cover the full workflow: solve the pure equilibrium
//! (`nash`), integrate the dynamic (`simulate`), solve the stationary
//! equation directly (`steady`), compute the noise-free heavy-tail limit
//! (`asymptotic`), run (eta, q) parameter sweeps in parallel (`sweep`),
//! and spot-check the variational property of the response map
//! (`verify`).
//!
//! Exit codes: 0 on success; 1 when a solve ran but did not meet its
//! goal (tolerance not reached, a sweep job unconverged, verification
//! failed); 2 for invalid flags, config files, or I/O problems.

mod config;
mod output;

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::Value;

use qlogit::{
    asymptotic_limit, expected_payoff, simulate, solve_pure_nash, steady_fixed_point,
    verify_maximizer, ActionGrid, Density, LogitSettings, PayoffParams, SimulationResult,
    SolverConfig,
};

use config::{parse_float_list, resolve, resolve_opt, ConfigFile};
use output::{
    diagnostics_fields, write_density_csv, write_summary_json, write_sweep_csv,
    write_trajectory_csv, SweepRow,
};

/// Tolerance used whenever a summary needs the equilibrium action as a
/// reference point; independent of the solver tolerances.
const NASH_REFERENCE_TOL: f64 = 1e-10;

#[derive(Debug)]
pub enum CliError {
    /// Bad input: flags, config file, or filesystem. Exit code 2.
    Invalid(String),
    /// The run finished but missed its goal. Exit code 1.
    Failed(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(msg) | CliError::Failed(msg) => f.write_str(msg),
        }
    }
}

fn invalid(e: qlogit::Error) -> CliError {
    CliError::Invalid(e.to_string())
}

#[derive(Parser)]
#[command(
    name = "qlogit",
    version,
    about = "Logit dynamics on [0,1]: simulate, solve steady states, locate equilibria, sweep parameters"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the symmetric pure equilibrium of the payoff by bisection
    Nash(NashArgs),
    /// Integrate the dynamic by forward Euler until stationary
    Simulate(SimulateArgs),
    /// Solve the stationary equation by damped fixed-point iteration
    Steady(SteadyArgs),
    /// Compute the noise-free limit density for q > 1
    Asymptotic(AsymptoticArgs),
    /// Run every (eta, q) combination in parallel and tabulate the results
    Sweep(SweepArgs),
    /// Randomized check that the response map maximizes its objective
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ConfigOpt {
    /// key=value file supplying defaults for any long flag
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct PayoffOpts {
    /// Weight of the relative-comparison penalty (> 0)
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Sensitivity of the relative comparison (> 0)
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// Sharpness of the sparse/dense congestion penalty (> 0)
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
}

impl PayoffOpts {
    fn build(&self, cfg: &ConfigFile) -> Result<PayoffParams, CliError> {
        let alpha = resolve(&self.alpha, cfg, "alpha", 1.0)?;
        let beta = resolve(&self.beta, cfg, "beta", 1.0)?;
        let gamma = resolve(&self.gamma, cfg, "gamma", 1.0)?;
        PayoffParams::new(alpha, beta, gamma).map_err(invalid)
    }
}

#[derive(Args)]
struct GridOpt {
    /// Number of grid cells (>= 2)
    #[arg(long)]
    cells: Option<usize>,
}

impl GridOpt {
    fn build(&self, cfg: &ConfigFile) -> Result<ActionGrid, CliError> {
        let cells = resolve(&self.cells, cfg, "cells", 200)?;
        ActionGrid::new(cells).map_err(invalid)
    }
}

#[derive(Args)]
struct SolveOpts {
    /// Stationarity tolerance on the L1 residual
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
    /// Iteration budget before giving up
    #[arg(long)]
    max_steps: Option<usize>,
}

impl SolveOpts {
    fn apply(&self, solver: &mut SolverConfig, cfg: &ConfigFile) -> Result<(), CliError> {
        solver.tol = resolve(&self.tol, cfg, "tol", 1e-10)?;
        solver.max_steps = resolve(&self.max_steps, cfg, "max-steps", 1_000_000)?;
        Ok(())
    }
}

#[derive(Args)]
struct InitOpt {
    /// Initial density: `uniform` or `peak:<x>` for mass in one cell
    #[arg(long)]
    init: Option<String>,
}

impl InitOpt {
    fn build(&self, cfg: &ConfigFile, grid: &ActionGrid) -> Result<Density, CliError> {
        let spec = resolve(&self.init, cfg, "init", "uniform".to_string())?;
        if spec == "uniform" {
            return Ok(Density::uniform(grid));
        }
        if let Some(raw) = spec.strip_prefix("peak:") {
            let x: f64 = raw.parse().map_err(|e| {
                CliError::Invalid(format!("init: cannot parse peak position `{raw}`: {e}"))
            })?;
            if !(0.0..=1.0).contains(&x) {
                return Err(CliError::Invalid(format!(
                    "init: peak position {x} lies outside [0, 1]"
                )));
            }
            return Ok(Density::peak_at(grid, x));
        }
        Err(CliError::Invalid(format!(
            "init: expected `uniform` or `peak:<x>`, got `{spec}`"
        )))
    }
}

#[derive(Args)]
struct NashArgs {
    #[command(flatten)]
    config: ConfigOpt,
    #[command(flatten)]
    payoff: PayoffOpts,
    /// Bisection tolerance on both bracket width and residual
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
    /// Optional JSON output path (written only when set here or in the config)
    #[arg(long, value_name = "FILE")]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    config: ConfigOpt,
    #[command(flatten)]
    grid: GridOpt,
    #[command(flatten)]
    payoff: PayoffOpts,
    #[command(flatten)]
    solve: SolveOpts,
    #[command(flatten)]
    init: InitOpt,
    /// Noise level eta (> 0)
    #[arg(long, allow_negative_numbers = true)]
    eta: Option<f64>,
    /// Tail index q (1 = classical, > 1 = heavy-tailed)
    #[arg(long, allow_negative_numbers = true)]
    q: Option<f64>,
    /// Euler step size in (0, 1]
    #[arg(long, allow_negative_numbers = true)]
    dt: Option<f64>,
    /// Record every k-th state to the trajectory file
    #[arg(long, value_name = "K")]
    snapshot_every: Option<usize>,
    /// Final density CSV path
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Run summary JSON path
    #[arg(long, value_name = "FILE")]
    summary: Option<PathBuf>,
    /// Trajectory CSV path (used with --snapshot-every)
    #[arg(long, value_name = "FILE")]
    trajectory: Option<PathBuf>,
}

#[derive(Args)]
struct SteadyArgs {
    #[command(flatten)]
    config: ConfigOpt,
    #[command(flatten)]
    grid: GridOpt,
    #[command(flatten)]
    payoff: PayoffOpts,
    #[command(flatten)]
    solve: SolveOpts,
    #[command(flatten)]
    init: InitOpt,
    /// Noise level eta (> 0)
    #[arg(long, allow_negative_numbers = true)]
    eta: Option<f64>,
    /// Tail index q (1 = classical, > 1 = heavy-tailed)
    #[arg(long, allow_negative_numbers = true)]
    q: Option<f64>,
    /// Relaxation weight in (0, 1]; the fixed point is weight-independent
    #[arg(long, allow_negative_numbers = true)]
    damping: Option<f64>,
    /// Final density CSV path
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Run summary JSON path
    #[arg(long, value_name = "FILE")]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct AsymptoticArgs {
    #[command(flatten)]
    config: ConfigOpt,
    #[command(flatten)]
    grid: GridOpt,
    #[command(flatten)]
    payoff: PayoffOpts,
    #[command(flatten)]
    solve: SolveOpts,
    /// Tail index q; must exceed 1 (the classical limit is a point mass)
    #[arg(long, allow_negative_numbers = true)]
    q: Option<f64>,
    /// Final density CSV path
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Run summary JSON path
    #[arg(long, value_name = "FILE")]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    config: ConfigOpt,
    #[command(flatten)]
    grid: GridOpt,
    #[command(flatten)]
    payoff: PayoffOpts,
    #[command(flatten)]
    solve: SolveOpts,
    #[command(flatten)]
    init: InitOpt,
    /// Comma-separated noise levels, e.g. `0.1,0.01,0.007`
    #[arg(long, allow_negative_numbers = true)]
    etas: Option<String>,
    /// Comma-separated tail indices, e.g. `1,1.2`
    #[arg(long, allow_negative_numbers = true)]
    qs: Option<String>,
    /// Euler step size in (0, 1]
    #[arg(long, allow_negative_numbers = true)]
    dt: Option<f64>,
    /// Output directory for per-job densities and summary.csv
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    config: ConfigOpt,
    #[command(flatten)]
    grid: GridOpt,
    #[command(flatten)]
    payoff: PayoffOpts,
    /// Noise level eta (> 0)
    #[arg(long, allow_negative_numbers = true)]
    eta: Option<f64>,
    /// Tail index q (1 = classical, > 1 = heavy-tailed)
    #[arg(long, allow_negative_numbers = true)]
    q: Option<f64>,
    /// Number of random perturbations to test
    #[arg(long)]
    trials: Option<usize>,
    /// RNG seed for reproducible perturbations
    #[arg(long)]
    seed: Option<u64>,
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Nash(args) => run_nash(args),
        Command::Simulate(args) => run_simulate(args),
        Command::Steady(args) => run_steady(args),
        Command::Asymptotic(args) => run_asymptotic(args),
        Command::Sweep(args) => run_sweep(args),
        Command::Verify(args) => run_verify(args),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.code());
    }
}

fn run_nash(args: NashArgs) -> Result<(), CliError> {
    let cfg = ConfigFile::load(args.config.config.as_deref())?;
    let params = args.payoff.build(&cfg)?;
    let tol = resolve(&args.tol, &cfg, "tol", 1e-10)?;
    let result = solve_pure_nash(&params, tol).map_err(invalid)?;
    println!(
        "x_hat = {} (residual {:e}, {} iterations, {} sign change(s) on the scan)",
        result.x_hat, result.residual, result.iterations, result.sign_changes
    );
    if let Some(path) = resolve_opt(&args.summary, &cfg, "summary")? {
        let mut fields = BTreeMap::new();
        fields.insert("command".to_string(), Value::from("nash"));
        fields.insert("alpha".to_string(), params.alpha().into());
        fields.insert("beta".to_string(), params.beta().into());
        fields.insert("gamma".to_string(), params.gamma().into());
        fields.insert("tol".to_string(), tol.into());
        fields.insert("x_hat".to_string(), result.x_hat.into());
        fields.insert("residual".to_string(), result.residual.into());
        fields.insert("iterations".to_string(), (result.iterations as u64).into());
        fields.insert(
            "sign_changes".to_string(),
            (result.sign_changes as u64).into(),
        );
        write_summary_json(&path, &fields)?;
        println!("summary -> {}", path.display());
    }
    Ok(())
}

/// Common tail of the density-producing subcommands: write the density
/// and summary files, report, and turn non-convergence into exit 1.
#[allow(clippy::too_many_arguments)]
fn finish_run(
    label: &str,
    result: &SimulationResult,
    params: &PayoffParams,
    extra: &[(&str, Value)],
    out: &Path,
    summary: &Path,
    residual_label: &str,
) -> Result<(), CliError> {
    write_density_csv(out, &result.final_density)?;

    let nash = solve_pure_nash(params, NASH_REFERENCE_TOL).map_err(invalid)?;
    let mut fields = diagnostics_fields(&result.final_density, nash.x_hat);
    fields.insert("command".to_string(), Value::from(label));
    fields.insert("alpha".to_string(), params.alpha().into());
    fields.insert("beta".to_string(), params.beta().into());
    fields.insert("gamma".to_string(), params.gamma().into());
    fields.insert(
        "steps_taken".to_string(),
        (result.steps_taken as u64).into(),
    );
    fields.insert("converged".to_string(), result.converged.into());
    fields.insert(residual_label.to_string(), result.residual.into());
    for (key, value) in extra {
        fields.insert((*key).to_string(), value.clone());
    }
    write_summary_json(summary, &fields)?;

    println!(
        "{label}: {} after {} steps ({residual_label} {:e})",
        if result.converged {
            "converged"
        } else {
            "stopped"
        },
        result.steps_taken,
        result.residual
    );
    println!(
        "density -> {}, summary -> {}",
        out.display(),
        summary.display()
    );

    if result.converged {
        Ok(())
    } else {
        Err(CliError::Failed(format!(
            "{label} missed the tolerance: {residual_label} {:e} after {} steps \
             (outputs were still written)",
            result.residual, result.steps_taken
        )))
    }
}

fn run_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let cfg = ConfigFile::load(args.config.config.as_deref())?;
    let grid = args.grid.build(&cfg)?;
    let params = args.payoff.build(&cfg)?;
    let eta = resolve(&args.eta, &cfg, "eta", 0.1)?;
    let q = resolve(&args.q, &cfg, "q", 1.0)?;
    let settings = LogitSettings::new(eta, q).map_err(invalid)?;
    let mut solver = SolverConfig::new(settings, params);
    solver.dt = resolve(&args.dt, &cfg, "dt", 0.1)?;
    args.solve.apply(&mut solver, &cfg)?;
    solver.validate().map_err(invalid)?;

    let initial = args.init.build(&cfg, &grid)?;
    let snapshot_every = resolve_opt(&args.snapshot_every, &cfg, "snapshot-every")?;
    let out = resolve(&args.out, &cfg, "out", PathBuf::from("density.csv"))?;
    let summary = resolve(
        &args.summary,
        &cfg,
        "summary",
        PathBuf::from("summary.json"),
    )?;
    let trajectory_request: Option<PathBuf> = resolve_opt(&args.trajectory, &cfg, "trajectory")?;

    let result = simulate(&initial, &solver, snapshot_every).map_err(invalid)?;
    if let Some(states) = &result.trajectory {
        let trajectory_path = trajectory_request.unwrap_or_else(|| PathBuf::from("trajectory.csv"));
        write_trajectory_csv(&trajectory_path, states)?;
        println!(
            "trajectory -> {} ({} snapshots)",
            trajectory_path.display(),
            states.len()
        );
    } else if trajectory_request.is_some() {
        eprintln!(
            "note: a trajectory path was given but --snapshot-every is unset; nothing recorded"
        );
    }
    finish_run(
        "simulate",
        &result,
        &params,
        &[
            ("eta", eta.into()),
            ("q", q.into()),
            ("dt", solver.dt.into()),
            ("tol", solver.tol.into()),
        ],
        &out,
        &summary,
        "l1_residual",
    )
}

fn run_steady(args: SteadyArgs) -> Result<(), CliError> {
    let cfg = ConfigFile::load(args.config.config.as_deref())?;
    let grid = args.grid.build(&cfg)?;
    let params = args.payoff.build(&cfg)?;
    let eta = resolve(&args.eta, &cfg, "eta", 0.1)?;
    let q = resolve(&args.q, &cfg, "q", 1.0)?;
    let settings = LogitSettings::new(eta, q).map_err(invalid)?;
    let mut solver = SolverConfig::new(settings, params);
    solver.damping = resolve(&args.damping, &cfg, "damping", 1.0)?;
    args.solve.apply(&mut solver, &cfg)?;
    solver.validate().map_err(invalid)?;

    let initial = args.init.build(&cfg, &grid)?;
    let out = resolve(&args.out, &cfg, "out", PathBuf::from("density.csv"))?;
    let summary = resolve(
        &args.summary,
        &cfg,
        "summary",
        PathBuf::from("summary.json"),
    )?;

    let result = steady_fixed_point(&initial, &solver).map_err(invalid)?;
    finish_run(
        "steady",
        &result,
        &params,
        &[
            ("eta", eta.into()),
            ("q", q.into()),
            ("damping", solver.damping.into()),
            ("tol", solver.tol.into()),
        ],
        &out,
        &summary,
        "l1_residual",
    )
}

fn run_asymptotic(args: AsymptoticArgs) -> Result<(), CliError> {
    let cfg = ConfigFile::load(args.config.config.as_deref())?;
    let grid = args.grid.build(&cfg)?;
    let params = args.payoff.build(&cfg)?;
    let q = resolve(&args.q, &cfg, "q", 1.0)?;
    // eta never enters the limit; any valid value satisfies the config type
    let settings = LogitSettings::new(1.0, q).map_err(invalid)?;
    let mut solver = SolverConfig::new(settings, params);
    args.solve.apply(&mut solver, &cfg)?;
    solver.validate().map_err(invalid)?;

    let out = resolve(&args.out, &cfg, "out", PathBuf::from("density.csv"))?;
    let summary = resolve(
        &args.summary,
        &cfg,
        "summary",
        PathBuf::from("summary.json"),
    )?;

    let result = asymptotic_limit(&grid, &solver).map_err(invalid)?;
    finish_run(
        "asymptotic",
        &result,
        &params,
        &[
            // the limit is the eta -> 0 regime, recorded as such
            ("eta", 0.0.into()),
            ("q", q.into()),
            ("tol", solver.tol.into()),
        ],
        &out,
        &summary,
        "moment_gap",
    )
}

fn run_sweep(args: SweepArgs) -> Result<(), CliError> {
    let cfg = ConfigFile::load(args.config.config.as_deref())?;
    let grid = args.grid.build(&cfg)?;
    let params = args.payoff.build(&cfg)?;
    let etas = parse_float_list(
        &resolve(&args.etas, &cfg, "etas", "0.1,0.01,0.007".into())?,
        "etas",
    )?;
    let qs = parse_float_list(&resolve(&args.qs, &cfg, "qs", "1".into())?, "qs")?;
    let dt = resolve(&args.dt, &cfg, "dt", 0.1)?;
    let out_dir = resolve(&args.out_dir, &cfg, "out-dir", PathBuf::from("sweep_out"))?;
    let initial = args.init.build(&cfg, &grid)?;

    std::fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::Invalid(format!("cannot create {}: {e}", out_dir.display())))?;

    // validate every job's settings up front so a bad list entry is a
    // usage error, not a mid-sweep surprise
    let mut jobs = Vec::new();
    for &q in &qs {
        for &eta in &etas {
            let settings = LogitSettings::new(eta, q).map_err(invalid)?;
            let mut solver = SolverConfig::new(settings, params);
            solver.dt = dt;
            args.solve.apply(&mut solver, &cfg)?;
            solver.validate().map_err(invalid)?;
            jobs.push((q, eta, solver));
        }
    }

    let nash = solve_pure_nash(&params, NASH_REFERENCE_TOL).map_err(invalid)?;
    let results: Vec<Result<(SweepRow, PathBuf), CliError>> = jobs
        .par_iter()
        .map(|(q, eta, solver)| {
            let result = simulate(&initial, solver, None).map_err(invalid)?;
            let d = &result.final_density;
            let path = out_dir.join(format!("density_q{q}_eta{eta}.csv"));
            write_density_csv(&path, d)?;
            let stats = diagnostics_fields(d, nash.x_hat);
            let field = |name: &str| stats[name].as_f64().expect("diagnostics are numeric");
            Ok((
                SweepRow {
                    alpha: params.alpha(),
                    beta: params.beta(),
                    gamma: params.gamma(),
                    q: *q,
                    eta: *eta,
                    n_cells: grid.n_cells(),
                    dt,
                    steps_taken: result.steps_taken,
                    converged: result.converged,
                    l1_residual: result.residual,
                    nash_x: nash.x_hat,
                    mode_x: field("mode_x"),
                    mean: field("mean"),
                    variance: field("variance"),
                    mass_near_nash: field("mass_near_nash"),
                    wasserstein_to_nash: field("wasserstein_to_nash"),
                    entropy: field("entropy"),
                },
                path,
            ))
        })
        .collect();

    let mut rows = Vec::with_capacity(results.len());
    for result in results {
        let (row, path) = result?;
        println!(
            "q = {}, eta = {}: {} after {} steps -> {}",
            row.q,
            row.eta,
            if row.converged {
                "converged"
            } else {
                "STOPPED"
            },
            row.steps_taken,
            path.display()
        );
        rows.push(row);
    }
    let table = out_dir.join("summary.csv");
    write_sweep_csv(&table, &rows)?;
    println!("{} jobs -> {}", rows.len(), table.display());

    let unconverged = rows.iter().filter(|r| !r.converged).count();
    if unconverged > 0 {
        return Err(CliError::Failed(format!(
            "{unconverged} of {} sweep jobs missed the tolerance (see {})",
            rows.len(),
            table.display()
        )));
    }
    Ok(())
}

fn run_verify(args: VerifyArgs) -> Result<(), CliError> {
    let cfg = ConfigFile::load(args.config.config.as_deref())?;
    let grid = args.grid.build(&cfg)?;
    let params = args.payoff.build(&cfg)?;
    let eta = resolve(&args.eta, &cfg, "eta", 0.1)?;
    let q = resolve(&args.q, &cfg, "q", 1.0)?;
    let settings = LogitSettings::new(eta, q).map_err(invalid)?;
    let trials = resolve(&args.trials, &cfg, "trials", 1000)?;
    let seed = resolve(&args.seed, &cfg, "seed", 42)?;

    let profile = expected_payoff(&Density::uniform(&grid), &params);
    let report = verify_maximizer(&profile, &settings, trials, seed).map_err(invalid)?;
    println!(
        "maximality {}: worst margin {:e} over {} trials (seed {})",
        if report.passed { "verified" } else { "REFUTED" },
        report.worst_margin,
        report.trials,
        report.seed
    );
    if report.passed {
        Ok(())
    } else {
        Err(CliError::Failed(format!(
            "a perturbation beat the response map by {:e}",
            -report.worst_margin
        )))
    }
}
