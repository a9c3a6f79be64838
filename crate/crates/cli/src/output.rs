//! File outputs: density and trajectory CSVs, JSON run summaries, and
//! the sweep table.
//!
//! Floats are written with Rust's shortest round-trip formatting, so
//! re-reading a CSV reproduces the in-memory values bit for bit and
//! repeated runs with the same inputs produce byte-identical files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use qlogit::{
    concentration_mass, mode_location, relative_entropy, wasserstein1_to_point, Density,
    NASH_MASS_HALFWIDTH,
};
use serde_json::Value;

use crate::CliError;

pub fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Invalid(format!("cannot write {}: {e}", path.display()))
}

pub fn write_density_csv(path: &Path, d: &Density) -> Result<(), CliError> {
    let mut text = String::from("x,density\n");
    for (i, &v) in d.values().iter().enumerate() {
        let _ = writeln!(text, "{},{v}", d.grid().center(i));
    }
    std::fs::write(path, text).map_err(|e| io_error(path, e))
}

pub fn write_trajectory_csv(path: &Path, trajectory: &[(f64, Density)]) -> Result<(), CliError> {
    let mut text = String::from("t,x,density\n");
    for (t, d) in trajectory {
        for (i, &v) in d.values().iter().enumerate() {
            let _ = writeln!(text, "{t},{},{v}", d.grid().center(i));
        }
    }
    std::fs::write(path, text).map_err(|e| io_error(path, e))
}

/// Serialize with sorted keys (BTreeMap order) and a trailing newline.
pub fn write_summary_json(path: &Path, fields: &BTreeMap<String, Value>) -> Result<(), CliError> {
    let mut text =
        serde_json::to_string_pretty(fields).expect("summary maps hold only plain JSON values");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| io_error(path, e))
}

/// The density statistics shared by every summary: location, spread, and
/// distances to the equilibrium action.
pub fn diagnostics_fields(d: &Density, nash_x: f64) -> BTreeMap<String, Value> {
    let mut fields = BTreeMap::new();
    fields.insert("mode_x".into(), mode_location(d).into());
    fields.insert("mean".into(), d.mean().into());
    fields.insert("variance".into(), d.variance().into());
    fields.insert(
        "mass_near_nash".into(),
        concentration_mass(d, nash_x, NASH_MASS_HALFWIDTH)
            .expect("equilibrium actions lie inside the unit interval")
            .into(),
    );
    fields.insert(
        "wasserstein_to_nash".into(),
        wasserstein1_to_point(d, nash_x)
            .expect("equilibrium actions lie inside the unit interval")
            .into(),
    );
    fields.insert("entropy".into(), relative_entropy(d).into());
    fields.insert("nash_x".into(), nash_x.into());
    fields.insert("n_cells".into(), (d.grid().n_cells() as u64).into());
    fields.insert("mass".into(), d.mass().into());
    fields
}

/// Column order of the sweep table; one row per (q, eta) job.
pub const SWEEP_HEADER: &str = "alpha,beta,gamma,q,eta,n_cells,dt,steps_taken,converged,\
l1_residual,nash_x,mode_x,mean,variance,mass_near_nash,wasserstein_to_nash,entropy";

pub struct SweepRow {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub q: f64,
    pub eta: f64,
    pub n_cells: usize,
    pub dt: f64,
    pub steps_taken: usize,
    pub converged: bool,
    pub l1_residual: f64,
    pub nash_x: f64,
    pub mode_x: f64,
    pub mean: f64,
    pub variance: f64,
    pub mass_near_nash: f64,
    pub wasserstein_to_nash: f64,
    pub entropy: f64,
}

impl SweepRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.alpha,
            self.beta,
            self.gamma,
            self.q,
            self.eta,
            self.n_cells,
            self.dt,
            self.steps_taken,
            self.converged,
            self.l1_residual,
            self.nash_x,
            self.mode_x,
            self.mean,
            self.variance,
            self.mass_near_nash,
            self.wasserstein_to_nash,
            self.entropy
        )
    }
}

pub fn write_sweep_csv(path: &Path, rows: &[SweepRow]) -> Result<(), CliError> {
    let mut text = String::from(SWEEP_HEADER);
    text.push('\n');
    for row in rows {
        text.push_str(&row.csv_line());
        text.push('\n');
    }
    std::fs::write(path, text).map_err(|e| io_error(path, e))
}
