//! Shared fixtures for the solver benchmarks: the reference parameter
//! set and ready-made grids, so the bench targets measure solver work
//! rather than setup.

use qlogit::{ActionGrid, Density, LogitSettings, PayoffParams, SolverConfig};

pub const BENCH_CELLS: usize = 200;

pub fn reference_params() -> PayoffParams {
    PayoffParams::new(1.0, 1.0, 1.0).expect("reference parameters are valid")
}

pub fn reference_config(eta: f64, q: f64) -> SolverConfig {
    SolverConfig::new(
        LogitSettings::new(eta, q).expect("benchmark settings are valid"),
        reference_params(),
    )
}

pub fn bench_grid() -> ActionGrid {
    ActionGrid::new(BENCH_CELLS).expect("benchmark grid is valid")
}

pub fn uniform_start() -> Density {
    Density::uniform(&bench_grid())
}
