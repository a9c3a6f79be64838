//! Cell-centered discretization of the action space [0, 1] and the
//! probability densities living on it.
//!
//! The grid splits [0, 1] into `n` equal cells with centers at
//! `(i + 1/2)/n`, so no node ever touches the boundary; payoff terms that
//! blow up at 0 or 1 stay finite on the grid. A measure is represented by
//! its cell-averaged density: one nonnegative value per cell, with unit
//! total mass under the midpoint rule. All integral queries run a
//! compensated sum in ascending index order, which makes every result
//! deterministic across runs and platforms.

use crate::error::{Error, Result};

/// Tolerance on `cell_width * sum(values)` enforced by every [`Density`].
pub const MASS_TOL: f64 = 1e-12;

/// Uniform cell-centered grid on [0, 1].
#[derive(Debug, Clone)]
pub struct ActionGrid {
    n_cells: usize,
    cell_width: f64,
    centers: Vec<f64>,
}

impl PartialEq for ActionGrid {
    fn eq(&self, other: &Self) -> bool {
        // Construction is deterministic, so cell count pins the whole grid.
        self.n_cells == other.n_cells
    }
}

impl ActionGrid {
    /// Build a grid with `n_cells >= 2` equal cells.
    pub fn new(n_cells: usize) -> Result<Self> {
        if n_cells < 2 {
            return Err(Error::GridTooSmall { n_cells });
        }
        let n = n_cells as f64;
        let centers = (0..n_cells).map(|i| (i as f64 + 0.5) / n).collect();
        Ok(Self {
            n_cells,
            cell_width: 1.0 / n,
            centers,
        })
    }

    #[must_use]
    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    #[must_use]
    pub fn cell_width(&self) -> f64 {
        self.cell_width
    }

    #[must_use]
    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    #[must_use]
    pub fn center(&self, i: usize) -> f64 {
        self.centers[i]
    }

    /// Left and right edge of cell `i`.
    #[must_use]
    pub fn cell_bounds(&self, i: usize) -> (f64, f64) {
        (
            i as f64 * self.cell_width,
            (i as f64 + 1.0) * self.cell_width,
        )
    }

    /// Index of the cell containing `x in [0, 1]`; `x = 1` maps to the last cell.
    #[must_use]
    pub fn cell_index_of(&self, x: f64) -> usize {
        // multiply by the exact cell count instead of dividing by the
        // rounded width, so edge abscissas land in the right cell
        ((x * self.n_cells as f64) as usize).min(self.n_cells - 1)
    }
}

/// Neumaier-compensated sum in iteration order.
pub(crate) fn compensated_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Cell-averaged probability density on an [`ActionGrid`].
///
/// Invariants, checked at construction: every value is finite and
/// nonnegative, and `cell_width * sum(values)` is 1 within [`MASS_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct Density {
    grid: ActionGrid,
    values: Vec<f64>,
}

fn ensure_finite_nonnegative(values: &[f64]) -> Result<()> {
    for (index, &value) in values.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFinite { index, value });
        }
        if value < 0.0 {
            return Err(Error::Negative { index, value });
        }
    }
    Ok(())
}

impl Density {
    /// The uniform density: 1 everywhere.
    #[must_use]
    pub fn uniform(grid: &ActionGrid) -> Self {
        Self {
            grid: grid.clone(),
            values: vec![1.0; grid.n_cells()],
        }
    }

    /// All mass in the single cell containing `x`.
    ///
    /// This is still an absolutely continuous density (value `n` on one
    /// cell), not a point mass.
    #[must_use]
    pub fn peak_at(grid: &ActionGrid, x: f64) -> Self {
        let mut values = vec![0.0; grid.n_cells()];
        values[grid.cell_index_of(x)] = grid.n_cells() as f64;
        Self {
            grid: grid.clone(),
            values,
        }
    }

    /// Normalize raw nonnegative weights to unit mass.
    pub fn from_weights(grid: &ActionGrid, raw: &[f64]) -> Result<Self> {
        if raw.len() != grid.n_cells() {
            return Err(Error::LengthMismatch {
                expected: grid.n_cells(),
                actual: raw.len(),
            });
        }
        ensure_finite_nonnegative(raw)?;
        let mass = grid.cell_width() * compensated_sum(raw.iter().copied());
        if mass <= 0.0 {
            return Err(Error::DegenerateWeights);
        }
        let values = raw.iter().map(|&w| w / mass).collect();
        Ok(Self {
            grid: grid.clone(),
            values,
        })
    }

    /// Wrap values that are already a unit-mass density.
    pub fn from_values(grid: &ActionGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_cells() {
            return Err(Error::LengthMismatch {
                expected: grid.n_cells(),
                actual: values.len(),
            });
        }
        ensure_finite_nonnegative(&values)?;
        let mass = grid.cell_width() * compensated_sum(values.iter().copied());
        if (mass - 1.0).abs() > MASS_TOL {
            return Err(Error::NotNormalized { mass });
        }
        Ok(Self {
            grid: grid.clone(),
            values,
        })
    }

    #[must_use]
    pub fn grid(&self) -> &ActionGrid {
        &self.grid
    }

    #[must_use]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Total mass `cell_width * sum(values)`; 1 within [`MASS_TOL`] by construction.
    #[must_use]
    pub fn mass(&self) -> f64 {
        self.grid.cell_width() * compensated_sum(self.values.iter().copied())
    }

    /// Mass on `[a, b]`, counting partial cell overlaps exactly.
    pub fn mass_on_interval(&self, a: f64, b: f64) -> Result<f64> {
        if !(a.is_finite() && b.is_finite()) || a < 0.0 || b > 1.0 || a > b {
            return Err(Error::InvalidInterval { a, b });
        }
        let acc = compensated_sum((0..self.grid.n_cells()).map(|i| {
            let (l, r) = self.grid.cell_bounds(i);
            let overlap = (b.min(r) - a.max(l)).max(0.0);
            overlap * self.values[i]
        }));
        Ok(acc)
    }

    /// Midpoint-rule integral `cell_width * sum(integrand_i * p_i)`.
    pub fn quadrature(&self, integrand: &[f64]) -> Result<f64> {
        if integrand.len() != self.values.len() {
            return Err(Error::LengthMismatch {
                expected: self.values.len(),
                actual: integrand.len(),
            });
        }
        let acc = compensated_sum(integrand.iter().zip(&self.values).map(|(&psi, &p)| psi * p));
        Ok(self.grid.cell_width() * acc)
    }

    /// First moment of the density.
    #[must_use]
    pub fn mean(&self) -> f64 {
        self.quadrature(self.grid.centers())
            .expect("centers match the grid")
    }

    /// Second central moment of the density.
    #[must_use]
    pub fn variance(&self) -> f64 {
        let m = self.mean();
        let sq: Vec<f64> = self
            .grid
            .centers()
            .iter()
            .map(|&x| (x - m) * (x - m))
            .collect();
        self.quadrature(&sq).expect("integrand matches the grid")
    }
}
