//! Fishing-tourism payoff: a congestion term plus a relative-utility
//! comparison against the rest of the population.
//!
//! An agent picking activity level `x` against an opponent at `y` earns
//!
//! ```text
//! f(x, y) = -(1/(x(1-x)))^gamma - alpha * exp(-beta (x - y))
//! ```
//!
//! The first term penalizes both idle and saturated operation and is
//! singular at the boundary; the second penalizes falling behind the rest
//! of the population. Against a population density `mu` the expected
//! payoff is `phi(x) = integral of f(x, y) mu(dy)`, and since `y` enters
//! only through `exp(beta y)`, the whole profile factorizes through the
//! scalar
//!
//! ```text
//! C = integral of exp(beta y) mu(dy)     (1 <= C <= e^beta)
//! ```
//!
//! so a profile costs O(n) to evaluate:
//! `phi(x) = -(x(1-x))^(-gamma) - alpha e^(-beta x) C`.
//!
//! Anything that produces a per-cell profile can stand in for this model
//! through [`PayoffModel`]; this crate ships only the kernel above.

use crate::error::{Error, Result};
use crate::grid::{ActionGrid, Density};

/// Strictly positive parameters `(alpha, beta, gamma)` of the payoff kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PayoffParams {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

impl PayoffParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        for (name, value) in [("alpha", alpha), ("beta", beta), ("gamma", gamma)] {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    requirement: "a finite value > 0",
                });
            }
        }
        Ok(Self { alpha, beta, gamma })
    }

    #[must_use]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    #[must_use]
    pub fn beta(&self) -> f64 {
        self.beta
    }

    #[must_use]
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// Pairwise payoff `f(x, y)`; `x` must be interior, `y` may sit anywhere on [0, 1].
pub fn kernel(x: f64, y: f64, params: &PayoffParams) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 || x >= 1.0 {
        return Err(Error::SingularAction { x });
    }
    let congestion = (x * (1.0 - x)).powf(-params.gamma);
    let relative = params.alpha * (-params.beta * (x - y)).exp();
    Ok(-congestion - relative)
}

/// Exponential moment `integral of exp(beta y) d(dy)` under the midpoint rule.
///
/// Lies in `[1, e^beta]` for `beta > 0` because cell centers are interior.
#[must_use]
pub fn exp_moment(d: &Density, beta: f64) -> f64 {
    let psi: Vec<f64> = d
        .grid()
        .centers()
        .iter()
        .map(|&y| (beta * y).exp())
        .collect();
    d.quadrature(&psi).expect("integrand matches the grid")
}

/// Expected payoff profile `phi(x_i; mu)` on a grid, together with the
/// exponential-moment constant it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffProfile {
    grid: ActionGrid,
    values: Vec<f64>,
    exp_moment: f64,
}

impl PayoffProfile {
    /// Wrap an externally generated profile. Values must be finite; sign
    /// conventions are the caller's business (the q > 1 response map
    /// rejects positive entries itself). Generators without a
    /// relative-utility term should pass `exp_moment = 1.0`.
    pub fn new(grid: &ActionGrid, values: Vec<f64>, exp_moment: f64) -> Result<Self> {
        if values.len() != grid.n_cells() {
            return Err(Error::LengthMismatch {
                expected: grid.n_cells(),
                actual: values.len(),
            });
        }
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index, value });
            }
        }
        Ok(Self {
            grid: grid.clone(),
            values,
            exp_moment,
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

    #[must_use]
    pub fn exp_moment(&self) -> f64 {
        self.exp_moment
    }
}

/// Anything that turns a population density into a per-cell payoff profile.
pub trait PayoffModel {
    fn profile(&self, d: &Density) -> Result<PayoffProfile>;
}

/// Expected fishing-tourism payoff against `d`, evaluated in O(n) through
/// the exponential-moment constant.
#[must_use]
pub fn expected_payoff(d: &Density, params: &PayoffParams) -> PayoffProfile {
    let c = exp_moment(d, params.beta);
    let values = d
        .grid()
        .centers()
        .iter()
        .map(|&x| {
            -(x * (1.0 - x)).powf(-params.gamma) - params.alpha * (-params.beta * x).exp() * c
        })
        .collect();
    PayoffProfile {
        grid: d.grid().clone(),
        values,
        exp_moment: c,
    }
}

impl PayoffModel for PayoffParams {
    fn profile(&self, d: &Density) -> Result<PayoffProfile> {
        Ok(expected_payoff(d, self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid(n: usize) -> ActionGrid {
        ActionGrid::new(n).unwrap()
    }

    fn unit_params() -> PayoffParams {
        PayoffParams::new(1.0, 1.0, 1.0).unwrap()
    }

    /// O(n^2) reference: integrate the kernel row by row, no factorization.
    fn double_loop_profile(d: &Density, params: &PayoffParams) -> Vec<f64> {
        let g = d.grid();
        g.centers()
            .iter()
            .map(|&x| {
                let rows: Vec<f64> = g
                    .centers()
                    .iter()
                    .zip(d.values())
                    .map(|(&y, &p)| kernel(x, y, params).unwrap() * p)
                    .collect();
                g.cell_width() * rows.iter().sum::<f64>()
            })
            .collect()
    }

    #[test]
    fn params_must_be_positive() {
        assert!(PayoffParams::new(0.0, 1.0, 1.0).is_err());
        assert!(PayoffParams::new(1.0, -2.0, 1.0).is_err());
        assert!(PayoffParams::new(1.0, 1.0, f64::NAN).is_err());
        assert!(PayoffParams::new(1.0, 1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn kernel_reference_values() {
        let p = unit_params();
        // x = y = 1/2: congestion 4, relative 1
        assert_eq!(kernel(0.5, 0.5, &p).unwrap(), -5.0);
        let v = kernel(0.5, 0.25, &p).unwrap();
        assert!((v - (-4.0 - (-0.25f64).exp())).abs() < 1e-15);
        let sharp = PayoffParams::new(1.0, 1.0, 2.0).unwrap();
        assert_eq!(kernel(0.5, 0.5, &sharp).unwrap(), -17.0);
    }

    #[test]
    fn kernel_rejects_boundary_actions() {
        let p = unit_params();
        assert!(matches!(
            kernel(0.0, 0.5, &p),
            Err(Error::SingularAction { .. })
        ));
        assert!(matches!(
            kernel(1.0, 0.5, &p),
            Err(Error::SingularAction { .. })
        ));
    }

    #[test]
    fn exp_moment_of_uniform_matches_analytic_value() {
        let d = Density::uniform(&grid(200));
        let exact = std::f64::consts::E - 1.0;
        assert!((exp_moment(&d, 1.0) - exact).abs() < 1e-4);
    }

    #[test]
    fn exp_moment_of_edge_peaks_approaches_the_bounds() {
        let g = grid(200);
        let low = exp_moment(&Density::peak_at(&g, 0.0), 1.0);
        let high = exp_moment(&Density::peak_at(&g, 1.0), 1.0);
        assert!((1.0..1.01).contains(&low));
        assert!(high <= std::f64::consts::E && high > std::f64::consts::E * 0.99);
    }

    #[test]
    fn profile_at_midpoint_cell_matches_closed_form() {
        // phi(1/2) = -4 - e^(-1/2)(e - 1) ~ -5.0422; the nearest cell
        // center sits h/2 away, so allow the resulting offset
        let g = grid(200);
        let d = Density::uniform(&g);
        let profile = expected_payoff(&d, &unit_params());
        let i = g.cell_index_of(0.5);
        let expect = -4.0 - (-0.5f64).exp() * (std::f64::consts::E - 1.0);
        assert!(
            (profile.values()[i] - expect).abs() < 5e-3,
            "phi at cell {} = {}",
            i,
            profile.values()[i]
        );
    }

    #[test]
    fn factorized_profile_matches_double_loop() {
        let g = grid(50);
        let params = PayoffParams::new(0.7, 1.3, 1.1).unwrap();
        let raw: Vec<f64> = (0..50)
            .map(|i| 1.0 + ((i * 37 % 17) as f64) / 5.0)
            .collect();
        for d in [
            Density::uniform(&g),
            Density::from_weights(&g, &raw).unwrap(),
        ] {
            let fast = expected_payoff(&d, &params);
            let slow = double_loop_profile(&d, &params);
            for (a, b) in fast.values().iter().zip(&slow) {
                assert!(
                    (a - b).abs() <= 1e-12 * b.abs(),
                    "factorized {a} vs double loop {b}"
                );
            }
        }
    }

    #[test]
    fn concentrated_population_cancels_the_exponential() {
        // all mass in the cell containing x: relative term collapses to -alpha
        let g = grid(200);
        let params = unit_params();
        let i = 57;
        let x = g.center(i);
        let d = Density::peak_at(&g, x);
        let profile = expected_payoff(&d, &params);
        let expect = -(x * (1.0 - x)).powf(-1.0) - 1.0;
        assert!((profile.values()[i] - expect).abs() < 1e-12);
    }

    #[test]
    fn profile_wrapper_validates() {
        let g = grid(4);
        assert!(PayoffProfile::new(&g, vec![-1.0; 3], 1.0).is_err());
        assert!(PayoffProfile::new(&g, vec![-1.0, f64::NAN, -1.0, -1.0], 1.0).is_err());
        assert!(PayoffProfile::new(&g, vec![-1.0; 4], 1.0).is_ok());
    }

    fn density_strategy(n: usize) -> impl Strategy<Value = Density> {
        prop::collection::vec(0.0f64..10.0, n).prop_map(move |mut raw| {
            if raw.iter().all(|&w| w == 0.0) {
                raw[0] = 1.0;
            }
            Density::from_weights(&grid(n), &raw).unwrap()
        })
    }

    proptest! {
        #[test]
        fn profiles_are_strictly_negative(
            d in density_strategy(48),
            alpha in 0.1f64..5.0,
            beta in 0.1f64..5.0,
            gamma in 0.1f64..5.0,
        ) {
            let params = PayoffParams::new(alpha, beta, gamma).unwrap();
            let profile = expected_payoff(&d, &params);
            prop_assert!(profile.values().iter().all(|&v| v < 0.0));
        }

        #[test]
        fn exp_moment_stays_in_bounds(d in density_strategy(48), beta in 0.1f64..5.0) {
            let c = exp_moment(&d, beta);
            prop_assert!(c >= 1.0 - 1e-12);
            prop_assert!(c <= beta.exp() + 1e-12);
        }

        #[test]
        fn profile_depends_on_the_density_only_through_the_moment(
            i in 0usize..20,
            k in 28usize..48,
            t in 0.05f64..0.95,
        ) {
            // two different two-cell densities built to share the same
            // exponential moment must produce identical profiles
            let g = grid(48);
            let beta = 1.0;
            let params = PayoffParams::new(0.8, beta, 1.2).unwrap();
            let (xi, xk) = (g.center(i), g.center(k));
            let (ei, ek) = ((beta * xi).exp(), (beta * xk).exp());
            let c = ei + t * (ek - ei);

            let pair = |a: usize, b: usize| -> Option<Density> {
                let (ea, eb) = ((beta * g.center(a)).exp(), (beta * g.center(b)).exp());
                let wa = (eb - c) / (eb - ea);
                if !(0.0..=1.0).contains(&wa) {
                    return None;
                }
                let mut raw = vec![0.0; 48];
                raw[a] = wa / g.cell_width();
                raw[b] = (1.0 - wa) / g.cell_width();
                Some(Density::from_values(&g, raw).unwrap())
            };

            let d1 = pair(i, k).unwrap();
            // a different support pair bracketing the same moment
            if let Some(d2) = pair(i + 2, k - 2) {
                let p1 = expected_payoff(&d1, &params);
                let p2 = expected_payoff(&d2, &params);
                prop_assert!((p1.exp_moment() - p2.exp_moment()).abs() < 1e-12);
                for (a, b) in p1.values().iter().zip(p2.values()) {
                    prop_assert!((a - b).abs() < 1e-10 * b.abs());
                }
            }
        }
    }
}
