//! Characteristic-cell marching for the ribbon twist equation
//!
//! ```text
//! [psi_sigma - (f_sigma / f) cot psi]_u + [f_sigma csc psi]_sigma + f sin psi = 0
//! ```
//!
//! Integrating over one cell `[sigma_{i-1}, sigma_i] x [u_{j-1}, u_j]` gives
//! an implicit relation for the north-east corner in terms of the other
//! three. Edge integrals use the edge midpoint and the source term uses the
//! cell average, which is second order. With `f_sigma = 0` the relation is
//! the sine-Gordon cell rule
//!
//! ```text
//! psi_ij = psi_{i-1,j} + psi_{i,j-1} - psi_{i-1,j-1} - ds du f sin(psi_mid)
//! ```

use super::{BoundaryData, CharacteristicGrid, PsiField2D};
use crate::error::{Error, Result};
use crate::ribbon::{WidthProfile, PSI_GUARD};

pub const MAX_FIXED_POINT_ITERS: usize = 50;
const FIXED_POINT_TOL: f64 = 1e-12;

/// Width data resolved onto the sigma grid.
struct CellWidths {
    /// `f` used in the source term of cell `i` (between nodes `i-1` and `i`).
    cell_f: Vec<f64>,
    /// `ln f_i - ln f_{i-1}`; zero for derivative-free profiles.
    dlog: Vec<f64>,
    /// `f_sigma` at node `i`.
    node_df: Vec<f64>,
    derivative_free: bool,
}

impl CellWidths {
    fn new(width: &WidthProfile, grid: &CharacteristicGrid) -> Self {
        let n = grid.n_sigma();
        let d = grid.d_sigma();
        match width {
            WidthProfile::Sampled(_) => {
                let f = width.values_on(n, d);
                let mut cell_f = vec![0.0; n];
                let mut dlog = vec![0.0; n];
                for i in 1..n {
                    cell_f[i] = 0.5 * (f[i - 1] + f[i]);
                    dlog[i] = f[i].ln() - f[i - 1].ln();
                }
                Self {
                    cell_f,
                    dlog,
                    node_df: width.derivatives_on(n, d),
                    derivative_free: false,
                }
            }
            _ => {
                let cell_f = (0..n)
                    .map(|i| width.value((i as f64 - 0.5).max(0.0) * d))
                    .collect();
                Self {
                    cell_f,
                    dlog: vec![0.0; n],
                    node_df: vec![0.0; n],
                    derivative_free: true,
                }
            }
        }
    }

    /// Whether node `i` enters any cot or csc term with a nonzero weight.
    fn node_is_singular_prone(&self, i: usize) -> bool {
        if self.derivative_free {
            return false;
        }
        let n = self.dlog.len();
        self.node_df[i] != 0.0 || self.dlog[i] != 0.0 || (i + 1 < n && self.dlog[i + 1] != 0.0)
    }
}

fn guard(psi: f64, index: usize) -> Result<()> {
    let offset = psi - std::f64::consts::PI * (psi / std::f64::consts::PI).round();
    if !(offset.abs() >= PSI_GUARD) {
        return Err(Error::Singularity { index, psi });
    }
    Ok(())
}

fn cot(x: f64) -> f64 {
    x.cos() / x.sin()
}

fn csc(x: f64) -> f64 {
    1.0 / x.sin()
}

/// Solves `psi_{sigma u} = -f0 sin psi` from characteristic data.
pub fn solve_sine_gordon(
    grid: &CharacteristicGrid,
    f0: f64,
    boundary: &BoundaryData,
) -> Result<PsiField2D> {
    let width = WidthProfile::constant(f0)?;
    march(grid, &width, boundary)
}

/// Solves the general twist equation for any width profile. Constant and
/// piecewise-constant widths take the sine-Gordon cell rule exactly.
pub fn solve_general_pde(
    grid: &CharacteristicGrid,
    width: &WidthProfile,
    boundary: &BoundaryData,
) -> Result<PsiField2D> {
    width.validate()?;
    march(grid, width, boundary)
}

fn march(grid: &CharacteristicGrid, width: &WidthProfile, boundary: &BoundaryData) -> Result<PsiField2D> {
    boundary.check_grid(grid)?;
    grid.check_contraction(width.max_value())?;
    let widths = CellWidths::new(width, grid);
    let (ns, nu) = (grid.n_sigma(), grid.n_u());
    let (ds, du) = (grid.d_sigma(), grid.d_u());
    let area = ds * du;

    let mut psi = vec![0.0; ns * nu];
    psi[..ns].copy_from_slice(boundary.bottom());
    for j in 0..nu {
        psi[j * ns] = boundary.left()[j];
    }
    for (i, &v) in boundary.bottom().iter().enumerate() {
        if widths.node_is_singular_prone(i) {
            guard(v, i)?;
        }
    }
    if widths.node_is_singular_prone(0) {
        for &v in boundary.left() {
            guard(v, 0)?;
        }
    }

    for j in 1..nu {
        for i in 1..ns {
            let west = psi[j * ns + i - 1];
            let south = psi[(j - 1) * ns + i];
            let south_west = psi[(j - 1) * ns + i - 1];
            let base = west + south - south_west;
            let f_cell = widths.cell_f[i];
            let dlog = widths.dlog[i];
            let (df_east, df_west) = (widths.node_df[i], widths.node_df[i - 1]);

            let update = |x: f64| {
                let mut rhs = base;
                if !widths.derivative_free {
                    let mut extra = 0.0;
                    if dlog != 0.0 {
                        extra += dlog * (cot(0.5 * (x + west)) - cot(0.5 * (south + south_west)));
                    }
                    if df_east != 0.0 || df_west != 0.0 {
                        let east_flux = if df_east != 0.0 { df_east * csc(0.5 * (x + south)) } else { 0.0 };
                        let west_flux = if df_west != 0.0 {
                            df_west * csc(0.5 * (west + south_west))
                        } else {
                            0.0
                        };
                        extra -= du * (east_flux - west_flux);
                    }
                    rhs += extra;
                }
                rhs - area * f_cell * (0.25 * (x + west + south + south_west)).sin()
            };

            let mut x = base;
            let mut converged = false;
            for _ in 0..MAX_FIXED_POINT_ITERS {
                let next = update(x);
                let step = (next - x).abs();
                x = next;
                if step <= FIXED_POINT_TOL {
                    converged = true;
                    break;
                }
            }
            if !converged || !x.is_finite() {
                return Err(Error::NonConvergence {
                    sigma_index: i,
                    u_index: j,
                });
            }
            if widths.node_is_singular_prone(i) {
                guard(x, i)?;
            }
            psi[j * ns + i] = x;
        }
    }
    PsiField2D::from_values(*grid, psi)
}

/// Max over interior nodes of the twist-equation residual, measured with
/// centered differences independent of the cell rule.
///
/// Nodes whose stencil straddles a jump of a piecewise-constant width are
/// skipped, since `psi_sigma` is not continuous there.
pub fn pde_residual(field: &PsiField2D, width: &WidthProfile) -> f64 {
    let grid = field.grid();
    let (ns, nu) = (grid.n_sigma(), grid.n_u());
    if ns < 3 || nu < 3 {
        return 0.0;
    }
    let (ds, du) = (grid.d_sigma(), grid.d_u());
    let f = width.values_on(ns, ds);
    let df = width.derivatives_on(ns, ds);
    let smooth = !width.is_derivative_free();

    let q = |i: usize, j: usize| {
        let psi_s = (field.at(i + 1, j) - field.at(i - 1, j)) / (2.0 * ds);
        if smooth && df[i] != 0.0 {
            psi_s - df[i] / f[i] * cot(field.at(i, j))
        } else {
            psi_s
        }
    };
    let flux = |i: usize, j: usize| {
        if smooth && df[i] != 0.0 {
            df[i] * csc(field.at(i, j))
        } else {
            0.0
        }
    };

    let mut worst = 0.0_f64;
    for i in 1..ns - 1 {
        if matches!(width, WidthProfile::Piecewise { .. }) && f[i - 1] != f[i + 1] {
            continue;
        }
        for j in 1..nu - 1 {
            let mut r = (q(i, j + 1) - q(i, j - 1)) / (2.0 * du) + f[i] * field.at(i, j).sin();
            if smooth {
                r += (flux(i + 1, j) - flux(i - 1, j)) / (2.0 * ds);
            }
            worst = worst.max(r.abs());
        }
    }
    worst
}
