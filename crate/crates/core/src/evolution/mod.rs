//! Evolution of the twist field and the base curve it shapes.
//!
//! The unknown `psi(sigma, u)` lives on `[0, K] x [0, U]`. The lines
//! `sigma = const` and `u = const` are characteristics of the twist
//! equation, so data is prescribed on `u = 0` and `sigma = 0` and the
//! interior is filled cell by cell.

mod direct;
mod solver;
mod time;
mod trajectory;

pub use direct::{evolve_frames_direct, tangent_geodesic_curvature, DirectFrames};
pub use solver::{pde_residual, solve_general_pde, solve_sine_gordon, MAX_FIXED_POINT_ITERS};
pub use time::{time_reparameterize, TimeMap};
pub use trajectory::{
    run_until_contact, shape_trajectory, ContactEvent, FieldSource, ParamAxis, RunOutcome,
    ShapeTrajectory, TrajectorySlice,
};

use crate::error::{Error, Result};
use crate::ribbon::PsiField1D;
use crate::soliton::{AntikinkParams, PiecewiseAntikink};

/// Upper bound on `d_sigma * d_u * max(f)`; keeps the per-cell fixed-point
/// map a contraction.
pub const CONTRACTION_BOUND: f64 = 0.5;

/// Corner mismatches up to this size are repaired by averaging.
pub const CORNER_REPAIR_TOL: f64 = 1e-9;

/// Uniform grid on `[0, K] x [0, U]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicGrid {
    k_extent: f64,
    u_extent: f64,
    n_sigma: usize,
    n_u: usize,
}

impl CharacteristicGrid {
    pub fn new(k_extent: f64, u_extent: f64, n_sigma: usize, n_u: usize) -> Result<Self> {
        if !(k_extent.is_finite() && k_extent > 0.0 && u_extent.is_finite() && u_extent > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "extents must be positive and finite, got K = {k_extent}, U = {u_extent}"
            )));
        }
        if n_sigma < 2 || n_u < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 nodes per axis, got {n_sigma} x {n_u}"
            )));
        }
        Ok(Self {
            k_extent,
            u_extent,
            n_sigma,
            n_u,
        })
    }

    pub fn k_extent(&self) -> f64 {
        self.k_extent
    }

    pub fn u_extent(&self) -> f64 {
        self.u_extent
    }

    pub fn n_sigma(&self) -> usize {
        self.n_sigma
    }

    pub fn n_u(&self) -> usize {
        self.n_u
    }

    pub fn d_sigma(&self) -> f64 {
        self.k_extent / (self.n_sigma - 1) as f64
    }

    pub fn d_u(&self) -> f64 {
        self.u_extent / (self.n_u - 1) as f64
    }

    pub fn sigma(&self, i: usize) -> f64 {
        i as f64 * self.d_sigma()
    }

    pub fn u(&self, j: usize) -> f64 {
        j as f64 * self.d_u()
    }

    /// Rejects grids where `d_sigma * d_u * max_f` exceeds
    /// [`CONTRACTION_BOUND`].
    pub fn check_contraction(&self, max_f: f64) -> Result<()> {
        let product = self.d_sigma() * self.d_u() * max_f;
        if !(product <= CONTRACTION_BOUND) {
            return Err(Error::InvalidGrid(format!(
                "contraction bound violated: d_sigma * d_u * max(f) = {product} > {CONTRACTION_BOUND}"
            )));
        }
        Ok(())
    }
}

/// Twist values on the characteristic lines `u = 0` (bottom) and
/// `sigma = 0` (left).
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData {
    bottom: Vec<f64>,
    left: Vec<f64>,
}

impl BoundaryData {
    /// Validates corner compatibility; a mismatch within
    /// [`CORNER_REPAIR_TOL`] is replaced by the average on both lines.
    pub fn new(mut bottom: Vec<f64>, mut left: Vec<f64>) -> Result<Self> {
        if bottom.len() < 2 || left.len() < 2 {
            return Err(Error::InvalidBoundary("each line needs at least 2 samples".into()));
        }
        if bottom.iter().chain(&left).any(|v| !v.is_finite()) {
            return Err(Error::InvalidBoundary("non-finite boundary value".into()));
        }
        let mismatch = (bottom[0] - left[0]).abs();
        if mismatch > CORNER_REPAIR_TOL {
            return Err(Error::InvalidBoundary(format!(
                "corner values disagree: psi(0,0) = {} on u = 0 but {} on sigma = 0",
                bottom[0], left[0]
            )));
        }
        if mismatch > 0.0 {
            let avg = 0.5 * (bottom[0] + left[0]);
            bottom[0] = avg;
            left[0] = avg;
        }
        Ok(Self { bottom, left })
    }

    /// Samples `psi(sigma, u)` along both characteristic lines of `grid`.
    pub fn from_fn(grid: &CharacteristicGrid, psi: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let bottom = (0..grid.n_sigma()).map(|i| psi(grid.sigma(i), 0.0)).collect();
        let left = (0..grid.n_u()).map(|j| psi(0.0, grid.u(j))).collect();
        Self::new(bottom, left)
    }

    pub fn constant(grid: &CharacteristicGrid, psi0: f64) -> Result<Self> {
        Self::from_fn(grid, |_, _| psi0)
    }

    pub fn from_antikink(grid: &CharacteristicGrid, params: &AntikinkParams) -> Result<Self> {
        Self::from_fn(grid, |s, u| params.psi(s, u))
    }

    pub fn bottom(&self) -> &[f64] {
        &self.bottom
    }

    pub fn left(&self) -> &[f64] {
        &self.left
    }

    pub(crate) fn check_grid(&self, grid: &CharacteristicGrid) -> Result<()> {
        if self.bottom.len() != grid.n_sigma() || self.left.len() != grid.n_u() {
            return Err(Error::InvalidBoundary(format!(
                "boundary has {} x {} samples, grid has {} x {}",
                self.bottom.len(),
                self.left.len(),
                grid.n_sigma(),
                grid.n_u()
            )));
        }
        Ok(())
    }
}

/// `psi(sigma_i, u_j)` on the whole grid; stored with `u` slices contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiField2D {
    grid: CharacteristicGrid,
    values: Vec<f64>,
}

impl PsiField2D {
    pub fn from_values(grid: CharacteristicGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_sigma() * grid.n_u() {
            return Err(Error::InvalidGrid(format!(
                "{} values for a {} x {} grid",
                values.len(),
                grid.n_sigma(),
                grid.n_u()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: CharacteristicGrid, psi: impl Fn(f64, f64) -> f64) -> Self {
        let values = (0..grid.n_u())
            .flat_map(|j| (0..grid.n_sigma()).map(move |i| (i, j)))
            .map(|(i, j)| psi(grid.sigma(i), grid.u(j)))
            .collect();
        Self { grid, values }
    }

    pub fn from_antikink(grid: CharacteristicGrid, params: &AntikinkParams) -> Self {
        Self::from_fn(grid, |s, u| params.psi(s, u))
    }

    pub fn from_piecewise(grid: CharacteristicGrid, pw: &PiecewiseAntikink) -> Self {
        Self::from_fn(grid, |s, u| pw.psi(s, u))
    }

    pub fn grid(&self) -> &CharacteristicGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.grid.n_sigma() + i]
    }

    pub fn row(&self, j: usize) -> &[f64] {
        let n = self.grid.n_sigma();
        &self.values[j * n..(j + 1) * n]
    }

    /// The twist profile at `u = u_j`.
    pub fn slice(&self, j: usize) -> PsiField1D {
        PsiField1D::new(self.grid.d_sigma(), self.row(j).to_vec())
    }

    pub fn bottom(&self) -> Vec<f64> {
        self.row(0).to_vec()
    }

    pub fn left(&self) -> Vec<f64> {
        (0..self.grid.n_u()).map(|j| self.at(0, j)).collect()
    }

    /// Largest nodewise difference to another field on the same grid.
    pub fn max_abs_diff(&self, other: &PsiField2D) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validates_and_reports_steps() {
        let g = CharacteristicGrid::new(10.0, 5.0, 11, 6).unwrap();
        assert_eq!(g.d_sigma(), 1.0);
        assert_eq!(g.d_u(), 1.0);
        assert!(CharacteristicGrid::new(0.0, 1.0, 3, 3).is_err());
        assert!(CharacteristicGrid::new(1.0, 1.0, 1, 3).is_err());
        assert!(g.check_contraction(0.5).is_ok());
        let err = g.check_contraction(0.6).unwrap_err().to_string();
        assert!(err.contains("contraction bound"), "{err}");
    }

    #[test]
    fn corner_mismatch_is_repaired_or_rejected() {
        let b = BoundaryData::new(vec![1.0, 2.0], vec![1.0 + 5e-10, 3.0]).unwrap();
        assert_eq!(b.bottom()[0], b.left()[0]);
        assert!((b.bottom()[0] - (1.0 + 2.5e-10)).abs() < 1e-15);
        assert!(BoundaryData::new(vec![1.0, 2.0], vec![1.1, 3.0]).is_err());
    }
}
