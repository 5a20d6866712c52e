use super::{solve_general_pde, BoundaryData, CharacteristicGrid, PsiField2D};
use crate::curve::{integrate_frenet, self_contact, sigma_of_s, Contact, CurveShape, EmbeddedCurve, Frame};
use crate::error::{Error, Result};
use crate::ribbon::{torsion_for_psi, PsiField1D, WidthProfile};
use crate::soliton::{AntikinkParams, PiecewiseAntikink};

/// Which parameter labels the slices of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamAxis {
    U,
    Time,
}

impl ParamAxis {
    pub fn label(&self) -> &'static str {
        match self {
            ParamAxis::U => "u",
            ParamAxis::Time => "t",
        }
    }
}

/// One evolution slice: twist profile, the shape it implies, and the
/// rebuilt curve.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySlice {
    pub param: f64,
    pub psi: PsiField1D,
    pub shape: CurveShape,
    pub curve: EmbeddedCurve,
}

/// Shapes over increasing evolution parameter. Every slice shares the
/// curvature array and arclength grid of `base`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeTrajectory {
    pub axis: ParamAxis,
    pub base: CurveShape,
    pub width: WidthProfile,
    pub slices: Vec<TrajectorySlice>,
}

impl ShapeTrajectory {
    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }
}

pub(super) fn build_slice(
    base: &CurveShape,
    psi: PsiField1D,
    width: &WidthProfile,
    param: f64,
) -> Result<TrajectorySlice> {
    let tau = torsion_for_psi(base, &psi, width)?;
    let shape = base.with_tau(tau)?;
    let curve = integrate_frenet(&shape, &Frame::canonical())?;
    Ok(TrajectorySlice {
        param,
        psi,
        shape,
        curve,
    })
}

fn check_extent(shape: &CurveShape, grid: &CharacteristicGrid) -> Result<()> {
    let total = sigma_of_s(shape).total;
    if (grid.k_extent() - total).abs() > 1e-9 * total.max(1.0) {
        return Err(Error::InvalidGrid(format!(
            "grid spans sigma in [0, {}] but the shape's indicatrix has length {total}",
            grid.k_extent()
        )));
    }
    Ok(())
}

/// Rebuilds the base curve at every `u` slice of the field: torsion from
/// `kappa * k(psi)`, curvature fixed, reconstruction from the canonical
/// frame.
pub fn shape_trajectory(
    shape0: &CurveShape,
    psi: &PsiField2D,
    width: &WidthProfile,
) -> Result<ShapeTrajectory> {
    let grid = psi.grid();
    check_extent(shape0, grid)?;
    let slices = (0..grid.n_u())
        .map(|j| build_slice(shape0, psi.slice(j), width, grid.u(j)))
        .collect::<Result<_>>()?;
    Ok(ShapeTrajectory {
        axis: ParamAxis::U,
        base: shape0.clone(),
        width: width.clone(),
        slices,
    })
}

/// Where the twist field comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldSource {
    /// Characteristic data, solved numerically.
    Boundary(BoundaryData),
    /// Closed-form antikink sampled on the grid.
    Antikink(AntikinkParams),
    /// Matched closed-form antikink over a piecewise width.
    Piecewise(PiecewiseAntikink),
}

impl FieldSource {
    pub fn field(&self, grid: &CharacteristicGrid, width: &WidthProfile) -> Result<PsiField2D> {
        match self {
            FieldSource::Boundary(bd) => solve_general_pde(grid, width, bd),
            FieldSource::Antikink(p) => Ok(PsiField2D::from_antikink(*grid, p)),
            FieldSource::Piecewise(pw) => Ok(PsiField2D::from_piecewise(*grid, pw)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactEvent {
    pub slice: usize,
    pub u: f64,
    pub contact: Contact,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub field: PsiField2D,
    pub trajectory: ShapeTrajectory,
    pub contact: Option<ContactEvent>,
}

/// Evolves slice by slice in increasing `u` and stops at the first slice
/// whose curve touches itself. The contact slice is included.
pub fn run_until_contact(
    shape0: &CurveShape,
    width: &WidthProfile,
    source: &FieldSource,
    grid: &CharacteristicGrid,
    threshold: f64,
    exclusion: usize,
) -> Result<RunOutcome> {
    check_extent(shape0, grid)?;
    let field = source.field(grid, width)?;
    let mut slices = Vec::new();
    let mut contact = None;
    for j in 0..grid.n_u() {
        let slice = build_slice(shape0, field.slice(j), width, grid.u(j))?;
        let hit = self_contact(&slice.curve, threshold, exclusion);
        slices.push(slice);
        if let Some(c) = hit {
            contact = Some(ContactEvent {
                slice: j,
                u: grid.u(j),
                contact: c,
            });
            break;
        }
    }
    Ok(RunOutcome {
        field,
        trajectory: ShapeTrajectory {
            axis: ParamAxis::U,
            base: shape0.clone(),
            width: width.clone(),
            slices,
        },
        contact,
    })
}
