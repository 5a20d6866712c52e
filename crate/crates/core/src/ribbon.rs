//! Ribbon state: the base curve, the twist angle `psi(sigma)` locating the
//! plane vector `nu` in the normal plane, and the width profile `f` that
//! places the neighboring curve at `x + f e2`.

use crate::curve::{
    sigma_of_s, torsion_from_geodesic, CurveShape, EmbeddedCurve, Frame, SigmaSamples, Vec3,
};
use crate::error::{Error, Result};
use crate::numeric::{derivative, interp_uniform};

/// Minimum distance of `psi` from a multiple of pi wherever a `cot psi` or
/// `csc psi` term carries a nonzero coefficient.
pub const PSI_GUARD: f64 = 1e-3;

/// Twist angle at fixed evolution parameter, stored unwrapped.
pub type PsiField1D = SigmaSamples;

/// Width `f(sigma) > 0` of the ribbon.
#[derive(Debug, Clone, PartialEq)]
pub enum WidthProfile {
    Constant(f64),
    /// `values[i]` holds on `(breakpoints[i-1], breakpoints[i]]`; the first
    /// segment starts at zero and the last value continues past the final
    /// breakpoint. A breakpoint node belongs to the segment on its left.
    Piecewise {
        breakpoints: Vec<f64>,
        values: Vec<f64>,
    },
    Sampled(SigmaSamples),
}

impl WidthProfile {
    pub fn constant(f0: f64) -> Result<Self> {
        let w = WidthProfile::Constant(f0);
        w.validate()?;
        Ok(w)
    }

    pub fn piecewise(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let w = WidthProfile::Piecewise { breakpoints, values };
        w.validate()?;
        Ok(w)
    }

    pub fn sampled(samples: SigmaSamples) -> Result<Self> {
        let w = WidthProfile::Sampled(samples);
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: &f64| v.is_finite() && *v > 0.0;
        match self {
            WidthProfile::Constant(f0) => {
                if !positive(f0) {
                    return Err(Error::InvalidWidth(format!("f = {f0} must be positive")));
                }
            }
            WidthProfile::Piecewise { breakpoints, values } => {
                if values.is_empty() || values.len() != breakpoints.len() {
                    return Err(Error::InvalidWidth(format!(
                        "{} breakpoints for {} segment values",
                        breakpoints.len(),
                        values.len()
                    )));
                }
                if let Some(v) = values.iter().find(|v| !positive(v)) {
                    return Err(Error::InvalidWidth(format!("f = {v} must be positive")));
                }
                if !breakpoints.iter().all(|b| b.is_finite() && *b > 0.0)
                    || breakpoints.windows(2).any(|w| w[1] <= w[0])
                {
                    return Err(Error::InvalidWidth(
                        "breakpoints must be positive and strictly increasing".into(),
                    ));
                }
            }
            WidthProfile::Sampled(s) => {
                if s.len() < 2 || !(s.d_sigma > 0.0) {
                    return Err(Error::InvalidWidth("sampled width needs 2+ nodes".into()));
                }
                if let Some(v) = s.values.iter().find(|v| !positive(v)) {
                    return Err(Error::InvalidWidth(format!("f = {v} must be positive")));
                }
            }
        }
        Ok(())
    }

    /// True when `f_sigma` is identically zero, so the cot and csc terms
    /// vanish and the twist equation reduces to sine-Gordon.
    pub fn is_derivative_free(&self) -> bool {
        !matches!(self, WidthProfile::Sampled(_))
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, WidthProfile::Constant(_))
    }

    pub fn value(&self, sigma: f64) -> f64 {
        match self {
            WidthProfile::Constant(f0) => *f0,
            WidthProfile::Piecewise { breakpoints, values } => {
                let idx = breakpoints.partition_point(|&b| b < sigma);
                values[idx.min(values.len() - 1)]
            }
            WidthProfile::Sampled(s) => s.at(sigma),
        }
    }

    pub fn max_value(&self) -> f64 {
        match self {
            WidthProfile::Constant(f0) => *f0,
            WidthProfile::Piecewise { values, .. } => values.iter().copied().fold(0.0, f64::max),
            WidthProfile::Sampled(s) => s.values.iter().copied().fold(0.0, f64::max),
        }
    }

    /// Values at the `n` nodes `i * d_sigma`.
    pub fn values_on(&self, n: usize, d_sigma: f64) -> Vec<f64> {
        match self {
            WidthProfile::Sampled(s) if s.len() == n && s.d_sigma == d_sigma => s.values.clone(),
            WidthProfile::Sampled(s) => (0..n)
                .map(|i| interp_uniform(&s.values, s.d_sigma, i as f64 * d_sigma))
                .collect(),
            _ => (0..n).map(|i| self.value(i as f64 * d_sigma)).collect(),
        }
    }

    /// `f_sigma` at the `n` nodes `i * d_sigma`. Zero inside constant and
    /// piecewise-constant profiles; never differentiated across a joint.
    pub fn derivatives_on(&self, n: usize, d_sigma: f64) -> Vec<f64> {
        if self.is_derivative_free() {
            vec![0.0; n]
        } else {
            derivative(&self.values_on(n, d_sigma), d_sigma)
        }
    }
}

/// `cos psi e2 + sin psi e3`.
pub fn nu_vector(frame: &Frame, psi: f64) -> Vec3 {
    let (s, c) = psi.sin_cos();
    frame.e2 * c + frame.e3 * s
}

/// Points `x_i + f(sigma_i) e2_i`.
pub fn neighboring_curve(curve: &EmbeddedCurve, width: &WidthProfile) -> Vec<Vec3> {
    curve
        .frames()
        .iter()
        .zip(curve.sigma())
        .map(|(fr, &s)| fr.position + fr.e2 * width.value(s))
        .collect()
}

fn guard(psi: f64, index: usize) -> Result<()> {
    let offset = psi - std::f64::consts::PI * (psi / std::f64::consts::PI).round();
    if !(offset.abs() >= PSI_GUARD) {
        return Err(Error::Singularity { index, psi });
    }
    Ok(())
}

/// Geodesic curvature `k = -psi_sigma + (f_sigma / f) cot psi`.
pub fn k_from_psi(psi: &PsiField1D, width: &WidthProfile) -> Result<SigmaSamples> {
    let d = psi.d_sigma;
    let dpsi = derivative(&psi.values, d);
    if width.is_derivative_free() {
        return Ok(SigmaSamples::new(d, dpsi.into_iter().map(|p| -p).collect()));
    }
    let n = psi.len();
    let f = width.values_on(n, d);
    let df = width.derivatives_on(n, d);
    let values = (0..n)
        .map(|i| {
            if df[i] == 0.0 {
                return Ok(-dpsi[i]);
            }
            guard(psi.values[i], i)?;
            Ok(-dpsi[i] + df[i] / f[i] / psi.values[i].tan())
        })
        .collect::<Result<_>>()?;
    Ok(SigmaSamples::new(d, values))
}

/// The frame-rotation coefficient `v = f_sigma csc psi`.
pub fn v_from_psi(psi: &PsiField1D, width: &WidthProfile) -> Result<SigmaSamples> {
    let n = psi.len();
    let d = psi.d_sigma;
    if width.is_derivative_free() {
        return Ok(SigmaSamples::new(d, vec![0.0; n]));
    }
    let df = width.derivatives_on(n, d);
    let values = (0..n)
        .map(|i| {
            if df[i] == 0.0 {
                return Ok(0.0);
            }
            guard(psi.values[i], i)?;
            Ok(df[i] / psi.values[i].sin())
        })
        .collect::<Result<_>>()?;
    Ok(SigmaSamples::new(d, values))
}

/// Inverts `k = -psi_sigma` for constant width: `psi = psi0 - int_0^sigma k`.
pub fn psi_from_k(k: &SigmaSamples, psi0: f64, width: &WidthProfile) -> Result<PsiField1D> {
    if !width.is_constant() {
        return Err(Error::InvalidWidth(
            "psi can only be recovered from k for constant width".into(),
        ));
    }
    let integral = crate::numeric::cumulative_trapezoid(&k.values, k.d_sigma);
    Ok(SigmaSamples::new(
        k.d_sigma,
        integral.into_iter().map(|v| psi0 - v).collect(),
    ))
}

/// Torsion at the shape's arclength nodes implied by a twist field:
/// `tau = kappa * k(psi)`.
pub fn torsion_for_psi(
    shape: &CurveShape,
    psi: &PsiField1D,
    width: &WidthProfile,
) -> Result<Vec<f64>> {
    let k = k_from_psi(psi, width)?;
    Ok(torsion_from_geodesic(shape, &k))
}

/// Base curve shape, twist field and width at one value of the evolution
/// parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct Ribbon {
    shape: CurveShape,
    psi: PsiField1D,
    width: WidthProfile,
}

impl Ribbon {
    pub fn new(shape: CurveShape, psi: PsiField1D, width: WidthProfile) -> Result<Self> {
        width.validate()?;
        let total = sigma_of_s(&shape).total;
        if psi.len() < 2 || (psi.extent() - total).abs() > 1e-9 * total.max(1.0) {
            return Err(Error::InvalidShape(format!(
                "psi grid spans {} but the shape's indicatrix has length {total}",
                psi.extent()
            )));
        }
        if psi.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidShape("psi has non-finite samples".into()));
        }
        Ok(Self { shape, psi, width })
    }

    /// Keeps the curvature of `shape` and replaces its torsion with the one
    /// implied by `psi`, so the ribbon is geometrically consistent.
    pub fn consistent(shape: &CurveShape, psi: PsiField1D, width: WidthProfile) -> Result<Self> {
        let tau = torsion_for_psi(shape, &psi, &width)?;
        Self::new(shape.with_tau(tau)?, psi, width)
    }

    pub fn shape(&self) -> &CurveShape {
        &self.shape
    }

    pub fn psi(&self) -> &PsiField1D {
        &self.psi
    }

    pub fn width(&self) -> &WidthProfile {
        &self.width
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, PI, TAU};

    use super::*;
    use crate::curve::{integrate_frenet, ArcGrid};

    fn close(a: &[f64], b: impl Fn(usize) -> f64, tol: f64) {
        for (i, v) in a.iter().enumerate() {
            assert!((v - b(i)).abs() <= tol, "node {i}: {v} vs {}", b(i));
        }
    }

    #[test]
    fn nu_rotates_within_the_normal_plane() {
        let fr = Frame::canonical();
        assert!((nu_vector(&fr, 0.0) - fr.e2).norm() < 1e-15);
        assert!((nu_vector(&fr, FRAC_PI_2) - fr.e3).norm() < 1e-15);
        assert!((nu_vector(&fr, PI) + fr.e2).norm() < 1e-15);
    }

    #[test]
    fn width_rejects_non_positive_values() {
        assert!(WidthProfile::constant(0.0).is_err());
        assert!(WidthProfile::constant(-1.0).is_err());
        assert!(WidthProfile::piecewise(vec![1.0, 0.5], vec![1.0, 2.0]).is_err());
        assert!(WidthProfile::piecewise(vec![1.0], vec![0.0]).is_err());
        assert!(WidthProfile::sampled(SigmaSamples::new(0.1, vec![1.0, -1.0])).is_err());
    }

    #[test]
    fn piecewise_breakpoint_belongs_to_left_segment() {
        let w = WidthProfile::piecewise(vec![2.0, 5.0], vec![1.0, 4.0]).unwrap();
        assert_eq!(w.value(0.0), 1.0);
        assert_eq!(w.value(2.0), 1.0);
        assert_eq!(w.value(2.0 + 1e-12), 4.0);
        assert_eq!(w.value(7.0), 4.0);
        assert!(w.derivatives_on(11, 0.5).iter().all(|d| *d == 0.0));
    }

    #[test]
    fn circle_offset_is_concentric() {
        let n = 100;
        let grid = ArcGrid::new(n, TAU / (n - 1) as f64).unwrap();
        let curve =
            integrate_frenet(&CurveShape::constant(grid, 1.0, 0.0).unwrap(), &Frame::canonical())
                .unwrap();
        let pts = neighboring_curve(&curve, &WidthProfile::constant(0.1).unwrap());
        let center = Vec3::new(0.0, 1.0, 0.0);
        for p in pts {
            assert!(((p - center).norm() - 0.9).abs() < 1e-12);
        }
    }

    #[test]
    fn helix_offset_sits_at_width_distance() {
        let grid = ArcGrid::new(200, 0.02).unwrap();
        let curve =
            integrate_frenet(&CurveShape::constant(grid, 1.0, 1.0).unwrap(), &Frame::canonical())
                .unwrap();
        let pts = neighboring_curve(&curve, &WidthProfile::constant(0.05).unwrap());
        for (p, fr) in pts.iter().zip(curve.frames()) {
            assert!(((p - fr.position).norm() - 0.05).abs() < 1e-14);
        }
    }

    #[test]
    fn k_for_constant_width_is_minus_psi_slope() {
        let w = WidthProfile::constant(1.0).unwrap();
        let flat = SigmaSamples::from_fn(2.0, 21, |_| 0.7);
        close(&k_from_psi(&flat, &w).unwrap().values, |_| 0.0, 1e-12);
        let ramp = SigmaSamples::from_fn(2.0, 21, |s| 0.3 * s);
        close(&k_from_psi(&ramp, &w).unwrap().values, |_| -0.3, 1e-12);
        // Constant width never evaluates cot, even at psi = 0.
        let zero = SigmaSamples::from_fn(2.0, 21, |_| 0.0);
        assert!(k_from_psi(&zero, &w).is_ok());
    }

    #[test]
    fn exponential_width_terms() {
        let w = WidthProfile::sampled(SigmaSamples::from_fn(1.0, 401, f64::exp)).unwrap();
        let half_pi = SigmaSamples::from_fn(1.0, 401, |_| FRAC_PI_2);
        close(&k_from_psi(&half_pi, &w).unwrap().values, |_| 0.0, 1e-12);
        let v = v_from_psi(&half_pi, &w).unwrap();
        close(&v.values, |i| (i as f64 / 400.0).exp(), 1e-4);
        let sixth = SigmaSamples::from_fn(1.0, 401, |_| FRAC_PI_6);
        let v = v_from_psi(&sixth, &w).unwrap();
        close(&v.values, |i| 2.0 * (i as f64 / 400.0).exp(), 2e-4);
        assert!(v_from_psi(&half_pi, &WidthProfile::Constant(2.0))
            .unwrap()
            .values
            .iter()
            .all(|v| *v == 0.0));
    }

    #[test]
    fn guard_trips_near_multiples_of_pi() {
        let w = WidthProfile::sampled(SigmaSamples::from_fn(1.0, 11, |s| 1.0 + s)).unwrap();
        let psi = SigmaSamples::from_fn(1.0, 11, |_| PI + 1e-4);
        assert!(matches!(k_from_psi(&psi, &w), Err(Error::Singularity { .. })));
        assert!(matches!(v_from_psi(&psi, &w), Err(Error::Singularity { .. })));
    }

    #[test]
    fn psi_from_k_integrates() {
        let w = WidthProfile::constant(1.0).unwrap();
        let psi = psi_from_k(&SigmaSamples::from_fn(2.0, 11, |_| 0.0), 1.0, &w).unwrap();
        assert!(psi.values.iter().all(|p| *p == 1.0));
        let psi = psi_from_k(&SigmaSamples::from_fn(2.0, 11, |_| 0.5), 0.0, &w).unwrap();
        assert!((psi.values[10] + 1.0).abs() < 1e-14);
        let pw = WidthProfile::piecewise(vec![1.0], vec![1.0]).unwrap();
        assert!(psi_from_k(&SigmaSamples::from_fn(2.0, 11, |_| 0.0), 0.0, &pw).is_err());
    }

    #[test]
    fn psi_round_trip_is_second_order() {
        let w = WidthProfile::constant(1.0).unwrap();
        let err = |n: usize| {
            let psi = SigmaSamples::from_fn(3.0, n, |s| 0.4 + (1.3 * s).sin());
            let back = psi_from_k(&k_from_psi(&psi, &w).unwrap(), psi.values[0], &w).unwrap();
            back.values
                .iter()
                .zip(&psi.values)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (err(101), err(201));
        assert!(e1 < 1e-3);
        assert!(e1 / e2 > 3.0, "{e1:e} -> {e2:e}");
    }

    #[test]
    fn torsion_is_geodesic_curvature_times_curvature() {
        let grid = ArcGrid::spanning(2.0, 81).unwrap();
        let shape = CurveShape::from_fn(grid, |s| (1.0 + 0.5 * s, 0.0)).unwrap();
        let total = sigma_of_s(&shape).total;
        let psi = SigmaSamples::from_fn(total, 81, |s| (2.0 * s).cos());
        let w = WidthProfile::constant(0.5).unwrap();
        let tau = torsion_for_psi(&shape, &psi, &w).unwrap();
        let k = k_from_psi(&psi, &w).unwrap();
        let sg = sigma_of_s(&shape);
        for i in 0..81 {
            assert!((tau[i] - k.at(sg.sigma[i]) * shape.kappa()[i]).abs() <= 1e-12);
        }
    }

    #[test]
    fn ribbon_checks_psi_grid_extent() {
        let shape = CurveShape::constant(ArcGrid::spanning(2.0, 21).unwrap(), 1.5, 0.0).unwrap();
        let w = WidthProfile::constant(1.0).unwrap();
        assert!(Ribbon::new(shape.clone(), SigmaSamples::from_fn(3.0, 21, |_| 1.0), w.clone()).is_ok());
        assert!(Ribbon::new(shape, SigmaSamples::from_fn(2.0, 21, |_| 1.0), w).is_err());
    }
}
