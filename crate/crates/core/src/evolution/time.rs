//! Time reparameterization. With a rate `gamma(t) > 0` the evolution
//! parameter is `u = g(t)`, `g' = gamma`, `g(0) = 0`; the shape at time `t`
//! is the shape at `u = g(t)`.

use super::trajectory::build_slice;
use super::{ParamAxis, ShapeTrajectory};
use crate::error::{Error, Result};
use crate::numeric::cumulative_trapezoid;
use crate::ribbon::PsiField1D;

/// `gamma` sampled on `t_m = m * dt` and its running integral `g`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeMap {
    dt: f64,
    gamma: Vec<f64>,
    g: Vec<f64>,
}

impl TimeMap {
    /// `gamma` must be positive for `t > 0`; `gamma(0) = 0` is allowed so
    /// that rates like `c t` qualify.
    pub fn from_samples(dt: f64, gamma: Vec<f64>) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) || gamma.len() < 2 {
            return Err(Error::OutOfRange("time map needs dt > 0 and 2+ samples".into()));
        }
        if !(gamma[0] >= 0.0) || gamma[1..].iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::OutOfRange("gamma must be positive for t > 0".into()));
        }
        let g = cumulative_trapezoid(&gamma, dt);
        Ok(Self { dt, gamma, g })
    }

    /// `gamma = c`, sampled at `n` times on `[0, t_max]`.
    pub fn constant(c: f64, t_max: f64, n: usize) -> Result<Self> {
        let dt = t_max / (n.max(2) - 1) as f64;
        Self::from_samples(dt, vec![c; n])
    }

    /// `gamma = c t`, sampled at `n` times on `[0, t_max]`.
    pub fn linear(c: f64, t_max: f64, n: usize) -> Result<Self> {
        let dt = t_max / (n.max(2) - 1) as f64;
        Self::from_samples(dt, (0..n).map(|m| c * m as f64 * dt).collect())
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g.is_empty()
    }

    pub fn time(&self, m: usize) -> f64 {
        m as f64 * self.dt
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn g(&self) -> &[f64] {
        &self.g
    }

    /// The leading samples with `g(t) <= u_last`, or `None` if fewer than
    /// two remain.
    pub fn truncated(&self, u_last: f64) -> Option<TimeMap> {
        let snap = 1e-12 * u_last.abs().max(1.0);
        let keep = self.g.partition_point(|&g| g <= u_last + snap);
        (keep >= 2).then(|| TimeMap {
            dt: self.dt,
            gamma: self.gamma[..keep].to_vec(),
            g: self.g[..keep].to_vec(),
        })
    }
}

/// Resamples a `u`-trajectory at `u = g(t_m)` for each time of the map.
/// The twist profile is interpolated linearly between the two bracketing
/// slices and the shape is rebuilt from it, so curvature stays fixed.
/// Targets within `1e-12` (relative) of a slice snap onto it.
pub fn time_reparameterize(traj: &ShapeTrajectory, tmap: &TimeMap) -> Result<ShapeTrajectory> {
    if traj.axis != ParamAxis::U || traj.is_empty() {
        return Err(Error::OutOfRange("expected a non-empty u-trajectory".into()));
    }
    let params: Vec<f64> = traj.slices.iter().map(|s| s.param).collect();
    let last = *params.last().expect("non-empty");
    let mut slices = Vec::with_capacity(tmap.len());
    for (m, &u) in tmap.g().iter().enumerate() {
        let snap = 1e-12 * u.abs().max(1.0);
        if !(u >= -snap && u <= last + snap) {
            return Err(Error::OutOfRange(format!(
                "g(t = {}) = {u} lies outside the computed range [0, {last}]",
                tmap.time(m)
            )));
        }
        let hi = params.partition_point(|&p| p < u);
        let psi = if let Some(j) = [hi.saturating_sub(1), hi.min(params.len() - 1)]
            .into_iter()
            .find(|&j| (params[j] - u).abs() <= snap)
        {
            traj.slices[j].psi.clone()
        } else {
            let (a, b) = (&traj.slices[hi - 1], &traj.slices[hi]);
            let w = (u - a.param) / (b.param - a.param);
            PsiField1D::new(
                a.psi.d_sigma,
                a.psi
                    .values
                    .iter()
                    .zip(&b.psi.values)
                    .map(|(x, y)| (1.0 - w) * x + w * y)
                    .collect(),
            )
        };
        slices.push(build_slice(&traj.base, psi, &traj.width, tmap.time(m))?);
    }
    Ok(ShapeTrajectory {
        axis: ParamAxis::Time,
        base: traj.base.clone(),
        width: traj.width.clone(),
        slices,
    })
}
