//! Discrete differential geometry of space curves.
//!
//! A base curve is described by its curvature and torsion sampled on a
//! uniform arclength grid. From that description we rebuild an embedded
//! curve by stepping the Frenet-Serret system, estimate the shape back from
//! positions alone, map arclength `s` to the arclength `sigma` of the tangent
//! indicatrix, and look for self-contact between non-adjacent nodes.

use nalgebra::{Unit, Vector3};

use crate::error::{Error, Result};
use crate::numeric::{cumulative_trapezoid, interp_monotone};

pub type Vec3 = Vector3<f64>;

/// Lower bound on curvature. Shapes below it have no Frenet frame.
pub const KAPPA_MIN: f64 = 1e-6;

/// Tolerance on frame orthonormality and handedness.
pub const FRAME_TOL: f64 = 1e-9;

/// Uniform arclength grid `s_i = i * ds`, `i = 0..n_samples`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcGrid {
    n_samples: usize,
    ds: f64,
}

impl ArcGrid {
    pub fn new(n_samples: usize, ds: f64) -> Result<Self> {
        if n_samples < 2 {
            return Err(Error::InvalidShape(format!(
                "need at least 2 samples, got {n_samples}"
            )));
        }
        if !(ds.is_finite() && ds > 0.0) {
            return Err(Error::InvalidShape(format!("ds must be positive, got {ds}")));
        }
        Ok(Self { n_samples, ds })
    }

    /// Grid with `n_samples` nodes spanning `[0, length]`.
    pub fn spanning(length: f64, n_samples: usize) -> Result<Self> {
        if n_samples < 2 {
            return Err(Error::InvalidShape(format!(
                "need at least 2 samples, got {n_samples}"
            )));
        }
        Self::new(n_samples, length / (n_samples - 1) as f64)
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn ds(&self) -> f64 {
        self.ds
    }

    pub fn length(&self) -> f64 {
        (self.n_samples - 1) as f64 * self.ds
    }

    pub fn s(&self, i: usize) -> f64 {
        i as f64 * self.ds
    }
}

/// Curvature and torsion sampled on an [`ArcGrid`]. Determines the curve up
/// to a rigid motion.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveShape {
    grid: ArcGrid,
    kappa: Vec<f64>,
    tau: Vec<f64>,
}

impl CurveShape {
    pub fn new(grid: ArcGrid, kappa: Vec<f64>, tau: Vec<f64>) -> Result<Self> {
        let n = grid.n_samples();
        if kappa.len() != n || tau.len() != n {
            return Err(Error::InvalidShape(format!(
                "expected {n} curvature and torsion samples, got {} and {}",
                kappa.len(),
                tau.len()
            )));
        }
        if let Some(i) = kappa.iter().position(|k| !(k.is_finite() && *k >= KAPPA_MIN)) {
            return Err(Error::InvalidShape(format!(
                "curvature {} at node {i} is below the non-degeneracy bound {KAPPA_MIN:e}",
                kappa[i]
            )));
        }
        if let Some(i) = tau.iter().position(|t| !t.is_finite()) {
            return Err(Error::InvalidShape(format!("torsion at node {i} is not finite")));
        }
        Ok(Self { grid, kappa, tau })
    }

    pub fn constant(grid: ArcGrid, kappa: f64, tau: f64) -> Result<Self> {
        let n = grid.n_samples();
        Self::new(grid, vec![kappa; n], vec![tau; n])
    }

    /// Samples `f(s) -> (kappa, tau)` at every grid node.
    pub fn from_fn(grid: ArcGrid, f: impl Fn(f64) -> (f64, f64)) -> Result<Self> {
        let (kappa, tau) = (0..grid.n_samples()).map(|i| f(grid.s(i))).unzip();
        Self::new(grid, kappa, tau)
    }

    pub fn grid(&self) -> ArcGrid {
        self.grid
    }

    pub fn kappa(&self) -> &[f64] {
        &self.kappa
    }

    pub fn tau(&self) -> &[f64] {
        &self.tau
    }

    /// Same curvature and grid with a replacement torsion array.
    pub fn with_tau(&self, tau: Vec<f64>) -> Result<Self> {
        if tau.len() != self.kappa.len() {
            return Err(Error::InvalidShape(format!(
                "expected {} torsion samples, got {}",
                self.kappa.len(),
                tau.len()
            )));
        }
        if let Some(i) = tau.iter().position(|t| !t.is_finite()) {
            return Err(Error::InvalidShape(format!("torsion at node {i} is not finite")));
        }
        Ok(Self {
            grid: self.grid,
            kappa: self.kappa.clone(),
            tau,
        })
    }
}

/// A point of the curve with its Frenet triple (tangent, normal, binormal).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub position: Vec3,
    pub e1: Vec3,
    pub e2: Vec3,
    pub e3: Vec3,
}

impl Frame {
    /// Origin with the standard basis.
    pub fn canonical() -> Self {
        Self {
            position: Vec3::zeros(),
            e1: Vec3::x(),
            e2: Vec3::y(),
            e3: Vec3::z(),
        }
    }

    /// Largest departure from an orthonormal right-handed triple.
    pub fn orthonormality_error(&self) -> f64 {
        let norms = [self.e1.norm(), self.e2.norm(), self.e3.norm()]
            .iter()
            .map(|n| (n - 1.0).abs())
            .fold(0.0, f64::max);
        let dots = [self.e1.dot(&self.e2), self.e1.dot(&self.e3), self.e2.dot(&self.e3)]
            .iter()
            .map(|d| d.abs())
            .fold(0.0, f64::max);
        let det = (self.e1.cross(&self.e2).dot(&self.e3) - 1.0).abs();
        norms.max(dots).max(det)
    }

    pub fn validate(&self) -> Result<()> {
        let err = self.orthonormality_error();
        if !(err <= FRAME_TOL) || !self.position.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidFrame(format!(
                "triple is not orthonormal and right-handed (error {err:e})"
            )));
        }
        Ok(())
    }

    /// Gram-Schmidt on (e1, e2), then e3 = e1 x e2.
    pub fn reorthonormalize(&mut self) {
        let e1 = self.e1.normalize();
        let e2 = (self.e2 - e1 * e1.dot(&self.e2)).normalize();
        self.e1 = e1;
        self.e2 = e2;
        self.e3 = e1.cross(&e2);
    }

    /// Applies the rotation `axis`, `angle` to the triple (not the position).
    pub(crate) fn rotate(&mut self, axis: &Unit<Vec3>, angle: f64) {
        self.e1 = rotate_vector(&self.e1, axis, angle);
        self.e2 = rotate_vector(&self.e2, axis, angle);
        self.e3 = rotate_vector(&self.e3, axis, angle);
    }
}

/// Rodrigues rotation, written with `2 sin^2(angle/2)` so tiny angles keep
/// full precision.
pub(crate) fn rotate_vector(v: &Vec3, axis: &Unit<Vec3>, angle: f64) -> Vec3 {
    let s = angle.sin();
    let versine = 2.0 * (0.5 * angle).sin().powi(2);
    v * (1.0 - versine) + axis.cross(v) * s + axis.as_ref() * (axis.dot(v) * versine)
}

/// Frames at every node of an arclength grid, plus the indicatrix arclength
/// `sigma` at each node.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedCurve {
    grid: ArcGrid,
    frames: Vec<Frame>,
    sigma: Vec<f64>,
}

impl EmbeddedCurve {
    pub fn grid(&self) -> ArcGrid {
        self.grid
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    /// Indicatrix arclength at each node.
    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    pub fn positions(&self) -> Vec<Vec3> {
        self.frames.iter().map(|f| f.position).collect()
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// Worst orthonormality error over all frames.
    pub fn max_frame_error(&self) -> f64 {
        self.frames
            .iter()
            .map(Frame::orthonormality_error)
            .fold(0.0, f64::max)
    }
}

/// Steps the Frenet-Serret system from `initial` across every grid cell.
///
/// With curvature and torsion frozen at the cell midpoint the Darboux vector
/// `tau e1 + kappa e3` is constant in space, so the frame rotates rigidly
/// about it and the position follows the exact helical arc. Frames are
/// re-orthonormalized after every step.
pub fn integrate_frenet(shape: &CurveShape, initial: &Frame) -> Result<EmbeddedCurve> {
    initial.validate()?;
    let grid = shape.grid();
    let ds = grid.ds();
    let mut frames = Vec::with_capacity(grid.n_samples());
    let mut frame = *initial;
    frames.push(frame);
    for i in 0..grid.n_samples() - 1 {
        let kappa = 0.5 * (shape.kappa[i] + shape.kappa[i + 1]);
        let tau = 0.5 * (shape.tau[i] + shape.tau[i + 1]);
        let darboux = frame.e1 * tau + frame.e3 * kappa;
        let rate = darboux.norm();
        let axis = Unit::new_unchecked(darboux / rate);
        let angle = rate * ds;

        let along = axis.dot(&frame.e1);
        let perp = frame.e1 - axis.as_ref() * along;
        let versine = 2.0 * (0.5 * angle).sin().powi(2);
        frame.position += axis.as_ref() * (along * ds)
            + perp * (angle.sin() / rate)
            + axis.cross(&perp) * (versine / rate);

        frame.rotate(&axis, angle);
        frame.reorthonormalize();
        frames.push(frame);
    }
    Ok(EmbeddedCurve {
        grid,
        frames,
        sigma: sigma_of_s(shape).sigma,
    })
}

/// Estimates curvature and torsion from the curve's positions only.
///
/// Curvature is the inverse circumradius of consecutive point triples;
/// torsion is the signed turning rate of consecutive osculating-plane
/// normals. End nodes copy the nearest interior estimate.
pub fn estimate_shape(curve: &EmbeddedCurve) -> Result<CurveShape> {
    estimate_shape_from_points(&curve.positions(), curve.grid())
}

pub fn estimate_shape_from_points(points: &[Vec3], grid: ArcGrid) -> Result<CurveShape> {
    let n = points.len();
    if n < 5 {
        return Err(Error::InvalidShape(format!(
            "shape estimation needs at least 5 points, got {n}"
        )));
    }
    if n != grid.n_samples() {
        return Err(Error::InvalidShape(format!(
            "{n} points on a grid of {} samples",
            grid.n_samples()
        )));
    }
    let segments: Vec<Vec3> = points.windows(2).map(|w| w[1] - w[0]).collect();

    let mut kappa = vec![0.0; n];
    let mut binormals = vec![Vec3::zeros(); n];
    for i in 1..n - 1 {
        let a = segments[i - 1];
        let b = segments[i];
        let cross = a.cross(&b);
        let k = 2.0 * cross.norm() / (a.norm() * b.norm() * (a + b).norm());
        if !(k >= KAPPA_MIN) {
            return Err(Error::Degenerate { index: i });
        }
        kappa[i] = k;
        binormals[i] = cross.normalize();
    }
    kappa[0] = kappa[1];
    kappa[n - 1] = kappa[n - 2];

    // Torsion between nodes i and i+1.
    let ds = grid.ds();
    let half: Vec<f64> = (1..n - 2)
        .map(|i| {
            let (b0, b1) = (binormals[i], binormals[i + 1]);
            let t = segments[i].normalize();
            b0.cross(&b1).dot(&t).atan2(b0.dot(&b1)) / ds
        })
        .collect();
    let mut tau = vec![0.0; n];
    for i in 2..n - 2 {
        tau[i] = 0.5 * (half[i - 2] + half[i - 1]);
    }
    tau[0] = tau[2];
    tau[1] = tau[2];
    tau[n - 1] = tau[n - 3];
    tau[n - 2] = tau[n - 3];

    CurveShape::new(grid, kappa, tau)
}

/// The arclength `sigma(s)` of the tangent indicatrix on the unit sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaGrid {
    pub sigma: Vec<f64>,
    pub total: f64,
}

/// Cumulative trapezoidal integral of curvature over arclength.
pub fn sigma_of_s(shape: &CurveShape) -> SigmaGrid {
    let sigma = cumulative_trapezoid(shape.kappa(), shape.grid().ds());
    let total = *sigma.last().expect("grid has at least two nodes");
    SigmaGrid { sigma, total }
}

/// Samples on the uniform grid `sigma_i = i * d_sigma`.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaSamples {
    pub d_sigma: f64,
    pub values: Vec<f64>,
}

impl SigmaSamples {
    pub fn new(d_sigma: f64, values: Vec<f64>) -> Self {
        Self { d_sigma, values }
    }

    /// Samples of `f` at `n` nodes spanning `[0, extent]`.
    pub fn from_fn(extent: f64, n: usize, f: impl Fn(f64) -> f64) -> Self {
        let d_sigma = extent / (n - 1) as f64;
        Self {
            d_sigma,
            values: (0..n).map(|i| f(i as f64 * d_sigma)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn extent(&self) -> f64 {
        (self.values.len() - 1) as f64 * self.d_sigma
    }

    pub fn sigma(&self, i: usize) -> f64 {
        i as f64 * self.d_sigma
    }

    /// Linear interpolation; clamps outside `[0, extent]`.
    pub fn at(&self, sigma: f64) -> f64 {
        crate::numeric::interp_uniform(&self.values, self.d_sigma, sigma)
    }
}

/// Geodesic curvature `k = tau / kappa` of the tangent indicatrix, resampled
/// onto a uniform sigma grid with as many nodes as the shape.
pub fn geodesic_curvature(shape: &CurveShape) -> SigmaSamples {
    let sg = sigma_of_s(shape);
    let k_nodes: Vec<f64> = shape
        .tau()
        .iter()
        .zip(shape.kappa())
        .map(|(t, k)| t / k)
        .collect();
    let n = shape.grid().n_samples();
    let d_sigma = sg.total / (n - 1) as f64;
    let values = (0..n)
        .map(|i| interp_monotone(&sg.sigma, &k_nodes, i as f64 * d_sigma))
        .collect();
    SigmaSamples { d_sigma, values }
}

/// Inverse of [`geodesic_curvature`]: torsion `tau_i = k(sigma_i) * kappa_i`
/// at the shape's arclength nodes.
pub fn torsion_from_geodesic(shape: &CurveShape, k: &SigmaSamples) -> Vec<f64> {
    let sg = sigma_of_s(shape);
    sg.sigma
        .iter()
        .zip(shape.kappa())
        .map(|(&s, &kappa)| k.at(s) * kappa)
        .collect()
}

/// Two non-adjacent nodes closer than the contact threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contact {
    pub i: usize,
    pub j: usize,
    pub distance: f64,
}

/// First pair `(i, j)` in lexicographic order with `j - i > exclusion` and
/// distance below `threshold`. An exclusion of zero is treated as one.
pub fn self_contact(curve: &EmbeddedCurve, threshold: f64, exclusion: usize) -> Option<Contact> {
    contact_in_points(&curve.positions(), threshold, exclusion)
}

pub fn contact_in_points(points: &[Vec3], threshold: f64, exclusion: usize) -> Option<Contact> {
    let exclusion = exclusion.max(1);
    let threshold_sq = threshold * threshold;
    for (i, p) in points.iter().enumerate() {
        for (j, q) in points.iter().enumerate().skip(i + exclusion + 1) {
            let d2 = (p - q).norm_squared();
            if d2 < threshold_sq {
                return Some(Contact {
                    i,
                    j,
                    distance: d2.sqrt(),
                });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{PI, TAU};

    use super::*;

    fn canonical(shape: &CurveShape) -> EmbeddedCurve {
        integrate_frenet(shape, &Frame::canonical()).unwrap()
    }

    #[test]
    fn shape_rejects_low_curvature_and_bad_lengths() {
        let grid = ArcGrid::new(4, 0.1).unwrap();
        assert!(CurveShape::constant(grid, 0.0, 0.0).is_err());
        assert!(CurveShape::new(grid, vec![1.0; 3], vec![0.0; 4]).is_err());
        assert!(ArcGrid::new(1, 0.1).is_err());
        assert!(ArcGrid::new(3, 0.0).is_err());
    }

    #[test]
    fn rejects_non_orthonormal_initial_frame() {
        let shape = CurveShape::constant(ArcGrid::new(10, 0.1).unwrap(), 1.0, 0.0).unwrap();
        let mut frame = Frame::canonical();
        frame.e2 = Vec3::new(0.1, 1.0, 0.0);
        assert!(matches!(
            integrate_frenet(&shape, &frame),
            Err(Error::InvalidFrame(_))
        ));
        let mut left_handed = Frame::canonical();
        left_handed.e3 = -Vec3::z();
        assert!(integrate_frenet(&shape, &left_handed).is_err());
    }

    #[test]
    fn unit_curvature_closes_into_a_circle() {
        for n in [64usize, 128] {
            let grid = ArcGrid::spanning(TAU, n + 1).unwrap();
            let curve = canonical(&CurveShape::constant(grid, 1.0, 0.0).unwrap());
            let end = curve.frames().last().unwrap().position;
            assert!(end.norm() < grid.ds().powi(2), "n={n}: {end}");
            let center = Vec3::new(0.0, 1.0, 0.0);
            for p in curve.positions() {
                assert!(((p - center).norm() - 1.0).abs() < 1e-12);
                assert!(p.z.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn unit_curvature_and_torsion_gives_the_half_radius_helix() {
        // Closed-form helix (r cos t, r sin t, c t) with r = c = 1/2 has
        // kappa = r/(r^2+c^2) = 1, tau = c/(r^2+c^2) = 1, speed 1/sqrt(2).
        let (r, c) = (0.5, 0.5);
        let speed = (r * r + c * c as f64).sqrt();
        let helix = |t: f64| Vec3::new(r * t.cos(), r * t.sin(), c * t);
        let tangent = Vec3::new(0.0, r, c) / speed;
        let normal = Vec3::new(-1.0, 0.0, 0.0);
        let binormal = tangent.cross(&normal);

        let grid = ArcGrid::new(401, 0.01).unwrap();
        let curve = canonical(&CurveShape::constant(grid, 1.0, 1.0).unwrap());
        for (i, p) in curve.positions().iter().enumerate() {
            let d = helix(grid.s(i) / speed) - helix(0.0);
            let expected = Vec3::new(d.dot(&tangent), d.dot(&normal), d.dot(&binormal));
            assert!((p - expected).norm() < 1e-12, "node {i}: {p} vs {expected}");
        }
    }

    #[test]
    fn near_straight_arc_stays_near_the_line() {
        let grid = ArcGrid::spanning(0.1, 101).unwrap();
        let curve = canonical(&CurveShape::constant(grid, KAPPA_MIN, 0.0).unwrap());
        let end = curve.frames().last().unwrap().position;
        let straight = Vec3::new(0.1, 0.0, 0.0);
        assert!((end - straight).norm() < KAPPA_MIN * 0.1 * 0.1);
    }

    #[test]
    fn frames_stay_orthonormal_over_long_integrations() {
        let grid = ArcGrid::new(100_000, 1e-3).unwrap();
        let shape = CurveShape::from_fn(grid, |s| (1.0 + 0.5 * s.sin(), (3.0 * s).cos())).unwrap();
        let curve = canonical(&shape);
        assert!(curve.max_frame_error() <= FRAME_TOL);
    }

    #[test]
    fn consecutive_positions_are_about_ds_apart() {
        let grid = ArcGrid::new(200, 0.05).unwrap();
        let shape = CurveShape::from_fn(grid, |s| (1.0 + 0.1 * s, 0.3 * s)).unwrap();
        let pts = canonical(&shape).positions();
        for w in pts.windows(2) {
            let step = (w[1] - w[0]).norm();
            assert!((step - grid.ds()).abs() < 1e-3 * grid.ds());
        }
    }

    #[test]
    fn estimate_recovers_circle_and_helix() {
        for (kappa, tau) in [(1.0, 0.0), (1.0, 1.0)] {
            let grid = ArcGrid::new(501, 0.01).unwrap();
            let curve = canonical(&CurveShape::constant(grid, kappa, tau).unwrap());
            let est = estimate_shape(&curve).unwrap();
            for i in 2..grid.n_samples() - 2 {
                assert!((est.kappa()[i] - kappa).abs() < 1e-4, "kappa at {i}");
                assert!((est.tau()[i] - tau).abs() < 1e-4, "tau at {i}");
            }
        }
    }

    #[test]
    fn round_trip_error_is_second_order() {
        let err = |n: usize| {
            let grid = ArcGrid::spanning(3.0, n).unwrap();
            let shape =
                CurveShape::from_fn(grid, |s| (1.0 + 0.3 * s.sin(), 0.5 + 0.4 * s.cos())).unwrap();
            let est = estimate_shape(&canonical(&shape)).unwrap();
            (2..n - 2)
                .map(|i| {
                    (est.kappa()[i] - shape.kappa()[i])
                        .abs()
                        .max((est.tau()[i] - shape.tau()[i]).abs())
                })
                .fold(0.0, f64::max)
        };
        let coarse = err(151);
        let fine = err(301);
        let ratio = coarse / fine;
        assert!((3.0..5.0).contains(&ratio), "ratio {ratio} ({coarse:e} -> {fine:e})");
    }

    #[test]
    fn straight_points_are_degenerate() {
        let grid = ArcGrid::new(10, 0.1).unwrap();
        let pts: Vec<Vec3> = (0..10).map(|i| Vec3::new(0.1 * i as f64, 0.0, 0.0)).collect();
        assert!(matches!(
            estimate_shape_from_points(&pts, grid),
            Err(Error::Degenerate { .. })
        ));
        assert!(estimate_shape_from_points(&pts[..4], ArcGrid::new(4, 0.1).unwrap()).is_err());
    }

    #[test]
    fn sigma_integrates_curvature() {
        let shape = CurveShape::constant(ArcGrid::spanning(3.0, 31).unwrap(), 2.0, 0.0).unwrap();
        let sg = sigma_of_s(&shape);
        assert!((sg.total - 6.0).abs() < 1e-12);
        for (i, s) in sg.sigma.iter().enumerate() {
            assert!((s - 2.0 * shape.grid().s(i)).abs() < 1e-12);
        }

        let shape = CurveShape::from_fn(ArcGrid::spanning(1.0, 11).unwrap(), |s| (1.0 + s, 0.0))
            .unwrap();
        assert!((sigma_of_s(&shape).total - 1.5).abs() < 1e-12);
    }

    #[test]
    fn geodesic_curvature_is_torsion_over_curvature() {
        let grid = ArcGrid::spanning(2.0, 21).unwrap();
        let k = geodesic_curvature(&CurveShape::constant(grid, 2.0, 1.0).unwrap());
        assert!(k.values.iter().all(|v| (v - 0.5).abs() < 1e-12));
        let k = geodesic_curvature(&CurveShape::constant(grid, 2.0, 0.0).unwrap());
        assert!(k.values.iter().all(|v| *v == 0.0));
        let k = geodesic_curvature(&CurveShape::from_fn(grid, |s| (1.0, s)).unwrap());
        for (i, v) in k.values.iter().enumerate() {
            assert!((v - k.sigma(i)).abs() < 1e-12);
        }
    }

    #[test]
    fn straight_segment_has_no_contact() {
        let grid = ArcGrid::new(50, 0.1).unwrap();
        let curve = canonical(&CurveShape::constant(grid, KAPPA_MIN, 0.0).unwrap());
        assert_eq!(self_contact(&curve, 0.1 * 3.0 - 1e-9, 3), None);
    }

    #[test]
    fn near_closed_circle_touches_itself() {
        let n = 200;
        let ds = TAU / n as f64;
        // L = 2 pi - ds, so node n-1 sits one step short of node 0.
        let grid = ArcGrid::new(n, ds).unwrap();
        let curve = canonical(&CurveShape::constant(grid, 1.0, 0.0).unwrap());
        let pts = curve.positions();

        let hit = self_contact(&curve, 2.0 * ds, 3).unwrap();
        assert_eq!(hit.i, 0);
        // Node n-2 is two chords (2 sin(ds) < 2 ds) away and comes first.
        assert_eq!(hit.j, n - 2);
        assert!((hit.distance - (pts[0] - pts[n - 2]).norm()).abs() < 1e-15);

        let hit = self_contact(&curve, 1.5 * ds, 3).unwrap();
        assert_eq!((hit.i, hit.j), (0, n - 1));
    }

    #[test]
    fn one_helix_turn_keeps_clear_of_itself() {
        // One turn of the r = c = 1/2 helix spans s = 2 pi / sqrt(2).
        let ds = 0.02;
        let n = ((PI * 2.0_f64.sqrt()) / ds).round() as usize + 1;
        let curve = canonical(&CurveShape::constant(ArcGrid::new(n, ds).unwrap(), 1.0, 1.0).unwrap());
        let exclusion = 6; // skip arc separations up to 0.12
        assert_eq!(self_contact(&curve, 0.1, exclusion), None);

        let pts = curve.positions();
        let min = (0..n)
            .flat_map(|i| ((i + exclusion + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| (pts[i] - pts[j]).norm())
            .fold(f64::INFINITY, f64::min);
        assert!(min > 0.1, "brute-force minimum {min}");
    }

    #[test]
    fn contact_pair_survives_reversal() {
        // Threshold admits a single qualifying pair: the two end nodes.
        let n = 150;
        let ds = TAU / n as f64;
        let curve = canonical(&CurveShape::constant(ArcGrid::new(n, ds).unwrap(), 1.0, 0.0).unwrap());
        let mut pts = curve.positions();
        let forward = contact_in_points(&pts, 1.5 * ds, 4).unwrap();
        pts.reverse();
        let backward = contact_in_points(&pts, 1.5 * ds, 4).unwrap();
        assert_eq!((forward.i, forward.j), (n - 1 - backward.j, n - 1 - backward.i));
        assert_eq!(forward.distance, backward.distance);
    }
}
