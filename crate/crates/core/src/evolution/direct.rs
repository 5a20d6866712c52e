//! Direct evolution of the Frenet frames in `u` under the deformation rule
//! `d e1/du = f nu`.
//!
//! At fixed sigma the frame rotates with angular velocity
//! `v e1 - f sin(psi) e2 + f cos(psi) e3`, which reproduces
//! `de1/du = f (cos psi e2 + sin psi e3)`, `de2/du = -f cos psi e1 + v e3`
//! and `de3/du = -f sin psi e1 - v e2`. This path never touches the twist
//! equation, so comparing its geodesic curvature with `k_from_psi` checks
//! both computations.

use nalgebra::Unit;

use super::{CharacteristicGrid, PsiField2D};
use crate::curve::{integrate_frenet, Frame, Vec3};
use crate::error::{Error, Result};
use crate::ribbon::{v_from_psi, Ribbon};

/// Orthonormality drift, before re-orthonormalization, that marks the
/// inputs as inconsistent.
const DRIFT_TOL: f64 = 1e-6;

/// Frames at every node of the ribbon's base curve for every `u_j`.
#[derive(Debug, Clone)]
pub struct DirectFrames {
    n_nodes: usize,
    u: Vec<f64>,
    sigma: Vec<f64>,
    frames: Vec<Frame>,
}

impl DirectFrames {
    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    /// Indicatrix arclength of each curve node.
    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    pub fn at(&self, node: usize, j: usize) -> &Frame {
        &self.frames[j * self.n_nodes + node]
    }

    /// Frames along the curve at `u_j`.
    pub fn slice(&self, j: usize) -> &[Frame] {
        &self.frames[j * self.n_nodes..(j + 1) * self.n_nodes]
    }

    pub fn tangents(&self, j: usize) -> Vec<Vec3> {
        self.slice(j).iter().map(|f| f.e1).collect()
    }
}

/// Integrates the frame equations in `u` at each node of the ribbon's base
/// curve, starting from its Frenet frames at `u = 0`. Positions are rebuilt
/// by trapezoidal integration of `e1` along arclength.
pub fn evolve_frames_direct(
    ribbon: &Ribbon,
    grid: &CharacteristicGrid,
    psi: &PsiField2D,
) -> Result<DirectFrames> {
    if psi.grid() != grid {
        return Err(Error::InvalidGrid("psi field lives on a different grid".into()));
    }
    let shape = ribbon.shape();
    let width = ribbon.width();
    let curve0 = integrate_frenet(shape, &Frame::canonical())?;
    let sigma = curve0.sigma().to_vec();
    let n = curve0.len();
    let nu = grid.n_u();
    let du = grid.d_u();
    let ds = shape.grid().ds();

    // psi and v at each curve node for every u slice.
    let mut psi_nodes = Vec::with_capacity(nu);
    let mut v_nodes = Vec::with_capacity(nu);
    for j in 0..nu {
        let slice = psi.slice(j);
        let v = v_from_psi(&slice, width)?;
        psi_nodes.push(sigma.iter().map(|&s| slice.at(s)).collect::<Vec<_>>());
        v_nodes.push(sigma.iter().map(|&s| v.at(s)).collect::<Vec<_>>());
    }
    let f_nodes: Vec<f64> = sigma.iter().map(|&s| width.value(s)).collect();

    let mut frames = curve0.frames().to_vec();
    frames.reserve(n * (nu - 1));
    for j in 1..nu {
        let mut next = Vec::with_capacity(n);
        for i in 0..n {
            let mut fr = frames[(j - 1) * n + i];
            let p = 0.5 * (psi_nodes[j - 1][i] + psi_nodes[j][i]);
            let v = 0.5 * (v_nodes[j - 1][i] + v_nodes[j][i]);
            let f = f_nodes[i];
            let omega = fr.e1 * v - fr.e2 * (f * p.sin()) + fr.e3 * (f * p.cos());
            let rate = omega.norm();
            if rate > 0.0 {
                fr.rotate(&Unit::new_unchecked(omega / rate), rate * du);
            }
            let drift = fr.orthonormality_error();
            if !(drift <= DRIFT_TOL) {
                return Err(Error::FrameDrift { index: i, drift });
            }
            fr.reorthonormalize();
            next.push(fr);
        }
        let mut pos = Vec3::zeros();
        for i in 0..n {
            if i > 0 {
                pos += (next[i - 1].e1 + next[i].e1) * (0.5 * ds);
            }
            next[i].position = pos;
        }
        frames.extend(next);
    }

    Ok(DirectFrames {
        n_nodes: n,
        u: (0..nu).map(|j| grid.u(j)).collect(),
        sigma,
        frames,
    })
}

/// Geodesic curvature `(t x t') . t'' / |t'|^3` of a curve `t` on the unit
/// sphere sampled at uniform spacing, by central differences. The two end
/// values copy their neighbors.
pub fn tangent_geodesic_curvature(tangents: &[Vec3], spacing: f64) -> Vec<f64> {
    let n = tangents.len();
    let mut k = vec![0.0; n];
    if n < 3 {
        return k;
    }
    for i in 1..n - 1 {
        let d1 = (tangents[i + 1] - tangents[i - 1]) / (2.0 * spacing);
        let d2 = (tangents[i + 1] - tangents[i] * 2.0 + tangents[i - 1]) / (spacing * spacing);
        k[i] = tangents[i].cross(&d1).dot(&d2) / d1.norm().powi(3);
    }
    k[0] = k[1];
    k[n - 1] = k[n - 2];
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{ArcGrid, CurveShape};
    use crate::ribbon::{k_from_psi, WidthProfile};
    use crate::soliton::AntikinkParams;

    fn antikink_ribbon(n: usize, extent: f64, p: &AntikinkParams, u_extent: f64, nu: usize)
        -> (Ribbon, CharacteristicGrid, PsiField2D) {
        let grid = CharacteristicGrid::new(extent, u_extent, n, nu).unwrap();
        let field = PsiField2D::from_antikink(grid, p);
        let base = CurveShape::constant(ArcGrid::spanning(extent, n).unwrap(), 1.0, 0.0).unwrap();
        let ribbon = Ribbon::consistent(&base, field.slice(0), WidthProfile::constant(p.f).unwrap()).unwrap();
        (ribbon, grid, field)
    }

    #[test]
    fn weak_forcing_leaves_frames_in_place() {
        let p = AntikinkParams::new(1e-8, 1.0, 0.0).unwrap();
        let (ribbon, grid, field) = antikink_ribbon(51, 5.0, &p, 2.0, 21);
        let out = evolve_frames_direct(&ribbon, &grid, &field).unwrap();
        for j in 0..21 {
            for i in 0..51 {
                let (a, b) = (out.at(i, 0), out.at(i, j));
                assert!((a.e1 - b.e1).norm() < 1e-6 && (a.e2 - b.e2).norm() < 1e-6);
            }
        }
    }

    #[test]
    fn tangent_moves_no_faster_than_the_width() {
        // Kink far to the right: psi is essentially 0 over the whole grid.
        let p = AntikinkParams::new(0.5, 1.0, -60.0).unwrap();
        let (ribbon, grid, field) = antikink_ribbon(41, 4.0, &p, 1.0, 21);
        let out = evolve_frames_direct(&ribbon, &grid, &field).unwrap();
        let last = grid.n_u() - 1;
        for i in 0..41 {
            let moved = (out.at(i, last).e1 - out.at(i, 0).e1).norm();
            assert!(moved <= p.f * grid.u_extent() + 1e-12, "node {i}: {moved}");
            assert!(moved > 0.4, "rotation about nu should be visible");
        }
    }

    #[test]
    fn geodesic_curvature_of_a_circle_of_latitude() {
        // Latitude circle at height h has geodesic curvature h / sqrt(1 - h^2).
        let h: f64 = 0.3;
        let r = (1.0 - h * h).sqrt();
        let spacing = 0.01;
        let t: Vec<Vec3> = (0..200)
            .map(|i| {
                let a = i as f64 * spacing / r;
                Vec3::new(r * a.cos(), r * a.sin(), h)
            })
            .collect();
        let k = tangent_geodesic_curvature(&t, spacing);
        for v in &k[1..199] {
            assert!((v - h / r).abs() < 1e-4, "{v}");
        }
    }

    #[test]
    fn direct_frames_agree_with_psi_route() {
        let p = AntikinkParams::new(1.0, 1.0, -1.0).unwrap();
        let err = |n: usize, nu: usize| {
            let (ribbon, grid, field) = antikink_ribbon(n, 6.0, &p, 2.0, nu);
            let out = evolve_frames_direct(&ribbon, &grid, &field).unwrap();
            let last = nu - 1;
            let direct = tangent_geodesic_curvature(&out.tangents(last), grid.d_sigma());
            let via_psi = k_from_psi(&field.slice(last), ribbon.width()).unwrap();
            (2..n - 2)
                .map(|i| (direct[i] - via_psi.values[i]).abs())
                .fold(0.0, f64::max)
        };
        let coarse = err(121, 41);
        let fine = err(241, 81);
        assert!(coarse < 1e-2, "{coarse:e}");
        assert!(coarse / fine > 3.0, "{coarse:e} -> {fine:e}");
    }
}
