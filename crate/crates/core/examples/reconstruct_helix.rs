//! Rebuilds a helix from constant curvature and torsion, compares against the
//! closed-form helix, then re-estimates the shape from the sampled points.

use ribbonfold::curve::{estimate_shape, integrate_frenet, ArcGrid, CurveShape, Frame, Vec3};

fn main() -> ribbonfold::Result<()> {
    let (kappa, tau) = (1.0, 0.5);
    let shape = CurveShape::constant(ArcGrid::spanning(10.0, 10_001)?, kappa, tau)?;
    let curve = integrate_frenet(&shape, &Frame::canonical())?;

    // Helix with axis along the canonical binormal-tangent plane.
    let w = (kappa * kappa + tau * tau).sqrt();
    let (r, c) = (kappa / (w * w), tau / (w * w));
    let exact = |s: f64| {
        let p = Vec3::new(r * (w * s).sin(), r * (1.0 - (w * s).cos()), c * w * s);
        // Rotate so the tangent at 0 is e1 = x.
        let (t0, n0) = (Vec3::new(r * w, 0.0, c * w), Vec3::y());
        let b0 = t0.cross(&n0);
        Vec3::new(p.dot(&t0), p.dot(&n0), p.dot(&b0))
    };
    let gap = curve
        .frames()
        .iter()
        .enumerate()
        .map(|(i, f)| (f.position - exact(shape.grid().s(i))).norm())
        .fold(0.0, f64::max);
    println!("nodes            {}", curve.len());
    println!("max gap to helix {gap:.3e}");
    println!("frame error      {:.3e}", curve.max_frame_error());

    let back = estimate_shape(&curve)?;
    let interior = 2..curve.len() - 2;
    let dk = interior.clone().map(|i| (back.kappa()[i] - kappa).abs()).fold(0.0, f64::max);
    let dt = interior.map(|i| (back.tau()[i] - tau).abs()).fold(0.0, f64::max);
    println!("re-estimated kappa error {dk:.3e}, tau error {dt:.3e}");
    Ok(())
}
