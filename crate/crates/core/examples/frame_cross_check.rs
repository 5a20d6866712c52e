//! Integrates the ribbon frames directly in u and compares the geodesic
//! curvature of the resulting tangent indicatrix with the one implied by psi.

use ribbonfold::curve::{ArcGrid, CurveShape};
use ribbonfold::evolution::{evolve_frames_direct, tangent_geodesic_curvature, CharacteristicGrid, PsiField2D};
use ribbonfold::ribbon::{k_from_psi, Ribbon, WidthProfile};
use ribbonfold::soliton::AntikinkParams;

fn main() -> ribbonfold::Result<()> {
    let p = AntikinkParams::new(1.0, 1.0, -1.0)?;
    for (n, nu) in [(121, 41), (241, 81), (481, 161)] {
        let grid = CharacteristicGrid::new(6.0, 2.0, n, nu)?;
        let field = PsiField2D::from_antikink(grid, &p);
        let base = CurveShape::constant(ArcGrid::spanning(6.0, n)?, 1.0, 0.0)?;
        let ribbon = Ribbon::consistent(&base, field.slice(0), WidthProfile::constant(p.f)?)?;
        let frames = evolve_frames_direct(&ribbon, &grid, &field)?;

        let last = nu - 1;
        let direct = tangent_geodesic_curvature(&frames.tangents(last), grid.d_sigma());
        let via_psi = k_from_psi(&field.slice(last), ribbon.width())?;
        let gap = (2..n - 2).map(|i| (direct[i] - via_psi.values[i]).abs()).fold(0.0, f64::max);
        println!("grid {n:>3} x {nu:>3}: max |k_direct - k_psi| = {gap:.3e}");
    }
    Ok(())
}
