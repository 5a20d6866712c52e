//! Matches antikinks across a width jump and checks the general solver
//! against the matched closed form. The width jump limits convergence to
//! first order unless it falls on a grid line.

use ribbonfold::evolution::{solve_general_pde, BoundaryData, CharacteristicGrid, PsiField2D};
use ribbonfold::ribbon::WidthProfile;
use ribbonfold::soliton::{AntikinkParams, PiecewiseAntikink};

fn main() -> ribbonfold::Result<()> {
    let first = AntikinkParams::new(1.0, 1.0, 0.0)?;
    let pw = PiecewiseAntikink::matched(first, &[2.0, 6.0], &[1.0, 4.0])?;
    for (n, seg) in pw.segments().iter().enumerate() {
        let p = seg.params;
        println!("segment {}: sigma in ({}, {}]  f={} a={} b={}", n + 1, seg.start, seg.end, p.f, p.a, p.b);
    }
    pw.check_continuity()?;

    let width = WidthProfile::piecewise(pw.breakpoints(), pw.widths())?;
    for (ns, nu) in [(101, 51), (201, 101), (401, 201)] {
        let grid = CharacteristicGrid::new(6.0, 2.0, ns, nu)?;
        let bd = BoundaryData::from_fn(&grid, |s, u| pw.psi(s, u))?;
        let solved = solve_general_pde(&grid, &width, &bd)?;
        let err = solved.max_abs_diff(&PsiField2D::from_piecewise(grid, &pw));
        println!("grid {ns:>3} x {nu:>3}: max error {err:.3e}");
    }
    Ok(())
}
