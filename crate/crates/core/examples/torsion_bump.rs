//! Evolves a closed curve under an antikink and tracks the torsion bump; its
//! center should travel at the kink speed a^2.

use ribbonfold::curve::{ArcGrid, CurveShape};
use ribbonfold::evolution::{shape_trajectory, PsiField2D, CharacteristicGrid};
use ribbonfold::ribbon::WidthProfile;
use ribbonfold::soliton::{kink_center, kink_speed, AntikinkParams};

fn main() -> ribbonfold::Result<()> {
    let p = AntikinkParams::new(1.0, 0.8, 1.0)?;
    let shape = CurveShape::constant(ArcGrid::spanning(12.0, 1201)?, 1.0, 0.0)?;
    let grid = CharacteristicGrid::new(12.0, 8.0, 1201, 9)?;
    let field = PsiField2D::from_antikink(grid, &p);
    let traj = shape_trajectory(&shape, &field, &WidthProfile::constant(p.f)?)?;

    println!("kink speed a^2 = {}", kink_speed(&p));
    println!("{:>5} {:>10} {:>10} {:>10}", "u", "peak s", "a^2 u + ab", "peak tau");
    for slice in &traj.slices {
        let (i, peak) = slice
            .shape
            .tau()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .unwrap();
        let s = shape.grid().s(i);
        println!("{:>5.2} {s:>10.3} {:>10.3} {peak:>10.4}", slice.param, kink_center(&p, slice.param));
    }
    Ok(())
}
