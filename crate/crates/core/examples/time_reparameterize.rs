//! Resamples a u-trajectory onto physical time with a ramping speed
//! gamma(t) = c t, so that u = c t^2 / 2.

use ribbonfold::curve::{ArcGrid, CurveShape};
use ribbonfold::evolution::{shape_trajectory, time_reparameterize, CharacteristicGrid, PsiField2D, TimeMap};
use ribbonfold::ribbon::WidthProfile;
use ribbonfold::soliton::{kink_center, AntikinkParams};

fn main() -> ribbonfold::Result<()> {
    let p = AntikinkParams::new(1.0, 1.0, -2.0)?;
    let shape = CurveShape::constant(ArcGrid::spanning(6.0, 301)?, 1.0, 0.2)?;
    let grid = CharacteristicGrid::new(6.0, 2.0, 301, 81)?;
    let traj = shape_trajectory(&shape, &PsiField2D::from_antikink(grid, &p), &WidthProfile::constant(p.f)?)?;

    let tmap = TimeMap::linear(1.0, 2.0, 9)?;
    let timed = time_reparameterize(&traj, &tmap)?;
    println!("{:>5} {:>8} {:>12}", "t", "u = g(t)", "kink center");
    for (m, slice) in timed.slices.iter().enumerate() {
        let u = tmap.g()[m];
        println!("{:>5.2} {u:>8.4} {:>12.4}", slice.param, kink_center(&p, u));
    }
    Ok(())
}
