//! Solves the constant-width twist equation from antikink characteristic data
//! and watches the error against the closed form fall at second order.

use ribbonfold::evolution::{solve_sine_gordon, BoundaryData, CharacteristicGrid, PsiField2D};
use ribbonfold::soliton::AntikinkParams;

fn main() -> ribbonfold::Result<()> {
    let p = AntikinkParams::new(1.0, 1.0, -2.0)?;
    let mut prev: Option<f64> = None;
    println!("{:>6} {:>12} {:>7}", "n", "max error", "order");
    for n in [51, 101, 201, 401] {
        let grid = CharacteristicGrid::new(5.0, 3.0, n, n)?;
        let solved = solve_sine_gordon(&grid, p.f, &BoundaryData::from_antikink(&grid, &p)?)?;
        let err = solved.max_abs_diff(&PsiField2D::from_antikink(grid, &p));
        let order = prev.map_or(String::from("-"), |e| format!("{:.3}", (e / err).log2()));
        println!("{n:>6} {err:>12.4e} {order:>7}");
        prev = Some(err);
    }
    Ok(())
}
