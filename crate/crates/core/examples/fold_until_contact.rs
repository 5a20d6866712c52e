//! Folds a circular arc with a steep antikink until the curve first touches
//! itself.

use ribbonfold::curve::{ArcGrid, CurveShape};
use ribbonfold::evolution::{run_until_contact, BoundaryData, CharacteristicGrid, FieldSource};
use ribbonfold::ribbon::WidthProfile;
use ribbonfold::soliton::AntikinkParams;

fn main() -> ribbonfold::Result<()> {
    let p = AntikinkParams::new(1.0, 2.0, 0.0)?;
    let shape = CurveShape::constant(ArcGrid::spanning(8.0, 201)?, 1.0, 0.0)?;
    let grid = CharacteristicGrid::new(8.0, 6.0, 201, 121)?;
    let source = FieldSource::Boundary(BoundaryData::from_antikink(&grid, &p)?);
    let out = run_until_contact(&shape, &WidthProfile::constant(p.f)?, &source, &grid, 0.3, 10)?;

    match out.contact {
        Some(ev) => println!(
            "contact at slice {} (u = {:.3}): nodes {} and {} are {:.4} apart",
            ev.slice, ev.u, ev.contact.i, ev.contact.j, ev.contact.distance
        ),
        None => println!("no contact up to u = {}", grid.u_extent()),
    }
    println!("slices computed: {}", out.trajectory.len());
    Ok(())
}
