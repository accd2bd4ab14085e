//! Generating pairs of SL2(F_p) against X*₋₂(p) through trace coordinates.

use markoff::cusp_comb::cusp_crosscheck;
use markoff::nielsen::sl2_crosscheck;
use std::error::Error;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for p in [5u64, 7, 11] {
        let pairs = sl2_crosscheck(p)?;
        let cusps = cusp_crosscheck(p)?;
        println!(
            "p = {p:>2}: {} SL2-classes, {} GL2-classes, {} star points, bijective {}, cusps {} / {} / {}",
            pairs.sl2_classes,
            pairs.gl2_classes,
            pairs.star_points,
            pairs.bijective,
            cusps.group_side.len(),
            cusps.surface_side.len(),
            cusps.closed_form
        );
        assert!(pairs.passed() && cusps.passed());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
