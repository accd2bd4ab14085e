//! Γ-orbits on X*₋₂(p) for a few primes, and the Aut⁺ refinement.

use markoff::action::{orbit_decompose, GeneratorSet};
use markoff::surface::{star_count_formula, PointTable, Subset};
use std::error::Error;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for p in [5u64, 7, 11, 13, 17] {
        let table = PointTable::enumerate(p, -2)?;
        let gamma = orbit_decompose(&table, &GeneratorSet::gamma(), Subset::Star)?;
        let aut = orbit_decompose(&table, &GeneratorSet::aut_plus(), Subset::Star)?;
        println!(
            "p = {p:>2}: |X*| = {:>3} (formula {:>3}), Γ-orbits {:?}, Aut⁺-orbits {:?}",
            table.star_len(),
            star_count_formula(p)?,
            gamma.sizes(),
            aut.sizes()
        );
        assert!(gamma.is_transitive());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
