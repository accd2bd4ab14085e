//! Out⁺ orbits on generating pairs of A5 and PSL2(F_7), by Higman class.

use markoff::groups::FiniteGroup;
use markoff::nielsen::out_plus_orbits;
use std::error::Error;

fn group(name: &str) -> Result<FiniteGroup, Box<dyn Error>> {
    Ok(FiniteGroup::from_spec_file(format!("{}/data/groups/{name}.grp", env!("CARGO_MANIFEST_DIR")))?)
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for name in ["a5", "psl2_7"] {
        let g = group(name)?;
        let report = out_plus_orbits(&g);
        println!("{name}: |G| = {}, {} pair classes", g.order(), report.pair_classes);
        for s in &report.strata {
            let q: Vec<u64> = s.orbits.iter().map(|o| o.quotient_size).collect();
            println!(
                "  class of order {:>2}: quotient orbits {q:?}, m' = {}, d' = {}, modulus {}",
                s.class_order, s.m_prime, s.d_prime, s.modulus
            );
        }
        assert!(report.passed());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
