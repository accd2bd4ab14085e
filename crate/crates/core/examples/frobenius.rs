//! Markoff numbers avoid 0 and ±2/3 mod p when p ≡ 3 mod 4.

use markoff::markoff_z::frobenius_residues;
use std::error::Error;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for p in [7u64, 11, 19, 23] {
        let r = frobenius_residues(p, 1_000_000)?;
        println!("p = {p:>2}: {} Markoff numbers, forbidden {:?}, histogram {:?}", r.markoff_numbers, r.forbidden, r.histogram);
        assert!(r.passed);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
