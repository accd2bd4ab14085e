//! Reductions of integral Markoff points mod primes and squarefree moduli.

use markoff::markoff_z::strong_approx;
use std::error::Error;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for n in [2u64, 3, 5, 7, 13, 65, 85, 145] {
        let r = strong_approx(n)?;
        println!(
            "n = {n:>3}: reached {:>5} of {:>5}, |X(Z/n)| = {:>5}, MP {:?}",
            r.reached,
            r.target,
            r.total_points,
            r.primes.iter().map(|f| f.mp).collect::<Vec<_>>()
        );
        assert!(r.passed);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
