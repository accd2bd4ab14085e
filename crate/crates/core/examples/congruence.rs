//! Orbit-size congruences on X*_t(p) for every t ≠ 2.

use markoff::congruence::{centralizer_order_check, verify_surface};
use std::error::Error;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let p = 13u64;
    for t in (0..p as i64).filter(|&t| t != 2) {
        let verdicts = verify_surface(p, t)?;
        let sizes: Vec<u64> = verdicts.iter().map(|v| v.orbit_size).collect();
        let rules: Vec<String> = verdicts.iter().map(|v| format!("{:?}/{}", v.rule, v.modulus)).collect();
        let ok = verdicts.iter().all(|v| v.passed);
        println!("t = {t:>2}: orbits {sizes:?} rules {rules:?} {}", if ok { "ok" } else { "FAIL" });
        assert!(ok);
    }
    println!("|C(A)| for tr A = -2 in SL2(F_7): {}", centralizer_order_check(7, -2)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
