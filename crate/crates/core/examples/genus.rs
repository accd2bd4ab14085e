//! Genus of M_p two ways: Riemann-Hurwitz on orbit data and the closed form.

use markoff::modular::{genus, monodromy_report};
use std::error::Error;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    println!("  p  degree  f0  f1728  cusps  g_rh  g_closed");
    for p in [5u64, 7, 11, 13, 17, 19, 23] {
        let r = genus(p)?;
        println!(
            "{p:>3}  {:>6}  {:>2}  {:>5}  {:>5}  {:>4}  {:>8}",
            r.degree,
            r.fibers.j0,
            r.fibers.j1728,
            r.fibers.infinity,
            r.genus_rh.map_or("-".into(), |g| g.to_string()),
            r.genus_closed
        );
    }
    let m = monodromy_report(13)?;
    println!(
        "p = 13 monodromy: γ0 {:?}, γ1728 {:?}, γ∞ {:?}, alternating predicted {}",
        m.parity_gamma0, m.parity_gamma1728, m.parity_gamma_inf, m.alt_predicted
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
