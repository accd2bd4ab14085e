//! Cusp records for SL2(F_5) and the dihedral group of order 10.

use markoff::cusp_comb::{a_group, cusp_records, k_uh};
use markoff::groups::FiniteGroup;
use std::error::Error;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let g = FiniteGroup::sl2(5)?;
    let records = cusp_records(&g);
    let widths: Vec<u64> = records.iter().map(|r| r.width).collect();
    println!("SL2(F_5): {} δ-classes, widths {widths:?}", records.len());
    for r in records.iter().take(5) {
        println!("  k = {}, |A| = {}, |M| = {}, vertical {}", r.k_uh, r.a_order, r.m_order, r.vertical_order);
    }

    let d = FiniteGroup::dihedral(5)?;
    let rot = (0..10).find(|&x| d.element_order(x) == 5).ok_or("no rotation")?;
    let refl = (0..10).find(|&x| d.element_order(x) == 2).ok_or("no reflection")?;
    println!("D10: k = {}, |A| = {}", k_uh(&d, rot, refl), a_group(&d, rot, refl).len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
