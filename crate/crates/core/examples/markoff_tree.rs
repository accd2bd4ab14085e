//! The integral Markoff tree, its image under ξ, and one descent.

use markoff::markoff_z::{bound, descend, grow_tree, xi, MarkoffSurface};
use std::error::Error;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let tree = grow_tree(MarkoffSurface::M, &bound(1000));
    for t in &tree {
        println!("{t}  ->  {}", xi(t));
    }
    let last = tree.last().ok_or("empty tree")?;
    let d = descend(last)?;
    let path: Vec<String> = d.path.iter().map(ToString::to_string).collect();
    println!("descent of {last}: {}", path.join(" -> "));
    assert!(d.replay());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
