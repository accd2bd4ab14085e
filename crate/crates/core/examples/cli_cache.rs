//! Driving the command-line dispatcher with a warm cache.

use markoff::cli::main_with_args;
use std::error::Error;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let dir = std::env::temp_dir().join(format!("markoff-example-{}", std::process::id()));
    let dir_s = dir.to_string_lossy().into_owned();
    let args = ["markoff", "orbits", "--p", "11", "--cache", &dir_s, "--format", "table"];
    let (code, cold) = main_with_args(args);
    let (_, warm) = main_with_args(args);
    print!("{cold}");
    println!("exit {code}, warm run identical: {}", cold == warm);
    std::fs::remove_dir_all(&dir)?;
    assert_eq!(cold, warm);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
