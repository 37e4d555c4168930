//! Codes, permutations, trackers, matchings and clique colorings on their own.

use std::error::Error;
use std::sync::Arc;

use strandcolor::codes::build_code;
use strandcolor::randomness::{thorp_permutation, BitOracle, ThorpParams};
use strandcolor::structures::{common_free, saturating_matching, CliqueColoring, FreeColorTracker};

pub fn run() -> Result<(), Box<dyn Error>> {
    let code = build_code(256, 48, 0.125, 1)?;
    println!("code n={} t={} min distance {}", code.n(), code.t(), code.min_distance());

    let oracle = BitOracle::new(42);
    let p = thorp_permutation(ThorpParams::new(4, 1e-3, 2), &oracle, 0)?;
    println!("thorp σ on [16]: {:?}", p.forward_table()?);

    let sigma_x = Arc::new(thorp_permutation(ThorpParams::new(5, 1e-3, 2), &oracle, 1)?);
    let sigma_y = Arc::new(thorp_permutation(ThorpParams::new(5, 1e-3, 2), &oracle, 2)?);
    let mut x = FreeColorTracker::new(32, 8, 8, sigma_x)?;
    let y = FreeColorTracker::new(32, 8, 8, sigma_y)?;
    let common = common_free(&x, &y);
    println!("F_x={:?} F_y={:?} common={common:?}", x.current_set(), y.current_set());
    if let Some(&c) = x.current_set().first() {
        x.remove_and_update(c, None)?;
        x.remove_and_update(x.current_set()[0], None)?;
        println!("after two removals: block {} F_x={:?}", x.block_index(), x.current_set());
    }

    let adj = vec![vec![0, 1], vec![0], vec![1, 2]];
    println!("matching {:?}", saturating_matching(&adj)?);
    println!("hall witness {:?}", saturating_matching(&[vec![0], vec![0]]).unwrap_err());

    let k = CliqueColoring::new(6)?;
    let row: Vec<u32> = (2..=6).map(|b| k.color(1, b)).collect();
    println!("K6 colors at vertex 1: {row:?} of {}", k.palette());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
