//! One-sided coloring driven by advice permutations and saturating matchings.

use std::error::Error;

use strandcolor::colorers::{BptDetVa, ColorerConfig, Profile};
use strandcolor::stream::gen_regular_bipartite_stream;
use strandcolor::transcript::drive;
use strandcolor::verification::check_proper;

pub fn run() -> Result<(), Box<dyn Error>> {
    let s = gen_regular_bipartite_stream(32, 64, 32, 4)?;
    let cfg = ColorerConfig::for_stream(&s.header, Profile::Desk, 4);
    let mut c = BptDetVa::new(&cfg)?;
    println!("params {:?}", c.params());
    let r = drive(&mut c, &s);
    match &r.error {
        Some(e) => println!("bad advice: {e}"),
        None => {
            assert!(check_proper(&s, &r.assignments).is_empty());
            println!("regime={} colors={} bound={}", r.regime, r.palette(), r.palette_bound);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
