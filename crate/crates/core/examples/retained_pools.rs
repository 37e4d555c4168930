//! 2Δ-1 colors with retained free-color pools; pool sizes are measured, not bounded.

use std::error::Error;

use strandcolor::colorers::{ColorerConfig, ConjEa, ConjVa, Profile};
use strandcolor::stream::{gen_random_multigraph_stream, gen_regular_bipartite_stream};
use strandcolor::transcript::drive;
use strandcolor::verification::check_proper;

pub fn run() -> Result<(), Box<dyn Error>> {
    for delta in [8, 16, 32] {
        let s = gen_regular_bipartite_stream(64, 64, delta, 1)?;
        let mut va = ConjVa::new(&ColorerConfig::for_stream(&s.header, Profile::Desk, 1))?;
        let r = drive(&mut va, &s);
        assert!(check_proper(&s, &r.assignments).is_empty());

        let s = gen_random_multigraph_stream(128, delta, 0.0, 1)?;
        let mut ea = ConjEa::new(&ColorerConfig::for_stream(&s.header, Profile::Desk, 1))?;
        let r2 = drive(&mut ea, &s);
        assert!(check_proper(&s, &r2.assignments).is_empty());
        println!(
            "Δ={delta:>2}: va colors {:>2} pool peak {:>4} | ea colors {:>2} pool peak {:>5}",
            r.palette(),
            va.pool_peak(),
            r2.palette(),
            ea.pool_peak()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
