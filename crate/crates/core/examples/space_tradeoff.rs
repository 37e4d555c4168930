//! Grouping vertices trades colors for state.

use std::error::Error;

use strandcolor::colorers::{build_colorer, ColorerConfig, Profile};
use strandcolor::stream::gen_random_multigraph_stream;
use strandcolor::transcript::drive;
use strandcolor::verification::check_proper;

pub fn run() -> Result<(), Box<dyn Error>> {
    let s = gen_random_multigraph_stream(256, 16, 0.0, 2)?;
    println!("{:>3} {:>7} {:>7} {:>10}", "s", "colors", "bound", "state");
    for group in [1, 2, 4, 8] {
        let cfg = ColorerConfig::for_stream(&s.header, Profile::Desk, 2)
            .with_param("s", group)
            .with_param("inner", "greedy");
        let mut c = build_colorer("tradeoff", &cfg)?;
        let r = drive(c.as_mut(), &s);
        assert!(check_proper(&s, &r.assignments).is_empty());
        println!("{group:>3} {:>7} {:>7} {:>10}", r.palette(), r.palette_bound, r.state_bits_peak);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
