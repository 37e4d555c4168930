//! Randomized one-sided vertex arrival with a 5Δ palette.

use std::error::Error;

use strandcolor::colorers::{build_colorer, ColorerConfig, Profile};
use strandcolor::stream::gen_regular_bipartite_stream;
use strandcolor::transcript::drive;
use strandcolor::verification::check_proper;

pub fn run() -> Result<(), Box<dyn Error>> {
    // 25 arriving vertices, 39 fixed ones, every arrival brings 39 edges.
    let mut aborts = 0;
    for seed in 0..20 {
        let s = gen_regular_bipartite_stream(25, 39, 39, seed)?;
        let cfg = ColorerConfig::for_stream(&s.header, Profile::Paper, seed);
        let mut c = build_colorer("bpt-rand-va", &cfg)?;
        let r = drive(c.as_mut(), &s);
        match &r.error {
            Some(e) => {
                aborts += 1;
                println!("seed {seed}: {e}");
            }
            None => assert!(check_proper(&s, &r.assignments).is_empty()),
        }
        if seed == 0 {
            println!("regime={} colors={} of {} state_bits={}", r.regime, r.palette(), r.palette_bound, r.state_bits_peak);
        }
    }
    println!("aborts: {aborts}/20");

    // Small Δ hands the stream to greedy.
    let s = gen_regular_bipartite_stream(4, 8, 2, 1)?;
    let c = build_colorer("bpt-rand-va", &ColorerConfig::for_stream(&s.header, Profile::Paper, 1))?;
    println!("Δ=2 regime: {}", c.regime());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
