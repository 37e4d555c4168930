//! Free-color trackers over random permutations, edge arrivals on a simple graph.

use std::error::Error;

use strandcolor::colorers::{build_colorer, Colorer, ColorerConfig, Profile, RandEa};
use strandcolor::stream::gen_random_multigraph_stream;
use strandcolor::transcript::drive;
use strandcolor::verification::check_proper;

pub fn run() -> Result<(), Box<dyn Error>> {
    let s = gen_random_multigraph_stream(128, 64, 0.0, 3)?;
    let cfg = ColorerConfig::for_stream(&s.header, Profile::Desk, 3);
    let mut c = RandEa::new(&cfg)?;
    println!("regime={} params={:?}", c.regime(), c.params());
    let r = drive(&mut c, &s);
    assert!(r.error.is_none() && check_proper(&s, &r.assignments).is_empty());
    let greedy_bits = {
        let mut g = build_colorer("greedy", &cfg)?;
        drive(g.as_mut(), &s).state_bits_peak
    };
    println!("colors={} bound={} state_bits={} (greedy {greedy_bits})", r.palette(), r.palette_bound, r.state_bits_peak);

    // Thorp permutations instead of explicit ones. Every gate is a polynomial evaluation of
    // degree rounds·s, so this uses a smaller graph and a tenth of the default rounds.
    let s = gen_random_multigraph_stream(32, 16, 0.0, 3)?;
    let cfg = ColorerConfig::for_stream(&s.header, Profile::Desk, 3)
        .with_param("perm", "thorp")
        .with_param("thorp_round_scale", 0.05);
    let mut c = build_colorer("rand-ea", &cfg)?;
    let r = drive(c.as_mut(), &s);
    println!("thorp: error={:?} colors={} of {}", r.error.as_ref().map(|e| e.kind()), r.palette(), r.palette_bound);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
