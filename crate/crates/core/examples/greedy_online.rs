//! Greedy online coloring of a path, a star and a random multigraph.

use std::error::Error;

use strandcolor::colorers::{build_colorer, ColorerConfig, Profile};
use strandcolor::stream::{gen_path_stream, gen_random_multigraph_stream, gen_star_stream};
use strandcolor::transcript::{drive, Transcript};
use strandcolor::verification::check_proper;

pub fn run() -> Result<(), Box<dyn Error>> {
    let path = gen_path_stream(4, false)?;
    let cfg = ColorerConfig::for_stream(&path.header, Profile::Desk, 0);
    let mut g = build_colorer("greedy", &cfg)?;
    let r = drive(g.as_mut(), &path);
    print!("{}", Transcript::from_report(&path, &r, Profile::Desk, 0).serialize());

    for s in [gen_star_stream(9)?, gen_random_multigraph_stream(50, 8, 0.3, 7)?] {
        let mut g = build_colorer("greedy", &ColorerConfig::for_stream(&s.header, Profile::Desk, 0))?;
        let r = drive(g.as_mut(), &s);
        assert!(check_proper(&s, &r.assignments).is_empty());
        println!("Δ={} edges={} colors={} (bound {})", s.header.delta, s.edge_count(), r.palette(), r.palette_bound);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
