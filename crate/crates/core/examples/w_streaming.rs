//! W-streaming: colors may be announced late, state stays small.

use std::error::Error;

use strandcolor::colorers::{build_colorer, ColorerConfig, Profile};
use strandcolor::stream::{gen_random_bipartite_multigraph_stream, gen_random_multigraph_stream};
use strandcolor::transcript::drive;
use strandcolor::verification::check_proper;

pub fn run() -> Result<(), Box<dyn Error>> {
    let bip = gen_random_bipartite_multigraph_stream(64, 64, 36, 0.0, 5)?;
    let gen = gen_random_multigraph_stream(128, 36, 0.0, 5)?;
    for (algo, s) in [("va-to-ea", &bip), ("wstream-ea", &gen)] {
        let mut c = build_colorer(algo, &ColorerConfig::for_stream(&s.header, Profile::Desk, 5))?;
        let mut during = 0;
        for ev in &s.events {
            during += c.process(ev)?.len();
        }
        let tail = c.finalize()?.len();
        println!("{algo}: {} edges, {during} colored while streaming, {tail} at the end", s.edge_count());
        let mut c = build_colorer(algo, &ColorerConfig::for_stream(&s.header, Profile::Desk, 5))?;
        let r = drive(c.as_mut(), s);
        assert!(check_proper(s, &r.assignments).is_empty());
        println!("  colors={} bound={} state_bits={}", r.palette(), r.palette_bound, r.state_bits_peak);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
