//! Deterministic edge arrival on a multigraph: repeated pairs climb levels.

use std::error::Error;

use strandcolor::colorers::{ColorerConfig, DetEa, Profile};
use strandcolor::stream::{gen_random_multigraph_stream, gen_repeated_pair_stream};
use strandcolor::transcript::drive;
use strandcolor::verification::{check_proper, palette_stats};

pub fn run() -> Result<(), Box<dyn Error>> {
    let s = gen_repeated_pair_stream(6)?;
    let mut c = DetEa::new(&ColorerConfig::for_stream(&s.header, Profile::Desk, 0))?;
    let r = drive(&mut c, &s);
    for a in &r.assignments {
        println!("copy {} -> {}", a.seq, a.color);
    }

    let s = gen_random_multigraph_stream(64, 32, 0.8, 1)?;
    let mut c = DetEa::new(&ColorerConfig::for_stream(&s.header, Profile::Desk, 1))?;
    let r = drive(&mut c, &s);
    assert!(r.error.is_none() && check_proper(&s, &r.assignments).is_empty());
    println!(
        "max multiplicity {}: colors={} bound={} pool peak={}",
        s.max_multiplicity(),
        r.palette(),
        r.palette_bound,
        c.pool().peak_len()
    );
    for (level, inner) in c.levels().iter().enumerate() {
        println!("  level {level}: Δ={} layers={} overflow={}", inner.delta(), inner.layers().len(), inner.overflow_len());
    }
    println!("colors by level: {:?}", palette_stats(&r.assignments).by_first);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
