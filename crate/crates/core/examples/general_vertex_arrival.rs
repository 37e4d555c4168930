//! General vertex arrivals: a binary code routes edges to bipartite sub-instances.

use std::error::Error;
use std::sync::Arc;

use strandcolor::colorers::{build_colorer, ColorerConfig, Factory, GenToBptRouter, OneToTwoSided, Profile};
use strandcolor::harness::convert;
use strandcolor::stream::{gen_random_multigraph_stream, Mode};
use strandcolor::transcript::drive;
use strandcolor::verification::{check_proper, palette_stats};

pub fn run() -> Result<(), Box<dyn Error>> {
    let s = convert(&gen_random_multigraph_stream(128, 24, 0.2, 9)?, Mode::Va, 9)?;
    let cfg = ColorerConfig::for_stream(&s.header, Profile::Desk, 9);

    let leaf: Factory = Arc::new(|c: &ColorerConfig| build_colorer("bpt-rand-va", c));
    let two: Factory = Arc::new(move |c: &ColorerConfig| Ok(Box::new(OneToTwoSided::new(c, leaf.clone())?) as _));
    let mut router = GenToBptRouter::new("va-rand", &cfg, two)?;
    let r = drive(&mut router, &s);
    assert!(r.error.is_none() && check_proper(&s, &r.assignments).is_empty());

    let st = router.stats();
    println!("t={} inner Δ={} max part degree={}", router.code_length(), router.inner_delta(), st.max_part_degree);
    println!("edges per part: {:?}", st.per_part);
    println!("colors per part: {:?}", palette_stats(&r.assignments).by_first);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
