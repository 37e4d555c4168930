//! A small benchmark matrix written as CSV.

use std::error::Error;

use strandcolor::colorers::Profile;
use strandcolor::harness::{bench, bench_csv, generate, BenchSpec, GenKind, GenSpec};

pub fn run() -> Result<(), Box<dyn Error>> {
    let mut streams = Vec::new();
    for seed in 1..=2 {
        let spec = GenSpec {
            kind: Some(GenKind::RandomSimple),
            n: Some(96),
            delta: Some(16),
            bipartite: true,
            seed,
            ..Default::default()
        };
        streams.push((format!("bip-{seed}"), generate(&spec)?));
    }
    let spec = BenchSpec {
        algos: ["greedy", "rand-ea", "det-ea", "va-to-ea", "conj-ea"].map(String::from).to_vec(),
        profile: Profile::Desk,
        params: Vec::new(),
        streams,
        seeds: (1..=4).collect(),
    };
    print!("{}", bench_csv(&bench(&spec)?)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
