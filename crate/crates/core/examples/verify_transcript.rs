//! Transcripts as text, and what the verifier says about a tampered one.

use std::error::Error;

use strandcolor::colorers::Profile;
use strandcolor::harness::{run_one, RunSpec};
use strandcolor::stream::parse_stream;
use strandcolor::transcript::parse_transcript;
use strandcolor::verification::verify_report;

pub fn run() -> Result<(), Box<dyn Error>> {
    let s = parse_stream("h n=4 delta=2 mode=ea\ne 1 2\ne 2 3\ne 3 4\ne 4 1\n")?;
    let out = run_one(&RunSpec::new("greedy", Profile::Desk, 0), &s)?;
    let text = out.transcript.serialize();
    print!("{text}");
    println!("{}", serde_json::to_string(&out.summary)?);

    let tampered = text.replace("a 2 2 3 2", "a 2 2 3 1");
    let t = parse_transcript(&tampered)?;
    let report = verify_report(&s, &t.assignments());
    for v in &report.violations {
        println!("{v}");
    }
    assert!(!report.ok);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
