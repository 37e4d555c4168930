//! Driving a colorer over a stream, and the transcript text format.
//!
//! ```text
//! h n=4 delta=2 mode=ea algo=greedy profile=desk seed=1 regime=main
//! a 1 1 2 1
//! a 2 2 3 2
//! f
//! s palette=2 state_bits_peak=12 errors=0
//! ```
//! A failed run has an `x <kind> <message>` line instead of `f`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use crate::colorers::{build_colorer, Assignment, ColorError, ColorTuple, Colorer, ColorerConfig, Profile};
use crate::stream::{GraphStream, Mode, StreamError, StreamHeader, Vertex};
use crate::verification::palette_stats;

/// Everything observed while driving one colorer over one stream.
#[derive(Debug)]
pub struct RunReport {
    pub algo: String,
    pub regime: String,
    pub palette_bound: u64,
    pub online: bool,
    pub assignments: Vec<Assignment>,
    pub state_bits_peak: u64,
    pub error: Option<ColorError>,
    pub finalized: bool,
    /// Events after which an online colorer did not answer exactly that event's edges.
    pub online_breaches: u64,
    pub wall: Duration,
}

impl RunReport {
    pub fn palette(&self) -> usize {
        palette_stats(&self.assignments).distinct
    }
}

/// Feeds every event, then finalizes. Stops at the first error.
pub fn drive(colorer: &mut dyn Colorer, stream: &GraphStream) -> RunReport {
    let start = Instant::now();
    let online = colorer.is_online();
    let mut assignments = Vec::with_capacity(stream.edge_count());
    let mut peak = colorer.state_size_bits();
    let mut error = None;
    let mut breaches = 0;
    let mut finalized = false;
    for ev in &stream.events {
        match colorer.process(ev) {
            Ok(out) => {
                if online {
                    let mut want: Vec<u64> = ev.edges().iter().map(|e| e.seq).collect();
                    let mut got: Vec<u64> = out.iter().map(|a| a.seq).collect();
                    want.sort_unstable();
                    got.sort_unstable();
                    if want != got {
                        breaches += 1;
                    }
                }
                assignments.extend(out);
            }
            Err(e) => {
                error = Some(e);
                break;
            }
        }
        peak = peak.max(colorer.state_size_bits());
    }
    if error.is_none() {
        match colorer.finalize() {
            Ok(out) => {
                if online && !out.is_empty() {
                    breaches += 1;
                }
                assignments.extend(out);
                finalized = true;
            }
            Err(e) => error = Some(e),
        }
        peak = peak.max(colorer.state_size_bits());
    }
    RunReport {
        algo: colorer.name().to_string(),
        regime: colorer.regime().to_string(),
        palette_bound: colorer.palette_bound(),
        online,
        assignments,
        state_bits_peak: peak,
        error,
        finalized,
        online_breaches: breaches,
        wall: start.elapsed(),
    }
}

/// Builds the named colorer from the stream header and drives it.
pub fn run(algo: &str, cfg: &ColorerConfig, stream: &GraphStream) -> Result<RunReport, ColorError> {
    let mut c = build_colorer(algo, cfg)?;
    let mut report = drive(c.as_mut(), stream);
    report.algo = algo.to_string();
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranscriptLine {
    pub seq: u64,
    pub u: Vertex,
    pub v: Vertex,
    pub color: ColorTuple,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summary {
    pub palette: u64,
    pub state_bits_peak: u64,
    pub errors: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub header: StreamHeader,
    pub algo: String,
    pub profile: Profile,
    pub seed: u64,
    pub regime: String,
    pub lines: Vec<TranscriptLine>,
    pub finalized: bool,
    /// `(kind, message)` of the error that stopped the run.
    pub error: Option<(String, String)>,
    pub summary: Option<Summary>,
}

impl Transcript {
    pub fn from_report(stream: &GraphStream, report: &RunReport, profile: Profile, seed: u64) -> Self {
        let ends: HashMap<u64, (Vertex, Vertex)> = stream.edges().map(|e| (e.seq, (e.u, e.v))).collect();
        let lines = report
            .assignments
            .iter()
            .map(|a| {
                let (u, v) = ends.get(&a.seq).copied().unwrap_or((0, 0));
                TranscriptLine { seq: a.seq, u, v, color: a.color.clone() }
            })
            .collect();
        Transcript {
            header: stream.header,
            algo: report.algo.clone(),
            profile,
            seed,
            regime: report.regime.clone(),
            lines,
            finalized: report.finalized,
            error: report.error.as_ref().map(|e| (e.kind().to_string(), e.to_string())),
            summary: Some(Summary {
                palette: report.palette() as u64,
                state_bits_peak: report.state_bits_peak,
                errors: report.error.is_some() as u64,
            }),
        }
    }

    pub fn assignments(&self) -> Vec<Assignment> {
        self.lines.iter().map(|l| Assignment::new(l.seq, l.color.clone())).collect()
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} algo={} profile={} seed={} regime={}",
            self.header, self.algo, self.profile, self.seed, self.regime
        );
        for l in &self.lines {
            let _ = writeln!(out, "a {} {} {} {}", l.seq, l.u, l.v, l.color);
        }
        if let Some((kind, msg)) = &self.error {
            let _ = writeln!(out, "x {kind} {msg}");
        } else if self.finalized {
            out.push_str("f\n");
        }
        if let Some(s) = &self.summary {
            let _ = writeln!(out, "s palette={} state_bits_peak={} errors={}", s.palette, s.state_bits_peak, s.errors);
        }
        out
    }
}

fn perr(line: usize, msg: impl Into<String>) -> StreamError {
    StreamError::Parse { line, msg: msg.into() }
}

fn fields(rest: &[&str], line: usize) -> Result<HashMap<String, String>, StreamError> {
    rest.iter()
        .map(|f| {
            f.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| perr(line, format!("expected key=value, got {f:?}")))
        })
        .collect()
}

fn num<T: std::str::FromStr>(m: &HashMap<String, String>, key: &str, line: usize) -> Result<T, StreamError> {
    m.get(key)
        .ok_or_else(|| perr(line, format!("missing {key}")))?
        .parse()
        .map_err(|_| perr(line, format!("bad {key}")))
}

pub fn parse_transcript(text: &str) -> Result<Transcript, StreamError> {
    let mut t: Option<Transcript> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let parts: Vec<&str> = body.split_whitespace().collect();
        if parts[0] == "h" {
            if t.is_some() {
                return Err(perr(line, "second header"));
            }
            let m = fields(&parts[1..], line)?;
            let mode: Mode = m
                .get("mode")
                .ok_or_else(|| perr(line, "missing mode"))?
                .parse()
                .map_err(|e: String| perr(line, e))?;
            let header = StreamHeader {
                n: num(&m, "n", line)?,
                delta: num(&m, "delta", line)?,
                mode,
                a: m.get("a").map(|a| a.parse()).transpose().map_err(|_| perr(line, "bad a"))?,
            };
            t = Some(Transcript {
                header,
                algo: m.get("algo").cloned().ok_or_else(|| perr(line, "missing algo"))?,
                profile: m
                    .get("profile")
                    .ok_or_else(|| perr(line, "missing profile"))?
                    .parse()
                    .map_err(|e: String| perr(line, e))?,
                seed: num(&m, "seed", line)?,
                regime: m.get("regime").cloned().unwrap_or_else(|| "main".into()),
                lines: Vec::new(),
                finalized: false,
                error: None,
                summary: None,
            });
            continue;
        }
        let t = t.as_mut().ok_or_else(|| perr(line, "missing header"))?;
        match parts[0] {
            "a" if parts.len() == 5 => {
                let p = |k: usize| parts[k].parse::<u64>().map_err(|_| perr(line, format!("bad number {:?}", parts[k])));
                t.lines.push(TranscriptLine {
                    seq: p(1)?,
                    u: p(2)? as Vertex,
                    v: p(3)? as Vertex,
                    color: parts[4].parse().map_err(|e: String| perr(line, e))?,
                });
            }
            "f" if parts.len() == 1 => t.finalized = true,
            "x" if parts.len() >= 2 => t.error = Some((parts[1].to_string(), parts[2..].join(" "))),
            "s" => {
                let m = fields(&parts[1..], line)?;
                t.summary = Some(Summary {
                    palette: num(&m, "palette", line)?,
                    state_bits_peak: num(&m, "state_bits_peak", line)?,
                    errors: num(&m, "errors", line)?,
                });
            }
            other => return Err(perr(line, format!("unexpected line kind {other:?}"))),
        }
    }
    t.ok_or_else(|| perr(0, "empty transcript"))
}
