//! Library side of the command line tool: stream generation, single runs, verification and
//! benchmark tables. The binary only parses flags and maps errors to exit codes.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::colorers::{algo_info, ColorError, ColorerConfig, InputShape, Profile};
use crate::stream::{
    flatten_to_edge_arrival, gen_path_stream, gen_random_bipartite_multigraph_stream, gen_random_multigraph_stream,
    gen_regular_bipartite_stream, gen_repeated_pair_stream, gen_star_stream, random_arrival_order, to_one_sided,
    to_vertex_arrival, GraphStream, Mode, StreamError,
};
use crate::transcript::{run, RunReport, Transcript};
use crate::verification::check_proper;

pub const SCHEMA: u32 = 1;
pub const SEED_ENV: &str = "STRANDCOLOR_SEED";

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("{0}")]
    BadArgs(String),
    #[error(transparent)]
    Stream(#[from] StreamError),
    #[error(transparent)]
    Color(#[from] ColorError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn bad(msg: impl Into<String>) -> HarnessError {
    HarnessError::BadArgs(msg.into())
}

/// `STRANDCOLOR_SEED`, when set, wins over the flag.
pub fn effective_seed(flag: u64, env: Option<&str>) -> Result<u64, HarnessError> {
    match env {
        Some(s) => s.trim().parse().map_err(|_| bad(format!("{SEED_ENV}={s:?} is not an integer"))),
        None => Ok(flag),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GenKind {
    RegularBipartite,
    RandomSimple,
    RandomMultigraph,
    Star,
    Path,
    RepeatedPair,
}

impl GenKind {
    pub const ALL: [GenKind; 6] = [
        GenKind::RegularBipartite,
        GenKind::RandomSimple,
        GenKind::RandomMultigraph,
        GenKind::Star,
        GenKind::Path,
        GenKind::RepeatedPair,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GenKind::RegularBipartite => "regular-bipartite",
            GenKind::RandomSimple => "random-simple",
            GenKind::RandomMultigraph => "random-multigraph",
            GenKind::Star => "star",
            GenKind::Path => "path",
            GenKind::RepeatedPair => "repeated-pair",
        }
    }
}

impl std::str::FromStr for GenKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GenKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown stream kind {s:?}"))
    }
}

/// Generator request. Unused fields are ignored by the chosen kind.
#[derive(Clone, Debug, Default)]
pub struct GenSpec {
    pub kind: Option<GenKind>,
    pub n: Option<u32>,
    pub na: Option<u32>,
    pub nb: Option<u32>,
    pub delta: Option<u32>,
    pub bias: Option<f64>,
    pub bipartite: bool,
    pub seed: u64,
    /// Convert the result to this arrival mode.
    pub arrival: Option<Mode>,
}

fn need(v: Option<u32>, flag: &str, kind: GenKind) -> Result<u32, HarnessError> {
    v.ok_or_else(|| bad(format!("--kind {} needs --{flag}", kind.name())))
}

pub fn generate(spec: &GenSpec) -> Result<GraphStream, HarnessError> {
    let kind = spec.kind.ok_or_else(|| bad("missing --kind"))?;
    let sides = |spec: &GenSpec| match (spec.na, spec.nb, spec.n) {
        (Some(a), Some(b), _) => Some((a, b)),
        (Some(a), None, Some(n)) if n > a => Some((a, n - a)),
        _ if spec.bipartite => spec.n.map(|n| (n.div_ceil(2), n / 2)),
        _ => None,
    };
    let s = match kind {
        GenKind::RegularBipartite => gen_regular_bipartite_stream(
            need(spec.na, "na", kind)?,
            need(spec.nb, "nb", kind)?,
            need(spec.delta, "delta", kind)?,
            spec.seed,
        )?,
        GenKind::RandomSimple | GenKind::RandomMultigraph => {
            let delta = need(spec.delta, "delta", kind)?;
            let bias = if kind == GenKind::RandomSimple { 0.0 } else { spec.bias.unwrap_or(0.5) };
            match sides(spec) {
                Some((a, b)) => gen_random_bipartite_multigraph_stream(a, b, delta, bias, spec.seed)?,
                None => gen_random_multigraph_stream(need(spec.n, "n", kind)?, delta, bias, spec.seed)?,
            }
        }
        GenKind::Star => gen_star_stream(need(spec.n, "n", kind)?)?,
        GenKind::Path => gen_path_stream(need(spec.n, "n", kind)?, spec.bipartite)?,
        GenKind::RepeatedPair => gen_repeated_pair_stream(need(spec.delta, "delta", kind)?)?,
    };
    match spec.arrival {
        None => Ok(s),
        Some(m) => convert(&s, m, spec.seed),
    }
}

/// Re-expresses `s` in arrival mode `m`. Vertex arrival uses a seeded random order.
pub fn convert(s: &GraphStream, m: Mode, seed: u64) -> Result<GraphStream, HarnessError> {
    if s.header.mode == m {
        return Ok(s.clone());
    }
    Ok(match m {
        Mode::Ea => flatten_to_edge_arrival(s),
        Mode::Va => {
            let order = random_arrival_order(s.header.n, seed);
            to_vertex_arrival(&flatten_to_edge_arrival(s), Some(&order))?
        }
        Mode::Osva => to_one_sided(s)?,
    })
}

/// Brings a stream into the input shape an algorithm expects.
pub fn adapt(s: &GraphStream, shape: InputShape, seed: u64) -> Result<GraphStream, HarnessError> {
    match shape {
        InputShape::EdgeArrival => convert(s, Mode::Ea, seed),
        InputShape::BipartiteEdgeArrival => {
            if s.header.a.is_none() {
                return Err(bad("algorithm needs a bipartite stream (header a=)"));
            }
            convert(s, Mode::Ea, seed)
        }
        InputShape::VertexArrival => convert(s, Mode::Va, seed),
        InputShape::OneSided => {
            if s.header.a.is_none() {
                return Err(bad("algorithm needs a bipartite stream (header a=)"));
            }
            convert(s, Mode::Osva, seed)
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunSpec {
    pub algo: String,
    pub profile: Profile,
    pub seed: u64,
    pub failure_prob: Option<f64>,
    pub params: Vec<(String, String)>,
}

impl RunSpec {
    pub fn new(algo: &str, profile: Profile, seed: u64) -> Self {
        RunSpec { algo: algo.to_string(), profile, seed, failure_prob: None, params: Vec::new() }
    }

    pub fn config(&self, s: &GraphStream) -> ColorerConfig {
        let mut cfg = ColorerConfig::for_stream(&s.header, self.profile, self.seed);
        if let Some(p) = self.failure_prob {
            cfg.failure_prob = p;
        }
        for (k, v) in &self.params {
            cfg.params.insert(k.clone(), v.clone());
        }
        cfg
    }
}

/// Splits `key=value`.
pub fn parse_param(s: &str) -> Result<(String, String), HarnessError> {
    match s.split_once('=') {
        Some((k, v)) if !k.is_empty() => Ok((k.to_string(), v.to_string())),
        _ => Err(bad(format!("expected key=value, got {s:?}"))),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub schema: u32,
    pub algo: String,
    pub profile: String,
    pub seed: u64,
    pub regime: String,
    pub n: u32,
    pub delta: u32,
    pub edges: usize,
    pub palette: usize,
    pub palette_bound: u64,
    pub state_bits_peak: u64,
    pub aborts: u32,
    pub wall_ms: u64,
    pub error: Option<String>,
}

pub struct RunOutcome {
    pub report: RunReport,
    pub transcript: Transcript,
    pub summary: RunSummary,
}

/// Runs `spec.algo` on `stream`. The stream must already have the algorithm's input shape.
pub fn run_one(spec: &RunSpec, stream: &GraphStream) -> Result<RunOutcome, HarnessError> {
    if algo_info(&spec.algo).is_none() {
        return Err(bad(format!("unknown algorithm {:?}", spec.algo)));
    }
    let report = run(&spec.algo, &spec.config(stream), stream)?;
    let transcript = Transcript::from_report(stream, &report, spec.profile, spec.seed);
    let summary = RunSummary {
        schema: SCHEMA,
        algo: spec.algo.clone(),
        profile: spec.profile.to_string(),
        seed: spec.seed,
        regime: report.regime.clone(),
        n: stream.header.n,
        delta: stream.header.delta,
        edges: stream.edge_count(),
        palette: report.palette(),
        palette_bound: report.palette_bound,
        state_bits_peak: report.state_bits_peak,
        aborts: report.error.is_some() as u32,
        wall_ms: report.wall.as_millis() as u64,
        error: report.error.as_ref().map(|e| e.kind().to_string()),
    };
    Ok(RunOutcome { report, transcript, summary })
}

/// One benchmark row: one algorithm on one stream, aggregated over seeds.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BenchRow {
    pub schema: u32,
    pub algo: String,
    pub stream: String,
    pub n: u32,
    pub delta: u32,
    pub edges: usize,
    pub seeds: usize,
    pub palette_max: usize,
    pub palette_bound: u64,
    pub state_bits_max: u64,
    pub aborts: usize,
    pub abort_rate: f64,
    pub violations: usize,
}

pub struct BenchSpec {
    pub algos: Vec<String>,
    pub profile: Profile,
    pub params: Vec<(String, String)>,
    /// Named input streams; each is adapted to every algorithm's input shape.
    pub streams: Vec<(String, GraphStream)>,
    pub seeds: Vec<u64>,
}

pub fn bench(spec: &BenchSpec) -> Result<Vec<BenchRow>, HarnessError> {
    if spec.seeds.is_empty() {
        return Ok(Vec::new());
    }
    let mut inputs = BTreeMap::new();
    for algo in &spec.algos {
        let info = algo_info(algo).ok_or_else(|| bad(format!("unknown algorithm {algo:?}")))?;
        for (name, s) in &spec.streams {
            let adapted = adapt(s, info.input, 0).map_err(|e| bad(format!("{algo} on {name}: {e}")))?;
            inputs.insert((algo.clone(), name.clone()), adapted);
        }
    }
    let cells: Vec<(&(String, String), &GraphStream, u64)> =
        inputs.iter().flat_map(|(k, s)| spec.seeds.iter().map(move |&seed| (k, s, seed))).collect();
    let results: Vec<Result<(usize, u64, u64, bool, usize), HarnessError>> = cells
        .par_iter()
        .map(|((algo, _), s, seed)| {
            let rs = RunSpec { algo: algo.clone(), profile: spec.profile, seed: *seed, failure_prob: None, params: spec.params.clone() };
            let out = run_one(&rs, s)?;
            let violations = if out.report.error.is_none() { check_proper(s, &out.report.assignments).len() } else { 0 };
            Ok((out.report.palette(), out.report.palette_bound, out.report.state_bits_peak, out.report.error.is_some(), violations))
        })
        .collect();
    let mut rows: BTreeMap<&(String, String), BenchRow> = BTreeMap::new();
    for ((key, s, _), r) in cells.iter().zip(results) {
        let (palette, bound, bits, aborted, violations) = r?;
        let row = rows.entry(key).or_insert_with(|| BenchRow {
            schema: SCHEMA,
            algo: key.0.clone(),
            stream: key.1.clone(),
            n: s.header.n,
            delta: s.header.delta,
            edges: s.edge_count(),
            seeds: 0,
            palette_max: 0,
            palette_bound: bound,
            state_bits_max: 0,
            aborts: 0,
            abort_rate: 0.0,
            violations: 0,
        });
        row.seeds += 1;
        row.palette_max = row.palette_max.max(palette);
        row.state_bits_max = row.state_bits_max.max(bits);
        row.aborts += aborted as usize;
        row.violations += violations;
        row.abort_rate = row.aborts as f64 / row.seeds as f64;
    }
    Ok(rows.into_values().collect())
}

pub const BENCH_COLUMNS: [&str; 13] = [
    "schema",
    "algo",
    "stream",
    "n",
    "delta",
    "edges",
    "seeds",
    "palette_max",
    "palette_bound",
    "state_bits_max",
    "aborts",
    "abort_rate",
    "violations",
];

pub fn bench_csv(rows: &[BenchRow]) -> Result<String, HarnessError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(BENCH_COLUMNS)?;
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| HarnessError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
