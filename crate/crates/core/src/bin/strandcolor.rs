use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use strandcolor::colorers::{algo_info, Profile, ALGORITHMS};
use strandcolor::harness::{
    adapt, bench, bench_csv, effective_seed, generate, parse_param, run_one, BenchSpec, GenKind, GenSpec, HarnessError,
    RunSpec, SEED_ENV,
};
use strandcolor::stream::{parse_stream, GraphStream, Mode};
use strandcolor::transcript::parse_transcript;
use strandcolor::verification::verify_report;

#[derive(Parser)]
#[command(name = "strandcolor", version, about = "Streaming edge coloring experiments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a stream file.
    Gen(GenArgs),
    /// Run a colorer on a stream and write its transcript.
    Run(RunArgs),
    /// Check a transcript against its stream.
    Verify(VerifyArgs),
    /// Run a matrix of algorithms and seeds, write CSV.
    Bench(BenchArgs),
    /// List the available algorithms.
    Algos,
}

#[derive(Args)]
struct StreamGen {
    #[arg(long)]
    kind: Option<GenKind>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    na: Option<u32>,
    #[arg(long)]
    nb: Option<u32>,
    #[arg(long)]
    delta: Option<u32>,
    /// Probability of repeating an earlier pair (random-multigraph).
    #[arg(long)]
    bias: Option<f64>,
    #[arg(long)]
    bipartite: bool,
    /// Convert to ea, va or osva.
    #[arg(long)]
    arrival: Option<Mode>,
}

impl StreamGen {
    fn spec(&self, seed: u64) -> GenSpec {
        GenSpec {
            kind: self.kind,
            n: self.n,
            na: self.na,
            nb: self.nb,
            delta: self.delta,
            bias: self.bias,
            bipartite: self.bipartite,
            seed,
            arrival: self.arrival,
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    g: StreamGen,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    algo: String,
    #[arg(long)]
    stream: PathBuf,
    #[arg(long, default_value = "desk")]
    profile: Profile,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Target failure probability.
    #[arg(long)]
    failure_prob: Option<f64>,
    /// Constant override, `key=value`; repeatable.
    #[arg(long = "param")]
    params: Vec<String>,
    /// Convert the stream to the algorithm's input shape first.
    #[arg(long)]
    adapt: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    stream: PathBuf,
    #[arg(long)]
    transcript: PathBuf,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated algorithm names.
    #[arg(long, value_delimiter = ',', required = true)]
    algos: Vec<String>,
    /// Stream files; repeatable.
    #[arg(long = "stream")]
    streams: Vec<PathBuf>,
    #[command(flatten)]
    g: StreamGen,
    /// Generator seeds, one stream each.
    #[arg(long, value_delimiter = ',')]
    gen_seeds: Vec<u64>,
    /// Colorer seeds. May be empty.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    seeds: Vec<u64>,
    #[arg(long, default_value = "desk")]
    profile: Profile,
    #[arg(long = "param")]
    params: Vec<String>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

enum Fail {
    Usage(String),
    Run(String),
}

impl From<HarnessError> for Fail {
    fn from(e: HarnessError) -> Self {
        Fail::Usage(e.to_string())
    }
}

fn read(path: &PathBuf) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Result<(), Fail> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Fail::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_stream(path: &PathBuf) -> Result<GraphStream, Fail> {
    parse_stream(&read(path)?).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))
}

fn seed(flag: u64) -> Result<u64, Fail> {
    Ok(effective_seed(flag, std::env::var(SEED_ENV).ok().as_deref())?)
}

fn params(list: &[String]) -> Result<Vec<(String, String)>, Fail> {
    Ok(list.iter().map(|p| parse_param(p)).collect::<Result<_, _>>()?)
}

fn cmd_gen(a: GenArgs) -> Result<(), Fail> {
    let s = generate(&a.g.spec(seed(a.seed)?))?;
    write_out(&a.output, &s.serialize())
}

fn cmd_run(a: RunArgs) -> Result<(), Fail> {
    let info = algo_info(&a.algo).ok_or_else(|| Fail::Usage(format!("unknown algorithm {:?}", a.algo)))?;
    let mut stream = load_stream(&a.stream)?;
    let seed = seed(a.seed)?;
    if a.adapt {
        stream = adapt(&stream, info.input, seed)?;
    }
    let spec = RunSpec { algo: a.algo, profile: a.profile, seed, failure_prob: a.failure_prob, params: params(&a.params)? };
    let out = run_one(&spec, &stream)?;
    write_out(&a.output, &out.transcript.serialize())?;
    let json = serde_json::to_string_pretty(&out.summary).expect("summary serializes");
    match &a.json {
        Some(p) => fs::write(p, json + "\n").map_err(|e| Fail::Usage(format!("{}: {e}", p.display())))?,
        None if a.output.is_some() => println!("{json}"),
        None => {}
    }
    match &out.report.error {
        Some(e) => Err(Fail::Run(format!("{}: {e}", e.kind()))),
        None => Ok(()),
    }
}

fn cmd_verify(a: VerifyArgs) -> Result<(), Fail> {
    let stream = load_stream(&a.stream)?;
    let t = parse_transcript(&read(&a.transcript)?).map_err(|e| Fail::Usage(format!("{}: {e}", a.transcript.display())))?;
    let report = verify_report(&stream, &t.assignments());
    for v in &report.violations {
        println!("{v}");
    }
    if let Some(p) = &a.json {
        let json = serde_json::to_string_pretty(&report).expect("report serializes");
        fs::write(p, json + "\n").map_err(|e| Fail::Usage(format!("{}: {e}", p.display())))?;
    }
    if report.ok {
        Ok(())
    } else {
        Err(Fail::Run(format!("{} violation(s)", report.violations.len())))
    }
}

fn cmd_bench(a: BenchArgs) -> Result<(), Fail> {
    let mut streams = Vec::new();
    for p in &a.streams {
        streams.push((p.display().to_string(), load_stream(p)?));
    }
    if a.g.kind.is_some() {
        let gen_seeds = if a.gen_seeds.is_empty() { vec![0] } else { a.gen_seeds.clone() };
        for s in gen_seeds {
            let name = format!("{}-{s}", a.g.kind.expect("checked").name());
            streams.push((name, generate(&a.g.spec(s))?));
        }
    }
    if streams.is_empty() {
        return Err(Fail::Usage("bench needs --stream or --kind".into()));
    }
    let spec = BenchSpec { algos: a.algos, profile: a.profile, params: params(&a.params)?, streams, seeds: a.seeds };
    let rows = bench(&spec)?;
    write_out(&a.output, &bench_csv(&rows)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match cli.cmd {
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Run(a) => cmd_run(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Bench(a) => cmd_bench(a),
        Cmd::Algos => {
            for a in ALGORITHMS {
                println!("{:<12} {:<24} {}", a.name, format!("{:?}", a.input), a.summary);
            }
            Ok(())
        }
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Fail::Run(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
