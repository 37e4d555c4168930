//! Graph streams: edge arrivals, vertex arrivals and one-sided vertex arrivals.

mod generate;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

pub use generate::{
    flatten_to_edge_arrival, gen_path_stream, gen_random_bipartite_multigraph_stream, gen_random_multigraph_stream,
    gen_regular_bipartite_stream, gen_repeated_pair_stream, gen_star_stream, random_arrival_order, to_one_sided,
    to_vertex_arrival,
};

pub type Vertex = u32;

/// Unordered vertex pair, smaller endpoint first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeKey(pub Vertex, pub Vertex);

impl EdgeKey {
    pub fn new(a: Vertex, b: Vertex) -> Self {
        if a <= b {
            EdgeKey(a, b)
        } else {
            EdgeKey(b, a)
        }
    }
}

/// One arriving copy of an edge. `seq` is its 1-based position in the stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub seq: u64,
    pub u: Vertex,
    pub v: Vertex,
}

impl Edge {
    pub fn new(seq: u64, a: Vertex, b: Vertex) -> Self {
        let k = EdgeKey::new(a, b);
        Edge { seq, u: k.0, v: k.1 }
    }

    pub fn key(&self) -> EdgeKey {
        EdgeKey(self.u, self.v)
    }

    pub fn other(&self, x: Vertex) -> Vertex {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Ea,
    Va,
    Osva,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Ea => "ea",
            Mode::Va => "va",
            Mode::Osva => "osva",
        })
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ea" => Ok(Mode::Ea),
            "va" => Ok(Mode::Va),
            "osva" => Ok(Mode::Osva),
            other => Err(format!("unknown mode {other:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StreamHeader {
    pub n: u32,
    pub delta: u32,
    pub mode: Mode,
    /// Size of side A = `{1, ..., a}` when the graph is declared bipartite.
    pub a: Option<u32>,
}

impl StreamHeader {
    pub fn in_a(&self, v: Vertex) -> Option<bool> {
        self.a.map(|a| v <= a)
    }
}

impl fmt::Display for StreamHeader {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h n={} delta={} mode={}", self.n, self.delta, self.mode)?;
        if let Some(a) = self.a {
            write!(f, " a={a}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StreamEvent {
    Edge(Edge),
    Vertex { vertex: Vertex, edges: Vec<Edge> },
}

impl StreamEvent {
    pub fn edges(&self) -> &[Edge] {
        match self {
            StreamEvent::Edge(e) => std::slice::from_ref(e),
            StreamEvent::Vertex { edges, .. } => edges,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StreamError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: vertex {vertex} exceeds declared max degree {delta}")]
    DegreeExceeded { line: usize, vertex: Vertex, delta: u32 },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: Vertex },
    #[error("line {line}: {msg}")]
    ModeViolation { line: usize, msg: String },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphStream {
    pub header: StreamHeader,
    pub events: Vec<StreamEvent>,
}

impl GraphStream {
    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.events.iter().flat_map(|e| e.edges().iter())
    }

    pub fn edge_count(&self) -> usize {
        self.events.iter().map(|e| e.edges().len()).sum()
    }

    /// Degree of every vertex, counting parallel copies. Index 0 is unused.
    pub fn degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.header.n as usize + 1];
        for e in self.edges() {
            deg[e.u as usize] += 1;
            deg[e.v as usize] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> u32 {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Largest number of copies of a single vertex pair.
    pub fn max_multiplicity(&self) -> u32 {
        let mut counts = std::collections::HashMap::new();
        self.edges().fold(0, |m, e| {
            let c = counts.entry(e.key()).or_insert(0u32);
            *c += 1;
            m.max(*c)
        })
    }

    pub fn serialize(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for GraphStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.header)?;
        for ev in &self.events {
            match ev {
                StreamEvent::Edge(e) => writeln!(f, "e {} {}", e.u, e.v)?,
                StreamEvent::Vertex { vertex, edges } => {
                    write!(f, "v {vertex}")?;
                    for e in edges {
                        write!(f, " {}", e.other(*vertex))?;
                    }
                    writeln!(f)?;
                }
            }
        }
        Ok(())
    }
}

/// Validating builder; assigns contiguous sequence numbers.
#[derive(Debug)]
pub struct StreamBuilder {
    header: StreamHeader,
    events: Vec<StreamEvent>,
    deg: Vec<u32>,
    arrived: HashSet<Vertex>,
    next_seq: u64,
}

impl StreamBuilder {
    pub fn new(header: StreamHeader) -> Result<Self, StreamError> {
        Self::check_header(&header, 0)?;
        Ok(StreamBuilder {
            header,
            events: Vec::new(),
            deg: vec![0; header.n as usize + 1],
            arrived: HashSet::new(),
            next_seq: 1,
        })
    }

    fn check_header(h: &StreamHeader, line: usize) -> Result<(), StreamError> {
        if let Some(a) = h.a {
            if a > h.n {
                return Err(StreamError::Parse { line, msg: format!("a={a} exceeds n={}", h.n) });
            }
        } else if h.mode == Mode::Osva {
            return Err(StreamError::Parse { line, msg: "one-sided stream needs a=<size of A>".into() });
        }
        Ok(())
    }

    fn check_vertex(&self, v: Vertex, line: usize) -> Result<(), StreamError> {
        if v == 0 || v > self.header.n {
            Err(StreamError::Parse { line, msg: format!("vertex {v} outside 1..={}", self.header.n) })
        } else {
            Ok(())
        }
    }

    fn check_pair(&self, x: Vertex, y: Vertex, line: usize) -> Result<(), StreamError> {
        self.check_vertex(x, line)?;
        self.check_vertex(y, line)?;
        if x == y {
            return Err(StreamError::SelfLoop { line, vertex: x });
        }
        if let (Some(sx), Some(sy)) = (self.header.in_a(x), self.header.in_a(y)) {
            if sx == sy {
                return Err(StreamError::ModeViolation { line, msg: format!("edge {x}-{y} inside one side") });
            }
        }
        Ok(())
    }

    fn bump(&mut self, x: Vertex, y: Vertex, line: usize) -> Result<Edge, StreamError> {
        for v in [x, y] {
            self.deg[v as usize] += 1;
            if self.deg[v as usize] > self.header.delta {
                return Err(StreamError::DegreeExceeded { line, vertex: v, delta: self.header.delta });
            }
        }
        let e = Edge::new(self.next_seq, x, y);
        self.next_seq += 1;
        Ok(e)
    }

    pub fn push_edge(&mut self, x: Vertex, y: Vertex) -> Result<(), StreamError> {
        self.push_edge_at(x, y, 0)
    }

    fn push_edge_at(&mut self, x: Vertex, y: Vertex, line: usize) -> Result<(), StreamError> {
        if self.header.mode != Mode::Ea {
            return Err(StreamError::ModeViolation { line, msg: "edge event in a vertex-arrival stream".into() });
        }
        self.check_pair(x, y, line)?;
        let e = self.bump(x, y, line)?;
        self.events.push(StreamEvent::Edge(e));
        Ok(())
    }

    /// Vertex `x` arrives with its edges to `neighbors` (repeats allowed).
    pub fn push_vertex(&mut self, x: Vertex, neighbors: &[Vertex]) -> Result<(), StreamError> {
        self.push_vertex_at(x, neighbors, 0)
    }

    fn push_vertex_at(&mut self, x: Vertex, neighbors: &[Vertex], line: usize) -> Result<(), StreamError> {
        let mode = self.header.mode;
        if mode == Mode::Ea {
            return Err(StreamError::ModeViolation { line, msg: "vertex event in an edge-arrival stream".into() });
        }
        self.check_vertex(x, line)?;
        if mode == Mode::Osva && self.header.in_a(x) != Some(true) {
            return Err(StreamError::ModeViolation { line, msg: format!("arriving vertex {x} is not in A") });
        }
        if !self.arrived.insert(x) {
            return Err(StreamError::ModeViolation { line, msg: format!("vertex {x} arrives twice") });
        }
        let mut edges = Vec::with_capacity(neighbors.len());
        for &y in neighbors {
            self.check_pair(x, y, line)?;
            if mode == Mode::Va && !self.arrived.contains(&y) {
                return Err(StreamError::ModeViolation { line, msg: format!("neighbor {y} of {x} has not arrived") });
            }
            edges.push(self.bump(x, y, line)?);
        }
        self.events.push(StreamEvent::Vertex { vertex: x, edges });
        Ok(())
    }

    pub fn finish(self) -> GraphStream {
        GraphStream { header: self.header, events: self.events }
    }
}

fn parse_header(line_no: usize, toks: &[&str]) -> Result<StreamHeader, StreamError> {
    let err = |msg: String| StreamError::Parse { line: line_no, msg };
    let (mut n, mut delta, mut mode, mut a) = (None, None, None, None);
    for t in toks {
        let (k, v) = t.split_once('=').ok_or_else(|| err(format!("expected key=value, got {t:?}")))?;
        let num = || v.parse::<u32>().map_err(|_| err(format!("bad integer {v:?} for {k}")));
        match k {
            "n" => n = Some(num()?),
            "delta" => delta = Some(num()?),
            "a" => a = Some(num()?),
            "mode" => mode = Some(v.parse::<Mode>().map_err(err)?),
            _ => {}
        }
    }
    Ok(StreamHeader {
        n: n.ok_or_else(|| err("header missing n".into()))?,
        delta: delta.ok_or_else(|| err("header missing delta".into()))?,
        mode: mode.ok_or_else(|| err("header missing mode".into()))?,
        a,
    })
}

fn parse_ints(line_no: usize, toks: &[&str]) -> Result<Vec<u32>, StreamError> {
    toks.iter()
        .map(|t| t.parse::<u32>().map_err(|_| StreamError::Parse { line: line_no, msg: format!("bad integer {t:?}") }))
        .collect()
}

pub fn parse_stream(text: &str) -> Result<GraphStream, StreamError> {
    let mut builder: Option<StreamBuilder> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match (toks[0], builder.as_mut()) {
            ("h", None) => {
                let h = parse_header(line_no, &toks[1..])?;
                StreamBuilder::check_header(&h, line_no)?;
                builder = Some(StreamBuilder::new(h)?);
            }
            ("h", Some(_)) => return Err(StreamError::Parse { line: line_no, msg: "second header".into() }),
            (_, None) => return Err(StreamError::Parse { line: line_no, msg: "event before header".into() }),
            ("e", Some(b)) => {
                let xs = parse_ints(line_no, &toks[1..])?;
                if xs.len() != 2 {
                    return Err(StreamError::Parse { line: line_no, msg: "edge needs two endpoints".into() });
                }
                b.push_edge_at(xs[0], xs[1], line_no)?;
            }
            ("v", Some(b)) => {
                let xs = parse_ints(line_no, &toks[1..])?;
                if xs.is_empty() {
                    return Err(StreamError::Parse { line: line_no, msg: "vertex event needs a vertex".into() });
                }
                b.push_vertex_at(xs[0], &xs[1..], line_no)?;
            }
            (other, Some(_)) => {
                return Err(StreamError::Parse { line: line_no, msg: format!("unknown record {other:?}") })
            }
        }
    }
    builder
        .map(StreamBuilder::finish)
        .ok_or(StreamError::Parse { line: 0, msg: "missing header".into() })
}
