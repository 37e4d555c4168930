//! Checks on finished colorings. Everything here materializes the whole stream.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::colorers::{Assignment, ColorTuple};
use crate::stream::{GraphStream, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ViolationKind {
    SharedColorAtVertex,
    MissingAssignment,
    DuplicateAssignment,
    UnknownEdge,
    PropertyZBreach,
    DegreeBoundBreach,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub seqs: Vec<u64>,
    pub vertex: Option<Vertex>,
    pub color: Option<String>,
}

impl Violation {
    fn new(kind: ViolationKind, seqs: Vec<u64>) -> Self {
        Violation { kind, seqs, vertex: None, color: None }
    }

    fn at(mut self, v: Vertex) -> Self {
        self.vertex = Some(v);
        self
    }

    fn colored(mut self, c: &ColorTuple) -> Self {
        self.color = Some(c.to_string());
        self
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if let Some(v) = self.vertex {
            write!(f, " vertex={v}")?;
        }
        if let Some(c) = &self.color {
            write!(f, " color={c}")?;
        }
        let seqs: Vec<String> = self.seqs.iter().map(u64::to_string).collect();
        write!(f, " seqs={}", seqs.join(","))
    }
}

/// Empty iff every edge of the stream has exactly one color and no vertex sees a color twice.
///
/// Assignments whose sequence number is not an edge of the stream are reported as `UnknownEdge`.
pub fn check_proper(stream: &GraphStream, assignments: &[Assignment]) -> Vec<Violation> {
    let edges: HashMap<u64, (Vertex, Vertex)> = stream.edges().map(|e| (e.seq, (e.u, e.v))).collect();
    let mut out = Vec::new();
    let mut color_of: BTreeMap<u64, &ColorTuple> = BTreeMap::new();
    let mut dup: BTreeMap<u64, usize> = BTreeMap::new();
    for a in assignments {
        if !edges.contains_key(&a.seq) {
            out.push(Violation::new(ViolationKind::UnknownEdge, vec![a.seq]).colored(&a.color));
            continue;
        }
        if color_of.insert(a.seq, &a.color).is_some() {
            *dup.entry(a.seq).or_insert(1) += 1;
        }
    }
    for (seq, _) in dup {
        out.push(Violation::new(ViolationKind::DuplicateAssignment, vec![seq]));
    }
    let mut missing: Vec<u64> = edges.keys().filter(|s| !color_of.contains_key(s)).copied().collect();
    missing.sort_unstable();
    for seq in missing {
        out.push(Violation::new(ViolationKind::MissingAssignment, vec![seq]));
    }
    let mut at: BTreeMap<(Vertex, &ColorTuple), Vec<u64>> = BTreeMap::new();
    for (&seq, &c) in &color_of {
        let (u, v) = edges[&seq];
        at.entry((u, c)).or_default().push(seq);
        if v != u {
            at.entry((v, c)).or_default().push(seq);
        }
    }
    for ((v, c), seqs) in at {
        if seqs.len() > 1 {
            out.push(Violation::new(ViolationKind::SharedColorAtVertex, seqs).at(v).colored(c));
        }
    }
    out
}

/// Distinct colors overall, by first component, and by everything but the last component.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PaletteStats {
    pub distinct: usize,
    pub by_first: BTreeMap<u32, usize>,
    pub by_parent: BTreeMap<String, usize>,
}

pub fn palette_stats(assignments: &[Assignment]) -> PaletteStats {
    let set: BTreeSet<&ColorTuple> = assignments.iter().map(|a| &a.color).collect();
    let mut stats = PaletteStats { distinct: set.len(), ..Default::default() };
    for c in set {
        let p = c.parts();
        if let Some(&first) = p.first() {
            *stats.by_first.entry(first).or_default() += 1;
        }
        let parent: Vec<String> = p[..p.len().saturating_sub(1)].iter().map(u32::to_string).collect();
        *stats.by_parent.entry(parent.join(":")).or_default() += 1;
    }
    stats
}

/// Block of the edge at vertex `x` once `x` has degree `d`: `ceil(d·C/(sΔ))`.
pub fn degree_block(d: u32, delta: u32, c: u32, s: u32) -> u64 {
    (d as u64 * c as u64).div_ceil(s as u64 * delta as u64)
}

/// Flags every repeat of a neighbor of `v` inside one degree block of `v`.
pub fn check_property_z(stream: &GraphStream, delta: u32, c: u32, s: u32) -> Vec<Violation> {
    let mut deg: HashMap<Vertex, u32> = HashMap::new();
    let mut seen: HashMap<(Vertex, u64, Vertex), u64> = HashMap::new();
    let mut out = Vec::new();
    for e in stream.edges() {
        for (x, y) in [(e.u, e.v), (e.v, e.u)] {
            let d = deg.entry(x).or_default();
            *d += 1;
            let b = degree_block(*d, delta, c, s);
            if let Some(&first) = seen.get(&(x, b, y)) {
                out.push(Violation::new(ViolationKind::PropertyZBreach, vec![first, e.seq]).at(x));
            } else {
                seen.insert((x, b, y), e.seq);
            }
        }
    }
    out
}

/// Vertices whose degree exceeds the header's `delta`.
pub fn check_degrees(stream: &GraphStream) -> Vec<Violation> {
    let delta = stream.header.delta;
    let mut out = Vec::new();
    for (v, d) in stream.degrees().into_iter().enumerate() {
        if d > delta {
            let seqs: Vec<u64> = stream.edges().filter(|e| e.u == v as u32 || e.v == v as u32).map(|e| e.seq).collect();
            out.push(Violation::new(ViolationKind::DegreeBoundBreach, seqs).at(v as u32));
        }
    }
    out
}

/// Exact fraction in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

impl Fraction {
    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn at_least(&self, num: u64, den: u64) -> bool {
        self.num as u128 * den as u128 >= num as u128 * self.den as u128
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// `colored / input`; an empty input counts as fully colored.
pub fn partial_fraction(input: u64, colored: u64) -> Fraction {
    assert!(colored <= input, "colored {colored} > input {input}");
    if input == 0 {
        return Fraction { num: 1, den: 1 };
    }
    let g = gcd(input, colored).max(1);
    Fraction { num: colored / g, den: input / g }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Machine-readable verification result.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub ok: bool,
    pub edges: usize,
    pub palette: usize,
    pub violations: Vec<Violation>,
}

pub fn verify_report(stream: &GraphStream, assignments: &[Assignment]) -> VerifyReport {
    let violations = check_proper(stream, assignments);
    VerifyReport {
        schema: 1,
        ok: violations.is_empty(),
        edges: stream.edge_count(),
        palette: palette_stats(assignments).distinct,
        violations,
    }
}
