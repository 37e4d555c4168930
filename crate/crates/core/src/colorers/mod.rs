//! Online and W-streaming edge colorers sharing one process/finalize contract.

mod bpt_det_va;
mod bpt_rand_va;
mod conjectured;
mod det_ea;
mod greedy;
mod rand_ea;
mod router;
mod tradeoff;
mod two_sided;
mod va_to_ea;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use smallvec::SmallVec;

pub use bpt_det_va::BptDetVa;
pub use bpt_rand_va::BptRandVa;
pub use conjectured::{ConjEa, ConjVa};
pub use det_ea::{DetEa, DetEaInner, LevelAdvice, PartialColorer};
pub use greedy::Greedy;
pub use rand_ea::RandEa;
pub use router::{GenToBptRouter, RouterStats};
pub use tradeoff::SpaceColorTradeoff;
pub use two_sided::OneToTwoSided;
pub use va_to_ea::{VaToEa, VaToEaStats};

use crate::codes::CodeError;
use crate::randomness::{PermutationKind, PermutationSpec, RandomnessError};
use crate::stream::{StreamEvent, StreamHeader, Vertex};
use crate::structures::StructureError;

/// Hierarchical color: wrappers prepend their component index to the inner color.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorTuple(SmallVec<[u32; 6]>);

impl ColorTuple {
    pub fn new(parts: &[u32]) -> Self {
        ColorTuple(SmallVec::from_slice(parts))
    }

    pub fn single(c: u32) -> Self {
        Self::new(&[c])
    }

    pub fn prefixed(&self, component: u32) -> Self {
        let mut v = SmallVec::with_capacity(self.0.len() + 1);
        v.push(component);
        v.extend_from_slice(&self.0);
        ColorTuple(v)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for ColorTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(":")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for ColorTuple {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Result<SmallVec<[u32; 6]>, _> = s.split(':').map(str::parse::<u32>).collect();
        parts.map(ColorTuple).map_err(|_| format!("bad color {s:?}"))
    }
}

/// Color given to the edge with stream position `seq`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub seq: u64,
    pub color: ColorTuple,
}

impl Assignment {
    pub fn new(seq: u64, color: ColorTuple) -> Self {
        Assignment { seq, color }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ColorError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("unsupported event: {0}")]
    UnsupportedEvent(String),
    #[error("no free color for edge {seq} in the declared palette")]
    PaletteExhausted { seq: u64 },
    #[error("pointer of vertex {vertex} ran past the palette")]
    PointerOverflow { vertex: Vertex },
    #[error("no saturating matching at arrival of {vertex}")]
    NoSaturatingMatching { vertex: Vertex, witness: Vec<usize> },
    #[error("index window of vertex {vertex} ran past the palette")]
    IndexOverflow { vertex: Vertex },
    #[error("edge {seq} cannot be routed to any part")]
    Unroutable { seq: u64 },
    #[error("vertex {vertex} has degree {got} in part {part}, above the bound {bound}")]
    DegreeBoundBreach { vertex: Vertex, part: u32, got: u32, bound: f64 },
    #[error("vertex {vertex} has no unused instance left")]
    NoFreeInstance { vertex: Vertex },
    #[error("free sets of edge {seq} do not intersect")]
    EmptyIntersection { seq: u64 },
    #[error("tracker of vertex {vertex} ran out of blocks")]
    BlockOverflow { vertex: Vertex },
    #[error("overflow palette exhausted at edge {seq}")]
    OverflowPaletteExhausted { seq: u64 },
    #[error("edge {seq} passed every level")]
    LevelExhausted { seq: u64 },
    #[error("retained pool reached {size} entries")]
    PoolMemoryCap { size: u64 },
    #[error("permutations exhausted at edge {seq}")]
    PermutationExhausted { seq: u64 },
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Randomness(#[from] RandomnessError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

impl ColorError {
    pub fn kind(&self) -> &'static str {
        match self {
            ColorError::InvalidConfig(_) => "InvalidConfig",
            ColorError::UnsupportedEvent(_) => "UnsupportedEvent",
            ColorError::PaletteExhausted { .. } => "PaletteExhausted",
            ColorError::PointerOverflow { .. } => "PointerOverflow",
            ColorError::NoSaturatingMatching { .. } => "NoSaturatingMatching",
            ColorError::IndexOverflow { .. } => "IndexOverflow",
            ColorError::Unroutable { .. } => "Unroutable",
            ColorError::DegreeBoundBreach { .. } => "DegreeBoundBreach",
            ColorError::NoFreeInstance { .. } => "NoFreeInstance",
            ColorError::EmptyIntersection { .. } => "EmptyIntersection",
            ColorError::BlockOverflow { .. } => "BlockOverflow",
            ColorError::OverflowPaletteExhausted { .. } => "OverflowPaletteExhausted",
            ColorError::LevelExhausted { .. } => "LevelExhausted",
            ColorError::PoolMemoryCap { .. } => "PoolMemoryCap",
            ColorError::PermutationExhausted { .. } => "PermutationExhausted",
            ColorError::Structure(_) => "Structure",
            ColorError::Randomness(_) => "Randomness",
            ColorError::Code(_) => "Code",
        }
    }
}

/// Online colorers answer every edge of an event from `process`; W-streaming colorers
/// may answer later, and must have answered every edge once `finalize` returns.
pub trait Colorer: Send {
    fn name(&self) -> &str;
    fn process(&mut self, event: &StreamEvent) -> Result<Vec<Assignment>, ColorError>;
    fn finalize(&mut self) -> Result<Vec<Assignment>, ColorError> {
        Ok(Vec::new())
    }
    /// Analytic size of the live state in bits.
    fn state_size_bits(&self) -> u64;
    /// Upper bound on the number of distinct colors.
    fn palette_bound(&self) -> u64;
    fn is_online(&self) -> bool {
        true
    }
    /// `main`, or which fallback is active.
    fn regime(&self) -> &str {
        "main"
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    Paper,
    Desk,
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::Paper => "paper",
            Profile::Desk => "desk",
        })
    }
}

impl FromStr for Profile {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(Profile::Paper),
            "desk" => Ok(Profile::Desk),
            other => Err(format!("unknown profile {other:?}")),
        }
    }
}

/// Which side each vertex is on; index 0 unused.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    in_a: Vec<bool>,
}

impl Bipartition {
    /// A = `1..=a`.
    pub fn prefix(n: u32, a: u32) -> Self {
        Bipartition { in_a: (0..=n).map(|v| v >= 1 && v <= a).collect() }
    }

    pub fn from_fn(n: u32, f: impl Fn(Vertex) -> bool) -> Self {
        Bipartition { in_a: (0..=n).map(|v| v >= 1 && f(v)).collect() }
    }

    pub fn in_a(&self, v: Vertex) -> bool {
        self.in_a[v as usize]
    }
}

#[derive(Clone, Debug)]
pub struct ColorerConfig {
    pub n: u32,
    pub delta: u32,
    /// Target failure probability δ.
    pub failure_prob: f64,
    pub profile: Profile,
    pub seed: u64,
    /// Named overrides of algorithm constants.
    pub params: BTreeMap<String, String>,
    pub bipartition: Option<Arc<Bipartition>>,
}

impl ColorerConfig {
    pub fn new(n: u32, delta: u32, profile: Profile, seed: u64) -> Self {
        ColorerConfig {
            n,
            delta,
            failure_prob: 0.1,
            profile,
            seed,
            params: BTreeMap::new(),
            bipartition: None,
        }
    }

    pub fn for_stream(header: &StreamHeader, profile: Profile, seed: u64) -> Self {
        let mut c = Self::new(header.n, header.delta, profile, seed);
        c.bipartition = header.a.map(|a| Arc::new(Bipartition::prefix(header.n, a)));
        c
    }

    pub fn with_param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    /// Configuration of a nested instance: fresh seed, no bipartition.
    pub fn child(&self, n: u32, delta: u32, tag: u64) -> Self {
        ColorerConfig {
            n,
            delta,
            failure_prob: self.failure_prob,
            profile: self.profile,
            seed: crate::randomness::derive_seed(self.seed, tag),
            params: self.params.clone(),
            bipartition: None,
        }
    }

    pub fn param_f64(&self, key: &str, default: f64) -> Result<f64, ColorError> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| ColorError::InvalidConfig(format!("{key}={v} is not a number"))),
        }
    }

    pub fn param_u32(&self, key: &str, default: u32) -> Result<u32, ColorError> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| ColorError::InvalidConfig(format!("{key}={v} is not an integer"))),
        }
    }

    pub fn param_str<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.params.get(key).map_or(default, String::as_str)
    }

    /// Permutation family from `perm`, `thorp_epsilon`, `thorp_round_scale`, `thorp_s`.
    pub fn perm_spec(&self, default: PermutationKind) -> Result<PermutationSpec, ColorError> {
        let base = PermutationSpec::default();
        let kind = match self.params.get("perm") {
            None => default,
            Some(v) => v.parse()?,
        };
        Ok(PermutationSpec {
            kind,
            thorp_epsilon: self.param_f64("thorp_epsilon", base.thorp_epsilon)?,
            thorp_round_scale: self.param_f64("thorp_round_scale", base.thorp_round_scale)?,
            thorp_s: self.param_u32("thorp_s", base.thorp_s)?,
        })
    }

    fn check_basic(&self) -> Result<(), ColorError> {
        if self.n == 0 {
            return Err(ColorError::InvalidConfig("n must be positive".into()));
        }
        if !(self.failure_prob > 0.0 && self.failure_prob < 1.0) {
            return Err(ColorError::InvalidConfig(format!("failure probability {} not in (0,1)", self.failure_prob)));
        }
        Ok(())
    }

    /// `log2(n/δ)`, at least 1.
    pub(crate) fn log_n_over_delta(&self) -> f64 {
        (self.n as f64 / self.failure_prob).log2().max(1.0)
    }

    /// `ln(n/δ)`.
    pub(crate) fn ln_n_over_delta(&self) -> f64 {
        (self.n as f64 / self.failure_prob).ln()
    }
}

pub type Factory = Arc<dyn Fn(&ColorerConfig) -> Result<Box<dyn Colorer>, ColorError> + Send + Sync>;

/// Shape of stream an algorithm consumes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputShape {
    EdgeArrival,
    BipartiteEdgeArrival,
    VertexArrival,
    OneSided,
}

#[derive(Clone, Copy, Debug)]
pub struct AlgoInfo {
    pub name: &'static str,
    pub input: InputShape,
    pub online: bool,
    pub summary: &'static str,
}

pub const ALGORITHMS: &[AlgoInfo] = &[
    AlgoInfo { name: "greedy", input: InputShape::EdgeArrival, online: true, summary: "smallest free color in [2Δ-1]" },
    AlgoInfo { name: "bpt-rand-va", input: InputShape::OneSided, online: true, summary: "random permutations per fixed vertex, 5Δ colors" },
    AlgoInfo { name: "bpt-det-va", input: InputShape::OneSided, online: true, summary: "advice permutations and saturating matchings" },
    AlgoInfo { name: "va-rand", input: InputShape::VertexArrival, online: true, summary: "code router over two-sided bpt-rand-va" },
    AlgoInfo { name: "va-det", input: InputShape::VertexArrival, online: true, summary: "code router over two-sided bpt-det-va" },
    AlgoInfo { name: "tradeoff", input: InputShape::EdgeArrival, online: true, summary: "vertex grouping; fewer state bits, more colors" },
    AlgoInfo { name: "va-to-ea", input: InputShape::BipartiteEdgeArrival, online: false, summary: "stars of a bipartite edge stream fed to vertex-arrival instances" },
    AlgoInfo { name: "wstream-ea", input: InputShape::EdgeArrival, online: false, summary: "code router over va-to-ea" },
    AlgoInfo { name: "rand-ea", input: InputShape::EdgeArrival, online: true, summary: "free-color trackers over random permutations" },
    AlgoInfo { name: "det-ea", input: InputShape::EdgeArrival, online: true, summary: "levels of partial colorers with a shared edge pool" },
    AlgoInfo { name: "conj-va", input: InputShape::OneSided, online: true, summary: "retained-prefix colorer, one-sided" },
    AlgoInfo { name: "conj-ea", input: InputShape::EdgeArrival, online: true, summary: "retained-prefix colorer, edge arrival" },
];

pub fn algo_info(name: &str) -> Option<&'static AlgoInfo> {
    ALGORITHMS.iter().find(|a| a.name == name)
}

fn leaf_factory(name: &'static str) -> Factory {
    Arc::new(move |cfg: &ColorerConfig| build_colorer(name, cfg))
}

/// Instantiates a registered algorithm.
pub fn build_colorer(name: &str, cfg: &ColorerConfig) -> Result<Box<dyn Colorer>, ColorError> {
    cfg.check_basic()?;
    Ok(match name {
        "greedy" => Box::new(Greedy::new(cfg.n, cfg.delta)),
        "bpt-rand-va" => Box::new(BptRandVa::new(cfg)?),
        "bpt-det-va" => Box::new(BptDetVa::new(cfg)?),
        "va-rand" | "va-det" => {
            let leaf = leaf_factory(if name == "va-rand" { "bpt-rand-va" } else { "bpt-det-va" });
            let two: Factory = Arc::new(move |c: &ColorerConfig| Ok(Box::new(OneToTwoSided::new(c, leaf.clone())?) as Box<dyn Colorer>));
            Box::new(GenToBptRouter::new(name, cfg, two)?)
        }
        "tradeoff" => {
            let inner = cfg.param_str("inner", "greedy").to_string();
            if algo_info(&inner).is_none_or(|i| i.input != InputShape::EdgeArrival || inner == "tradeoff") {
                return Err(ColorError::InvalidConfig(format!("tradeoff inner {inner:?} must be an edge-arrival colorer")));
            }
            let f: Factory = Arc::new(move |c: &ColorerConfig| build_colorer(&inner, c));
            Box::new(SpaceColorTradeoff::new(cfg, f)?)
        }
        "va-to-ea" => Box::new(VaToEa::new(cfg, leaf_factory("bpt-rand-va"))?),
        "wstream-ea" => {
            let leaf = leaf_factory("bpt-rand-va");
            let conv: Factory = Arc::new(move |c: &ColorerConfig| Ok(Box::new(VaToEa::new(c, leaf.clone())?) as Box<dyn Colorer>));
            Box::new(GenToBptRouter::new(name, cfg, conv)?)
        }
        "rand-ea" => Box::new(RandEa::new(cfg)?),
        "det-ea" => Box::new(DetEa::new(cfg)?),
        "conj-va" => Box::new(ConjVa::new(cfg)?),
        "conj-ea" => Box::new(ConjEa::new(cfg)?),
        other => return Err(ColorError::InvalidConfig(format!("unknown algorithm {other:?}"))),
    })
}

pub(crate) fn ceil_log2(x: u64) -> u32 {
    crate::codes::ceil_log2(x)
}

/// Bits to store a value in `0..=max`.
pub(crate) fn bits_for(max: u64) -> u64 {
    ceil_log2(max + 1).max(1) as u64
}

pub(crate) fn edge_only(event: &StreamEvent, who: &str) -> Result<(), ColorError> {
    match event {
        StreamEvent::Vertex { .. } => Err(ColorError::UnsupportedEvent(format!("{who} expects vertex arrivals only"))),
        StreamEvent::Edge(_) => Ok(()),
    }
}

pub(crate) fn arrival<'a>(event: &'a StreamEvent, who: &str) -> Result<(Vertex, &'a [crate::stream::Edge]), ColorError> {
    match event {
        StreamEvent::Vertex { vertex, edges } => Ok((*vertex, edges)),
        StreamEvent::Edge(_) => Err(ColorError::UnsupportedEvent(format!("{who} expects vertex arrivals"))),
    }
}
