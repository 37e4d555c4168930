//! Permutations of `[C] = {1, ..., C}` with forward and inverse evaluation.

use std::collections::HashSet;
use std::str::FromStr;
use std::sync::Mutex;

use super::field::PolyHash;
use super::oracle::{BitOracle, OracleStream};
use super::RandomnessError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PermutationKind {
    Explicit,
    LazyUniform,
    Thorp,
}

impl FromStr for PermutationKind {
    type Err = RandomnessError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "explicit" => Ok(PermutationKind::Explicit),
            "lazy" => Ok(PermutationKind::LazyUniform),
            "thorp" => Ok(PermutationKind::Thorp),
            other => Err(RandomnessError::InvalidParams(format!("unknown permutation kind {other:?}"))),
        }
    }
}

#[derive(Debug)]
pub enum Permutation {
    Explicit(ExplicitPermutation),
    Lazy(LazyPermutation),
    Thorp(ThorpPermutation),
}

impl Permutation {
    pub fn identity(c: u32) -> Self {
        Permutation::Explicit(ExplicitPermutation::from_forward((1..=c).collect()).expect("identity"))
    }

    pub fn kind(&self) -> PermutationKind {
        match self {
            Permutation::Explicit(_) => PermutationKind::Explicit,
            Permutation::Lazy(_) => PermutationKind::LazyUniform,
            Permutation::Thorp(_) => PermutationKind::Thorp,
        }
    }

    pub fn size(&self) -> u32 {
        match self {
            Permutation::Explicit(p) => p.fwd.len() as u32,
            Permutation::Lazy(p) => p.c,
            Permutation::Thorp(p) => p.size(),
        }
    }

    /// `σ(i)` for `i ∈ [C]`.
    pub fn forward(&self, i: u32) -> Result<u32, RandomnessError> {
        self.check(i)?;
        match self {
            Permutation::Explicit(p) => Ok(p.fwd[i as usize - 1]),
            Permutation::Lazy(p) => p.at(i),
            Permutation::Thorp(p) => Ok(p.forward0(i - 1) + 1),
        }
    }

    /// `σ⁻¹(c)` for `c ∈ [C]`.
    pub fn inverse(&self, c: u32) -> Result<u32, RandomnessError> {
        self.check(c)?;
        match self {
            Permutation::Explicit(p) => Ok(p.inv[c as usize - 1]),
            Permutation::Lazy(p) => Err(RandomnessError::PrefixOnly { position: c, evaluated: p.evaluated() }),
            Permutation::Thorp(p) => Ok(p.inverse0(c - 1) + 1),
        }
    }

    /// `[σ(1), ..., σ(C)]`. A Thorp network evaluates each gate once here.
    pub fn forward_table(&self) -> Result<Vec<u32>, RandomnessError> {
        match self {
            Permutation::Thorp(p) => Ok(p.table()),
            _ => (1..=self.size()).map(|i| self.forward(i)).collect(),
        }
    }

    fn check(&self, i: u32) -> Result<(), RandomnessError> {
        let size = self.size();
        if i == 0 || i > size {
            Err(RandomnessError::OutOfRange { value: i, size })
        } else {
            Ok(())
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExplicitPermutation {
    fwd: Vec<u32>,
    inv: Vec<u32>,
}

impl ExplicitPermutation {
    /// Builds from the images `σ(1), ..., σ(C)`.
    pub fn from_forward(fwd: Vec<u32>) -> Result<Self, RandomnessError> {
        let c = fwd.len();
        let mut inv = vec![0u32; c];
        for (i, &v) in fwd.iter().enumerate() {
            if v == 0 || v as usize > c || inv[v as usize - 1] != 0 {
                return Err(RandomnessError::InvalidParams("images do not form a permutation".into()));
            }
            inv[v as usize - 1] = i as u32 + 1;
        }
        Ok(ExplicitPermutation { fwd, inv })
    }
}

/// Fisher-Yates on oracle bits of `consumer`.
pub fn explicit_uniform_permutation(c: u32, oracle: &BitOracle, consumer: u64) -> Result<Permutation, RandomnessError> {
    if c == 0 {
        return Err(RandomnessError::InvalidParams("C must be at least 1".into()));
    }
    let mut stream = oracle.stream(consumer);
    let mut fwd: Vec<u32> = (1..=c).collect();
    for i in (1..c as usize).rev() {
        let j = stream.next_below(i as u64 + 1) as usize;
        fwd.swap(i, j);
    }
    Ok(Permutation::Explicit(ExplicitPermutation::from_forward(fwd)?))
}

#[derive(Debug)]
struct LazyState {
    values: Vec<u32>,
    used: HashSet<u32>,
    stream: OracleStream,
}

/// Uniform permutation materialized one prefix position at a time.
#[derive(Debug)]
pub struct LazyPermutation {
    c: u32,
    state: Mutex<LazyState>,
}

impl LazyPermutation {
    fn at(&self, i: u32) -> Result<u32, RandomnessError> {
        let mut st = self.state.lock().expect("lazy permutation lock");
        let len = st.values.len() as u32;
        if i <= len {
            return Ok(st.values[i as usize - 1]);
        }
        if i > len + 1 {
            return Err(RandomnessError::PrefixOnly { position: i, evaluated: len });
        }
        let v = loop {
            let v = st.stream.next_below(self.c as u64) as u32 + 1;
            if !st.used.contains(&v) {
                break v;
            }
        };
        st.used.insert(v);
        st.values.push(v);
        Ok(v)
    }

    pub fn evaluated(&self) -> u32 {
        self.state.lock().expect("lazy permutation lock").values.len() as u32
    }

    pub fn bits_consumed(&self) -> u64 {
        self.state.lock().expect("lazy permutation lock").stream.bits_consumed()
    }
}

pub fn lazy_uniform_permutation(c: u32, oracle: &BitOracle, consumer: u64) -> Result<Permutation, RandomnessError> {
    if c == 0 {
        return Err(RandomnessError::InvalidParams("C must be at least 1".into()));
    }
    Ok(Permutation::Lazy(LazyPermutation {
        c,
        state: Mutex::new(LazyState {
            values: Vec::new(),
            used: HashSet::new(),
            stream: oracle.stream(consumer),
        }),
    }))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThorpParams {
    pub d: u32,
    pub epsilon: f64,
    /// Number of positions whose joint law should be near uniform.
    pub s: u32,
    pub round_scale: f64,
}

impl ThorpParams {
    pub fn new(d: u32, epsilon: f64, s: u32) -> Self {
        ThorpParams { d, epsilon, s, round_scale: 2.0 }
    }

    /// `ceil(round_scale * (d^3 + d ln(1/ε)))`, at least one.
    pub fn rounds(&self) -> u32 {
        let d = self.d as f64;
        ((self.round_scale * (d * d * d + d * (1.0 / self.epsilon).ln())).ceil() as u32).max(1)
    }

    fn validate(&self) -> Result<(), RandomnessError> {
        if self.d == 0 || self.d > 31 {
            return Err(RandomnessError::InvalidParams(format!("thorp d={} not in 1..=31", self.d)));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(RandomnessError::InvalidParams(format!("thorp epsilon={} not in (0,1)", self.epsilon)));
        }
        if self.s == 0 {
            return Err(RandomnessError::InvalidParams("thorp s must be at least 1".into()));
        }
        if !(self.round_scale > 0.0) {
            return Err(RandomnessError::InvalidParams("thorp round_scale must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
enum GateSource {
    Poly(PolyHash),
    Table(Vec<bool>),
}

/// Thorp shuffle network on `2^d` positions.
///
/// In round `r`, gate `g` takes inputs `g` and `g + C/2` (0-based) to outputs `2g`, `2g + 1`;
/// gate bit 1 swaps them.
#[derive(Clone, Debug)]
pub struct ThorpPermutation {
    d: u32,
    rounds: u32,
    gates: GateSource,
}

impl ThorpPermutation {
    /// Network with explicit gate bits, indexed `round * C/2 + gate`.
    pub fn with_gate_bits(d: u32, rounds: u32, bits: Vec<bool>) -> Result<Self, RandomnessError> {
        if d == 0 || d > 31 || rounds == 0 {
            return Err(RandomnessError::InvalidParams("need d in 1..=31 and at least one round".into()));
        }
        let need = rounds as usize * (1usize << (d - 1));
        if bits.len() != need {
            return Err(RandomnessError::InvalidParams(format!("expected {need} gate bits, got {}", bits.len())));
        }
        Ok(ThorpPermutation { d, rounds, gates: GateSource::Table(bits) })
    }

    pub fn size(&self) -> u32 {
        1 << self.d
    }

    pub fn rounds(&self) -> u32 {
        self.rounds
    }

    fn gate(&self, round: u32, g: u32) -> bool {
        let idx = round as u64 * (self.size() as u64 / 2) + g as u64;
        match &self.gates {
            GateSource::Poly(p) => p.bit(idx),
            GateSource::Table(t) => t[idx as usize],
        }
    }

    fn forward0(&self, mut p: u32) -> u32 {
        let half = self.size() / 2;
        for r in 0..self.rounds {
            let (g, bottom) = if p < half { (p, 0) } else { (p - half, 1) };
            p = 2 * g + (bottom ^ self.gate(r, g) as u32);
        }
        p
    }

    fn table(&self) -> Vec<u32> {
        let half = self.size() / 2;
        // at[p] = input currently sitting at position p
        let mut at: Vec<u32> = (0..self.size()).collect();
        let mut next = vec![0; at.len()];
        for r in 0..self.rounds {
            for g in 0..half {
                let swap = self.gate(r, g) as usize;
                next[2 * g as usize + swap] = at[g as usize];
                next[2 * g as usize + 1 - swap] = at[(g + half) as usize];
            }
            std::mem::swap(&mut at, &mut next);
        }
        let mut fwd = vec![0; at.len()];
        for (p, &i) in at.iter().enumerate() {
            fwd[i as usize] = p as u32 + 1;
        }
        fwd
    }

    fn inverse0(&self, mut q: u32) -> u32 {
        let half = self.size() / 2;
        for r in (0..self.rounds).rev() {
            let g = q / 2;
            let bottom = (q & 1) ^ self.gate(r, g) as u32;
            q = g + bottom * half;
        }
        q
    }
}

/// Thorp shuffle on `[2^d]` whose gate bits come from a `(rounds * s)`-wise independent hash.
pub fn thorp_permutation(params: ThorpParams, oracle: &BitOracle, consumer: u64) -> Result<Permutation, RandomnessError> {
    params.validate()?;
    let rounds = params.rounds();
    let gates = rounds as u64 * (1u64 << (params.d - 1));
    let h = (64 - (gates - 1).leading_zeros()).max(1);
    let mut stream = oracle.stream(consumer);
    let count = rounds as usize * params.s as usize;
    let poly = PolyHash::sample(h, count, &mut stream)?;
    Ok(Permutation::Thorp(ThorpPermutation { d: params.d, rounds, gates: GateSource::Poly(poly) }))
}

/// How a colorer draws its per-vertex permutations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PermutationSpec {
    pub kind: PermutationKind,
    pub thorp_epsilon: f64,
    pub thorp_round_scale: f64,
    pub thorp_s: u32,
}

impl Default for PermutationSpec {
    fn default() -> Self {
        PermutationSpec {
            kind: PermutationKind::Explicit,
            thorp_epsilon: 1e-3,
            thorp_round_scale: 2.0,
            thorp_s: 2,
        }
    }
}

impl PermutationSpec {
    pub fn build(&self, c: u32, oracle: &BitOracle, consumer: u64) -> Result<Permutation, RandomnessError> {
        match self.kind {
            PermutationKind::Explicit => explicit_uniform_permutation(c, oracle, consumer),
            PermutationKind::LazyUniform => lazy_uniform_permutation(c, oracle, consumer),
            PermutationKind::Thorp => {
                if !c.is_power_of_two() || c < 2 {
                    return Err(RandomnessError::InvalidParams(format!("thorp needs a power of two C >= 2, got {c}")));
                }
                let params = ThorpParams {
                    d: c.trailing_zeros(),
                    epsilon: self.thorp_epsilon,
                    s: self.thorp_s,
                    round_scale: self.thorp_round_scale,
                };
                thorp_permutation(params, oracle, consumer)
            }
        }
    }
}
