//! W-streaming bipartite edge arrivals on top of one-sided vertex-arrival colorers.
//!
//! Edges wait in a pool `P`. Once an A-vertex holds `ceil(√Δ)` pooled edges its star is
//! sent to a random instance that has not seen it yet. Pairs repeated more than `τ`
//! times move to `L`. Whatever is left at the end is colored greedily with `2Δ-1` extra colors.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::two_sided::prefix;
use super::{bits_for, edge_only, Assignment, ColorError, ColorTuple, Colorer, ColorerConfig, Factory, Greedy};
use crate::randomness::{BitOracle, OracleStream};
use crate::stream::{Edge, EdgeKey, StreamEvent, Vertex};

/// Instrumentation for the structural bounds of the conversion.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VaToEaStats {
    pub stars: u64,
    pub max_root_degree: u32,
    /// Edges received by B-vertex `y` inside instance `i`, keyed `(y, i)`.
    pub loads: BTreeMap<(Vertex, u32), u32>,
    pub moved_to_l: u64,
    pub finalized: u64,
}

pub struct VaToEa {
    n: u32,
    delta: u32,
    s: u32,
    tau: u32,
    root: u32,
    inner_delta: u32,
    side: Arc<super::Bipartition>,
    pool: HashMap<Vertex, Vec<Edge>>,
    pool_len: u64,
    mult: HashMap<EdgeKey, u32>,
    large: Vec<Edge>,
    large_keys: HashMap<EdgeKey, u32>,
    sent: Vec<Vec<bool>>,
    rng: OracleStream,
    inner: Vec<Box<dyn Colorer>>,
    stats: VaToEaStats,
}

impl VaToEa {
    pub fn new(cfg: &ColorerConfig, factory: Factory) -> Result<Self, ColorError> {
        let side = cfg
            .bipartition
            .clone()
            .ok_or_else(|| ColorError::InvalidConfig("va-to-ea needs a bipartite stream".into()))?;
        let delta = cfg.delta.max(1);
        let sqrt = (delta as f64).sqrt();
        let root = sqrt.ceil() as u32;
        let s = cfg.param_u32("instances", 2 * root)?.max(1);
        let tau = ((sqrt / (9.0 * cfg.ln_n_over_delta())).floor() as u32).max(1);
        let inner_delta = (4 * delta).div_ceil(s);
        let mut inner = Vec::with_capacity(s as usize);
        for i in 1..=s {
            let mut c = cfg.child(cfg.n, inner_delta, i as u64);
            c.bipartition = Some(side.clone());
            inner.push(factory(&c)?);
        }
        Ok(VaToEa {
            n: cfg.n,
            delta,
            s,
            tau,
            root,
            inner_delta,
            side,
            pool: HashMap::new(),
            pool_len: 0,
            mult: HashMap::new(),
            large: Vec::new(),
            large_keys: HashMap::new(),
            sent: vec![vec![false; s as usize]; cfg.n as usize + 1],
            rng: BitOracle::new(cfg.seed).stream(0),
            inner,
            stats: VaToEaStats::default(),
        })
    }

    pub fn instances(&self) -> u32 {
        self.s
    }

    pub fn tau(&self) -> u32 {
        self.tau
    }

    /// Max degree declared to each instance.
    pub fn inner_delta(&self) -> u32 {
        self.inner_delta
    }

    pub fn stats(&self) -> &VaToEaStats {
        &self.stats
    }

    fn extract_star(&mut self, v: Vertex) -> Result<Vec<Assignment>, ColorError> {
        let free: Vec<u32> = (0..self.s).filter(|&j| !self.sent[v as usize][j as usize]).collect();
        if free.is_empty() {
            return Err(ColorError::NoFreeInstance { vertex: v });
        }
        let i = free[self.rng.next_below(free.len() as u64) as usize];
        self.sent[v as usize][i as usize] = true;
        let mut star = self.pool.remove(&v).unwrap_or_default();
        star.sort_by_key(|e| e.seq);
        self.pool_len -= star.len() as u64;
        for e in &star {
            let key = e.key();
            if let Some(m) = self.mult.get_mut(&key) {
                *m -= 1;
                if *m == 0 {
                    self.mult.remove(&key);
                }
            }
            *self.stats.loads.entry((e.other(v), i + 1)).or_default() += 1;
        }
        self.stats.stars += 1;
        self.stats.max_root_degree = self.stats.max_root_degree.max(star.len() as u32);
        let out = self.inner[i as usize].process(&StreamEvent::Vertex { vertex: v, edges: star })?;
        Ok(prefix(out, i + 1))
    }
}

impl Colorer for VaToEa {
    fn name(&self) -> &str {
        "va-to-ea"
    }

    fn process(&mut self, event: &StreamEvent) -> Result<Vec<Assignment>, ColorError> {
        edge_only(event, "va-to-ea")?;
        let e = event.edges()[0];
        if e.u == 0 || e.v == 0 || e.u > self.n || e.v > self.n || self.side.in_a(e.u) == self.side.in_a(e.v) {
            return Err(ColorError::UnsupportedEvent(format!("edge {} is not an A-B edge", e.seq)));
        }
        let x = if self.side.in_a(e.u) { e.u } else { e.v };
        let key = e.key();
        let list = self.pool.entry(x).or_default();
        list.push(e);
        self.pool_len += 1;
        let m = self.mult.entry(key).or_default();
        *m += 1;
        if *m > self.tau {
            self.mult.remove(&key);
            let (moved, kept): (Vec<Edge>, Vec<Edge>) = list.drain(..).partition(|f| f.key() == key);
            *list = kept;
            self.pool_len -= moved.len() as u64;
            *self.large_keys.entry(key).or_default() += moved.len() as u32;
            self.stats.moved_to_l += moved.len() as u64;
            self.large.extend(moved);
            return Ok(Vec::new());
        }
        if list.len() as u32 >= self.root {
            return self.extract_star(x);
        }
        Ok(Vec::new())
    }

    fn finalize(&mut self) -> Result<Vec<Assignment>, ColorError> {
        let mut out = Vec::new();
        for (i, c) in self.inner.iter_mut().enumerate() {
            out.extend(prefix(c.finalize()?, i as u32 + 1));
        }
        let mut rest: Vec<Edge> = self.pool.drain().flat_map(|(_, v)| v).collect();
        rest.append(&mut self.large);
        rest.sort_by_key(|e| e.seq);
        self.pool_len = 0;
        self.mult.clear();
        self.large_keys.clear();
        self.stats.finalized = rest.len() as u64;
        let mut g = Greedy::new(self.n, self.delta);
        for e in &rest {
            out.push(Assignment::new(e.seq, ColorTuple::new(&[0, g.color_edge(e)?])));
        }
        Ok(out)
    }

    /// Pooled edges at `2 log n` bits each, distinct pairs in `L` with a multiplicity,
    /// `s` membership bits per vertex, and the instances.
    fn state_size_bits(&self) -> u64 {
        let id = 2 * bits_for(self.n as u64);
        let pool = self.pool_len * id;
        let large = self.large_keys.len() as u64 * (id + bits_for(self.delta as u64));
        let flags = self.n as u64 * self.s as u64;
        let inner: u64 = self.inner.iter().map(|c| c.state_size_bits()).sum();
        pool + large + flags + inner
    }

    fn palette_bound(&self) -> u64 {
        let inner: u64 = self.inner.iter().map(|c| c.palette_bound()).sum();
        inner + (2 * self.delta - 1) as u64
    }

    fn is_online(&self) -> bool {
        false
    }

    fn regime(&self) -> &str {
        self.inner[0].regime()
    }
}
