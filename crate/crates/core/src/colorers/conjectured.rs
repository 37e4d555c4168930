//! `2Δ-1` colorers that keep every tried-but-unused color in a per-vertex pool.
//! Their space use is only measured, not bounded.

use super::{arrival, bits_for, Assignment, ColorError, ColorTuple, Colorer, ColorerConfig};
use crate::randomness::{BitOracle, OracleStream, Permutation, PermutationKind, PermutationSpec};
use crate::stream::{StreamEvent, Vertex};

struct Pool {
    sigma: Permutation,
    h: u32,
    free: Vec<u32>,
}

/// Per-vertex pools `F_v` grown by walking `σ_v`, with total-size accounting.
struct Pools {
    c: u32,
    oracle: BitOracle,
    spec: PermutationSpec,
    pools: Vec<Option<Pool>>,
    touched: u64,
    total: u64,
    peak: u64,
    cap: u64,
}

impl Pools {
    fn new(cfg: &ColorerConfig) -> Result<Self, ColorError> {
        let c = (2 * cfg.delta.max(1)) - 1;
        let cap = match cfg.params.get("pool_cap") {
            None => u64::MAX,
            Some(v) => v.parse().map_err(|_| ColorError::InvalidConfig(format!("pool_cap={v}")))?,
        };
        Ok(Pools {
            c,
            oracle: BitOracle::new(cfg.seed),
            spec: cfg.perm_spec(PermutationKind::LazyUniform)?,
            pools: (0..=cfg.n).map(|_| None).collect(),
            touched: 0,
            total: 0,
            peak: 0,
            cap,
        })
    }

    fn ensure(&mut self, v: Vertex) -> Result<(), ColorError> {
        if v == 0 || v as usize >= self.pools.len() {
            return Err(ColorError::UnsupportedEvent(format!("vertex {v} out of range")));
        }
        if self.pools[v as usize].is_none() {
            let sigma = self.spec.build(self.c, &self.oracle, v as u64)?;
            self.pools[v as usize] = Some(Pool { sigma, h: 1, free: Vec::new() });
            self.touched += 1;
        }
        Ok(())
    }

    fn get(&self, v: Vertex) -> &Pool {
        self.pools[v as usize].as_ref().expect("ensured")
    }

    fn exhausted(&self, v: Vertex) -> bool {
        self.get(v).h > self.c
    }

    /// Adds `σ_v[h_v]` to `F_v`.
    fn grow(&mut self, v: Vertex, seq: u64) -> Result<u32, ColorError> {
        let c = self.c;
        let p = self.pools[v as usize].as_mut().expect("ensured");
        if p.h > c {
            return Err(ColorError::PermutationExhausted { seq });
        }
        let col = p.sigma.forward(p.h)?;
        p.h += 1;
        p.free.push(col);
        self.total += 1;
        self.peak = self.peak.max(self.total);
        if self.total > self.cap {
            return Err(ColorError::PoolMemoryCap { size: self.total });
        }
        Ok(col)
    }

    fn take(&mut self, v: Vertex, col: u32) {
        let p = self.pools[v as usize].as_mut().expect("ensured");
        let i = p.free.iter().position(|&c| c == col).expect("color in pool");
        p.free.swap_remove(i);
        self.total -= 1;
    }

    fn state_bits(&self) -> u64 {
        self.total * bits_for(self.c as u64) + self.touched * bits_for(self.c as u64 + 1)
    }
}

/// One-sided vertex arrivals: each fixed vertex's pool grows until it offers a color
/// not yet used in the current arrival.
pub struct ConjVa {
    pools: Pools,
    rng: OracleStream,
    in_s: Vec<bool>,
}

impl ConjVa {
    pub fn new(cfg: &ColorerConfig) -> Result<Self, ColorError> {
        let pools = Pools::new(cfg)?;
        let c = pools.c;
        Ok(ConjVa { pools, rng: BitOracle::new(cfg.seed).stream(0), in_s: vec![false; c as usize + 1] })
    }

    /// Current `Σ_v |F_v|`.
    pub fn pool_total(&self) -> u64 {
        self.pools.total
    }

    pub fn pool_peak(&self) -> u64 {
        self.pools.peak
    }
}

impl Colorer for ConjVa {
    fn name(&self) -> &str {
        "conj-va"
    }

    fn process(&mut self, event: &StreamEvent) -> Result<Vec<Assignment>, ColorError> {
        let (x, edges) = arrival(event, "conj-va")?;
        let mut order: Vec<usize> = (0..edges.len()).collect();
        for i in (1..order.len()).rev() {
            let j = self.rng.next_below(i as u64 + 1) as usize;
            order.swap(i, j);
        }
        let mut out = Vec::with_capacity(edges.len());
        let mut used = Vec::with_capacity(edges.len());
        let mut result: Result<(), ColorError> = Ok(());
        for k in order {
            let e = &edges[k];
            let y = e.other(x);
            let step = (|| {
                self.pools.ensure(y)?;
                while self.pools.get(y).free.iter().all(|&c| self.in_s[c as usize]) {
                    self.pools.grow(y, e.seq)?;
                }
                let options: Vec<u32> = self.pools.get(y).free.iter().copied().filter(|&c| !self.in_s[c as usize]).collect();
                let col = options[self.rng.next_below(options.len() as u64) as usize];
                self.pools.take(y, col);
                Ok(col)
            })();
            match step {
                Ok(col) => {
                    self.in_s[col as usize] = true;
                    used.push(col);
                    out.push(Assignment::new(e.seq, ColorTuple::single(col)));
                }
                Err(err) => {
                    result = Err(err);
                    break;
                }
            }
        }
        for c in used {
            self.in_s[c as usize] = false;
        }
        result?;
        out.sort_by_key(|a| a.seq);
        Ok(out)
    }

    /// Pool entries and pointers; permutations come from the oracle.
    fn state_size_bits(&self) -> u64 {
        self.pools.state_bits()
    }

    fn palette_bound(&self) -> u64 {
        self.pools.c as u64
    }
}

/// Edge arrivals: both endpoint pools grow in lockstep until they share a color.
pub struct ConjEa {
    pools: Pools,
    rng: OracleStream,
}

impl ConjEa {
    pub fn new(cfg: &ColorerConfig) -> Result<Self, ColorError> {
        Ok(ConjEa { pools: Pools::new(cfg)?, rng: BitOracle::new(cfg.seed).stream(0) })
    }

    pub fn pool_total(&self) -> u64 {
        self.pools.total
    }

    pub fn pool_peak(&self) -> u64 {
        self.pools.peak
    }
}

impl Colorer for ConjEa {
    fn name(&self) -> &str {
        "conj-ea"
    }

    fn process(&mut self, event: &StreamEvent) -> Result<Vec<Assignment>, ColorError> {
        let mut out = Vec::new();
        for e in event.edges() {
            let (x, y) = (e.u, e.v);
            self.pools.ensure(x)?;
            self.pools.ensure(y)?;
            let common = |p: &Pools| -> Vec<u32> {
                let fy = &p.get(y).free;
                p.get(x).free.iter().copied().filter(|c| fy.contains(c)).collect()
            };
            let mut both = common(&self.pools);
            while both.is_empty() {
                let (ex, ey) = (self.pools.exhausted(x), self.pools.exhausted(y));
                if ex && ey {
                    return Err(ColorError::PermutationExhausted { seq: e.seq });
                }
                if !ex {
                    let c = self.pools.grow(x, e.seq)?;
                    if self.pools.get(y).free.contains(&c) {
                        both.push(c);
                    }
                }
                if !ey {
                    let c = self.pools.grow(y, e.seq)?;
                    if self.pools.get(x).free.contains(&c) && !both.contains(&c) {
                        both.push(c);
                    }
                }
            }
            both.sort_unstable();
            let col = both[self.rng.next_below(both.len() as u64) as usize];
            self.pools.take(x, col);
            self.pools.take(y, col);
            out.push(Assignment::new(e.seq, ColorTuple::single(col)));
        }
        Ok(out)
    }

    fn state_size_bits(&self) -> u64 {
        self.pools.state_bits()
    }

    fn palette_bound(&self) -> u64 {
        self.pools.c as u64
    }
}
