//! Multigraph edge arrivals, deterministic given advice: levels of layered partial colorers.
//!
//! Level `ℓ` sees edges that already used up a block of `2^{ℓ-1}` sub-colors one level down,
//! so its degree is at most `Δ/2^ℓ`. Inside a level an edge cascades through the layers and
//! ends in the overflow set `D^ℓ` if none colors it. Edges stay in a shared reference-counted
//! pool while some tracker still holds them, and repeated copies reuse the class stored there.
//!
//! Desk constants: `s^ℓ` the least power of two `>= 8 sqrt(Δ^ℓ log2(n/δ))` within `[32, C^ℓ]`,
//! layers on from `Δ^ℓ >= 2`. Paper constants: scale 512 and `Δ^ℓ >= 256 log2(n/δ)`.

use std::sync::Arc;

use super::{bits_for, Assignment, ColorError, ColorTuple, Colorer, ColorerConfig, Profile};
use crate::randomness::{BitOracle, Permutation, PermutationKind, PermutationSpec};
use crate::stream::{Edge, StreamEvent, Vertex};
use crate::structures::{common_free, FreeColorTracker, LevelMeta, RefCountedEdgePool, StructureError};

/// Per-vertex permutations of one level, shared by its layers.
pub struct LevelAdvice {
    level: u32,
    c: u32,
    oracle: BitOracle,
    spec: PermutationSpec,
    perms: Vec<Option<Arc<Permutation>>>,
}

impl LevelAdvice {
    pub fn new(n: u32, level: u32, c: u32, seed: u64, spec: PermutationSpec) -> Self {
        LevelAdvice { level, c, oracle: BitOracle::new(seed), spec, perms: vec![None; n as usize + 1] }
    }

    pub fn palette(&self) -> u32 {
        self.c
    }

    pub fn set(&mut self, v: Vertex, sigma: Permutation) {
        self.perms[v as usize] = Some(Arc::new(sigma));
    }

    pub fn get(&mut self, v: Vertex) -> Result<Arc<Permutation>, ColorError> {
        let slot = self
            .perms
            .get_mut(v as usize)
            .filter(|_| v != 0)
            .ok_or_else(|| ColorError::UnsupportedEvent(format!("vertex {v} out of range")))?;
        if slot.is_none() {
            let consumer = ((self.level as u64 + 1) << 32) | v as u64;
            *slot = Some(Arc::new(self.spec.build(self.c, &self.oracle, consumer)?));
        }
        Ok(slot.clone().expect("just set"))
    }
}

/// One layer: colors an edge from the common free colors of its endpoints, or passes.
pub struct PartialColorer {
    level: u32,
    layer: u32,
    c: u32,
    s: u32,
    delta: u32,
    trackers: Vec<Option<FreeColorTracker>>,
    live: u64,
    inputs: u64,
    colored: u64,
}

impl PartialColorer {
    pub fn new(n: u32, level: u32, layer: u32, c: u32, s: u32, delta: u32) -> Result<Self, ColorError> {
        let probe = FreeColorTracker::new(c, s, delta, Arc::new(Permutation::identity(c)));
        probe?;
        Ok(PartialColorer {
            level,
            layer,
            c,
            s,
            delta,
            trackers: (0..=n).map(|_| None).collect(),
            live: 0,
            inputs: 0,
            colored: 0,
        })
    }

    pub fn inputs(&self) -> u64 {
        self.inputs
    }

    pub fn colored(&self) -> u64 {
        self.colored
    }

    pub fn tracker(&self, v: Vertex) -> Option<&FreeColorTracker> {
        self.trackers.get(v as usize)?.as_ref()
    }

    fn ensure(&mut self, v: Vertex, advice: &mut LevelAdvice) -> Result<(), ColorError> {
        if v == 0 || v as usize >= self.trackers.len() {
            return Err(ColorError::UnsupportedEvent(format!("vertex {v} out of range")));
        }
        if self.trackers[v as usize].is_none() {
            let t = FreeColorTracker::new(self.c, self.s, self.delta, advice.get(v)?)?;
            self.trackers[v as usize] = Some(t);
            self.live += 1;
        }
        Ok(())
    }

    /// Smallest common free color, or `None`. A colored edge is referenced from both trackers
    /// and gets class `(layer, c)` with one copy used at this level.
    pub fn process(
        &mut self,
        e: &Edge,
        advice: &mut LevelAdvice,
        pool: &mut RefCountedEdgePool,
    ) -> Result<Option<u32>, ColorError> {
        self.inputs += 1;
        self.ensure(e.u, advice)?;
        self.ensure(e.v, advice)?;
        let c = {
            let tx = self.trackers[e.u as usize].as_ref().expect("ensured");
            let ty = self.trackers[e.v as usize].as_ref().expect("ensured");
            match common_free(tx, ty).first() {
                Some(&c) => c,
                None => return Ok(None),
            }
        };
        let key = e.key();
        let mut released = Vec::new();
        for v in [e.u, e.v] {
            let t = self.trackers[v as usize].as_mut().expect("ensured");
            let r = t.remove_and_update(c, Some(key)).map_err(|err| match err {
                StructureError::BlockOverflow { .. } => ColorError::BlockOverflow { vertex: v },
                other => other.into(),
            })?;
            released.extend(r.released);
        }
        pool.incref(key);
        pool.incref(key);
        pool.set_meta(key, self.level as usize, LevelMeta { count: 1, layer: self.layer, class: c })?;
        for r in released {
            pool.decref(r)?;
        }
        self.colored += 1;
        Ok(Some(c))
    }

    /// Live trackers, each with its held references.
    pub fn state_bits(&self, ref_bits: u32) -> u64 {
        self.trackers.iter().flatten().map(|t| t.state_bits(ref_bits)).sum()
    }
}

/// One level: layers, then the overflow set `D^ℓ` with greedy classes.
pub struct DetEaInner {
    level: u32,
    delta: u32,
    c: u32,
    s: u32,
    advice: LevelAdvice,
    layers: Vec<PartialColorer>,
    words: usize,
    d_used: Vec<u64>,
    d_len: u64,
}

impl DetEaInner {
    pub fn new(
        n: u32,
        level: u32,
        delta: u32,
        c: u32,
        s: u32,
        layered: bool,
        advice: LevelAdvice,
    ) -> Result<Self, ColorError> {
        let count = if layered { layer_count(delta) } else { 0 };
        let layers = (1..=count)
            .map(|xi| PartialColorer::new(n, level, xi, c, s, delta))
            .collect::<Result<Vec<_>, _>>()?;
        let words = (c as usize).div_ceil(64);
        Ok(DetEaInner {
            level,
            delta,
            c,
            s,
            advice,
            layers,
            words,
            d_used: vec![0; (n as usize + 1) * words],
            d_len: 0,
        })
    }

    pub fn layers(&self) -> &[PartialColorer] {
        &self.layers
    }

    pub fn overflow_len(&self) -> u64 {
        self.d_len
    }

    pub fn palette(&self) -> u32 {
        self.c
    }

    pub fn block(&self) -> u32 {
        self.s
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    /// Returns `(layer, class)`; layer 0 is the overflow set.
    pub fn process(&mut self, e: &Edge, pool: &mut RefCountedEdgePool) -> Result<(u32, u32), ColorError> {
        for (i, layer) in self.layers.iter_mut().enumerate() {
            if let Some(c) = layer.process(e, &mut self.advice, pool)? {
                return Ok((i as u32 + 1, c));
            }
        }
        let key = e.key();
        pool.incref(key);
        let (rx, ry) = (e.u as usize * self.words, e.v as usize * self.words);
        let mut class = None;
        for w in 0..self.words {
            let free = !(self.d_used[rx + w] | self.d_used[ry + w]);
            if free != 0 {
                let c = w as u32 * 64 + free.trailing_zeros() + 1;
                if c <= self.c {
                    class = Some(c);
                }
                break;
            }
        }
        let c = class.ok_or(ColorError::OverflowPaletteExhausted { seq: e.seq })?;
        for r in [rx, ry] {
            self.d_used[r + (c as usize - 1) / 64] |= 1 << ((c - 1) % 64);
        }
        self.d_len += 1;
        pool.set_meta(key, self.level as usize, LevelMeta { count: 1, layer: 0, class: c })?;
        Ok((0, c))
    }
}

/// `ceil(log_{3/2} Δ)`, at least 1.
pub fn layer_count(delta: u32) -> u32 {
    let mut k = 0;
    let mut x = 1.0f64;
    while x < delta as f64 {
        x *= 1.5;
        k += 1;
    }
    k.max(1)
}

pub struct DetEa {
    n: u32,
    delta: u32,
    levels: Vec<DetEaInner>,
    pool: RefCountedEdgePool,
}

impl DetEa {
    pub fn new(cfg: &ColorerConfig) -> Result<Self, ColorError> {
        let delta = cfg.delta.max(1).next_power_of_two();
        let log = cfg.log_n_over_delta();
        let (scale, min_layer) = match cfg.profile {
            Profile::Paper => (512.0, 256.0 * log),
            Profile::Desk => (8.0, 2.0),
        };
        let c_mult = cfg.param_u32("c_mult", 32)?;
        let scale = cfg.param_f64("s_scale", scale)?;
        let min_layer = cfg.param_f64("layer_min", min_layer)?;
        if !c_mult.is_power_of_two() {
            return Err(ColorError::InvalidConfig(format!("c_mult={c_mult} must be a power of two")));
        }
        let spec = cfg.perm_spec(PermutationKind::Explicit)?;
        let top = delta.trailing_zeros();
        let mut levels = Vec::with_capacity(top as usize + 1);
        for l in 0..=top {
            let dl = delta >> l;
            let c = c_mult * dl;
            let want = (scale * (dl as f64 * log).sqrt()).ceil().max(1.0) as u32;
            let s = want.next_power_of_two().clamp(c_mult.min(c), c);
            let advice = LevelAdvice::new(cfg.n, l, c, cfg.seed, spec);
            levels.push(DetEaInner::new(cfg.n, l, dl, c, s, dl as f64 >= min_layer, advice)?);
        }
        Ok(DetEa { n: cfg.n, delta, levels, pool: RefCountedEdgePool::new(top as usize + 1) })
    }

    /// `Δ` rounded up to a power of two.
    pub fn delta(&self) -> u32 {
        self.delta
    }

    pub fn levels(&self) -> &[DetEaInner] {
        &self.levels
    }

    pub fn pool(&self) -> &RefCountedEdgePool {
        &self.pool
    }

    fn color(&mut self, e: &Edge) -> Result<ColorTuple, ColorError> {
        if e.u == 0 || e.v == 0 || e.u > self.n || e.v > self.n {
            return Err(ColorError::UnsupportedEvent(format!("edge {} outside 1..={}", e.seq, self.n)));
        }
        let key = e.key();
        for l in 0..self.levels.len() {
            let width = 1u32 << l;
            let meta = self.pool.touch(key, l).filter(|m| m.count > 0);
            match meta {
                Some(m) if m.count == width => continue,
                Some(m) => {
                    let count = m.count + 1;
                    self.pool.set_meta(key, l, LevelMeta { count, ..m })?;
                    return Ok(ColorTuple::new(&[l as u32, m.layer, (m.class - 1) * width + count]));
                }
                None => {
                    let (xi, c) = self.levels[l].process(e, &mut self.pool)?;
                    return Ok(ColorTuple::new(&[l as u32, xi, (c - 1) * width + 1]));
                }
            }
        }
        Err(ColorError::LevelExhausted { seq: e.seq })
    }
}

impl Colorer for DetEa {
    fn name(&self) -> &str {
        "det-ea"
    }

    fn process(&mut self, event: &StreamEvent) -> Result<Vec<Assignment>, ColorError> {
        event
            .edges()
            .iter()
            .map(|e| Ok(Assignment::new(e.seq, self.color(e)?)))
            .collect()
    }

    /// Trackers with `2 log n`-bit references; pool entries with endpoints, a refcount and
    /// per-level `(count, layer, class)`; overflow edges with their class.
    fn state_size_bits(&self) -> u64 {
        let id = 2 * bits_for(self.n as u64);
        let trackers: u64 = self
            .levels
            .iter()
            .flat_map(|l| l.layers.iter())
            .map(|p| p.state_bits(id as u32))
            .sum();
        let meta: u64 = self
            .levels
            .iter()
            .map(|l| bits_for(1u64 << l.level) + bits_for(l.layers.len() as u64) + bits_for(l.c as u64))
            .sum();
        let pool = self.pool.len() as u64 * (id + bits_for(self.pool.total_refs().max(1)) + meta);
        let overflow: u64 = self.levels.iter().map(|l| l.d_len * (id + bits_for(l.c as u64))).sum();
        trackers + pool + overflow
    }

    fn palette_bound(&self) -> u64 {
        self.levels
            .iter()
            .map(|l| (l.layers.len() as u64 + 1) * l.c as u64 * (1u64 << l.level))
            .sum()
    }

    fn regime(&self) -> &str {
        if self.levels[0].layers.is_empty() {
            "overflow-only"
        } else {
            "main"
        }
    }
}
