//! One-sided vertex arrivals, `O(Δ)` colors, deterministic given per-vertex advice permutations.
//!
//! Desk constants: `C = 64Δ`, `s = ceil(8 log2(nΔ/δ))`, refresh after `s/32` removals,
//! fresh block of `ceil(4d/s)·s` indices for heavy multi-edges. Paper constants are
//! `2^18`, `2^18`, `s/2^17` and `64`.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{arrival, bits_for, Assignment, ColorError, ColorTuple, Colorer, ColorerConfig, Greedy, Profile};
use crate::randomness::{BitOracle, Permutation, PermutationKind, PermutationSpec};
use crate::stream::{StreamEvent, Vertex};
use crate::structures::{saturating_matching, StructureError};

struct Slot {
    sigma: Arc<Permutation>,
    b: u32,
    q: Vec<bool>,
    q_len: u32,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetVaParams {
    pub c: u32,
    pub s: u32,
    /// Removals from `Q_y` that trigger a block refresh.
    pub quota: u32,
    /// Multiplicity from which the heavy branch is taken.
    pub heavy: u32,
    pub fresh_mult: u32,
}

impl DetVaParams {
    pub fn from_config(cfg: &ColorerConfig) -> Result<Self, ColorError> {
        let (c_c, c_s, quota_div, fresh) = match cfg.profile {
            Profile::Paper => (1u32 << 18, (1u32 << 18) as f64, 1u32 << 17, 64),
            Profile::Desk => (64, 8.0, 32, 4),
        };
        let c_c = cfg.param_u32("c_mult", c_c)?;
        let c_s = cfg.param_f64("s_scale", c_s)?;
        let quota_div = cfg.param_u32("quota_div", quota_div)?;
        let fresh_mult = cfg.param_u32("fresh_mult", fresh)?;
        let delta = cfg.delta.max(1) as u64;
        let c = (c_c as u64 * delta).min(u32::MAX as u64) as u32;
        let log = ((cfg.n as f64 * delta as f64) / cfg.failure_prob).log2().max(1.0);
        let s = ((c_s * log).ceil() as u32).clamp(16, c.max(16));
        if quota_div == 0 || c_c == 0 {
            return Err(ColorError::InvalidConfig("c_mult and quota_div must be positive".into()));
        }
        Ok(DetVaParams { c, s, quota: (s / quota_div).max(1), heavy: s.div_ceil(16), fresh_mult })
    }
}

pub struct BptDetVa {
    n: u32,
    params: DetVaParams,
    oracle: BitOracle,
    perms: PermutationSpec,
    slots: Vec<Option<Slot>>,
    touched: u64,
    fallback: Option<Greedy>,
}

impl BptDetVa {
    pub fn new(cfg: &ColorerConfig) -> Result<Self, ColorError> {
        let params = DetVaParams::from_config(cfg)?;
        let cutoff = ((cfg.n as f64 * cfg.delta.max(1) as f64) / cfg.failure_prob).log2();
        let use_greedy = match cfg.param_str("fallback", "auto") {
            "auto" => (cfg.delta as f64) <= cutoff,
            "always" => true,
            "never" => false,
            other => return Err(ColorError::InvalidConfig(format!("fallback={other}"))),
        };
        Ok(BptDetVa {
            n: cfg.n,
            params,
            oracle: BitOracle::new(cfg.seed),
            perms: cfg.perm_spec(PermutationKind::Explicit)?,
            slots: (0..=cfg.n).map(|_| None).collect(),
            touched: 0,
            fallback: use_greedy.then(|| Greedy::new(cfg.n, cfg.delta)),
        })
    }

    pub fn params(&self) -> DetVaParams {
        self.params
    }

    /// Installs advice for `y` and resets its state.
    pub fn set_permutation(&mut self, y: Vertex, sigma: Permutation) -> Result<(), ColorError> {
        if sigma.size() != self.params.c || sigma.kind() == PermutationKind::LazyUniform {
            return Err(ColorError::InvalidConfig("advice must be an invertible permutation of [C]".into()));
        }
        if self.slots[y as usize].is_none() {
            self.touched += 1;
        }
        self.slots[y as usize] = Some(self.fresh_slot(Arc::new(sigma)));
        Ok(())
    }

    /// `(b_y, |Q_y|)`.
    pub fn block_state(&self, y: Vertex) -> Option<(u32, u32)> {
        self.slots.get(y as usize)?.as_ref().map(|s| (s.b, s.q_len))
    }

    fn fresh_slot(&self, sigma: Arc<Permutation>) -> Slot {
        let s = self.params.s;
        Slot { sigma, b: 1, q: vec![true; s as usize], q_len: s }
    }

    fn ensure(&mut self, y: Vertex) -> Result<(), ColorError> {
        if y == 0 || y > self.n {
            return Err(ColorError::UnsupportedEvent(format!("vertex {y} outside 1..={}", self.n)));
        }
        if self.slots[y as usize].is_none() {
            let sigma = self.perms.build(self.params.c, &self.oracle, y as u64)?;
            self.slots[y as usize] = Some(self.fresh_slot(Arc::new(sigma)));
            self.touched += 1;
        }
        Ok(())
    }

    /// Candidate colors `σ_y[F_y]` for multiplicity `d`.
    fn candidates(&self, y: Vertex, d: u32) -> Result<Vec<u32>, ColorError> {
        let p = self.params;
        let slot = self.slots[y as usize].as_ref().expect("ensured");
        let base = (slot.b - 1) as u64 * p.s as u64;
        let mut idx: Vec<u64> = slot
            .q
            .iter()
            .enumerate()
            .filter_map(|(i, &live)| live.then_some(base + i as u64 + 1))
            .collect();
        if d >= p.heavy {
            let blocks = (p.fresh_mult as u64 * d as u64).div_ceil(p.s as u64);
            let start = slot.b as u64 * p.s as u64;
            idx.extend(start + 1..=(slot.b as u64 + blocks) * p.s as u64);
        }
        if idx.last().is_some_and(|&i| i > p.c as u64) {
            return Err(ColorError::IndexOverflow { vertex: y });
        }
        idx.into_iter()
            .map(|i| slot.sigma.forward(i as u32).map_err(ColorError::from))
            .collect()
    }
}

impl Colorer for BptDetVa {
    fn name(&self) -> &str {
        "bpt-det-va"
    }

    fn process(&mut self, event: &StreamEvent) -> Result<Vec<Assignment>, ColorError> {
        let (x, edges) = arrival(event, "bpt-det-va")?;
        if let Some(g) = self.fallback.as_mut() {
            return g.process(event);
        }
        let mut mult: BTreeMap<Vertex, u32> = BTreeMap::new();
        for e in edges {
            *mult.entry(e.other(x)).or_default() += 1;
        }
        let mut cand: BTreeMap<Vertex, Vec<u32>> = BTreeMap::new();
        for (&y, &d) in &mult {
            self.ensure(y)?;
            cand.insert(y, self.candidates(y, d)?);
        }
        let adjacency: Vec<Vec<u32>> = edges.iter().map(|e| cand[&e.other(x)].clone()).collect();
        let matched = saturating_matching(&adjacency).map_err(|err| match err {
            StructureError::NoSaturatingMatching { witness } => ColorError::NoSaturatingMatching { vertex: x, witness },
            other => other.into(),
        })?;
        let p = self.params;
        for (e, &col) in edges.iter().zip(&matched) {
            let y = e.other(x);
            if mult[&y] < p.heavy {
                let slot = self.slots[y as usize].as_mut().expect("ensured");
                let i = slot.sigma.inverse(col)? - (slot.b - 1) * p.s;
                slot.q[i as usize - 1] = false;
                slot.q_len -= 1;
            }
        }
        for (&y, &d) in &mult {
            let slot = self.slots[y as usize].as_mut().expect("ensured");
            if d < p.heavy {
                if slot.q_len <= p.s - p.quota {
                    slot.b += 1;
                    slot.q.iter_mut().for_each(|q| *q = true);
                    slot.q_len = p.s;
                }
            } else {
                slot.q.iter_mut().for_each(|q| *q = true);
                slot.q_len = p.s;
                slot.b += (p.fresh_mult * d).div_ceil(p.s) + 1;
            }
        }
        Ok(edges
            .iter()
            .zip(matched)
            .map(|(e, col)| Assignment::new(e.seq, ColorTuple::single(col)))
            .collect())
    }

    /// Per touched fixed vertex: `b_y` and the `s`-bit set `Q_y`. Advice is not counted.
    fn state_size_bits(&self) -> u64 {
        if let Some(g) = &self.fallback {
            return g.state_size_bits();
        }
        let p = self.params;
        self.touched * (bits_for((p.c / p.s) as u64 + 1) + p.s as u64)
    }

    fn palette_bound(&self) -> u64 {
        match &self.fallback {
            Some(g) => g.palette_bound(),
            None => self.params.c as u64,
        }
    }

    fn regime(&self) -> &str {
        if self.fallback.is_some() {
            "greedy"
        } else {
            "main"
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::Edge;

    fn cfg(n: u32, delta: u32) -> ColorerConfig {
        ColorerConfig::new(n, delta, Profile::Desk, 3).with_param("fallback", "never")
    }

    fn arrive(x: Vertex, seq0: u64, ys: &[Vertex]) -> StreamEvent {
        let edges = ys.iter().enumerate().map(|(i, &y)| Edge::new(seq0 + i as u64, x, y)).collect();
        StreamEvent::Vertex { vertex: x, edges }
    }

    #[test]
    fn desk_constants() {
        let p = DetVaParams::from_config(&cfg(64, 32)).unwrap();
        assert_eq!(p.c, 64 * 32);
        // log2(64*32/0.1) = 14.32..
        assert_eq!(p.s, 115);
        assert_eq!(p.quota, 3);
        assert_eq!(p.heavy, 8);
    }

    #[test]
    fn single_edge_identity_advice_gets_smallest_color() {
        let mut c = BptDetVa::new(&cfg(4, 32)).unwrap();
        let cc = c.params().c;
        c.set_permutation(3, Permutation::identity(cc)).unwrap();
        let out = c.process(&arrive(1, 1, &[3])).unwrap();
        assert_eq!(out, vec![Assignment::new(1, ColorTuple::single(1))]);
        assert_eq!(c.block_state(3), Some((1, c.params().s - 1)));
    }

    #[test]
    fn refresh_after_quota() {
        let mut c = BptDetVa::new(&cfg(8, 32)).unwrap();
        let p = c.params();
        c.set_permutation(8, Permutation::identity(p.c)).unwrap();
        for x in 1..=p.quota {
            c.process(&arrive(x, x as u64, &[8])).unwrap();
        }
        assert_eq!(c.block_state(8), Some((2, p.s)));
        let out = c.process(&arrive(5, 10, &[8])).unwrap();
        assert_eq!(out[0].color, ColorTuple::single(p.s + 1));
    }

    #[test]
    fn heavy_multi_edge_jumps_blocks() {
        let mut c = BptDetVa::new(&cfg(4, 32)).unwrap();
        let p = c.params();
        c.set_permutation(3, Permutation::identity(p.c)).unwrap();
        let ys = vec![3; p.heavy as usize];
        let out = c.process(&arrive(1, 1, &ys)).unwrap();
        let cols: Vec<u32> = out.iter().map(|a| a.color.parts()[0]).collect();
        assert_eq!(cols, (1..=p.heavy).collect::<Vec<_>>());
        let jump = (p.fresh_mult * p.heavy).div_ceil(p.s) + 1;
        assert_eq!(c.block_state(3), Some((1 + jump, p.s)));
    }

    #[test]
    fn random_advice_is_proper() {
        let mut c = BptDetVa::new(&cfg(64, 32)).unwrap();
        let mut seen = std::collections::HashSet::new();
        let mut seq = 1u64;
        for x in 1..=32u32 {
            let ys: Vec<u32> = (0..32).map(|k| 33 + (x + k) % 32).collect();
            for (a, &y) in c.process(&arrive(x, seq, &ys)).unwrap().iter().zip(&ys) {
                assert!(seen.insert((y, a.color.clone())));
                assert!(seen.insert((x, a.color.clone())));
            }
            seq += 32;
        }
    }
}
