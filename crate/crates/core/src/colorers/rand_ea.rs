//! Simple-graph edge arrivals, `O(Δ)` colors: one free-color tracker per vertex.
//!
//! Desk constants: `C = 16Δ`, `s` the least power of two `>= 16 sqrt(Δ log2(n/δ))`.
//! Paper constants use 128 for both. `Δ` is rounded up to a power of two.

use std::sync::Arc;

use super::{Assignment, ColorError, ColorTuple, Colorer, ColorerConfig, Greedy, Profile};
use crate::randomness::{BitOracle, OracleStream, Permutation, PermutationKind, PermutationSpec};
use crate::stream::{StreamEvent, Vertex};
use crate::structures::{common_free, FreeColorTracker, StructureError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandEaParams {
    pub delta: u32,
    pub c: u32,
    pub s: u32,
}

impl RandEaParams {
    pub fn from_config(cfg: &ColorerConfig) -> Result<Self, ColorError> {
        let base = match cfg.profile {
            Profile::Paper => 128.0,
            Profile::Desk => 16.0,
        };
        let c_mult = cfg.param_u32("c_mult", base as u32)?;
        let s_scale = cfg.param_f64("s_scale", base)?;
        if !c_mult.is_power_of_two() {
            return Err(ColorError::InvalidConfig(format!("c_mult={c_mult} must be a power of two")));
        }
        let delta = cfg.delta.max(1).next_power_of_two();
        let c = c_mult * delta;
        let want = (s_scale * (delta as f64 * cfg.log_n_over_delta()).sqrt()).ceil().max(1.0) as u32;
        let s = want.next_power_of_two().clamp(c / delta, c);
        Ok(RandEaParams { delta, c, s })
    }
}

pub struct RandEa {
    n: u32,
    params: RandEaParams,
    oracle: BitOracle,
    perms: PermutationSpec,
    trackers: Vec<Option<FreeColorTracker>>,
    touched: u64,
    rng: OracleStream,
    fallback: Option<Greedy>,
}

impl RandEa {
    pub fn new(cfg: &ColorerConfig) -> Result<Self, ColorError> {
        let params = RandEaParams::from_config(cfg)?;
        let mut me = Self::with_params(cfg, params)?;
        let use_greedy = match cfg.param_str("fallback", "auto") {
            "auto" => (cfg.delta as f64) < cfg.log_n_over_delta(),
            "always" => true,
            "never" => false,
            other => return Err(ColorError::InvalidConfig(format!("fallback={other}"))),
        };
        if use_greedy {
            me.fallback = Some(Greedy::new(cfg.n, cfg.delta));
        }
        Ok(me)
    }

    /// Uses the given `(Δ, C, s)` and never falls back.
    pub fn with_params(cfg: &ColorerConfig, params: RandEaParams) -> Result<Self, ColorError> {
        let p = params;
        if !(p.c.is_power_of_two() && p.s.is_power_of_two() && p.delta.is_power_of_two())
            || p.s > p.c
            || p.delta > p.c
            || (p.s as u64 * p.delta as u64) < p.c as u64
        {
            return Err(ColorError::InvalidConfig(format!("bad tracker shape {p:?}")));
        }
        Ok(RandEa {
            n: cfg.n,
            params,
            oracle: BitOracle::new(cfg.seed),
            perms: cfg.perm_spec(PermutationKind::Explicit)?,
            trackers: (0..=cfg.n).map(|_| None).collect(),
            touched: 0,
            rng: BitOracle::new(cfg.seed).stream(0),
            fallback: None,
        })
    }

    pub fn params(&self) -> RandEaParams {
        self.params
    }

    pub fn set_permutation(&mut self, v: Vertex, sigma: Permutation) -> Result<(), ColorError> {
        let p = self.params;
        let t = FreeColorTracker::new(p.c, p.s, p.delta, Arc::new(sigma))?;
        if self.trackers[v as usize].is_none() {
            self.touched += 1;
        }
        self.trackers[v as usize] = Some(t);
        Ok(())
    }

    pub fn tracker(&self, v: Vertex) -> Option<&FreeColorTracker> {
        self.trackers.get(v as usize)?.as_ref()
    }

    fn ensure(&mut self, v: Vertex) -> Result<(), ColorError> {
        if v == 0 || v > self.n {
            return Err(ColorError::UnsupportedEvent(format!("vertex {v} outside 1..={}", self.n)));
        }
        if self.trackers[v as usize].is_none() {
            let sigma = self.perms.build(self.params.c, &self.oracle, v as u64)?;
            self.set_permutation(v, sigma)?;
        }
        let t = self.trackers[v as usize].as_ref().expect("ensured");
        if t.is_exhausted() {
            return Err(ColorError::BlockOverflow { vertex: v });
        }
        Ok(())
    }

    fn remove(&mut self, v: Vertex, c: u32) -> Result<(), ColorError> {
        let t = self.trackers[v as usize].as_mut().expect("ensured");
        t.remove_and_update(c, None).map_err(|e| match e {
            StructureError::BlockOverflow { .. } => ColorError::BlockOverflow { vertex: v },
            other => other.into(),
        })?;
        Ok(())
    }
}

impl Colorer for RandEa {
    fn name(&self) -> &str {
        "rand-ea"
    }

    fn process(&mut self, event: &StreamEvent) -> Result<Vec<Assignment>, ColorError> {
        if let Some(g) = self.fallback.as_mut() {
            return g.process(event);
        }
        let mut out = Vec::new();
        for e in event.edges() {
            self.ensure(e.u)?;
            self.ensure(e.v)?;
            let common = {
                let tx = self.trackers[e.u as usize].as_ref().expect("ensured");
                let ty = self.trackers[e.v as usize].as_ref().expect("ensured");
                common_free(tx, ty)
            };
            if common.is_empty() {
                return Err(ColorError::EmptyIntersection { seq: e.seq });
            }
            let c = common[self.rng.next_below(common.len() as u64) as usize];
            self.remove(e.u, c)?;
            self.remove(e.v, c)?;
            out.push(Assignment::new(e.seq, ColorTuple::single(c)));
        }
        Ok(out)
    }

    /// `s + log2(C/s)` bits per tracker. Permutations come from the oracle seed.
    fn state_size_bits(&self) -> u64 {
        if let Some(g) = &self.fallback {
            return g.state_size_bits();
        }
        self.touched * FreeColorTracker::fresh_bits(self.params.c, self.params.s)
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
    use crate::randomness::ExplicitPermutation;
    use crate::stream::Edge;

    fn small() -> RandEa {
        let cfg = ColorerConfig::new(4, 2, Profile::Desk, 1);
        RandEa::with_params(&cfg, RandEaParams { delta: 2, c: 8, s: 4 }).unwrap()
    }

    #[test]
    fn desk_params() {
        let p = RandEaParams::from_config(&ColorerConfig::new(128, 64, Profile::Desk, 0)).unwrap();
        // 16 sqrt(64 * log2(1280)) = 410.6
        assert_eq!(p, RandEaParams { delta: 64, c: 1024, s: 512 });
    }

    #[test]
    fn fresh_identity_trackers_intersect_in_first_block() {
        let mut r = small();
        r.set_permutation(1, Permutation::identity(8)).unwrap();
        r.set_permutation(2, Permutation::identity(8)).unwrap();
        let out = r.process(&StreamEvent::Edge(Edge::new(1, 1, 2))).unwrap();
        let c = out[0].color.parts()[0];
        assert!((1..=4).contains(&c));
        assert!(!r.tracker(1).unwrap().contains(c));
        assert_eq!(r.state_size_bits(), 2 * 5);
    }

    #[test]
    fn disjoint_windows_abort() {
        let mut r = small();
        r.set_permutation(1, Permutation::identity(8)).unwrap();
        let flipped = ExplicitPermutation::from_forward(vec![5, 6, 7, 8, 1, 2, 3, 4]).unwrap();
        r.set_permutation(2, Permutation::Explicit(flipped)).unwrap();
        assert_eq!(r.process(&StreamEvent::Edge(Edge::new(1, 1, 2))), Err(ColorError::EmptyIntersection { seq: 1 }));
    }

    #[test]
    fn small_delta_falls_back() {
        let r = RandEa::new(&ColorerConfig::new(64, 4, Profile::Desk, 0)).unwrap();
        assert_eq!(r.regime(), "greedy");
        assert_eq!(r.palette_bound(), 7);
    }

    #[test]
    fn same_seed_same_colors() {
        let stream = crate::stream::gen_random_multigraph_stream(32, 16, 0.0, 2).unwrap();
        let run = || {
            let mut r = RandEa::new(&ColorerConfig::new(32, 16, Profile::Desk, 11)).unwrap();
            stream.events.iter().map(|e| r.process(e).unwrap()).collect::<Vec<_>>()
        };
        assert_eq!(run(), run());
    }
}
