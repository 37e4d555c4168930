//! Trades colors for space: vertex groups of size `s` are contracted for the inner colorer.

use super::two_sided::prefix;
use super::{bits_for, edge_only, Assignment, ColorError, ColorTuple, Colorer, ColorerConfig, Factory};
use crate::stream::{Edge, StreamEvent};
use crate::structures::CliqueColoring;

/// Intra-group edges get `(0, Δ(χ(⟨x⟩,⟨y⟩)-1) + d_min)`; the rest go to the inner colorer
/// on vertices `ceil(x/s)` and come back as `(1, ...)`.
pub struct SpaceColorTradeoff {
    n: u32,
    s: u32,
    delta: u32,
    chi: Option<CliqueColoring>,
    deg: Vec<u32>,
    inner: Box<dyn Colorer>,
}

impl SpaceColorTradeoff {
    pub fn new(cfg: &ColorerConfig, factory: Factory) -> Result<Self, ColorError> {
        let s = cfg.param_u32("s", 2)?;
        if s == 0 {
            return Err(ColorError::InvalidConfig("s must be positive".into()));
        }
        let mut inner_cfg = cfg.clone();
        inner_cfg.n = cfg.n.div_ceil(s);
        inner_cfg.delta = cfg.delta.saturating_mul(s);
        inner_cfg.bipartition = None;
        inner_cfg.params.remove("s");
        inner_cfg.params.remove("inner");
        Ok(SpaceColorTradeoff {
            n: cfg.n,
            s,
            delta: cfg.delta,
            chi: if s >= 2 { Some(CliqueColoring::new(s)?) } else { None },
            deg: vec![0; cfg.n as usize + 1],
            inner: factory(&inner_cfg)?,
        })
    }

    fn group(&self, v: u32) -> u32 {
        v.div_ceil(self.s)
    }

    fn residue(&self, v: u32) -> u32 {
        (v - 1) % self.s + 1
    }
}

impl Colorer for SpaceColorTradeoff {
    fn name(&self) -> &str {
        "tradeoff"
    }

    fn process(&mut self, event: &StreamEvent) -> Result<Vec<Assignment>, ColorError> {
        edge_only(event, "tradeoff")?;
        let e = event.edges()[0];
        if e.u == 0 || e.v == 0 || e.u > self.n || e.v > self.n {
            return Err(ColorError::UnsupportedEvent(format!("edge {} outside 1..={}", e.seq, self.n)));
        }
        self.deg[e.u as usize] += 1;
        self.deg[e.v as usize] += 1;
        let (gx, gy) = (self.group(e.u), self.group(e.v));
        if gx == gy {
            let chi = self.chi.as_ref().expect("distinct vertices share a group only when s >= 2");
            let k = chi.color(self.residue(e.u), self.residue(e.v));
            let c = self.delta * (k - 1) + self.deg[e.u.min(e.v) as usize];
            return Ok(vec![Assignment::new(e.seq, ColorTuple::new(&[0, c]))]);
        }
        let out = self.inner.process(&StreamEvent::Edge(Edge::new(e.seq, gx, gy)))?;
        Ok(prefix(out, 1))
    }

    fn finalize(&mut self) -> Result<Vec<Assignment>, ColorError> {
        Ok(prefix(self.inner.finalize()?, 1))
    }

    /// Inner state plus one degree counter per vertex.
    fn state_size_bits(&self) -> u64 {
        self.inner.state_size_bits() + self.n as u64 * bits_for(self.delta as u64)
    }

    fn palette_bound(&self) -> u64 {
        let intra = self.chi.as_ref().map_or(0, |c| c.palette() as u64 * self.delta as u64);
        self.inner.palette_bound() + intra
    }

    fn is_online(&self) -> bool {
        self.inner.is_online()
    }

    fn regime(&self) -> &str {
        self.inner.regime()
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::colorers::{build_colorer, Profile};

    fn make(s: u32, n: u32, delta: u32) -> SpaceColorTradeoff {
        let cfg = ColorerConfig::new(n, delta, Profile::Desk, 0).with_param("s", s);
        SpaceColorTradeoff::new(&cfg, Arc::new(|c: &ColorerConfig| build_colorer("greedy", c))).unwrap()
    }

    fn edge(seq: u64, a: u32, b: u32) -> StreamEvent {
        StreamEvent::Edge(Edge::new(seq, a, b))
    }

    #[test]
    fn first_intra_edge() {
        let mut t = make(2, 4, 2);
        let out = t.process(&edge(1, 1, 2)).unwrap();
        assert_eq!(out[0].color, ColorTuple::new(&[0, 1]));
        // parallel copy bumps the counter of vertex 1
        let out = t.process(&edge(2, 2, 1)).unwrap();
        assert_eq!(out[0].color, ColorTuple::new(&[0, 2]));
    }

    #[test]
    fn inter_edges_are_contracted() {
        let mut t = make(2, 4, 2);
        let out = t.process(&edge(1, 1, 3)).unwrap();
        assert_eq!(out[0].color, ColorTuple::new(&[1, 1]));
        // {2,4} is also {1,2} in the contracted graph, so greedy moves on
        let out = t.process(&edge(2, 2, 4)).unwrap();
        assert_eq!(out[0].color, ColorTuple::new(&[1, 2]));
    }

    #[test]
    fn s_one_passes_through() {
        let mut t = make(1, 4, 2);
        let mut g = build_colorer("greedy", &ColorerConfig::new(4, 2, Profile::Desk, 0)).unwrap();
        for (i, (a, b)) in [(1, 2), (2, 3), (3, 4), (4, 1)].into_iter().enumerate() {
            let ev = edge(i as u64 + 1, a, b);
            let mine = t.process(&ev).unwrap();
            let theirs = g.process(&ev).unwrap();
            assert_eq!(mine[0].color, theirs[0].color.prefixed(1));
        }
        assert_eq!(t.palette_bound(), 3);
    }

    #[test]
    fn bound_matches_formula() {
        // inner greedy with degree 4*3 has 23 colors; K_4 needs 3 classes of 3 colors
        assert_eq!(make(4, 16, 3).palette_bound(), 23 + 9);
    }
}
