//! Two-sided bipartite vertex arrivals via two one-sided instances.

use std::sync::Arc;

use super::{arrival, Assignment, Bipartition, ColorError, Colorer, ColorerConfig, Factory};
use crate::stream::StreamEvent;

/// Arrivals from A go to instance 1, arrivals from B to instance 2; colors are prefixed.
pub struct OneToTwoSided {
    side: Arc<Bipartition>,
    inner: [Box<dyn Colorer>; 2],
    events: [u64; 2],
}

impl OneToTwoSided {
    pub fn new(cfg: &ColorerConfig, factory: Factory) -> Result<Self, ColorError> {
        let side = cfg
            .bipartition
            .clone()
            .ok_or_else(|| ColorError::InvalidConfig("two-sided wrapper needs a bipartition".into()))?;
        let make = |i: u64| {
            let mut c = cfg.child(cfg.n, cfg.delta, i);
            let s = side.clone();
            c.bipartition = Some(Arc::new(Bipartition::from_fn(cfg.n, move |v| s.in_a(v) == (i == 1))));
            factory(&c)
        };
        Ok(OneToTwoSided { inner: [make(1)?, make(2)?], side, events: [0; 2] })
    }

    /// Events forwarded to each instance.
    pub fn events_seen(&self) -> [u64; 2] {
        self.events
    }
}

impl Colorer for OneToTwoSided {
    fn name(&self) -> &str {
        "two-sided"
    }

    fn process(&mut self, event: &StreamEvent) -> Result<Vec<Assignment>, ColorError> {
        let (x, edges) = arrival(event, "two-sided wrapper")?;
        if edges.iter().any(|e| self.side.in_a(e.other(x)) == self.side.in_a(x)) {
            return Err(ColorError::UnsupportedEvent(format!("arrival of {x} has an edge inside one side")));
        }
        let i = if self.side.in_a(x) { 0 } else { 1 };
        self.events[i] += 1;
        let out = self.inner[i].process(event)?;
        Ok(prefix(out, i as u32 + 1))
    }

    fn finalize(&mut self) -> Result<Vec<Assignment>, ColorError> {
        let mut out = prefix(self.inner[0].finalize()?, 1);
        out.extend(prefix(self.inner[1].finalize()?, 2));
        Ok(out)
    }

    fn state_size_bits(&self) -> u64 {
        self.inner.iter().map(|c| c.state_size_bits()).sum()
    }

    fn palette_bound(&self) -> u64 {
        self.inner.iter().map(|c| c.palette_bound()).sum()
    }

    fn is_online(&self) -> bool {
        self.inner.iter().all(|c| c.is_online())
    }

    fn regime(&self) -> &str {
        self.inner[0].regime()
    }
}

pub(crate) fn prefix(out: Vec<Assignment>, component: u32) -> Vec<Assignment> {
    out.into_iter()
        .map(|a| Assignment::new(a.seq, a.color.prefixed(component)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colorers::{build_colorer, Profile};
    use crate::stream::Edge;

    fn wrapper() -> OneToTwoSided {
        let mut cfg = ColorerConfig::new(4, 2, Profile::Desk, 0);
        cfg.bipartition = Some(Arc::new(Bipartition::prefix(4, 2)));
        OneToTwoSided::new(&cfg, Arc::new(|c: &ColorerConfig| build_colorer("bpt-rand-va", c))).unwrap()
    }

    #[test]
    fn arrivals_only_in_a_use_instance_one() {
        let mut w = wrapper();
        w.process(&StreamEvent::Vertex { vertex: 1, edges: vec![Edge::new(1, 1, 3)] }).unwrap();
        w.process(&StreamEvent::Vertex { vertex: 2, edges: vec![Edge::new(2, 2, 3)] }).unwrap();
        assert_eq!(w.events_seen(), [2, 0]);
    }

    #[test]
    fn alternating_sides_are_prefixed() {
        let mut w = wrapper();
        w.process(&StreamEvent::Vertex { vertex: 3, edges: vec![] }).unwrap();
        let a = w.process(&StreamEvent::Vertex { vertex: 1, edges: vec![Edge::new(1, 1, 3)] }).unwrap();
        let b = w.process(&StreamEvent::Vertex { vertex: 4, edges: vec![Edge::new(2, 4, 1)] }).unwrap();
        assert_eq!(a[0].color.parts()[0], 1);
        assert_eq!(b[0].color.parts()[0], 2);
        assert_eq!(w.events_seen(), [1, 2]);
        assert_eq!(w.palette_bound(), 2 * 10);
    }

    #[test]
    fn needs_bipartition() {
        let cfg = ColorerConfig::new(4, 2, Profile::Desk, 0);
        let f: Factory = Arc::new(|c: &ColorerConfig| build_colorer("greedy", c));
        assert!(matches!(OneToTwoSided::new(&cfg, f), Err(ColorError::InvalidConfig(_))));
    }
}
