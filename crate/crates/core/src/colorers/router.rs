//! Splits a general stream into `t` bipartite streams using a binary code.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::two_sided::prefix;
use super::{bits_for, Assignment, Bipartition, ColorError, Colorer, ColorerConfig, Factory, Profile};
use crate::codes::{build_code, code_length, BinaryCode, CodeProfile, Codeword};
use crate::randomness::derive_seed;
use crate::stream::{Edge, StreamEvent, Vertex};

const CODE_TAG: u64 = 0xc0de;

/// Edges routed per part, and the largest part degree seen.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RouterStats {
    pub per_part: Vec<u64>,
    pub max_part_degree: u32,
}

/// Edge `{x,y}` goes to the first part `i` where the codewords differ and neither
/// endpoint already holds more than `overload/t` of its degree in part `i`.
pub struct GenToBptRouter {
    name: String,
    n: u32,
    t: u32,
    overload: u32,
    inner_delta: u32,
    words: Vec<Codeword>,
    code_bits: u64,
    deg: Vec<u32>,
    part_deg: Vec<u32>,
    cfg: ColorerConfig,
    factory: Factory,
    inner: Vec<Option<Box<dyn Colorer>>>,
    per_part: Vec<u64>,
    max_part_degree: u32,
}

impl GenToBptRouter {
    /// Builds the code from the profile: `t = 4 ceil(log2 n)`, distance `delta_code·t`.
    pub fn new(name: &str, cfg: &ColorerConfig, factory: Factory) -> Result<Self, ColorError> {
        let base = match cfg.profile {
            Profile::Paper => CodeProfile::paper(),
            Profile::Desk => CodeProfile::desk(),
        };
        let delta_code = cfg.param_f64("delta_code", base.delta_code)?;
        let overload = cfg.param_u32("overload", base.overload)?;
        let t = cfg.param_u32("code_t", code_length(cfg.n, cfg.profile == Profile::Desk))?;
        let code = build_code(cfg.n.max(2), t, delta_code, derive_seed(cfg.seed, CODE_TAG))?;
        Self::with_code(name, cfg, &code, overload, factory)
    }

    pub fn with_code(
        name: &str,
        cfg: &ColorerConfig,
        code: &BinaryCode,
        overload: u32,
        factory: Factory,
    ) -> Result<Self, ColorError> {
        if code.n() < cfg.n {
            return Err(ColorError::InvalidConfig(format!("code has {} words for n={}", code.n(), cfg.n)));
        }
        if overload == 0 {
            return Err(ColorError::InvalidConfig("overload must be positive".into()));
        }
        let t = code.t();
        let words = (1..=cfg.n).map(|v| code.encode(v)).collect::<Result<Vec<_>, _>>()?;
        let inner_delta = cfg.delta.min((overload as u64 * cfg.delta as u64 / t as u64) as u32 + 1);
        let code_bits = if code.is_linear() {
            crate::codes::ceil_log2(code.n() as u64).max(1) as u64 * t as u64
        } else {
            code.n() as u64 * t as u64
        };
        let mut r = GenToBptRouter {
            name: name.to_string(),
            n: cfg.n,
            t,
            overload,
            inner_delta,
            words,
            code_bits,
            deg: vec![0; cfg.n as usize + 1],
            part_deg: vec![0; (cfg.n as usize + 1) * t as usize],
            cfg: cfg.clone(),
            factory,
            inner: (0..t).map(|_| None).collect(),
            per_part: vec![0; t as usize],
            max_part_degree: 0,
        };
        r.instance(1)?;
        Ok(r)
    }

    pub fn code_length(&self) -> u32 {
        self.t
    }

    /// Max degree declared to each part's colorer.
    pub fn inner_delta(&self) -> u32 {
        self.inner_delta
    }

    pub fn part_degree(&self, v: Vertex, i: u32) -> u32 {
        self.part_deg[v as usize * self.t as usize + i as usize - 1]
    }

    pub fn degree(&self, v: Vertex) -> u32 {
        self.deg[v as usize]
    }

    pub fn stats(&self) -> RouterStats {
        RouterStats { per_part: self.per_part.clone(), max_part_degree: self.max_part_degree }
    }

    /// Part `i`'s colorer, created on first use.
    pub fn inner(&self, i: u32) -> Option<&dyn Colorer> {
        self.inner.get(i as usize - 1)?.as_deref()
    }

    fn instance(&mut self, i: u32) -> Result<&mut Box<dyn Colorer>, ColorError> {
        let slot = i as usize - 1;
        if self.inner[slot].is_none() {
            let mut c = self.cfg.child(self.n, self.inner_delta, i as u64);
            let words = self.words.clone();
            c.bipartition = Some(Arc::new(Bipartition::from_fn(self.n, move |v| !words[v as usize - 1].bit(i))));
            self.inner[slot] = Some((self.factory)(&c)?);
        }
        Ok(self.inner[slot].as_mut().expect("just built"))
    }

    /// Picks a part for the edge and updates the degree counters.
    fn route(&mut self, e: &Edge) -> Result<u32, ColorError> {
        let (x, y) = (e.u, e.v);
        if x == 0 || y == 0 || x > self.n || y > self.n {
            return Err(ColorError::UnsupportedEvent(format!("edge {} outside 1..={}", e.seq, self.n)));
        }
        let t = self.t as u64;
        let ok = |r: &Self, v: Vertex, i: u32| r.part_degree(v, i) as u64 * t <= r.overload as u64 * r.deg[v as usize] as u64;
        let (wx, wy) = (&self.words[x as usize - 1], &self.words[y as usize - 1]);
        let part = (1..=self.t).find(|&i| wx.bit(i) != wy.bit(i) && ok(self, x, i) && ok(self, y, i));
        let i = part.ok_or(ColorError::Unroutable { seq: e.seq })?;
        for v in [x, y] {
            let k = v as usize * self.t as usize + i as usize - 1;
            self.part_deg[k] += 1;
            self.deg[v as usize] += 1;
            let got = self.part_deg[k];
            let bound = self.overload as f64 * self.deg[v as usize] as f64 / self.t as f64 + 1.0;
            if got as f64 > bound {
                return Err(ColorError::DegreeBoundBreach { vertex: v, part: i, got, bound });
            }
            self.max_part_degree = self.max_part_degree.max(got);
        }
        self.per_part[i as usize - 1] += 1;
        Ok(i)
    }
}

impl Colorer for GenToBptRouter {
    fn name(&self) -> &str {
        &self.name
    }

    fn process(&mut self, event: &StreamEvent) -> Result<Vec<Assignment>, ColorError> {
        match event {
            StreamEvent::Edge(e) => {
                let i = self.route(e)?;
                let out = self.instance(i)?.process(event)?;
                Ok(prefix(out, i))
            }
            StreamEvent::Vertex { vertex, edges } => {
                let mut groups: BTreeMap<u32, Vec<Edge>> = BTreeMap::new();
                for e in edges {
                    let i = self.route(e)?;
                    groups.entry(i).or_default().push(*e);
                }
                let mut out = Vec::with_capacity(edges.len());
                for (i, edges) in groups {
                    let ev = StreamEvent::Vertex { vertex: *vertex, edges };
                    out.extend(prefix(self.instance(i)?.process(&ev)?, i));
                }
                Ok(out)
            }
        }
    }

    fn finalize(&mut self) -> Result<Vec<Assignment>, ColorError> {
        let mut out = Vec::new();
        for (k, c) in self.inner.iter_mut().enumerate() {
            if let Some(c) = c {
                out.extend(prefix(c.finalize()?, k as u32 + 1));
            }
        }
        Ok(out)
    }

    /// Code storage, `t` part-degree counters per vertex, and every live part colorer.
    fn state_size_bits(&self) -> u64 {
        let counters = self.n as u64 * self.t as u64 * bits_for(self.cfg.delta as u64);
        let inner: u64 = self.inner.iter().flatten().map(|c| c.state_size_bits()).sum();
        self.code_bits + counters + inner
    }

    fn palette_bound(&self) -> u64 {
        let one = self.inner[0].as_ref().map_or(0, |c| c.palette_bound());
        one * self.t as u64
    }

    fn is_online(&self) -> bool {
        self.inner[0].as_ref().is_none_or(|c| c.is_online())
    }

    fn regime(&self) -> &str {
        self.inner[0].as_ref().map_or("main", |c| c.regime())
    }
}
