//! Seeded stream generators and stream-shape conversions.

use std::collections::HashSet;

use super::{EdgeKey, GraphStream, Mode, StreamBuilder, StreamError, StreamEvent, StreamHeader, Vertex};
use crate::randomness::{explicit_uniform_permutation, BitOracle};

/// Union of `delta` random injections `A -> B`, one arrival per A vertex.
///
/// A is `1..=na`, B is `na+1..=na+nb`. Every A vertex has degree exactly `delta`.
pub fn gen_regular_bipartite_stream(na: u32, nb: u32, delta: u32, seed: u64) -> Result<GraphStream, StreamError> {
    if na == 0 || delta == 0 || na > nb || delta > nb {
        return Err(StreamError::InvalidParams(format!(
            "need 1 <= na <= nb and 1 <= delta <= nb, got na={na} nb={nb} delta={delta}"
        )));
    }
    let oracle = BitOracle::new(seed);
    let mut nbrs = vec![Vec::with_capacity(delta as usize); na as usize];
    for r in 0..delta {
        let perm = explicit_uniform_permutation(nb, &oracle, r as u64 + 1).map_err(|e| StreamError::InvalidParams(e.to_string()))?;
        for (i, list) in nbrs.iter_mut().enumerate() {
            list.push(na + perm.forward(i as u32 + 1).expect("in range"));
        }
    }
    let header = StreamHeader { n: na + nb, delta, mode: Mode::Osva, a: Some(na) };
    let mut b = StreamBuilder::new(header)?;
    for (i, list) in nbrs.iter().enumerate() {
        b.push_vertex(i as u32 + 1, list)?;
    }
    Ok(b.finish())
}

struct Sampler {
    a: Option<u32>,
    delta: u32,
    deg: Vec<u32>,
    open: Vec<Vertex>,
    pos: Vec<usize>,
    used: HashSet<EdgeKey>,
    pairs: Vec<EdgeKey>,
}

impl Sampler {
    fn new(n: u32, a: Option<u32>, delta: u32) -> Self {
        Sampler {
            a,
            delta,
            deg: vec![0; n as usize + 1],
            open: (1..=n).collect(),
            pos: (0..=n as usize).map(|v| v.saturating_sub(1)).collect(),
            used: HashSet::new(),
            pairs: Vec::new(),
        }
    }

    fn allowed(&self, x: Vertex, y: Vertex) -> bool {
        x != y && self.a.is_none_or(|a| (x <= a) != (y <= a))
    }

    fn has_room(&self, k: &EdgeKey) -> bool {
        self.deg[k.0 as usize] < self.delta && self.deg[k.1 as usize] < self.delta
    }

    fn add(&mut self, k: EdgeKey) {
        if self.used.insert(k) {
            self.pairs.push(k);
        }
        for v in [k.0, k.1] {
            self.deg[v as usize] += 1;
            if self.deg[v as usize] == self.delta {
                let i = self.pos[v as usize];
                let last = *self.open.last().expect("open vertex");
                self.open.swap_remove(i);
                if last != v {
                    self.pos[last as usize] = i;
                }
            }
        }
    }

    fn pick_new(&self, rng: &mut crate::randomness::OracleStream) -> Option<EdgeKey> {
        let m = self.open.len() as u64;
        if m < 2 {
            return None;
        }
        for _ in 0..64 {
            let x = self.open[rng.next_below(m) as usize];
            let y = self.open[rng.next_below(m) as usize];
            let k = EdgeKey::new(x, y);
            if self.allowed(x, y) && !self.used.contains(&k) {
                return Some(k);
            }
        }
        let mut cands = Vec::new();
        for (i, &x) in self.open.iter().enumerate() {
            for &y in &self.open[i + 1..] {
                let k = EdgeKey::new(x, y);
                if self.allowed(x, y) && !self.used.contains(&k) {
                    cands.push(k);
                }
            }
        }
        if cands.is_empty() {
            return None;
        }
        cands.sort();
        Some(cands[rng.next_below(cands.len() as u64) as usize])
    }

    fn pick_repeat(&self, rng: &mut crate::randomness::OracleStream) -> Option<EdgeKey> {
        let m = self.pairs.len() as u64;
        if m == 0 {
            return None;
        }
        for _ in 0..32 {
            let k = self.pairs[rng.next_below(m) as usize];
            if self.has_room(&k) {
                return Some(k);
            }
        }
        let cands: Vec<EdgeKey> = self.pairs.iter().copied().filter(|k| self.has_room(k)).collect();
        if cands.is_empty() {
            None
        } else {
            Some(cands[rng.next_below(cands.len() as u64) as usize])
        }
    }
}

fn gen_multigraph(n: u32, a: Option<u32>, delta: u32, repeat_bias: f64, seed: u64) -> Result<GraphStream, StreamError> {
    if n < 2 || delta == 0 || !(0.0..=1.0).contains(&repeat_bias) {
        return Err(StreamError::InvalidParams(format!(
            "need n >= 2, delta >= 1, repeat_bias in [0,1]; got n={n} delta={delta} bias={repeat_bias}"
        )));
    }
    let mut rng = BitOracle::new(seed).stream(0);
    let mut s = Sampler::new(n, a, delta);
    let header = StreamHeader { n, delta, mode: Mode::Ea, a };
    let mut b = StreamBuilder::new(header)?;
    loop {
        let want_repeat = repeat_bias > 0.0 && rng.next_f64() < repeat_bias;
        let first = if want_repeat { s.pick_repeat(&mut rng) } else { s.pick_new(&mut rng) };
        let k = match first {
            Some(k) => k,
            None => {
                let fallback = if want_repeat {
                    s.pick_new(&mut rng)
                } else if repeat_bias > 0.0 {
                    s.pick_repeat(&mut rng)
                } else {
                    None
                };
                match fallback {
                    Some(k) => k,
                    None => break,
                }
            }
        };
        s.add(k);
        b.push_edge(k.0, k.1)?;
    }
    Ok(b.finish())
}

/// Edge-arrival stream on `1..=n` with max degree at most `delta`.
///
/// Each step repeats an earlier pair with probability `repeat_bias`, otherwise draws a new pair.
/// `repeat_bias = 0` gives a simple graph.
pub fn gen_random_multigraph_stream(n: u32, delta: u32, repeat_bias: f64, seed: u64) -> Result<GraphStream, StreamError> {
    gen_multigraph(n, None, delta, repeat_bias, seed)
}

/// As [`gen_random_multigraph_stream`], restricted to edges between `1..=na` and the rest.
pub fn gen_random_bipartite_multigraph_stream(
    na: u32,
    nb: u32,
    delta: u32,
    repeat_bias: f64,
    seed: u64,
) -> Result<GraphStream, StreamError> {
    if na == 0 || nb == 0 {
        return Err(StreamError::InvalidParams("both sides need a vertex".into()));
    }
    gen_multigraph(na + nb, Some(na), delta, repeat_bias, seed)
}

/// Star with center 1 and leaves `2..=n`.
pub fn gen_star_stream(n: u32) -> Result<GraphStream, StreamError> {
    if n < 2 {
        return Err(StreamError::InvalidParams("star needs n >= 2".into()));
    }
    let mut b = StreamBuilder::new(StreamHeader { n, delta: n - 1, mode: Mode::Ea, a: Some(1) })?;
    for leaf in 2..=n {
        b.push_edge(1, leaf)?;
    }
    Ok(b.finish())
}

/// Path on `n` vertices. With `bipartite`, vertices are labeled so that A = `1..=ceil(n/2)`.
pub fn gen_path_stream(n: u32, bipartite: bool) -> Result<GraphStream, StreamError> {
    if n < 2 {
        return Err(StreamError::InvalidParams("path needs n >= 2".into()));
    }
    let na = n.div_ceil(2);
    let label = |i: u32| if !bipartite { i } else if i % 2 == 1 { i.div_ceil(2) } else { na + i / 2 };
    let delta = if n == 2 { 1 } else { 2 };
    let a = bipartite.then_some(na);
    let mut b = StreamBuilder::new(StreamHeader { n, delta, mode: Mode::Ea, a })?;
    for i in 1..n {
        b.push_edge(label(i), label(i + 1))?;
    }
    Ok(b.finish())
}

/// `copies` parallel copies of `{1, 2}`.
pub fn gen_repeated_pair_stream(copies: u32) -> Result<GraphStream, StreamError> {
    if copies == 0 {
        return Err(StreamError::InvalidParams("need at least one copy".into()));
    }
    let mut b = StreamBuilder::new(StreamHeader { n: 2, delta: copies, mode: Mode::Ea, a: Some(1) })?;
    for _ in 0..copies {
        b.push_edge(1, 2)?;
    }
    Ok(b.finish())
}

/// Uniformly random ordering of `1..=n`.
pub fn random_arrival_order(n: u32, seed: u64) -> Vec<Vertex> {
    if n == 0 {
        return Vec::new();
    }
    let p = explicit_uniform_permutation(n, &BitOracle::new(seed), 7).expect("n >= 1");
    (1..=n).map(|i| p.forward(i).expect("in range")).collect()
}

/// Re-expresses the graph as vertex arrivals in `order` (default `1..=n`).
///
/// Each edge is listed at whichever endpoint arrives later, in original stream order.
pub fn to_vertex_arrival(stream: &GraphStream, order: Option<&[Vertex]>) -> Result<GraphStream, StreamError> {
    let n = stream.header.n;
    let default: Vec<Vertex> = (1..=n).collect();
    let order = order.unwrap_or(&default);
    let mut rank = vec![u32::MAX; n as usize + 1];
    for (i, &v) in order.iter().enumerate() {
        if v == 0 || v > n || rank[v as usize] != u32::MAX {
            return Err(StreamError::InvalidParams("arrival order must list each vertex once".into()));
        }
        rank[v as usize] = i as u32;
    }
    if order.len() != n as usize {
        return Err(StreamError::InvalidParams("arrival order must list each vertex once".into()));
    }
    let mut lists: Vec<Vec<Vertex>> = vec![Vec::new(); n as usize + 1];
    for e in stream.edges() {
        let (early, late) = if rank[e.u as usize] < rank[e.v as usize] { (e.u, e.v) } else { (e.v, e.u) };
        lists[late as usize].push(early);
    }
    let header = StreamHeader { mode: Mode::Va, ..stream.header };
    let mut b = StreamBuilder::new(header)?;
    for &v in order {
        b.push_vertex(v, &lists[v as usize])?;
    }
    Ok(b.finish())
}

/// One-sided form of a bipartite stream: each A vertex arrives with all of its edges.
pub fn to_one_sided(stream: &GraphStream) -> Result<GraphStream, StreamError> {
    let a = stream
        .header
        .a
        .ok_or_else(|| StreamError::InvalidParams("one-sided form needs a bipartite header".into()))?;
    let mut lists: Vec<Vec<Vertex>> = vec![Vec::new(); a as usize + 1];
    for e in stream.edges() {
        let (x, y) = if e.u <= a { (e.u, e.v) } else { (e.v, e.u) };
        lists[x as usize].push(y);
    }
    let header = StreamHeader { mode: Mode::Osva, ..stream.header };
    let mut b = StreamBuilder::new(header)?;
    for x in 1..=a {
        b.push_vertex(x, &lists[x as usize])?;
    }
    Ok(b.finish())
}

/// Edge-arrival view of any stream; edges keep their order and sequence numbers.
pub fn flatten_to_edge_arrival(stream: &GraphStream) -> GraphStream {
    GraphStream {
        header: StreamHeader { mode: Mode::Ea, ..stream.header },
        events: stream.edges().map(|e| StreamEvent::Edge(*e)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::parse_stream;

    #[test]
    fn regular_bipartite_degrees() {
        let s = gen_regular_bipartite_stream(4, 8, 2, 1).unwrap();
        let deg = s.degrees();
        assert!((1..=4).all(|x| deg[x] == 2));
        assert!((5..=12).all(|y| deg[y] <= 2));
        assert_eq!(s.header.mode, Mode::Osva);
        assert_eq!(gen_regular_bipartite_stream(4, 8, 2, 1).unwrap().serialize(), s.serialize());
    }

    #[test]
    fn regular_bipartite_smallest() {
        let s = gen_regular_bipartite_stream(1, 1, 1, 0).unwrap();
        assert_eq!(s.events.len(), 1);
        assert_eq!(s.edge_count(), 1);
    }

    #[test]
    fn regular_bipartite_rejects() {
        assert!(matches!(gen_regular_bipartite_stream(5, 4, 1, 0), Err(StreamError::InvalidParams(_))));
        assert!(matches!(gen_regular_bipartite_stream(2, 4, 5, 0), Err(StreamError::InvalidParams(_))));
    }

    #[test]
    fn multigraph_small_cases() {
        let s = gen_random_multigraph_stream(2, 3, 1.0, 9).unwrap();
        assert_eq!(s.edge_count(), 3);
        assert_eq!(s.max_multiplicity(), 3);
        let s = gen_random_multigraph_stream(2, 1, 0.5, 9).unwrap();
        assert_eq!(s.edge_count(), 1);
        let s = gen_random_multigraph_stream(5, 2, 0.0, 3).unwrap();
        assert_eq!(s.max_multiplicity(), 1);
        assert!(s.max_degree() <= 2);
    }

    #[test]
    fn simple_generator_fills_degrees() {
        let s = gen_random_multigraph_stream(64, 8, 0.0, 11).unwrap();
        assert_eq!(s.max_multiplicity(), 1);
        let deg = s.degrees();
        let full = deg.iter().filter(|&&d| d == 8).count();
        assert!(full >= 60, "only {full} saturated");
    }

    #[test]
    fn bipartite_multigraph_crosses() {
        let s = gen_random_bipartite_multigraph_stream(10, 12, 6, 0.5, 2).unwrap();
        assert!(s.edges().all(|e| e.u <= 10 && e.v > 10));
        assert!(s.max_degree() <= 6);
    }

    #[test]
    fn star_and_path() {
        let s = gen_star_stream(5).unwrap();
        assert_eq!(s.edge_count(), 4);
        assert_eq!(s.max_degree(), 4);
        let p = gen_path_stream(7, true).unwrap();
        assert_eq!(p.edge_count(), 6);
        assert!(p.edges().all(|e| e.u <= 4 && e.v > 4));
        assert_eq!(gen_path_stream(3, false).unwrap().max_degree(), 2);
    }

    #[test]
    fn flatten_keeps_order() {
        let s = parse_stream("h n=4 delta=2 mode=osva a=2\nv 1 3 4\nv 2 4\n").unwrap();
        let f = flatten_to_edge_arrival(&s);
        let pairs: Vec<(u32, u32)> = f.edges().map(|e| (e.u, e.v)).collect();
        assert_eq!(pairs, vec![(1, 3), (1, 4), (2, 4)]);
        assert_eq!(parse_stream(&f.serialize()).unwrap(), f);
    }

    #[test]
    fn conversions_preserve_edges() {
        let s = gen_random_bipartite_multigraph_stream(6, 6, 4, 0.3, 5).unwrap();
        let mut base: Vec<EdgeKey> = s.edges().map(|e| e.key()).collect();
        base.sort();
        let order = random_arrival_order(12, 3);
        for t in [to_vertex_arrival(&s, Some(&order)).unwrap(), to_one_sided(&s).unwrap()] {
            let mut got: Vec<EdgeKey> = t.edges().map(|e| e.key()).collect();
            got.sort();
            assert_eq!(got, base);
            assert_eq!(parse_stream(&t.serialize()).unwrap(), t);
        }
    }
}
