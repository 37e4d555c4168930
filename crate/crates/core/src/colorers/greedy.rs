//! Smallest free color out of `2Δ-1`.

use super::{Assignment, ColorError, ColorTuple, Colorer};
use crate::stream::{Edge, StreamEvent, Vertex};

/// Per-vertex used-color bitmaps. Vertex arrivals are colored edge by edge.
#[derive(Debug, Clone)]
pub struct Greedy {
    n: u32,
    palette: u32,
    words: usize,
    used: Vec<u64>,
}

impl Greedy {
    pub fn new(n: u32, delta: u32) -> Self {
        let palette = (2 * delta).saturating_sub(1).max(1);
        let words = (palette as usize).div_ceil(64);
        Greedy { n, palette, words, used: vec![0; (n as usize + 1) * words] }
    }

    fn row(&self, v: Vertex) -> &[u64] {
        let i = v as usize * self.words;
        &self.used[i..i + self.words]
    }

    fn first_free(&self, x: Vertex, y: Vertex) -> Option<u32> {
        let (rx, ry) = (self.row(x), self.row(y));
        for w in 0..self.words {
            let free = !(rx[w] | ry[w]);
            if free != 0 {
                let c = w as u32 * 64 + free.trailing_zeros() + 1;
                return (c <= self.palette).then_some(c);
            }
        }
        None
    }

    fn mark(&mut self, v: Vertex, c: u32) {
        let i = v as usize * self.words + (c as usize - 1) / 64;
        self.used[i] |= 1u64 << ((c - 1) % 64);
    }

    /// Colors one edge, returning the plain color index.
    pub fn color_edge(&mut self, e: &Edge) -> Result<u32, ColorError> {
        if e.u > self.n || e.v > self.n || e.u == 0 || e.v == 0 {
            return Err(ColorError::UnsupportedEvent(format!("edge {} has a vertex outside 1..={}", e.seq, self.n)));
        }
        let c = self.first_free(e.u, e.v).ok_or(ColorError::PaletteExhausted { seq: e.seq })?;
        self.mark(e.u, c);
        self.mark(e.v, c);
        Ok(c)
    }
}

impl Colorer for Greedy {
    fn name(&self) -> &str {
        "greedy"
    }

    fn process(&mut self, event: &StreamEvent) -> Result<Vec<Assignment>, ColorError> {
        event
            .edges()
            .iter()
            .map(|e| Ok(Assignment::new(e.seq, ColorTuple::single(self.color_edge(e)?))))
            .collect()
    }

    /// One bitmap of `2Δ-1` bits per vertex.
    fn state_size_bits(&self) -> u64 {
        self.n as u64 * self.palette as u64
    }

    fn palette_bound(&self) -> u64 {
        self.palette as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(g: &mut Greedy, edges: &[(u32, u32)]) -> Vec<u32> {
        edges
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| g.color_edge(&Edge::new(i as u64 + 1, a, b)).unwrap())
            .collect()
    }

    #[test]
    fn path_alternates() {
        let mut g = Greedy::new(4, 2);
        assert_eq!(run(&mut g, &[(1, 2), (2, 3), (3, 4)]), vec![1, 2, 1]);
    }

    #[test]
    fn star_uses_one_color_per_edge() {
        let mut g = Greedy::new(6, 5);
        assert_eq!(run(&mut g, &[(1, 2), (1, 3), (1, 4), (1, 5), (1, 6)]), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn fresh_state_bits() {
        assert_eq!(Greedy::new(4, 2).state_size_bits(), 12);
    }

    #[test]
    fn wide_palette_crosses_words() {
        let mut g = Greedy::new(80, 70);
        let edges: Vec<(u32, u32)> = (2..=71).map(|v| (1, v)).collect();
        let colors = run(&mut g, &edges);
        assert_eq!(colors, (1..=70).collect::<Vec<_>>());
    }

    #[test]
    fn over_degree_is_an_error() {
        let mut g = Greedy::new(3, 1);
        g.color_edge(&Edge::new(1, 1, 2)).unwrap();
        assert!(matches!(g.color_edge(&Edge::new(2, 1, 3)), Err(ColorError::PaletteExhausted { seq: 2 })));
    }
}
