//! Proper edge coloring of the complete graph on `[s]` by the circle method.

use super::StructureError;

#[derive(Clone, Debug)]
pub struct CliqueColoring {
    s: u32,
    table: Vec<u32>,
}

impl CliqueColoring {
    pub fn new(s: u32) -> Result<Self, StructureError> {
        if s < 2 {
            return Err(StructureError::InvalidParams(format!("clique coloring needs s >= 2, got {s}")));
        }
        // pad odd s with a dummy vertex; its edges are dropped
        let m = if s.is_multiple_of(2) { s } else { s + 1 };
        let mut table = vec![0u32; (s * s) as usize];
        let mut put = |a: u32, b: u32, c: u32| {
            if a < s && b < s {
                table[(a * s + b) as usize] = c;
                table[(b * s + a) as usize] = c;
            }
        };
        let k = m - 1;
        for r in 0..k {
            put(k, r, r + 1);
            for j in 1..m / 2 {
                put((r + j) % k, (r + k - j) % k, r + 1);
            }
        }
        Ok(CliqueColoring { s, table })
    }

    pub fn size(&self) -> u32 {
        self.s
    }

    /// Colors used: `s - 1` for even `s`, `s` for odd.
    pub fn palette(&self) -> u32 {
        if self.s.is_multiple_of(2) {
            self.s - 1
        } else {
            self.s
        }
    }

    /// Color of `{a, b}` for distinct `a, b ∈ [s]`.
    pub fn color(&self, a: u32, b: u32) -> u32 {
        assert!(a != b && (1..=self.s).contains(&a) && (1..=self.s).contains(&b), "pair outside clique");
        self.table[((a - 1) * self.s + (b - 1)) as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_vertices() {
        assert_eq!(CliqueColoring::new(2).unwrap().color(1, 2), 1);
    }

    #[test]
    fn triangle_uses_three_colors() {
        let c = CliqueColoring::new(3).unwrap();
        let mut cols = vec![c.color(1, 2), c.color(1, 3), c.color(2, 3)];
        cols.sort();
        cols.dedup();
        assert_eq!(cols.len(), 3);
    }

    #[test]
    fn too_small() {
        assert!(CliqueColoring::new(1).is_err());
    }

    #[test]
    fn proper_and_bounded() {
        for s in 2..=20u32 {
            let c = CliqueColoring::new(s).unwrap();
            for a in 1..=s {
                let mut seen: Vec<u32> = (1..=s).filter(|&b| b != a).map(|b| c.color(a, b)).collect();
                assert!(seen.iter().all(|&x| (1..=c.palette()).contains(&x)));
                seen.sort();
                seen.dedup();
                assert_eq!(seen.len() as u32, s - 1);
            }
        }
    }
}
