//! One-sided vertex arrivals, `5Δ` colors: each fixed vertex walks its own random permutation.

use super::{arrival, bits_for, Assignment, ColorError, ColorTuple, Colorer, ColorerConfig, Greedy};
use crate::randomness::{BitOracle, Permutation, PermutationKind, PermutationSpec};
use crate::stream::{StreamEvent, Vertex};

struct Walk {
    sigma: Permutation,
    h: u32,
}

/// The arriving endpoint of each edge is the event's vertex; the other endpoint owns `σ_y, h_y`.
pub struct BptRandVa {
    n: u32,
    c: u32,
    oracle: BitOracle,
    perms: PermutationSpec,
    walks: Vec<Option<Walk>>,
    touched: u64,
    in_s: Vec<bool>,
    fallback: Option<Greedy>,
}

impl BptRandVa {
    pub fn new(cfg: &ColorerConfig) -> Result<Self, ColorError> {
        let mult = cfg.param_u32("c_mult", 5)?;
        if mult == 0 {
            return Err(ColorError::InvalidConfig("c_mult must be positive".into()));
        }
        let c = mult * cfg.delta.max(1);
        let cutoff = (6.0 * cfg.ln_n_over_delta()).ceil();
        let force = cfg.param_str("fallback", "auto");
        let use_greedy = match force {
            "auto" => (cfg.delta as f64) < cutoff,
            "always" => true,
            "never" => false,
            other => return Err(ColorError::InvalidConfig(format!("fallback={other}"))),
        };
        Ok(BptRandVa {
            n: cfg.n,
            c,
            oracle: BitOracle::new(cfg.seed),
            perms: cfg.perm_spec(PermutationKind::LazyUniform)?,
            walks: (0..=cfg.n).map(|_| None).collect(),
            touched: 0,
            in_s: vec![false; c as usize + 1],
            fallback: use_greedy.then(|| Greedy::new(cfg.n, cfg.delta)),
        })
    }

    pub fn palette(&self) -> u32 {
        self.c
    }

    /// Replaces `σ_y` and resets its pointer.
    pub fn set_permutation(&mut self, y: Vertex, sigma: Permutation) -> Result<(), ColorError> {
        if sigma.size() != self.c {
            return Err(ColorError::InvalidConfig(format!("permutation size {} != C={}", sigma.size(), self.c)));
        }
        if self.walks[y as usize].is_none() {
            self.touched += 1;
        }
        self.walks[y as usize] = Some(Walk { sigma, h: 1 });
        Ok(())
    }

    /// Current pointer `h_y`, if `y` has been seen.
    pub fn pointer(&self, y: Vertex) -> Option<u32> {
        self.walks.get(y as usize)?.as_ref().map(|w| w.h)
    }

    fn walk(&mut self, y: Vertex) -> Result<&mut Walk, ColorError> {
        if y == 0 || y > self.n {
            return Err(ColorError::UnsupportedEvent(format!("vertex {y} outside 1..={}", self.n)));
        }
        if self.walks[y as usize].is_none() {
            let sigma = self.perms.build(self.c, &self.oracle, y as u64)?;
            self.walks[y as usize] = Some(Walk { sigma, h: 1 });
            self.touched += 1;
        }
        Ok(self.walks[y as usize].as_mut().expect("just set"))
    }
}

impl Colorer for BptRandVa {
    fn name(&self) -> &str {
        "bpt-rand-va"
    }

    fn process(&mut self, event: &StreamEvent) -> Result<Vec<Assignment>, ColorError> {
        let (x, edges) = arrival(event, "bpt-rand-va")?;
        if let Some(g) = self.fallback.as_mut() {
            return g.process(event);
        }
        let c = self.c;
        let mut out = Vec::with_capacity(edges.len());
        let mut used = Vec::with_capacity(edges.len());
        let mut result: Result<(), ColorError> = Ok(());
        for e in edges {
            let y = e.other(x);
            let in_s = std::mem::take(&mut self.in_s);
            let step = (|| {
                let w = self.walk(y)?;
                loop {
                    if w.h > c {
                        return Err(ColorError::PointerOverflow { vertex: y });
                    }
                    let col = w.sigma.forward(w.h)?;
                    w.h += 1;
                    if !in_s[col as usize] {
                        return Ok(col);
                    }
                }
            })();
            self.in_s = in_s;
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
        for col in used {
            self.in_s[col as usize] = false;
        }
        result.map(|_| out)
    }

    /// One pointer per touched fixed vertex. Permutations are a function of the oracle seed
    /// and are not counted.
    fn state_size_bits(&self) -> u64 {
        if let Some(g) = &self.fallback {
            return g.state_size_bits();
        }
        self.touched * bits_for(self.c as u64 + 1)
    }

    fn palette_bound(&self) -> u64 {
        self.c as u64
    }

    fn regime(&self) -> &str {
        if self.fallback.is_some() {
            "greedy"
        } else {
            "main"
        }
    }
}
