//! Free-color tracker: the free colors of a vertex are a window of a permutation.

use std::collections::HashMap;
use std::sync::Arc;

use super::StructureError;
use crate::randomness::{Permutation, PermutationKind};
use crate::stream::EdgeKey;

/// Outcome of a removal. `released` holds references dropped by a block refresh.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct Removal {
    pub refreshed: bool,
    pub released: Vec<EdgeKey>,
}

/// Tracks `{σ(i + (b-1)s) : i ∈ H}` for one vertex.
///
/// After `sΔ/C` removals the window moves to the next block of `s` positions.
/// Once the last block is spent the tracker is exhausted and offers no colors.
#[derive(Debug)]
pub struct FreeColorTracker {
    c: u32,
    s: u32,
    delta: u32,
    sigma: Arc<Permutation>,
    active: Vec<bool>,
    active_len: u32,
    b: u32,
    block: Vec<u32>,
    /// color -> position in `block`
    slots: HashMap<u32, u32>,
    refs: Vec<EdgeKey>,
}

impl FreeColorTracker {
    pub fn new(c: u32, s: u32, delta: u32, sigma: Arc<Permutation>) -> Result<Self, StructureError> {
        let bad = |msg: String| Err(StructureError::InvalidParams(msg));
        if !(c.is_power_of_two() && s.is_power_of_two() && delta.is_power_of_two()) {
            return bad(format!("C={c}, s={s}, delta={delta} must be powers of two"));
        }
        if s > c || delta > c {
            return bad(format!("need s <= C and delta <= C, got C={c} s={s} delta={delta}"));
        }
        if (s as u64) * (delta as u64) < c as u64 {
            return bad(format!("need s*delta/C >= 1, got C={c} s={s} delta={delta}"));
        }
        if sigma.size() != c {
            return bad(format!("permutation has size {} not C={c}", sigma.size()));
        }
        if sigma.kind() == PermutationKind::LazyUniform {
            return bad("tracker needs inverse access".into());
        }
        let mut t = FreeColorTracker {
            c,
            s,
            delta,
            sigma,
            active: vec![true; s as usize],
            active_len: s,
            b: 1,
            block: Vec::new(),
            slots: HashMap::new(),
            refs: Vec::new(),
        };
        t.load_block();
        Ok(t)
    }

    fn load_block(&mut self) {
        self.active.iter_mut().for_each(|h| *h = true);
        self.active_len = self.s;
        self.block.clear();
        self.slots.clear();
        if !self.is_exhausted() {
            let base = (self.b - 1) * self.s;
            self.block
                .extend((1..=self.s).map(|i| self.sigma.forward(base + i).expect("index within [C]")));
            self.slots.extend(self.block.iter().enumerate().map(|(i, &c)| (c, i as u32)));
        }
    }

    pub fn palette(&self) -> u32 {
        self.c
    }

    pub fn window(&self) -> u32 {
        self.s
    }

    /// Refresh happens once `|H|` drops to this value.
    pub fn threshold(&self) -> u32 {
        self.s - (self.s as u64 * self.delta as u64 / self.c as u64) as u32
    }

    pub fn block_index(&self) -> u32 {
        self.b
    }

    pub fn block_count(&self) -> u32 {
        self.c / self.s
    }

    pub fn is_exhausted(&self) -> bool {
        self.b > self.block_count()
    }

    pub fn active_len(&self) -> u32 {
        if self.is_exhausted() {
            0
        } else {
            self.active_len
        }
    }

    /// Free colors in ascending order.
    pub fn current_set(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self
            .block
            .iter()
            .zip(&self.active)
            .filter_map(|(&c, &h)| h.then_some(c))
            .collect();
        out.sort_unstable();
        out
    }

    fn slot(&self, color: u32) -> Option<usize> {
        if self.is_exhausted() || color == 0 || color > self.c {
            return None;
        }
        let slot = *self.slots.get(&color)? as usize;
        self.active[slot].then_some(slot)
    }

    pub fn contains(&self, color: u32) -> bool {
        self.slot(color).is_some()
    }

    /// Removes a free color, optionally holding `reference` until the next refresh.
    pub fn remove_and_update(&mut self, color: u32, reference: Option<EdgeKey>) -> Result<Removal, StructureError> {
        if self.is_exhausted() {
            return Err(StructureError::BlockOverflow { block: self.b, blocks: self.block_count() });
        }
        let slot = self.slot(color).ok_or(StructureError::ColorNotFree { color })?;
        self.active[slot] = false;
        self.active_len -= 1;
        if let Some(r) = reference {
            self.refs.push(r);
        }
        if self.active_len > self.threshold() {
            return Ok(Removal::default());
        }
        self.b += 1;
        self.load_block();
        Ok(Removal { refreshed: true, released: std::mem::take(&mut self.refs) })
    }

    pub fn held_refs(&self) -> &[EdgeKey] {
        &self.refs
    }

    /// `s + ceil(log2(C/s))` bits, plus `ref_bits` per held reference.
    pub fn state_bits(&self, ref_bits: u32) -> u64 {
        Self::fresh_bits(self.c, self.s) + self.refs.len() as u64 * ref_bits as u64
    }

    pub fn fresh_bits(c: u32, s: u32) -> u64 {
        s as u64 + crate::codes::ceil_log2((c / s) as u64) as u64
    }
}

/// Common free colors of two trackers, ascending.
pub fn common_free(a: &FreeColorTracker, b: &FreeColorTracker) -> Vec<u32> {
    let (small, large) = if a.active_len() <= b.active_len() { (a, b) } else { (b, a) };
    let mut out: Vec<u32> = small
        .block
        .iter()
        .zip(&small.active)
        .filter(|(&c, &h)| h && large.contains(c))
        .map(|(&c, _)| c)
        .collect();
    out.sort_unstable();
    out
}
