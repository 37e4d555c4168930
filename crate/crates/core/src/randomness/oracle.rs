//! Seeded bit oracle. Bit `i` of seed `s` is a pure function of `(s, i)`.

/// Consumers address disjoint index ranges `j * 2^40 + i`.
pub const CONSUMER_SHIFT: u32 = 40;

const GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

pub(crate) fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for a nested instance, e.g. the `i`-th inner colorer of a wrapper.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    mix64(seed ^ mix64(tag.wrapping_add(GAMMA)).rotate_left(17))
}

/// Index of bit `i` for consumer `j`.
pub fn stream_offset(consumer: u64, i: u64) -> u64 {
    (consumer << CONSUMER_SHIFT) + i
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BitOracle {
    seed: u64,
    key: u64,
}

impl BitOracle {
    pub fn new(seed: u64) -> Self {
        BitOracle {
            seed,
            key: mix64(seed ^ 0x5851_f42d_4c95_7f2d),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// 64-bit word `w`; bit `i` of the oracle is bit `i % 64` of word `i / 64`.
    pub fn word(&self, w: u64) -> u64 {
        mix64(self.key.wrapping_add(w.wrapping_add(1).wrapping_mul(GAMMA)))
    }

    pub fn bit(&self, index: u64) -> bool {
        (self.word(index >> 6) >> (index & 63)) & 1 == 1
    }

    /// `k <= 64` bits starting at `index`, least significant first.
    pub fn bits(&self, index: u64, k: u32) -> u64 {
        debug_assert!(k <= 64);
        if k == 0 {
            return 0;
        }
        let w = index >> 6;
        let off = (index & 63) as u32;
        let lo = self.word(w) >> off;
        let v = if off == 0 {
            lo
        } else if off + k > 64 {
            lo | (self.word(w + 1) << (64 - off))
        } else {
            lo
        };
        if k == 64 {
            v
        } else {
            v & ((1u64 << k) - 1)
        }
    }

    pub fn stream(&self, consumer: u64) -> OracleStream {
        OracleStream {
            oracle: *self,
            base: stream_offset(consumer, 0),
            pos: 0,
        }
    }
}

/// Sequential reader over one consumer's range of the oracle.
#[derive(Clone, Debug)]
pub struct OracleStream {
    oracle: BitOracle,
    base: u64,
    pos: u64,
}

impl OracleStream {
    pub fn next_bits(&mut self, k: u32) -> u64 {
        let v = self.oracle.bits(self.base + self.pos, k);
        self.pos += k as u64;
        v
    }

    pub fn next_bool(&mut self) -> bool {
        self.next_bits(1) == 1
    }

    /// Uniform value in `[0, m)` by rejection on `ceil(log2 m)` bits.
    pub fn next_below(&mut self, m: u64) -> u64 {
        assert!(m >= 1, "empty range");
        if m == 1 {
            return 0;
        }
        let k = 64 - (m - 1).leading_zeros();
        loop {
            let v = self.next_bits(k);
            if v < m {
                return v;
            }
        }
    }

    /// Uniform value in `[0, 1)` with 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        self.next_bits(53) as f64 / (1u64 << 53) as f64
    }

    pub fn bits_consumed(&self) -> u64 {
        self.pos
    }
}
