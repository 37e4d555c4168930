//! GF(2^h) arithmetic and polynomial hashing for gate bits.

use std::sync::{Arc, OnceLock};

use super::oracle::OracleStream;
use super::RandomnessError;

/// Low-order terms of a low-weight irreducible polynomial of degree `h`, index `h - 1`.
const IRREDUCIBLE_LOW: [u64; 64] = [
    0x1, 0x3, 0x3, 0x3,
    0x5, 0x3, 0x3, 0x1b,
    0x3, 0x9, 0x5, 0x9,
    0x1b, 0x21, 0x3, 0x2b,
    0x9, 0x9, 0x27, 0x9,
    0x5, 0x3, 0x21, 0x1b,
    0x9, 0x1b, 0x27, 0x3,
    0x5, 0x3, 0x9, 0x8d,
    0x401, 0x81, 0x5, 0x201,
    0x53, 0x63, 0x11, 0x39,
    0x9, 0x81, 0x59, 0x21,
    0x1b, 0x3, 0x21, 0x2d,
    0x201, 0x1d, 0x4b, 0x9,
    0x47, 0x201, 0x81, 0x95,
    0x11, 0x80001, 0x95, 0x3,
    0x27, 0x20000001, 0x3, 0x1b,
];

const TABLE_MAX_H: u32 = 16;

struct LogTables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

static TABLES: [OnceLock<Arc<LogTables>>; TABLE_MAX_H as usize + 1] =
    [const { OnceLock::new() }; TABLE_MAX_H as usize + 1];

#[derive(Clone)]
pub struct Gf2Field {
    h: u32,
    low: u64,
    tables: Option<Arc<LogTables>>,
}

impl std::fmt::Debug for Gf2Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Gf2Field").field("h", &self.h).field("low", &self.low).finish()
    }
}

fn clmul_mod(mut a: u64, mut b: u64, h: u32, low: u64) -> u64 {
    let top = 1u64 << (h - 1);
    let mask = if h == 64 { u64::MAX } else { (1u64 << h) - 1 };
    let mut r = 0u64;
    while b != 0 {
        if b & 1 == 1 {
            r ^= a;
        }
        b >>= 1;
        let carry = a & top != 0;
        a = (a << 1) & mask;
        if carry {
            a ^= low;
        }
    }
    r
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn build_tables(h: u32, low: u64) -> LogTables {
    let order = (1u64 << h) - 1;
    let pow = |mut g: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = clmul_mod(r, g, h, low);
            }
            g = clmul_mod(g, g, h, low);
            e >>= 1;
        }
        r
    };
    let factors = prime_factors(order);
    let gen = if order == 1 {
        1
    } else {
        (2..=order)
            .find(|&g| factors.iter().all(|&p| pow(g, order / p) != 1))
            .expect("multiplicative group is cyclic")
    };
    let mut exp = vec![0u32; 2 * order as usize];
    let mut log = vec![0u32; (order + 1) as usize];
    let mut x = 1u64;
    for i in 0..order as usize {
        exp[i] = x as u32;
        exp[i + order as usize] = x as u32;
        log[x as usize] = i as u32;
        x = clmul_mod(x, gen, h, low);
    }
    LogTables { exp, log }
}

impl Gf2Field {
    pub fn new(h: u32) -> Result<Self, RandomnessError> {
        if !(1..=64).contains(&h) {
            return Err(RandomnessError::InvalidParams(format!("field degree {h} not in 1..=64")));
        }
        let low = IRREDUCIBLE_LOW[h as usize - 1];
        let tables = if h <= TABLE_MAX_H {
            Some(TABLES[h as usize].get_or_init(|| Arc::new(build_tables(h, low))).clone())
        } else {
            None
        };
        Ok(Gf2Field { h, low, tables })
    }

    pub fn degree(&self) -> u32 {
        self.h
    }

    /// Modulus without the leading `x^h` term.
    pub fn modulus_low(&self) -> u64 {
        self.low
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match &self.tables {
            Some(t) => {
                if a == 0 || b == 0 {
                    0
                } else {
                    t.exp[(t.log[a as usize] + t.log[b as usize]) as usize] as u64
                }
            }
            None => clmul_mod(a, b, self.h, self.low),
        }
    }

    /// Carry-less reference multiply, independent of the log tables.
    pub fn mul_reference(&self, a: u64, b: u64) -> u64 {
        clmul_mod(a, b, self.h, self.low)
    }
}

/// Random polynomial of degree `count - 1` over GF(2^h); a `count`-wise independent family.
#[derive(Clone, Debug)]
pub struct PolyHash {
    field: Gf2Field,
    coeffs: Vec<u64>,
}

impl PolyHash {
    pub fn sample(h: u32, count: usize, stream: &mut OracleStream) -> Result<Self, RandomnessError> {
        if count == 0 {
            return Err(RandomnessError::InvalidParams("polynomial needs a coefficient".into()));
        }
        let field = Gf2Field::new(h)?;
        let coeffs = (0..count).map(|_| stream.next_bits(h)).collect();
        Ok(PolyHash { field, coeffs })
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs.iter().rev().fold(0u64, |acc, &c| self.field.mul(acc, x) ^ c)
    }

    pub fn bit(&self, x: u64) -> bool {
        self.eval(x) & 1 == 1
    }

    pub fn independence(&self) -> usize {
        self.coeffs.len()
    }

    pub fn field(&self) -> &Gf2Field {
        &self.field
    }
}
