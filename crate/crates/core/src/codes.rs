//! Binary codes `[n] -> {0,1}^t` with a guaranteed minimum distance.

use std::fmt;

use crate::randomness::BitOracle;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CodeError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no code with n={n}, t={t}, distance >= {dmin} found")]
    CodeSearchFailed { n: u32, t: u32, dmin: u32 },
    #[error("vertex {v} outside 1..={n}")]
    OutOfRange { v: u32, n: u32 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Constants tying code distance to the router's overload factor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CodeProfile {
    pub delta_code: f64,
    pub overload: u32,
}

impl CodeProfile {
    pub fn paper() -> Self {
        CodeProfile { delta_code: 1.0 / 400.0, overload: 1200 }
    }

    pub fn desk() -> Self {
        CodeProfile { delta_code: 1.0 / 8.0, overload: 16 }
    }
}

pub(crate) fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

/// Code length `4 ceil(log2 n)`, at least 8 (16 under the desk profile).
pub fn code_length(n: u32, desk: bool) -> u32 {
    let t = 4 * ceil_log2(n as u64);
    t.max(if desk { 16 } else { 8 })
}

/// A codeword of `t` bits; position `i` (1-based) is bit `(i-1) % 64` of word `(i-1) / 64`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Codeword(Vec<u64>);

impl Codeword {
    fn zero(t: u32) -> Self {
        Codeword(vec![0; t.div_ceil(64) as usize])
    }

    fn from_u64(x: u64, t: u32) -> Self {
        let mut w = Codeword::zero(t);
        w.0[0] = x;
        w
    }

    pub fn bit(&self, i: u32) -> bool {
        let j = i - 1;
        (self.0[(j / 64) as usize] >> (j % 64)) & 1 == 1
    }

    fn set(&mut self, i: u32) {
        let j = i - 1;
        self.0[(j / 64) as usize] |= 1 << (j % 64);
    }

    fn xor_with(&mut self, other: &Codeword) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a ^= b;
        }
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    pub fn distance(&self, other: &Codeword) -> u32 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a ^ b).count_ones()).sum()
    }

    fn to_hex(&self, t: u32) -> String {
        let digits = t.div_ceil(4);
        (0..digits)
            .map(|d| {
                let mut nib = 0u32;
                for k in 0..4 {
                    let i = d * 4 + k + 1;
                    if i <= t && self.bit(i) {
                        nib |= 8 >> k;
                    }
                }
                char::from_digit(nib, 16).expect("nibble")
            })
            .collect()
    }

    fn from_hex(s: &str, t: u32) -> Option<Codeword> {
        if s.len() != t.div_ceil(4) as usize {
            return None;
        }
        let mut w = Codeword::zero(t);
        for (d, ch) in s.chars().enumerate() {
            let nib = ch.to_digit(16)?;
            for k in 0..4 {
                if nib & (8 >> k) != 0 {
                    let i = d as u32 * 4 + k + 1;
                    if i > t {
                        return None;
                    }
                    w.set(i);
                }
            }
        }
        Some(w)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Form {
    Explicit(Vec<Codeword>),
    /// Vertex `v` maps to the combination of rows selected by the bits of `v - 1`.
    Linear(Vec<Codeword>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BinaryCode {
    t: u32,
    n: u32,
    dmin: u32,
    form: Form,
}

impl BinaryCode {
    /// Code given by its codewords; vertex `v` maps to `words[v - 1]`.
    pub fn from_codewords(t: u32, words: Vec<Codeword>) -> Result<Self, CodeError> {
        if t == 0 || words.is_empty() || words.iter().any(|w| w.0.len() != t.div_ceil(64) as usize) {
            return Err(CodeError::InvalidParams("codewords must be nonempty and of length t".into()));
        }
        let mut code = BinaryCode { t, n: words.len() as u32, dmin: 0, form: Form::Explicit(words) };
        code.dmin = code.compute_min_distance();
        Ok(code)
    }

    /// Code given by `t`-bit integers; convenient for small `t`.
    pub fn from_u64_words(t: u32, words: &[u64]) -> Result<Self, CodeError> {
        if t > 64 {
            return Err(CodeError::InvalidParams("t must be at most 64".into()));
        }
        Self::from_codewords(t, words.iter().map(|&x| Codeword::from_u64(x, t)).collect())
    }

    fn linear(t: u32, n: u32, rows: Vec<Codeword>) -> Self {
        let mut code = BinaryCode { t, n, dmin: 0, form: Form::Linear(rows) };
        code.dmin = code.compute_min_distance();
        code
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_linear(&self) -> bool {
        matches!(self.form, Form::Linear(_))
    }

    pub fn encode(&self, v: u32) -> Result<Codeword, CodeError> {
        if v == 0 || v > self.n {
            return Err(CodeError::OutOfRange { v, n: self.n });
        }
        Ok(match &self.form {
            Form::Explicit(words) => words[v as usize - 1].clone(),
            Form::Linear(rows) => {
                let m = (v - 1) as u64;
                let mut w = Codeword::zero(self.t);
                for (j, r) in rows.iter().enumerate() {
                    if (m >> j) & 1 == 1 {
                        w.xor_with(r);
                    }
                }
                w
            }
        })
    }

    /// Exact minimum pairwise distance over the `n` codewords; `t` for a single codeword.
    pub fn min_distance(&self) -> u32 {
        self.dmin
    }

    fn compute_min_distance(&self) -> u32 {
        if self.n < 2 {
            return self.t;
        }
        if let Form::Linear(rows) = &self.form {
            if self.n as u64 == 1u64 << rows.len() {
                return span_min_weight(rows, self.t);
            }
        }
        let words: Vec<Codeword> = (1..=self.n).map(|v| self.encode(v).expect("in range")).collect();
        let mut best = self.t;
        for i in 0..words.len() {
            for j in i + 1..words.len() {
                best = best.min(words[i].distance(&words[j]));
            }
        }
        best
    }

    pub fn serialize(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for BinaryCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "c t={} n={} dmin={}", self.t, self.n, self.dmin)?;
        match &self.form {
            Form::Explicit(words) => {
                for w in words {
                    writeln!(f, "{}", w.to_hex(self.t))?;
                }
            }
            Form::Linear(rows) => {
                for r in rows {
                    writeln!(f, "g {}", r.to_hex(self.t))?;
                }
            }
        }
        Ok(())
    }
}

pub fn parse_code(text: &str) -> Result<BinaryCode, CodeError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, head) = lines.next().ok_or(CodeError::Parse { line: 1, msg: "empty input".into() })?;
    let mut toks = head.split_whitespace();
    if toks.next() != Some("c") {
        return Err(CodeError::Parse { line: 1, msg: "expected code header".into() });
    }
    let (mut t, mut n) = (None, None);
    for tok in toks {
        let (k, v) = tok.split_once('=').ok_or(CodeError::Parse { line: 1, msg: format!("bad field {tok:?}") })?;
        let v: u32 = v.parse().map_err(|_| CodeError::Parse { line: 1, msg: format!("bad integer {v:?}") })?;
        match k {
            "t" => t = Some(v),
            "n" => n = Some(v),
            _ => {}
        }
    }
    let t = t.ok_or(CodeError::Parse { line: 1, msg: "missing t".into() })?;
    let n = n.ok_or(CodeError::Parse { line: 1, msg: "missing n".into() })?;
    let (mut words, mut rows) = (Vec::new(), Vec::new());
    for (i, l) in lines {
        let l = l.trim();
        let bad = || CodeError::Parse { line: i + 1, msg: format!("bad codeword {l:?}") };
        if let Some(r) = l.strip_prefix("g ") {
            rows.push(Codeword::from_hex(r.trim(), t).ok_or_else(bad)?);
        } else {
            words.push(Codeword::from_hex(l, t).ok_or_else(bad)?);
        }
    }
    match (words.is_empty(), rows.is_empty()) {
        (false, true) if words.len() == n as usize => BinaryCode::from_codewords(t, words),
        (true, false) if rows.len() < 64 && (n as u64) <= 1u64 << rows.len() => Ok(BinaryCode::linear(t, n, rows)),
        _ => Err(CodeError::Parse { line: 0, msg: "codeword count does not match header".into() }),
    }
}

/// Minimum weight over nonzero combinations of `rows`, walked in Gray-code order.
fn span_min_weight(rows: &[Codeword], t: u32) -> u32 {
    let k = rows.len();
    let mut acc = Codeword::zero(t);
    let mut best = t;
    for i in 1u64..(1u64 << k) {
        acc.xor_with(&rows[i.trailing_zeros() as usize]);
        best = best.min(acc.weight());
        if best == 0 {
            break;
        }
    }
    best
}

const LINEAR_ATTEMPTS: u32 = 64;
const GREEDY_MAX_T: u32 = 16;

/// Code with `n` codewords of length `t` and distance at least `ceil(delta_code * t)`.
///
/// Tries random linear codes first, then a lexicographic greedy search for small `t`.
pub fn build_code(n: u32, t: u32, delta_code: f64, seed: u64) -> Result<BinaryCode, CodeError> {
    if t < 8 || n < 2 || !(delta_code > 0.0 && delta_code <= 1.0) {
        return Err(CodeError::InvalidParams(format!(
            "need t >= 8, n >= 2 and delta_code in (0,1]; got t={t} n={n} delta_code={delta_code}"
        )));
    }
    let dmin = (delta_code * t as f64).ceil() as u32;
    let failed = CodeError::CodeSearchFailed { n, t, dmin };
    if t < 32 && n as u64 > 1u64 << t {
        return Err(failed);
    }
    let k = ceil_log2(n as u64).max(1);
    if k <= 24 {
        let mut stream = BitOracle::new(seed).stream(0);
        for _ in 0..LINEAR_ATTEMPTS {
            let rows: Vec<Codeword> = (0..k)
                .map(|_| {
                    let mut w = Codeword::zero(t);
                    for (j, word) in w.0.iter_mut().enumerate() {
                        let bits = (t - 64 * j as u32).min(64);
                        *word = stream.next_bits(bits);
                    }
                    w
                })
                .collect();
            if span_min_weight(&rows, t) >= dmin {
                return Ok(BinaryCode::linear(t, n, rows));
            }
        }
    }
    if t <= GREEDY_MAX_T {
        let mut chosen: Vec<u64> = Vec::with_capacity(n as usize);
        for x in 0u64..(1u64 << t) {
            if chosen.iter().all(|&c| (c ^ x).count_ones() >= dmin) {
                chosen.push(x);
                if chosen.len() == n as usize {
                    return BinaryCode::from_u64_words(t, &chosen);
                }
            }
        }
    }
    Err(failed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairwise(code: &BinaryCode) -> u32 {
        let mut best = code.t();
        for a in 1..=code.n() {
            for b in a + 1..=code.n() {
                let (x, y) = (code.encode(a).unwrap(), code.encode(b).unwrap());
                let d = (1..=code.t()).filter(|&i| x.bit(i) != y.bit(i)).count() as u32;
                best = best.min(d);
            }
        }
        best
    }

    #[test]
    fn repetition_code() {
        let c = build_code(2, 8, 1.0, 0).unwrap();
        let zero = c.encode(1).unwrap();
        let one = c.encode(2).unwrap();
        assert!((1..=8).all(|i| !zero.bit(i) && one.bit(i)));
        assert_eq!(c.min_distance(), 8);
    }

    #[test]
    fn distance_matches_pairwise_scan() {
        for (n, t, d) in [(16u32, 16u32, 0.25), (64, 32, 0.125), (100, 24, 0.125)] {
            let c = build_code(n, t, d, 3).unwrap();
            assert_eq!(c.min_distance(), pairwise(&c));
            assert!(c.min_distance() >= (d * t as f64).ceil() as u32);
        }
    }

    #[test]
    fn too_many_codewords() {
        assert!(matches!(build_code(257, 8, 0.125, 0), Err(CodeError::CodeSearchFailed { .. })));
    }

    #[test]
    fn bad_params() {
        assert!(matches!(build_code(4, 7, 0.1, 0), Err(CodeError::InvalidParams(_))));
        assert!(matches!(build_code(1, 8, 0.1, 0), Err(CodeError::InvalidParams(_))));
    }

    #[test]
    fn encode_out_of_range() {
        let c = build_code(4, 8, 0.25, 0).unwrap();
        assert!(matches!(c.encode(0), Err(CodeError::OutOfRange { .. })));
        assert!(matches!(c.encode(5), Err(CodeError::OutOfRange { .. })));
    }

    #[test]
    fn single_codeword_distance_is_t() {
        let c = BinaryCode::from_u64_words(12, &[0x5a]).unwrap();
        assert_eq!(c.min_distance(), 12);
    }

    #[test]
    fn serialization_round_trip() {
        let lin = build_code(40, 20, 0.2, 1).unwrap();
        assert_eq!(parse_code(&lin.serialize()).unwrap(), lin);
        let exp = BinaryCode::from_u64_words(10, &[0, 0x3ff, 0x155]).unwrap();
        let text = exp.serialize();
        assert!(text.starts_with("c t=10 n=3 dmin=5\n"));
        assert_eq!(parse_code(&text).unwrap(), exp);
    }

    #[test]
    fn hex_layout() {
        let c = BinaryCode::from_u64_words(8, &[0b0000_0001]).unwrap();
        // position 1 is the most significant bit of the first digit
        assert_eq!(c.serialize().lines().nth(1), Some("80"));
    }
}
