//! Seeded randomness: bit oracle, finite-field hashing and permutation families.

mod field;
mod oracle;
mod permutation;

pub use field::{Gf2Field, PolyHash};
pub use oracle::{derive_seed, stream_offset, BitOracle, OracleStream, CONSUMER_SHIFT};
pub use permutation::{
    explicit_uniform_permutation, lazy_uniform_permutation, thorp_permutation, ExplicitPermutation,
    LazyPermutation, Permutation, PermutationKind, PermutationSpec, ThorpParams, ThorpPermutation,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RandomnessError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("position {position} requested but only a prefix of {evaluated} is available")]
    PrefixOnly { position: u32, evaluated: u32 },
    #[error("{value} outside [1, {size}]")]
    OutOfRange { value: u32, size: u32 },
}
