//! Building blocks shared by the colorers.

mod clique;
mod matching;
mod pool;
mod tracker;

pub use clique::CliqueColoring;
pub use matching::saturating_matching;
pub use pool::{LevelMeta, RefCountedEdgePool};
pub use tracker::{common_free, FreeColorTracker, Removal};

use crate::stream::EdgeKey;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StructureError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("color {color} is not free")]
    ColorNotFree { color: u32 },
    #[error("block {block} exceeds the {blocks} available")]
    BlockOverflow { block: u32, blocks: u32 },
    #[error("edge {edge:?} is not in the pool")]
    MissingEntry { edge: EdgeKey },
    #[error("reference count of {edge:?} would drop below zero")]
    UnderflowRef { edge: EdgeKey },
    #[error("no saturating matching; left items {witness:?} violate Hall's condition")]
    NoSaturatingMatching { witness: Vec<usize> },
}
