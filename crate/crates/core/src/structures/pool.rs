//! Reference-counted pool of recent edges with per-level metadata.

use std::collections::HashMap;

use super::StructureError;
use crate::stream::EdgeKey;

/// Per-level record: copies colored from the class so far, and the class itself.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LevelMeta {
    pub count: u32,
    pub layer: u32,
    pub class: u32,
}

#[derive(Clone, Debug)]
struct PoolEntry {
    refcount: u32,
    meta: Vec<LevelMeta>,
}

/// An entry lives while its reference count is positive; a re-added edge starts from zeroed metadata.
#[derive(Clone, Debug)]
pub struct RefCountedEdgePool {
    levels: usize,
    entries: HashMap<EdgeKey, PoolEntry>,
    refs: u64,
    peak: usize,
}

impl RefCountedEdgePool {
    pub fn new(levels: usize) -> Self {
        RefCountedEdgePool { levels, entries: HashMap::new(), refs: 0, peak: 0 }
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn peak_len(&self) -> usize {
        self.peak
    }

    pub fn total_refs(&self) -> u64 {
        self.refs
    }

    pub fn contains(&self, key: EdgeKey) -> bool {
        self.entries.contains_key(&key)
    }

    pub fn refcount(&self, key: EdgeKey) -> u32 {
        self.entries.get(&key).map_or(0, |e| e.refcount)
    }

    pub fn incref(&mut self, key: EdgeKey) -> u32 {
        let levels = self.levels;
        let e = self
            .entries
            .entry(key)
            .or_insert_with(|| PoolEntry { refcount: 0, meta: vec![LevelMeta::default(); levels] });
        e.refcount += 1;
        let rc = e.refcount;
        self.refs += 1;
        self.peak = self.peak.max(self.entries.len());
        rc
    }

    /// Drops one reference; the entry disappears at zero.
    pub fn decref(&mut self, key: EdgeKey) -> Result<u32, StructureError> {
        let e = self.entries.get_mut(&key).ok_or(StructureError::UnderflowRef { edge: key })?;
        e.refcount -= 1;
        self.refs -= 1;
        let left = e.refcount;
        if left == 0 {
            self.entries.remove(&key);
        }
        Ok(left)
    }

    /// Metadata if the edge is live.
    pub fn touch(&self, key: EdgeKey, level: usize) -> Option<LevelMeta> {
        self.entries.get(&key).and_then(|e| e.meta.get(level).copied())
    }

    pub fn meta(&self, key: EdgeKey, level: usize) -> Result<LevelMeta, StructureError> {
        self.touch(key, level).ok_or(StructureError::MissingEntry { edge: key })
    }

    pub fn set_meta(&mut self, key: EdgeKey, level: usize, meta: LevelMeta) -> Result<(), StructureError> {
        let slot = self
            .entries
            .get_mut(&key)
            .and_then(|e| e.meta.get_mut(level))
            .ok_or(StructureError::MissingEntry { edge: key })?;
        *slot = meta;
        Ok(())
    }
}
