//! Minimisation of cell posets modulo logical equivalence, and export of the
//! quotient as a labelled transition system.

mod lts;
mod oracle;
mod refine;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::bitset::SatSet;
use crate::model::CellPoset;
use crate::results::{ResultEntry, ResultFile};

pub use lts::{export_lts, quotient, LtsFormat, MoveLabel, QuotientLts, State};
pub use oracle::{logical_equiv_oracle, DEFAULT_BLOCK_CAP};
pub use refine::minimise;

#[derive(Debug, thiserror::Error)]
pub enum MinimiseError {
    #[error("partition reached {reached} blocks, above the cap of {cap}")]
    BlockCap { cap: usize, reached: usize },
    #[error("empty model: the quotient has no states")]
    EmptyModel,
    #[error("unknown export format {0:?}, expected dot or aut")]
    UnknownFormat(String),
    #[error("unknown equivalence {0:?}, expected gamma or eta")]
    UnknownMode(String),
}

/// Which logic the quotient must preserve: the full logic with `through`,
/// or the weaker one where reachability must start inside its first
/// argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EquivalenceMode {
    Gamma,
    Eta,
}

impl FromStr for EquivalenceMode {
    type Err = MinimiseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gamma" => Ok(EquivalenceMode::Gamma),
            "eta" => Ok(EquivalenceMode::Eta),
            other => Err(MinimiseError::UnknownMode(other.to_string())),
        }
    }
}

impl fmt::Display for EquivalenceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EquivalenceMode::Gamma => "gamma",
            EquivalenceMode::Eta => "eta",
        })
    }
}

/// A partition of the cells. Blocks are numbered in order of their lowest
/// cell, so equal partitions compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    block_of: Vec<u32>,
    representatives: Vec<u32>,
}

impl Partition {
    /// Canonical partition from arbitrary per-cell labels: cells with equal
    /// labels share a block.
    pub fn from_labels<K: std::hash::Hash + Eq>(labels: impl IntoIterator<Item = K>) -> Self {
        let mut ids: HashMap<K, u32> = HashMap::new();
        let mut block_of = Vec::new();
        let mut representatives = Vec::new();
        for (cell, key) in labels.into_iter().enumerate() {
            let next = ids.len() as u32;
            let b = *ids.entry(key).or_insert(next);
            if b == next {
                representatives.push(cell as u32);
            }
            block_of.push(b);
        }
        Partition {
            block_of,
            representatives,
        }
    }

    /// Cells grouped by their atom sets.
    pub fn by_atoms(poset: &CellPoset) -> Self {
        Partition::from_labels((0..poset.cell_count()).map(|c| poset.atoms_of(c)))
    }

    pub fn identity(cell_count: usize) -> Self {
        Partition::from_labels(0..cell_count)
    }

    pub fn cell_count(&self) -> usize {
        self.block_of.len()
    }

    pub fn block_count(&self) -> usize {
        self.representatives.len()
    }

    pub fn block_of(&self, cell: usize) -> usize {
        self.block_of[cell] as usize
    }

    pub fn block_ids(&self) -> &[u32] {
        &self.block_of
    }

    /// Lowest cell of each block.
    pub fn representatives(&self) -> &[u32] {
        &self.representatives
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.block_count()];
        for (c, &b) in self.block_of.iter().enumerate() {
            out[b as usize].push(c);
        }
        out
    }

    pub fn block_set(&self, block: usize) -> SatSet {
        SatSet::from_indices(
            self.cell_count(),
            (0..self.cell_count()).filter(|&c| self.block_of(c) == block),
        )
    }

    /// True when every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        let mut image: Vec<Option<u32>> = vec![None; self.block_count()];
        for (c, &b) in self.block_of.iter().enumerate() {
            let o = other.block_of[c];
            match image[b as usize] {
                None => image[b as usize] = Some(o),
                Some(x) if x != o => return false,
                _ => {}
            }
        }
        true
    }

    /// True when `set` is a union of blocks.
    pub fn is_union_of_blocks(&self, set: &SatSet) -> bool {
        (0..self.cell_count())
            .all(|c| set.contains(c) == set.contains(self.representatives[self.block_of(c)] as usize))
    }

    /// The value of `set` at each block's representative.
    pub fn project(&self, set: &SatSet) -> Vec<bool> {
        self.representatives
            .iter()
            .map(|&r| set.contains(r as usize))
            .collect()
    }

    /// Reads per-block values back onto cells: a cell gets its block's value.
    pub fn lift(&self, per_block: &[bool]) -> SatSet {
        SatSet::from_bools(
            &self
                .block_of
                .iter()
                .map(|&b| per_block[b as usize])
                .collect::<Vec<_>>(),
        )
    }

    /// One boolean vector per block, named `block<i>`, in cell order.
    pub fn to_result_file(&self) -> ResultFile {
        let n = self.cell_count();
        ResultFile::new(
            n,
            (0..self.block_count())
                .map(|b| ResultEntry::new(format!("block{b}"), &self.block_set(b)))
                .collect(),
        )
    }
}
