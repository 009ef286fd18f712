use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use super::{MinimiseError, Partition};
use crate::model::CellPoset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveLabel {
    /// From a block to the block of a face it covers.
    Dwn,
    /// From a block to the block of a cell covering it.
    Chg,
}

impl fmt::Display for MoveLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MoveLabel::Dwn => "dwn",
            MoveLabel::Chg => "chg",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    pub representative: u32,
    pub atoms: Vec<String>,
}

/// States are blocks, in block order. Each state has an `ap_<atom>`
/// self-loop per atom; `moves` holds the `dwn`/`chg` transitions between
/// distinct states, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientLts {
    pub states: Vec<State>,
    pub moves: Vec<(u32, MoveLabel, u32)>,
}

impl QuotientLts {
    pub fn transition_count(&self) -> usize {
        self.states.iter().map(|s| s.atoms.len()).sum::<usize>() + self.moves.len()
    }

    pub fn move_count(&self, label: MoveLabel) -> usize {
        self.moves.iter().filter(|m| m.1 == label).count()
    }
}

pub fn quotient(poset: &CellPoset, partition: &Partition) -> QuotientLts {
    let states = partition
        .representatives()
        .iter()
        .map(|&r| State {
            representative: r,
            atoms: poset
                .atoms_of(r as usize)
                .iter()
                .map(|&a| poset.atom_names()[a as usize].clone())
                .collect(),
        })
        .collect();
    let mut moves = BTreeSet::new();
    for upper in 0..poset.cell_count() {
        let bu = partition.block_of(upper) as u32;
        for &lower in poset.covered_by(upper) {
            let bl = partition.block_of(lower as usize) as u32;
            if bu != bl {
                moves.insert((bu, MoveLabel::Dwn, bl));
                moves.insert((bl, MoveLabel::Chg, bu));
            }
        }
    }
    QuotientLts {
        states,
        moves: moves.into_iter().collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LtsFormat {
    Dot,
    Aut,
}

impl FromStr for LtsFormat {
    type Err = MinimiseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dot" => Ok(LtsFormat::Dot),
            "aut" => Ok(LtsFormat::Aut),
            other => Err(MinimiseError::UnknownFormat(other.to_string())),
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn export_lts(lts: &QuotientLts, format: LtsFormat) -> Result<String, MinimiseError> {
    if lts.states.is_empty() {
        return Err(MinimiseError::EmptyModel);
    }
    let mut out = String::new();
    match format {
        LtsFormat::Aut => {
            let _ = writeln!(out, "des (0, {}, {})", lts.transition_count(), lts.states.len());
            for (i, s) in lts.states.iter().enumerate() {
                for a in &s.atoms {
                    let _ = writeln!(out, "({i},\"ap_{}\",{i})", escape(a));
                }
            }
            for (from, label, to) in &lts.moves {
                let _ = writeln!(out, "({from},\"{label}\",{to})");
            }
        }
        LtsFormat::Dot => {
            out.push_str("digraph quotient {\n");
            for (i, s) in lts.states.iter().enumerate() {
                let atoms = s.atoms.iter().map(|a| escape(a)).collect::<Vec<_>>().join(", ");
                let _ = writeln!(out, "  s{i} [label=\"{i}: {{{atoms}}}\"];");
            }
            for (from, label, to) in &lts.moves {
                let _ = writeln!(out, "  s{from} -> s{to} [label=\"{label}\"];");
            }
            out.push_str("}\n");
        }
    }
    Ok(out)
}
