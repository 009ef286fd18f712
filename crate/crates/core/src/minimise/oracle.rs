use super::{EquivalenceMode, MinimiseError, Partition};
use crate::bitset::SatSet;
use crate::check::sat_gamma;
use crate::model::CellPoset;

pub const DEFAULT_BLOCK_CAP: usize = 8;

/// Logical equivalence by brute force. Starting from the atom partition,
/// cells are split by which tests `T(U1, U2)` they satisfy, where `U1` and
/// `U2` range over all unions of current blocks and `T` is `through` (gamma)
/// or `U1 & through(U1, U2)` (eta). At the fixpoint every definable set is a
/// union of blocks, and every split was witnessed by a formula.
///
/// Each round costs `4^blocks` evaluations, so the block count is capped.
pub fn logical_equiv_oracle(
    poset: &CellPoset,
    mode: EquivalenceMode,
    block_cap: usize,
) -> Result<Partition, MinimiseError> {
    let n = poset.cell_count();
    let mut p = Partition::by_atoms(poset);
    loop {
        let k = p.block_count();
        if k > block_cap {
            return Err(MinimiseError::BlockCap {
                cap: block_cap,
                reached: k,
            });
        }
        let blocks: Vec<SatSet> = (0..k).map(|b| p.block_set(b)).collect();
        let unions: Vec<SatSet> = (1u32..(1 << k))
            .map(|mask| {
                let mut u = SatSet::empty(n);
                for (b, set) in blocks.iter().enumerate() {
                    if mask >> b & 1 == 1 {
                        u.union_with(set);
                    }
                }
                u
            })
            .collect();
        let mut signature: Vec<Vec<bool>> = vec![Vec::with_capacity(unions.len().pow(2)); n];
        for u1 in &unions {
            for u2 in &unions {
                let mut t = sat_gamma(poset, u1, u2).expect("sizes match");
                if mode == EquivalenceMode::Eta {
                    t.intersect_with(u1);
                }
                for (c, sig) in signature.iter_mut().enumerate() {
                    sig.push(t.contains(c));
                }
            }
        }
        let next = Partition::from_labels((0..n).map(|c| (p.block_of(c), std::mem::take(&mut signature[c]))));
        if next.block_count() == k {
            return Ok(p);
        }
        p = next;
    }
}
