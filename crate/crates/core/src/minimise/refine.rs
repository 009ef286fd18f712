use std::collections::HashMap;

use super::{EquivalenceMode, Partition};
use crate::check::UnionFind;
use crate::model::CellPoset;

const TAU: u64 = 0;
const DWN: u64 = 1 << 32;
const UP: u64 = 2 << 32;

/// Sorted, deduplicated `(owner, code)` pairs, indexed by owner.
struct Signatures {
    offsets: Vec<u32>,
    codes: Vec<u64>,
}

impl Signatures {
    fn build(n: usize, mut entries: Vec<(u32, u64)>) -> Self {
        entries.sort_unstable();
        entries.dedup();
        let mut offsets = vec![0u32; n + 1];
        for &(o, _) in &entries {
            offsets[o as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        Signatures {
            offsets,
            codes: entries.into_iter().map(|(_, c)| c).collect(),
        }
    }

    fn of(&self, owner: usize) -> &[u64] {
        &self.codes[self.offsets[owner] as usize..self.offsets[owner + 1] as usize]
    }
}

/// Partition refinement in the style of branching bisimulation.
///
/// Comparability steps inside a block are silent, so the cells of a block
/// that are connected through comparability form one unit. A unit's
/// signature records the other blocks it is comparable to and the blocks
/// of the faces below it; in gamma mode each cell also records the blocks
/// above it. Blocks are split by signature until nothing changes.
pub fn minimise(poset: &CellPoset, mode: EquivalenceMode) -> Partition {
    let n = poset.cell_count();
    let mut p = Partition::by_atoms(poset);
    loop {
        let block = p.block_ids();
        let mut uf = UnionFind::new(n);
        for k in 0..n {
            for &f in poset.proper_faces(k) {
                if block[k] == block[f as usize] {
                    uf.union(k, f as usize);
                }
            }
        }
        let unit: Vec<u32> = (0..n).map(|c| uf.find(c) as u32).collect();

        let mut unit_entries = Vec::new();
        let mut cell_entries = Vec::new();
        for k in 0..n {
            let bk = block[k] as u64;
            unit_entries.push((unit[k], DWN | bk));
            if mode == EquivalenceMode::Gamma {
                cell_entries.push((k as u32, UP | bk));
            }
            for &f in poset.proper_faces(k) {
                let f = f as usize;
                let bf = block[f] as u64;
                unit_entries.push((unit[k], DWN | bf));
                if bf != bk {
                    unit_entries.push((unit[k], TAU | bf));
                    unit_entries.push((unit[f], TAU | bk));
                }
                if mode == EquivalenceMode::Gamma {
                    cell_entries.push((f as u32, UP | bk));
                }
            }
        }
        let units = Signatures::build(n, unit_entries);
        let cells = Signatures::build(n, cell_entries);

        let mut ids: HashMap<(u32, &[u64], &[u64]), u32> = HashMap::new();
        let labels: Vec<u32> = (0..n)
            .map(|c| {
                let key = (block[c], units.of(unit[c] as usize), cells.of(c));
                let next = ids.len() as u32;
                *ids.entry(key).or_insert(next)
            })
            .collect();
        let next = Partition::from_labels(labels);
        log::debug!("{mode} refinement: {} -> {} blocks", p.block_count(), next.block_count());
        if next.block_count() == p.block_count() {
            return p;
        }
        p = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minimise::logical_equiv_oracle;
    use crate::model::build_poset;
    use crate::synth;
    use proptest::prelude::*;
    use rand::SeedableRng;

    #[test]
    fn unique_atoms_give_identity() {
        let mut m = synth::sample_model();
        m.atom_names = m.simplexes.iter().map(|s| s.id.clone()).collect();
        for s in &mut m.simplexes {
            s.atoms = vec![s.id.clone()];
        }
        let p = build_poset(&m).unwrap();
        assert_eq!(minimise(&p, EquivalenceMode::Gamma), Partition::identity(p.cell_count()));
    }

    #[test]
    fn single_atom_is_one_block() {
        let mut m = synth::maze_model(1, 2);
        m.atom_names = vec!["p".into()];
        for s in &mut m.simplexes {
            s.atoms = vec!["p".into()];
        }
        let q = build_poset(&m).unwrap();
        assert!(q.cell_count() > 100);
        assert_eq!(minimise(&q, EquivalenceMode::Gamma).block_count(), 1);
        assert_eq!(minimise(&q, EquivalenceMode::Eta).block_count(), 1);
    }

    #[test]
    fn sample_agrees_with_oracle() {
        let p = build_poset(&synth::sample_model()).unwrap();
        for mode in [EquivalenceMode::Gamma, EquivalenceMode::Eta] {
            if let Ok(o) = logical_equiv_oracle(&p, mode, 10) {
                assert_eq!(minimise(&p, mode), o, "{mode}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn agrees_with_oracle_on_small_models(seed in any::<u64>(), eta in any::<bool>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = synth::random_complex(&mut rng, 16, &["a", "b"], 0.4);
            let p = build_poset(&m).unwrap();
            let mode = if eta { EquivalenceMode::Eta } else { EquivalenceMode::Gamma };
            if let Ok(o) = logical_equiv_oracle(&p, mode, 6) {
                prop_assert_eq!(minimise(&p, mode), o);
            }
        }
    }
}
