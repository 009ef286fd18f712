use crate::bitset::SatSet;
use crate::model::{CellPoset, SizeMismatch};

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let p = self.parent[x] as usize;
            self.parent[x] = self.parent[p];
            x = self.parent[x] as usize;
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return a;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a as u32;
        self.size[a] += self.size[b];
        a
    }
}

fn check_len(poset: &CellPoset, s: &SatSet) -> Result<(), SizeMismatch> {
    if s.len() != poset.cell_count() {
        return Err(SizeMismatch {
            expected: poset.cell_count(),
            actual: s.len(),
        });
    }
    Ok(())
}

/// Cells satisfying `through(S1, S2)`: those below some cell of a connected
/// S1-region that touches S2 from above.
///
/// Regions are the connected components of S1 under comparability. Every
/// comparable pair is a face pair, so unioning each cell with all of its
/// proper faces in S1 finds them; covering edges alone would miss pairs
/// whose intermediate faces lie outside S1.
pub fn sat_gamma(poset: &CellPoset, s1: &SatSet, s2: &SatSet) -> Result<SatSet, SizeMismatch> {
    check_len(poset, s1)?;
    check_len(poset, s2)?;
    let n = poset.cell_count();
    if s1.is_empty() || s2.is_empty() {
        return Ok(SatSet::empty(n));
    }
    let mut uf = UnionFind::new(n);
    for c in s1.iter() {
        for &f in poset.proper_faces(c) {
            if s1.contains(f as usize) {
                uf.union(c, f as usize);
            }
        }
    }
    let mut hit = vec![false; n];
    for c in s1.iter() {
        if s2.contains(c) || poset.proper_faces(c).iter().any(|&f| s2.contains(f as usize)) {
            let r = uf.find(c);
            hit[r] = true;
        }
    }
    let mut region = SatSet::empty(n);
    for c in s1.iter() {
        if hit[uf.find(c)] {
            region.insert(c);
        }
    }
    poset.down_set(&region)
}

/// `near(S)`, the down-closure of `S`.
pub fn sat_near(poset: &CellPoset, s: &SatSet) -> Result<SatSet, SizeMismatch> {
    poset.down_set(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_poset;
    use crate::synth;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn named(p: &CellPoset, names: &[&str]) -> SatSet {
        SatSet::from_indices(p.cell_count(), names.iter().map(|n| p.cell_by_id(n).unwrap()))
    }

    /// Direct search over ±-paths: a monotone-up prefix from `w` to some
    /// `u` in S1, then a walk through S1 along comparable pairs, ending with
    /// a downward step (possibly of length zero) into S2. Comparability is
    /// decided on vertex sets rather than through the poset's face lists.
    fn gamma_by_paths(p: &CellPoset, s1: &SatSet, s2: &SatSet) -> SatSet {
        let n = p.cell_count();
        let leq = |a: usize, b: usize| p.vertex_set(a).is_subset(p.vertex_set(b));
        let mut out = SatSet::empty(n);
        for w in 0..n {
            let mut seen = vec![false; n];
            let mut stack: Vec<usize> = (0..n).filter(|&u| s1.contains(u) && leq(w, u)).collect();
            for &u in &stack {
                seen[u] = true;
            }
            let mut ok = false;
            while let Some(x) = stack.pop() {
                if (0..n).any(|b| s2.contains(b) && leq(b, x)) {
                    ok = true;
                    break;
                }
                for y in 0..n {
                    if !seen[y] && s1.contains(y) && (leq(x, y) || leq(y, x)) {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            out.set(w, ok);
        }
        out
    }

    #[test]
    fn sample_model_examples() {
        let p = build_poset(&synth::sample_model()).unwrap();
        let red = p.atom_sat_by_name("red").unwrap().clone();
        let green = p.atom_sat_by_name("green").unwrap().clone();
        let gray = p.atom_sat_by_name("gray").unwrap().clone();
        let tt = SatSet::full(p.cell_count());
        let g = sat_gamma(&p, &gray, &tt).unwrap();
        assert!(g.contains(p.cell_by_id("C").unwrap()));
        assert!(!g.contains(p.cell_by_id("CD").unwrap()));
        // CDE is top-dimensional, so a path that must end with a downward
        // step into it from a red cell does not exist.
        assert!(sat_gamma(&p, &red, &green).unwrap().is_empty());
        assert_eq!(sat_gamma(&p, &red, &green).unwrap(), gamma_by_paths(&p, &red, &green));
        assert_eq!(sat_near(&p, &green).unwrap(), named(&p, &["C", "D", "E", "CD", "DE", "CE", "CDE"]));
    }

    #[test]
    fn region_connected_only_through_an_outside_face() {
        // S1 = {A, ABC} is connected although AB is not in S1.
        let p = build_poset(&synth::single_triangle()).unwrap();
        let a = (0..p.cell_count()).find(|&c| p.dimension(c) == 0).unwrap();
        let top = (0..p.cell_count()).find(|&c| p.dimension(c) == 2).unwrap();
        let s1 = SatSet::from_indices(p.cell_count(), [a, top]);
        let s2 = SatSet::from_indices(p.cell_count(), [a]);
        let g = sat_gamma(&p, &s1, &s2).unwrap();
        assert_eq!(g, SatSet::full(p.cell_count()));
        assert_eq!(g, gamma_by_paths(&p, &s1, &s2));
    }

    #[test]
    fn size_mismatch_is_reported() {
        let p = build_poset(&synth::sample_model()).unwrap();
        let bad = SatSet::empty(3);
        assert!(sat_gamma(&p, &bad, &SatSet::full(p.cell_count())).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn agrees_with_path_search(seed in any::<u64>(), m1 in any::<u64>(), m2 in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let model = synth::random_complex(&mut rng, 24, &["a"], 0.5);
            let p = build_poset(&model).unwrap();
            let n = p.cell_count();
            let s1 = SatSet::from_bools(&(0..n).map(|i| (m1 >> (i % 64)) & 1 == 1).collect::<Vec<_>>());
            let s2 = SatSet::from_bools(&(0..n).map(|i| (m2 >> (i % 64)) & 1 == 1 && i % 3 == 0).collect::<Vec<_>>());
            prop_assert_eq!(sat_gamma(&p, &s1, &s2).unwrap(), gamma_by_paths(&p, &s1, &s2));
        }

        #[test]
        fn monotone_in_both_arguments(seed in any::<u64>(), m1 in any::<u64>(), m2 in any::<u64>(), extra in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let p = build_poset(&synth::random_complex(&mut rng, 24, &["a"], 0.5)).unwrap();
            let n = p.cell_count();
            let bits = |m: u64| SatSet::from_bools(&(0..n).map(|i| (m >> (i % 64)) & 1 == 1).collect::<Vec<_>>());
            let (s1, s2, e) = (bits(m1), bits(m2), bits(extra));
            let base = sat_gamma(&p, &s1, &s2).unwrap();
            prop_assert!(base.is_subset(&sat_gamma(&p, &s1.union(&e), &s2).unwrap()));
            prop_assert!(base.is_subset(&sat_gamma(&p, &s1, &s2.union(&e)).unwrap()));
        }
    }
}
