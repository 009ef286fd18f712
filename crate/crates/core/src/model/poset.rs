use std::collections::HashMap;

use super::file::{PolyhedralModelFile, MAX_SIMPLEX_POINTS};
use super::validate::validate_complex;
use super::ModelError;
use crate::bitset::SatSet;

const PAD: u32 = u32::MAX;

/// Sorted vertex indices of a simplex, padded to a fixed width so it can be
/// used as a hash key without allocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    vertices: [u32; MAX_SIMPLEX_POINTS],
    len: u8,
}

impl VertexSet {
    /// `points` must hold 1 to 4 distinct indices.
    pub fn new(points: &[u32]) -> Self {
        assert!(!points.is_empty() && points.len() <= MAX_SIMPLEX_POINTS);
        let mut vertices = [PAD; MAX_SIMPLEX_POINTS];
        vertices[..points.len()].copy_from_slice(points);
        vertices[..points.len()].sort_unstable();
        VertexSet {
            vertices,
            len: points.len() as u8,
        }
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.vertices[..self.len as usize]
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn dimension(&self) -> usize {
        self.len() - 1
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.as_slice().iter().all(|v| other.as_slice().contains(v))
    }

    /// All non-empty proper vertex subsets.
    pub fn proper_faces(&self) -> impl Iterator<Item = VertexSet> + '_ {
        let n = self.len();
        let full = (1u32 << n) - 1;
        (1..full).map(move |mask| {
            let mut picked = [PAD; MAX_SIMPLEX_POINTS];
            let mut k = 0;
            for (bit, &v) in self.as_slice().iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    picked[k] = v;
                    k += 1;
                }
            }
            VertexSet::new(&picked[..k])
        })
    }
}

/// Compressed adjacency lists.
#[derive(Debug, Clone, Default)]
struct Csr {
    offsets: Vec<u32>,
    targets: Vec<u32>,
}

impl Csr {
    fn from_lists(lists: impl IntoIterator<Item = Vec<u32>>) -> Self {
        let mut offsets = vec![0u32];
        let mut targets = Vec::new();
        for mut list in lists {
            list.sort_unstable();
            targets.extend_from_slice(&list);
            offsets.push(targets.len() as u32);
        }
        Csr { offsets, targets }
    }

    #[inline]
    fn get(&self, i: usize) -> &[u32] {
        &self.targets[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }

    fn pairs(&self) -> usize {
        self.targets.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("set has {actual} cells, model has {expected}")]
pub struct SizeMismatch {
    pub expected: usize,
    pub actual: usize,
}

/// The cell poset of a simplicial complex: cells ordered by the face
/// relation, with one satisfaction set per atom.
///
/// Cell `i` is the `i`-th simplex record of the source file. Besides the
/// covering relation (Hasse diagram) every cell stores its complete list of
/// proper faces; with at most four vertices per simplex that is at most 14
/// entries, which makes down/up closures and comparability single passes.
#[derive(Debug, Clone)]
pub struct CellPoset {
    cells: Vec<VertexSet>,
    ids: Vec<String>,
    faces: Csr,
    cover_down: Csr,
    cover_up: Csr,
    cell_atoms: Csr,
    atom_names: Vec<String>,
    atom_sat: Vec<SatSet>,
}

/// Validates the model and builds its cell poset.
pub fn build_poset(model: &PolyhedralModelFile) -> Result<CellPoset, ModelError> {
    let report = validate_complex(model);
    if !report.is_empty() {
        return Err(ModelError::Invalid(report));
    }
    Ok(CellPoset::build_unchecked(model))
}

impl CellPoset {
    fn build_unchecked(model: &PolyhedralModelFile) -> CellPoset {
        let n = model.simplexes.len();
        let cells: Vec<VertexSet> = model
            .simplexes
            .iter()
            .map(|s| VertexSet::new(&s.points))
            .collect();
        let index: HashMap<VertexSet, u32> = cells
            .iter()
            .enumerate()
            .map(|(i, c)| (*c, i as u32))
            .collect();

        let mut face_lists = Vec::with_capacity(n);
        let mut down_lists = Vec::with_capacity(n);
        let mut up_lists: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (i, cell) in cells.iter().enumerate() {
            let mut faces = Vec::new();
            let mut down = Vec::new();
            for face in cell.proper_faces() {
                let f = index[&face];
                faces.push(f);
                if face.len() + 1 == cell.len() {
                    down.push(f);
                    up_lists[f as usize].push(i as u32);
                }
            }
            face_lists.push(faces);
            down_lists.push(down);
        }

        let atom_index: HashMap<&str, u32> = model
            .atom_names
            .iter()
            .enumerate()
            .map(|(i, a)| (a.as_str(), i as u32))
            .collect();
        let mut atom_sat = vec![SatSet::empty(n); model.atom_names.len()];
        let mut atom_lists = Vec::with_capacity(n);
        for (i, s) in model.simplexes.iter().enumerate() {
            let mut ids: Vec<u32> = s.atoms.iter().map(|a| atom_index[a.as_str()]).collect();
            ids.dedup();
            for &a in &ids {
                atom_sat[a as usize].insert(i);
            }
            atom_lists.push(ids);
        }
        let cell_atoms = Csr::from_lists(atom_lists.into_iter().map(|mut l| {
            l.sort_unstable();
            l.dedup();
            l
        }));

        CellPoset {
            cells,
            ids: model.simplexes.iter().map(|s| s.id.clone()).collect(),
            faces: Csr::from_lists(face_lists),
            cover_down: Csr::from_lists(down_lists),
            cover_up: Csr::from_lists(up_lists),
            cell_atoms,
            atom_names: model.atom_names.clone(),
            atom_sat,
        }
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn vertex_set(&self, cell: usize) -> &VertexSet {
        &self.cells[cell]
    }

    pub fn dimension(&self, cell: usize) -> usize {
        self.cells[cell].dimension()
    }

    pub fn id(&self, cell: usize) -> &str {
        &self.ids[cell]
    }

    pub fn cell_by_id(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    /// All cells strictly below `cell`, ascending.
    #[inline]
    pub fn proper_faces(&self, cell: usize) -> &[u32] {
        self.faces.get(cell)
    }

    /// Faces of codimension one.
    #[inline]
    pub fn covered_by(&self, cell: usize) -> &[u32] {
        self.cover_down.get(cell)
    }

    /// Cofaces of codimension one.
    #[inline]
    pub fn covers_of(&self, cell: usize) -> &[u32] {
        self.cover_up.get(cell)
    }

    pub fn covering_pair_count(&self) -> usize {
        self.cover_down.pairs()
    }

    /// `a ≼ b`: `a` is a face of `b` (reflexive).
    pub fn leq(&self, a: usize, b: usize) -> bool {
        a == b || self.proper_faces(b).binary_search(&(a as u32)).is_ok()
    }

    pub fn atom_names(&self) -> &[String] {
        &self.atom_names
    }

    pub fn atom_index(&self, name: &str) -> Option<usize> {
        self.atom_names.iter().position(|a| a == name)
    }

    pub fn atom_sat(&self, atom: usize) -> &SatSet {
        &self.atom_sat[atom]
    }

    pub fn atom_sat_by_name(&self, name: &str) -> Option<&SatSet> {
        self.atom_index(name).map(|i| &self.atom_sat[i])
    }

    /// Indices into `atom_names` of the atoms holding at `cell`, ascending.
    pub fn atoms_of(&self, cell: usize) -> &[u32] {
        self.cell_atoms.get(cell)
    }

    fn check_size(&self, set: &SatSet) -> Result<(), SizeMismatch> {
        if set.len() != self.cell_count() {
            return Err(SizeMismatch {
                expected: self.cell_count(),
                actual: set.len(),
            });
        }
        Ok(())
    }

    /// `{w : w ≼ u for some u ∈ set}`.
    pub fn down_set(&self, set: &SatSet) -> Result<SatSet, SizeMismatch> {
        self.check_size(set)?;
        let mut out = set.clone();
        for c in set.iter() {
            for &f in self.proper_faces(c) {
                out.insert(f as usize);
            }
        }
        Ok(out)
    }

    /// `{w : u ≼ w for some u ∈ set}`.
    pub fn up_set(&self, set: &SatSet) -> Result<SatSet, SizeMismatch> {
        self.check_size(set)?;
        let mut out = set.clone();
        for c in 0..self.cell_count() {
            if !set.contains(c) && self.proper_faces(c).iter().any(|&f| set.contains(f as usize)) {
                out.insert(c);
            }
        }
        Ok(out)
    }
}
