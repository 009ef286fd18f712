use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use super::file::{PolyhedralModelFile, MAX_SIMPLEX_POINTS};
use super::poset::VertexSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationKind {
    MissingFace,
    DuplicateVertexSet,
    DuplicateId,
    UnknownAtom,
    BadIndex,
    NonAffine,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::MissingFace => "missing-face",
            ViolationKind::DuplicateVertexSet => "duplicate-vertex-set",
            ViolationKind::DuplicateId => "duplicate-id",
            ViolationKind::UnknownAtom => "unknown-atom",
            ViolationKind::BadIndex => "bad-index",
            ViolationKind::NonAffine => "non-affine",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Ids of the simplex records involved.
    pub ids: Vec<String>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]: {}", self.kind, self.ids.join(", "), self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn of_kind(&self, kind: ViolationKind) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(move |v| v.kind == kind)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ValidateOptions {
    /// Also reject simplexes whose points are affinely dependent.
    pub geometric: bool,
}

/// Tolerance on normalised coordinates for the affine independence check.
pub const AFFINE_TOLERANCE: f64 = 1e-9;

pub fn validate_complex(model: &PolyhedralModelFile) -> ValidationReport {
    validate_complex_with(model, ValidateOptions::default())
}

/// Checks the closure and distinctness conditions of a simplicial complex
/// combinatorially; the geometric intersection condition is reduced to
/// distinct vertex sets.
pub fn validate_complex_with(model: &PolyhedralModelFile, opts: ValidateOptions) -> ValidationReport {
    let mut violations = Vec::new();
    let known_atoms: HashSet<&str> = model.atom_names.iter().map(String::as_str).collect();

    let mut seen_ids: HashMap<&str, usize> = HashMap::new();
    let mut by_set: HashMap<VertexSet, usize> = HashMap::with_capacity(model.simplexes.len());
    let mut usable = vec![true; model.simplexes.len()];

    for (i, s) in model.simplexes.iter().enumerate() {
        if let Some(&first) = seen_ids.get(s.id.as_str()) {
            violations.push(Violation {
                kind: ViolationKind::DuplicateId,
                ids: vec![model.simplexes[first].id.clone(), s.id.clone()],
                detail: format!("records {first} and {i} share an id"),
            });
        } else {
            seen_ids.insert(&s.id, i);
        }

        let in_range = s.points.iter().all(|&p| (p as usize) < model.number_of_points);
        let distinct = (0..s.points.len()).all(|j| !s.points[..j].contains(&s.points[j]));
        if !in_range || !distinct || s.points.is_empty() || s.points.len() > MAX_SIMPLEX_POINTS {
            usable[i] = false;
            violations.push(Violation {
                kind: ViolationKind::BadIndex,
                ids: vec![s.id.clone()],
                detail: format!(
                    "points {:?} must be 1 to {MAX_SIMPLEX_POINTS} distinct indices below {}",
                    s.points, model.number_of_points
                ),
            });
        }

        for atom in &s.atoms {
            if !known_atoms.contains(atom.as_str()) {
                violations.push(Violation {
                    kind: ViolationKind::UnknownAtom,
                    ids: vec![s.id.clone()],
                    detail: format!("atom {atom:?} is not listed in atomNames"),
                });
            }
        }

        if !usable[i] {
            continue;
        }
        let key = VertexSet::new(&s.points);
        if let Some(&first) = by_set.get(&key) {
            violations.push(Violation {
                kind: ViolationKind::DuplicateVertexSet,
                ids: vec![model.simplexes[first].id.clone(), s.id.clone()],
                detail: format!("both records span vertices {:?}", key.as_slice()),
            });
        } else {
            by_set.insert(key, i);
        }
    }

    // Closure under faces: every proper non-empty vertex subset must be a record.
    let mut missing: BTreeMap<Vec<u32>, Vec<String>> = BTreeMap::new();
    for (i, s) in model.simplexes.iter().enumerate() {
        if !usable[i] {
            continue;
        }
        let key = VertexSet::new(&s.points);
        for face in key.proper_faces() {
            if !by_set.contains_key(&face) {
                missing
                    .entry(face.as_slice().to_vec())
                    .or_default()
                    .push(s.id.clone());
            }
        }
    }
    for (face, ids) in missing {
        violations.push(Violation {
            kind: ViolationKind::MissingFace,
            ids,
            detail: format!("no record spans face {face:?}"),
        });
    }

    if opts.geometric {
        for (i, s) in model.simplexes.iter().enumerate() {
            if usable[i] && !affinely_independent(model, &s.points) {
                violations.push(Violation {
                    kind: ViolationKind::NonAffine,
                    ids: vec![s.id.clone()],
                    detail: "points are affinely dependent".into(),
                });
            }
        }
    }

    ValidationReport { violations }
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn norm(a: [f64; 3]) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn affinely_independent(model: &PolyhedralModelFile, points: &[u32]) -> bool {
    let coords: Vec<[f64; 3]> = points
        .iter()
        .map(|&p| model.coordinates_of_points[p as usize])
        .collect();
    let origin = coords[0];
    let edges: Vec<[f64; 3]> = coords[1..].iter().map(|c| sub(*c, origin)).collect();
    let scale = edges.iter().map(|e| norm(*e)).fold(0.0, f64::max);
    if edges.is_empty() {
        return true;
    }
    if scale <= AFFINE_TOLERANCE {
        return false;
    }
    let e: Vec<[f64; 3]> = edges
        .iter()
        .map(|v| [v[0] / scale, v[1] / scale, v[2] / scale])
        .collect();
    match e.len() {
        1 => norm(e[0]) > AFFINE_TOLERANCE,
        2 => norm(cross(e[0], e[1])) > AFFINE_TOLERANCE,
        _ => {
            let c = cross(e[1], e[2]);
            (e[0][0] * c[0] + e[0][1] * c[1] + e[0][2] * c[2]).abs() > AFFINE_TOLERANCE
        }
    }
}
