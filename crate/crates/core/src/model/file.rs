use serde::{Deserialize, Serialize};

use super::ModelError;

/// Maximum number of points of a simplex (a tetrahedron).
pub const MAX_SIMPLEX_POINTS: usize = 4;

/// The on-disk polyhedral model: atom names, vertex coordinates and one
/// record per simplex. Simplex order is significant: it fixes cell indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PolyhedralModelFile {
    pub atom_names: Vec<String>,
    pub number_of_points: usize,
    pub coordinates_of_points: Vec<[f64; 3]>,
    pub simplexes: Vec<SimplexRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexRecord {
    pub id: String,
    pub points: Vec<u32>,
    pub atoms: Vec<String>,
}

impl SimplexRecord {
    pub fn new(id: impl Into<String>, points: Vec<u32>, atoms: Vec<String>) -> Self {
        SimplexRecord {
            id: id.into(),
            points,
            atoms,
        }
    }

    pub fn dimension(&self) -> usize {
        self.points.len().saturating_sub(1)
    }
}

impl PolyhedralModelFile {
    pub fn empty() -> Self {
        PolyhedralModelFile {
            atom_names: Vec::new(),
            number_of_points: 0,
            coordinates_of_points: Vec::new(),
            simplexes: Vec::new(),
        }
    }

    pub fn cell_count(&self) -> usize {
        self.simplexes.len()
    }
}

/// Parses a model file. Beyond the JSON schema this enforces the per-record
/// shape invariants (point count, index range, distinct indices) and the
/// point-count field, reporting the JSON path of the offending value.
pub fn parse_model(text: &str) -> Result<PolyhedralModelFile, ModelError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let model: PolyhedralModelFile =
        serde_path_to_error::deserialize(de).map_err(|e| ModelError::Json {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })?;
    check_shape(&model)?;
    Ok(model)
}

fn check_shape(model: &PolyhedralModelFile) -> Result<(), ModelError> {
    if model.number_of_points != model.coordinates_of_points.len() {
        return Err(ModelError::Shape {
            path: "numberOfPoints".into(),
            message: format!(
                "numberOfPoints is {} but coordinatesOfPoints has {} entries",
                model.number_of_points,
                model.coordinates_of_points.len()
            ),
        });
    }
    for (i, s) in model.simplexes.iter().enumerate() {
        if s.points.is_empty() || s.points.len() > MAX_SIMPLEX_POINTS {
            return Err(ModelError::Shape {
                path: format!("simplexes[{i}].points"),
                message: format!(
                    "simplex {:?} has {} points, expected 1 to {MAX_SIMPLEX_POINTS}",
                    s.id,
                    s.points.len()
                ),
            });
        }
        for (j, &p) in s.points.iter().enumerate() {
            if p as usize >= model.number_of_points {
                return Err(ModelError::BadIndex {
                    path: format!("simplexes[{i}].points[{j}]"),
                    id: s.id.clone(),
                    index: p,
                    number_of_points: model.number_of_points,
                });
            }
            if s.points[..j].contains(&p) {
                return Err(ModelError::Shape {
                    path: format!("simplexes[{i}].points[{j}]"),
                    message: format!("simplex {:?} repeats vertex {p}", s.id),
                });
            }
        }
    }
    Ok(())
}

/// Serialises a model with 2-space indentation.
pub fn write_model(model: &PolyhedralModelFile) -> String {
    serde_json::to_string_pretty(model).expect("model serialisation cannot fail")
}
