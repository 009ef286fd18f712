//! Polyhedral model files and the cell posets built from them.

mod file;
mod poset;
mod validate;

pub use file::{parse_model, write_model, PolyhedralModelFile, SimplexRecord, MAX_SIMPLEX_POINTS};
pub use poset::{build_poset, CellPoset, SizeMismatch, VertexSet};
pub use validate::{
    validate_complex, validate_complex_with, ValidateOptions, ValidationReport, Violation,
    ViolationKind, AFFINE_TOLERANCE,
};

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("model file at {path}: {message}")]
    Json { path: String, message: String },
    #[error("model file at {path}: {message}")]
    Shape { path: String, message: String },
    #[error("model file at {path}: simplex {id:?} references vertex {index}, but the model has {number_of_points} points")]
    BadIndex {
        path: String,
        id: String,
        index: u32,
        number_of_points: usize,
    },
    #[error("model is not a simplicial complex:\n{0}")]
    Invalid(ValidationReport),
}
