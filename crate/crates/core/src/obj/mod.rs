//! Wavefront `.obj`/`.mtl` ingestion: triangle meshes become polyhedral
//! models, with atoms assigned from vertex colors and face materials.

mod convert;
mod parse;

pub use convert::{
    convert, derive_edges, AtomMappingRule, ConvertConfig, RuleScope, DEFAULT_TOLERANCE,
};
pub use parse::{
    float_color_to_8bit, parse_mtl, parse_obj, Material, MaterialLibrary, ObjFace, ObjMesh,
    ObjVertex,
};

#[derive(Debug, thiserror::Error)]
pub enum ObjError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: face has {count} vertices, only triangles are supported")]
    NonTriangular { line: usize, count: usize },
    #[error("line {line}: face repeats a vertex")]
    DegenerateFace { line: usize },
    #[error("line {line}: face has the same vertices as an earlier face")]
    DuplicateFace { line: usize },
    #[error("line {line}: vertex {index} does not exist, the mesh has {vertex_count}")]
    BadIndex {
        line: usize,
        index: usize,
        vertex_count: usize,
    },
    #[error("line {line}: unknown material {name:?}")]
    UnknownMaterial { line: usize, name: String },
    #[error("line {line}: material {name:?} has no diffuse color")]
    MissingDiffuse { line: usize, name: String },
    #[error("line {line}: material {name:?} is defined twice")]
    DuplicateMaterial { line: usize, name: String },
    #[error("conversion config: {message}")]
    Config { message: String },
    #[error("rule {rule} emits atom {atom:?}, which is not in atomNames")]
    UndeclaredAtom { rule: usize, atom: String },
}

/// Parses both files and converts. A missing material library behaves as
/// an empty one.
pub fn convert_text(
    obj: &str,
    mtl: Option<&str>,
    cfg: &ConvertConfig,
) -> Result<crate::model::PolyhedralModelFile, ObjError> {
    let lib = match mtl {
        Some(t) => parse_mtl(t)?,
        None => MaterialLibrary::default(),
    };
    convert(&parse_obj(obj, &lib)?, cfg)
}
