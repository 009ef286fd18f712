//! Spatial model checking on polyhedral models.
//!
//! A polyhedral model is a simplicial complex whose cells carry atomic
//! propositions. Cells are ordered by the face relation, and formulas of the
//! query language are evaluated globally on that order.

pub mod bitset;
pub mod check;
pub mod lang;
pub mod minimise;
pub mod model;
pub mod obj;
pub mod results;
pub mod synth;

use std::path::PathBuf;

pub use bitset::SatSet;
pub use check::{check_formulas, check_script, sat, sat_gamma, CheckError, CheckOptions, CheckReport, EvalCache};
pub use lang::{compile, FormulaArena, FormulaId, LangError, Node};
pub use model::{build_poset, parse_model, CellPoset, ModelError, PolyhedralModelFile, SimplexRecord};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Lang(#[from] LangError),
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    Obj(#[from] obj::ObjError),
    #[error(transparent)]
    Results(#[from] results::ResultsError),
    #[error(transparent)]
    Minimise(#[from] minimise::MinimiseError),
}
