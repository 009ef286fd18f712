//! The query language: `load`/`let`/`save` scripts over the SLCS operators,
//! parsed and expanded into a hash-consed formula DAG.

mod ast;
mod expand;
mod formula;
mod parser;

pub use ast::{Expr, MacroDef, Pos, Save, Script};
pub use expand::{compile, expand, prelude, prelude_text, Expanded};
pub use formula::{FormulaArena, FormulaDisplay, FormulaId, Node};
pub use parser::{parse_script, BUILTINS};

#[derive(Debug, thiserror::Error)]
pub enum LangError {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("unknown statement at {line}:{col}: found {found}, expected `load`, `let` or `save`")]
    UnknownStatement { line: usize, col: usize, found: String },
    #[error("line {line}: `{name}` is already defined")]
    DuplicateMacro { name: String, line: usize },
    #[error("line {line}: a script may contain only one load statement")]
    DuplicateLoad { line: usize },
    #[error("unknown identifier `{name}`")]
    UnknownIdentifier { name: String },
    #[error("`{name}` takes {expected} argument(s), {found} given")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("recursive definition: {}", chain.join(" -> "))]
    Cycle { chain: Vec<String> },
    #[error("in save {label:?}: {source}")]
    InSave {
        label: String,
        #[source]
        source: Box<LangError>,
    },
}
