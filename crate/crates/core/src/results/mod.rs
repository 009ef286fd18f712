//! Result files, model enrichment and colored mesh export.

mod export;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::bitset::SatSet;
use crate::check::CheckReport;
use crate::model::PolyhedralModelFile;

pub use export::{export_colored_obj, ColorMap, ColoredMesh, Highlight};

#[derive(Debug, thiserror::Error)]
pub enum ResultsError {
    #[error("result file at {path}: {message}")]
    Json { path: String, message: String },
    #[error("result {name:?} has {actual} values, the model has {expected} cells")]
    LengthMismatch {
        name: String,
        expected: usize,
        actual: usize,
    },
    #[error("result file was written for {found} cells, the model has {expected}")]
    CellCount { expected: usize, found: usize },
    #[error("result {0:?} appears twice")]
    DuplicateResult(String),
    #[error("no result named {name:?}; the file has {available:?}")]
    UnknownResult { name: String, available: Vec<String> },
    #[error("atom {0:?} is assigned twice")]
    DuplicateAtom(String),
    #[error("atom {0:?} already exists in the model")]
    AtomCollision(String),
    #[error("color map: {0}")]
    ColorMap(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultEntry {
    pub name: String,
    /// One value per cell, in the model's cell order.
    pub values: Vec<bool>,
}

impl ResultEntry {
    pub fn new(name: impl Into<String>, set: &SatSet) -> Self {
        ResultEntry {
            name: name.into(),
            values: set.to_bools(),
        }
    }

    pub fn to_sat_set(&self) -> SatSet {
        SatSet::from_bools(&self.values)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ResultFile {
    /// Number of cells of the model the results were computed on. Optional
    /// on input.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cell_count: Option<usize>,
    pub results: Vec<ResultEntry>,
}

impl ResultFile {
    pub fn new(cell_count: usize, results: Vec<ResultEntry>) -> Self {
        ResultFile {
            cell_count: Some(cell_count),
            results,
        }
    }

    pub fn from_report(report: &CheckReport) -> Self {
        ResultFile::new(
            report.cell_count,
            report
                .results
                .iter()
                .map(|(name, set)| ResultEntry::new(name.clone(), set))
                .collect(),
        )
    }

    pub fn get(&self, name: &str) -> Option<&ResultEntry> {
        self.results.iter().find(|e| e.name == name)
    }

    pub fn names(&self) -> Vec<String> {
        self.results.iter().map(|e| e.name.clone()).collect()
    }

    fn entry(&self, name: &str) -> Result<&ResultEntry, ResultsError> {
        self.get(name).ok_or_else(|| ResultsError::UnknownResult {
            name: name.to_string(),
            available: self.names(),
        })
    }

    /// Checks lengths against a model with `cell_count` cells and that names
    /// are unique.
    pub fn validate(&self, cell_count: usize) -> Result<(), ResultsError> {
        if let Some(found) = self.cell_count {
            if found != cell_count {
                return Err(ResultsError::CellCount {
                    expected: cell_count,
                    found,
                });
            }
        }
        let mut names = HashSet::new();
        for e in &self.results {
            if !names.insert(e.name.as_str()) {
                return Err(ResultsError::DuplicateResult(e.name.clone()));
            }
            if e.values.len() != cell_count {
                return Err(ResultsError::LengthMismatch {
                    name: e.name.clone(),
                    expected: cell_count,
                    actual: e.values.len(),
                });
            }
        }
        Ok(())
    }
}

pub fn write_results(results: &ResultFile) -> String {
    serde_json::to_string_pretty(results).expect("result file serializes")
}

/// Parses a result file and validates it against a model with `cell_count`
/// cells.
pub fn read_results(text: &str, cell_count: usize) -> Result<ResultFile, ResultsError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: ResultFile = serde_path_to_error::deserialize(de).map_err(|e| ResultsError::Json {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    file.validate(cell_count)?;
    Ok(file)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnrichMode {
    /// Every cell keeps only the injected atoms.
    #[default]
    Replace,
    /// Injected atoms are added next to the existing ones.
    Append,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EnrichSpec {
    /// `(result name, atom name)` pairs, in the order the atoms are declared.
    pub mappings: Vec<(String, String)>,
    pub mode: EnrichMode,
}

impl EnrichSpec {
    /// Injects each named result under an atom of the same name.
    pub fn same_names(names: &[&str], mode: EnrichMode) -> Self {
        EnrichSpec {
            mappings: names.iter().map(|n| (n.to_string(), n.to_string())).collect(),
            mode,
        }
    }
}

/// Adds results as atomic propositions. Cell order and geometry are kept.
pub fn enrich_model(
    model: &PolyhedralModelFile,
    results: &ResultFile,
    spec: &EnrichSpec,
) -> Result<PolyhedralModelFile, ResultsError> {
    let n = model.simplexes.len();
    let mut seen = HashSet::new();
    let mut vectors = Vec::with_capacity(spec.mappings.len());
    for (result, atom) in &spec.mappings {
        if !seen.insert(atom.as_str()) {
            return Err(ResultsError::DuplicateAtom(atom.clone()));
        }
        if spec.mode == EnrichMode::Append && model.atom_names.contains(atom) {
            return Err(ResultsError::AtomCollision(atom.clone()));
        }
        let entry = results.entry(result)?;
        if entry.values.len() != n {
            return Err(ResultsError::LengthMismatch {
                name: entry.name.clone(),
                expected: n,
                actual: entry.values.len(),
            });
        }
        vectors.push((atom, &entry.values));
    }

    let mut out = model.clone();
    let new_names = spec.mappings.iter().map(|(_, a)| a.clone());
    match spec.mode {
        EnrichMode::Replace => out.atom_names = new_names.collect(),
        EnrichMode::Append => out.atom_names.extend(new_names),
    }
    for (i, cell) in out.simplexes.iter_mut().enumerate() {
        if spec.mode == EnrichMode::Replace {
            cell.atoms.clear();
        }
        for (atom, values) in &vectors {
            if values[i] {
                cell.atoms.push((*atom).clone());
            }
        }
    }
    Ok(out)
}
