//! Global model checking: the satisfaction set of every formula over all
//! cells of a cell poset.

mod gamma;

use std::collections::HashMap;
use std::path::Path;
use std::sync::{Arc, RwLock};
use std::time::Instant;

use rayon::prelude::*;

use crate::bitset::SatSet;
use crate::lang::{self, Expanded, FormulaArena, FormulaId, Node};
use crate::model::{self, CellPoset, SizeMismatch};

pub use gamma::{sat_gamma, sat_near, UnionFind};

#[derive(Debug, thiserror::Error)]
pub enum CheckError {
    #[error("{}unknown atom {atom:?}; the model defines {available:?}",
            label.as_ref().map(|l| format!("in save {l:?}: ")).unwrap_or_default())]
    UnknownAtom {
        label: Option<String>,
        atom: String,
        available: Vec<String>,
    },
    #[error(transparent)]
    Size(#[from] SizeMismatch),
}

/// Memoised satisfaction sets keyed by formula node. Shared between worker
/// threads; concurrent inserts of the same node store equal values.
#[derive(Debug, Default)]
pub struct EvalCache {
    map: RwLock<HashMap<FormulaId, Arc<SatSet>>>,
}

impl EvalCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, id: FormulaId) -> Option<Arc<SatSet>> {
        self.map.read().unwrap().get(&id).cloned()
    }

    pub fn insert(&self, id: FormulaId, value: Arc<SatSet>) {
        self.map.write().unwrap().insert(id, value);
    }

    pub fn len(&self) -> usize {
        self.map.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn clear(&self) {
        self.map.write().unwrap().clear();
    }
}

fn check_atoms(
    poset: &CellPoset,
    arena: &FormulaArena,
    root: FormulaId,
    label: Option<&str>,
) -> Result<(), CheckError> {
    for atom in arena.atoms(root) {
        if poset.atom_index(atom).is_none() {
            return Err(CheckError::UnknownAtom {
                label: label.map(str::to_string),
                atom: atom.to_string(),
                available: poset.atom_names().to_vec(),
            });
        }
    }
    Ok(())
}

fn eval_node(
    poset: &CellPoset,
    node: &Node,
    child: impl Fn(FormulaId) -> Arc<SatSet>,
) -> SatSet {
    let n = poset.cell_count();
    match node {
        Node::Atom(name) => poset
            .atom_sat_by_name(name)
            .cloned()
            .expect("atoms are checked before evaluation"),
        Node::Top => SatSet::full(n),
        Node::Bottom => SatSet::empty(n),
        Node::Not(a) => child(*a).complement(),
        Node::And(a, b) => child(*a).intersection(&child(*b)),
        Node::Or(a, b) => child(*a).union(&child(*b)),
        Node::Xor(a, b) => child(*a).symmetric_difference(&child(*b)),
        Node::Gamma(a, b) => sat_gamma(poset, &child(*a), &child(*b)).expect("sizes match"),
        Node::CvNear(a) => poset.up_set(&child(*a)).expect("sizes match"),
    }
}

/// `Sat(f)`, reusing and filling `cache`.
pub fn sat(
    poset: &CellPoset,
    arena: &FormulaArena,
    f: FormulaId,
    cache: &EvalCache,
) -> Result<Arc<SatSet>, CheckError> {
    check_atoms(poset, arena, f, None)?;
    for id in arena.reachable(&[f]) {
        if cache.get(id).is_some() {
            continue;
        }
        let value = eval_node(poset, arena.node(id), |c| {
            cache.get(c).expect("children are evaluated first")
        });
        cache.insert(id, Arc::new(value));
    }
    Ok(cache.get(f).unwrap())
}

/// `Sat(f)` by plain structural recursion, without any sharing.
pub fn sat_uncached(
    poset: &CellPoset,
    arena: &FormulaArena,
    f: FormulaId,
) -> Result<SatSet, CheckError> {
    check_atoms(poset, arena, f, None)?;
    fn go(poset: &CellPoset, arena: &FormulaArena, f: FormulaId) -> SatSet {
        eval_node(poset, arena.node(f), |c| Arc::new(go(poset, arena, c)))
    }
    Ok(go(poset, arena, f))
}

/// Evaluates all `roots` with a pool of `workers` threads. Nodes are grouped
/// by height in the DAG and each group is evaluated in parallel, so results
/// do not depend on the worker count.
pub fn check_formulas(
    poset: &CellPoset,
    arena: &FormulaArena,
    roots: &[(String, FormulaId)],
    workers: usize,
    cache: &EvalCache,
) -> Result<Vec<(String, SatSet)>, CheckError> {
    for (label, f) in roots {
        check_atoms(poset, arena, *f, Some(label))?;
    }
    let ids: Vec<FormulaId> = roots.iter().map(|(_, f)| *f).collect();
    let nodes = arena.reachable(&ids);

    let mut height: HashMap<FormulaId, usize> = HashMap::with_capacity(nodes.len());
    let mut levels: Vec<Vec<FormulaId>> = Vec::new();
    for &id in &nodes {
        let h = arena
            .node(id)
            .children()
            .map(|c| height[&c] + 1)
            .max()
            .unwrap_or(0);
        height.insert(id, h);
        if cache.get(id).is_none() {
            if levels.len() <= h {
                levels.resize(h + 1, Vec::new());
            }
            levels[h].push(id);
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool");
    pool.install(|| {
        for level in &levels {
            let computed: Vec<(FormulaId, SatSet)> = level
                .par_iter()
                .map(|&id| {
                    let v = eval_node(poset, arena.node(id), |c| {
                        cache.get(c).expect("lower levels are evaluated first")
                    });
                    (id, v)
                })
                .collect();
            for (id, v) in computed {
                cache.insert(id, Arc::new(v));
            }
        }
    });

    Ok(roots
        .iter()
        .map(|(label, f)| (label.clone(), (*cache.get(*f).unwrap()).clone()))
        .collect())
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Timings {
    pub parse_ms: f64,
    pub load_ms: f64,
    pub check_ms: f64,
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub cell_count: usize,
    /// One satisfaction set per save label, in script order.
    pub results: Vec<(String, SatSet)>,
    pub timings: Timings,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy)]
pub struct CheckOptions {
    pub workers: usize,
    pub use_prelude: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            use_prelude: true,
        }
    }
}

fn elapsed_ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// Evaluates an already expanded script on a poset.
pub fn check_expanded(
    poset: &CellPoset,
    script: &Expanded,
    workers: usize,
) -> Result<Vec<(String, SatSet)>, CheckError> {
    check_formulas(poset, &script.arena, &script.saves, workers, &EvalCache::new())
}

/// Loads the model at `model_path`, compiles `script_text` and evaluates
/// every save entry against one shared cache.
pub fn check_script(
    model_path: &Path,
    script_text: &str,
    opts: CheckOptions,
) -> Result<CheckReport, crate::Error> {
    let t = Instant::now();
    let expanded = lang::compile(script_text, opts.use_prelude)?;
    let parse_ms = elapsed_ms(t);

    let t = Instant::now();
    let text = std::fs::read_to_string(model_path).map_err(|source| crate::Error::Io {
        path: model_path.to_path_buf(),
        source,
    })?;
    let file = model::parse_model(&text)?;
    let poset = model::build_poset(&file)?;
    let load_ms = elapsed_ms(t);

    let t = Instant::now();
    let results = check_expanded(&poset, &expanded, opts.workers)?;
    let check_ms = elapsed_ms(t);
    log::debug!(
        "{} formulas on {} cells: parse {parse_ms:.1} ms, load {load_ms:.1} ms, check {check_ms:.1} ms",
        results.len(),
        poset.cell_count()
    );

    Ok(CheckReport {
        cell_count: poset.cell_count(),
        results,
        timings: Timings {
            parse_ms,
            load_ms,
            check_ms,
        },
        warnings: expanded.warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_poset;
    use crate::synth;

    fn sample() -> CellPoset {
        build_poset(&synth::sample_model()).unwrap()
    }

    fn named(p: &CellPoset, names: &[&str]) -> SatSet {
        SatSet::from_indices(p.cell_count(), names.iter().map(|n| p.cell_by_id(n).unwrap()))
    }

    #[test]
    fn atoms_and_converse_near() {
        let p = sample();
        let mut a = FormulaArena::new();
        let green = a.atom("green");
        let cv = a.cv_near(green);
        let cache = EvalCache::new();
        assert_eq!(*sat(&p, &a, green, &cache).unwrap(), named(&p, &["CDE"]));
        assert_eq!(*sat(&p, &a, cv, &cache).unwrap(), named(&p, &["CDE"]));
        let top = a.top();
        let not_top = a.not(top);
        assert!(sat(&p, &a, not_top, &cache).unwrap().is_empty());
    }

    #[test]
    fn unknown_atom_names_the_label() {
        let p = sample();
        let mut a = FormulaArena::new();
        let blue = a.atom("blue");
        let err = check_formulas(&p, &a, &[("sky".into(), blue)], 1, &EvalCache::new()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("sky") && msg.contains("blue") && msg.contains("green"), "{msg}");
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let p = build_poset(&synth::maze_model(3, 2)).unwrap();
        let e = lang::compile(
            "let c = ap(\"corridor\")\nsave \"a\" through(c, ap(\"W\")) & !through(c, ap(\"B\"))\nsave \"b\" grow(ap(\"R\"), c)",
            true,
        )
        .unwrap();
        let one = check_expanded(&p, &e, 1).unwrap();
        let many = check_expanded(&p, &e, 4).unwrap();
        assert_eq!(one, many);
    }

    #[test]
    fn warm_cache_matches_uncached() {
        let p = sample();
        let e = lang::compile(
            "let r = ap(\"red\")\nsave \"x\" through(r | ap(\"gray\"), near(ap(\"green\")))\nsave \"y\" sur(r, ap(\"gray\"))",
            true,
        )
        .unwrap();
        let cache = EvalCache::new();
        for _ in 0..2 {
            for (_, f) in &e.saves {
                let warm = sat(&p, &e.arena, *f, &cache).unwrap();
                assert_eq!(*warm, sat_uncached(&p, &e.arena, *f).unwrap());
            }
        }
        assert!(!cache.is_empty());
    }
}
