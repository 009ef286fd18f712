use std::collections::HashMap;

use super::ast::{Expr, MacroDef, Script};
use super::formula::{FormulaArena, FormulaId};
use super::parser::parse_script;
use super::LangError;

const PRELUDE_TEXT: &str = include_str!("prelude.imgql");

/// The bundled library of derived operators.
pub fn prelude() -> Script {
    parse_script(PRELUDE_TEXT).expect("bundled prelude parses")
}

pub fn prelude_text() -> &'static str {
    PRELUDE_TEXT
}

/// A script with every save entry expanded to a closed formula.
#[derive(Debug, Clone)]
pub struct Expanded {
    pub model_path: Option<String>,
    pub arena: FormulaArena,
    /// Save labels in script order, each paired with its formula.
    pub saves: Vec<(String, FormulaId)>,
    pub warnings: Vec<String>,
}

impl Expanded {
    pub fn formula(&self, label: &str) -> Option<FormulaId> {
        self.saves.iter().find(|(l, _)| l == label).map(|(_, f)| *f)
    }
}

struct Expander<'a> {
    macros: HashMap<&'a str, &'a MacroDef>,
    arena: FormulaArena,
    constants: HashMap<&'a str, FormulaId>,
}

impl<'a> Expander<'a> {
    fn expr(
        &mut self,
        e: &'a Expr,
        env: &HashMap<&'a str, FormulaId>,
    ) -> Result<FormulaId, LangError> {
        Ok(match e {
            Expr::Ap(name) => self.arena.atom(name),
            Expr::Tt => self.arena.top(),
            Expr::Ff => self.arena.bottom(),
            Expr::Not(a) => {
                let a = self.expr(a, env)?;
                self.arena.not(a)
            }
            Expr::CvNear(a) => {
                let a = self.expr(a, env)?;
                self.arena.cv_near(a)
            }
            Expr::And(a, b) => {
                let (a, b) = (self.expr(a, env)?, self.expr(b, env)?);
                self.arena.and(a, b)
            }
            Expr::Or(a, b) => {
                let (a, b) = (self.expr(a, env)?, self.expr(b, env)?);
                self.arena.or(a, b)
            }
            Expr::Xor(a, b) => {
                let (a, b) = (self.expr(a, env)?, self.expr(b, env)?);
                self.arena.xor(a, b)
            }
            Expr::Through(a, b) => {
                let (a, b) = (self.expr(a, env)?, self.expr(b, env)?);
                self.arena.gamma(a, b)
            }
            Expr::Ref { name, args } => {
                if let Some(&bound) = env.get(name.as_str()) {
                    if !args.is_empty() {
                        return Err(LangError::Arity {
                            name: name.clone(),
                            expected: 0,
                            found: args.len(),
                        });
                    }
                    return Ok(bound);
                }
                let def = *self.macros.get(name.as_str()).ok_or_else(|| LangError::UnknownIdentifier {
                    name: name.clone(),
                })?;
                if def.params.len() != args.len() {
                    return Err(LangError::Arity {
                        name: name.clone(),
                        expected: def.params.len(),
                        found: args.len(),
                    });
                }
                if args.is_empty() {
                    if let Some(&f) = self.constants.get(def.name.as_str()) {
                        return Ok(f);
                    }
                }
                let mut inner = HashMap::with_capacity(args.len());
                for (p, a) in def.params.iter().zip(args) {
                    inner.insert(p.as_str(), self.expr(a, env)?);
                }
                let f = self.expr(&def.body, &inner)?;
                if args.is_empty() {
                    self.constants.insert(&def.name, f);
                }
                f
            }
        })
    }
}

/// Rejects recursive definitions and references to unknown names in any
/// definition, used or not.
fn check_definitions(macros: &HashMap<&str, &MacroDef>) -> Result<(), LangError> {
    let mut names: Vec<&str> = macros.keys().copied().collect();
    names.sort_unstable();
    for &name in &names {
        let def = macros[name];
        let mut err = None;
        def.body.visit_refs(&mut |r, arity| {
            if err.is_some() || (arity == 0 && def.params.iter().any(|p| p == r)) {
                return;
            }
            match macros.get(r) {
                None => err = Some(LangError::UnknownIdentifier { name: r.to_string() }),
                Some(d) if d.params.len() != arity => {
                    err = Some(LangError::Arity {
                        name: r.to_string(),
                        expected: d.params.len(),
                        found: arity,
                    })
                }
                _ => {}
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
    }

    // depth-first search for a cycle in the reference graph
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    fn refs(def: &MacroDef) -> Vec<&str> {
        let mut out = Vec::new();
        def.body.visit_refs(&mut |r, arity| {
            if !(arity == 0 && def.params.iter().any(|p| p == r)) {
                out.push(r);
            }
        });
        out
    }
    fn visit<'a>(
        name: &'a str,
        macros: &HashMap<&'a str, &'a MacroDef>,
        marks: &mut HashMap<&'a str, Mark>,
        path: &mut Vec<&'a str>,
    ) -> Result<(), LangError> {
        match marks[name] {
            Mark::Done => return Ok(()),
            Mark::Active => {
                let start = path.iter().position(|n| *n == name).unwrap();
                let mut chain: Vec<String> = path[start..].iter().map(|s| s.to_string()).collect();
                chain.push(name.to_string());
                return Err(LangError::Cycle { chain });
            }
            Mark::New => {}
        }
        marks.insert(name, Mark::Active);
        path.push(name);
        for r in refs(macros[name]) {
            visit(r, macros, marks, path)?;
        }
        path.pop();
        marks.insert(name, Mark::Done);
        Ok(())
    }
    let mut marks: HashMap<&str, Mark> = names.iter().map(|n| (*n, Mark::New)).collect();
    for name in names {
        visit(name, macros, &mut marks, &mut Vec::new())?;
    }
    Ok(())
}

/// Expands every save entry of `script` by macro substitution. Definitions
/// from `prelude` are visible unless the script redefines them, which is
/// reported as a warning.
pub fn expand(script: &Script, prelude: Option<&Script>) -> Result<Expanded, LangError> {
    let mut warnings = Vec::new();
    let mut macros: HashMap<&str, &MacroDef> = HashMap::new();
    if let Some(p) = prelude {
        for d in &p.definitions {
            macros.insert(&d.name, d);
        }
    }
    for d in &script.definitions {
        if macros.insert(&d.name, d).is_some() {
            warnings.push(format!(
                "line {}: definition of `{}` shadows the prelude",
                d.pos.line, d.name
            ));
        }
    }
    check_definitions(&macros)?;

    let mut ex = Expander {
        macros,
        arena: FormulaArena::new(),
        constants: HashMap::new(),
    };
    let mut saves: Vec<(String, FormulaId)> = Vec::new();
    let empty = HashMap::new();
    for s in &script.saves {
        let f = ex.expr(&s.expr, &empty).map_err(|e| LangError::InSave {
            label: s.label.clone(),
            source: Box::new(e),
        })?;
        if let Some(slot) = saves.iter_mut().find(|(l, _)| *l == s.label) {
            warnings.push(format!(
                "line {}: save label {:?} repeated, the later entry wins",
                s.pos.line, s.label
            ));
            slot.1 = f;
        } else {
            saves.push((s.label.clone(), f));
        }
    }
    Ok(Expanded {
        model_path: script.model_path.clone(),
        arena: ex.arena,
        saves,
        warnings,
    })
}

/// Parses and expands `text`, with the bundled prelude unless disabled.
pub fn compile(text: &str, use_prelude: bool) -> Result<Expanded, LangError> {
    let script = parse_script(text)?;
    let prelude = use_prelude.then(prelude);
    expand(&script, prelude.as_ref())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::formula::Node;

    #[test]
    fn cycle_is_rejected() {
        let err = compile("let a = a\nsave \"x\" a", false).unwrap_err();
        assert!(matches!(err, LangError::Cycle { .. }), "{err}");
        let err = compile("let a = b\nlet b = !a", false).unwrap_err();
        match err {
            LangError::Cycle { chain } => assert_eq!(chain, vec!["a", "b", "a"]),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn unknown_identifier_and_arity() {
        assert!(matches!(
            compile("save \"x\" nope", false),
            Err(LangError::InSave { .. })
        ));
        assert!(matches!(
            compile("let f(x) = x\nsave \"x\" f(tt, tt)", false),
            Err(LangError::InSave { .. })
        ));
        assert!(matches!(
            compile("let g = f(tt, tt)\nlet f(x) = x", false),
            Err(LangError::Arity { expected: 1, found: 2, .. })
        ));
        assert!(matches!(
            compile("let g = undefined_thing", false),
            Err(LangError::UnknownIdentifier { .. })
        ));
    }

    #[test]
    fn prelude_operators_lower_to_gamma() {
        let e = compile(
            "save \"n\" near(ap(\"p\"))\nsave \"c\" closure(ap(\"p\"))\nsave \"e\" eta(ap(\"p\"), ap(\"q\"))",
            true,
        )
        .unwrap();
        let a = &e.arena;
        let n = e.formula("n").unwrap();
        assert_eq!(n, e.formula("c").unwrap());
        match a.node(n) {
            Node::Gamma(x, t) => {
                assert_eq!(a.node(*x), &Node::Atom("p".into()));
                assert_eq!(a.node(*t), &Node::Top);
            }
            other => panic!("{other:?}"),
        }
        match a.node(e.formula("e").unwrap()) {
            Node::And(x, g) => {
                assert_eq!(a.node(*x), &Node::Atom("p".into()));
                assert!(matches!(a.node(*g), Node::Gamma(y, _) if y == x));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn shadowing_and_repeated_labels_warn() {
        let e = compile(
            "let near(x) = cvnear(x)\nsave \"a\" tt\nsave \"a\" near(ap(\"p\"))",
            true,
        )
        .unwrap();
        assert_eq!(e.warnings.len(), 2);
        assert_eq!(e.saves.len(), 1);
        assert!(matches!(e.arena.node(e.saves[0].1), Node::CvNear(_)));
    }

    #[test]
    fn without_prelude_derived_operators_are_unknown() {
        assert!(compile("save \"n\" near(tt)", false).is_err());
    }

    #[test]
    fn load_only_script_has_no_saves() {
        let e = compile("load model = \"m.json\"", true).unwrap();
        assert!(e.saves.is_empty());
        assert_eq!(e.model_path.as_deref(), Some("m.json"));
    }

    #[test]
    fn xor_is_a_builtin() {
        let e = compile("save \"x\" symmetricDifference(ap(\"p\"), ap(\"q\"))", true).unwrap();
        assert!(matches!(e.arena.node(e.saves[0].1), Node::Xor(..)));
    }
}
