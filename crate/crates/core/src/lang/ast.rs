use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Surface expressions. Both the operator forms (`!`, `&`, `|`) and the
/// function forms (`not`, `and`, `or`) parse to the same variants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Ap(String),
    Tt,
    Ff,
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Xor(Box<Expr>, Box<Expr>),
    Through(Box<Expr>, Box<Expr>),
    CvNear(Box<Expr>),
    /// A parameter, a constant definition or a macro call.
    Ref { name: String, args: Vec<Expr> },
}

impl Expr {
    pub fn name(name: &str) -> Expr {
        Expr::Ref {
            name: name.to_string(),
            args: Vec::new(),
        }
    }

    /// Calls `f` on every `Ref` in the expression.
    pub fn visit_refs<'a>(&'a self, f: &mut impl FnMut(&'a str, usize)) {
        match self {
            Expr::Ap(_) | Expr::Tt | Expr::Ff => {}
            Expr::Not(a) | Expr::CvNear(a) => a.visit_refs(f),
            Expr::And(a, b) | Expr::Or(a, b) | Expr::Xor(a, b) | Expr::Through(a, b) => {
                a.visit_refs(f);
                b.visit_refs(f);
            }
            Expr::Ref { name, args } => {
                f(name, args.len());
                for a in args {
                    a.visit_refs(f);
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MacroDef {
    pub name: String,
    pub params: Vec<String>,
    pub body: Expr,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Save {
    pub label: String,
    pub expr: Expr,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Script {
    pub model_path: Option<String>,
    pub definitions: Vec<MacroDef>,
    pub saves: Vec<Save>,
}

impl Script {
    pub fn definition(&self, name: &str) -> Option<&MacroDef> {
        self.definitions.iter().find(|d| d.name == name)
    }
}

// Binding strength used by the printer: or < and < prefix < atomic.
fn level(e: &Expr) -> u8 {
    match e {
        Expr::Or(..) => 0,
        Expr::And(..) => 1,
        Expr::Not(..) => 2,
        _ => 3,
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if level(e) < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Ap(name) => write!(f, "ap({name:?})"),
            Expr::Tt => f.write_str("tt"),
            Expr::Ff => f.write_str("ff"),
            Expr::Not(a) => {
                f.write_str("!")?;
                write_operand(f, a, 2)
            }
            // left-associative: the right operand of the same operator needs parens
            Expr::And(a, b) => {
                write_operand(f, a, 1)?;
                f.write_str(" & ")?;
                write_operand(f, b, 2)
            }
            Expr::Or(a, b) => {
                write_operand(f, a, 0)?;
                f.write_str(" | ")?;
                write_operand(f, b, 1)
            }
            Expr::Xor(a, b) => write!(f, "xor({a}, {b})"),
            Expr::Through(a, b) => write!(f, "through({a}, {b})"),
            Expr::CvNear(a) => write!(f, "cvnear({a})"),
            Expr::Ref { name, args } => {
                f.write_str(name)?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{a}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(path) = &self.model_path {
            writeln!(f, "load model = {path:?}")?;
        }
        for d in &self.definitions {
            write!(f, "let {}", d.name)?;
            if !d.params.is_empty() {
                write!(f, "({})", d.params.join(", "))?;
            }
            writeln!(f, " = {}", d.body)?;
        }
        for s in &self.saves {
            writeln!(f, "save {:?} {}", s.label, s.expr)?;
        }
        Ok(())
    }
}
