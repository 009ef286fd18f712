use std::collections::HashSet;

use super::ast::{Expr, MacroDef, Pos, Save, Script};
use super::LangError;

/// Names handled by the parser itself; they cannot be redefined.
pub const BUILTINS: [&str; 9] = ["ap", "tt", "ff", "not", "and", "or", "xor", "through", "cvnear"];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Str(String),
    LParen,
    RParen,
    Comma,
    Eq,
    Bang,
    Amp,
    Pipe,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Str(s) => format!("string {s:?}"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn syntax(pos: Pos, message: impl Into<String>) -> LangError {
    LangError::Syntax {
        line: pos.line,
        col: pos.col,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, Pos)>, LangError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);

    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        match c {
            c if c.is_whitespace() => {
                bump(&mut chars);
            }
            '/' => {
                bump(&mut chars);
                if chars.peek() != Some(&'/') {
                    return Err(syntax(pos, "unexpected `/` (comments start with `//`)"));
                }
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump(&mut chars);
                }
            }
            '"' => {
                bump(&mut chars);
                let mut s = String::new();
                loop {
                    match bump(&mut chars) {
                        None | Some('\n') => return Err(syntax(pos, "unterminated string")),
                        Some('"') => break,
                        Some('\\') => match bump(&mut chars) {
                            Some('n') => s.push('\n'),
                            Some('t') => s.push('\t'),
                            Some(c @ ('"' | '\\')) => s.push(c),
                            _ => return Err(syntax(pos, "bad escape in string")),
                        },
                        Some(c) => s.push(c),
                    }
                }
                out.push((Tok::Str(s), pos));
            }
            c if c.is_alphanumeric() || c == '_' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_alphanumeric() || c == '_' {
                        s.push(c);
                        bump(&mut chars);
                    } else {
                        break;
                    }
                }
                out.push((Tok::Ident(s), pos));
            }
            _ => {
                let tok = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    '=' => Tok::Eq,
                    '!' => Tok::Bang,
                    '&' => Tok::Amp,
                    '|' => Tok::Pipe,
                    other => return Err(syntax(pos, format!("unexpected character `{other}`"))),
                };
                bump(&mut chars);
                out.push((tok, pos));
            }
        }
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn next(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<Pos, LangError> {
        let (tok, pos) = self.next();
        if tok == want {
            Ok(pos)
        } else {
            Err(syntax(pos, format!("expected {}, found {}", want.describe(), tok.describe())))
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), LangError> {
        match self.next() {
            (Tok::Ident(s), pos) => Ok((s, pos)),
            (tok, pos) => Err(syntax(pos, format!("expected identifier, found {}", tok.describe()))),
        }
    }

    fn string(&mut self) -> Result<String, LangError> {
        match self.next() {
            (Tok::Str(s), _) => Ok(s),
            (tok, pos) => Err(syntax(pos, format!("expected string, found {}", tok.describe()))),
        }
    }

    fn script(&mut self) -> Result<Script, LangError> {
        let mut script = Script::default();
        let mut names = HashSet::new();
        loop {
            let (tok, pos) = self.next();
            match tok {
                Tok::Eof => break,
                Tok::Ident(kw) if kw == "load" => {
                    self.ident()?;
                    self.expect(Tok::Eq)?;
                    let path = self.string()?;
                    if script.model_path.is_some() {
                        return Err(LangError::DuplicateLoad { line: pos.line });
                    }
                    script.model_path = Some(path);
                }
                Tok::Ident(kw) if kw == "let" => {
                    let def = self.definition()?;
                    if !names.insert(def.name.clone()) {
                        return Err(LangError::DuplicateMacro {
                            name: def.name,
                            line: def.pos.line,
                        });
                    }
                    script.definitions.push(def);
                }
                Tok::Ident(kw) if kw == "save" => {
                    let label = self.string()?;
                    let expr = self.expr()?;
                    script.saves.push(Save { label, expr, pos });
                }
                other => {
                    return Err(LangError::UnknownStatement {
                        line: pos.line,
                        col: pos.col,
                        found: other.describe(),
                    })
                }
            }
        }
        Ok(script)
    }

    fn definition(&mut self) -> Result<MacroDef, LangError> {
        let (name, pos) = self.ident()?;
        if BUILTINS.contains(&name.as_str()) {
            return Err(syntax(pos, format!("`{name}` is a builtin and cannot be redefined")));
        }
        let mut params = Vec::new();
        if *self.peek() == Tok::LParen {
            self.next();
            loop {
                let (p, ppos) = self.ident()?;
                if params.contains(&p) {
                    return Err(syntax(ppos, format!("parameter `{p}` repeated")));
                }
                params.push(p);
                match self.next() {
                    (Tok::Comma, _) => continue,
                    (Tok::RParen, _) => break,
                    (tok, pos) => {
                        return Err(syntax(pos, format!("expected `,` or `)`, found {}", tok.describe())))
                    }
                }
            }
        }
        self.expect(Tok::Eq)?;
        let body = self.expr()?;
        Ok(MacroDef {
            name,
            params,
            body,
            pos,
        })
    }

    fn expr(&mut self) -> Result<Expr, LangError> {
        let mut lhs = self.conj()?;
        while *self.peek() == Tok::Pipe {
            self.next();
            let rhs = self.conj()?;
            lhs = Expr::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<Expr, LangError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.next();
            let rhs = self.unary()?;
            lhs = Expr::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, LangError> {
        if *self.peek() == Tok::Bang {
            self.next();
            return Ok(Expr::Not(Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn args(&mut self) -> Result<Vec<Expr>, LangError> {
        self.expect(Tok::LParen)?;
        let mut args = vec![self.expr()?];
        loop {
            match self.next() {
                (Tok::Comma, _) => args.push(self.expr()?),
                (Tok::RParen, _) => return Ok(args),
                (tok, pos) => {
                    return Err(syntax(pos, format!("expected `,` or `)`, found {}", tok.describe())))
                }
            }
        }
    }

    fn primary(&mut self) -> Result<Expr, LangError> {
        let (tok, pos) = self.next();
        match tok {
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "tt" => Ok(Expr::Tt),
                "ff" => Ok(Expr::Ff),
                "ap" => {
                    self.expect(Tok::LParen)?;
                    let atom = self.string()?;
                    self.expect(Tok::RParen)?;
                    Ok(Expr::Ap(atom))
                }
                "load" | "let" | "save" => Err(syntax(pos, format!("expected expression, found `{name}`"))),
                builtin @ ("not" | "cvnear" | "and" | "or" | "xor" | "through") => {
                    let mut args = self.args()?;
                    let want = if matches!(builtin, "not" | "cvnear") { 1 } else { 2 };
                    if args.len() != want {
                        return Err(syntax(
                            pos,
                            format!("`{builtin}` takes {want} argument(s), got {}", args.len()),
                        ));
                    }
                    let b = if want == 2 { args.pop().map(Box::new) } else { None };
                    let a = Box::new(args.pop().unwrap());
                    Ok(match builtin {
                        "not" => Expr::Not(a),
                        "cvnear" => Expr::CvNear(a),
                        "and" => Expr::And(a, b.unwrap()),
                        "or" => Expr::Or(a, b.unwrap()),
                        "xor" => Expr::Xor(a, b.unwrap()),
                        _ => Expr::Through(a, b.unwrap()),
                    })
                }
                _ => {
                    let args = if *self.peek() == Tok::LParen {
                        self.args()?
                    } else {
                        Vec::new()
                    };
                    Ok(Expr::Ref { name, args })
                }
            },
            other => Err(syntax(pos, format!("expected expression, found {}", other.describe()))),
        }
    }
}

/// Parses a query script: `load`, `let` and `save` statements with `//`
/// line comments. Statements may span several lines.
pub fn parse_script(text: &str) -> Result<Script, LangError> {
    let toks = tokenize(text)?;
    Parser { toks, at: 0 }.script()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: &str) -> Box<Expr> {
        Box::new(Expr::name(n))
    }

    #[test]
    fn eta_macro() {
        let s = parse_script("let eta(x,y) = x & through(x,y)").unwrap();
        let d = &s.definitions[0];
        assert_eq!(d.name, "eta");
        assert_eq!(d.params, vec!["x", "y"]);
        assert_eq!(d.body, Expr::And(r("x"), Box::new(Expr::Through(r("x"), r("y")))));
    }

    #[test]
    fn save_statement() {
        let s = parse_script("save \"green\" green").unwrap();
        assert_eq!(s.saves.len(), 1);
        assert_eq!(s.saves[0].label, "green");
        assert_eq!(s.saves[0].expr, Expr::name("green"));
    }

    #[test]
    fn unterminated_group_reports_line() {
        match parse_script("let a = (") {
            Err(LangError::Syntax { line, .. }) => assert_eq!(line, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn precedence_and_associativity() {
        let s = parse_script("let a = !x & y | z & w | v").unwrap();
        let not_x = Box::new(Expr::Not(r("x")));
        let expected = Expr::Or(
            Box::new(Expr::Or(
                Box::new(Expr::And(not_x, r("y"))),
                Box::new(Expr::And(r("z"), r("w"))),
            )),
            r("v"),
        );
        assert_eq!(s.definitions[0].body, expected);
    }

    #[test]
    fn multi_line_statements_and_comments() {
        let text = "// header\nlet c = through( corridor, white ) &\n   !through( corridor, green | black )\nsave \"c\" c // trailing\n";
        let s = parse_script(text).unwrap();
        assert_eq!(s.definitions.len(), 1);
        assert_eq!(s.saves[0].pos.line, 4);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_script("let a = tt\nlet a = ff"),
            Err(LangError::DuplicateMacro { line: 2, .. })
        ));
        assert!(matches!(parse_script("print a"), Err(LangError::UnknownStatement { .. })));
        assert!(matches!(parse_script("let through(x) = x"), Err(LangError::Syntax { .. })));
        assert!(matches!(parse_script("let a = through(x)"), Err(LangError::Syntax { .. })));
        assert!(matches!(
            parse_script("load model = \"a\"\nload model = \"b\""),
            Err(LangError::DuplicateLoad { line: 2 })
        ));
        match parse_script("let a = x &\n\n  & y") {
            Err(LangError::Syntax { line, col, .. }) => assert_eq!((line, col), (3, 3)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn load_path() {
        let s = parse_script("load model = \"polylogica/3DMAZE/3DmazeModel.json\"").unwrap();
        assert_eq!(s.model_path.as_deref(), Some("polylogica/3DMAZE/3DmazeModel.json"));
    }
}
