//! Reader for the equation-system file format.
//!
//! ```text
//! ops: g:2 f:1 a:0
//! F0 = F(a)
//! F(x0) = g(x0, F(f(x0)))
//! ```
//!
//! Equations are separated by newlines or `;`. The first equation is principal
//! and takes no parameters; parameters are named `x0, x1, …` in order.

use std::collections::HashMap;

use super::{Equation, Label, RankedAlphabet, Tree, TreeError, TreeSystem};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Open,
    Close,
    Comma,
}

fn lex(text: &str, line: usize) -> Result<Vec<Tok>, TreeError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' => {
                chars.next();
                out.push(Tok::Open);
            }
            ')' => {
                chars.next();
                out.push(Tok::Close);
            }
            ',' => {
                chars.next();
                out.push(Tok::Comma);
            }
            c if c.is_alphanumeric() || c == '_' || c == '\'' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_alphanumeric() || c == '_' || c == '\'' {
                        s.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Ident(s));
            }
            other => {
                return Err(TreeError::Syntax { line, message: format!("unexpected character '{other}'") })
            }
        }
    }
    Ok(out)
}

fn var_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('x')?;
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

struct Head {
    name: String,
    params: usize,
    line: usize,
    body: Vec<Tok>,
}

pub(super) fn parse_system(text: &str) -> Result<TreeSystem, TreeError> {
    let mut alphabet: Option<RankedAlphabet> = None;
    let mut heads: Vec<Head> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        for piece in content.split(';') {
            let piece = piece.trim();
            if piece.is_empty() {
                continue;
            }
            if let Some(rest) = piece.strip_prefix("ops:") {
                let mut symbols = Vec::new();
                for decl in rest.split_whitespace() {
                    let (name, arity) = decl
                        .rsplit_once(':')
                        .and_then(|(n, a)| Some((n, a.parse::<usize>().ok()?)))
                        .ok_or_else(|| TreeError::Syntax { line, message: format!("bad declaration '{decl}'") })?;
                    symbols.push((name.to_string(), arity));
                }
                alphabet = Some(RankedAlphabet::new(symbols).map_err(|e| match e {
                    TreeError::Syntax { message, .. } => TreeError::Syntax { line, message },
                    e => e,
                })?);
                continue;
            }
            let (lhs, rhs) = piece
                .split_once('=')
                .ok_or_else(|| TreeError::Syntax { line, message: "expected 'F(x0, …) = term'".into() })?;
            let lhs = lex(lhs, line)?;
            let Some(Tok::Ident(name)) = lhs.first() else {
                return Err(TreeError::Syntax { line, message: "missing equation name".into() });
            };
            let mut params = 0;
            if lhs.len() > 1 {
                if lhs[1] != Tok::Open || lhs.last() != Some(&Tok::Close) {
                    return Err(TreeError::Syntax { line, message: "bad parameter list".into() });
                }
                let inner = &lhs[2..lhs.len() - 1];
                for (k, chunk) in inner.split(|t| *t == Tok::Comma).enumerate() {
                    if inner.is_empty() {
                        break;
                    }
                    match chunk {
                        [Tok::Ident(p)] if var_index(p) == Some(k) => params += 1,
                        _ => {
                            return Err(TreeError::Syntax {
                                line,
                                message: format!("parameter {k} of '{name}' must be named x{k}"),
                            })
                        }
                    }
                }
            }
            heads.push(Head { name: name.clone(), params, line, body: lex(rhs, line)? });
        }
    }
    let alphabet = alphabet.ok_or(TreeError::Syntax { line: 0, message: "missing 'ops:' line".into() })?;
    if heads.is_empty() {
        return Err(TreeError::Syntax { line: 0, message: "no equations".into() });
    }
    let mut funs: HashMap<String, (usize, usize)> = HashMap::new();
    for (i, h) in heads.iter().enumerate() {
        if alphabet.index_of(&h.name).is_some() || funs.insert(h.name.clone(), (i, h.params)).is_some() {
            return Err(TreeError::Duplicate(h.name.clone()));
        }
        if var_index(&h.name).is_some() {
            return Err(TreeError::Syntax { line: h.line, message: format!("'{}' is a variable name", h.name) });
        }
    }
    if heads[0].params != 0 {
        return Err(TreeError::PrincipalArity { name: heads[0].name.clone(), arity: heads[0].params });
    }
    let mut equations = Vec::new();
    for h in &heads {
        let mut pos = 0;
        let ctx = Ctx { alphabet: &alphabet, funs: &funs, params: h.params, line: h.line };
        let body = ctx.term(&h.body, &mut pos)?;
        if pos != h.body.len() {
            return Err(TreeError::Syntax { line: h.line, message: "trailing input after term".into() });
        }
        equations.push(Equation { name: h.name.clone(), arity: h.params, body });
    }
    TreeSystem::new(alphabet, equations)
}

struct Ctx<'a> {
    alphabet: &'a RankedAlphabet,
    funs: &'a HashMap<String, (usize, usize)>,
    params: usize,
    line: usize,
}

impl Ctx<'_> {
    fn term(&self, toks: &[Tok], pos: &mut usize) -> Result<Tree, TreeError> {
        let syntax = |m: &str| TreeError::Syntax { line: self.line, message: m.to_string() };
        let Some(Tok::Ident(name)) = toks.get(*pos) else {
            return Err(syntax("expected a symbol"));
        };
        *pos += 1;
        let mut args = Vec::new();
        if toks.get(*pos) == Some(&Tok::Open) {
            *pos += 1;
            if toks.get(*pos) == Some(&Tok::Close) {
                *pos += 1;
            } else {
                loop {
                    args.push(self.term(toks, pos)?);
                    match toks.get(*pos) {
                        Some(Tok::Comma) => *pos += 1,
                        Some(Tok::Close) => {
                            *pos += 1;
                            break;
                        }
                        _ => return Err(syntax("expected ',' or ')'")),
                    }
                }
            }
        }
        let (label, arity) = if let Some(j) = var_index(name) {
            if j >= self.params {
                return Err(TreeError::VariableOutOfRange { name: name.clone(), params: self.params });
            }
            (Label::Var(j), 0)
        } else if let Some(s) = self.alphabet.index_of(name) {
            (Label::Sym(s), self.alphabet.arity(s))
        } else if let Some(&(f, n)) = self.funs.get(name) {
            (Label::Fun(f), n)
        } else {
            return Err(TreeError::UndeclaredSymbol(name.clone()));
        };
        if args.len() != arity {
            return Err(TreeError::ArityMismatch { name: name.clone(), expected: arity, found: args.len() });
        }
        Ok(Tree::new(label, args))
    }
}
