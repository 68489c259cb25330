//! A small s-expression reader with source positions.
//!
//! Atoms are runs of characters other than whitespace, parentheses, `"` and
//! `;`. Strings are double-quoted with `\"` and `\\` escapes. A `;` starts a
//! comment that runs to the end of the line.

use std::fmt;

use crate::error::{Error, Result};

/// 1-based line and column (in characters).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexpr {
    Atom(String, Pos),
    Str(String, Pos),
    List(Vec<Sexpr>, Pos),
}

impl Sexpr {
    pub fn pos(&self) -> Pos {
        match self {
            Sexpr::Atom(_, p) | Sexpr::Str(_, p) | Sexpr::List(_, p) => *p,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Sexpr::Atom(a, _) => Some(a),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexpr]> {
        match self {
            Sexpr::List(v, _) => Some(v),
            _ => None,
        }
    }

    /// A syntax error located at this expression.
    pub fn error(&self, message: impl Into<String>) -> Error {
        let p = self.pos();
        Error::Syntax {
            line: p.line,
            column: p.column,
            message: message.into(),
        }
    }

    /// Attaches this expression's position to an error from elsewhere.
    pub fn locate(&self, e: Error) -> Error {
        match e {
            e @ (Error::Syntax { .. } | Error::At { .. }) => e,
            e => {
                let p = self.pos();
                Error::At {
                    line: p.line,
                    column: p.column,
                    source: Box::new(e),
                }
            }
        }
    }
}

impl fmt::Display for Sexpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexpr::Atom(a, _) => f.write_str(a),
            Sexpr::Str(s, _) => {
                f.write_str("\"")?;
                for c in s.chars() {
                    match c {
                        '"' => f.write_str("\\\"")?,
                        '\\' => f.write_str("\\\\")?,
                        c => write!(f, "{c}")?,
                    }
                }
                f.write_str("\"")
            }
            Sexpr::List(v, _) => {
                f.write_str("(")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
        }
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Reader<'_> {
    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            column: self.column,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_blank(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == ';' {
                while self.chars.peek().is_some_and(|&c| c != '\n') {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn err(&self, pos: Pos, message: &str) -> Error {
        Error::Syntax {
            line: pos.line,
            column: pos.column,
            message: message.into(),
        }
    }

    fn read(&mut self) -> Result<Option<Sexpr>> {
        self.skip_blank();
        let pos = self.pos();
        let Some(&c) = self.chars.peek() else {
            return Ok(None);
        };
        match c {
            '(' => {
                self.bump();
                let mut items = vec![];
                loop {
                    self.skip_blank();
                    match self.chars.peek() {
                        None => return Err(self.err(pos, "unclosed (")),
                        Some(')') => {
                            self.bump();
                            return Ok(Some(Sexpr::List(items, pos)));
                        }
                        Some(_) => items.extend(self.read()?),
                    }
                }
            }
            ')' => Err(self.err(pos, "unexpected )")),
            '"' => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => return Err(self.err(pos, "unterminated string")),
                        Some('"') => return Ok(Some(Sexpr::Str(s, pos))),
                        Some('\\') => match self.bump() {
                            Some(c @ ('"' | '\\')) => s.push(c),
                            _ => return Err(self.err(self.pos(), "bad escape in string")),
                        },
                        Some(c) => s.push(c),
                    }
                }
            }
            _ => {
                let mut s = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || matches!(c, '(' | ')' | '"' | ';') {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                Ok(Some(Sexpr::Atom(s, pos)))
            }
        }
    }
}

/// Reads every top-level expression in `text`.
pub fn read_all(text: &str) -> Result<Vec<Sexpr>> {
    let mut r = Reader {
        chars: text.chars().peekable(),
        line: 1,
        column: 1,
    };
    let mut out = vec![];
    while let Some(x) = r.read()? {
        out.push(x);
    }
    Ok(out)
}

/// Reads exactly one expression.
pub fn read_one(text: &str) -> Result<Sexpr> {
    let mut all = read_all(text)?;
    match all.len() {
        1 => Ok(all.remove(0)),
        0 => Err(Error::Syntax {
            line: 1,
            column: 1,
            message: "empty document".into(),
        }),
        _ => Err(all[1].error("more than one top-level form")),
    }
}
