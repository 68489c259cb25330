//! Regular expressions over an alphabet.
//!
//! Rendering rules: concatenation is juxtaposition, union is `(x ∪ y)`,
//! star is a postfix `*` with parentheses around a concatenation or star
//! body, ε prints as `ε` and the empty language as `∅`. The parser reads the
//! same syntax back, also taking `U` for `∪` (unless `U` is an alphabet
//! symbol) and `@` for `ε`, and ignoring whitespace between tokens.

use std::fmt;

use crate::error::{Error, Result};
use crate::symbol::{Alphabet, Symbol, EMP, EMP_ASCII};

pub const UNION: &str = "∪";
pub const UNION_ASCII: &str = "U";
pub const NULL: &str = "∅";

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RegexpAst {
    /// ε
    Empty,
    /// ∅, the empty language. Only produced when converting a machine that accepts nothing.
    Null,
    Sym(Symbol),
    Union(Box<RegexpAst>, Box<RegexpAst>),
    Concat(Box<RegexpAst>, Box<RegexpAst>),
    Star(Box<RegexpAst>),
}

pub fn empty_regexp() -> RegexpAst {
    RegexpAst::Empty
}

pub fn null_regexp() -> RegexpAst {
    RegexpAst::Null
}

pub fn symbol_regexp(a: impl Into<Symbol>) -> RegexpAst {
    RegexpAst::Sym(a.into())
}

pub fn union_regexp(r1: RegexpAst, r2: RegexpAst) -> RegexpAst {
    RegexpAst::Union(Box::new(r1), Box::new(r2))
}

pub fn concat_regexp(r1: RegexpAst, r2: RegexpAst) -> RegexpAst {
    RegexpAst::Concat(Box::new(r1), Box::new(r2))
}

pub fn kleenestar_regexp(r: RegexpAst) -> RegexpAst {
    RegexpAst::Star(Box::new(r))
}

/// Left fold of [`concat_regexp`]; `None` for an empty list.
pub fn concat_all(parts: impl IntoIterator<Item = RegexpAst>) -> Option<RegexpAst> {
    parts.into_iter().reduce(concat_regexp)
}

/// Left fold of [`union_regexp`]; `None` for an empty list.
pub fn union_all(parts: impl IntoIterator<Item = RegexpAst>) -> Option<RegexpAst> {
    parts.into_iter().reduce(union_regexp)
}

impl RegexpAst {
    pub fn symbols(&self) -> Vec<&Symbol> {
        let mut out = vec![];
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols<'a>(&'a self, out: &mut Vec<&'a Symbol>) {
        match self {
            RegexpAst::Empty | RegexpAst::Null => {}
            RegexpAst::Sym(s) => out.push(s),
            RegexpAst::Union(a, b) | RegexpAst::Concat(a, b) => {
                a.collect_symbols(out);
                b.collect_symbols(out);
            }
            RegexpAst::Star(a) => a.collect_symbols(out),
        }
    }

    /// The printable form.
    pub fn printable(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for RegexpAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegexpAst::Empty => f.write_str(EMP),
            RegexpAst::Null => f.write_str(NULL),
            RegexpAst::Sym(s) => f.write_str(s.as_str()),
            RegexpAst::Union(a, b) => write!(f, "({a} {UNION} {b})"),
            RegexpAst::Concat(a, b) => write!(f, "{a}{b}"),
            RegexpAst::Star(a) => match **a {
                RegexpAst::Concat(..) | RegexpAst::Star(_) => write!(f, "({a})*"),
                _ => write!(f, "{a}*"),
            },
        }
    }
}

/// A regular expression paired with the alphabet its symbols come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Regexp {
    sigma: Alphabet,
    ast: RegexpAst,
}

impl Regexp {
    pub fn new(sigma: Alphabet, ast: RegexpAst) -> Result<Self> {
        if let Some(s) = ast.symbols().into_iter().find(|s| !sigma.contains(s)) {
            return Err(Error::UnknownComponent(format!("regexp symbol {s}")));
        }
        Ok(Regexp { sigma, ast })
    }

    /// Parses the printable syntax, matching the longest alphabet symbol at each point.
    pub fn parse(sigma: Alphabet, text: &str) -> Result<Self> {
        let ast = Parser::new(&sigma, text).parse()?;
        Regexp::new(sigma, ast)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.sigma
    }

    pub fn ast(&self) -> &RegexpAst {
        &self.ast
    }

    pub fn printable(&self) -> String {
        self.ast.printable()
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Open,
    Close,
    Star,
    Union,
    Eps,
    Null,
    Sym(Symbol),
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    err: Option<Error>,
}

fn syntax(col: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line: 1,
        column: col + 1,
        message: message.into(),
    }
}

impl Parser {
    fn new(sigma: &Alphabet, text: &str) -> Self {
        let mut by_len: Vec<&Symbol> = sigma.iter().collect();
        by_len.sort_by_key(|s| std::cmp::Reverse(s.as_str().len()));
        let u_is_symbol = sigma.contains(&Symbol::new(UNION_ASCII));
        let mut toks = vec![];
        let mut err = None;
        let mut rest = text;
        let mut col = 0usize;
        while let Some(c) = rest.chars().next() {
            let here = col;
            if c.is_whitespace() {
                rest = &rest[c.len_utf8()..];
                col += 1;
                continue;
            }
            let fixed = match c {
                '(' => Some(Tok::Open),
                ')' => Some(Tok::Close),
                '*' => Some(Tok::Star),
                '∪' => Some(Tok::Union),
                'ε' => Some(Tok::Eps),
                '∅' => Some(Tok::Null),
                '@' if EMP_ASCII == "@" => Some(Tok::Eps),
                'U' if !u_is_symbol => Some(Tok::Union),
                _ => None,
            };
            if let Some(t) = fixed {
                toks.push((t, here));
                rest = &rest[c.len_utf8()..];
                col += 1;
                continue;
            }
            match by_len.iter().find(|s| rest.starts_with(s.as_str())) {
                Some(s) => {
                    toks.push((Tok::Sym((*s).clone()), here));
                    rest = &rest[s.as_str().len()..];
                    col += s.as_str().chars().count();
                }
                None => {
                    err = Some(syntax(here, format!("no alphabet symbol starts at {c:?}")));
                    break;
                }
            }
        }
        debug_assert_eq!(EMP, "ε");
        Parser { toks, pos: 0, err }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(_, c)| *c)
            .unwrap_or_else(|| self.toks.last().map(|(_, c)| c + 1).unwrap_or(0))
    }

    fn parse(mut self) -> Result<RegexpAst> {
        if let Some(e) = self.err.take() {
            return Err(e);
        }
        let r = self.union()?;
        match self.peek() {
            None => Ok(r),
            Some(t) => Err(syntax(self.col(), format!("unexpected {t:?}"))),
        }
    }

    fn union(&mut self) -> Result<RegexpAst> {
        let mut r = self.concat()?;
        while self.peek() == Some(&Tok::Union) {
            self.pos += 1;
            let rhs = self.concat()?;
            r = union_regexp(r, rhs);
        }
        Ok(r)
    }

    fn concat(&mut self) -> Result<RegexpAst> {
        let mut parts = vec![];
        while matches!(
            self.peek(),
            Some(Tok::Open | Tok::Eps | Tok::Null | Tok::Sym(_))
        ) {
            parts.push(self.postfix()?);
        }
        concat_all(parts).ok_or_else(|| syntax(self.col(), "expected an expression"))
    }

    fn postfix(&mut self) -> Result<RegexpAst> {
        let mut r = self.atom()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            r = kleenestar_regexp(r);
        }
        Ok(r)
    }

    fn atom(&mut self) -> Result<RegexpAst> {
        let col = self.col();
        let Some((tok, _)) = self.toks.get(self.pos).cloned() else {
            return Err(syntax(col, "unexpected end of expression"));
        };
        self.pos += 1;
        match tok {
            Tok::Eps => Ok(empty_regexp()),
            Tok::Null => Ok(null_regexp()),
            Tok::Sym(s) => Ok(symbol_regexp(s)),
            Tok::Open => {
                let r = self.union()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(syntax(self.col(), "expected )"));
                }
                self.pos += 1;
                Ok(r)
            }
            other => Err(syntax(col, format!("unexpected {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    pub(crate) fn a_star_bab_star() -> RegexpAst {
        concat_all([
            kleenestar_regexp(symbol_regexp("a")),
            symbol_regexp("b"),
            symbol_regexp("a"),
            kleenestar_regexp(symbol_regexp("b")),
        ])
        .unwrap()
    }

    #[test]
    fn constructors() {
        assert_eq!(
            union_regexp(symbol_regexp("a"), empty_regexp()),
            RegexpAst::Union(
                Box::new(RegexpAst::Sym("a".into())),
                Box::new(RegexpAst::Empty)
            )
        );
        assert_eq!(
            kleenestar_regexp(symbol_regexp("a")),
            RegexpAst::Star(Box::new(RegexpAst::Sym("a".into())))
        );
    }

    #[test]
    fn rendering() {
        assert_eq!(symbol_regexp("a").printable(), "a");
        assert_eq!(a_star_bab_star().printable(), "a*bab*");
        assert_eq!(
            union_regexp(symbol_regexp("a"), empty_regexp()).printable(),
            "(a ∪ ε)"
        );
        assert_eq!(
            kleenestar_regexp(concat_regexp(symbol_regexp("a"), symbol_regexp("b"))).printable(),
            "(ab)*"
        );
        assert_eq!(
            kleenestar_regexp(union_regexp(symbol_regexp("a"), symbol_regexp("b"))).printable(),
            "(a ∪ b)*"
        );
        assert_eq!(
            kleenestar_regexp(kleenestar_regexp(symbol_regexp("a"))).printable(),
            "(a*)*"
        );
    }

    #[test]
    fn parse_examples() {
        let r = Regexp::parse(ab(), "(a ∪ ε)").unwrap();
        assert_eq!(r.ast(), &union_regexp(symbol_regexp("a"), empty_regexp()));
        let r = Regexp::parse(ab(), "a*bab*").unwrap();
        assert_eq!(r.ast(), &a_star_bab_star());
        let r = Regexp::parse(ab(), "(a U @)").unwrap();
        assert_eq!(r.ast(), &union_regexp(symbol_regexp("a"), empty_regexp()));
    }

    #[test]
    fn multi_character_symbols() {
        let sigma = Alphabet::new(["add1", "a", "sub1"]).unwrap();
        let r = Regexp::parse(sigma, "(add1 ∪ sub1)*a").unwrap();
        assert_eq!(r.printable(), "(add1 ∪ sub1)*a");
    }

    #[test]
    fn parse_errors_carry_columns() {
        let err = Regexp::parse(ab(), "a(b").unwrap_err();
        assert!(matches!(err, Error::Syntax { column: 4, .. }), "{err}");
        let err = Regexp::parse(ab(), "ac").unwrap_err();
        assert!(matches!(err, Error::Syntax { column: 2, .. }), "{err}");
        assert!(Regexp::parse(ab(), "").is_err());
        assert!(Regexp::parse(ab(), "()").is_err());
    }

    #[test]
    fn symbols_checked_against_alphabet() {
        assert!(Regexp::new(ab(), symbol_regexp("c")).is_err());
    }

    pub(crate) fn arb_ast() -> impl Strategy<Value = RegexpAst> {
        let leaf = prop_oneof![
            Just(RegexpAst::Empty),
            Just(RegexpAst::Sym("a".into())),
            Just(RegexpAst::Sym("b".into())),
        ];
        leaf.prop_recursive(4, 16, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(x, y)| union_regexp(x, y)),
                (inner.clone(), inner.clone()).prop_map(|(x, y)| concat_regexp(x, y)),
                inner.prop_map(kleenestar_regexp),
            ]
        })
    }

    proptest! {
        #[test]
        fn rendering_parses_back_to_same_rendering(ast in arb_ast()) {
            let text = ast.printable();
            let back = Regexp::parse(ab(), &text).unwrap();
            prop_assert_eq!(back.printable(), text.clone());
            // No whitespace other than the separators around ∪.
            prop_assert!(!text.replace(" ∪ ", "").contains(char::is_whitespace));
        }
    }
}
