//! Tokens, alphabets, words, and fresh-name generation.
//!
//! Every state name, alphabet symbol, and grammar symbol is a [`Symbol`]: an
//! arbitrary whitespace-free token, so multi-character symbols such as
//! `add1` are first-class. Two tokens are reserved as sentinels and never
//! appear in a user alphabet: [`EMP`] (the empty string) and [`BLANK`] (a
//! blank tape cell). The TM move tokens `L` and `R` are reserved as well, and
//! `@` is accepted as an ASCII spelling of `ε`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// The empty-string sentinel.
pub const EMP: &str = "ε";
/// ASCII spelling of [`EMP`] accepted on input.
pub const EMP_ASCII: &str = "@";
/// The blank tape cell.
pub const BLANK: &str = "_";
/// Tape move actions.
pub const MOVE_LEFT: &str = "L";
pub const MOVE_RIGHT: &str = "R";

const RESERVED: [&str; 5] = [EMP, EMP_ASCII, BLANK, MOVE_LEFT, MOVE_RIGHT];

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

/// States are plain tokens.
pub type State = Symbol;

impl Symbol {
    pub fn new(token: impl AsRef<str>) -> Self {
        Symbol(Arc::from(token.as_ref()))
    }

    pub fn blank() -> Self {
        Symbol::new(BLANK)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_blank(&self) -> bool {
        &*self.0 == BLANK
    }

    pub fn is_empty_marker(&self) -> bool {
        &*self.0 == EMP || &*self.0 == EMP_ASCII
    }

    /// True for the sentinels and move tokens that may not be alphabet members.
    pub fn is_reserved(&self) -> bool {
        RESERVED.contains(&self.as_str())
    }

    /// Checks token syntax: non-empty, no whitespace, no parentheses, quotes or `;`.
    pub fn validate(&self) -> Result<()> {
        if is_valid_token(self.as_str()) {
            Ok(())
        } else {
            Err(Error::InvalidToken(self.as_str().to_owned()))
        }
    }
}

pub(crate) fn is_valid_token(s: &str) -> bool {
    !s.is_empty()
        && !s
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '(' | ')' | '"' | ';'))
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

impl From<String> for Symbol {
    fn from(s: String) -> Self {
        Symbol(Arc::from(s))
    }
}

impl From<&String> for Symbol {
    fn from(s: &String) -> Self {
        Symbol::new(s)
    }
}

impl From<&Symbol> for Symbol {
    fn from(s: &Symbol) -> Self {
        s.clone()
    }
}

impl AsRef<str> for Symbol {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl PartialEq<str> for Symbol {
    fn eq(&self, other: &str) -> bool {
        &*self.0 == other
    }
}

impl PartialEq<&str> for Symbol {
    fn eq(&self, other: &&str) -> bool {
        &*self.0 == *other
    }
}

/// Collects tokens into symbols.
pub fn symbols<I, T>(tokens: I) -> Vec<Symbol>
where
    I: IntoIterator<Item = T>,
    T: Into<Symbol>,
{
    tokens.into_iter().map(Into::into).collect()
}

/// A finite, ordered, duplicate-free, non-empty set of symbols.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet(Vec<Symbol>);

impl Alphabet {
    pub fn new<I, T>(tokens: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<Symbol>,
    {
        let syms = symbols(tokens);
        if syms.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        let mut seen = HashSet::new();
        for s in &syms {
            s.validate()?;
            if s.is_reserved() {
                return Err(Error::ReservedSymbol(s.to_string()));
            }
            if !seen.insert(s.clone()) {
                return Err(Error::DuplicateSymbol(s.to_string()));
            }
        }
        Ok(Alphabet(syms))
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Symbol> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, s: &Symbol) -> bool {
        self.0.contains(s)
    }

    /// Same members, ignoring order.
    pub fn same_set(&self, other: &Alphabet) -> bool {
        let a: BTreeSet<_> = self.0.iter().collect();
        let b: BTreeSet<_> = other.0.iter().collect();
        a == b
    }

    /// Order-preserving union: members of `self` first, then new members of `other`.
    pub fn union(&self, other: &Alphabet) -> Alphabet {
        let mut out = self.0.clone();
        for s in &other.0 {
            if !out.contains(s) {
                out.push(s.clone());
            }
        }
        Alphabet(out)
    }

    /// Checks every symbol of `word` is a member.
    pub fn check_word(&self, word: &Word) -> Result<()> {
        match word.iter().find(|s| !self.contains(s)) {
            Some(s) => Err(Error::WordNotOverAlphabet(s.to_string())),
            None => Ok(()),
        }
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

impl<'a> IntoIterator for &'a Alphabet {
    type Item = &'a Symbol;
    type IntoIter = std::slice::Iter<'a, Symbol>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// A finite sequence of symbols; the empty sequence is ε.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new<I, T>(tokens: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<Symbol>,
    {
        Word(symbols(tokens))
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Splits on whitespace; `ε`/`@` alone (or nothing) is the empty word.
    pub fn parse(text: &str) -> Self {
        Word(
            text.split_whitespace()
                .filter(|t| *t != EMP && *t != EMP_ASCII)
                .map(Symbol::new)
                .collect(),
        )
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Symbol> {
        self.0.iter()
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().cloned().collect())
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    /// `(a b b a)`, with `()` for ε.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(s.as_str())?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> IntoIterator for &'a Word {
    type Item = &'a Symbol;
    type IntoIter = std::slice::Iter<'a, Symbol>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Every word over `sigma` of length at most `max_len`, shortest first and
/// in alphabet order within a length.
pub fn words_up_to(sigma: &Alphabet, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                sigma.iter().map(move |a| {
                    let mut v = w.0.clone();
                    v.push(a.clone());
                    Word(v)
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Returns `base` if it is not taken, else `base` followed by the smallest
/// decimal suffix (starting at 0) that is free.
pub fn gen_symbol<'a, I>(base: &str, taken: I) -> Symbol
where
    I: IntoIterator<Item = &'a Symbol>,
{
    let taken: HashSet<&str> = taken.into_iter().map(Symbol::as_str).collect();
    gen_symbol_str(base, |s| taken.contains(s))
}

pub(crate) fn gen_symbol_str(base: &str, is_taken: impl Fn(&str) -> bool) -> Symbol {
    if !is_taken(base) {
        return Symbol::new(base);
    }
    (0u64..)
        .map(|i| format!("{base}{i}"))
        .find(|cand| !is_taken(cand))
        .map(Symbol::from)
        .expect("suffix space is unbounded")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn word_enumeration_counts() {
        let sigma = Alphabet::new(["a", "b"]).unwrap();
        let ws = words_up_to(&sigma, 8);
        assert_eq!(ws.len(), 511);
        assert_eq!(ws[0], Word::empty());
        assert_eq!(ws[2], Word::new(["b"]));
        assert_eq!(ws.iter().collect::<HashSet<_>>().len(), 511);
    }

    #[test]
    fn gen_symbol_examples() {
        let taken = symbols(["q0", "q1", "q2", "ds"]);
        assert_eq!(gen_symbol("S", &taken), "S");
        assert_eq!(gen_symbol("S", &symbols(["S"])), "S0");
        assert_eq!(gen_symbol("S", &symbols(["S", "S0", "S1"])), "S2");
    }

    #[test]
    fn gen_symbol_skips_gaps_in_order() {
        // S1 is free but S0 comes first.
        assert_eq!(gen_symbol("S", &symbols(["S", "S2"])), "S0");
    }

    #[test]
    fn alphabet_rejects_reserved_and_duplicates() {
        assert_eq!(
            Alphabet::new(["a", "_"]).unwrap_err(),
            Error::ReservedSymbol("_".into())
        );
        assert!(matches!(
            Alphabet::new(["ε"]),
            Err(Error::ReservedSymbol(_))
        ));
        assert!(matches!(
            Alphabet::new(["R"]),
            Err(Error::ReservedSymbol(_))
        ));
        assert_eq!(
            Alphabet::new(["a", "a"]).unwrap_err(),
            Error::DuplicateSymbol("a".into())
        );
        assert_eq!(
            Alphabet::new(Vec::<&str>::new()).unwrap_err(),
            Error::EmptyAlphabet
        );
        assert!(matches!(
            Alphabet::new(["a b"]),
            Err(Error::InvalidToken(_))
        ));
    }

    #[test]
    fn word_parse_and_display() {
        assert_eq!(Word::parse("a b  b a").to_string(), "(a b b a)");
        assert!(Word::parse("").is_empty());
        assert!(Word::parse("ε").is_empty());
        assert!(Word::parse("@").is_empty());
        assert_eq!(Word::empty().to_string(), "()");
    }

    proptest! {
        #[test]
        fn gen_symbol_is_fresh(base in "[a-zA-Z]{1,3}", taken in proptest::collection::vec("[a-zA-Z]{1,3}[0-9]{0,2}", 0..20)) {
            let mut taken = symbols(taken);
            // Force collisions with the base and some suffixes.
            taken.push(Symbol::new(&base));
            taken.push(Symbol::new(format!("{base}0")));
            let fresh = gen_symbol(&base, &taken);
            prop_assert!(!taken.contains(&fresh));
            prop_assert!(fresh.as_str().starts_with(base.as_str()));
        }
    }
}
