//! Regular, context-free and context-sensitive grammars.

mod derive;

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::symbol::{gen_symbol_str, Alphabet, Symbol, EMP};

pub use derive::{min_yields, DerivBudget, DerivOutcome, Derivation};

/// Token separating the two sides of a production in text form.
pub const ARROW: &str = "->";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GrammarKind {
    Rg,
    Cfg,
    Csg,
}

impl GrammarKind {
    pub fn name(self) -> &'static str {
        match self {
            GrammarKind::Rg => "rg",
            GrammarKind::Cfg => "cfg",
            GrammarKind::Csg => "csg",
        }
    }
}

impl fmt::Display for GrammarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `lhs -> rhs`; an empty rhs is ε.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Production {
    pub lhs: Vec<Symbol>,
    pub rhs: Vec<Symbol>,
}

impl Production {
    /// Builds from whitespace-separated sides; `ε` (or nothing) on the right is the empty string.
    pub fn parse(lhs: &str, rhs: &str) -> Self {
        let side = |s: &str| -> Vec<Symbol> {
            s.split_whitespace()
                .map(Symbol::new)
                .filter(|s| !s.is_empty_marker())
                .collect()
        };
        Production {
            lhs: side(lhs),
            rhs: side(rhs),
        }
    }

    pub fn new(lhs: Vec<Symbol>, rhs: Vec<Symbol>) -> Self {
        Production { lhs, rhs }
    }
}

impl fmt::Display for Production {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |v: &[Symbol]| -> String {
            if v.is_empty() {
                EMP.to_owned()
            } else {
                v.iter().map(Symbol::as_str).collect::<Vec<_>>().join(" ")
            }
        };
        write!(f, "{} {ARROW} {}", side(&self.lhs), side(&self.rhs))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grammar {
    kind: GrammarKind,
    nonterminals: Vec<Symbol>,
    sigma: Alphabet,
    rules: Vec<Production>,
    start: Symbol,
}

impl Grammar {
    pub fn rg<V, R>(v: V, sigma: Alphabet, rules: R, start: impl Into<Symbol>) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<Symbol>,
        R: IntoIterator<Item = Production>,
    {
        Self::build(GrammarKind::Rg, v, sigma, rules, start.into())
    }

    pub fn cfg<V, R>(v: V, sigma: Alphabet, rules: R, start: impl Into<Symbol>) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<Symbol>,
        R: IntoIterator<Item = Production>,
    {
        Self::build(GrammarKind::Cfg, v, sigma, rules, start.into())
    }

    pub fn csg<V, R>(v: V, sigma: Alphabet, rules: R, start: impl Into<Symbol>) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<Symbol>,
        R: IntoIterator<Item = Production>,
    {
        Self::build(GrammarKind::Csg, v, sigma, rules, start.into())
    }

    /// `v` lists every symbol, terminals included; the nonterminals are `v − sigma`.
    pub fn new<V, R>(
        kind: GrammarKind,
        v: V,
        sigma: Alphabet,
        rules: R,
        start: impl Into<Symbol>,
    ) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<Symbol>,
        R: IntoIterator<Item = Production>,
    {
        Self::build(kind, v, sigma, rules, start.into())
    }

    fn build<V, R>(
        kind: GrammarKind,
        v: V,
        sigma: Alphabet,
        rules: R,
        start: Symbol,
    ) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<Symbol>,
        R: IntoIterator<Item = Production>,
    {
        let mut all: Vec<Symbol> = vec![];
        for s in v {
            let s = s.into();
            s.validate()?;
            if s.is_empty_marker() || s.is_blank() || s == ARROW {
                return Err(Error::ReservedSymbol(s.to_string()));
            }
            if !all.contains(&s) {
                all.push(s);
            }
        }
        if let Some(t) = sigma.iter().find(|t| !all.contains(t)) {
            return Err(Error::UnknownComponent(format!("terminal {t} is not in V")));
        }
        let nonterminals: Vec<Symbol> = all.into_iter().filter(|s| !sigma.contains(s)).collect();
        if sigma.contains(&start) {
            return Err(Error::TerminalStart(start.to_string()));
        }
        if !nonterminals.contains(&start) {
            return Err(Error::UnknownComponent(format!(
                "start {start} is not in V"
            )));
        }
        let mut seen = HashSet::new();
        let rules: Vec<Production> = rules
            .into_iter()
            .filter(|p| seen.insert(p.clone()))
            .collect();
        let g = Grammar {
            kind,
            nonterminals,
            sigma,
            rules,
            start,
        };
        for p in &g.rules {
            g.check_production(p)?;
        }
        Ok(g)
    }

    fn check_production(&self, p: &Production) -> Result<()> {
        for s in p.lhs.iter().chain(&p.rhs) {
            if !self.is_terminal(s) && !self.is_nonterminal(s) {
                return Err(Error::UnknownComponent(format!("symbol {s} in {p}")));
            }
        }
        let malformed = |detail: &str| Error::MalformedProduction {
            kind: self.kind.name(),
            detail: format!("{p}: {detail}"),
        };
        let single_nt_lhs = p.lhs.len() == 1 && self.is_nonterminal(&p.lhs[0]);
        match self.kind {
            GrammarKind::Rg => {
                if !single_nt_lhs {
                    return Err(malformed("left side must be one nonterminal"));
                }
                let ok = match p.rhs.as_slice() {
                    [] => p.lhs[0] == self.start,
                    [a] => self.is_terminal(a),
                    [a, b] => self.is_terminal(a) && self.is_nonterminal(b),
                    _ => false,
                };
                if !ok {
                    return Err(malformed(
                        "right side must be a, aB, or ε (the latter only for the start)",
                    ));
                }
            }
            GrammarKind::Cfg => {
                if !single_nt_lhs {
                    return Err(malformed("left side must be one nonterminal"));
                }
            }
            GrammarKind::Csg => {
                if !p.lhs.iter().any(|s| self.is_nonterminal(s)) {
                    return Err(malformed("left side must contain a nonterminal"));
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> GrammarKind {
        self.kind
    }

    pub fn nonterminals(&self) -> &[Symbol] {
        &self.nonterminals
    }

    pub fn terminals(&self) -> &Alphabet {
        &self.sigma
    }

    pub fn productions(&self) -> &[Production] {
        &self.rules
    }

    pub fn start(&self) -> &Symbol {
        &self.start
    }

    /// All of V: nonterminals then terminals.
    pub fn symbols(&self) -> Vec<Symbol> {
        self.nonterminals
            .iter()
            .chain(self.sigma.iter())
            .cloned()
            .collect()
    }

    pub fn is_terminal(&self, s: &Symbol) -> bool {
        self.sigma.contains(s)
    }

    pub fn is_nonterminal(&self, s: &Symbol) -> bool {
        self.nonterminals.contains(s)
    }

    /// Renames every nonterminal to a fresh token that avoids `avoid` and the
    /// terminals. A name is kept when it is already free.
    pub fn rename_nts<'a, I>(&self, avoid: I) -> Grammar
    where
        I: IntoIterator<Item = &'a Symbol>,
    {
        let mut taken: HashSet<String> = avoid.into_iter().map(|s| s.to_string()).collect();
        taken.extend(self.sigma.iter().map(|s| s.to_string()));
        let mut map: HashMap<Symbol, Symbol> = HashMap::new();
        for n in &self.nonterminals {
            let fresh = gen_symbol_str(n.as_str(), |c| taken.contains(c));
            taken.insert(fresh.to_string());
            map.insert(n.clone(), fresh);
        }
        self.map_nonterminals(|s| map.get(s).cloned().unwrap_or_else(|| s.clone()))
    }

    fn map_nonterminals(&self, f: impl Fn(&Symbol) -> Symbol) -> Grammar {
        let side = |v: &[Symbol]| v.iter().map(&f).collect::<Vec<_>>();
        Grammar {
            kind: self.kind,
            nonterminals: side(&self.nonterminals),
            sigma: self.sigma.clone(),
            rules: self
                .rules
                .iter()
                .map(|p| Production::new(side(&p.lhs), side(&p.rhs)))
                .collect(),
            start: f(&self.start),
        }
    }
}
