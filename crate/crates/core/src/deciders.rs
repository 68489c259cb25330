//! Decision procedures built on the library.

use crate::error::{Error, Result};
use crate::grammar::{Grammar, GrammarKind};
use crate::symbol::{Symbol, EMP};

/// Whether the language of a cfg or rg is empty.
///
/// Works backwards from the terminals: the accumulator starts as Σ ∪ {ε}
/// and each round adds every lhs not yet present whose rhs symbols are all
/// accumulated. The language is non-empty as soon as the start symbol is
/// added and empty once a round adds nothing.
pub fn cfg_is_empty(g: &Grammar) -> Result<bool> {
    if g.kind() == GrammarKind::Csg {
        return Err(Error::UnsupportedKind(format!(
            "emptiness of a {} is not decided",
            g.kind()
        )));
    }
    let mut accum: Vec<Symbol> = vec![Symbol::new(EMP)];
    accum.extend(g.terminals().iter().cloned());
    loop {
        if accum.contains(g.start()) {
            return Ok(false);
        }
        let new: Vec<Symbol> = g
            .productions()
            .iter()
            .filter(|p| {
                let lhs = &p.lhs[0];
                !accum.contains(lhs) && p.rhs.iter().all(|s| accum.contains(s))
            })
            .map(|p| p.lhs[0].clone())
            .collect();
        if new.is_empty() {
            return Ok(true);
        }
        accum.extend(new);
    }
}
