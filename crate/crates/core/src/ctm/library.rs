//! Primitive building-block tms for combined machines.
//!
//! Each machine starts in `s`, halts in `h`, and works over a caller-given
//! alphabet plus the blank. Multi-cell movers first move one cell, then keep
//! going until they sit on a blank.

use crate::error::Result;
use crate::machine::{StateMachine, TmRule};
use crate::symbol::{Alphabet, Symbol, BLANK, MOVE_LEFT, MOVE_RIGHT};

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 5] = ["RI", "LI", "RB", "LB", "BL"];

fn tape_symbols(sigma: &Alphabet) -> impl Iterator<Item = Symbol> + '_ {
    sigma
        .iter()
        .cloned()
        .chain(std::iter::once(Symbol::blank()))
}

fn one_step(sigma: &Alphabet, action: &str) -> Result<StateMachine> {
    StateMachine::tm(
        ["s", "h"],
        sigma.clone(),
        tape_symbols(sigma).map(|x| TmRule::new("s", x, "h", action)),
        "s",
        ["h"],
    )
}

fn to_blank(sigma: &Alphabet, dir: &str) -> Result<StateMachine> {
    let mut rules: Vec<TmRule> = tape_symbols(sigma)
        .map(|x| TmRule::new("s", x, "m", dir))
        .collect();
    rules.extend(sigma.iter().map(|x| TmRule::new("m", x, "m", dir)));
    rules.push(TmRule::new("m", BLANK, "h", BLANK));
    StateMachine::tm(["s", "m", "h"], sigma.clone(), rules, "s", ["h"])
}

/// RI: moves the head one cell right.
pub fn move_right(sigma: &Alphabet) -> Result<StateMachine> {
    one_step(sigma, MOVE_RIGHT)
}

/// LI: moves the head one cell left.
pub fn move_left(sigma: &Alphabet) -> Result<StateMachine> {
    one_step(sigma, MOVE_LEFT)
}

/// Writes `symbol` (a member of `sigma` or the blank) under the head.
pub fn write(sigma: &Alphabet, symbol: &Symbol) -> Result<StateMachine> {
    one_step(sigma, symbol.as_str())
}

/// BL: writes a blank.
pub fn write_blank(sigma: &Alphabet) -> Result<StateMachine> {
    one_step(sigma, BLANK)
}

/// RB: moves to the first blank right of the head.
pub fn right_to_blank(sigma: &Alphabet) -> Result<StateMachine> {
    to_blank(sigma, MOVE_RIGHT)
}

/// LB: moves to the first blank left of the head.
pub fn left_to_blank(sigma: &Alphabet) -> Result<StateMachine> {
    to_blank(sigma, MOVE_LEFT)
}

/// Looks up one of [`BUILTIN_NAMES`].
pub fn builtin(name: &str, sigma: &Alphabet) -> Option<Result<StateMachine>> {
    Some(match name {
        "RI" => move_right(sigma),
        "LI" => move_left(sigma),
        "RB" => right_to_blank(sigma),
        "LB" => left_to_blank(sigma),
        "BL" => write_blank(sigma),
        _ => return None,
    })
}
