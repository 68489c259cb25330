//! Constructive transformations between machines, regular expressions and
//! grammars. Every machine produced here goes back through its kind's
//! constructor before it is returned.

mod closure;
mod convert;
mod determinize;
mod regex;
mod reverse;

pub use closure::{complement_sm, concat_sm, intersection_sm, kleenestar_sm, union_sm};
pub use convert::{grammar_to_sm, sm_to_grammar};
pub use determinize::{epsilon_closure, ndfa_to_dfa};
pub use regex::{fsa_to_regexp, regexp_ast_to_fsa, regexp_to_fsa};
pub use reverse::reverse_fsa;

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::machine::{Kind, StateMachine};
use crate::symbol::{gen_symbol_str, State, Symbol};

/// Renames every state so that none is in `avoid`. Names already free are
/// kept; the rest get a numeric suffix.
pub fn rename_states_sm<'a, I>(avoid: I, m: &StateMachine) -> Result<StateMachine>
where
    I: IntoIterator<Item = &'a Symbol>,
{
    let mut taken: HashSet<String> = avoid.into_iter().map(|s| s.to_string()).collect();
    let mut map: HashMap<State, State> = HashMap::new();
    for q in m.states() {
        let fresh = gen_symbol_str(q.as_str(), |c| taken.contains(c));
        taken.insert(fresh.to_string());
        map.insert(q.clone(), fresh);
    }
    m.map_states(|q| map[q].clone()).revalidate()
}

fn require_fsa(m: &StateMachine) -> Result<()> {
    match m.kind() {
        Kind::Dfa | Kind::Ndfa => Ok(()),
        Kind::Pda => Err(Error::NotClosedForPda),
        Kind::Tm => Err(Error::TmClosureUnsupported),
    }
}
