use crate::error::{Error, Result};
use crate::machine::{FsaRule, Kind, StateMachine};
use crate::symbol::{gen_symbol, State};

/// A non-final state all of whose rules loop back to it: no final state is
/// reachable from it.
fn is_dead(m: &StateMachine, q: &State) -> bool {
    !m.is_final(q)
        && m.fsa_rules()
            .iter()
            .filter(|r| &r.from == q)
            .all(|r| &r.to == q)
}

/// Builds an ndfa for the reversal of a dfa's language. A fresh start
/// ε-moves to each old final, every rule is turned around, and the old start
/// becomes the only final. Dead states and their rules are dropped.
pub fn reverse_fsa(m: &StateMachine) -> Result<StateMachine> {
    if m.kind() != Kind::Dfa {
        return Err(Error::KindMismatch(Kind::Dfa.name(), m.kind().name()));
    }
    let start = gen_symbol("S", m.states());
    let dead: Vec<&State> = m
        .states()
        .iter()
        .filter(|q| *q != m.start() && is_dead(m, q))
        .collect();
    let mut states = vec![start.clone()];
    states.extend(m.states().iter().filter(|q| !dead.contains(q)).cloned());
    let mut rules: Vec<FsaRule> = m
        .finals()
        .iter()
        .map(|f| FsaRule {
            from: start.clone(),
            read: None,
            to: f.clone(),
        })
        .collect();
    rules.extend(
        m.fsa_rules()
            .iter()
            .filter(|r| !dead.contains(&&r.from) && !dead.contains(&&r.to))
            .map(|r| FsaRule {
                from: r.to.clone(),
                read: r.read.clone(),
                to: r.from.clone(),
            }),
    );
    StateMachine::ndfa(
        states,
        m.alphabet().clone(),
        start,
        [m.start().clone()],
        rules,
    )
}
