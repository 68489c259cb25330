//! State machines: dfa, ndfa, pda and tm.
//!
//! All four kinds share a state set, an input alphabet, a start state, a set
//! of final states, and a rule set. A pda also carries a stack alphabet.
//! Constructors validate everything up front; a [`StateMachine`] value is
//! always well formed.

mod run;

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::symbol::{Alphabet, State, Symbol, MOVE_LEFT, MOVE_RIGHT};

pub use run::{Limits, TmConfig, Trace, TraceStep, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Dfa,
    Ndfa,
    Pda,
    Tm,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Dfa => "dfa",
            Kind::Ndfa => "ndfa",
            Kind::Pda => "pda",
            Kind::Tm => "tm",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `(from read to)`; `read` is `None` for an ε-move (ndfa only).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FsaRule {
    pub from: State,
    pub read: Option<Symbol>,
    pub to: State,
}

impl FsaRule {
    pub fn new(from: impl Into<State>, read: impl Into<Symbol>, to: impl Into<State>) -> Self {
        let read = read.into();
        FsaRule {
            from: from.into(),
            read: if read.is_empty_marker() {
                None
            } else {
                Some(read)
            },
            to: to.into(),
        }
    }
}

/// `((from read pop) (to push))`. Stack sequences list the top first; an
/// empty sequence is ε.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PdaRule {
    pub from: State,
    pub read: Option<Symbol>,
    pub pop: Vec<Symbol>,
    pub to: State,
    pub push: Vec<Symbol>,
}

impl PdaRule {
    pub fn new<P, Q>(
        from: impl Into<State>,
        read: impl Into<Symbol>,
        pop: P,
        to: impl Into<State>,
        push: Q,
    ) -> Self
    where
        P: IntoIterator,
        P::Item: Into<Symbol>,
        Q: IntoIterator,
        Q::Item: Into<Symbol>,
    {
        let read = read.into();
        let seq = |it: Vec<Symbol>| -> Vec<Symbol> {
            it.into_iter().filter(|s| !s.is_empty_marker()).collect()
        };
        PdaRule {
            from: from.into(),
            read: if read.is_empty_marker() {
                None
            } else {
                Some(read)
            },
            pop: seq(pop.into_iter().map(Into::into).collect()),
            to: to.into(),
            push: seq(push.into_iter().map(Into::into).collect()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TmAction {
    /// Write a symbol of Σ or the blank.
    Write(Symbol),
    Left,
    Right,
}

impl TmAction {
    /// `L`, `R`, or a symbol to write.
    pub fn parse(token: impl Into<Symbol>) -> TmAction {
        let token = token.into();
        match token.as_str() {
            MOVE_LEFT => TmAction::Left,
            MOVE_RIGHT => TmAction::Right,
            _ => TmAction::Write(token),
        }
    }

    pub fn token(&self) -> &str {
        match self {
            TmAction::Write(s) => s.as_str(),
            TmAction::Left => MOVE_LEFT,
            TmAction::Right => MOVE_RIGHT,
        }
    }
}

/// `((from read) (to action))`; `read` may be the blank.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TmRule {
    pub from: State,
    pub read: Symbol,
    pub to: State,
    pub action: TmAction,
}

impl TmRule {
    pub fn new(
        from: impl Into<State>,
        read: impl Into<Symbol>,
        to: impl Into<State>,
        action: impl Into<Symbol>,
    ) -> Self {
        TmRule {
            from: from.into(),
            read: read.into(),
            to: to.into(),
            action: TmAction::parse(action),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rules {
    Fsa(Vec<FsaRule>),
    Pda(Vec<PdaRule>),
    Tm(Vec<TmRule>),
}

impl Rules {
    pub fn len(&self) -> usize {
        match self {
            Rules::Fsa(r) => r.len(),
            Rules::Pda(r) => r.len(),
            Rules::Tm(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateMachine {
    kind: Kind,
    states: Vec<State>,
    sigma: Alphabet,
    gamma: Option<Alphabet>,
    start: State,
    finals: Vec<State>,
    rules: Rules,
}

fn dedup<T: Clone + Eq + std::hash::Hash>(items: Vec<T>) -> Vec<T> {
    let mut seen = HashSet::new();
    items
        .into_iter()
        .filter(|x| seen.insert(x.clone()))
        .collect()
}

/// Shared validation of S, s and F.
fn check_designations(states: &[State], start: &State, finals: &[State]) -> Result<()> {
    if states.is_empty() {
        return Err(Error::BadDesignation("no states".into()));
    }
    for s in states {
        s.validate()?;
    }
    if !states.contains(start) {
        return Err(Error::BadDesignation(format!(
            "start {start} is not a state"
        )));
    }
    if let Some(f) = finals.iter().find(|f| !states.contains(f)) {
        return Err(Error::BadDesignation(format!("final {f} is not a state")));
    }
    Ok(())
}

fn known_state(states: &HashSet<&State>, s: &State) -> Result<()> {
    if states.contains(s) {
        Ok(())
    } else {
        Err(Error::UnknownComponent(format!("state {s}")))
    }
}

fn known_symbol(sigma: &Alphabet, s: &Symbol, what: &str) -> Result<()> {
    if sigma.contains(s) {
        Ok(())
    } else {
        Err(Error::UnknownComponent(format!("{what} {s}")))
    }
}

fn collect<I, T>(it: I) -> Vec<Symbol>
where
    I: IntoIterator<Item = T>,
    T: Into<Symbol>,
{
    dedup(it.into_iter().map(Into::into).collect())
}

impl StateMachine {
    /// Builds a dfa. The rules must form a total function S×Σ → S.
    pub fn dfa<S, F, R>(
        states: S,
        sigma: Alphabet,
        start: impl Into<State>,
        finals: F,
        rules: R,
    ) -> Result<Self>
    where
        S: IntoIterator,
        S::Item: Into<State>,
        F: IntoIterator,
        F::Item: Into<State>,
        R: IntoIterator<Item = FsaRule>,
    {
        let m = Self::fsa(
            Kind::Dfa,
            collect(states),
            sigma,
            start.into(),
            collect(finals),
            rules,
        )?;
        m.check_total_function()?;
        Ok(m)
    }

    pub fn ndfa<S, F, R>(
        states: S,
        sigma: Alphabet,
        start: impl Into<State>,
        finals: F,
        rules: R,
    ) -> Result<Self>
    where
        S: IntoIterator,
        S::Item: Into<State>,
        F: IntoIterator,
        F::Item: Into<State>,
        R: IntoIterator<Item = FsaRule>,
    {
        Self::fsa(
            Kind::Ndfa,
            collect(states),
            sigma,
            start.into(),
            collect(finals),
            rules,
        )
    }

    fn fsa(
        kind: Kind,
        states: Vec<State>,
        sigma: Alphabet,
        start: State,
        finals: Vec<State>,
        rules: impl IntoIterator<Item = FsaRule>,
    ) -> Result<Self> {
        check_designations(&states, &start, &finals)?;
        let rules = dedup(rules.into_iter().collect());
        let set: HashSet<&State> = states.iter().collect();
        for r in &rules {
            known_state(&set, &r.from)?;
            known_state(&set, &r.to)?;
            match &r.read {
                Some(a) => known_symbol(&sigma, a, "symbol")?,
                None if kind == Kind::Dfa => {
                    return Err(Error::UnknownComponent(format!(
                        "ε-rule ({} ε {}) in a dfa",
                        r.from, r.to
                    )))
                }
                None => {}
            }
        }
        Ok(StateMachine {
            kind,
            states,
            sigma,
            gamma: None,
            start,
            finals,
            rules: Rules::Fsa(rules),
        })
    }

    fn check_total_function(&self) -> Result<()> {
        let Rules::Fsa(rules) = &self.rules else {
            unreachable!()
        };
        let mut seen: HashMap<(&State, &Symbol), usize> = HashMap::new();
        for r in rules {
            let a = r.read.as_ref().expect("dfa rules read a symbol");
            let n = seen.entry((&r.from, a)).or_default();
            *n += 1;
            if *n > 1 {
                return Err(Error::NondeterministicDfa {
                    state: r.from.to_string(),
                    symbol: a.to_string(),
                });
            }
        }
        for q in &self.states {
            for a in &self.sigma {
                if !seen.contains_key(&(q, a)) {
                    return Err(Error::PartialDfa {
                        state: q.to_string(),
                        symbol: a.to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn pda<S, F, R>(
        states: S,
        sigma: Alphabet,
        gamma: Alphabet,
        start: impl Into<State>,
        finals: F,
        rules: R,
    ) -> Result<Self>
    where
        S: IntoIterator,
        S::Item: Into<State>,
        F: IntoIterator,
        F::Item: Into<State>,
        R: IntoIterator<Item = PdaRule>,
    {
        let states = collect(states);
        let start = start.into();
        let finals = collect(finals);
        check_designations(&states, &start, &finals)?;
        let rules = dedup(rules.into_iter().collect::<Vec<_>>());
        let set: HashSet<&State> = states.iter().collect();
        for r in &rules {
            known_state(&set, &r.from)?;
            known_state(&set, &r.to)?;
            if let Some(a) = &r.read {
                known_symbol(&sigma, a, "symbol")?;
            }
            for g in r.pop.iter().chain(&r.push) {
                known_symbol(&gamma, g, "stack symbol")?;
            }
        }
        Ok(StateMachine {
            kind: Kind::Pda,
            states,
            sigma,
            gamma: Some(gamma),
            start,
            finals,
            rules: Rules::Pda(rules),
        })
    }

    /// Builds a tm. Argument order follows the usual (S, Σ, δ, s, F).
    pub fn tm<S, F, R>(
        states: S,
        sigma: Alphabet,
        rules: R,
        start: impl Into<State>,
        finals: F,
    ) -> Result<Self>
    where
        S: IntoIterator,
        S::Item: Into<State>,
        F: IntoIterator,
        F::Item: Into<State>,
        R: IntoIterator<Item = TmRule>,
    {
        let states = collect(states);
        let start = start.into();
        let finals = collect(finals);
        check_designations(&states, &start, &finals)?;
        let rules = dedup(rules.into_iter().collect::<Vec<_>>());
        let set: HashSet<&State> = states.iter().collect();
        let tape_symbol = |s: &Symbol, what: &str| -> Result<()> {
            if s.is_blank() {
                Ok(())
            } else {
                known_symbol(&sigma, s, what)
            }
        };
        for r in &rules {
            known_state(&set, &r.from)?;
            known_state(&set, &r.to)?;
            tape_symbol(&r.read, "read symbol")?;
            if let TmAction::Write(w) = &r.action {
                tape_symbol(w, "write symbol")?;
            }
        }
        Ok(StateMachine {
            kind: Kind::Tm,
            states,
            sigma,
            gamma: None,
            start,
            finals,
            rules: Rules::Tm(rules),
        })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.sigma
    }

    pub fn stack_alphabet(&self) -> Result<&Alphabet> {
        self.gamma
            .as_ref()
            .ok_or(Error::NoStackAlphabet(self.kind.name()))
    }

    pub fn start(&self) -> &State {
        &self.start
    }

    pub fn finals(&self) -> &[State] {
        &self.finals
    }

    pub fn is_final(&self, q: &State) -> bool {
        self.finals.contains(q)
    }

    pub fn rules(&self) -> &Rules {
        &self.rules
    }

    /// Rules of a dfa/ndfa; empty for the other kinds.
    pub fn fsa_rules(&self) -> &[FsaRule] {
        match &self.rules {
            Rules::Fsa(r) => r,
            _ => &[],
        }
    }

    pub fn pda_rules(&self) -> &[PdaRule] {
        match &self.rules {
            Rules::Pda(r) => r,
            _ => &[],
        }
    }

    pub fn tm_rules(&self) -> &[TmRule] {
        match &self.rules {
            Rules::Tm(r) => r,
            _ => &[],
        }
    }

    pub fn is_fsa(&self) -> bool {
        matches!(self.kind, Kind::Dfa | Kind::Ndfa)
    }

    /// Re-labels a dfa as an ndfa; other kinds are returned unchanged.
    pub fn as_ndfa(&self) -> StateMachine {
        let mut m = self.clone();
        if m.kind == Kind::Dfa {
            m.kind = Kind::Ndfa;
        }
        m
    }

    /// Applies `f` to every state name. `f` must be injective.
    pub(crate) fn map_states(&self, f: impl Fn(&State) -> State) -> StateMachine {
        let rules = match &self.rules {
            Rules::Fsa(rs) => Rules::Fsa(
                rs.iter()
                    .map(|r| FsaRule {
                        from: f(&r.from),
                        read: r.read.clone(),
                        to: f(&r.to),
                    })
                    .collect(),
            ),
            Rules::Pda(rs) => Rules::Pda(
                rs.iter()
                    .map(|r| PdaRule {
                        from: f(&r.from),
                        to: f(&r.to),
                        ..r.clone()
                    })
                    .collect(),
            ),
            Rules::Tm(rs) => Rules::Tm(
                rs.iter()
                    .map(|r| TmRule {
                        from: f(&r.from),
                        to: f(&r.to),
                        ..r.clone()
                    })
                    .collect(),
            ),
        };
        StateMachine {
            kind: self.kind,
            states: self.states.iter().map(&f).collect(),
            sigma: self.sigma.clone(),
            gamma: self.gamma.clone(),
            start: f(&self.start),
            finals: self.finals.iter().map(&f).collect(),
            rules,
        }
    }

    /// Re-runs the constructor checks for this machine's kind.
    pub fn revalidate(&self) -> Result<StateMachine> {
        match (&self.rules, self.kind) {
            (Rules::Fsa(r), Kind::Dfa) => StateMachine::dfa(
                self.states.clone(),
                self.sigma.clone(),
                self.start.clone(),
                self.finals.clone(),
                r.clone(),
            ),
            (Rules::Fsa(r), _) => StateMachine::ndfa(
                self.states.clone(),
                self.sigma.clone(),
                self.start.clone(),
                self.finals.clone(),
                r.clone(),
            ),
            (Rules::Pda(r), _) => StateMachine::pda(
                self.states.clone(),
                self.sigma.clone(),
                self.stack_alphabet()?.clone(),
                self.start.clone(),
                self.finals.clone(),
                r.clone(),
            ),
            (Rules::Tm(r), _) => StateMachine::tm(
                self.states.clone(),
                self.sigma.clone(),
                r.clone(),
                self.start.clone(),
                self.finals.clone(),
            ),
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn rules(spec: &[(&str, &str, &str)]) -> Vec<FsaRule> {
        spec.iter()
            .map(|(f, b, t)| FsaRule::new(*f, *b, *t))
            .collect()
    }

    /// Starts and ends with an a.
    pub(crate) fn correct_dfa() -> StateMachine {
        StateMachine::dfa(
            ["q0", "q1", "q2", "ds"],
            ab(),
            "q0",
            ["q1"],
            rules(&[
                ("q0", "a", "q1"),
                ("q0", "b", "ds"),
                ("q1", "a", "q1"),
                ("q1", "b", "q2"),
                ("q2", "a", "q1"),
                ("q2", "b", "q2"),
                ("ds", "a", "ds"),
                ("ds", "b", "ds"),
            ]),
        )
        .unwrap()
    }

    #[test]
    fn dfa_constructor_accepts_listing() {
        let m = correct_dfa();
        assert_eq!(m.kind(), Kind::Dfa);
        assert_eq!(m.start(), &Symbol::new("q0"));
        assert_eq!(m.finals(), &[Symbol::new("q1")]);
        assert_eq!(m.rules().len(), 8);
        assert_eq!(m.states().len(), 4);
        assert_eq!(
            m.stack_alphabet().unwrap_err(),
            Error::NoStackAlphabet("dfa")
        );
    }

    #[test]
    fn dfa_rejects_duplicate_pair() {
        let err = StateMachine::dfa(
            ["q0", "q1", "q2"],
            ab(),
            "q0",
            ["q1"],
            rules(&[("q0", "a", "q1"), ("q0", "a", "q2"), ("q0", "b", "q0")]),
        )
        .unwrap_err();
        assert!(err.to_string().starts_with("nondeterministic dfa"), "{err}");
    }

    #[test]
    fn dfa_rejects_missing_pair() {
        let err =
            StateMachine::dfa(["q0"], ab(), "q0", ["q0"], rules(&[("q0", "a", "q0")])).unwrap_err();
        assert!(err.to_string().starts_with("partial dfa"), "{err}");
    }

    #[test]
    fn unknown_components_and_designations() {
        let err = StateMachine::ndfa(["q0"], ab(), "q0", ["q0"], rules(&[("q0", "c", "q0")]))
            .unwrap_err();
        assert!(err.to_string().starts_with("unknown component"));
        let err = StateMachine::ndfa(["q0"], ab(), "q0", ["q0"], rules(&[("q0", "a", "q9")]))
            .unwrap_err();
        assert!(err.to_string().starts_with("unknown component"));
        let err = StateMachine::ndfa(["q0"], ab(), "q1", ["q0"], vec![]).unwrap_err();
        assert!(err.to_string().starts_with("bad designation"));
        let err = StateMachine::ndfa(["q0"], ab(), "q0", ["q7"], vec![]).unwrap_err();
        assert!(err.to_string().starts_with("bad designation"));
    }

    #[test]
    fn dfa_rejects_epsilon_rule() {
        let err = StateMachine::dfa(
            ["q0"],
            ab(),
            "q0",
            ["q0"],
            rules(&[("q0", "a", "q0"), ("q0", "b", "q0"), ("q0", "ε", "q0")]),
        )
        .unwrap_err();
        assert!(matches!(err, Error::UnknownComponent(_)));
    }

    #[test]
    fn tm_accepts_right_mover_listing() {
        let sigma = Alphabet::new(["I", "add1", "sub1"]).unwrap();
        let m = StateMachine::tm(
            ["s", "h"],
            sigma,
            [
                TmRule::new("s", "I", "h", "R"),
                TmRule::new("s", "add1", "h", "R"),
                TmRule::new("s", "sub1", "h", "R"),
                TmRule::new("s", "_", "h", "R"),
            ],
            "s",
            ["h"],
        )
        .unwrap();
        assert_eq!(m.kind(), Kind::Tm);
        assert_eq!(m.tm_rules()[0].action, TmAction::Right);
    }

    #[test]
    fn tm_rejects_unknown_write() {
        let err = StateMachine::tm(
            ["s", "h"],
            ab(),
            [TmRule::new("s", "a", "h", "z")],
            "s",
            ["h"],
        )
        .unwrap_err();
        assert!(matches!(err, Error::UnknownComponent(_)));
    }

    #[test]
    fn pda_checks_stack_symbols() {
        let gamma = Alphabet::new(["x"]).unwrap();
        let ok = StateMachine::pda(
            ["p"],
            ab(),
            gamma.clone(),
            "p",
            ["p"],
            [PdaRule::new("p", "a", ["ε"], "p", ["x"])],
        )
        .unwrap();
        assert_eq!(ok.stack_alphabet().unwrap(), &gamma);
        assert!(ok.pda_rules()[0].pop.is_empty());
        let err = StateMachine::pda(
            ["p"],
            ab(),
            gamma,
            "p",
            ["p"],
            [PdaRule::new("p", "a", ["y"], "p", ["x"])],
        )
        .unwrap_err();
        assert!(matches!(err, Error::UnknownComponent(_)));
    }
}
