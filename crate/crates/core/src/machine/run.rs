//! Applicators: breadth-first search over machine configurations.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use super::{Kind, Rules, StateMachine, TmAction};
use crate::error::{Error, Result};
use crate::symbol::{State, Symbol, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Accept,
    Reject,
}

impl Verdict {
    pub fn is_accept(self) -> bool {
        self == Verdict::Accept
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Accept => "accept",
            Verdict::Reject => "reject",
        })
    }
}

/// Search bounds for the machines whose runs need not terminate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum tm steps along any path.
    pub tm_steps: usize,
    /// A pda path is cut after `pda_depth_factor * (|w| + 1) * |S|` moves.
    pub pda_depth_factor: usize,
    /// Hard cap on distinct pda configurations visited.
    pub pda_max_configs: usize,
    /// Maximum instructions dispatched by one combined-tm run.
    pub ctm_dispatches: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            tm_steps: 10_000,
            pda_depth_factor: 10,
            pda_max_configs: 1_000_000,
            ctm_dispatches: 10_000,
        }
    }
}

impl Limits {
    pub fn with_step_limit(steps: usize) -> Self {
        Limits {
            tm_steps: steps,
            ..Limits::default()
        }
    }
}

/// A tm configuration: state, head position and tape contents.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TmConfig {
    pub state: State,
    pub head: usize,
    pub tape: Vec<Symbol>,
}

impl TmConfig {
    /// Pads the tape with blanks until the head is on it.
    pub fn new(state: State, head: usize, mut tape: Vec<Symbol>) -> Self {
        while tape.len() <= head {
            tape.push(Symbol::blank());
        }
        TmConfig { state, head, tape }
    }

    pub fn read(&self) -> &Symbol {
        &self.tape[self.head]
    }
}

impl fmt::Display for TmConfig {
    /// `(h 7 (add1 _ I I I I I _))`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} {} {})",
            self.state,
            self.head,
            Word::from(self.tape.clone())
        )
    }
}

impl fmt::Debug for TmConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceStep {
    Fsa {
        state: State,
        remaining: Word,
    },
    /// `stack` lists the top first.
    Pda {
        state: State,
        remaining: Word,
        stack: Vec<Symbol>,
    },
    Tm(TmConfig),
}

impl TraceStep {
    pub fn state(&self) -> &State {
        match self {
            TraceStep::Fsa { state, .. } | TraceStep::Pda { state, .. } => state,
            TraceStep::Tm(c) => &c.state,
        }
    }
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceStep::Fsa { state, remaining } => write!(f, "({state} {remaining})"),
            TraceStep::Pda {
                state,
                remaining,
                stack,
            } => write!(f, "({state} {remaining} {})", Word::from(stack.clone())),
            TraceStep::Tm(c) => write!(f, "{c}"),
        }
    }
}

/// An accepting path. `rules[i]` is the index (into the machine's rule list)
/// of the rule taking `steps[i]` to `steps[i + 1]`. Empty when no accepting
/// path exists.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
    pub rules: Vec<usize>,
}

impl Trace {
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }
}

/// Search tree node: a configuration plus how it was reached.
struct Node<C> {
    config: C,
    parent: Option<usize>,
    rule: Option<usize>,
}

fn unwind<C: Clone>(nodes: &[Node<C>], mut at: usize) -> (Vec<C>, Vec<usize>) {
    let mut configs = vec![];
    let mut rules = vec![];
    loop {
        let n = &nodes[at];
        configs.push(n.config.clone());
        match (n.parent, n.rule) {
            (Some(p), Some(r)) => {
                rules.push(r);
                at = p;
            }
            _ => break,
        }
    }
    configs.reverse();
    rules.reverse();
    (configs, rules)
}

enum Search<C> {
    Found(Vec<C>, Vec<usize>),
    Exhausted,
}

impl StateMachine {
    /// Runs the machine on `w` from head position 0.
    pub fn apply(&self, w: &Word) -> Result<Verdict> {
        self.apply_with(w, 0, &Limits::default())
    }

    /// Runs the machine on `w`. `head` only matters for a tm.
    pub fn apply_with(&self, w: &Word, head: usize, limits: &Limits) -> Result<Verdict> {
        let found = !self.show_transitions_with(w, head, limits)?.is_empty();
        Ok(if found {
            Verdict::Accept
        } else {
            Verdict::Reject
        })
    }

    /// One accepting path for `w`, or an empty trace.
    pub fn show_transitions(&self, w: &Word) -> Result<Trace> {
        self.show_transitions_with(w, 0, &Limits::default())
    }

    pub fn show_transitions_with(&self, w: &Word, head: usize, limits: &Limits) -> Result<Trace> {
        match self.kind {
            Kind::Dfa | Kind::Ndfa => {
                self.sigma.check_word(w)?;
                Ok(self.fsa_search(w))
            }
            Kind::Pda => {
                self.sigma.check_word(w)?;
                Ok(self.pda_search(w, limits))
            }
            Kind::Tm => {
                if let Some(s) = w.iter().find(|s| !s.is_blank() && !self.sigma.contains(s)) {
                    return Err(Error::WordNotOverAlphabet(s.to_string()));
                }
                let start = TmConfig::new(self.start.clone(), head, w.symbols().to_vec());
                match self.tm_search(start, limits)? {
                    Search::Found(configs, rules) => Ok(Trace {
                        steps: configs.into_iter().map(TraceStep::Tm).collect(),
                        rules,
                    }),
                    Search::Exhausted => Ok(Trace::default()),
                }
            }
        }
    }

    fn fsa_search(&self, w: &Word) -> Trace {
        let Rules::Fsa(rules) = &self.rules else {
            unreachable!()
        };
        let input = w.symbols();
        let mut out: HashMap<&State, Vec<usize>> = HashMap::new();
        for (i, r) in rules.iter().enumerate() {
            out.entry(&r.from).or_default().push(i);
        }
        let mut nodes = vec![Node {
            config: (self.start.clone(), 0usize),
            parent: None,
            rule: None,
        }];
        let mut seen = HashSet::from([(self.start.clone(), 0usize)]);
        let mut queue = VecDeque::from([0usize]);
        let mut hit = None;
        while let Some(at) = queue.pop_front() {
            let (q, pos) = nodes[at].config.clone();
            if pos == input.len() && self.is_final(&q) {
                hit = Some(at);
                break;
            }
            for &ri in out.get(&q).map(Vec::as_slice).unwrap_or(&[]) {
                let r = &rules[ri];
                let next_pos = match &r.read {
                    None => pos,
                    Some(a) if pos < input.len() && &input[pos] == a => pos + 1,
                    Some(_) => continue,
                };
                let cfg = (r.to.clone(), next_pos);
                if seen.insert(cfg.clone()) {
                    nodes.push(Node {
                        config: cfg,
                        parent: Some(at),
                        rule: Some(ri),
                    });
                    queue.push_back(nodes.len() - 1);
                }
            }
        }
        match hit {
            None => Trace::default(),
            Some(at) => {
                let (configs, rules) = unwind(&nodes, at);
                Trace {
                    steps: configs
                        .into_iter()
                        .map(|(state, pos)| TraceStep::Fsa {
                            state,
                            remaining: Word::from(input[pos..].to_vec()),
                        })
                        .collect(),
                    rules,
                }
            }
        }
    }

    /// Acceptance by final state with the input consumed; the stack may hold anything.
    fn pda_search(&self, w: &Word, limits: &Limits) -> Trace {
        let Rules::Pda(rules) = &self.rules else {
            unreachable!()
        };
        let input = w.symbols();
        let depth_limit = limits
            .pda_depth_factor
            .saturating_mul(input.len() + 1)
            .saturating_mul(self.states.len());
        let mut out: HashMap<&State, Vec<usize>> = HashMap::new();
        for (i, r) in rules.iter().enumerate() {
            out.entry(&r.from).or_default().push(i);
        }
        // Stacks are stored bottom first so the top is the last element.
        type Cfg = (State, usize, Vec<Symbol>);
        let init: Cfg = (self.start.clone(), 0, vec![]);
        let mut nodes = vec![Node {
            config: init.clone(),
            parent: None,
            rule: None,
        }];
        let mut depth = vec![0usize];
        let mut seen: HashSet<Cfg> = HashSet::from([init]);
        let mut queue = VecDeque::from([0usize]);
        let mut hit = None;
        'search: while let Some(at) = queue.pop_front() {
            let (q, pos, stack) = nodes[at].config.clone();
            if pos == input.len() && self.is_final(&q) {
                hit = Some(at);
                break;
            }
            if depth[at] >= depth_limit {
                continue;
            }
            for &ri in out.get(&q).map(Vec::as_slice).unwrap_or(&[]) {
                let r = &rules[ri];
                let next_pos = match &r.read {
                    None => pos,
                    Some(a) if pos < input.len() && &input[pos] == a => pos + 1,
                    Some(_) => continue,
                };
                if r.pop.len() > stack.len()
                    || !r.pop.iter().zip(stack.iter().rev()).all(|(g, s)| g == s)
                {
                    continue;
                }
                let mut next_stack = stack[..stack.len() - r.pop.len()].to_vec();
                next_stack.extend(r.push.iter().rev().cloned());
                let cfg = (r.to.clone(), next_pos, next_stack);
                if seen.insert(cfg.clone()) {
                    nodes.push(Node {
                        config: cfg,
                        parent: Some(at),
                        rule: Some(ri),
                    });
                    depth.push(depth[at] + 1);
                    queue.push_back(nodes.len() - 1);
                    if seen.len() >= limits.pda_max_configs {
                        break 'search;
                    }
                }
            }
        }
        // A config that tripped the cap may itself accept.
        if hit.is_none() {
            hit = queue.into_iter().find(|&i| {
                let (q, pos, _) = &nodes[i].config;
                *pos == input.len() && self.is_final(q)
            });
        }
        match hit {
            None => Trace::default(),
            Some(at) => {
                let (configs, rules) = unwind(&nodes, at);
                Trace {
                    steps: configs
                        .into_iter()
                        .map(|(state, pos, stack)| TraceStep::Pda {
                            state,
                            remaining: Word::from(input[pos..].to_vec()),
                            stack: stack.into_iter().rev().collect(),
                        })
                        .collect(),
                    rules,
                }
            }
        }
    }

    /// Searches for a configuration in a final state. Errors when the step
    /// bound is reached with live configurations left.
    fn tm_search(&self, start: TmConfig, limits: &Limits) -> Result<Search<TmConfig>> {
        let Rules::Tm(rules) = &self.rules else {
            unreachable!()
        };
        let mut out: HashMap<(&State, &Symbol), Vec<usize>> = HashMap::new();
        for (i, r) in rules.iter().enumerate() {
            out.entry((&r.from, &r.read)).or_default().push(i);
        }
        let mut nodes = vec![Node {
            config: start.clone(),
            parent: None,
            rule: None,
        }];
        let mut seen = HashSet::from([start]);
        let mut frontier = vec![0usize];
        let mut steps = 0usize;
        while !frontier.is_empty() {
            if let Some(&at) = frontier
                .iter()
                .find(|&&i| self.is_final(&nodes[i].config.state))
            {
                let (configs, rules) = unwind(&nodes, at);
                return Ok(Search::Found(configs, rules));
            }
            if steps >= limits.tm_steps {
                return Err(Error::StepLimitExceeded(limits.tm_steps));
            }
            let mut next = vec![];
            for at in frontier {
                let cfg = nodes[at].config.clone();
                let key = (&cfg.state, cfg.read());
                for &ri in out.get(&key).map(Vec::as_slice).unwrap_or(&[]) {
                    let r = &rules[ri];
                    let mut tape = cfg.tape.clone();
                    let mut head = cfg.head;
                    match &r.action {
                        TmAction::Write(s) => tape[head] = s.clone(),
                        TmAction::Left => {
                            head = head.checked_sub(1).ok_or(Error::FellOffTape)?;
                        }
                        TmAction::Right => head += 1,
                    }
                    let c = TmConfig::new(r.to.clone(), head, tape);
                    if seen.insert(c.clone()) {
                        nodes.push(Node {
                            config: c,
                            parent: Some(at),
                            rule: Some(ri),
                        });
                        next.push(nodes.len() - 1);
                    }
                }
            }
            frontier = next;
            steps += 1;
        }
        Ok(Search::Exhausted)
    }

    /// Runs a tm from `config` until it enters a final state and returns
    /// that configuration. A run with no applicable rule before halting is
    /// an error.
    pub fn run_tm_to_halt(&self, config: TmConfig, limits: &Limits) -> Result<TmConfig> {
        if self.kind != Kind::Tm {
            return Err(Error::KindMismatch(self.kind.name(), "tm"));
        }
        match self.tm_search(config.clone(), limits)? {
            Search::Found(mut configs, _) => Ok(configs.pop().expect("path is non-empty")),
            Search::Exhausted => Err(Error::MachineWedged(format!(
                "no rule applies before reaching a final state, starting from {config}"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{ab, correct_dfa};
    use super::super::{FsaRule, PdaRule, TmRule};
    use super::*;
    use crate::symbol::Alphabet;

    fn w(s: &str) -> Word {
        Word::parse(s)
    }

    #[test]
    fn dfa_trace_on_single_a() {
        let t = correct_dfa().show_transitions(&w("a")).unwrap();
        let shown: Vec<String> = t.steps.iter().map(ToString::to_string).collect();
        assert_eq!(shown, ["(q0 (a))", "(q1 ())"]);
        assert_eq!(t.rules, [0]);
    }

    #[test]
    fn rejected_word_has_empty_trace() {
        let m = correct_dfa();
        assert!(m.show_transitions(&w("b")).unwrap().is_empty());
        assert_eq!(m.apply(&w("b")).unwrap(), Verdict::Reject);
    }

    #[test]
    fn word_outside_alphabet() {
        let err = correct_dfa().apply(&w("a c")).unwrap_err();
        assert_eq!(err, Error::WordNotOverAlphabet("c".into()));
    }

    #[test]
    fn ndfa_epsilon_self_loop_terminates() {
        let m = StateMachine::ndfa(
            ["p", "q"],
            ab(),
            "p",
            ["q"],
            [
                FsaRule::new("p", "ε", "p"),
                FsaRule::new("p", "ε", "q"),
                FsaRule::new("q", "ε", "p"),
                FsaRule::new("q", "a", "q"),
            ],
        )
        .unwrap();
        assert_eq!(m.apply(&w("a a")).unwrap(), Verdict::Accept);
        assert_eq!(m.apply(&w("b")).unwrap(), Verdict::Reject);
    }

    fn anbn_pda() -> StateMachine {
        StateMachine::pda(
            ["s", "f"],
            ab(),
            Alphabet::new(["x"]).unwrap(),
            "s",
            ["f"],
            [
                PdaRule::new("s", "a", ["ε"], "s", ["x"]),
                PdaRule::new("s", "ε", ["ε"], "f", ["ε"]),
                PdaRule::new("f", "b", ["x"], "f", ["ε"]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn pda_final_state_acceptance_ignores_stack() {
        let m = anbn_pda();
        assert_eq!(m.apply(&w("a a b b")).unwrap(), Verdict::Accept);
        // Leftover stack content does not prevent acceptance.
        assert_eq!(m.apply(&w("a a b")).unwrap(), Verdict::Accept);
        assert_eq!(m.apply(&w("a b b")).unwrap(), Verdict::Reject);
        let t = m.show_transitions(&w("a b")).unwrap();
        assert_eq!(t.steps.last().unwrap().to_string(), "(f () ())");
    }

    #[test]
    fn pda_push_cycle_is_bounded() {
        let m = StateMachine::pda(
            ["s"],
            ab(),
            Alphabet::new(["x"]).unwrap(),
            "s",
            Vec::<&str>::new(),
            [PdaRule::new("s", "ε", ["ε"], "s", ["x"])],
        )
        .unwrap();
        assert_eq!(m.apply(&w("a")).unwrap(), Verdict::Reject);
    }

    fn right_mover() -> StateMachine {
        StateMachine::tm(
            ["s", "h"],
            Alphabet::new(["I"]).unwrap(),
            [
                TmRule::new("s", "I", "s", "R"),
                TmRule::new("s", "_", "h", "_"),
            ],
            "s",
            ["h"],
        )
        .unwrap()
    }

    #[test]
    fn tm_runs_to_final() {
        let m = right_mover();
        let t = m.show_transitions(&w("I I")).unwrap();
        assert_eq!(t.steps.last().unwrap().to_string(), "(h 2 (I I _))");
        assert_eq!(m.apply(&w("")).unwrap(), Verdict::Accept);
    }

    #[test]
    fn tm_step_limit_is_distinct_from_reject() {
        let looper = StateMachine::tm(
            ["s", "h"],
            Alphabet::new(["I"]).unwrap(),
            [TmRule::new("s", "_", "s", "R")],
            "s",
            ["h"],
        )
        .unwrap();
        let err = looper
            .apply_with(&w(""), 0, &Limits::with_step_limit(50))
            .unwrap_err();
        assert_eq!(err, Error::StepLimitExceeded(50));
        // Stuck without a rule: reject.
        assert_eq!(looper.apply(&w("I")).unwrap(), Verdict::Reject);
    }

    #[test]
    fn tm_left_of_zero_falls_off() {
        let m = StateMachine::tm(
            ["s", "h"],
            Alphabet::new(["I"]).unwrap(),
            [TmRule::new("s", "I", "h", "L")],
            "s",
            ["h"],
        )
        .unwrap();
        assert_eq!(m.apply(&w("I")).unwrap_err(), Error::FellOffTape);
    }

    #[test]
    fn tm_head_start() {
        let m = right_mover();
        let t = m
            .show_transitions_with(&w("I _ I"), 2, &Limits::default())
            .unwrap();
        assert_eq!(t.steps[0].to_string(), "(s 2 (I _ I))");
        assert_eq!(t.steps.last().unwrap().to_string(), "(h 3 (I _ I _))");
    }

    #[test]
    fn run_tm_to_halt_wedges() {
        let m = right_mover();
        let stuck = StateMachine::tm(
            ["s", "h"],
            Alphabet::new(["I"]).unwrap(),
            [TmRule::new("s", "I", "h", "R")],
            "s",
            ["h"],
        )
        .unwrap();
        let cfg = TmConfig::new("s".into(), 0, vec![]);
        assert!(matches!(
            stuck.run_tm_to_halt(cfg.clone(), &Limits::default()),
            Err(Error::MachineWedged(_))
        ));
        assert_eq!(
            m.run_tm_to_halt(cfg, &Limits::default())
                .unwrap()
                .to_string(),
            "(h 0 (_))"
        );
    }
}
