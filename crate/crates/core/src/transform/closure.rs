use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::machine::{FsaRule, Kind, PdaRule, StateMachine};
use crate::symbol::{gen_symbol, gen_symbol_str, Alphabet, State, Symbol};

use super::{ndfa_to_dfa, rename_states_sm, require_fsa};

/// Checks the pair has the same kind (dfa and ndfa count as the same) and
/// that the kind is closed under the operation.
fn closure_pair(m1: &StateMachine, m2: &StateMachine) -> Result<Kind> {
    if m1.kind() == Kind::Tm || m2.kind() == Kind::Tm {
        return Err(Error::TmClosureUnsupported);
    }
    let k1 = m1.kind();
    let k2 = m2.kind();
    if m1.is_fsa() && m2.is_fsa() {
        return Ok(Kind::Ndfa);
    }
    if k1 == k2 {
        return Ok(k1);
    }
    Err(Error::KindMismatch(k1.name(), k2.name()))
}

fn eps(from: &State, to: &State) -> FsaRule {
    FsaRule {
        from: from.clone(),
        read: None,
        to: to.clone(),
    }
}

fn pda_eps(from: &State, to: &State) -> PdaRule {
    PdaRule {
        from: from.clone(),
        read: None,
        pop: vec![],
        to: to.clone(),
        push: vec![],
    }
}

/// Renames the stack symbols of a pda apart from `avoid`.
fn rename_stack(m: &StateMachine, avoid: &Alphabet) -> Result<StateMachine> {
    let gamma = m.stack_alphabet()?;
    let mut taken: HashSet<String> = avoid.iter().map(|s| s.to_string()).collect();
    let mut map: HashMap<Symbol, Symbol> = HashMap::new();
    for g in gamma {
        let fresh = gen_symbol_str(g.as_str(), |c| taken.contains(c));
        taken.insert(fresh.to_string());
        map.insert(g.clone(), fresh);
    }
    let seq = |v: &[Symbol]| v.iter().map(|g| map[g].clone()).collect::<Vec<_>>();
    let rules = m.pda_rules().iter().map(|r| PdaRule {
        pop: seq(&r.pop),
        push: seq(&r.push),
        ..r.clone()
    });
    let gamma = Alphabet::new(gamma.iter().map(|g| map[g].clone()))?;
    StateMachine::pda(
        m.states().to_vec(),
        m.alphabet().clone(),
        gamma,
        m.start().clone(),
        m.finals().to_vec(),
        rules,
    )
}

fn all_states<'a>(ms: &[&'a StateMachine]) -> Vec<&'a State> {
    ms.iter().flat_map(|m| m.states()).collect()
}

pub fn union_sm(m1: &StateMachine, m2: &StateMachine) -> Result<StateMachine> {
    let kind = closure_pair(m1, m2)?;
    let m2 = rename_states_sm(m1.states(), m2)?;
    let start = gen_symbol("S", all_states(&[m1, &m2]));
    let sigma = m1.alphabet().union(m2.alphabet());
    let mut states = vec![start.clone()];
    states.extend(all_states(&[m1, &m2]).into_iter().cloned());
    let finals: Vec<State> = m1.finals().iter().chain(m2.finals()).cloned().collect();
    if kind == Kind::Pda {
        let gamma = m1.stack_alphabet()?.union(m2.stack_alphabet()?);
        let mut rules = vec![pda_eps(&start, m1.start()), pda_eps(&start, m2.start())];
        rules.extend(m1.pda_rules().iter().chain(m2.pda_rules()).cloned());
        return StateMachine::pda(states, sigma, gamma, start, finals, rules);
    }
    let mut rules = vec![eps(&start, m1.start()), eps(&start, m2.start())];
    rules.extend(m1.fsa_rules().iter().chain(m2.fsa_rules()).cloned());
    StateMachine::ndfa(states, sigma, start, finals, rules)
}

pub fn concat_sm(m1: &StateMachine, m2: &StateMachine) -> Result<StateMachine> {
    let kind = closure_pair(m1, m2)?;
    let m2 = rename_states_sm(m1.states(), m2)?;
    let sigma = m1.alphabet().union(m2.alphabet());
    let states: Vec<State> = all_states(&[m1, &m2]).into_iter().cloned().collect();
    if kind == Kind::Pda {
        // m2 must not see what m1 leaves on the stack.
        let m2 = rename_stack(&m2, m1.stack_alphabet()?)?;
        let gamma = m1.stack_alphabet()?.union(m2.stack_alphabet()?);
        let mut rules: Vec<PdaRule> = m1.finals().iter().map(|f| pda_eps(f, m2.start())).collect();
        rules.extend(m1.pda_rules().iter().chain(m2.pda_rules()).cloned());
        return StateMachine::pda(
            states,
            sigma,
            gamma,
            m1.start().clone(),
            m2.finals().to_vec(),
            rules,
        );
    }
    let mut rules: Vec<FsaRule> = m1.finals().iter().map(|f| eps(f, m2.start())).collect();
    rules.extend(m1.fsa_rules().iter().chain(m2.fsa_rules()).cloned());
    StateMachine::ndfa(
        states,
        sigma,
        m1.start().clone(),
        m2.finals().to_vec(),
        rules,
    )
}

pub fn kleenestar_sm(m: &StateMachine) -> Result<StateMachine> {
    closure_pair(m, m)?;
    let start = gen_symbol("S", m.states());
    let mut states = vec![start.clone()];
    states.extend(m.states().iter().cloned());
    if m.kind() == Kind::Pda {
        return pda_star(m, start, states);
    }
    let mut rules = vec![eps(&start, m.start())];
    rules.extend(m.finals().iter().map(|f| eps(f, &start)));
    rules.extend(m.fsa_rules().iter().cloned());
    StateMachine::ndfa(states, m.alphabet().clone(), start.clone(), [start], rules)
}

/// Each round starts above a fresh bottom marker and, once m accepts, the
/// stack is cleared down to the marker before the next round.
fn pda_star(m: &StateMachine, start: State, mut states: Vec<State>) -> Result<StateMachine> {
    let gamma = m.stack_alphabet()?;
    let bottom = gen_symbol("#", gamma);
    let base = gen_symbol("B", states.iter());
    let clear = gen_symbol("C", states.iter().chain([&base]));
    states.push(base.clone());
    states.push(clear.clone());
    let mut rules = vec![
        PdaRule {
            push: vec![bottom.clone()],
            ..pda_eps(&start, &base)
        },
        pda_eps(&base, m.start()),
        PdaRule {
            pop: vec![bottom.clone()],
            push: vec![bottom.clone()],
            ..pda_eps(&clear, &base)
        },
    ];
    rules.extend(m.finals().iter().map(|f| pda_eps(f, &clear)));
    rules.extend(gamma.iter().map(|g| PdaRule {
        pop: vec![g.clone()],
        ..pda_eps(&clear, &clear)
    }));
    rules.extend(m.pda_rules().iter().cloned());
    let new_gamma = gamma.union(&Alphabet::new([bottom])?);
    StateMachine::pda(
        states,
        m.alphabet().clone(),
        new_gamma,
        start.clone(),
        [start, base],
        rules,
    )
}

/// Determinizes if needed and adds a sink so the dfa is total over `sigma`.
fn total_dfa_over(m: &StateMachine, sigma: &Alphabet) -> Result<StateMachine> {
    let d = if m.kind() == Kind::Dfa {
        m.clone()
    } else {
        ndfa_to_dfa(m)?
    };
    let missing: Vec<&Symbol> = sigma.iter().filter(|a| !d.alphabet().contains(a)).collect();
    if missing.is_empty() && d.alphabet().len() == sigma.len() {
        return Ok(d);
    }
    let sink = gen_symbol("ds", d.states());
    let mut states = d.states().to_vec();
    states.push(sink.clone());
    let mut rules = d.fsa_rules().to_vec();
    for q in &states {
        for a in &missing {
            rules.push(FsaRule {
                from: q.clone(),
                read: Some((*a).clone()),
                to: sink.clone(),
            });
        }
    }
    for a in d.alphabet() {
        rules.push(FsaRule {
            from: sink.clone(),
            read: Some(a.clone()),
            to: sink.clone(),
        });
    }
    StateMachine::dfa(
        states,
        sigma.clone(),
        d.start().clone(),
        d.finals().to_vec(),
        rules,
    )
}

/// Complement relative to the machine's own alphabet; the result is a dfa.
pub fn complement_sm(m: &StateMachine) -> Result<StateMachine> {
    require_fsa(m)?;
    let d = total_dfa_over(m, m.alphabet())?;
    let finals: Vec<State> = d
        .states()
        .iter()
        .filter(|q| !d.is_final(q))
        .cloned()
        .collect();
    StateMachine::dfa(
        d.states().to_vec(),
        d.alphabet().clone(),
        d.start().clone(),
        finals,
        d.fsa_rules().to_vec(),
    )
}

/// Product construction over the union of the two alphabets, keeping only
/// reachable pairs. Pair states are named `p|q`.
pub fn intersection_sm(m1: &StateMachine, m2: &StateMachine) -> Result<StateMachine> {
    require_fsa(m1)?;
    require_fsa(m2)?;
    let sigma = m1.alphabet().union(m2.alphabet());
    let d1 = total_dfa_over(m1, &sigma)?;
    let d2 = total_dfa_over(m2, &sigma)?;
    let delta = |d: &StateMachine| -> HashMap<(State, Symbol), State> {
        d.fsa_rules()
            .iter()
            .map(|r| ((r.from.clone(), r.read.clone().unwrap()), r.to.clone()))
            .collect()
    };
    let (t1, t2) = (delta(&d1), delta(&d2));

    let mut names: HashMap<(State, State), State> = HashMap::new();
    let mut used: HashSet<String> = HashSet::new();
    let mut order: Vec<((State, State), State)> = vec![];
    let mut name_of =
        |p: &(State, State), order: &mut Vec<((State, State), State)>| -> (State, bool) {
            if let Some(n) = names.get(p) {
                return (n.clone(), false);
            }
            let n = gen_symbol_str(&format!("{}|{}", p.0, p.1), |c| used.contains(c));
            used.insert(n.to_string());
            names.insert(p.clone(), n.clone());
            order.push((p.clone(), n.clone()));
            (n, true)
        };
    let start = (d1.start().clone(), d2.start().clone());
    let (start_name, _) = name_of(&start, &mut order);
    let mut queue = VecDeque::from([(start, start_name.clone())]);
    let mut rules = vec![];
    while let Some(((p, q), from)) = queue.pop_front() {
        for a in &sigma {
            let next = (
                t1[&(p.clone(), a.clone())].clone(),
                t2[&(q.clone(), a.clone())].clone(),
            );
            let (to, fresh) = name_of(&next, &mut order);
            if fresh {
                queue.push_back((next, to.clone()));
            }
            rules.push(FsaRule {
                from: from.clone(),
                read: Some(a.clone()),
                to,
            });
        }
    }
    let finals: Vec<State> = order
        .iter()
        .filter(|((p, q), _)| d1.is_final(p) && d2.is_final(q))
        .map(|(_, n)| n.clone())
        .collect();
    let states: Vec<State> = order.into_iter().map(|(_, n)| n).collect();
    StateMachine::dfa(states, sigma, start_name, finals, rules)
}
