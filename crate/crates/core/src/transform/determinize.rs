use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use crate::error::Result;
use crate::machine::{FsaRule, StateMachine};
use crate::symbol::{gen_symbol_str, State, Symbol};

use super::require_fsa;

/// Name given to the empty subset.
const EMPTY_SUBSET: &str = "ds";

/// States reachable from `set` by ε-rules alone, `set` included.
pub fn epsilon_closure(m: &StateMachine, set: impl IntoIterator<Item = State>) -> BTreeSet<State> {
    let mut out: BTreeSet<State> = set.into_iter().collect();
    let mut todo: Vec<State> = out.iter().cloned().collect();
    while let Some(q) = todo.pop() {
        for r in m.fsa_rules() {
            if r.from == q && r.read.is_none() && out.insert(r.to.clone()) {
                todo.push(r.to.clone());
            }
        }
    }
    out
}

fn step(m: &StateMachine, set: &BTreeSet<State>, a: &Symbol) -> BTreeSet<State> {
    let moved = m
        .fsa_rules()
        .iter()
        .filter(|r| r.read.as_ref() == Some(a) && set.contains(&r.from))
        .map(|r| r.to.clone());
    epsilon_closure(m, moved)
}

fn subset_name(set: &BTreeSet<State>) -> String {
    if set.is_empty() {
        EMPTY_SUBSET.to_string()
    } else {
        set.iter().map(Symbol::as_str).collect::<Vec<_>>().join("-")
    }
}

/// Subset construction over ε-closures. Only reachable subsets become
/// states; the result is total, with the empty subset as its sink.
pub fn ndfa_to_dfa(m: &StateMachine) -> Result<StateMachine> {
    require_fsa(m)?;
    let start = epsilon_closure(m, [m.start().clone()]);
    let mut names: HashMap<BTreeSet<State>, State> = HashMap::new();
    let mut used: HashSet<String> = HashSet::new();
    let mut order: Vec<BTreeSet<State>> = vec![];
    let mut name_of = |set: &BTreeSet<State>,
                       names: &mut HashMap<BTreeSet<State>, State>,
                       order: &mut Vec<BTreeSet<State>>|
     -> (State, bool) {
        if let Some(n) = names.get(set) {
            return (n.clone(), false);
        }
        let n = gen_symbol_str(&subset_name(set), |c| used.contains(c));
        used.insert(n.to_string());
        names.insert(set.clone(), n.clone());
        order.push(set.clone());
        (n, true)
    };

    let (start_name, _) = name_of(&start, &mut names, &mut order);
    let mut queue = VecDeque::from([start.clone()]);
    let mut rules = vec![];
    while let Some(set) = queue.pop_front() {
        let from = names[&set].clone();
        for a in m.alphabet() {
            let next = step(m, &set, a);
            let (to, fresh) = name_of(&next, &mut names, &mut order);
            if fresh {
                queue.push_back(next);
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
        .filter(|s| s.iter().any(|q| m.is_final(q)))
        .map(|s| names[s].clone())
        .collect();
    let states: Vec<State> = order.iter().map(|s| names[s].clone()).collect();
    StateMachine::dfa(states, m.alphabet().clone(), start_name, finals, rules)
}
