use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::grammar::{Grammar, GrammarKind, Production};
use crate::machine::{FsaRule, Kind, PdaRule, StateMachine};
use crate::symbol::{gen_symbol, gen_symbol_str, Alphabet, State, Symbol};

use super::{epsilon_closure, rename_states_sm};

/// rg → ndfa, cfg → pda. csgs are not converted.
pub fn grammar_to_sm(g: &Grammar) -> Result<StateMachine> {
    match g.kind() {
        GrammarKind::Rg => rg_to_ndfa(g),
        GrammarKind::Cfg => cfg_to_pda(g),
        GrammarKind::Csg => Err(Error::CsgConversionUnsupported),
    }
}

/// One state per nonterminal plus an accepting state.
fn rg_to_ndfa(g: &Grammar) -> Result<StateMachine> {
    let acc = gen_symbol("F", g.nonterminals());
    let mut finals = vec![acc.clone()];
    let mut rules = vec![];
    for p in g.productions() {
        let from = p.lhs[0].clone();
        match p.rhs.as_slice() {
            [] => finals.push(from),
            [a] => rules.push(FsaRule {
                from,
                read: Some(a.clone()),
                to: acc.clone(),
            }),
            [a, b] => rules.push(FsaRule {
                from,
                read: Some(a.clone()),
                to: b.clone(),
            }),
            _ => unreachable!("rg productions are validated"),
        }
    }
    let mut states = g.nonterminals().to_vec();
    states.push(acc);
    StateMachine::ndfa(
        states,
        g.terminals().clone(),
        g.start().clone(),
        finals,
        rules,
    )
}

/// Leftmost derivations guessed on the stack. A bottom marker guarantees
/// the stack is empty whenever the accepting state is reached.
fn cfg_to_pda(g: &Grammar) -> Result<StateMachine> {
    let symbols = g.symbols();
    let bottom = gen_symbol("$", &symbols);
    let mut gamma: Vec<Symbol> = symbols.clone();
    gamma.push(bottom.clone());
    let (s, q, f) = (Symbol::new("s"), Symbol::new("q"), Symbol::new("f"));
    let mut rules = vec![
        PdaRule {
            from: s.clone(),
            read: None,
            pop: vec![],
            to: q.clone(),
            push: vec![g.start().clone(), bottom.clone()],
        },
        PdaRule {
            from: q.clone(),
            read: None,
            pop: vec![bottom],
            to: f.clone(),
            push: vec![],
        },
    ];
    for p in g.productions() {
        rules.push(PdaRule {
            from: q.clone(),
            read: None,
            pop: p.lhs.clone(),
            to: q.clone(),
            push: p.rhs.clone(),
        });
    }
    for a in g.terminals() {
        rules.push(PdaRule {
            from: q.clone(),
            read: Some(a.clone()),
            pop: vec![a.clone()],
            to: q.clone(),
            push: vec![],
        });
    }
    StateMachine::pda(
        [s.clone(), q, f.clone()],
        g.terminals().clone(),
        Alphabet::new(gamma)?,
        s,
        [f],
        rules,
    )
}

/// dfa/ndfa → rg, pda → cfg. tms are not converted.
pub fn sm_to_grammar(m: &StateMachine) -> Result<Grammar> {
    match m.kind() {
        Kind::Dfa | Kind::Ndfa => fsa_to_rg(m),
        Kind::Pda => pda_to_cfg(m),
        Kind::Tm => Err(Error::TmConversionUnsupported),
    }
}

/// ε-rules are folded away first: p reads a into r when some state in p's
/// ε-closure does, and p counts as final when its closure meets F.
fn fsa_to_rg(m: &StateMachine) -> Result<Grammar> {
    let m = rename_states_sm(m.alphabet().iter(), m)?;
    let closures: HashMap<&State, BTreeSet<State>> = m
        .states()
        .iter()
        .map(|q| (q, epsilon_closure(&m, [q.clone()])))
        .collect();
    let accepting = |q: &State| closures[q].iter().any(|x| m.is_final(x));
    let mut rules = vec![];
    for p in m.states() {
        for r in m.fsa_rules() {
            let Some(a) = &r.read else { continue };
            if !closures[p].contains(&r.from) {
                continue;
            }
            rules.push(Production::new(
                vec![p.clone()],
                vec![a.clone(), r.to.clone()],
            ));
            if accepting(&r.to) {
                rules.push(Production::new(vec![p.clone()], vec![a.clone()]));
            }
        }
    }
    if accepting(m.start()) {
        rules.push(Production::new(vec![m.start().clone()], vec![]));
    }
    let v: Vec<Symbol> = m.states().iter().chain(m.alphabet()).cloned().collect();
    Grammar::rg(v, m.alphabet().clone(), rules, m.start().clone())
}

/// A pda step in normal form: reads at most one symbol and either pushes or
/// pops exactly one stack symbol.
struct Step {
    from: State,
    read: Option<Symbol>,
    to: State,
    push: bool,
    sym: Symbol,
}

/// Rewrites m into a machine with one accepting state that is only reached
/// with an empty stack, all of whose steps are in normal form.
fn normalize(m: &StateMachine) -> Result<(Vec<State>, State, State, Vec<Step>)> {
    let gamma = m.stack_alphabet()?;
    let bottom = gen_symbol("$", gamma);
    let dummy = gen_symbol("%", gamma.iter().chain([&bottom]));
    let mut taken: HashSet<String> = m.states().iter().map(|q| q.to_string()).collect();
    let mut fresh = |base: &str| -> State {
        let q = gen_symbol_str(base, |c| taken.contains(c));
        taken.insert(q.to_string());
        q
    };
    let start = fresh("s");
    let clear = fresh("c");
    let accept = fresh("a");
    let mut states: Vec<State> = m.states().to_vec();
    states.extend([start.clone(), clear.clone(), accept.clone()]);
    let mut steps = vec![Step {
        from: start.clone(),
        read: None,
        to: m.start().clone(),
        push: true,
        sym: bottom.clone(),
    }];
    for g in gamma {
        steps.push(Step {
            from: clear.clone(),
            read: None,
            to: clear.clone(),
            push: false,
            sym: g.clone(),
        });
    }
    steps.push(Step {
        from: clear.clone(),
        read: None,
        to: accept.clone(),
        push: false,
        sym: bottom,
    });

    // Arbitrary rules become chains through fresh intermediate states.
    let mut chain = |from: &State, read: Option<Symbol>, to: &State, ops: Vec<(bool, Symbol)>| {
        let n = ops.len();
        let mut cur = from.clone();
        let mut read = read;
        for (i, (push, sym)) in ops.into_iter().enumerate() {
            let next = if i + 1 == n {
                to.clone()
            } else {
                let q = fresh("n");
                states.push(q.clone());
                q
            };
            steps.push(Step {
                from: cur,
                read: read.take(),
                to: next.clone(),
                push,
                sym,
            });
            cur = next;
        }
    };
    for f in m.finals() {
        chain(
            f,
            None,
            &clear,
            vec![(true, dummy.clone()), (false, dummy.clone())],
        );
    }
    for r in m.pda_rules() {
        let mut ops: Vec<(bool, Symbol)> = r.pop.iter().map(|g| (false, g.clone())).collect();
        ops.extend(r.push.iter().rev().map(|g| (true, g.clone())));
        if ops.is_empty() {
            ops = vec![(true, dummy.clone()), (false, dummy.clone())];
        }
        chain(&r.from, r.read.clone(), &r.to, ops);
    }
    Ok((states, start, accept, steps))
}

/// The triple construction: nonterminal [p,q] derives exactly the inputs
/// that take p with an empty stack to q with an empty stack. Only pairs that
/// derive some word and are reachable from the start are kept.
type Wrap = (Option<Symbol>, usize, usize, Option<Symbol>);

// The live relation is a square matrix; index loops read best here.
#[allow(clippy::needless_range_loop)]
fn pda_to_cfg(m: &StateMachine) -> Result<Grammar> {
    let (states, start, accept, steps) = normalize(m)?;
    let idx: HashMap<&State, usize> = states.iter().enumerate().map(|(i, q)| (q, i)).collect();
    let n = states.len();
    let pushes: Vec<&Step> = steps.iter().filter(|s| s.push).collect();
    let pops: Vec<&Step> = steps.iter().filter(|s| !s.push).collect();
    // (p, q) -> [(a, r, s, b)]: p pushes γ reading a into r; s pops γ reading b into q.
    let mut wraps: HashMap<(usize, usize), Vec<Wrap>> = HashMap::new();
    for u in &pushes {
        for o in &pops {
            if u.sym == o.sym {
                wraps.entry((idx[&u.from], idx[&o.to])).or_default().push((
                    u.read.clone(),
                    idx[&u.to],
                    idx[&o.from],
                    o.read.clone(),
                ));
            }
        }
    }

    let mut live = vec![vec![false; n]; n];
    for (i, row) in live.iter_mut().enumerate() {
        row[i] = true;
    }
    loop {
        let mut changed = false;
        for (&(p, q), ws) in &wraps {
            if !live[p][q] && ws.iter().any(|(_, r, s, _)| live[*r][*s]) {
                live[p][q] = true;
                changed = true;
            }
        }
        for p in 0..n {
            for r in 0..n {
                if !live[p][r] {
                    continue;
                }
                for q in 0..n {
                    if live[r][q] && !live[p][q] {
                        live[p][q] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }

    let mut taken: HashSet<String> = m.alphabet().iter().map(|a| a.to_string()).collect();
    let mut names: HashMap<(usize, usize), Symbol> = HashMap::new();
    let mut name = |p: usize, q: usize| -> Symbol {
        names
            .entry((p, q))
            .or_insert_with(|| {
                let s = gen_symbol_str(&format!("[{},{}]", states[p], states[q]), |c| {
                    taken.contains(c)
                });
                taken.insert(s.to_string());
                s
            })
            .clone()
    };
    let root = (idx[&start], idx[&accept]);
    let start_nt = name(root.0, root.1);
    let mut rules = vec![];
    let mut seen = HashSet::from([root]);
    let mut todo = vec![root];
    let mut visit = |pair: (usize, usize), todo: &mut Vec<(usize, usize)>| {
        if seen.insert(pair) {
            todo.push(pair);
        }
    };
    while let Some((p, q)) = todo.pop() {
        if !live[p][q] {
            continue;
        }
        let lhs = vec![name(p, q)];
        if p == q {
            rules.push(Production::new(lhs.clone(), vec![]));
        }
        for (a, r, s, b) in wraps.get(&(p, q)).into_iter().flatten() {
            if !live[*r][*s] {
                continue;
            }
            let mut rhs: Vec<Symbol> = a.iter().cloned().collect();
            rhs.push(name(*r, *s));
            rhs.extend(b.iter().cloned());
            rules.push(Production::new(lhs.clone(), rhs));
            visit((*r, *s), &mut todo);
        }
        for r in 0..n {
            if live[p][r] && live[r][q] && !(r == p && r == q) {
                rules.push(Production::new(lhs.clone(), vec![name(p, r), name(r, q)]));
                visit((p, r), &mut todo);
                visit((r, q), &mut todo);
            }
        }
    }
    let top = gen_symbol_str("S", |c| taken.contains(c));
    rules.push(Production::new(vec![top.clone()], vec![start_nt]));
    let rules = without_epsilon_rules(rules, &top);
    let v: Vec<Symbol> = names
        .into_values()
        .chain([top.clone()])
        .chain(m.alphabet().iter().cloned())
        .collect();
    Grammar::cfg(v, m.alphabet().clone(), rules, top)
}

/// Standard ε-rule elimination. Only `start`, which must not occur on any
/// right-hand side, may keep an ε-rule. Every other nonterminal then yields
/// at least one terminal, which keeps derivation search bounded by |w|.
fn without_epsilon_rules(rules: Vec<Production>, start: &Symbol) -> Vec<Production> {
    let mut nullable: HashSet<Symbol> = HashSet::new();
    loop {
        let before = nullable.len();
        for p in &rules {
            if p.rhs.iter().all(|x| nullable.contains(x)) {
                nullable.insert(p.lhs[0].clone());
            }
        }
        if nullable.len() == before {
            break;
        }
    }
    let mut out = vec![];
    let mut seen = HashSet::new();
    for p in &rules {
        let opt: Vec<usize> = (0..p.rhs.len())
            .filter(|&i| nullable.contains(&p.rhs[i]))
            .collect();
        for mask in 0..(1u32 << opt.len()) {
            let rhs: Vec<Symbol> = p
                .rhs
                .iter()
                .enumerate()
                .filter(|(i, _)| {
                    opt.iter()
                        .position(|j| j == i)
                        .is_none_or(|k| mask & (1 << k) == 0)
                })
                .map(|(_, x)| x.clone())
                .collect();
            let keep = if rhs.is_empty() {
                &p.lhs[0] == start
            } else {
                rhs != p.lhs
            };
            if keep && seen.insert((p.lhs.clone(), rhs.clone())) {
                out.push(Production::new(p.lhs.clone(), rhs));
            }
        }
    }
    if nullable.contains(start) && seen.insert((vec![start.clone()], vec![])) {
        out.push(Production::new(vec![start.clone()], vec![]));
    }
    out
}
