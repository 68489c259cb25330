use std::collections::BTreeMap;

use crate::error::Result;
use crate::machine::{FsaRule, StateMachine};
use crate::regexp::{
    concat_regexp, kleenestar_regexp, null_regexp, union_regexp, Regexp, RegexpAst,
};
use crate::symbol::{gen_symbol, Alphabet, State, Symbol};

use super::require_fsa;

/// Thompson construction: one fragment per AST node, glued with ε-rules.
pub fn regexp_to_fsa(r: &Regexp) -> Result<StateMachine> {
    regexp_ast_to_fsa(r.alphabet(), r.ast())
}

pub fn regexp_ast_to_fsa(sigma: &Alphabet, ast: &RegexpAst) -> Result<StateMachine> {
    let mut b = Builder::default();
    let (s, f) = b.fragment(ast);
    StateMachine::ndfa(b.states, sigma.clone(), s, [f], b.rules)
}

#[derive(Default)]
struct Builder {
    states: Vec<State>,
    rules: Vec<FsaRule>,
}

impl Builder {
    fn fresh(&mut self) -> State {
        let q = Symbol::from(format!("t{}", self.states.len()));
        self.states.push(q.clone());
        q
    }

    fn eps(&mut self, from: &State, to: &State) {
        self.rules.push(FsaRule {
            from: from.clone(),
            read: None,
            to: to.clone(),
        });
    }

    fn fragment(&mut self, ast: &RegexpAst) -> (State, State) {
        match ast {
            RegexpAst::Empty => {
                let (s, f) = (self.fresh(), self.fresh());
                self.eps(&s, &f);
                (s, f)
            }
            RegexpAst::Null => (self.fresh(), self.fresh()),
            RegexpAst::Sym(a) => {
                let (s, f) = (self.fresh(), self.fresh());
                self.rules.push(FsaRule {
                    from: s.clone(),
                    read: Some(a.clone()),
                    to: f.clone(),
                });
                (s, f)
            }
            RegexpAst::Union(x, y) => {
                let s = self.fresh();
                let (s1, f1) = self.fragment(x);
                let (s2, f2) = self.fragment(y);
                let f = self.fresh();
                self.eps(&s, &s1);
                self.eps(&s, &s2);
                self.eps(&f1, &f);
                self.eps(&f2, &f);
                (s, f)
            }
            RegexpAst::Concat(x, y) => {
                let (s1, f1) = self.fragment(x);
                let (s2, f2) = self.fragment(y);
                self.eps(&f1, &s2);
                (s1, f2)
            }
            RegexpAst::Star(x) => {
                let s = self.fresh();
                let (s1, f1) = self.fragment(x);
                let f = self.fresh();
                self.eps(&s, &s1);
                self.eps(&s, &f);
                self.eps(&f1, &s1);
                self.eps(&f1, &f);
                (s, f)
            }
        }
    }
}

fn union(x: RegexpAst, y: RegexpAst) -> RegexpAst {
    match (x, y) {
        (RegexpAst::Null, r) | (r, RegexpAst::Null) => r,
        (x, y) => union_regexp(x, y),
    }
}

fn concat(x: RegexpAst, y: RegexpAst) -> RegexpAst {
    match (x, y) {
        (RegexpAst::Null, _) | (_, RegexpAst::Null) => null_regexp(),
        (RegexpAst::Empty, r) | (r, RegexpAst::Empty) => r,
        (x, y) => concat_regexp(x, y),
    }
}

fn star(x: RegexpAst) -> RegexpAst {
    match x {
        RegexpAst::Null | RegexpAst::Empty => RegexpAst::Empty,
        x => kleenestar_regexp(x),
    }
}

/// State elimination. States are removed in name order; the result is only
/// simplified by the ε and ∅ identities.
pub fn fsa_to_regexp(m: &StateMachine) -> Result<RegexpAst> {
    require_fsa(m)?;
    let start = gen_symbol("S", m.states());
    let fin = gen_symbol("F", m.states().iter().chain([&start]));
    // Generalized transitions, keyed by (from, to).
    let mut edges: BTreeMap<(State, State), RegexpAst> = BTreeMap::new();
    fn add(edges: &mut BTreeMap<(State, State), RegexpAst>, p: &State, q: &State, r: RegexpAst) {
        let key = (p.clone(), q.clone());
        let merged = match edges.remove(&key) {
            Some(old) => union(old, r),
            None => r,
        };
        edges.insert(key, merged);
    }
    add(&mut edges, &start, m.start(), RegexpAst::Empty);
    for f in m.finals() {
        add(&mut edges, f, &fin, RegexpAst::Empty);
    }
    for r in m.fsa_rules() {
        let label = match &r.read {
            Some(a) => RegexpAst::Sym(a.clone()),
            None => RegexpAst::Empty,
        };
        add(&mut edges, &r.from, &r.to, label);
    }

    let mut order: Vec<&State> = m.states().iter().collect();
    order.sort();
    for k in order {
        let self_loop = edges.remove(&(k.clone(), k.clone())).map(star);
        let incoming: Vec<(State, RegexpAst)> = edges
            .iter()
            .filter(|((_, to), _)| to == k)
            .map(|((from, _), r)| (from.clone(), r.clone()))
            .collect();
        let outgoing: Vec<(State, RegexpAst)> = edges
            .iter()
            .filter(|((from, _), _)| from == k)
            .map(|((_, to), r)| (to.clone(), r.clone()))
            .collect();
        edges.retain(|(from, to), _| from != k && to != k);
        for (p, rin) in &incoming {
            for (q, rout) in &outgoing {
                let mid = match &self_loop {
                    Some(l) => concat(rin.clone(), l.clone()),
                    None => rin.clone(),
                };
                add(&mut edges, p, q, concat(mid, rout.clone()));
            }
        }
    }
    Ok(edges.remove(&(start, fin)).unwrap_or(RegexpAst::Null))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::Kind;
    use crate::regexp::{concat_all, empty_regexp, symbol_regexp};
    use crate::symbol::{words_up_to, Word};
    use crate::transform::tests::{a_star_bab_star_dfa, ab, accepts, fsa, in_a_star_bab_star};
    use proptest::prelude::*;

    fn a_star_bab_star() -> RegexpAst {
        concat_all([
            kleenestar_regexp(symbol_regexp("a")),
            symbol_regexp("b"),
            symbol_regexp("a"),
            kleenestar_regexp(symbol_regexp("b")),
        ])
        .unwrap()
    }

    /// Independent matcher: the set of suffix positions reachable after matching.
    fn matches(r: &RegexpAst, w: &[Symbol]) -> bool {
        fn ends(r: &RegexpAst, w: &[Symbol], i: usize) -> Vec<usize> {
            match r {
                RegexpAst::Empty => vec![i],
                RegexpAst::Null => vec![],
                RegexpAst::Sym(a) => {
                    if w.get(i) == Some(a) {
                        vec![i + 1]
                    } else {
                        vec![]
                    }
                }
                RegexpAst::Union(x, y) => {
                    let mut v = ends(x, w, i);
                    v.extend(ends(y, w, i));
                    v.sort();
                    v.dedup();
                    v
                }
                RegexpAst::Concat(x, y) => {
                    let mut v: Vec<usize> = ends(x, w, i)
                        .into_iter()
                        .flat_map(|j| ends(y, w, j))
                        .collect();
                    v.sort();
                    v.dedup();
                    v
                }
                RegexpAst::Star(x) => {
                    let mut seen = vec![i];
                    let mut todo = vec![i];
                    while let Some(j) = todo.pop() {
                        for k in ends(x, w, j) {
                            if !seen.contains(&k) {
                                seen.push(k);
                                todo.push(k);
                            }
                        }
                    }
                    seen
                }
            }
        }
        ends(r, w, 0).contains(&w.len())
    }

    #[test]
    fn trivial_regexps() {
        let m = regexp_ast_to_fsa(&ab(), &empty_regexp()).unwrap();
        assert!(accepts(&m, &Word::empty()));
        assert!(!accepts(&m, &Word::new(["a"])));
        let m = regexp_ast_to_fsa(&ab(), &symbol_regexp("a")).unwrap();
        let lang: Vec<Word> = words_up_to(&ab(), 4)
            .into_iter()
            .filter(|w| accepts(&m, w))
            .collect();
        assert_eq!(lang, [Word::new(["a"])]);
    }

    #[test]
    fn thompson_agrees_with_the_dfa() {
        let m = regexp_ast_to_fsa(&ab(), &a_star_bab_star()).unwrap();
        assert_eq!(m.kind(), Kind::Ndfa);
        for w in words_up_to(&ab(), 8) {
            assert_eq!(accepts(&m, &w), accepts(&a_star_bab_star_dfa(), &w), "{w}");
        }
    }

    #[test]
    fn state_elimination_small_cases() {
        let m = fsa(Kind::Ndfa, &["q0"], "q0", &["q0"], &[]);
        assert_eq!(fsa_to_regexp(&m).unwrap(), RegexpAst::Empty);
        let m = fsa(
            Kind::Ndfa,
            &["q0", "q1"],
            "q0",
            &["q1"],
            &[("q0", "a", "q1")],
        );
        assert_eq!(fsa_to_regexp(&m).unwrap(), symbol_regexp("a"));
        let m = fsa(Kind::Ndfa, &["q0", "q1"], "q0", &[], &[("q0", "a", "q1")]);
        assert_eq!(fsa_to_regexp(&m).unwrap(), RegexpAst::Null);
    }

    #[test]
    fn a_star_bab_star_round_trip() {
        let r = fsa_to_regexp(&a_star_bab_star_dfa()).unwrap();
        let back = regexp_ast_to_fsa(&ab(), &r).unwrap();
        for w in words_up_to(&ab(), 8) {
            assert_eq!(accepts(&back, &w), in_a_star_bab_star(&w), "{w} via {r}");
        }
    }

    fn arb_ast() -> impl Strategy<Value = RegexpAst> {
        let leaf = prop_oneof![
            Just(RegexpAst::Empty),
            Just(RegexpAst::Null),
            Just(RegexpAst::Sym("a".into())),
            Just(RegexpAst::Sym("b".into())),
        ];
        leaf.prop_recursive(4, 16, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(x, y)| union_regexp(x, y)),
                (inner.clone(), inner.clone()).prop_map(|(x, y)| concat_regexp(x, y)),
                inner.prop_map(kleenestar_regexp),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn thompson_matches_direct_matcher(r in arb_ast()) {
            let m = regexp_ast_to_fsa(&ab(), &r).unwrap();
            for w in words_up_to(&ab(), 5) {
                prop_assert_eq!(accepts(&m, &w), matches(&r, w.symbols()), "{} on {}", r, w);
            }
        }

        #[test]
        fn elimination_preserves_language(r in arb_ast()) {
            let m = regexp_ast_to_fsa(&ab(), &r).unwrap();
            let back = fsa_to_regexp(&m).unwrap();
            for w in words_up_to(&ab(), 5) {
                prop_assert_eq!(matches(&back, w.symbols()), matches(&r, w.symbols()), "{} vs {} on {}", r, back, w);
            }
        }
    }
}
