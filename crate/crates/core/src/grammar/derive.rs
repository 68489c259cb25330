//! Breadth-first derivation search.
//!
//! For rg and cfg only leftmost rewrites are explored, which loses no words
//! and no derivation lengths. Forms are dropped when their fixed terminal
//! prefix disagrees with the target word, when their terminals cannot be
//! matched in order, or when their shortest possible yield is longer than
//! the word. Those cuts are exact. Forms longer than `|w| + slack` are also
//! dropped, but that cut is not exact: if it ever fires and nothing is
//! found, the answer is [`DerivOutcome::Undecided`] rather than
//! [`DerivOutcome::NotInLanguage`]. csg searches rewrite at every position
//! and rely on the length cut alone.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use super::{Grammar, GrammarKind};
use crate::error::Result;
use crate::symbol::{Symbol, Word, EMP};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DerivBudget {
    /// Sentential forms taken off the queue before giving up.
    pub max_expansions: usize,
    /// Forms longer than `|w| + length_slack` are cut.
    pub length_slack: usize,
}

impl Default for DerivBudget {
    fn default() -> Self {
        DerivBudget {
            max_expansions: 100_000,
            length_slack: 5,
        }
    }
}

/// Sentential forms from the start symbol to the word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub steps: Vec<Vec<Symbol>>,
}

impl Derivation {
    pub fn word(&self) -> &[Symbol] {
        self.steps.last().map(Vec::as_slice).unwrap_or(&[])
    }

    /// Checks the derivation step by step against `g`: it starts at the
    /// start symbol, each form follows from the previous one by rewriting
    /// one occurrence of some production's lhs, and it ends at `w`.
    pub fn is_valid_for(&self, g: &Grammar, w: &Word) -> bool {
        let Some(first) = self.steps.first() else {
            return false;
        };
        first.as_slice() == [g.start().clone()]
            && self.word() == w.symbols()
            && self
                .steps
                .windows(2)
                .all(|pair| one_step(g, &pair[0], &pair[1]))
    }
}

fn one_step(g: &Grammar, from: &[Symbol], to: &[Symbol]) -> bool {
    g.productions().iter().any(|p| {
        let (l, r) = (p.lhs.len(), p.rhs.len());
        if from.len() < l || from.len() - l + r != to.len() {
            return false;
        }
        (0..=from.len() - l).any(|i| {
            from[i..i + l] == p.lhs[..]
                && to[..i] == from[..i]
                && to[i..i + r] == p.rhs[..]
                && to[i + r..] == from[i + l..]
        })
    })
}

impl fmt::Display for Derivation {
    /// `S ⇒ a S b ⇒ a b`; an empty form prints as `ε`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, form) in self.steps.iter().enumerate() {
            if i > 0 {
                f.write_str(" ⇒ ")?;
            }
            if form.is_empty() {
                f.write_str(EMP)?;
            } else {
                let parts: Vec<&str> = form.iter().map(Symbol::as_str).collect();
                f.write_str(&parts.join(" "))?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DerivOutcome {
    Derived(Derivation),
    NotInLanguage,
    Undecided,
}

impl DerivOutcome {
    pub fn is_derived(&self) -> bool {
        matches!(self, DerivOutcome::Derived(_))
    }
}

/// Shortest terminal yield of each nonterminal of a cfg/rg (`None` when it
/// derives no terminal string).
pub fn min_yields(g: &Grammar) -> HashMap<Symbol, Option<usize>> {
    let mut best: HashMap<Symbol, Option<usize>> =
        g.nonterminals().iter().map(|n| (n.clone(), None)).collect();
    loop {
        let mut changed = false;
        for p in g.productions() {
            let Some(lhs) = p.lhs.first().filter(|_| p.lhs.len() == 1) else {
                continue;
            };
            let total = p.rhs.iter().try_fold(0usize, |acc, s| {
                if g.is_terminal(s) {
                    Some(acc + 1)
                } else {
                    best.get(s).copied().flatten().map(|n| acc + n)
                }
            });
            if let Some(t) = total {
                let cur = best.get_mut(lhs).expect("lhs is a nonterminal");
                if cur.is_none_or(|c| t < c) {
                    *cur = Some(t);
                    changed = true;
                }
            }
        }
        if !changed {
            return best;
        }
    }
}

struct Pruner<'a> {
    g: &'a Grammar,
    w: &'a [Symbol],
    min: HashMap<Symbol, Option<usize>>,
}

impl Pruner<'_> {
    /// False when no word derivable from `form` can be `w`.
    fn viable(&self, form: &[Symbol]) -> bool {
        let w = self.w;
        let first_nt = form
            .iter()
            .position(|s| !self.g.is_terminal(s))
            .unwrap_or(form.len());
        if first_nt > w.len() || form[..first_nt] != w[..first_nt] {
            return false;
        }
        let last_nt = form.iter().rposition(|s| !self.g.is_terminal(s));
        if let Some(last) = last_nt {
            let suffix = &form[last + 1..];
            if suffix.len() > w.len() || !w.ends_with(suffix) {
                return false;
            }
        }
        let mut min_len = 0usize;
        for s in form {
            if self.g.is_terminal(s) {
                min_len += 1;
            } else {
                match self.min.get(s).copied().flatten() {
                    Some(n) => min_len += n,
                    None => return false,
                }
            }
        }
        if min_len > w.len() {
            return false;
        }
        // Terminals must occur in `w` in order.
        let mut it = w.iter();
        form.iter()
            .filter(|s| self.g.is_terminal(s))
            .all(|t| it.any(|x| x == t))
    }
}

impl Grammar {
    /// Looks for a shortest derivation of `w` with the default budget.
    pub fn derive(&self, w: &Word) -> Result<DerivOutcome> {
        self.derive_with(w, &DerivBudget::default())
    }

    pub fn derive_with(&self, w: &Word, budget: &DerivBudget) -> Result<DerivOutcome> {
        self.sigma.check_word(w)?;
        let target = w.symbols();
        let leftmost = self.kind != GrammarKind::Csg;
        let pruner = leftmost.then(|| Pruner {
            g: self,
            w: target,
            min: min_yields(self),
        });
        let cap = target.len() + budget.length_slack;

        let start = vec![self.start.clone()];
        let mut forms: Vec<(Vec<Symbol>, Option<usize>)> = vec![(start.clone(), None)];
        let mut seen: HashSet<Vec<Symbol>> = HashSet::from([start]);
        let mut queue = VecDeque::from([0usize]);
        let mut truncated = false;
        let mut expansions = 0usize;

        let unwind = |forms: &[(Vec<Symbol>, Option<usize>)], mut at: usize| {
            let mut steps = vec![];
            loop {
                steps.push(forms[at].0.clone());
                match forms[at].1 {
                    Some(p) => at = p,
                    None => break,
                }
            }
            steps.reverse();
            Derivation { steps }
        };

        while let Some(at) = queue.pop_front() {
            if expansions >= budget.max_expansions {
                return Ok(DerivOutcome::Undecided);
            }
            expansions += 1;
            let form = forms[at].0.clone();
            let positions: Vec<usize> = if leftmost {
                form.iter()
                    .position(|s| self.is_nonterminal(s))
                    .into_iter()
                    .collect()
            } else {
                (0..form.len()).collect()
            };
            for p in &self.rules {
                for &i in &positions {
                    if !form[i..].starts_with(&p.lhs) {
                        continue;
                    }
                    let mut next = form[..i].to_vec();
                    next.extend(p.rhs.iter().cloned());
                    next.extend(form[i + p.lhs.len()..].iter().cloned());
                    if seen.contains(&next) {
                        continue;
                    }
                    if next.as_slice() == target {
                        forms.push((next, Some(at)));
                        return Ok(DerivOutcome::Derived(unwind(&forms, forms.len() - 1)));
                    }
                    if let Some(pr) = &pruner {
                        if !pr.viable(&next) {
                            continue;
                        }
                    }
                    if next.len() > cap {
                        truncated = true;
                        continue;
                    }
                    seen.insert(next.clone());
                    forms.push((next, Some(at)));
                    queue.push_back(forms.len() - 1);
                }
            }
        }
        Ok(if truncated {
            DerivOutcome::Undecided
        } else {
            DerivOutcome::NotInLanguage
        })
    }
}
