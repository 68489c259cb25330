//! Randomized and pointwise checks of machines and grammars.
//!
//! Words are drawn from a seeded generator, so a report is a pure function
//! of its inputs, the seed, the count and the maximum length. Equivalence
//! verdicts only ever hold on the sample.

use std::fmt;

use crate::error::{Error, Result};
use crate::grammar::{DerivOutcome, Grammar};
use crate::machine::{Limits, StateMachine, Verdict};
use crate::rng::{random_word, RngState, DEFAULT_MAX_LEN, DEFAULT_SEED};
use crate::symbol::{Alphabet, Word};

pub const DEFAULT_COUNT: usize = 100;

/// How many words to draw and from which generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sample {
    pub count: usize,
    pub seed: u64,
    pub max_len: usize,
}

impl Default for Sample {
    fn default() -> Self {
        Sample {
            count: DEFAULT_COUNT,
            seed: DEFAULT_SEED,
            max_len: DEFAULT_MAX_LEN,
        }
    }
}

impl Sample {
    pub fn words(&self, sigma: &Alphabet) -> Vec<Word> {
        let mut rng = RngState::new(self.seed);
        (0..self.count)
            .map(|_| random_word(sigma, &mut rng, self.max_len))
            .collect()
    }
}

/// Result of running a machine on one word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Accept,
    Reject,
    /// The step bound ran out before a verdict.
    StepLimit,
    /// Any other run-time failure, such as a tm moving off the tape.
    Fault(Error),
}

impl Outcome {
    pub fn of(m: &StateMachine, w: &Word, limits: &Limits) -> Result<Outcome> {
        match m.apply_with(w, 0, limits) {
            Ok(Verdict::Accept) => Ok(Outcome::Accept),
            Ok(Verdict::Reject) => Ok(Outcome::Reject),
            Err(e) if e.is_step_limit() => Ok(Outcome::StepLimit),
            Err(e @ Error::WordNotOverAlphabet(_)) => Err(e),
            Err(e) => Ok(Outcome::Fault(e)),
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Accept => f.write_str("accept"),
            Outcome::Reject => f.write_str("reject"),
            Outcome::StepLimit => f.write_str("step-limit exceeded"),
            Outcome::Fault(e) => write!(f, "error: {e}"),
        }
    }
}

/// Result of trying to derive one word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Derivability {
    Derivable,
    NotDerivable,
    /// The search budget ran out.
    Undecided,
}

impl Derivability {
    pub fn of(g: &Grammar, w: &Word) -> Result<Derivability> {
        Ok(match g.derive(w)? {
            DerivOutcome::Derived(_) => Derivability::Derivable,
            DerivOutcome::NotInLanguage => Derivability::NotDerivable,
            DerivOutcome::Undecided => Derivability::Undecided,
        })
    }
}

impl fmt::Display for Derivability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Derivability::Derivable => "derivable",
            Derivability::NotDerivable => "not derivable",
            Derivability::Undecided => "undecided",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestReport<O> {
    pub entries: Vec<(Word, O)>,
    pub sample: Sample,
}

impl<O> TestReport<O> {
    pub fn count(&self) -> usize {
        self.entries.len()
    }

    pub fn seed(&self) -> u64 {
        self.sample.seed
    }
}

impl<O: fmt::Display> fmt::Display for TestReport<O> {
    /// One `(word outcome)` line per entry, as in `((a b b a) accept)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (w, o) in &self.entries {
            writeln!(f, "({w} {o})")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivReport {
    EquivalentOnSample,
    /// Every sampled word on which the two disagree, in sample order.
    Counterexamples(Vec<Word>),
}

impl EquivReport {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, EquivReport::EquivalentOnSample)
    }

    fn from_words(words: Vec<Word>) -> Self {
        if words.is_empty() {
            EquivReport::EquivalentOnSample
        } else {
            EquivReport::Counterexamples(words)
        }
    }
}

/// Grammar equivalence: disagreements, plus the words whose derivation
/// search was inconclusive for either grammar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrammarEquivReport {
    pub verdict: EquivReport,
    pub undecided: Vec<Word>,
}

fn check_both(m1: &StateMachine, m2: &StateMachine, w: &Word) -> Result<()> {
    m1.alphabet().check_word(w)?;
    m2.alphabet().check_word(w)
}

pub fn same_result_sm(m1: &StateMachine, m2: &StateMachine, w: &Word) -> Result<bool> {
    same_result_sm_with(m1, m2, w, &Limits::default())
}

pub fn same_result_sm_with(
    m1: &StateMachine,
    m2: &StateMachine,
    w: &Word,
    limits: &Limits,
) -> Result<bool> {
    check_both(m1, m2, w)?;
    Ok(Outcome::of(m1, w, limits)? == Outcome::of(m2, w, limits)?)
}

pub fn test_sm(m: &StateMachine, sample: &Sample) -> Result<TestReport<Outcome>> {
    test_sm_with(m, sample, &Limits::default())
}

pub fn test_sm_with(
    m: &StateMachine,
    sample: &Sample,
    limits: &Limits,
) -> Result<TestReport<Outcome>> {
    let entries = sample
        .words(m.alphabet())
        .into_iter()
        .map(|w| Outcome::of(m, &w, limits).map(|o| (w, o)))
        .collect::<Result<_>>()?;
    Ok(TestReport {
        entries,
        sample: *sample,
    })
}

pub fn test_equiv_sm(m1: &StateMachine, m2: &StateMachine, sample: &Sample) -> Result<EquivReport> {
    test_equiv_sm_with(m1, m2, sample, &Limits::default())
}

pub fn test_equiv_sm_with(
    m1: &StateMachine,
    m2: &StateMachine,
    sample: &Sample,
    limits: &Limits,
) -> Result<EquivReport> {
    if !m1.alphabet().same_set(m2.alphabet()) {
        return Err(Error::AlphabetMismatch(format!(
            "{:?} vs {:?}",
            m1.alphabet(),
            m2.alphabet()
        )));
    }
    let mut bad = vec![];
    for w in sample.words(m1.alphabet()) {
        if !same_result_sm_with(m1, m2, &w, limits)? {
            bad.push(w);
        }
    }
    Ok(EquivReport::from_words(bad))
}

/// True when both grammars derive `w`.
pub fn both_deriv(g1: &Grammar, g2: &Grammar, w: &Word) -> Result<bool> {
    Ok(Derivability::of(g1, w)? == Derivability::Derivable
        && Derivability::of(g2, w)? == Derivability::Derivable)
}

pub fn test_grammar(g: &Grammar, sample: &Sample) -> Result<TestReport<Derivability>> {
    let entries = sample
        .words(g.terminals())
        .into_iter()
        .map(|w| Derivability::of(g, &w).map(|d| (w, d)))
        .collect::<Result<_>>()?;
    Ok(TestReport {
        entries,
        sample: *sample,
    })
}

pub fn test_equiv_grammar(
    g1: &Grammar,
    g2: &Grammar,
    sample: &Sample,
) -> Result<GrammarEquivReport> {
    if !g1.terminals().same_set(g2.terminals()) {
        return Err(Error::AlphabetMismatch(format!(
            "{:?} vs {:?}",
            g1.terminals(),
            g2.terminals()
        )));
    }
    let mut bad = vec![];
    let mut undecided = vec![];
    for w in sample.words(g1.terminals()) {
        let d1 = Derivability::of(g1, &w)?;
        let d2 = Derivability::of(g2, &w)?;
        if d1 == Derivability::Undecided || d2 == Derivability::Undecided {
            undecided.push(w);
        } else if d1 != d2 {
            bad.push(w);
        }
    }
    Ok(GrammarEquivReport {
        verdict: EquivReport::from_words(bad),
        undecided,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::Production;
    use crate::machine::tests::correct_dfa;
    use crate::machine::FsaRule;
    use crate::regexp::{concat_all, kleenestar_regexp, symbol_regexp};
    use crate::transform::regexp_ast_to_fsa;
    use crate::transform::tests::a_star_bab_star_dfa;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    /// The first attempt at "starts and ends with a", which misses (a).
    fn buggy_dfa() -> StateMachine {
        let rules = [
            ("q0", "a", "q1"),
            ("q0", "b", "ds"),
            ("q1", "a", "q2"),
            ("q1", "b", "q1"),
            ("q2", "a", "q2"),
            ("q2", "b", "q1"),
            ("ds", "a", "ds"),
            ("ds", "b", "ds"),
        ]
        .map(|(f, b, t)| FsaRule::new(f, b, t));
        StateMachine::dfa(["q0", "q1", "q2", "ds"], ab(), "q0", ["q2"], rules).unwrap()
    }

    fn w(s: &str) -> Word {
        Word::parse(s)
    }

    #[test]
    fn same_result_pointwise() {
        let (b, c) = (buggy_dfa(), correct_dfa());
        assert!(same_result_sm(&c, &c, &w("a b")).unwrap());
        assert!(!same_result_sm(&b, &c, &w("a")).unwrap());
        assert!(same_result_sm(&b, &c, &w("a b b a")).unwrap());
        let err = same_result_sm(&b, &c, &w("a c")).unwrap_err();
        assert!(err.to_string().starts_with("word not over alphabet"));
    }

    #[test]
    fn report_sizes_and_reproducibility() {
        let m = correct_dfa();
        let r = test_sm(&m, &Sample::default()).unwrap();
        assert_eq!(r.count(), 100);
        let five = Sample {
            count: 5,
            ..Sample::default()
        };
        assert_eq!(test_sm(&m, &five).unwrap().count(), 5);
        assert_eq!(test_sm(&m, &Sample::default()).unwrap(), r);
        for (word, o) in &r.entries {
            let expected = !word.is_empty()
                && word.symbols().first().unwrap() == "a"
                && word.symbols().last().unwrap() == "a";
            assert_eq!(*o == Outcome::Accept, expected, "{word}");
        }
    }

    #[test]
    fn report_lines() {
        let r = TestReport {
            entries: vec![(w("a b b a"), Outcome::Accept), (w(""), Outcome::Reject)],
            sample: Sample::default(),
        };
        assert_eq!(r.to_string(), "((a b b a) accept)\n(() reject)\n");
    }

    #[test]
    fn equivalence_on_sample() {
        let m = correct_dfa();
        assert!(test_equiv_sm(&m, &m, &Sample::default())
            .unwrap()
            .is_equivalent());
        let r = concat_all([
            kleenestar_regexp(symbol_regexp("a")),
            symbol_regexp("b"),
            symbol_regexp("a"),
            kleenestar_regexp(symbol_regexp("b")),
        ])
        .unwrap();
        let n = regexp_ast_to_fsa(&ab(), &r).unwrap();
        assert!(
            test_equiv_sm(&a_star_bab_star_dfa(), &n, &Sample::default())
                .unwrap()
                .is_equivalent()
        );
    }

    #[test]
    fn buggy_machine_counterexamples() {
        let (b, c) = (buggy_dfa(), correct_dfa());
        let EquivReport::Counterexamples(ws) = test_equiv_sm(&b, &c, &Sample::default()).unwrap()
        else {
            panic!("expected counterexamples");
        };
        for x in &ws {
            assert!(!same_result_sm(&b, &c, x).unwrap());
        }
    }

    #[test]
    fn alphabet_mismatch() {
        let other = StateMachine::dfa(
            ["q"],
            Alphabet::new(["a"]).unwrap(),
            "q",
            ["q"],
            [FsaRule::new("q", "a", "q")],
        )
        .unwrap();
        let err = test_equiv_sm(&correct_dfa(), &other, &Sample::default()).unwrap_err();
        assert!(err.to_string().starts_with("alphabet mismatch"));
    }

    #[test]
    fn tm_timeouts_are_entries() {
        let sigma = Alphabet::new(["a"]).unwrap();
        let tm = StateMachine::tm(
            ["s", "h"],
            sigma,
            [
                crate::machine::TmRule::new("s", "a", "s", "R"),
                crate::machine::TmRule::new("s", "_", "s", "R"),
            ],
            "s",
            ["h"],
        )
        .unwrap();
        let r = test_sm_with(
            &tm,
            &Sample {
                count: 3,
                ..Sample::default()
            },
            &Limits::with_step_limit(20),
        )
        .unwrap();
        assert!(r.entries.iter().all(|(_, o)| *o == Outcome::StepLimit));
    }

    fn anbn() -> Grammar {
        crate::grammar::tests::anbn()
    }

    fn a_star_b_star() -> Grammar {
        Grammar::cfg(
            ["S", "A", "B", "a", "b"],
            ab(),
            [
                Production::parse("S", "A B"),
                Production::parse("A", "a A"),
                Production::parse("A", "ε"),
                Production::parse("B", "b B"),
                Production::parse("B", "ε"),
            ],
            "S",
        )
        .unwrap()
    }

    #[test]
    fn grammar_testers() {
        let g = anbn();
        assert!(both_deriv(&g, &g, &w("a b")).unwrap());
        let renamed = g.rename_nts(g.nonterminals());
        assert_ne!(renamed.start(), g.start());
        let sample = Sample {
            count: 30,
            max_len: 8,
            ..Sample::default()
        };
        let r = test_equiv_grammar(&g, &renamed, &sample).unwrap();
        assert!(r.verdict.is_equivalent());
        let r = test_equiv_grammar(&g, &a_star_b_star(), &sample).unwrap();
        let EquivReport::Counterexamples(ws) = r.verdict else {
            panic!("expected counterexamples")
        };
        for x in &ws {
            assert_ne!(
                Derivability::of(&g, x).unwrap(),
                Derivability::of(&a_star_b_star(), x).unwrap()
            );
        }
        let report = test_grammar(&g, &sample).unwrap();
        assert_eq!(report.count(), 30);
    }
}
