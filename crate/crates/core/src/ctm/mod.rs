//! Combined Turing machines.
//!
//! A combined machine is a small program whose instructions are whole tms:
//! each embedded tm runs to its final state, and the tape and head it leaves
//! behind seed the next one. Programs can also branch on the symbol under
//! the head, jump to labels, and capture the symbol under the head in a
//! variable that later write instructions can refer to.

pub mod library;

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::machine::{Kind, Limits, StateMachine, TmConfig};
use crate::symbol::{Alphabet, Symbol};

/// The state reported when the last instruction was not an embedded tm.
pub const HALT_STATE: &str = "h";

/// A tm together with the name it is referred to by.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedTm {
    pub name: String,
    pub tm: Arc<StateMachine>,
}

impl NamedTm {
    pub fn new(name: impl Into<String>, tm: StateMachine) -> Self {
        NamedTm {
            name: name.into(),
            tm: Arc::new(tm),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CtmItem {
    Tm(NamedTm),
    /// Writes a symbol, or the value captured by a variable of that name.
    Write(Symbol),
    Label(Symbol),
    Goto(Symbol),
    Branch(Vec<(Symbol, CtmDescription)>),
    Var(Symbol, CtmDescription),
    Seq(CtmDescription),
}

/// A sequence of items; the empty sequence does nothing.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CtmDescription(pub Vec<CtmItem>);

impl CtmDescription {
    pub fn new(items: Vec<CtmItem>) -> Self {
        CtmDescription(items)
    }

    pub fn items(&self) -> &[CtmItem] {
        &self.0
    }
}

impl From<Vec<CtmItem>> for CtmDescription {
    fn from(items: Vec<CtmItem>) -> Self {
        CtmDescription(items)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Instr {
    Run(usize),
    Write(Symbol),
    WriteVar(usize, Symbol),
    Bind(usize),
    Branch(Vec<(Symbol, usize)>),
    Jump(usize),
    Halt,
}

/// A validated combined machine with its gotos linked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ctm {
    description: CtmDescription,
    sigma: Alphabet,
    tms: Vec<Arc<StateMachine>>,
    program: Vec<Instr>,
    slots: usize,
}

struct Compiler<'a> {
    sigma: &'a Alphabet,
    program: Vec<Instr>,
    tms: Vec<Arc<StateMachine>>,
    labels: HashMap<Symbol, usize>,
    gotos: Vec<(usize, Symbol)>,
    slots: usize,
}

impl Compiler<'_> {
    fn is_tape_symbol(&self, s: &Symbol) -> bool {
        s.is_blank() || self.sigma.contains(s)
    }

    fn check_tm(&self, named: &NamedTm) -> Result<()> {
        let tm = &named.tm;
        if tm.kind() != Kind::Tm {
            return Err(Error::KindMismatch(tm.kind().name(), "tm"));
        }
        if let Some(s) = tm.alphabet().iter().find(|s| !self.sigma.contains(s)) {
            return Err(Error::AlphabetMismatch(format!(
                "{} uses {s}, which is not in the combined machine's alphabet",
                named.name
            )));
        }
        Ok(())
    }

    fn compile(&mut self, d: &CtmDescription, env: &mut Vec<(Symbol, usize)>) -> Result<()> {
        for item in d.items() {
            match item {
                CtmItem::Tm(named) => {
                    self.check_tm(named)?;
                    self.tms.push(named.tm.clone());
                    self.program.push(Instr::Run(self.tms.len() - 1));
                }
                CtmItem::Write(x) => {
                    if let Some((_, slot)) = env.iter().rev().find(|(v, _)| v == x) {
                        self.program.push(Instr::WriteVar(*slot, x.clone()));
                    } else if self.is_tape_symbol(x) {
                        self.program.push(Instr::Write(x.clone()));
                    } else {
                        return Err(Error::UnknownComponent(format!(
                            "write target {x} is neither a tape symbol nor a bound variable"
                        )));
                    }
                }
                CtmItem::Label(l) => {
                    if self.labels.insert(l.clone(), self.program.len()).is_some() {
                        return Err(Error::DuplicateLabel(l.to_string()));
                    }
                }
                CtmItem::Goto(l) => {
                    self.gotos.push((self.program.len(), l.clone()));
                    self.program.push(Instr::Jump(usize::MAX));
                }
                CtmItem::Branch(arms) => {
                    let mut guards = HashSet::new();
                    for (g, _) in arms {
                        if !self.is_tape_symbol(g) {
                            return Err(Error::UnknownComponent(format!("branch guard {g}")));
                        }
                        if !guards.insert(g) {
                            return Err(Error::AmbiguousBranch(g.to_string()));
                        }
                    }
                    let at = self.program.len();
                    self.program.push(Instr::Branch(vec![]));
                    let mut table = vec![];
                    let mut exits = vec![];
                    for (g, body) in arms {
                        table.push((g.clone(), self.program.len()));
                        self.compile(body, env)?;
                        exits.push(self.program.len());
                        self.program.push(Instr::Jump(usize::MAX));
                    }
                    let end = self.program.len();
                    for e in exits {
                        self.program[e] = Instr::Jump(end);
                    }
                    self.program[at] = Instr::Branch(table);
                }
                CtmItem::Var(v, body) => {
                    if self.is_tape_symbol(v) {
                        return Err(Error::UnknownComponent(format!(
                            "variable {v} is an alphabet symbol"
                        )));
                    }
                    let slot = self.slots;
                    self.slots += 1;
                    self.program.push(Instr::Bind(slot));
                    env.push((v.clone(), slot));
                    let r = self.compile(body, env);
                    env.pop();
                    r?;
                }
                CtmItem::Seq(inner) => self.compile(inner, env)?,
            }
        }
        Ok(())
    }
}

/// Validates `description` against `sigma` and links its gotos.
pub fn combine_tms(description: CtmDescription, sigma: Alphabet) -> Result<Ctm> {
    let mut c = Compiler {
        sigma: &sigma,
        program: vec![],
        tms: vec![],
        labels: HashMap::new(),
        gotos: vec![],
        slots: 0,
    };
    c.compile(&description, &mut vec![])?;
    c.program.push(Instr::Halt);
    for (at, label) in std::mem::take(&mut c.gotos) {
        let target = *c
            .labels
            .get(&label)
            .ok_or_else(|| Error::UnresolvedGoto(label.to_string()))?;
        c.program[at] = Instr::Jump(target);
    }
    let Compiler {
        program,
        tms,
        slots,
        ..
    } = c;
    Ok(Ctm {
        description,
        sigma,
        tms,
        program,
        slots,
    })
}

impl Ctm {
    pub fn description(&self) -> &CtmDescription {
        &self.description
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.sigma
    }

    /// Runs the program on `tape` with the head at `head`.
    pub fn apply(&self, tape: Vec<Symbol>, head: usize) -> Result<TmConfig> {
        self.apply_with(tape, head, &Limits::default())
    }

    pub fn apply_with(&self, tape: Vec<Symbol>, head: usize, limits: &Limits) -> Result<TmConfig> {
        if head >= tape.len() {
            return Err(Error::HeadOutOfRange {
                head,
                len: tape.len(),
            });
        }
        if let Some(s) = tape
            .iter()
            .find(|s| !s.is_blank() && !self.sigma.contains(s))
        {
            return Err(Error::WordNotOverAlphabet(s.to_string()));
        }
        let mut config = TmConfig::new(Symbol::new(HALT_STATE), head, tape);
        let mut vars: Vec<Option<Symbol>> = vec![None; self.slots];
        let mut pc = 0;
        for _ in 0..limits.ctm_dispatches {
            match &self.program[pc] {
                Instr::Halt => return Ok(config),
                Instr::Run(i) => {
                    let tm = &self.tms[*i];
                    let start = TmConfig {
                        state: tm.start().clone(),
                        ..config
                    };
                    config = tm.run_tm_to_halt(start, limits)?;
                    pc += 1;
                }
                Instr::Write(s) => {
                    config.tape[config.head] = s.clone();
                    config.state = Symbol::new(HALT_STATE);
                    pc += 1;
                }
                Instr::WriteVar(slot, name) => {
                    let s = vars[*slot]
                        .clone()
                        .ok_or_else(|| Error::UnboundVariable(name.to_string()))?;
                    config.tape[config.head] = s;
                    config.state = Symbol::new(HALT_STATE);
                    pc += 1;
                }
                Instr::Bind(slot) => {
                    vars[*slot] = Some(config.read().clone());
                    pc += 1;
                }
                Instr::Branch(table) => {
                    let read = config.read();
                    pc = table
                        .iter()
                        .find(|(g, _)| g == read)
                        .map(|(_, t)| *t)
                        .ok_or_else(|| Error::NoBranchForSymbol(read.to_string()))?;
                }
                Instr::Jump(t) => pc = *t,
            }
        }
        Err(Error::StepLimitExceeded(limits.ctm_dispatches))
    }
}

#[cfg(test)]
mod tests {
    use super::library::*;
    use super::*;
    use crate::symbol::symbols;
    use proptest::prelude::*;

    fn sigma() -> Alphabet {
        Alphabet::new(["I", "sub1", "add1"]).unwrap()
    }

    fn tm(name: &str) -> CtmItem {
        let s = sigma();
        let m = match name {
            "I" => write(&s, &Symbol::new("I")),
            other => builtin(other, &s).expect("builtin"),
        }
        .unwrap();
        CtmItem::Tm(NamedTm::new(name, m))
    }

    fn seq(names: &str) -> Vec<CtmItem> {
        names.split_whitespace().map(tm).collect()
    }

    fn addorsub(add_arm: &str, sub_arm: &str) -> Ctm {
        let mut items = seq("LB LI");
        items.push(CtmItem::Branch(vec![
            (Symbol::new("sub1"), seq(sub_arm).into()),
            (Symbol::new("add1"), seq(add_arm).into()),
        ]));
        combine_tms(items.into(), sigma()).unwrap()
    }

    fn tape(s: &str) -> Vec<Symbol> {
        symbols(s.split_whitespace())
    }

    #[test]
    fn buggy_addorsub_transcript() {
        let c = addorsub("RB I RI", "RB LI BL");
        let out = c.apply(tape("add1 _ I I I I _"), 6).unwrap();
        assert_eq!(out.to_string(), "(h 2 (add1 I I I I I _))");
    }

    #[test]
    fn fixed_addorsub_transcripts() {
        let c = addorsub("RB RB I RI", "RB RB LI BL");
        let out = c.apply(tape("add1 _ I I I I _"), 6).unwrap();
        assert_eq!(out.to_string(), "(h 7 (add1 _ I I I I I _))");
        let out = c.apply(tape("sub1 _ I I I I I I I _"), 9).unwrap();
        assert_eq!(out.to_string(), "(h 8 (sub1 _ I I I I I I _ _))");
    }

    #[test]
    fn dangling_goto() {
        let d = vec![CtmItem::Goto(Symbol::new("X"))];
        assert_eq!(
            combine_tms(d.into(), sigma()).unwrap_err(),
            Error::UnresolvedGoto("X".into())
        );
    }

    #[test]
    fn duplicate_label_and_guard() {
        let d = vec![
            CtmItem::Label(Symbol::new("X")),
            CtmItem::Seq(vec![CtmItem::Label(Symbol::new("X"))].into()),
        ];
        assert_eq!(
            combine_tms(d.into(), sigma()).unwrap_err(),
            Error::DuplicateLabel("X".into())
        );
        let d = vec![CtmItem::Branch(vec![
            (Symbol::new("I"), seq("RI").into()),
            (Symbol::new("I"), seq("LI").into()),
        ])];
        assert_eq!(
            combine_tms(d.into(), sigma()).unwrap_err(),
            Error::AmbiguousBranch("I".into())
        );
    }

    #[test]
    fn missing_branch_arm() {
        let d = vec![CtmItem::Branch(vec![(Symbol::new("I"), seq("RI").into())])];
        let c = combine_tms(d.into(), sigma()).unwrap();
        assert_eq!(
            c.apply(tape("add1"), 0).unwrap_err(),
            Error::NoBranchForSymbol("add1".into())
        );
    }

    #[test]
    fn branch_on_blank() {
        let d = vec![CtmItem::Branch(vec![
            (Symbol::new("_"), seq("I").into()),
            (Symbol::new("I"), seq("BL").into()),
        ])];
        let c = combine_tms(d.into(), sigma()).unwrap();
        assert_eq!(c.apply(tape("_"), 0).unwrap().to_string(), "(h 0 (I))");
        assert_eq!(c.apply(tape("I"), 0).unwrap().to_string(), "(h 0 (_))");
    }

    #[test]
    fn foreign_tm_alphabet_rejected() {
        let other = Alphabet::new(["z"]).unwrap();
        let d = vec![CtmItem::Tm(NamedTm::new("RI", move_right(&other).unwrap()))];
        assert!(matches!(
            combine_tms(d.into(), sigma()),
            Err(Error::AlphabetMismatch(_))
        ));
    }

    #[test]
    fn goto_loop_hits_dispatch_budget() {
        let d = vec![
            CtmItem::Label(Symbol::new("X")),
            CtmItem::Goto(Symbol::new("X")),
        ];
        let c = combine_tms(d.into(), sigma()).unwrap();
        assert_eq!(
            c.apply(tape("I"), 0).unwrap_err(),
            Error::StepLimitExceeded(10_000)
        );
    }

    #[test]
    fn var_captures_and_writes() {
        // Copy the symbol under the head one cell to the right.
        let d = vec![CtmItem::Var(
            Symbol::new("k"),
            vec![tm("RI"), CtmItem::Write(Symbol::new("k"))].into(),
        )];
        let c = combine_tms(d.into(), sigma()).unwrap();
        assert_eq!(
            c.apply(tape("add1 _"), 0).unwrap().to_string(),
            "(h 1 (add1 add1))"
        );
    }

    #[test]
    fn nested_vars_shadow() {
        let d = vec![CtmItem::Var(
            Symbol::new("k"),
            vec![
                tm("RI"),
                CtmItem::Var(
                    Symbol::new("k"),
                    vec![tm("RI"), CtmItem::Write(Symbol::new("k"))].into(),
                ),
            ]
            .into(),
        )];
        let c = combine_tms(d.into(), sigma()).unwrap();
        assert_eq!(
            c.apply(tape("add1 sub1 _"), 0).unwrap().to_string(),
            "(h 2 (add1 sub1 sub1))"
        );
    }

    #[test]
    fn write_of_unbound_name_rejected() {
        let d = vec![CtmItem::Write(Symbol::new("k"))];
        assert!(matches!(
            combine_tms(d.into(), sigma()),
            Err(Error::UnknownComponent(_))
        ));
    }

    #[test]
    fn head_must_be_on_tape() {
        let c = combine_tms(CtmDescription::default(), sigma()).unwrap();
        assert!(matches!(
            c.apply(tape("I"), 1),
            Err(Error::HeadOutOfRange { .. })
        ));
    }

    #[test]
    fn labels_and_gotos_match_unrolled_loop() {
        // Move right over I's until a non-I, looping through a label; compare
        // with the same program unrolled twice for tapes with two I's.
        let looped = vec![
            CtmItem::Label(Symbol::new("top")),
            CtmItem::Branch(vec![
                (
                    Symbol::new("I"),
                    vec![tm("RI"), CtmItem::Goto(Symbol::new("top"))].into(),
                ),
                (Symbol::new("_"), CtmDescription::default()),
            ]),
        ];
        let unrolled = vec![tm("RI"), tm("RI")];
        let a = combine_tms(looped.into(), sigma()).unwrap();
        let b = combine_tms(unrolled.into(), sigma()).unwrap();
        for t in ["I I _", "I I _ I", "I I"] {
            let ra = a.apply(tape(t), 0).unwrap();
            let rb = b.apply(tape(t), 0).unwrap();
            assert_eq!((ra.head, &ra.tape), (rb.head, &rb.tape), "{t}");
        }
    }

    fn cell() -> impl Strategy<Value = &'static str> {
        prop_oneof![Just("I"), Just("add1"), Just("sub1"), Just("_")]
    }

    proptest! {
        #[test]
        fn empty_description_is_identity(cells in proptest::collection::vec(cell(), 1..10), h in 0usize..10) {
            let t = symbols(cells);
            let head = h % t.len();
            let c = combine_tms(CtmDescription::default(), sigma()).unwrap();
            let out = c.apply(t.clone(), head).unwrap();
            prop_assert_eq!(out.tape, t);
            prop_assert_eq!(out.head, head);
        }

        #[test]
        fn sequencing_composes(
            cells in proptest::collection::vec(cell(), 1..10),
            h in 0usize..10,
            first in proptest::collection::vec(prop_oneof![Just("RI"), Just("I"), Just("BL"), Just("RB")], 0..4),
            second in proptest::collection::vec(prop_oneof![Just("RI"), Just("I"), Just("BL"), Just("RB")], 0..4),
        ) {
            let t = symbols(cells);
            let head = h % t.len();
            let c1 = combine_tms(first.iter().map(|n| tm(n)).collect::<Vec<_>>().into(), sigma()).unwrap();
            let c2 = combine_tms(second.iter().map(|n| tm(n)).collect::<Vec<_>>().into(), sigma()).unwrap();
            let both: Vec<CtmItem> = vec![
                CtmItem::Seq(first.iter().map(|n| tm(n)).collect::<Vec<_>>().into()),
                CtmItem::Seq(second.iter().map(|n| tm(n)).collect::<Vec<_>>().into()),
            ];
            let c12 = combine_tms(both.into(), sigma()).unwrap();
            let mid = c1.apply(t.clone(), head).unwrap();
            let end = c2.apply(mid.tape.clone(), mid.head).unwrap();
            let direct = c12.apply(t, head).unwrap();
            prop_assert_eq!(direct, end);
        }
    }
}
