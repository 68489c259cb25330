//! Text definitions of machines, grammars, regular expressions and combined
//! tms.
//!
//! ```text
//! (dfa (states q0 q1) (sigma a b) (start q0) (finals q1)
//!      (rules (q0 a q1) (q0 b q0) (q1 a q1) (q1 b q0)))
//! (pda (states s f) (sigma a) (gamma x) (start s) (finals f)
//!      (rules ((s a ε) (f (x)))))
//! (tm (states s h) (sigma I) (start s) (finals h) (rules ((s I) (h R))))
//! (cfg (nonterminals S) (sigma a b) (start S) (rules (S -> a S b) (S -> ε)))
//! (regexp (sigma a b) "(a ∪ ε)")
//! (ctm (sigma I) (tms (W (tm …))) (program RB (LABEL top) W (GOTO top)))
//! ```
//!
//! Stack sequences in pda rules are `ε` or a list with the top first. A ctm
//! program may use the builtins RI, LI, RB, LB and BL without defining them.

use std::collections::HashSet;

use crate::ctm::library::{builtin, BUILTIN_NAMES};
use crate::ctm::{combine_tms, Ctm, CtmDescription, CtmItem, NamedTm};
use crate::error::{Error, Result};
use crate::grammar::{Grammar, GrammarKind, Production, ARROW};
use crate::machine::{FsaRule, Kind, PdaRule, StateMachine, TmRule};
use crate::regexp::Regexp;
use crate::sexpr::{read_one, Sexpr};
use crate::symbol::{Alphabet, Symbol, EMP};
use crate::transform;

const CTM_KEYWORDS: [&str; 5] = ["LABEL", "GOTO", "WRITE", "BRANCH", "VAR"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Definition {
    Machine(StateMachine),
    Ctm(Ctm),
    Grammar(Grammar),
    Regexp(Regexp),
}

impl Definition {
    pub fn tag(&self) -> &'static str {
        match self {
            Definition::Machine(m) => m.kind().name(),
            Definition::Ctm(_) => "ctm",
            Definition::Grammar(g) => g.kind().name(),
            Definition::Regexp(_) => "regexp",
        }
    }
}

/// A parsed definition plus any non-fatal remarks about it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parsed {
    pub definition: Definition,
    pub warnings: Vec<String>,
}

pub fn parse_definition(text: &str) -> Result<Definition> {
    Ok(parse_definition_with_warnings(text)?.definition)
}

pub fn parse_definition_with_warnings(text: &str) -> Result<Parsed> {
    let doc = read_one(text)?;
    let mut warnings = vec![];
    let definition = parse_form(&doc, &mut warnings)?;
    Ok(Parsed {
        definition,
        warnings,
    })
}

fn parse_form(doc: &Sexpr, warnings: &mut Vec<String>) -> Result<Definition> {
    let items = doc
        .as_list()
        .ok_or_else(|| doc.error("expected a parenthesized definition"))?;
    let tag = items
        .first()
        .and_then(Sexpr::as_atom)
        .ok_or_else(|| doc.error("expected a definition tag"))?;
    let body = &items[1..];
    let located = |r: Result<Definition>| r.map_err(|e| doc.locate(e));
    match tag {
        "dfa" | "ndfa" | "pda" | "tm" => {
            located(parse_machine(tag, body, doc, warnings).map(Definition::Machine))
        }
        "rg" | "cfg" | "csg" => {
            located(parse_grammar(tag, body, doc, warnings).map(Definition::Grammar))
        }
        "regexp" => located(parse_regexp(body, doc)),
        "ctm" => located(parse_ctm(body, doc, warnings)),
        other => Err(items[0].error(format!("unknown definition tag {other}"))),
    }
}

/// The named sections of a definition body, each checked to appear once.
struct Sections<'a> {
    found: Vec<(&'a str, &'a Sexpr, &'a [Sexpr])>,
}

impl<'a> Sections<'a> {
    fn new(body: &'a [Sexpr], allowed: &[&str]) -> Result<Self> {
        let mut found: Vec<(&str, &Sexpr, &[Sexpr])> = vec![];
        for s in body {
            let items = s.as_list().ok_or_else(|| s.error("expected a section"))?;
            let name = items
                .first()
                .and_then(Sexpr::as_atom)
                .ok_or_else(|| s.error("expected a section name"))?;
            if !allowed.contains(&name) {
                return Err(s.error(format!("unknown section {name}")));
            }
            if found.iter().any(|(n, _, _)| *n == name) {
                return Err(s.error(format!("duplicate section {name}")));
            }
            found.push((name, s, &items[1..]));
        }
        Ok(Sections { found })
    }

    fn get(&self, name: &str, doc: &Sexpr) -> Result<(&'a Sexpr, &'a [Sexpr])> {
        self.found
            .iter()
            .find(|(n, _, _)| *n == name)
            .map(|(_, s, items)| (*s, *items))
            .ok_or_else(|| doc.error(format!("missing section {name}")))
    }

    fn optional(&self, name: &str) -> Option<&'a [Sexpr]> {
        self.found
            .iter()
            .find(|(n, _, _)| *n == name)
            .map(|(_, _, i)| *i)
    }

    fn atoms(&self, name: &str, doc: &Sexpr) -> Result<Vec<Symbol>> {
        atoms(self.get(name, doc)?.1)
    }

    fn single(&self, name: &str, doc: &Sexpr) -> Result<Symbol> {
        let (s, items) = self.get(name, doc)?;
        match atoms(items)?.as_slice() {
            [one] => Ok(one.clone()),
            _ => Err(s.error(format!("{name} takes exactly one token"))),
        }
    }

    fn alphabet(&self, name: &str, doc: &Sexpr) -> Result<Alphabet> {
        let (s, items) = self.get(name, doc)?;
        Alphabet::new(atoms(items)?).map_err(|e| s.locate(e))
    }
}

fn atom(x: &Sexpr) -> Result<Symbol> {
    x.as_atom()
        .map(Symbol::new)
        .ok_or_else(|| x.error("expected a token"))
}

fn atoms(xs: &[Sexpr]) -> Result<Vec<Symbol>> {
    xs.iter().map(atom).collect()
}

fn list<'a>(x: &'a Sexpr, len: usize, what: &str) -> Result<&'a [Sexpr]> {
    match x.as_list() {
        Some(v) if v.len() == len => Ok(v),
        _ => Err(x.error(format!("expected {what}"))),
    }
}

/// Rule forms in order, warning about exact repeats.
fn rule_forms<'a>(items: &'a [Sexpr], warnings: &mut Vec<String>) -> Vec<&'a Sexpr> {
    let mut seen = HashSet::new();
    let mut out = vec![];
    for r in items {
        if seen.insert(r.to_string()) {
            out.push(r);
        } else {
            let p = r.pos();
            warnings.push(format!(
                "{}:{}: duplicate rule {r} ignored",
                p.line, p.column
            ));
        }
    }
    out
}

/// `ε` or a list of stack symbols, top first.
fn stack_seq(x: &Sexpr) -> Result<Vec<Symbol>> {
    match x {
        Sexpr::Atom(..) => {
            let s = atom(x)?;
            if s.is_empty_marker() {
                Ok(vec![])
            } else {
                Err(x.error("expected ε or a list of stack symbols"))
            }
        }
        Sexpr::List(v, _) => atoms(v),
        Sexpr::Str(..) => Err(x.error("expected ε or a list of stack symbols")),
    }
}

fn parse_machine(
    tag: &str,
    body: &[Sexpr],
    doc: &Sexpr,
    warnings: &mut Vec<String>,
) -> Result<StateMachine> {
    let allowed: &[&str] = if tag == "pda" {
        &["states", "sigma", "gamma", "start", "finals", "rules"]
    } else {
        &["states", "sigma", "start", "finals", "rules"]
    };
    let s = Sections::new(body, allowed)?;
    let states = s.atoms("states", doc)?;
    let sigma = s.alphabet("sigma", doc)?;
    let start = s.single("start", doc)?;
    let finals = s.atoms("finals", doc)?;
    let (_, rules) = s.get("rules", doc)?;
    let rules = rule_forms(rules, warnings);
    match tag {
        "dfa" | "ndfa" => {
            let rules = rules
                .into_iter()
                .map(|r| {
                    let v = list(r, 3, "a rule (from symbol to)")?;
                    Ok(FsaRule::new(atom(&v[0])?, atom(&v[1])?, atom(&v[2])?))
                })
                .collect::<Result<Vec<_>>>()?;
            if tag == "dfa" {
                StateMachine::dfa(states, sigma, start, finals, rules)
            } else {
                StateMachine::ndfa(states, sigma, start, finals, rules)
            }
        }
        "pda" => {
            let gamma = s.alphabet("gamma", doc)?;
            let rules = rules
                .into_iter()
                .map(|r| {
                    let v = list(r, 2, "a rule ((from read pop) (to push))")?;
                    let lhs = list(&v[0], 3, "(from read pop)")?;
                    let rhs = list(&v[1], 2, "(to push)")?;
                    Ok(PdaRule::new(
                        atom(&lhs[0])?,
                        atom(&lhs[1])?,
                        stack_seq(&lhs[2])?,
                        atom(&rhs[0])?,
                        stack_seq(&rhs[1])?,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            StateMachine::pda(states, sigma, gamma, start, finals, rules)
        }
        _ => {
            let rules = rules
                .into_iter()
                .map(|r| {
                    let v = list(r, 2, "a rule ((from read) (to action))")?;
                    let lhs = list(&v[0], 2, "(from read)")?;
                    let rhs = list(&v[1], 2, "(to action)")?;
                    Ok(TmRule::new(
                        atom(&lhs[0])?,
                        atom(&lhs[1])?,
                        atom(&rhs[0])?,
                        atom(&rhs[1])?,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            StateMachine::tm(states, sigma, rules, start, finals)
        }
    }
}

fn parse_grammar(
    tag: &str,
    body: &[Sexpr],
    doc: &Sexpr,
    warnings: &mut Vec<String>,
) -> Result<Grammar> {
    let s = Sections::new(body, &["nonterminals", "sigma", "start", "rules"])?;
    let nts = s.atoms("nonterminals", doc)?;
    let sigma = s.alphabet("sigma", doc)?;
    let start = s.single("start", doc)?;
    let (_, rules) = s.get("rules", doc)?;
    let rules = rule_forms(rules, warnings)
        .into_iter()
        .map(|r| {
            let v = r
                .as_list()
                .ok_or_else(|| r.error("expected a production (lhs -> rhs)"))?;
            let toks = atoms(v)?;
            let arrow = toks
                .iter()
                .position(|t| t == ARROW)
                .ok_or_else(|| r.error("production without ->"))?;
            let rhs: Vec<Symbol> = toks[arrow + 1..]
                .iter()
                .filter(|t| !t.is_empty_marker())
                .cloned()
                .collect();
            Ok(Production::new(toks[..arrow].to_vec(), rhs))
        })
        .collect::<Result<Vec<_>>>()?;
    let kind = match tag {
        "rg" => GrammarKind::Rg,
        "cfg" => GrammarKind::Cfg,
        _ => GrammarKind::Csg,
    };
    let v: Vec<Symbol> = nts.into_iter().chain(sigma.iter().cloned()).collect();
    Grammar::new(kind, v, sigma, rules, start)
}

fn parse_regexp(body: &[Sexpr], doc: &Sexpr) -> Result<Definition> {
    let [sigma, text] = body else {
        return Err(doc.error("expected (regexp (sigma …) \"text\")"));
    };
    let s = Sections::new(std::slice::from_ref(sigma), &["sigma"])?;
    let sigma = s.alphabet("sigma", doc)?;
    let Sexpr::Str(t, _) = text else {
        return Err(text.error("expected the expression as a string"));
    };
    let r = Regexp::parse(sigma, t).map_err(|e| match e {
        Error::Syntax {
            column, message, ..
        } => {
            let p = text.pos();
            Error::Syntax {
                line: p.line,
                column: p.column + column,
                message,
            }
        }
        e => text.locate(e),
    })?;
    Ok(Definition::Regexp(r))
}

fn parse_ctm(body: &[Sexpr], doc: &Sexpr, warnings: &mut Vec<String>) -> Result<Definition> {
    let s = Sections::new(body, &["sigma", "tms", "program"])?;
    let sigma = s.alphabet("sigma", doc)?;
    let mut tms: Vec<NamedTm> = vec![];
    for entry in s.optional("tms").unwrap_or(&[]) {
        let v = list(entry, 2, "(NAME (tm …))")?;
        let name = atom(&v[0])?;
        if CTM_KEYWORDS.contains(&name.as_str()) {
            return Err(v[0].error(format!("{name} is a reserved word")));
        }
        if tms.iter().any(|t| t.name == name.as_str()) {
            return Err(v[0].error(format!("tm {name} defined twice")));
        }
        let Definition::Machine(m) = parse_form(&v[1], warnings)? else {
            return Err(v[1].error("expected a tm definition"));
        };
        if m.kind() != Kind::Tm {
            return Err(v[1].locate(Error::KindMismatch("tm", m.kind().name())));
        }
        tms.push(NamedTm::new(name.as_str(), m));
    }
    let (_, program) = s.get("program", doc)?;
    let cx = CtmContext { sigma: &sigma, tms };
    let items = cx.items(program)?;
    combine_tms(items.into(), sigma.clone()).map(Definition::Ctm)
}

struct CtmContext<'a> {
    sigma: &'a Alphabet,
    tms: Vec<NamedTm>,
}

impl CtmContext<'_> {
    fn items(&self, xs: &[Sexpr]) -> Result<Vec<CtmItem>> {
        xs.iter().map(|x| self.item(x)).collect()
    }

    fn one_arg(&self, v: &[Sexpr], x: &Sexpr) -> Result<Symbol> {
        match v {
            [_, arg] => atom(arg),
            _ => Err(x.error(format!("{} takes one token", v[0]))),
        }
    }

    fn item(&self, x: &Sexpr) -> Result<CtmItem> {
        match x {
            Sexpr::Atom(name, _) => {
                if let Some(t) = self.tms.iter().find(|t| t.name == *name) {
                    return Ok(CtmItem::Tm(t.clone()));
                }
                match builtin(name, self.sigma) {
                    Some(m) => Ok(CtmItem::Tm(NamedTm::new(
                        name.as_str(),
                        m.map_err(|e| x.locate(e))?,
                    ))),
                    None => Err(x.locate(Error::UnknownComponent(format!("tm {name}")))),
                }
            }
            Sexpr::Str(..) => Err(x.error("unexpected string")),
            Sexpr::List(v, _) => {
                let Some(head) = v.first() else {
                    return Ok(CtmItem::Seq(CtmDescription::default()));
                };
                match head {
                    Sexpr::Atom(k, _) if k == "LABEL" => Ok(CtmItem::Label(self.one_arg(v, x)?)),
                    Sexpr::Atom(k, _) if k == "GOTO" => Ok(CtmItem::Goto(self.one_arg(v, x)?)),
                    Sexpr::Atom(k, _) if k == "WRITE" => Ok(CtmItem::Write(self.one_arg(v, x)?)),
                    Sexpr::Atom(k, _) if k == "BRANCH" => {
                        let arms = v[1..]
                            .iter()
                            .map(|arm| {
                                let a = arm
                                    .as_list()
                                    .filter(|a| !a.is_empty())
                                    .ok_or_else(|| arm.error("expected (symbol items…)"))?;
                                Ok((atom(&a[0])?, self.items(&a[1..])?.into()))
                            })
                            .collect::<Result<Vec<_>>>()?;
                        Ok(CtmItem::Branch(arms))
                    }
                    Sexpr::List(h, _) if h.first().and_then(Sexpr::as_atom) == Some("VAR") => {
                        let var = self.one_arg(h, head)?;
                        Ok(CtmItem::Var(var, self.items(&v[1..])?.into()))
                    }
                    _ => Ok(CtmItem::Seq(self.items(v)?.into())),
                }
            }
        }
    }
}

pub fn render_definition(d: &Definition) -> String {
    let mut lines = match d {
        Definition::Machine(m) => machine_lines(m),
        Definition::Grammar(g) => grammar_lines(g),
        Definition::Regexp(r) => vec![
            "(regexp".to_string(),
            format!("  {}", section("sigma", r.alphabet().iter())),
            format!(
                "  {})",
                Sexpr::Str(r.printable(), crate::sexpr::Pos { line: 1, column: 1 })
            ),
        ],
        Definition::Ctm(c) => ctm_lines(c),
    };
    let last = lines.len() - 1;
    lines[last].push('\n');
    lines.join("\n")
}

fn section<'a>(name: &str, items: impl IntoIterator<Item = &'a Symbol>) -> String {
    let mut s = format!("({name}");
    for x in items {
        s.push(' ');
        s.push_str(x.as_str());
    }
    s.push(')');
    s
}

/// `(name` followed by one indented line per item and the closing paren.
fn block(name: &str, items: Vec<String>, indent: &str) -> Vec<String> {
    if items.is_empty() {
        return vec![format!("{indent}({name})")];
    }
    let mut out = vec![format!("{indent}({name}")];
    out.extend(items.into_iter().map(|i| format!("{indent}  {i}")));
    let last = out.len() - 1;
    out[last].push(')');
    out
}

fn stack_text(v: &[Symbol]) -> String {
    if v.is_empty() {
        EMP.to_string()
    } else {
        let parts: Vec<&str> = v.iter().map(Symbol::as_str).collect();
        format!("({})", parts.join(" "))
    }
}

fn opt_text(s: &Option<Symbol>) -> &str {
    s.as_ref().map_or(EMP, Symbol::as_str)
}

fn close(mut lines: Vec<String>) -> Vec<String> {
    let last = lines.len() - 1;
    lines[last].push(')');
    lines
}

fn machine_lines(m: &StateMachine) -> Vec<String> {
    let mut out = vec![
        format!("({}", m.kind().name()),
        format!("  {}", section("states", m.states())),
        format!("  {}", section("sigma", m.alphabet())),
    ];
    if let Ok(g) = m.stack_alphabet() {
        out.push(format!("  {}", section("gamma", g)));
    }
    out.push(format!("  (start {})", m.start()));
    out.push(format!("  {}", section("finals", m.finals())));
    let rules: Vec<String> = match m.kind() {
        Kind::Dfa | Kind::Ndfa => m
            .fsa_rules()
            .iter()
            .map(|r| format!("({} {} {})", r.from, opt_text(&r.read), r.to))
            .collect(),
        Kind::Pda => m
            .pda_rules()
            .iter()
            .map(|r| {
                format!(
                    "(({} {} {}) ({} {}))",
                    r.from,
                    opt_text(&r.read),
                    stack_text(&r.pop),
                    r.to,
                    stack_text(&r.push)
                )
            })
            .collect(),
        Kind::Tm => m
            .tm_rules()
            .iter()
            .map(|r| format!("(({} {}) ({} {}))", r.from, r.read, r.to, r.action.token()))
            .collect(),
    };
    out.extend(block("rules", rules, "  "));
    close(out)
}

fn grammar_lines(g: &Grammar) -> Vec<String> {
    let mut out = vec![
        format!("({}", g.kind().name()),
        format!("  {}", section("nonterminals", g.nonterminals())),
        format!("  {}", section("sigma", g.terminals())),
        format!("  (start {})", g.start()),
    ];
    let rules = g.productions().iter().map(|p| format!("({p})")).collect();
    out.extend(block("rules", rules, "  "));
    close(out)
}

fn collect_tms<'a>(d: &'a CtmDescription, out: &mut Vec<&'a NamedTm>) {
    for item in d.items() {
        match item {
            CtmItem::Tm(t) => {
                if !out.iter().any(|o| o.name == t.name) {
                    out.push(t);
                }
            }
            CtmItem::Branch(arms) => arms.iter().for_each(|(_, d)| collect_tms(d, out)),
            CtmItem::Var(_, d) | CtmItem::Seq(d) => collect_tms(d, out),
            CtmItem::Write(_) | CtmItem::Label(_) | CtmItem::Goto(_) => {}
        }
    }
}

fn item_text(item: &CtmItem) -> String {
    let seq = |d: &CtmDescription| d.items().iter().map(item_text).collect::<Vec<_>>();
    match item {
        CtmItem::Tm(t) => t.name.clone(),
        CtmItem::Write(s) => format!("(WRITE {s})"),
        CtmItem::Label(s) => format!("(LABEL {s})"),
        CtmItem::Goto(s) => format!("(GOTO {s})"),
        CtmItem::Branch(arms) => {
            let mut parts = vec!["BRANCH".to_string()];
            for (g, d) in arms {
                let mut arm = vec![g.to_string()];
                arm.extend(seq(d));
                parts.push(format!("({})", arm.join(" ")));
            }
            format!("({})", parts.join(" "))
        }
        CtmItem::Var(v, d) => {
            let mut parts = vec![format!("(VAR {v})")];
            parts.extend(seq(d));
            format!("({})", parts.join(" "))
        }
        CtmItem::Seq(d) => format!("({})", seq(d).join(" ")),
    }
}

fn ctm_lines(c: &Ctm) -> Vec<String> {
    let mut out = vec![
        "(ctm".to_string(),
        format!("  {}", section("sigma", c.alphabet())),
    ];
    let mut used = vec![];
    collect_tms(c.description(), &mut used);
    let defined: Vec<&NamedTm> = used
        .into_iter()
        .filter(|t| {
            !(BUILTIN_NAMES.contains(&t.name.as_str())
                && builtin(&t.name, c.alphabet()).and_then(|r| r.ok()).as_ref() == Some(&*t.tm))
        })
        .collect();
    if !defined.is_empty() {
        let entries: Vec<String> = defined
            .iter()
            .flat_map(|t| {
                let mut lines = vec![format!("({}", t.name)];
                lines.extend(machine_lines(&t.tm).into_iter().map(|l| format!("  {l}")));
                close(lines)
            })
            .collect();
        out.extend(block("tms", entries, "  "));
    }
    let program: Vec<String> = c.description().items().iter().map(item_text).collect();
    let mut p = "  (program".to_string();
    for i in program {
        p.push(' ');
        p.push_str(&i);
    }
    p.push(')');
    out.push(p);
    close(out)
}

/// What [`convert`] produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Dfa,
    Ndfa,
    Regexp,
    Grammar,
    Reverse,
    Pda,
    Sm,
}

impl Target {
    pub const NAMES: [&'static str; 7] =
        ["dfa", "ndfa", "regexp", "grammar", "reverse", "pda", "sm"];
}

impl std::str::FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Target> {
        Ok(match s {
            "dfa" => Target::Dfa,
            "ndfa" => Target::Ndfa,
            "regexp" => Target::Regexp,
            "grammar" => Target::Grammar,
            "reverse" => Target::Reverse,
            "pda" => Target::Pda,
            "sm" => Target::Sm,
            other => return Err(Error::UnsupportedKind(format!("no conversion to {other}"))),
        })
    }
}

/// The machine a definition stands for: regexps go through Thompson's
/// construction and grammars through their kind's machine construction.
pub fn as_machine(d: Definition) -> Result<StateMachine> {
    match d {
        Definition::Machine(m) => Ok(m),
        Definition::Regexp(r) => transform::regexp_to_fsa(&r),
        Definition::Grammar(g) => transform::grammar_to_sm(&g),
        Definition::Ctm(_) => Err(Error::UnsupportedKind("ctm".into())),
    }
}

fn fsa_of(d: Definition) -> Result<StateMachine> {
    let m = as_machine(d)?;
    if m.is_fsa() {
        Ok(m)
    } else {
        Err(Error::UnsupportedKind(format!(
            "expected a finite-state machine, found a {}",
            m.kind()
        )))
    }
}

/// Applies the requested transformation. Inputs are first brought to the
/// form the construction needs, e.g. a regexp becomes an ndfa before
/// determinization.
pub fn convert(d: Definition, to: Target) -> Result<Definition> {
    Ok(match to {
        Target::Dfa => Definition::Machine(transform::ndfa_to_dfa(&fsa_of(d)?)?),
        Target::Ndfa => Definition::Machine(fsa_of(d)?.as_ndfa()),
        Target::Regexp => {
            if let Definition::Regexp(r) = d {
                return Ok(Definition::Regexp(r));
            }
            let m = fsa_of(d)?;
            let ast = transform::fsa_to_regexp(&m)?;
            Definition::Regexp(Regexp::new(m.alphabet().clone(), ast)?)
        }
        Target::Grammar => match d {
            Definition::Grammar(g) => Definition::Grammar(g),
            d => Definition::Grammar(transform::sm_to_grammar(&as_machine(d)?)?),
        },
        Target::Reverse => {
            let m = fsa_of(d)?;
            let m = if m.kind() == Kind::Dfa {
                m
            } else {
                transform::ndfa_to_dfa(&m)?
            };
            Definition::Machine(transform::reverse_fsa(&m)?)
        }
        Target::Pda => match d {
            Definition::Grammar(g) => {
                let m = transform::grammar_to_sm(&g)?;
                if m.kind() != Kind::Pda {
                    return Err(Error::UnsupportedKind(format!(
                        "a {} converts to a {}",
                        g.kind(),
                        m.kind()
                    )));
                }
                Definition::Machine(m)
            }
            d => {
                return Err(Error::UnsupportedKind(format!(
                    "cannot convert a {} to a pda",
                    d.tag()
                )))
            }
        },
        Target::Sm => Definition::Machine(as_machine(d)?),
    })
}
