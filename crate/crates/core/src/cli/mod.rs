//! The `fsm` command-line front end.
//!
//! Exit codes: 0 accept/true/success, 1 reject/false/counterexamples found,
//! 2 usage or validation error, 3 step limit reached or search undecided.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::builder::{PossibleValuesParser, TypedValueParser};
use clap::{Parser, Subcommand};

use crate::deciders::cfg_is_empty;
use crate::definition::{
    as_machine, convert, parse_definition_with_warnings, render_definition, Definition, Target,
};
use crate::error::{Error, Result};
use crate::grammar::{DerivBudget, DerivOutcome, Grammar};
use crate::machine::Limits;
use crate::machine::StateMachine;
use crate::rng::{DEFAULT_MAX_LEN, DEFAULT_SEED};
use crate::symbol::{Symbol, Word};
use crate::testers::{self, EquivReport, Outcome, Sample, DEFAULT_COUNT};

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "fsm",
    version,
    about = "Run, test and transform state machines, grammars and regular expressions"
)]
struct Cli {
    /// Step bound for tm runs and combined-tm dispatches.
    #[arg(long, global = true)]
    step_limit: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct SampleArgs {
    /// Number of random words.
    #[arg(long, default_value_t = DEFAULT_COUNT)]
    count: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Longest random word.
    #[arg(long, default_value_t = DEFAULT_MAX_LEN)]
    max_len: usize,
}

impl SampleArgs {
    fn sample(&self) -> Sample {
        Sample {
            count: self.count,
            seed: self.seed,
            max_len: self.max_len,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print accept or reject for one word.
    Run {
        file: PathBuf,
        /// Whitespace-separated tokens; "" is the empty word.
        #[arg(short, long, allow_hyphen_values = true)]
        word: String,
        /// Initial head position (tm only).
        #[arg(long, default_value_t = 0)]
        head: usize,
    },
    /// Print the configurations of an accepting path.
    Trace {
        file: PathBuf,
        #[arg(short, long, allow_hyphen_values = true)]
        word: String,
        #[arg(long, default_value_t = 0)]
        head: usize,
    },
    /// Run a machine or grammar on random words.
    Test {
        file: PathBuf,
        #[command(flatten)]
        sample: SampleArgs,
    },
    /// Compare two machines, or two grammars, on random words.
    Equiv {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        sample: SampleArgs,
    },
    /// Transform a definition and print the result.
    Convert {
        file: PathBuf,
        #[arg(long, value_parser = PossibleValuesParser::new(Target::NAMES).map(|s| s.parse::<Target>().expect("listed name")))]
        to: Target,
    },
    /// Print a derivation of a word.
    Derive {
        file: PathBuf,
        #[arg(short, long, allow_hyphen_values = true)]
        word: String,
    },
    /// Decide whether a cfg or rg generates no words.
    Empty { file: PathBuf },
    /// Run a combined tm and print its final configuration.
    CtmRun {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        tape: String,
        #[arg(long, default_value_t = 0)]
        head: usize,
    },
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_TRUE
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut ctx = Context {
        out,
        err,
        limits: limits(cli.step_limit),
    };
    match ctx.dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            if e.is_step_limit() {
                EXIT_UNDECIDED
            } else {
                EXIT_USAGE
            }
        }
    }
}

fn limits(step_limit: Option<usize>) -> Limits {
    match step_limit {
        Some(n) => Limits {
            tm_steps: n,
            ctm_dispatches: n,
            ..Limits::default()
        },
        None => Limits::default(),
    }
}

struct Context<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    limits: Limits,
}

/// Failures writing to the output streams are ignored, as with a closed pipe.
macro_rules! say {
    ($w:expr, $($arg:tt)*) => {{
        let _ = writeln!($w, $($arg)*);
    }};
}

impl Context<'_> {
    fn load(&mut self, path: &Path) -> Result<Definition> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::UnknownComponent(format!("file {}: {e}", path.display())))?;
        let parsed = parse_definition_with_warnings(&text).map_err(|e| with_file(path, e))?;
        for w in &parsed.warnings {
            say!(self.err, "warning: {}:{w}", path.display());
        }
        Ok(parsed.definition)
    }

    fn load_machine(&mut self, path: &Path) -> Result<StateMachine> {
        match self.load(path)? {
            Definition::Ctm(_) => Err(Error::UnsupportedKind("a ctm runs with ctm-run".into())),
            d => as_machine(d),
        }
    }

    fn load_grammar(&mut self, path: &Path) -> Result<Grammar> {
        match self.load(path)? {
            Definition::Grammar(g) => Ok(g),
            d => Err(Error::UnsupportedKind(format!(
                "expected a grammar, found a {}",
                d.tag()
            ))),
        }
    }

    fn dispatch(&mut self, command: Command) -> Result<i32> {
        match command {
            Command::Run { file, word, head } => {
                let m = self.load_machine(&file)?;
                let verdict = m.apply_with(&Word::parse(&word), head, &self.limits)?;
                say!(self.out, "{verdict}");
                Ok(if verdict.is_accept() {
                    EXIT_TRUE
                } else {
                    EXIT_FALSE
                })
            }
            Command::Trace { file, word, head } => {
                let m = self.load_machine(&file)?;
                let trace = m.show_transitions_with(&Word::parse(&word), head, &self.limits)?;
                if trace.is_empty() {
                    say!(self.out, "reject");
                    return Ok(EXIT_FALSE);
                }
                for step in &trace.steps {
                    say!(self.out, "{step}");
                }
                say!(self.out, "accept");
                Ok(EXIT_TRUE)
            }
            Command::Test { file, sample } => self.test(&file, &sample.sample()),
            Command::Equiv {
                first,
                second,
                sample,
            } => self.equiv(&first, &second, &sample.sample()),
            Command::Convert { file, to } => {
                let d = self.load(&file)?;
                let result = convert(d, to)?;
                let _ = self.out.write_all(render_definition(&result).as_bytes());
                Ok(EXIT_TRUE)
            }
            Command::Derive { file, word } => {
                let g = self.load_grammar(&file)?;
                match g.derive_with(&Word::parse(&word), &DerivBudget::default())? {
                    DerivOutcome::Derived(d) => {
                        say!(self.out, "{d}");
                        Ok(EXIT_TRUE)
                    }
                    DerivOutcome::NotInLanguage => {
                        say!(self.out, "not derivable");
                        Ok(EXIT_FALSE)
                    }
                    DerivOutcome::Undecided => {
                        say!(self.out, "undecided");
                        Ok(EXIT_UNDECIDED)
                    }
                }
            }
            Command::Empty { file } => {
                let g = self.load_grammar(&file)?;
                if cfg_is_empty(&g)? {
                    say!(self.out, "empty");
                    Ok(EXIT_TRUE)
                } else {
                    say!(self.out, "nonempty");
                    Ok(EXIT_FALSE)
                }
            }
            Command::CtmRun { file, tape, head } => {
                let Definition::Ctm(c) = self.load(&file)? else {
                    return Err(Error::UnsupportedKind("ctm-run expects a ctm".into()));
                };
                let tape: Vec<Symbol> = tape.split_whitespace().map(Symbol::new).collect();
                let config = c.apply_with(tape, head, &self.limits)?;
                say!(self.out, "{config}");
                Ok(EXIT_TRUE)
            }
        }
    }

    fn test(&mut self, file: &Path, sample: &Sample) -> Result<i32> {
        if let Definition::Grammar(g) = self.load(file)? {
            let report = testers::test_grammar(&g, sample)?;
            let mut undecided = false;
            for (w, d) in &report.entries {
                undecided |= *d == testers::Derivability::Undecided;
                say!(self.out, "{w} {d}");
            }
            return Ok(if undecided { EXIT_UNDECIDED } else { EXIT_TRUE });
        }
        let m = self.load_machine(file)?;
        let report = testers::test_sm_with(&m, sample, &self.limits)?;
        let mut code = EXIT_TRUE;
        for (w, o) in &report.entries {
            match o {
                Outcome::StepLimit => code = EXIT_UNDECIDED,
                Outcome::Fault(_) if code == EXIT_TRUE => code = EXIT_USAGE,
                _ => {}
            }
            say!(self.out, "{w} {o}");
        }
        Ok(code)
    }

    fn equiv(&mut self, first: &Path, second: &Path, sample: &Sample) -> Result<i32> {
        let (d1, d2) = (self.load(first)?, self.load(second)?);
        if let (Definition::Grammar(g1), Definition::Grammar(g2)) = (&d1, &d2) {
            let report = testers::test_equiv_grammar(g1, g2, sample)?;
            for w in &report.undecided {
                say!(self.out, "{w} undecided");
            }
            return Ok(self.equiv_verdict(&report.verdict, !report.undecided.is_empty()));
        }
        let (m1, m2) = (as_machine(d1)?, as_machine(d2)?);
        let report = testers::test_equiv_sm_with(&m1, &m2, sample, &self.limits)?;
        Ok(self.equiv_verdict(&report, false))
    }

    fn equiv_verdict(&mut self, report: &EquivReport, undecided: bool) -> i32 {
        match report {
            EquivReport::Counterexamples(ws) => {
                for w in ws {
                    say!(self.out, "{w} differs");
                }
                EXIT_FALSE
            }
            EquivReport::EquivalentOnSample if undecided => EXIT_UNDECIDED,
            EquivReport::EquivalentOnSample => {
                say!(self.out, "equivalent on sample");
                EXIT_TRUE
            }
        }
    }
}

fn with_file(path: &Path, e: Error) -> Error {
    match e {
        Error::Syntax {
            line,
            column,
            message,
        } => Error::Syntax {
            line,
            column,
            message: format!("{}: {message}", path.display()),
        },
        e => e,
    }
}
