use thiserror::Error;

/// Every failure the library can report.
///
/// The `Display` text of each variant starts with a short fixed phrase
/// ("partial dfa", "unresolved goto", ...) so callers and the CLI can match
/// on it; details follow after a colon.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid token: {0:?}")]
    InvalidToken(String),
    #[error("reserved symbol: {0} cannot be used here")]
    ReservedSymbol(String),
    #[error("empty alphabet")]
    EmptyAlphabet,
    #[error("duplicate symbol: {0}")]
    DuplicateSymbol(String),

    #[error("nondeterministic dfa: state {state} has more than one rule on {symbol}")]
    NondeterministicDfa { state: String, symbol: String },
    #[error("partial dfa: state {state} has no rule on {symbol}")]
    PartialDfa { state: String, symbol: String },
    #[error("unknown component: {0}")]
    UnknownComponent(String),
    #[error("bad designation: {0}")]
    BadDesignation(String),
    #[error("no stack alphabet: a {0} has no stack alphabet")]
    NoStackAlphabet(&'static str),
    #[error("word not over alphabet: {0} is not in the alphabet")]
    WordNotOverAlphabet(String),
    #[error("step-limit exceeded: no verdict after {0} steps")]
    StepLimitExceeded(usize),
    #[error("fell off tape: head moved left of position 0")]
    FellOffTape,
    #[error("head position {head} is outside the tape of length {len}")]
    HeadOutOfRange { head: usize, len: usize },
    #[error("machine wedged: {0}")]
    MachineWedged(String),

    #[error("unresolved goto: label {0} is not defined")]
    UnresolvedGoto(String),
    #[error("duplicate label: {0}")]
    DuplicateLabel(String),
    #[error("ambiguous branch: guard {0} appears more than once")]
    AmbiguousBranch(String),
    #[error("no branch for symbol: {0}")]
    NoBranchForSymbol(String),
    #[error("unbound variable: {0}")]
    UnboundVariable(String),

    #[error("malformed production ({kind}): {detail}")]
    MalformedProduction { kind: &'static str, detail: String },
    #[error("terminal start: {0} is a terminal")]
    TerminalStart(String),

    #[error("kind mismatch: {0} vs {1}")]
    KindMismatch(&'static str, &'static str),
    #[error("tm closure unsupported")]
    TmClosureUnsupported,
    #[error("not closed for pda")]
    NotClosedForPda,
    #[error("csg conversion unsupported")]
    CsgConversionUnsupported,
    #[error("tm conversion unsupported")]
    TmConversionUnsupported,
    #[error("unsupported kind: {0}")]
    UnsupportedKind(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: {source}")]
    At {
        line: usize,
        column: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Strips any position annotation.
    pub fn root(&self) -> &Error {
        match self {
            Error::At { source, .. } => source.root(),
            other => other,
        }
    }

    pub fn is_step_limit(&self) -> bool {
        matches!(self.root(), Error::StepLimitExceeded(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
