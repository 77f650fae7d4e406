use std::fmt;

use crate::formula::Var;

/// Byte offsets into the parsed input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        SourceSpan { start, end }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lexical,
    Syntax,
    NnfViolation,
    QuantifierPosition,
    FreeVariable,
    EmptyLoop,
    UnknownToken,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("parse error at {span}: {message}")]
    Parse {
        kind: ParseErrorKind,
        span: SourceSpan,
        message: String,
    },
    #[error("fragment violation: {0}")]
    Fragment(String),
    #[error("limits exceeded: {0}")]
    Limits(String),
    #[error("empty loop")]
    EmptyLoop,
    #[error("free trace variable `{0}`")]
    FreeVariable(Var),
    #[error("trace variable `{0}` is bound twice")]
    DoubleBinding(Var),
    #[error("quantifier under a temporal operator or inside a matrix")]
    QuantifierPosition,
    #[error("sentence is not in prenex form")]
    NotPrenex,
    #[error("trace `{0}` has no entry in the suffix choice")]
    MissingTrace(String),
    #[error("empty position set for trace `{0}`")]
    EmptyPositions(String),
    #[error("normal form has {count} disjuncts, above the cap of {cap}")]
    BlowUp { count: usize, cap: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn parse(kind: ParseErrorKind, span: SourceSpan, message: impl Into<String>) -> Self {
        Error::Parse {
            kind,
            span,
            message: message.into(),
        }
    }

    pub(crate) fn fragment(message: impl Into<String>) -> Self {
        Error::Fragment(message.into())
    }

    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
