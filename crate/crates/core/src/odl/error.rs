use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::kb::KbError;

/// 1-based position in the source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
}

impl SourceSpan {
    pub fn new(line: usize, column: usize) -> Self {
        debug_assert!(line >= 1 && column >= 1);
        SourceSpan { line, column }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ParseErrorKind {
    Syntax,
    UndeclaredTerm,
    /// The statement is well-formed but violates a knowledge-base invariant.
    Invalid,
    DuplicateDate,
    DuplicateCondition,
    OutOfBounds,
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
#[error("{span}: {message}{}", expected_suffix(.expected))]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    pub expected: Vec<String>,
    pub kind: ParseErrorKind,
}

fn expected_suffix(expected: &[String]) -> String {
    match expected {
        [] => String::new(),
        [one] => format!(" (expected {one})"),
        many => format!(" (expected one of {})", many.join(", ")),
    }
}

impl ParseError {
    pub fn syntax(span: SourceSpan, message: impl Into<String>) -> Self {
        ParseError { span, message: message.into(), expected: Vec::new(), kind: ParseErrorKind::Syntax }
    }

    pub fn expecting(span: SourceSpan, message: impl Into<String>, expected: &[&str]) -> Self {
        ParseError {
            span,
            message: message.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            kind: ParseErrorKind::Syntax,
        }
    }

    pub fn with_kind(span: SourceSpan, kind: ParseErrorKind, message: impl Into<String>) -> Self {
        ParseError { span, message: message.into(), expected: Vec::new(), kind }
    }

    pub(crate) fn from_kb(span: SourceSpan, err: KbError) -> Self {
        let kind = match err {
            KbError::UndeclaredTerm { .. } => ParseErrorKind::UndeclaredTerm,
            _ => ParseErrorKind::Invalid,
        };
        ParseError::with_kind(span, kind, err.to_string())
    }
}

/// Position just past the last character of `text`, used for errors about
/// something missing from the whole file.
pub(crate) fn end_span(text: &str) -> SourceSpan {
    let mut line = 1;
    let mut last = "";
    for (i, l) in text.split('\n').enumerate() {
        line = i + 1;
        last = l;
    }
    SourceSpan::new(line, last.trim_end_matches('\r').chars().count() + 1)
}
