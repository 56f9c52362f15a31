//! Forecast files (`.fct`): one `<date> <condition>` entry per line.

use std::collections::BTreeMap;

use serde::Serialize;

use super::error::{ParseError, ParseErrorKind};
use super::lexer::{lines, tokenize_words};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Forecast {
    /// `(date, condition)` in file order. Dates are opaque strings.
    pub entries: Vec<(String, String)>,
}

impl Forecast {
    pub fn condition_on(&self, date: &str) -> Option<&str> {
        self.entries.iter().find(|(d, _)| d == date).map(|(_, c)| c.as_str())
    }
}

pub fn parse_forecast(text: &str) -> Result<Forecast, ParseError> {
    let mut builder = ForecastBuilder::default();
    for (line_no, line) in lines(text) {
        let words = tokenize_words(line_no, line)?;
        match words.as_slice() {
            [] => {}
            [date, condition] => builder.push(date, condition)?,
            [only] => {
                return Err(ParseError::expecting(
                    super::error::SourceSpan::new(line_no, line.chars().count() + 1),
                    format!("missing condition after `{}`", only.text),
                    &["condition"],
                ))
            }
            [_, _, extra, ..] => {
                return Err(ParseError::expecting(extra.span, format!("unexpected `{}`", extra.text), &["end of line"]))
            }
        }
    }
    Ok(builder.finish())
}

/// Shared by forecast files and inline scenario forecasts.
#[derive(Default)]
pub(crate) struct ForecastBuilder {
    entries: Vec<(String, String)>,
    seen: BTreeMap<String, usize>,
}

impl ForecastBuilder {
    pub(crate) fn push(&mut self, date: &super::lexer::Word, condition: &super::lexer::Word) -> Result<(), ParseError> {
        if condition.text.is_empty() {
            return Err(ParseError::syntax(condition.span, "empty condition"));
        }
        if date.text.is_empty() {
            return Err(ParseError::syntax(date.span, "empty date"));
        }
        if let Some(first) = self.seen.get(&date.text) {
            return Err(ParseError::with_kind(
                date.span,
                ParseErrorKind::DuplicateDate,
                format!("duplicate date {} (first given on line {first})", date.text),
            ));
        }
        self.seen.insert(date.text.clone(), date.span.line);
        self.entries.push((date.text.clone(), condition.text.clone()));
        Ok(())
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub(crate) fn finish(self) -> Forecast {
        Forecast { entries: self.entries }
    }
}
