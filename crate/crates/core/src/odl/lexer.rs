//! Line tokenizers: a strict one for ontology documents and a word-based
//! one for scenario and forecast files.

use super::error::{ParseError, SourceSpan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok<'a> {
    Ident(&'a str),
    /// One of `<:`, `==`, `->`, `:`, `.`, `(`, `)`.
    Sym(&'static str),
}

#[derive(Clone, Debug)]
pub(crate) struct Token<'a> {
    pub tok: Tok<'a>,
    pub span: SourceSpan,
}

/// Splits text into lines, dropping a trailing `\r` from each.
pub(crate) fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split('\n').enumerate().map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
}

const SYMBOLS: [&str; 7] = ["<:", "==", "->", ":", ".", "(", ")"];

pub(crate) fn tokenize_odl_line(line_no: usize, line: &str) -> Result<Vec<Token<'_>>, ParseError> {
    let mut out = Vec::new();
    // (byte offset, char); the column of chars[i] is i + 1
    let chars: Vec<(usize, char)> = line.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (start, c) = chars[i];
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let span = SourceSpan::new(line_no, i + 1);
        if c.is_ascii_alphanumeric() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].1.is_ascii_alphanumeric() || chars[j].1 == '_') {
                j += 1;
            }
            let end = chars.get(j).map_or(line.len(), |(b, _)| *b);
            let word = &line[start..end];
            if c.is_ascii_digit() {
                return Err(ParseError::syntax(span, format!("identifier `{word}` must not start with a digit")));
            }
            out.push(Token { tok: Tok::Ident(word), span });
            i = j;
            continue;
        }
        let rest = &line[start..];
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(sym) => {
                out.push(Token { tok: Tok::Sym(sym), span });
                i += sym.len();
            }
            None => return Err(ParseError::syntax(span, format!("unexpected character `{c}`"))),
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Word {
    pub text: String,
    pub span: SourceSpan,
    pub quoted: bool,
}

/// Whitespace-separated words with `"..."` strings (`\"` and `\\` escapes)
/// and `#` comments.
pub(crate) fn tokenize_words(line_no: usize, line: &str) -> Result<Vec<Word>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '#' {
            break;
        }
        let span = SourceSpan::new(line_no, i + 1);
        if c == '"' {
            let mut text = String::new();
            i += 1;
            loop {
                match chars.get(i) {
                    None => return Err(ParseError::syntax(span, "unterminated string")),
                    Some('"') => {
                        i += 1;
                        break;
                    }
                    Some('\\') => {
                        match chars.get(i + 1) {
                            Some(e @ ('"' | '\\')) => text.push(*e),
                            _ => {
                                return Err(ParseError::syntax(SourceSpan::new(line_no, i + 1), "bad escape in string"))
                            }
                        }
                        i += 2;
                    }
                    Some(ch) => {
                        text.push(*ch);
                        i += 1;
                    }
                }
            }
            out.push(Word { text, span, quoted: true });
        } else {
            let start = i;
            while i < chars.len() && !chars[i].is_whitespace() && chars[i] != '"' && chars[i] != '#' {
                i += 1;
            }
            out.push(Word { text: chars[start..i].iter().collect(), span, quoted: false });
        }
    }
    Ok(out)
}
