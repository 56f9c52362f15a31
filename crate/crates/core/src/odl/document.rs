//! Ontology documents (`.odl`): one statement per line.
//!
//! ```text
//! class <Id> | role <Id> | ind <Id>
//! sub <Expr> <: <Expr> | define <Id> == <Expr>
//! subrole <Id> <: <Id> | substantive <Class> -> <Class>
//! type <Ind> : <Expr> | rel <Ind> <Role> <Ind> | affords <Ind> <Class>
//! Expr := Thing | Id | Expr and Expr | exists <Role> . Expr | ( Expr )
//! ```
//!
//! An `exists` filler extends as far right as possible, so
//! `exists r . A and B` reads as `exists r . (A and B)`.

use std::collections::BTreeSet;

use super::error::{ParseError, SourceSpan};
use super::lexer::{lines, tokenize_odl_line, Tok, Token};
use crate::kb::{
    witness_name, Assertion, Axiom, ClassExpression, KnowledgeBase, Name, TermKind, HAS_FUNCTION, RESERVED_WORDS,
};

const STATEMENTS: &[&str] =
    &["class", "role", "ind", "sub", "define", "subrole", "substantive", "type", "rel", "affords"];

/// Parses an ontology document into a canonical knowledge base.
pub fn parse_document(text: &str) -> Result<KnowledgeBase, ParseError> {
    let mut kb = KnowledgeBase::new();
    for (line_no, line) in lines(text) {
        let tokens = tokenize_odl_line(line_no, line)?;
        if tokens.is_empty() {
            continue;
        }
        let end = SourceSpan::new(line_no, line.chars().count() + 1);
        let mut p = LineParser { tokens: &tokens, pos: 0, end, kb: &mut kb };
        p.statement()?;
    }
    Ok(kb.canonicalize())
}

struct LineParser<'t, 'a> {
    tokens: &'t [Token<'a>],
    pos: usize,
    end: SourceSpan,
    kb: &'t mut KnowledgeBase,
}

impl<'a> LineParser<'_, 'a> {
    fn peek(&self) -> Option<&Token<'a>> {
        self.tokens.get(self.pos)
    }

    fn span(&self) -> SourceSpan {
        self.peek().map_or(self.end, |t| t.span)
    }

    fn describe(&self) -> String {
        match self.peek().map(|t| &t.tok) {
            None => "end of line".to_string(),
            Some(Tok::Ident(w)) if RESERVED_WORDS.contains(w) => format!("keyword `{w}`"),
            Some(Tok::Ident(w)) => format!("`{w}`"),
            Some(Tok::Sym(s)) => format!("`{s}`"),
        }
    }

    fn keyword(&mut self) -> Result<(&'a str, SourceSpan), ParseError> {
        match self.peek() {
            Some(Token { tok: Tok::Ident(w), span }) if STATEMENTS.contains(w) => {
                let out = (*w, *span);
                self.pos += 1;
                Ok(out)
            }
            _ => Err(ParseError::expecting(self.span(), format!("unexpected {}", self.describe()), STATEMENTS)),
        }
    }

    /// A non-reserved identifier.
    fn ident(&mut self) -> Result<(&'a str, SourceSpan), ParseError> {
        match self.peek() {
            Some(Token { tok: Tok::Ident(w), span }) if !RESERVED_WORDS.contains(w) => {
                let out = (*w, *span);
                self.pos += 1;
                Ok(out)
            }
            _ => Err(ParseError::expecting(self.span(), format!("unexpected {}", self.describe()), &["identifier"])),
        }
    }

    fn sym(&mut self, sym: &'static str) -> Result<(), ParseError> {
        match self.peek() {
            Some(Token { tok: Tok::Sym(s), .. }) if *s == sym => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(ParseError::expecting(
                self.span(),
                format!("unexpected {}", self.describe()),
                &[&format!("`{sym}`")],
            )),
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Ident(w), .. }) if *w == kw)
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => {
                Err(ParseError::expecting(self.span(), format!("unexpected {}", self.describe()), &["end of line"]))
            }
        }
    }

    fn declare(&mut self, kind: TermKind) -> Result<(), ParseError> {
        let (name, span) = self.ident()?;
        self.finish()?;
        self.kb.declare_mut(name, kind).map(drop).map_err(|e| ParseError::from_kb(span, e))
    }

    fn reference(&mut self, kind: TermKind) -> Result<Name, ParseError> {
        let (name, span) = self.ident()?;
        self.kb.require(name, kind).map_err(|e| ParseError::from_kb(span, e))
    }

    fn statement(&mut self) -> Result<(), ParseError> {
        let (kw, kw_span) = self.keyword()?;
        match kw {
            "class" => self.declare(TermKind::Class),
            "role" => self.declare(TermKind::Role),
            "ind" => self.declare(TermKind::Individual),
            "sub" => {
                let sub = self.expr()?;
                self.sym("<:")?;
                let sup = self.expr()?;
                self.finish()?;
                self.axiom(kw_span, Axiom::SubClassOf(sub, sup))
            }
            "define" => {
                let (name, span) = self.ident()?;
                self.sym("==")?;
                let def = self.expr()?;
                self.finish()?;
                let name = self.kb.declare_mut(name, TermKind::Class).map_err(|e| ParseError::from_kb(span, e))?;
                self.axiom(kw_span, Axiom::EquivalentClass(name, def))
            }
            "subrole" => {
                let sub = self.reference(TermKind::Role)?;
                self.sym("<:")?;
                let sup = self.reference(TermKind::Role)?;
                self.finish()?;
                self.axiom(kw_span, Axiom::SubRoleOf(sub, sup))
            }
            "substantive" => {
                let object_class = self.reference(TermKind::Class)?;
                self.sym("->")?;
                let function_class = self.reference(TermKind::Class)?;
                self.finish()?;
                self.axiom(kw_span, Axiom::SubstantiveFunction { object_class, function_class })
            }
            "type" => {
                let ind = self.reference(TermKind::Individual)?;
                self.sym(":")?;
                let class = self.expr()?;
                self.finish()?;
                self.assertion(kw_span, Assertion::ClassAssertion(ind, class))
            }
            "rel" => {
                let a = self.reference(TermKind::Individual)?;
                let r = self.reference(TermKind::Role)?;
                let b = self.reference(TermKind::Individual)?;
                self.finish()?;
                self.assertion(kw_span, Assertion::RoleAssertion(a, r, b))
            }
            "affords" => {
                let ind = self.reference(TermKind::Individual)?;
                let class = self.reference(TermKind::Class)?;
                self.finish()?;
                self.kb.affords_mut(&ind, &class).map(drop).map_err(|e| ParseError::from_kb(kw_span, e))
            }
            _ => unreachable!("keyword() only yields statement keywords"),
        }
    }

    fn axiom(&mut self, span: SourceSpan, axiom: Axiom) -> Result<(), ParseError> {
        self.kb.add_axiom_mut(axiom).map_err(|e| ParseError::from_kb(span, e))
    }

    fn assertion(&mut self, span: SourceSpan, assertion: Assertion) -> Result<(), ParseError> {
        self.kb.add_assertion_mut(assertion).map_err(|e| ParseError::from_kb(span, e))
    }

    fn expr(&mut self) -> Result<ClassExpression, ParseError> {
        let mut parts = vec![self.unary()?];
        while self.at_keyword("and") {
            self.pos += 1;
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { ClassExpression::Conjunction(parts) })
    }

    fn unary(&mut self) -> Result<ClassExpression, ParseError> {
        match self.peek().map(|t| t.tok.clone()) {
            Some(Tok::Ident("Thing")) => {
                self.pos += 1;
                Ok(ClassExpression::Top)
            }
            Some(Tok::Ident("exists")) => {
                self.pos += 1;
                let role = self.reference(TermKind::Role)?;
                self.sym(".")?;
                let filler = self.expr()?;
                Ok(ClassExpression::Exists(role, Box::new(filler)))
            }
            Some(Tok::Sym("(")) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.sym(")")?;
                Ok(inner)
            }
            Some(Tok::Ident(w)) if !RESERVED_WORDS.contains(&w) => {
                Ok(ClassExpression::Atomic(self.reference(TermKind::Class)?))
            }
            _ => Err(ParseError::expecting(
                self.span(),
                format!("unexpected {}", self.describe()),
                &["class expression"],
            )),
        }
    }
}

/// Renders an expression in the document syntax.
pub fn print_expression(expr: &ClassExpression) -> String {
    let mut out = String::new();
    write_expr(&mut out, expr);
    out
}

fn write_expr(out: &mut String, expr: &ClassExpression) {
    match expr {
        ClassExpression::Top => out.push_str("Thing"),
        ClassExpression::Atomic(n) => out.push_str(n.as_str()),
        ClassExpression::Exists(r, filler) => {
            out.push_str("exists ");
            out.push_str(r.as_str());
            out.push_str(" . ");
            write_expr(out, filler);
        }
        ClassExpression::Conjunction(parts) => {
            for (i, p) in parts.iter().enumerate() {
                if i > 0 {
                    out.push_str(" and ");
                }
                let last = i + 1 == parts.len();
                let wrap =
                    matches!(p, ClassExpression::Conjunction(_)) || (!last && matches!(p, ClassExpression::Exists(..)));
                if wrap {
                    out.push('(');
                    write_expr(out, p);
                    out.push(')');
                } else {
                    write_expr(out, p);
                }
            }
        }
    }
}

/// Prints a knowledge base as a canonical document: declarations, then
/// axioms, then facts. Witness individuals created by the affords
/// shorthand are folded back into `affords` lines.
pub fn print_document(kb: &KnowledgeBase) -> String {
    let kb = kb.canonicalize();
    let has_function = Name::new(HAS_FUNCTION);

    // (object, function class, witness) triples that came from `affords`
    let mut affords: BTreeSet<(Name, Name, Name)> = BTreeSet::new();
    if kb.has_function_role().is_some() {
        for a in kb.abox() {
            if let Assertion::RoleAssertion(obj, r, w) = a {
                if *r != has_function || !w.is_generated() {
                    continue;
                }
                let typed = kb.abox().iter().find_map(|b| match b {
                    Assertion::ClassAssertion(i, ClassExpression::Atomic(c))
                        if i == w && witness_name(obj, c) == *w =>
                    {
                        Some(c.clone())
                    }
                    _ => None,
                });
                if let Some(c) = typed {
                    affords.insert((obj.clone(), c, w.clone()));
                }
            }
        }
    }
    let folded_witnesses: BTreeSet<&Name> = affords.iter().map(|(_, _, w)| w).collect();
    let folded_fact = |a: &Assertion| match a {
        Assertion::RoleAssertion(o, r, w) => *r == has_function && affords.iter().any(|(ao, _, aw)| ao == o && aw == w),
        Assertion::ClassAssertion(w, ClassExpression::Atomic(c)) => {
            affords.iter().any(|(_, ac, aw)| aw == w && ac == c)
        }
        _ => false,
    };

    let mut sections: Vec<Vec<String>> = Vec::new();
    sections.push(kb.classes().map(|c| format!("class {c}")).collect());
    sections.push(kb.roles().map(|r| format!("role {r}")).collect());
    sections.push(kb.individuals().filter(|i| !folded_witnesses.contains(i)).map(|i| format!("ind {i}")).collect());
    sections.push(kb.tbox().iter().map(print_axiom).collect());
    sections.push(affords.iter().map(|(o, c, _)| format!("affords {o} {c}")).collect());
    sections.push(
        kb.abox()
            .iter()
            .filter(|a| !folded_fact(a))
            .map(|a| match a {
                Assertion::ClassAssertion(i, c) => format!("type {i} : {}", print_expression(c)),
                Assertion::RoleAssertion(a, r, b) => format!("rel {a} {r} {b}"),
            })
            .collect(),
    );

    let mut out = String::new();
    for section in sections.into_iter().filter(|s| !s.is_empty()) {
        if !out.is_empty() {
            out.push('\n');
        }
        for line in section {
            out.push_str(&line);
            out.push('\n');
        }
    }
    out
}

pub fn print_axiom(axiom: &Axiom) -> String {
    match axiom {
        Axiom::SubClassOf(c, d) => format!("sub {} <: {}", print_expression(c), print_expression(d)),
        Axiom::EquivalentClass(n, d) => format!("define {n} == {}", print_expression(d)),
        Axiom::SubRoleOf(r, s) => format!("subrole {r} <: {s}"),
        Axiom::SubstantiveFunction { object_class, function_class } => {
            format!("substantive {object_class} -> {function_class}")
        }
    }
}
