//! Terms, class expressions, axioms and the immutable knowledge base.
//!
//! A [`KnowledgeBase`] is a value: every operation takes `&self` and returns
//! a new knowledge base. Constructors enforce signature closure, so every
//! axiom and assertion only mentions declared terms of the right kind.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

/// Name of the distinguished functional-relationship role.
pub const HAS_FUNCTION: &str = "hasFunction";

/// Words the ontology language reserves; none of them can name a term.
pub const RESERVED_WORDS: &[&str] = &[
    "class",
    "role",
    "ind",
    "sub",
    "define",
    "subrole",
    "substantive",
    "type",
    "rel",
    "affords",
    "Thing",
    "and",
    "exists",
];

/// A case-sensitive identifier. Cheap to clone.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: &str) -> Self {
        Name(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Names reserved for generated terms start with an underscore.
    pub fn is_generated(&self) -> bool {
        self.0.starts_with('_')
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}

impl AsRef<str> for Name {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl std::borrow::Borrow<str> for Name {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl std::ops::Deref for Name {
    type Target = str;

    fn deref(&self) -> &str {
        &self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum TermKind {
    Class,
    Role,
    Individual,
}

impl fmt::Display for TermKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TermKind::Class => "class",
            TermKind::Role => "role",
            TermKind::Individual => "individual",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TermId {
    pub name: Name,
    pub kind: TermKind,
}

/// The concept language: top, atomic classes, conjunction and existential
/// restriction.
///
/// Variant order matters: it is the canonical sort order of conjuncts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ClassExpression {
    Top,
    Atomic(Name),
    Conjunction(Vec<ClassExpression>),
    Exists(Name, Box<ClassExpression>),
}

impl ClassExpression {
    pub fn atomic(name: &str) -> Self {
        ClassExpression::Atomic(Name::new(name))
    }

    pub fn exists(role: &str, filler: ClassExpression) -> Self {
        ClassExpression::Exists(Name::new(role), Box::new(filler))
    }

    pub fn and(parts: impl IntoIterator<Item = ClassExpression>) -> Self {
        ClassExpression::Conjunction(parts.into_iter().collect())
    }

    /// Flattens nested conjunctions, sorts and deduplicates conjuncts, and
    /// collapses single-element conjunctions.
    pub fn canonical(&self) -> ClassExpression {
        match self {
            ClassExpression::Top | ClassExpression::Atomic(_) => self.clone(),
            ClassExpression::Exists(r, f) => ClassExpression::Exists(r.clone(), Box::new(f.canonical())),
            ClassExpression::Conjunction(parts) => {
                let mut flat = Vec::with_capacity(parts.len());
                for p in parts {
                    match p.canonical() {
                        ClassExpression::Conjunction(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                flat.sort();
                flat.dedup();
                if flat.len() == 1 {
                    flat.pop().unwrap()
                } else {
                    ClassExpression::Conjunction(flat)
                }
            }
        }
    }

    /// Calls `f` on this expression and every nested subexpression.
    pub fn visit(&self, f: &mut impl FnMut(&ClassExpression)) {
        f(self);
        match self {
            ClassExpression::Conjunction(parts) => parts.iter().for_each(|p| p.visit(f)),
            ClassExpression::Exists(_, filler) => filler.visit(f),
            _ => {}
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            ClassExpression::Top | ClassExpression::Atomic(_) => 0,
            ClassExpression::Conjunction(parts) => 1 + parts.iter().map(|p| p.depth()).max().unwrap_or(0),
            ClassExpression::Exists(_, filler) => 1 + filler.depth(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Axiom {
    SubClassOf(ClassExpression, ClassExpression),
    EquivalentClass(Name, ClassExpression),
    SubRoleOf(Name, Name),
    /// The object class's essential function. Also entails
    /// `object_class ⊑ ∃hasFunction.function_class`.
    SubstantiveFunction {
        object_class: Name,
        function_class: Name,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Assertion {
    ClassAssertion(Name, ClassExpression),
    RoleAssertion(Name, Name, Name),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KbError {
    #[error("`{name}` is already declared as a {existing}, not a {requested}")]
    KindConflict { name: Name, existing: TermKind, requested: TermKind },
    #[error("bad identifier `{0}`")]
    BadIdentifier(String),
    #[error("undeclared {kind} `{name}`")]
    UndeclaredTerm { name: Name, kind: TermKind },
    #[error("class `{0}` already has a different definition")]
    ConflictingDefinition(Name),
    #[error("conjunction needs at least two conjuncts")]
    ShortConjunction,
    #[error("role `hasFunction` must be declared first")]
    MissingHasFunction,
}

/// Checks the identifier shape shared by the library and the parser:
/// ASCII letters, digits and `_`, not starting with a digit.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Identifier check for user-declared names: no leading underscore and no
/// reserved word.
pub fn validate_user_name(s: &str) -> Result<(), KbError> {
    if !is_identifier(s) || s.starts_with('_') || RESERVED_WORDS.contains(&s) {
        return Err(KbError::BadIdentifier(s.to_string()));
    }
    Ok(())
}

/// Deterministic name of the witness individual created by the affords
/// shorthand.
pub fn witness_name(object: &Name, function_class: &Name) -> Name {
    Name::new(&format!("_f_{object}_{function_class}"))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct KnowledgeBase {
    signature: BTreeMap<Name, TermKind>,
    tbox: Vec<Axiom>,
    abox: Vec<Assertion>,
}

impl KnowledgeBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn signature(&self) -> impl Iterator<Item = TermId> + '_ {
        self.signature.iter().map(|(name, kind)| TermId { name: name.clone(), kind: *kind })
    }

    pub fn kind_of(&self, name: &str) -> Option<TermKind> {
        self.signature.get(name).copied()
    }

    pub fn names_of_kind(&self, kind: TermKind) -> impl Iterator<Item = &Name> + '_ {
        self.signature.iter().filter(move |(_, k)| **k == kind).map(|(n, _)| n)
    }

    pub fn classes(&self) -> impl Iterator<Item = &Name> + '_ {
        self.names_of_kind(TermKind::Class)
    }

    pub fn roles(&self) -> impl Iterator<Item = &Name> + '_ {
        self.names_of_kind(TermKind::Role)
    }

    pub fn individuals(&self) -> impl Iterator<Item = &Name> + '_ {
        self.names_of_kind(TermKind::Individual)
    }

    pub fn count(&self, kind: TermKind) -> usize {
        self.names_of_kind(kind).count()
    }

    pub fn tbox(&self) -> &[Axiom] {
        &self.tbox
    }

    pub fn abox(&self) -> &[Assertion] {
        &self.abox
    }

    /// The distinguished `hasFunction` role, when declared.
    pub fn has_function_role(&self) -> Option<TermId> {
        match self.kind_of(HAS_FUNCTION) {
            Some(TermKind::Role) => Some(TermId { name: Name::new(HAS_FUNCTION), kind: TermKind::Role }),
            _ => None,
        }
    }

    pub fn declare(&self, name: &str, kind: TermKind) -> Result<KnowledgeBase, KbError> {
        let mut kb = self.clone();
        kb.declare_mut(name, kind)?;
        Ok(kb)
    }

    pub fn with_axiom(&self, axiom: Axiom) -> Result<KnowledgeBase, KbError> {
        let mut kb = self.clone();
        kb.add_axiom_mut(axiom)?;
        Ok(kb)
    }

    pub fn with_assertion(&self, assertion: Assertion) -> Result<KnowledgeBase, KbError> {
        let mut kb = self.clone();
        kb.add_assertion_mut(assertion)?;
        Ok(kb)
    }

    /// Expands `affords object function_class` into a witness individual
    /// typed with the function class and linked from the object through
    /// `hasFunction`.
    pub fn desugar_affords(&self, object: &str, function_class: &str) -> Result<KnowledgeBase, KbError> {
        let mut kb = self.clone();
        kb.affords_mut(object, function_class)?;
        Ok(kb)
    }

    /// Sorts and deduplicates every conjunction, axiom and assertion.
    pub fn canonicalize(&self) -> KnowledgeBase {
        let mut tbox: Vec<Axiom> = self
            .tbox
            .iter()
            .map(|ax| match ax {
                Axiom::SubClassOf(c, d) => Axiom::SubClassOf(c.canonical(), d.canonical()),
                Axiom::EquivalentClass(n, c) => Axiom::EquivalentClass(n.clone(), c.canonical()),
                other => other.clone(),
            })
            .collect();
        tbox.sort();
        tbox.dedup();
        let mut abox: Vec<Assertion> = self
            .abox
            .iter()
            .map(|a| match a {
                Assertion::ClassAssertion(i, c) => Assertion::ClassAssertion(i.clone(), c.canonical()),
                other => other.clone(),
            })
            .collect();
        abox.sort();
        abox.dedup();
        KnowledgeBase { signature: self.signature.clone(), tbox, abox }
    }

    /// Asserted atomic classes of an individual.
    pub fn asserted_classes<'a>(&'a self, individual: &'a str) -> impl Iterator<Item = &'a Name> + 'a {
        self.abox.iter().filter_map(move |a| match a {
            Assertion::ClassAssertion(i, ClassExpression::Atomic(c)) if i.as_str() == individual => Some(c),
            _ => None,
        })
    }

    pub fn definition_of(&self, class: &str) -> Option<&ClassExpression> {
        self.tbox.iter().find_map(|ax| match ax {
            Axiom::EquivalentClass(n, def) if n.as_str() == class => Some(def),
            _ => None,
        })
    }

    pub(crate) fn declare_mut(&mut self, name: &str, kind: TermKind) -> Result<Name, KbError> {
        validate_user_name(name)?;
        self.declare_unchecked(Name::new(name), kind)
    }

    fn declare_unchecked(&mut self, name: Name, kind: TermKind) -> Result<Name, KbError> {
        match self.signature.get(&name) {
            Some(existing) if *existing != kind => {
                Err(KbError::KindConflict { name, existing: *existing, requested: kind })
            }
            Some(_) => Ok(name),
            None => {
                self.signature.insert(name.clone(), kind);
                Ok(name)
            }
        }
    }

    pub(crate) fn require(&self, name: &str, kind: TermKind) -> Result<Name, KbError> {
        match self.signature.get_key_value(name) {
            Some((n, k)) if *k == kind => Ok(n.clone()),
            Some((n, k)) => Err(KbError::KindConflict { name: n.clone(), existing: *k, requested: kind }),
            None => Err(KbError::UndeclaredTerm { name: Name::new(name), kind }),
        }
    }

    fn check_expression(&self, expr: &ClassExpression) -> Result<(), KbError> {
        match expr {
            ClassExpression::Top => Ok(()),
            ClassExpression::Atomic(c) => self.require(c, TermKind::Class).map(drop),
            ClassExpression::Conjunction(parts) => {
                if parts.len() < 2 {
                    return Err(KbError::ShortConjunction);
                }
                parts.iter().try_for_each(|p| self.check_expression(p))
            }
            ClassExpression::Exists(r, filler) => {
                self.require(r, TermKind::Role)?;
                self.check_expression(filler)
            }
        }
    }

    pub(crate) fn add_axiom_mut(&mut self, axiom: Axiom) -> Result<(), KbError> {
        match &axiom {
            Axiom::SubClassOf(c, d) => {
                self.check_expression(c)?;
                self.check_expression(d)?;
            }
            Axiom::EquivalentClass(name, def) => {
                self.require(name, TermKind::Class)?;
                self.check_expression(def)?;
                if let Some(existing) = self.definition_of(name) {
                    if existing.canonical() != def.canonical() {
                        return Err(KbError::ConflictingDefinition(name.clone()));
                    }
                }
            }
            Axiom::SubRoleOf(r, s) => {
                self.require(r, TermKind::Role)?;
                self.require(s, TermKind::Role)?;
            }
            Axiom::SubstantiveFunction { object_class, function_class } => {
                if self.has_function_role().is_none() {
                    return Err(KbError::MissingHasFunction);
                }
                self.require(object_class, TermKind::Class)?;
                self.require(function_class, TermKind::Class)?;
            }
        }
        if !self.tbox.contains(&axiom) {
            self.tbox.push(axiom);
        }
        Ok(())
    }

    pub(crate) fn add_assertion_mut(&mut self, assertion: Assertion) -> Result<(), KbError> {
        match &assertion {
            Assertion::ClassAssertion(i, c) => {
                self.require(i, TermKind::Individual)?;
                self.check_expression(c)?;
            }
            Assertion::RoleAssertion(a, r, b) => {
                self.require(a, TermKind::Individual)?;
                self.require(r, TermKind::Role)?;
                self.require(b, TermKind::Individual)?;
            }
        }
        if !self.abox.contains(&assertion) {
            self.abox.push(assertion);
        }
        Ok(())
    }

    pub(crate) fn affords_mut(&mut self, object: &str, function_class: &str) -> Result<Name, KbError> {
        if self.has_function_role().is_none() {
            return Err(KbError::MissingHasFunction);
        }
        let object = self.require(object, TermKind::Individual)?;
        let function_class = self.require(function_class, TermKind::Class)?;
        let witness = self.declare_unchecked(witness_name(&object, &function_class), TermKind::Individual)?;
        self.add_assertion_mut(Assertion::ClassAssertion(witness.clone(), ClassExpression::Atomic(function_class)))?;
        self.add_assertion_mut(Assertion::RoleAssertion(object, Name::new(HAS_FUNCTION), witness.clone()))?;
        Ok(witness)
    }

    /// Adds a class under a generated (underscore-prefixed) name. Used by
    /// query answering to name complex expressions.
    pub(crate) fn with_generated_definition(&self, name: &str, def: ClassExpression) -> KnowledgeBase {
        debug_assert!(name.starts_with('_'));
        let mut kb = self.clone();
        let name = Name::new(name);
        kb.signature.insert(name.clone(), TermKind::Class);
        kb.tbox.push(Axiom::EquivalentClass(name, def));
        kb
    }
}
