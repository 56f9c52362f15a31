//! Subsumption and instance reasoning over the EL fragment (top,
//! conjunction, existential restriction, role hierarchy, definitions).
//!
//! Two strategies implement [`Reasoner`]: [`Saturation`], an indexed
//! completion-rule engine, and [`NaiveOracle`], a slow canonical-model
//! construction that shares no code with it and serves as a test oracle.

mod oracle;
mod saturation;

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

pub use oracle::NaiveOracle;
pub use saturation::Saturation;

use crate::kb::{ClassExpression, KbError, KnowledgeBase, Name, TermKind};
use crate::registry::Registry;

/// Name used for the top class in results.
pub const THING: &str = "Thing";

const QUERY_SUB: &str = "_query_sub";
const QUERY_SUP: &str = "_query_sup";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReasonerError {
    #[error(transparent)]
    Kb(#[from] KbError),
    #[error("internal error: saturation exceeded {limit} rule firings")]
    IterationCeiling { limit: usize },
}

/// Entailed `sub ⊑ sup` pairs between named classes and `Thing`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SubsumptionRelation {
    pub pairs: BTreeSet<(Name, Name)>,
}

impl SubsumptionRelation {
    pub fn contains(&self, sub: &str, sup: &str) -> bool {
        self.pairs.contains(&(Name::new(sub), Name::new(sup)))
    }

    pub fn superclasses<'a>(&'a self, sub: &'a str) -> impl Iterator<Item = &'a Name> + 'a {
        self.pairs.iter().filter(move |(s, _)| s.as_str() == sub).map(|(_, d)| d)
    }
}

/// Entailed class memberships (named classes and `Thing`) and role links
/// closed under the role hierarchy.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct InferredAbox {
    pub class_memberships: BTreeSet<(Name, Name)>,
    pub role_links: BTreeSet<(Name, Name, Name)>,
}

impl InferredAbox {
    pub fn is_member(&self, individual: &str, class: &str) -> bool {
        self.class_memberships.contains(&(Name::new(individual), Name::new(class)))
    }

    pub fn members_of<'a>(&'a self, class: &'a str) -> impl Iterator<Item = &'a Name> + 'a {
        self.class_memberships.iter().filter(move |(_, c)| c.as_str() == class).map(|(i, _)| i)
    }
}

pub trait Reasoner: Send + Sync {
    fn name(&self) -> &'static str;

    fn classify(&self, kb: &KnowledgeBase) -> Result<SubsumptionRelation, ReasonerError>;

    fn materialize(&self, kb: &KnowledgeBase) -> Result<InferredAbox, ReasonerError>;

    /// `kb ⊨ sub ⊑ sup`, decided by naming both expressions and classifying.
    fn subsumes(
        &self,
        kb: &KnowledgeBase,
        sub: &ClassExpression,
        sup: &ClassExpression,
    ) -> Result<bool, ReasonerError> {
        check_expression(kb, sub)?;
        check_expression(kb, sup)?;
        let extended =
            kb.with_generated_definition(QUERY_SUB, sub.clone()).with_generated_definition(QUERY_SUP, sup.clone());
        Ok(self.classify(&extended)?.contains(QUERY_SUB, QUERY_SUP))
    }

    /// `kb ⊨ individual : class`.
    fn entails_instance(
        &self,
        kb: &KnowledgeBase,
        individual: &str,
        class: &ClassExpression,
    ) -> Result<bool, ReasonerError> {
        kb.require(individual, TermKind::Individual)?;
        check_expression(kb, class)?;
        let extended = kb.with_generated_definition(QUERY_SUP, class.clone());
        Ok(self.materialize(&extended)?.is_member(individual, QUERY_SUP))
    }
}

/// Checks that an expression only mentions declared terms of the right
/// kind.
pub(crate) fn check_expression(kb: &KnowledgeBase, expr: &ClassExpression) -> Result<(), KbError> {
    let mut result = Ok(());
    expr.visit(&mut |e| {
        if result.is_err() {
            return;
        }
        result = match e {
            ClassExpression::Atomic(c) => kb.require(c, TermKind::Class).map(drop),
            ClassExpression::Exists(r, _) => kb.require(r, TermKind::Role).map(drop),
            ClassExpression::Conjunction(parts) if parts.len() < 2 => Err(KbError::ShortConjunction),
            _ => Ok(()),
        };
    });
    result
}

/// Built-in reasoners; `el-saturation` is the default.
pub fn registry() -> Registry<dyn Reasoner> {
    let mut reg: Registry<dyn Reasoner> = Registry::new();
    reg.register(Saturation.name(), Arc::new(Saturation));
    reg.register(NaiveOracle.name(), Arc::new(NaiveOracle));
    reg
}

pub fn classify(kb: &KnowledgeBase) -> Result<SubsumptionRelation, ReasonerError> {
    Saturation.classify(kb)
}

pub fn materialize(kb: &KnowledgeBase) -> Result<InferredAbox, ReasonerError> {
    Saturation.materialize(kb)
}

pub fn subsumes(kb: &KnowledgeBase, sub: &ClassExpression, sup: &ClassExpression) -> Result<bool, ReasonerError> {
    Saturation.subsumes(kb, sub, sup)
}

pub fn entails_instance(kb: &KnowledgeBase, individual: &str, class: &ClassExpression) -> Result<bool, ReasonerError> {
    Saturation.entails_instance(kb, individual, class)
}

pub fn oracle_entails(kb: &KnowledgeBase, individual: &str, class: &ClassExpression) -> Result<bool, ReasonerError> {
    NaiveOracle.entails_instance(kb, individual, class)
}
