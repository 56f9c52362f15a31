//! Answers "provide function F" against a world snapshot: substantive
//! providers first, then scenario preference rank, then object id.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::kb::{Axiom, ClassExpression, KbError, KnowledgeBase, Name, TermKind, HAS_FUNCTION};
use crate::reasoner::{Reasoner, ReasonerError, Saturation};
use crate::sim::WorldState;

const PROVIDES: &str = "_provides";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Tier {
    Substantive,
    NonSubstantive,
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tier::Substantive => "Substantive",
            Tier::NonSubstantive => "NonSubstantive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub object_id: Name,
    pub tier: Tier,
    pub preference_rank: i64,
    pub available: bool,
}

impl Candidate {
    /// The selection order: tier, then rank descending, then id.
    pub fn ranking(&self, other: &Candidate) -> Ordering {
        self.tier
            .cmp(&other.tier)
            .then(other.preference_rank.cmp(&self.preference_rank))
            .then(self.object_id.cmp(&other.object_id))
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}, rank {})", self.object_id, self.tier, self.preference_rank)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelectionResult {
    pub chosen: Candidate,
    pub alternatives: Vec<Candidate>,
}

impl fmt::Display for SelectionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "chosen: {}", self.chosen)?;
        for alt in &self.alternatives {
            writeln!(f, "alternative: {alt}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SelectionError {
    #[error("no provider for {function}")]
    NoProvider { function: Name, unavailable_affording: usize },
    #[error(transparent)]
    Reasoner(#[from] ReasonerError),
}

impl From<KbError> for SelectionError {
    fn from(e: KbError) -> Self {
        SelectionError::Reasoner(ReasonerError::Kb(e))
    }
}

/// Selection backed by a chosen reasoning strategy.
#[derive(Clone, Copy)]
pub struct ProviderSelector<'r> {
    reasoner: &'r dyn Reasoner,
}

impl<'r> ProviderSelector<'r> {
    pub fn new(reasoner: &'r dyn Reasoner) -> Self {
        ProviderSelector { reasoner }
    }

    fn provision(function: &str) -> ClassExpression {
        ClassExpression::exists(HAS_FUNCTION, ClassExpression::atomic(function))
    }

    /// Whether the object is entailed to have some function of class `F`.
    pub fn provides(&self, kb: &KnowledgeBase, object: &str, function: &str) -> Result<bool, SelectionError> {
        kb.require(function, TermKind::Class)?;
        kb.require(HAS_FUNCTION, TermKind::Role)?;
        Ok(self.reasoner.entails_instance(kb, object, &Self::provision(function))?)
    }

    /// Whether an asserted class of the object has a substantive function
    /// subsumed by `F`.
    pub fn is_substantive_provider(
        &self,
        kb: &KnowledgeBase,
        object: &str,
        function: &str,
    ) -> Result<bool, SelectionError> {
        kb.require(object, TermKind::Individual)?;
        kb.require(function, TermKind::Class)?;
        let taxonomy = self.reasoner.classify(kb)?;
        Ok(substantive_in(kb, object, |g| taxonomy.contains(g, function)))
    }

    pub fn select(
        &self,
        kb: &KnowledgeBase,
        world: &WorldState,
        function: &str,
    ) -> Result<SelectionResult, SelectionError> {
        kb.require(function, TermKind::Class)?;
        kb.require(HAS_FUNCTION, TermKind::Role)?;
        for id in world.objects().keys() {
            kb.require(id, TermKind::Individual)?;
        }
        let extended = kb.with_generated_definition(PROVIDES, Self::provision(function));
        let inferred = self.reasoner.materialize(&extended)?;
        let taxonomy = self.reasoner.classify(kb)?;
        let mut candidates = Vec::new();
        let mut unavailable_affording = 0;
        for (id, object) in world.objects() {
            if !inferred.is_member(id, PROVIDES) {
                continue;
            }
            if !object.available || object.cell.is_none() {
                unavailable_affording += 1;
                continue;
            }
            let tier = if substantive_in(kb, id, |g| taxonomy.contains(g, function)) {
                Tier::Substantive
            } else {
                Tier::NonSubstantive
            };
            candidates.push(Candidate { object_id: id.clone(), tier, preference_rank: object.rank, available: true });
        }
        candidates.sort_by(Candidate::ranking);
        let mut ranked = candidates.into_iter();
        match ranked.next() {
            Some(chosen) => Ok(SelectionResult { chosen, alternatives: ranked.collect() }),
            None => Err(SelectionError::NoProvider { function: Name::new(function), unavailable_affording }),
        }
    }
}

fn substantive_in(kb: &KnowledgeBase, object: &str, covers: impl Fn(&str) -> bool) -> bool {
    let asserted: Vec<&Name> = kb.asserted_classes(object).collect();
    kb.tbox().iter().any(|ax| match ax {
        Axiom::SubstantiveFunction { object_class, function_class } => {
            asserted.contains(&object_class) && covers(function_class)
        }
        _ => false,
    })
}

pub fn provides(kb: &KnowledgeBase, object: &str, function: &str) -> Result<bool, SelectionError> {
    ProviderSelector::new(&Saturation).provides(kb, object, function)
}

pub fn is_substantive_provider(kb: &KnowledgeBase, object: &str, function: &str) -> Result<bool, SelectionError> {
    ProviderSelector::new(&Saturation).is_substantive_provider(kb, object, function)
}

pub fn select_provider(
    kb: &KnowledgeBase,
    world: &WorldState,
    function: &str,
) -> Result<SelectionResult, SelectionError> {
    ProviderSelector::new(&Saturation).select(kb, world, function)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Cell;
    use crate::odl::parse_document;
    use crate::sim::{TagRecord, WorldObject};

    const KB: &str = "\
role hasFunction
class RainwaterProtector
class UVProtector
class WaterStorage
define Umbrella == exists hasFunction . RainwaterProtector
class Raincoat
class Hat
class Newspaper
class Mug
substantive Umbrella -> RainwaterProtector
substantive Hat -> UVProtector
ind umbrella1
ind raincoat1
ind hat1
ind newspaper1
ind mug1
ind blank1
type umbrella1 : Umbrella
type raincoat1 : Raincoat
type hat1 : Hat
type newspaper1 : Newspaper
type mug1 : Mug
affords raincoat1 RainwaterProtector
affords hat1 RainwaterProtector
affords newspaper1 RainwaterProtector
affords mug1 WaterStorage
";

    fn world(ids: &[&str]) -> WorldState {
        let mut w = WorldState::new(6, 2, Cell::new(0, 0)).unwrap();
        for (i, id) in ids.iter().enumerate() {
            let tag =
                TagRecord { tag_id: format!("tag-{id}"), object_class: Name::new("Thing"), payload: String::new() };
            let obj = WorldObject { tag, cell: Some(Cell::new(i as u32, 1)), available: true, rank: 0 };
            w = w.with_object(id, obj).unwrap();
        }
        w
    }

    #[test]
    fn provides_examples() {
        let kb = parse_document(KB).unwrap();
        assert!(provides(&kb, "newspaper1", "RainwaterProtector").unwrap());
        assert!(!provides(&kb, "mug1", "RainwaterProtector").unwrap());
        assert!(!provides(&kb, "blank1", "RainwaterProtector").unwrap());
        assert!(provides(&kb, "umbrella1", "RainwaterProtector").unwrap());
        assert!(provides(&kb, "nobody", "RainwaterProtector").is_err());
    }

    #[test]
    fn substantive_examples() {
        let kb = parse_document(KB).unwrap();
        assert!(is_substantive_provider(&kb, "umbrella1", "RainwaterProtector").unwrap());
        // hat1 is inferred to be an Umbrella, which must not count
        assert!(!is_substantive_provider(&kb, "hat1", "RainwaterProtector").unwrap());
        assert!(is_substantive_provider(&kb, "hat1", "UVProtector").unwrap());
        assert!(!is_substantive_provider(&kb, "mug1", "WaterStorage").unwrap());
    }

    #[test]
    fn selection_examples() {
        let kb = parse_document(KB).unwrap();
        let all = world(&["umbrella1", "raincoat1", "hat1", "newspaper1", "mug1"]);
        let r = select_provider(&kb, &all, "RainwaterProtector").unwrap();
        assert_eq!(r.chosen.object_id.as_str(), "umbrella1");
        assert_eq!(r.chosen.tier, Tier::Substantive);
        let alts: Vec<_> = r.alternatives.iter().map(|c| c.object_id.as_str()).collect();
        assert_eq!(alts, ["hat1", "newspaper1", "raincoat1"]);

        let r = select_provider(&kb, &all.without_object("umbrella1"), "RainwaterProtector").unwrap();
        assert_eq!(r.chosen.object_id.as_str(), "hat1");
        assert_eq!(r.chosen.tier, Tier::NonSubstantive);

        let err = select_provider(&kb, &world(&["mug1"]), "RainwaterProtector").unwrap_err();
        assert_eq!(err.to_string(), "no provider for RainwaterProtector");
    }

    #[test]
    fn unavailable_objects_are_counted_not_chosen() {
        let kb = parse_document(KB).unwrap();
        let w = world(&["umbrella1"]);
        let mut off = w.object("umbrella1").unwrap().clone();
        off.available = false;
        let w = w.with_object("umbrella1", off).unwrap();
        assert_eq!(
            select_provider(&kb, &w, "RainwaterProtector"),
            Err(SelectionError::NoProvider { function: Name::new("RainwaterProtector"), unavailable_affording: 1 })
        );
    }
}
