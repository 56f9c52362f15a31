//! Affordance knowledge base: an EL ontology of everyday objects and the
//! functions they afford, a reasoner, provider selection and a grid-world
//! mission simulator.

pub mod grid;
pub mod kb;
pub mod odl;
pub mod reasoner;
pub mod registry;
pub mod selection;
pub mod sim;

pub use grid::{Cell, Direction};
pub use kb::{Assertion, Axiom, ClassExpression, KbError, KnowledgeBase, Name, TermId, TermKind, HAS_FUNCTION};
pub use reasoner::{InferredAbox, Reasoner, ReasonerError, SubsumptionRelation};
pub use registry::Registry;
pub use selection::{select_provider, Candidate, ProviderSelector, SelectionError, SelectionResult, Tier};
pub use sim::{execute_mission, MissionReport, WorldState};
