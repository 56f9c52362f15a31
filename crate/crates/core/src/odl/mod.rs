//! Text front end: ontology documents, scenarios and forecasts.

mod document;
mod error;
mod forecast;
mod lexer;
mod scenario;

pub use document::{parse_document, print_axiom, print_document, print_expression};
pub use error::{ParseError, ParseErrorKind, SourceSpan};
pub use forecast::{parse_forecast, Forecast};
pub(crate) use scenario::parse_default_floor_tag;
pub use scenario::{
    default_floor_tag, parse_scenario, CalendarEvent, ForecastRef, ObjectPlacement, Scenario, WorldSpec, MAX_GRID_SIDE,
};
