use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::path::{BreadthFirst, PathPlanner};
use super::world::WorldState;
use crate::kb::{Assertion, ClassExpression, KbError, KnowledgeBase, Name};
use crate::odl::{parse_forecast, Forecast, ForecastRef, Scenario};
use crate::reasoner::{Reasoner, Saturation};
use crate::selection::{ProviderSelector, Tier};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("unknown condition {0}")]
pub struct UnknownCondition(pub String);

pub fn condition_to_function(condition: &str, map: &[(String, Name)]) -> Result<Name, UnknownCondition> {
    map.iter()
        .find(|(c, _)| c == condition)
        .map(|(_, f)| f.clone())
        .ok_or_else(|| UnknownCondition(condition.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub step: u8,
    pub description: String,
    pub outcome: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status")]
pub enum MissionOutcome {
    Completed { object: Name, tier: Tier },
    Failed { step: u8, reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MissionReport {
    pub steps: Vec<StepRecord>,
    pub outcome: MissionOutcome,
    /// Moves made by the robot.
    pub path_length: usize,
}

impl MissionReport {
    pub fn is_completed(&self) -> bool {
        matches!(self.outcome, MissionOutcome::Completed { .. })
    }
}

impl fmt::Display for MissionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "step {}: {} -> {}", s.step, s.description, s.outcome)?;
        }
        writeln!(f, "path length: {}", self.path_length)?;
        match &self.outcome {
            MissionOutcome::Completed { object, tier } => writeln!(f, "Completed: {object} ({tier})"),
            MissionOutcome::Failed { reason, .. } => writeln!(f, "Failed: {reason}"),
        }
    }
}

/// Raised when the scenario places objects the knowledge base does not
/// know about.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MissionError {
    #[error("scenario object {object}: {source}")]
    Inconsistent { object: Name, source: KbError },
}

/// Adds the class stored on each object's tag to the knowledge base.
pub fn tagged_kb(kb: &KnowledgeBase, world: &WorldState) -> Result<KnowledgeBase, MissionError> {
    let mut out = kb.clone();
    for (id, object) in world.objects() {
        let typed = Assertion::ClassAssertion(id.clone(), ClassExpression::Atomic(object.tag.object_class.clone()));
        out = out.with_assertion(typed).map_err(|source| MissionError::Inconsistent { object: id.clone(), source })?;
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct MissionRun {
    pub report: MissionReport,
    pub world: WorldState,
}

#[derive(Clone, Copy)]
pub struct Mission<'a> {
    reasoner: &'a dyn Reasoner,
    planner: &'a dyn PathPlanner,
}

impl Default for Mission<'static> {
    fn default() -> Self {
        Mission { reasoner: &Saturation, planner: &BreadthFirst }
    }
}

struct Log {
    steps: Vec<StepRecord>,
}

impl Log {
    fn ok(&mut self, step: u8, description: String, outcome: String) {
        self.steps.push(StepRecord { step, description, outcome });
    }

    fn fail(mut self, step: u8, description: String, reason: String, path_length: usize) -> MissionReport {
        self.steps.push(StepRecord { step, description, outcome: format!("failed: {reason}") });
        MissionReport { steps: self.steps, outcome: MissionOutcome::Failed { step, reason }, path_length }
    }
}

impl<'a> Mission<'a> {
    pub fn new(reasoner: &'a dyn Reasoner, planner: &'a dyn PathPlanner) -> Self {
        Mission { reasoner, planner }
    }

    pub fn run(&self, kb: &KnowledgeBase, scenario: &Scenario) -> Result<MissionRun, MissionError> {
        let mut world = WorldState::from_scenario(scenario);
        let kb = tagged_kb(kb, &world)?;
        let mut log = Log { steps: Vec::new() };
        let done = |report| MissionRun { report, world: WorldState::from_scenario(scenario) };

        let d1 = "read first calendar event".to_string();
        let Some(event) = scenario.calendar_events.first() else {
            return Ok(done(log.fail(1, d1, "no calendar event".into(), 0)));
        };
        log.ok(1, d1, format!("{} {}", event.date, event.title));

        let d2 = format!("read weather forecast for {}", event.date);
        let forecast = match load_forecast(&scenario.forecast) {
            Ok(f) => f,
            Err(reason) => return Ok(done(log.fail(2, d2, reason, 0))),
        };
        let Some(condition) = forecast.condition_on(&event.date) else {
            return Ok(done(log.fail(2, d2, "no forecast for date".into(), 0)));
        };
        log.ok(2, d2, condition.to_string());

        let d3 = format!("select provider for {condition}");
        let function = match condition_to_function(condition, &scenario.condition_map) {
            Ok(f) => f,
            Err(e) => return Ok(done(log.fail(3, d3, e.to_string(), 0))),
        };
        let selection = match ProviderSelector::new(self.reasoner).select(&kb, &world, &function) {
            Ok(s) => s,
            Err(e) => return Ok(done(log.fail(3, d3, e.to_string(), 0))),
        };
        let chosen = selection.chosen.clone();
        log.ok(3, d3, format!("{function}: {chosen}, {} alternative(s)", selection.alternatives.len()));

        let d4 = "localize robot".to_string();
        let tag = world.floor_tag(world.robot());
        let Some(here) = world.cell_of_floor_tag(&tag) else {
            return Ok(done(log.fail(4, d4, format!("unreadable floor tag {tag}"), 0)));
        };
        log.ok(4, d4, format!("floor tag {tag} at {here}"));

        let target = world.object(&chosen.object_id).and_then(|o| o.cell).expect("selected objects are placed");
        let d5 = format!("navigate to {} at {target}", chosen.object_id);
        let path = match self.planner.plan(&world, here, target) {
            Ok(p) => p,
            Err(e) => return Ok(done(log.fail(5, d5, e.to_string(), 0))),
        };
        let cells: Vec<String> = path.cells.iter().map(ToString::to_string).collect();
        world = world.with_robot_at(target).expect("planned cells are in bounds");
        log.ok(5, d5, format!("{} move(s) via {}; path followed, 0 error events", path.moves(), cells.join(" ")));

        let d6 = format!("pick up {}", chosen.object_id);
        let object = world.object(&chosen.object_id).expect("selected objects exist").tag.clone();
        world = match world.pickup(&chosen.object_id) {
            Ok(w) => w,
            Err(e) => {
                let report = log.fail(6, d6, e.to_string(), path.moves());
                return Ok(MissionRun { report, world });
            }
        };
        log.ok(6, d6, format!("carrying {} (tag {})", chosen.object_id, object.tag_id));

        let report = MissionReport {
            steps: log.steps,
            outcome: MissionOutcome::Completed { object: chosen.object_id, tier: chosen.tier },
            path_length: path.moves(),
        };
        Ok(MissionRun { report, world })
    }
}

fn load_forecast(source: &ForecastRef) -> Result<Forecast, String> {
    match source {
        ForecastRef::Inline(f) => Ok(f.clone()),
        ForecastRef::File(path) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| format!("cannot read forecast {}: {e}", path.display()))?;
            parse_forecast(&text).map_err(|e| format!("bad forecast {}: {e}", path.display()))
        }
    }
}

pub fn execute_mission(kb: &KnowledgeBase, scenario: &Scenario) -> Result<MissionReport, MissionError> {
    Mission::default().run(kb, scenario).map(|run| run.report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::odl::{parse_document, parse_scenario};

    const KB: &str = "\
role hasFunction
class RainwaterProtector
define Umbrella == exists hasFunction . RainwaterProtector
class Raincoat
class Mug
substantive Umbrella -> RainwaterProtector
ind umbrella1
ind raincoat1
ind mug1
affords raincoat1 RainwaterProtector
";

    const SCENARIO: &str = "\
grid 4 3
robot 0 0
object umbrella1 Umbrella at 3 2
object raincoat1 Raincoat at 1 0 rank 2
object mug1 Mug at 0 2
event 2010-06-01 walk
forecast 2010-06-01 rain
map rain -> RainwaterProtector
";

    #[test]
    fn condition_mapping() {
        let map =
            vec![("rain".to_string(), Name::new("RainwaterProtector")), ("sunny".into(), Name::new("UVProtector"))];
        assert_eq!(condition_to_function("rain", &map).unwrap().as_str(), "RainwaterProtector");
        assert_eq!(condition_to_function("sunny", &map).unwrap().as_str(), "UVProtector");
        assert_eq!(condition_to_function("snow", &map), Err(UnknownCondition("snow".into())));
    }

    #[test]
    fn completes_with_umbrella() {
        let kb = parse_document(KB).unwrap();
        let run = Mission::default().run(&kb, &parse_scenario(SCENARIO).unwrap()).unwrap();
        assert_eq!(run.report.steps.len(), 6);
        assert_eq!(
            run.report.outcome,
            MissionOutcome::Completed { object: Name::new("umbrella1"), tier: Tier::Substantive }
        );
        // raincoat1 at (1,0) blocks the direct route east
        assert_eq!(run.report.path_length, 5);
        assert_eq!(run.world.carried().map(Name::as_str), Some("umbrella1"));
        assert_eq!(run.world.robot(), crate::grid::Cell::new(3, 2));
        assert_eq!(run.world.objects().len(), 3);
    }

    #[test]
    fn missing_forecast_date_fails_at_step_two() {
        let kb = parse_document(KB).unwrap();
        let scenario = parse_scenario(&SCENARIO.replace("forecast 2010-06-01", "forecast 2010-06-02")).unwrap();
        let report = execute_mission(&kb, &scenario).unwrap();
        assert_eq!(report.outcome, MissionOutcome::Failed { step: 2, reason: "no forecast for date".into() });
        assert_eq!(report.steps.last().unwrap().step, 2);
    }

    #[test]
    fn unknown_condition_fails_at_step_three() {
        let kb = parse_document(KB).unwrap();
        let scenario = parse_scenario(&SCENARIO.replace("2010-06-01 rain", "2010-06-01 snow")).unwrap();
        let report = execute_mission(&kb, &scenario).unwrap();
        assert_eq!(report.outcome, MissionOutcome::Failed { step: 3, reason: "unknown condition snow".into() });
    }

    #[test]
    fn undeclared_object_is_a_precondition_error() {
        let kb = parse_document(KB).unwrap();
        let scenario = parse_scenario(&format!("{SCENARIO}object ghost1 Mug at 2 2\n")).unwrap();
        assert!(matches!(execute_mission(&kb, &scenario), Err(MissionError::Inconsistent { .. })));
    }
}
