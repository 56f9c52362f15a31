//! Grid-world stand-in for the smart space and the six-step fetch mission.

mod mission;
mod path;
mod world;

pub use mission::{
    condition_to_function, execute_mission, tagged_kb, Mission, MissionError, MissionOutcome, MissionReport,
    MissionRun, StepRecord, UnknownCondition,
};
pub use path::{plan_path, planners, BreadthFirst, Path, PathError, PathPlanner};
pub use world::{TagRecord, WorldError, WorldObject, WorldState};
