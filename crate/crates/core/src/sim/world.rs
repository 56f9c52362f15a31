use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::grid::Cell;
use crate::kb::Name;
use crate::odl::{default_floor_tag, parse_default_floor_tag, Scenario};

/// What the RFID tag on an object stores.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TagRecord {
    pub tag_id: String,
    pub object_class: Name,
    /// Opaque manipulation hints.
    pub payload: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WorldObject {
    pub tag: TagRecord,
    /// `None` while carried.
    pub cell: Option<Cell>,
    pub available: bool,
    pub rank: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WorldError {
    #[error("unknown object {0}")]
    UnknownObject(Name),
    #[error("robot at {robot} is not at object {object}")]
    NotAtObject { object: Name, robot: Cell },
    #[error("robot already carries {0}")]
    AlreadyCarrying(Name),
    #[error("object {0} is unavailable")]
    Unavailable(Name),
    #[error("cell {0} is outside the grid")]
    OutOfBounds(Cell),
}

/// Immutable snapshot of the smart space. Every operation returns a new
/// state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WorldState {
    pub width: u32,
    pub height: u32,
    /// Explicit floor tags; other cells carry [`default_floor_tag`].
    floor_tags: BTreeMap<Cell, String>,
    objects: BTreeMap<Name, WorldObject>,
    robot: Cell,
    carried: Option<Name>,
}

impl WorldState {
    pub fn new(width: u32, height: u32, robot: Cell) -> Result<WorldState, WorldError> {
        let world =
            WorldState { width, height, floor_tags: BTreeMap::new(), objects: BTreeMap::new(), robot, carried: None };
        world.check(robot)?;
        Ok(world)
    }

    pub fn from_scenario(scenario: &Scenario) -> WorldState {
        let spec = &scenario.world;
        let objects = spec
            .objects
            .iter()
            .map(|o| {
                let tag =
                    TagRecord { tag_id: o.tag_id.clone(), object_class: o.class.clone(), payload: o.payload.clone() };
                (o.id.clone(), WorldObject { tag, cell: Some(o.cell), available: o.available, rank: o.rank })
            })
            .collect();
        WorldState {
            width: spec.width,
            height: spec.height,
            floor_tags: spec.floor_tags.clone(),
            objects,
            robot: scenario.robot_start,
            carried: None,
        }
    }

    pub fn in_bounds(&self, cell: Cell) -> bool {
        cell.x < self.width && cell.y < self.height
    }

    fn check(&self, cell: Cell) -> Result<(), WorldError> {
        if self.in_bounds(cell) {
            Ok(())
        } else {
            Err(WorldError::OutOfBounds(cell))
        }
    }

    pub fn robot(&self) -> Cell {
        self.robot
    }

    pub fn carried(&self) -> Option<&Name> {
        self.carried.as_ref()
    }

    pub fn objects(&self) -> &BTreeMap<Name, WorldObject> {
        &self.objects
    }

    pub fn object(&self, id: &str) -> Option<&WorldObject> {
        self.objects.get(id)
    }

    pub fn object_at(&self, cell: Cell) -> Option<&Name> {
        self.objects.iter().find(|(_, o)| o.cell == Some(cell)).map(|(id, _)| id)
    }

    pub fn is_occupied(&self, cell: Cell) -> bool {
        self.object_at(cell).is_some()
    }

    pub fn floor_tag(&self, cell: Cell) -> String {
        self.floor_tags.get(&cell).cloned().unwrap_or_else(|| default_floor_tag(cell))
    }

    pub fn cell_of_floor_tag(&self, tag: &str) -> Option<Cell> {
        if let Some((cell, _)) = self.floor_tags.iter().find(|(_, t)| t.as_str() == tag) {
            return Some(*cell);
        }
        parse_default_floor_tag(tag).filter(|c| self.in_bounds(*c) && !self.floor_tags.contains_key(c))
    }

    pub fn with_floor_tag(&self, cell: Cell, tag: &str) -> Result<WorldState, WorldError> {
        self.check(cell)?;
        let mut next = self.clone();
        next.floor_tags.insert(cell, tag.to_string());
        Ok(next)
    }

    /// Places (or replaces) an object.
    pub fn with_object(&self, id: &str, object: WorldObject) -> Result<WorldState, WorldError> {
        if let Some(cell) = object.cell {
            self.check(cell)?;
        }
        let mut next = self.clone();
        next.objects.insert(Name::new(id), object);
        Ok(next)
    }

    pub fn without_object(&self, id: &str) -> WorldState {
        let mut next = self.clone();
        next.objects.remove(id);
        if next.carried.as_deref() == Some(id) {
            next.carried = None;
        }
        next
    }

    pub fn with_robot_at(&self, cell: Cell) -> Result<WorldState, WorldError> {
        self.check(cell)?;
        let mut next = self.clone();
        next.robot = cell;
        Ok(next)
    }

    pub fn pickup(&self, id: &str) -> Result<WorldState, WorldError> {
        let object = self.objects.get(id).ok_or_else(|| WorldError::UnknownObject(Name::new(id)))?;
        if let Some(held) = &self.carried {
            return Err(WorldError::AlreadyCarrying(held.clone()));
        }
        if !object.available {
            return Err(WorldError::Unavailable(Name::new(id)));
        }
        if object.cell != Some(self.robot) {
            return Err(WorldError::NotAtObject { object: Name::new(id), robot: self.robot });
        }
        let mut next = self.clone();
        let held = next.objects.get_mut(id).expect("checked above");
        held.available = false;
        held.cell = None;
        next.carried = Some(Name::new(id));
        Ok(next)
    }
}
