use std::collections::VecDeque;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use super::world::WorldState;
use crate::grid::{Cell, Direction};
use crate::registry::Registry;

/// Cells from start to goal, consecutive cells 4-adjacent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Path {
    pub cells: Vec<Cell>,
}

impl Path {
    pub fn moves(&self) -> usize {
        self.cells.len().saturating_sub(1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("no path from {from} to {to}")]
    NoPath { from: Cell, to: Cell },
    #[error("cell {0} is outside the grid")]
    OutOfBounds(Cell),
}

pub trait PathPlanner: Send + Sync {
    fn name(&self) -> &'static str;

    /// Shortest route that only enters free cells, except for `to` itself.
    fn plan(&self, world: &WorldState, from: Cell, to: Cell) -> Result<Path, PathError>;
}

/// Breadth-first search expanding neighbours North, East, South, West.
#[derive(Debug, Clone, Copy, Default)]
pub struct BreadthFirst;

impl PathPlanner for BreadthFirst {
    fn name(&self) -> &'static str {
        "bfs"
    }

    fn plan(&self, world: &WorldState, from: Cell, to: Cell) -> Result<Path, PathError> {
        for cell in [from, to] {
            if !world.in_bounds(cell) {
                return Err(PathError::OutOfBounds(cell));
            }
        }
        let (w, h) = (world.width, world.height);
        let index = |c: Cell| c.y as usize * w as usize + c.x as usize;
        let mut blocked = vec![false; w as usize * h as usize];
        for obj in world.objects().values() {
            if let Some(c) = obj.cell {
                blocked[index(c)] = c != to;
            }
        }
        let mut parent: Vec<Option<Cell>> = vec![None; blocked.len()];
        let mut seen = vec![false; blocked.len()];
        seen[index(from)] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(cur) = queue.pop_front() {
            if cur == to {
                let mut cells = vec![to];
                let mut at = to;
                while let Some(p) = parent[index(at)] {
                    cells.push(p);
                    at = p;
                }
                cells.reverse();
                return Ok(Path { cells });
            }
            for dir in Direction::ORDER {
                if let Some(next) = cur.step(dir, w, h) {
                    let i = index(next);
                    if !seen[i] && !blocked[i] {
                        seen[i] = true;
                        parent[i] = Some(cur);
                        queue.push_back(next);
                    }
                }
            }
        }
        Err(PathError::NoPath { from, to })
    }
}

pub fn planners() -> Registry<dyn PathPlanner> {
    let mut reg: Registry<dyn PathPlanner> = Registry::new();
    reg.register(BreadthFirst.name(), Arc::new(BreadthFirst));
    reg
}

pub fn plan_path(world: &WorldState, from: Cell, to: Cell) -> Result<Path, PathError> {
    BreadthFirst.plan(world, from, to)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::Name;
    use crate::sim::world::{TagRecord, WorldObject};

    fn block(world: WorldState, id: &str, x: u32, y: u32) -> WorldState {
        let tag = TagRecord { tag_id: id.into(), object_class: Name::new("Box"), payload: String::new() };
        world.with_object(id, WorldObject { tag, cell: Some(Cell::new(x, y)), available: true, rank: 0 }).unwrap()
    }

    #[test]
    fn trivial_and_open_grid() {
        let w = WorldState::new(5, 5, Cell::new(0, 0)).unwrap();
        let p = plan_path(&w, Cell::new(2, 2), Cell::new(2, 2)).unwrap();
        assert_eq!(p.cells, vec![Cell::new(2, 2)]);
        assert_eq!(p.moves(), 0);
        let p = plan_path(&w, Cell::new(0, 0), Cell::new(2, 2)).unwrap();
        assert_eq!(p.moves(), 4);
        // East is tried before South
        assert_eq!(p.cells[1], Cell::new(1, 0));
        assert_eq!(p.cells[2], Cell::new(2, 0));
    }

    #[test]
    fn goal_object_is_reachable_but_others_block() {
        let w = WorldState::new(3, 3, Cell::new(0, 0)).unwrap();
        let w = block(block(w, "a", 1, 0), "goal", 2, 0);
        let p = plan_path(&w, Cell::new(0, 0), Cell::new(2, 0)).unwrap();
        assert_eq!(p.moves(), 4);
        assert!(!p.cells.contains(&Cell::new(1, 0)));
    }

    #[test]
    fn enclosed_goal() {
        let w = WorldState::new(3, 3, Cell::new(0, 0)).unwrap();
        let w = block(block(block(block(w, "n", 1, 0), "e", 2, 1), "s", 1, 2), "w", 0, 1);
        assert_eq!(
            plan_path(&w, Cell::new(0, 0), Cell::new(1, 1)),
            Err(PathError::NoPath { from: Cell::new(0, 0), to: Cell::new(1, 1) })
        );
        assert!(matches!(plan_path(&w, Cell::new(0, 0), Cell::new(3, 0)), Err(PathError::OutOfBounds(_))));
    }
}
