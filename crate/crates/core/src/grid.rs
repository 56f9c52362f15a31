//! Grid cells and moves of the smart-space floor.

use std::fmt;

use serde::Serialize;

/// A floor cell. `y` grows southwards, so North is `y - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Cell {
    pub x: u32,
    pub y: u32,
}

impl Cell {
    pub const fn new(x: u32, y: u32) -> Self {
        Cell { x, y }
    }

    /// Neighbour in `dir`, if it stays inside a `width` x `height` grid.
    pub fn step(self, dir: Direction, width: u32, height: u32) -> Option<Cell> {
        let (x, y) = (self.x, self.y);
        let next = match dir {
            Direction::North => Cell::new(x, y.checked_sub(1)?),
            Direction::East => Cell::new(x.checked_add(1)?, y),
            Direction::South => Cell::new(x, y.checked_add(1)?),
            Direction::West => Cell::new(x.checked_sub(1)?, y),
        };
        (next.x < width && next.y < height).then_some(next)
    }

    pub fn manhattan(self, other: Cell) -> u32 {
        self.x.abs_diff(other.x) + self.y.abs_diff(other.y)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    North,
    East,
    South,
    West,
}

impl Direction {
    /// Expansion order used by the planners' tie-break.
    pub const ORDER: [Direction; 4] = [Direction::North, Direction::East, Direction::South, Direction::West];
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn steps_stay_in_bounds() {
        let c = Cell::new(0, 0);
        assert_eq!(c.step(Direction::North, 3, 3), None);
        assert_eq!(c.step(Direction::West, 3, 3), None);
        assert_eq!(c.step(Direction::East, 3, 3), Some(Cell::new(1, 0)));
        assert_eq!(c.step(Direction::South, 3, 3), Some(Cell::new(0, 1)));
        assert_eq!(Cell::new(2, 2).step(Direction::East, 3, 3), None);
    }
}
