//! Sparse B3/S23 evolution on the unbounded plane.
//!
//! A [`Pattern`] is a sorted, duplicate-free list of live cells plus a
//! generation counter. Each step accumulates neighbour counts for the eight
//! Moore neighbours of every live cell in a hash map, so the cost is linear
//! in the population regardless of how far apart the cells are.

use std::cmp::Ordering;
use std::fmt;

use rustc_hash::FxHashMap;
use thiserror::Error;

/// A cell coordinate. `x` grows rightward and `y` grows downward.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub x: i64,
    pub y: i64,
}

impl Cell {
    pub const fn new(x: i64, y: i64) -> Self {
        Cell { x, y }
    }

    /// Chebyshev (king-move) distance.
    pub fn chebyshev(self, other: Cell) -> u64 {
        let dx = self.x.abs_diff(other.x);
        let dy = self.y.abs_diff(other.y);
        dx.max(dy)
    }
}

// Row-major order, which is also the order RLE bodies are written in.
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<(i64, i64)> for Cell {
    fn from((x, y): (i64, i64)) -> Self {
        Cell { x, y }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Inclusive bounding box of a non-empty pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BoundingBox {
    pub min_x: i64,
    pub min_y: i64,
    pub max_x: i64,
    pub max_y: i64,
}

impl BoundingBox {
    pub fn width(&self) -> u64 {
        self.max_x.abs_diff(self.min_x) + 1
    }

    pub fn height(&self) -> u64 {
        self.max_y.abs_diff(self.min_y) + 1
    }

    /// Chebyshev gap between two boxes; zero when they touch or overlap.
    pub fn gap(&self, other: &BoundingBox) -> u64 {
        let gx = if self.max_x < other.min_x {
            other.min_x.abs_diff(self.max_x)
        } else if other.max_x < self.min_x {
            self.min_x.abs_diff(other.max_x)
        } else {
            0
        };
        let gy = if self.max_y < other.min_y {
            other.min_y.abs_diff(self.max_y)
        } else if other.max_y < self.min_y {
            self.min_y.abs_diff(other.max_y)
        } else {
            0
        };
        gx.max(gy)
    }

    pub fn union(&self, other: &BoundingBox) -> BoundingBox {
        BoundingBox {
            min_x: self.min_x.min(other.min_x),
            min_y: self.min_y.min(other.min_y),
            max_x: self.max_x.max(other.max_x),
            max_y: self.max_y.max(other.max_y),
        }
    }
}

impl fmt::Display for BoundingBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{})",
            self.min_x, self.min_y, self.max_x, self.max_y
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("cell {0} is at the edge of the 64-bit coordinate range")]
    CoordinateOverflow(Cell),
    #[error("operation requires a non-empty pattern")]
    EmptyPattern,
}

/// The eight rotations and reflections of the square grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symmetry {
    Identity,
    Rot90,
    Rot180,
    Rot270,
    FlipX,
    FlipY,
    Transpose,
    AntiTranspose,
}

impl Symmetry {
    pub const ALL: [Symmetry; 8] = [
        Symmetry::Identity,
        Symmetry::Rot90,
        Symmetry::Rot180,
        Symmetry::Rot270,
        Symmetry::FlipX,
        Symmetry::FlipY,
        Symmetry::Transpose,
        Symmetry::AntiTranspose,
    ];

    /// Applies the linear map to a vector. Fails only for `i64::MIN`.
    pub fn apply(self, x: i64, y: i64) -> Option<(i64, i64)> {
        let neg = |v: i64| v.checked_neg();
        Some(match self {
            Symmetry::Identity => (x, y),
            Symmetry::Rot90 => (neg(y)?, x),
            Symmetry::Rot180 => (neg(x)?, neg(y)?),
            Symmetry::Rot270 => (y, neg(x)?),
            Symmetry::FlipX => (neg(x)?, y),
            Symmetry::FlipY => (x, neg(y)?),
            Symmetry::Transpose => (y, x),
            Symmetry::AntiTranspose => (neg(y)?, neg(x)?),
        })
    }
}

/// A finite Life pattern at some generation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Pattern {
    cells: Vec<Cell>,
    generation: u64,
}

impl Pattern {
    pub fn new<I, C>(cells: I) -> Self
    where
        I: IntoIterator<Item = C>,
        C: Into<Cell>,
    {
        Self::with_generation(cells, 0)
    }

    pub fn with_generation<I, C>(cells: I, generation: u64) -> Self
    where
        I: IntoIterator<Item = C>,
        C: Into<Cell>,
    {
        let mut cells: Vec<Cell> = cells.into_iter().map(Into::into).collect();
        cells.sort_unstable();
        cells.dedup();
        Pattern { cells, generation }
    }

    pub fn empty() -> Self {
        Pattern::default()
    }

    /// Live cells in row-major order.
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn population(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, cell: Cell) -> bool {
        self.cells.binary_search(&cell).is_ok()
    }

    pub fn bounding_box(&self) -> Result<BoundingBox, EngineError> {
        let first = self.cells.first().ok_or(EngineError::EmptyPattern)?;
        let last = self.cells.last().ok_or(EngineError::EmptyPattern)?;
        let (min_x, max_x) = self.cells.iter().fold((i64::MAX, i64::MIN), |(lo, hi), c| {
            (lo.min(c.x), hi.max(c.x))
        });
        Ok(BoundingBox {
            min_x,
            min_y: first.y,
            max_x,
            max_y: last.y,
        })
    }

    /// Same cells, same generation, shifted by `(dx, dy)`.
    pub fn translate(&self, dx: i64, dy: i64) -> Result<Pattern, EngineError> {
        let mut cells = Vec::with_capacity(self.cells.len());
        for &c in &self.cells {
            let x =
                c.x.checked_add(dx)
                    .ok_or(EngineError::CoordinateOverflow(c))?;
            let y =
                c.y.checked_add(dy)
                    .ok_or(EngineError::CoordinateOverflow(c))?;
            cells.push(Cell { x, y });
        }
        // Translation preserves row-major order.
        Ok(Pattern {
            cells,
            generation: self.generation,
        })
    }

    /// Applies a grid symmetry about the origin.
    pub fn transform(&self, symmetry: Symmetry) -> Result<Pattern, EngineError> {
        let mut cells = Vec::with_capacity(self.cells.len());
        for &c in &self.cells {
            let (x, y) = symmetry
                .apply(c.x, c.y)
                .ok_or(EngineError::CoordinateOverflow(c))?;
            cells.push(Cell { x, y });
        }
        Ok(Pattern::with_generation(cells, self.generation))
    }

    /// Moves the bounding-box corner to the origin and returns the offset
    /// that was removed.
    pub fn canonicalize(&self) -> Result<(Pattern, (i64, i64)), EngineError> {
        let bb = self.bounding_box()?;
        let cells = self
            .cells
            .iter()
            .map(|c| Cell {
                // Both subtractions stay in range: min <= c.
                x: c.x.wrapping_sub(bb.min_x),
                y: c.y.wrapping_sub(bb.min_y),
            })
            .collect();
        Ok((
            Pattern {
                cells,
                generation: self.generation,
            },
            (bb.min_x, bb.min_y),
        ))
    }

    /// Cell-set equality, ignoring the generation counter.
    pub fn same_cells(&self, other: &Pattern) -> bool {
        self.cells == other.cells
    }

    /// One generation of B3/S23.
    pub fn step(&self) -> Result<Pattern, EngineError> {
        // Per-cell tally: bit 0 marks a live cell, bits 1.. count live
        // neighbours.
        let mut tally: FxHashMap<Cell, u8> =
            FxHashMap::with_capacity_and_hasher(self.cells.len() * 4, Default::default());
        for &c in &self.cells {
            if c.x == i64::MIN || c.x == i64::MAX || c.y == i64::MIN || c.y == i64::MAX {
                return Err(EngineError::CoordinateOverflow(c));
            }
            *tally.entry(c).or_insert(0) |= 1;
            for dy in -1..=1 {
                for dx in -1..=1 {
                    if dx == 0 && dy == 0 {
                        continue;
                    }
                    let n = Cell {
                        x: c.x + dx,
                        y: c.y + dy,
                    };
                    *tally.entry(n).or_insert(0) += 2;
                }
            }
        }
        let mut next: Vec<Cell> = tally
            .into_iter()
            // 6, 7: three neighbours; 5: live with two.
            .filter_map(|(c, v)| matches!(v, 5..=7).then_some(c))
            .collect();
        next.sort_unstable();
        Ok(Pattern {
            cells: next,
            generation: self.generation + 1,
        })
    }

    /// `n` successive steps; `step_n(0)` is the identity.
    pub fn step_n(&self, n: u64) -> Result<Pattern, EngineError> {
        let mut p = self.clone();
        for _ in 0..n {
            p = p.step()?;
        }
        Ok(p)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Ok(bb) = self.bounding_box() else {
            return Ok(());
        };
        for y in bb.min_y..=bb.max_y {
            for x in bb.min_x..=bb.max_x {
                let ch = if self.contains(Cell { x, y }) {
                    'O'
                } else {
                    '.'
                };
                write!(f, "{ch}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
