#![allow(dead_code)]

use lifeframe::{Pattern, Rational};
use rand::Rng;

/// Plain B3/S23 on a fixed dense grid with a permanently dead border.
///
/// The grid must be large enough that nothing reaches the border within
/// the generations simulated; `evolve` panics if a cell gets there.
pub struct DenseGrid {
    pub width: usize,
    pub height: usize,
    /// Grid coordinates of world cell (0, 0).
    pub origin: (i64, i64),
    cells: Vec<bool>,
}

impl DenseGrid {
    pub fn new(width: usize, height: usize, origin: (i64, i64)) -> Self {
        DenseGrid {
            width,
            height,
            origin,
            cells: vec![false; width * height],
        }
    }

    pub fn from_pattern(p: &Pattern, width: usize, height: usize, origin: (i64, i64)) -> Self {
        let mut g = Self::new(width, height, origin);
        for c in p.cells() {
            let gx = (c.x + origin.0) as usize;
            let gy = (c.y + origin.1) as usize;
            g.cells[gy * width + gx] = true;
        }
        g
    }

    fn get(&self, x: usize, y: usize) -> bool {
        self.cells[y * self.width + x]
    }

    pub fn step(&self) -> Self {
        let mut next = Self::new(self.width, self.height, self.origin);
        for y in 1..self.height - 1 {
            for x in 1..self.width - 1 {
                let mut n = 0;
                for dy in [-1i64, 0, 1] {
                    for dx in [-1i64, 0, 1] {
                        if (dx, dy) != (0, 0)
                            && self.get((x as i64 + dx) as usize, (y as i64 + dy) as usize)
                        {
                            n += 1;
                        }
                    }
                }
                let alive = self.get(x, y);
                next.cells[y * self.width + x] = n == 3 || (alive && n == 2);
            }
        }
        for x in 0..self.width {
            assert!(
                !next.get(x, 1) && !next.get(x, self.height - 2),
                "grid too small"
            );
        }
        for y in 0..self.height {
            assert!(
                !next.get(1, y) && !next.get(self.width - 2, y),
                "grid too small"
            );
        }
        next
    }

    /// Live cells in world coordinates, row-major.
    pub fn live(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for y in 0..self.height {
            for x in 0..self.width {
                if self.get(x, y) {
                    out.push((x as i64 - self.origin.0, y as i64 - self.origin.1));
                }
            }
        }
        out
    }
}

pub fn live_cells(p: &Pattern) -> Vec<(i64, i64)> {
    p.cells().iter().map(|c| (c.x, c.y)).collect()
}

/// Uniform `n/d` in `[0, 1]` with `d <= max_den`.
pub fn unit_rational<R: Rng>(rng: &mut R, max_den: i128) -> Rational {
    let d = rng.gen_range(1..=max_den);
    let n = rng.gen_range(0..=d);
    Rational::new(n, d)
}

/// Uniform `n/d` in `[-1, 1]` with `d <= max_den`.
pub fn signed_unit_rational<R: Rng>(rng: &mut R, max_den: i128) -> Rational {
    let d = rng.gen_range(1..=max_den);
    let n = rng.gen_range(-d..=d);
    Rational::new(n, d)
}

pub fn random_seed<R: Rng>(rng: &mut R, side: i64, density: f64) -> Pattern {
    let mut cells = Vec::new();
    for y in 0..side {
        for x in 0..side {
            if rng.gen_bool(density) {
                cells.push((x, y));
            }
        }
    }
    Pattern::new(cells)
}
