//! Built-in patterns with their expected kinematics.

use crate::detect::{detect_ship, Kind, ShipReport};
use crate::engine::Pattern;
use crate::pattern_io::{parse_rle, ParseError};

/// Expected measurement for a catalog entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Expected {
    pub kind: Kind,
    pub period: u64,
    pub displacement: (i64, i64),
}

#[derive(Clone, Copy, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub rle: &'static str,
    pub expected: Option<Expected>,
}

impl CatalogEntry {
    pub fn pattern(&self) -> Result<Pattern, ParseError> {
        Ok(parse_rle(self.rle)?.to_pattern())
    }

    /// Period bound large enough to measure this entry.
    pub fn max_period(&self) -> u64 {
        self.expected.map_or(64, |e| e.period.max(1) * 2)
    }

    /// Measured report, `None` when the entry is not periodic.
    pub fn measure(&self) -> Option<ShipReport> {
        let p = self.pattern().ok()?;
        detect_ship(&p, self.max_period()).ok()?.into_report()
    }
}

const fn expect(kind: Kind, period: u64, dx: i64, dy: i64) -> Option<Expected> {
    Some(Expected {
        kind,
        period,
        displacement: (dx, dy),
    })
}

pub const ENTRIES: &[CatalogEntry] = &[
    CatalogEntry {
        name: "block",
        description: "2x2 still life",
        rle: "x = 2, y = 2, rule = B3/S23\n2o$2o!",
        expected: expect(Kind::StillLife, 1, 0, 0),
    },
    CatalogEntry {
        name: "blinker",
        description: "period-2 oscillator",
        rle: "x = 1, y = 3, rule = B3/S23\no$o$o!",
        expected: expect(Kind::Oscillator, 2, 0, 0),
    },
    CatalogEntry {
        name: "toad",
        description: "period-2 oscillator",
        rle: "x = 4, y = 2, rule = B3/S23\nb3o$3ob!",
        expected: expect(Kind::Oscillator, 2, 0, 0),
    },
    CatalogEntry {
        name: "beacon",
        description: "period-2 oscillator",
        rle: "x = 4, y = 4, rule = B3/S23\n2o2b$2o2b$2b2o$2b2o!",
        expected: expect(Kind::Oscillator, 2, 0, 0),
    },
    CatalogEntry {
        name: "eater1",
        description: "fishhook still life that absorbs gliders",
        rle: "x = 4, y = 4, rule = B3/S23\n2o2b$obob$2bob$2b2o!",
        expected: expect(Kind::StillLife, 1, 0, 0),
    },
    CatalogEntry {
        name: "glider",
        description: "diagonal ship, speed 1/4",
        rle: "x = 3, y = 3, rule = B3/S23\nbob$2bo$3o!",
        expected: expect(Kind::Ship, 4, 1, 1),
    },
    CatalogEntry {
        name: "lwss",
        description: "lightweight spaceship, orthogonal, speed 1/2",
        rle: "x = 5, y = 4, rule = B3/S23\nbo2bo$o4b$o3bo$4ob!",
        expected: expect(Kind::Ship, 4, -2, 0),
    },
    CatalogEntry {
        name: "mwss",
        description: "middleweight spaceship, orthogonal, speed 1/2",
        rle: "x = 6, y = 5, rule = B3/S23\n3bo2b$bo3bo$o5b$o4bo$5ob!",
        expected: expect(Kind::Ship, 4, -2, 0),
    },
    CatalogEntry {
        name: "hwss",
        description: "heavyweight spaceship, orthogonal, speed 1/2",
        rle: "x = 7, y = 5, rule = B3/S23\n3b2o2b$bo4bo$o6b$o5bo$6ob!",
        expected: expect(Kind::Ship, 4, -2, 0),
    },
    CatalogEntry {
        name: "gosper-gun",
        description: "Gosper glider gun, one glider every 30 generations",
        rle: "x = 36, y = 9, rule = B3/S23\n24bo11b$22bobo11b$12b2o6b2o12b2o$11bo3bo4b2o12b2o$2o8bo5bo3b2o14b$2o8b\no3bob2o4bobo11b$10bo5bo7bo11b$11bo3bo20b$12b2o22b!",
        expected: None,
    },
    CatalogEntry {
        name: "gosper-gun-eater",
        description: "Gosper gun whose gliders are absorbed by an eater; settled phase",
        rle: "x = 36, y = 20, rule = B3/S23\n24bo11b$22bobo11b$12b2o6b2o12b2o$11bo3bo4b2o12b2o$2o8bo5bo3b2o14b$2o8b\no3bob2o4bobo11b$10bo5bo7bo11b$11bo3bo20b$12b2o22b$23bo12b$24b2o10b$23b\n2o11b5$30b2o4b$30bobo3b$32bo3b$32b2o2b!",
        expected: expect(Kind::Oscillator, 30, 0, 0),
    },
];

/// Units in [`battery`]'s default size, about a thousand live cells.
pub const BATTERY_UNITS: usize = 21;

/// A stationary battery of `units` gun-and-eater pairs on a grid, five per
/// row. Each unit keeps firing and absorbing gliders, so the population
/// stays bounded while the interior keeps changing every generation.
pub fn battery(units: usize) -> Pattern {
    let unit = pattern("gosper-gun-eater");
    let mut cells = Vec::with_capacity(unit.population() * units);
    for i in 0..units as i64 {
        let placed = unit
            .translate((i % 5) * 60, (i / 5) * 40)
            .expect("small offsets");
        cells.extend_from_slice(placed.cells());
    }
    Pattern::new(cells)
}

pub fn entries() -> &'static [CatalogEntry] {
    ENTRIES
}

pub fn find(name: &str) -> Option<&'static CatalogEntry> {
    ENTRIES.iter().find(|e| e.name == name)
}

pub fn pattern(name: &str) -> Pattern {
    find(name)
        .unwrap_or_else(|| panic!("no catalog entry `{name}`"))
        .pattern()
        .expect("catalog RLE parses")
}

/// Measured reports of every moving ship in the catalog, the input
/// [`crate::detect::detect_emissions`] expects.
pub fn ship_reports() -> Vec<ShipReport> {
    ENTRIES
        .iter()
        .filter(|e| e.expected.is_some_and(|x| x.kind == Kind::Ship))
        .filter_map(CatalogEntry::measure)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern_io::emit_rle;

    #[test]
    fn entries_are_canonical_rle() {
        for e in ENTRIES {
            let doc = parse_rle(e.rle).unwrap();
            assert_eq!(emit_rle(&doc), e.rle, "{}", e.name);
        }
    }

    #[test]
    fn expected_summaries_hold() {
        for e in ENTRIES {
            let Some(exp) = e.expected else { continue };
            let rep = e
                .measure()
                .unwrap_or_else(|| panic!("{} not periodic", e.name));
            assert_eq!(
                (rep.kind, rep.period, rep.displacement),
                (exp.kind, exp.period, exp.displacement),
                "{}",
                e.name
            );
        }
    }

    #[test]
    fn names_are_unique() {
        let mut names: Vec<_> = ENTRIES.iter().map(|e| e.name).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), ENTRIES.len());
        assert!(find("glider").is_some());
        assert!(find("nope").is_none());
    }

    #[test]
    fn battery_size() {
        let b = battery(BATTERY_UNITS);
        assert!((900..=1100).contains(&b.population()), "{}", b.population());
    }

    #[test]
    fn ship_reports_cover_the_moving_entries() {
        let ships = ship_reports();
        assert_eq!(ships.len(), 4);
        assert!(ships.iter().all(|s| s.kind == Kind::Ship));
    }
}
