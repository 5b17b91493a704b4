//! Kinematic measurements on evolving patterns.
//!
//! [`detect_ship`] finds the minimal period `P` after which a pattern recurs
//! up to translation, and reports the displacement `(dx, dy)` accumulated
//! over that period together with the exact velocity `(dx/P, dy/P)`.
//!
//! [`detect_emissions`] watches a pattern evolve and reports every catalog
//! ship that detaches from it and flies away, with the velocity measured
//! from two sightings one period apart.

use std::collections::VecDeque;
use std::fmt;

use rustc_hash::{FxHashMap, FxHashSet};
use thiserror::Error;

use crate::cluster::{clusters, Cluster};
use crate::engine::{BoundingBox, Cell, EngineError, Pattern, Symmetry};
use crate::kinematics::Velocity;
use crate::{Rational, Velocity2};

/// Cells closer than this (Chebyshev) belong to the same body.
pub const SEPARATION_RADIUS: i64 = 2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DetectError {
    #[error("pattern is empty")]
    EmptyPattern,
    #[error("max_period must be at least 1")]
    ZeroPeriod,
    #[error("horizon {horizon} is shorter than the shortest catalog period {period}")]
    HorizonTooShort { horizon: u64, period: u64 },
    #[error("catalog has no moving ships")]
    EmptyCatalog,
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Growth limits beyond which a pattern is treated as non-periodic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExplosionBound {
    /// Population may not exceed this multiple of the initial population.
    pub population_factor: u64,
    /// Bounding-box width and height may not exceed this.
    pub max_side: u64,
}

impl Default for ExplosionBound {
    fn default() -> Self {
        ExplosionBound {
            population_factor: 10,
            max_side: 10_000,
        }
    }
}

impl ExplosionBound {
    /// `Some(reason)` when `p` has outgrown a pattern of `initial` cells.
    pub fn exceeded(&self, initial: usize, p: &Pattern) -> Option<String> {
        let limit = (initial as u64).saturating_mul(self.population_factor);
        if p.population() as u64 > limit {
            return Some(format!(
                "population {} exceeds {}x initial {}",
                p.population(),
                self.population_factor,
                initial
            ));
        }
        let bb = p.bounding_box().ok()?;
        if bb.width() > self.max_side || bb.height() > self.max_side {
            return Some(format!(
                "bounding box {}x{} exceeds side {}",
                bb.width(),
                bb.height(),
                self.max_side
            ));
        }
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    StillLife,
    Oscillator,
    Ship,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::StillLife => "still-life",
            Kind::Oscillator => "oscillator",
            Kind::Ship => "ship",
        })
    }
}

/// Measured kinematics of a periodic pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShipReport {
    pub period: u64,
    pub displacement: (i64, i64),
    pub velocity: Velocity2,
    /// Chebyshev speed `max(|dx|, |dy|) / P`.
    pub speed: Rational,
    /// Canonical (origin-anchored) cell sets of the `P` phases, starting
    /// from the measured pattern.
    pub phases: Vec<Pattern>,
    /// Bounding-box corner of each phase relative to phase 0.
    pub phase_offsets: Vec<(i64, i64)>,
    pub kind: Kind,
}

impl ShipReport {
    /// One-line summary, e.g. `ship P=4 d=(1,1) v=(1/4,1/4) speed=1/4`.
    pub fn summary(&self) -> String {
        match self.kind {
            Kind::StillLife => "still-life P=1".to_string(),
            Kind::Oscillator => format!("oscillator P={}", self.period),
            Kind::Ship => format!(
                "ship P={} d=({},{}) v={} speed={}",
                self.period, self.displacement.0, self.displacement.1, self.velocity, self.speed
            ),
        }
    }
}

/// Outcome of [`detect_ship`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Detection {
    Periodic(ShipReport),
    /// No recurrence within `max_period`.
    NotPeriodic,
    /// Growth limit hit before `max_period`.
    NotPeriodicWithGrowth {
        generation: u64,
        reason: String,
    },
}

impl Detection {
    pub fn report(&self) -> Option<&ShipReport> {
        match self {
            Detection::Periodic(r) => Some(r),
            _ => None,
        }
    }

    pub fn into_report(self) -> Option<ShipReport> {
        match self {
            Detection::Periodic(r) => Some(r),
            _ => None,
        }
    }
}

/// Smallest `t` in `1..=max_period` after which `p` recurs up to
/// translation, with the default explosion bound.
pub fn detect_ship(p: &Pattern, max_period: u64) -> Result<Detection, DetectError> {
    detect_ship_bounded(p, max_period, ExplosionBound::default())
}

pub fn detect_ship_bounded(
    p: &Pattern,
    max_period: u64,
    bound: ExplosionBound,
) -> Result<Detection, DetectError> {
    if p.is_empty() {
        return Err(DetectError::EmptyPattern);
    }
    if max_period == 0 {
        return Err(DetectError::ZeroPeriod);
    }
    let (start, origin) = p.canonicalize()?;
    let mut phases = vec![start.clone()];
    let mut phase_offsets = vec![(0, 0)];
    let mut current = p.clone();
    for t in 1..=max_period {
        current = current.step()?;
        if current.is_empty() {
            return Ok(Detection::NotPeriodic);
        }
        if let Some(reason) = bound.exceeded(p.population(), &current) {
            return Ok(Detection::NotPeriodicWithGrowth {
                generation: p.generation() + t,
                reason,
            });
        }
        let (canon, offset) = current.canonicalize()?;
        let rel = (offset.0 - origin.0, offset.1 - origin.1);
        if canon.same_cells(&start) {
            return Ok(Detection::Periodic(build_report(
                t,
                rel,
                phases,
                phase_offsets,
            )));
        }
        phases.push(canon);
        phase_offsets.push(rel);
    }
    Ok(Detection::NotPeriodic)
}

fn build_report(
    period: u64,
    displacement: (i64, i64),
    phases: Vec<Pattern>,
    phase_offsets: Vec<(i64, i64)>,
) -> ShipReport {
    let p = i128::from(period);
    let (dx, dy) = (i128::from(displacement.0), i128::from(displacement.1));
    let velocity = Velocity::new(Rational::new(dx, p), Rational::new(dy, p));
    let speed = Rational::new(dx.abs().max(dy.abs()), p);
    let kind = if displacement != (0, 0) {
        Kind::Ship
    } else if period == 1 {
        Kind::StillLife
    } else {
        Kind::Oscillator
    };
    let phases = phases
        .into_iter()
        .map(|ph| Pattern::new(ph.cells().iter().copied()))
        .collect();
    ShipReport {
        period,
        displacement,
        velocity,
        speed,
        phases,
        phase_offsets,
        kind,
    }
}

/// A ship that left its parent pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmissionEvent {
    /// Generation of the first sighting as a detached catalog ship.
    pub birth_generation: u64,
    /// Generation at which the second sighting confirmed it.
    pub confirmed_generation: u64,
    /// Index into the catalog passed to [`detect_emissions`].
    pub ship: usize,
    /// Orientation relative to the catalog phases.
    pub orientation: Symmetry,
    /// Measured from the two sightings.
    pub ground_velocity: Velocity2,
    /// Bounding-box corner at the first sighting.
    pub first_sighting: Cell,
}

struct OrientedShip {
    ship: usize,
    orientation: Symmetry,
    period: u64,
    displacement: (i64, i64),
    phase_offsets: Vec<(i64, i64)>,
}

/// Catalog phases in every orientation, indexed by canonical cell set.
struct EmissionCatalog {
    ships: Vec<OrientedShip>,
    by_shape: FxHashMap<Vec<Cell>, Vec<(usize, usize)>>,
    min_period: u64,
}

/// Phase shapes plus displacement; orientations sharing one are the same ship.
type OrientationKey = (Vec<Vec<Cell>>, (i64, i64));

impl EmissionCatalog {
    fn build(catalog: &[ShipReport]) -> Result<Self, DetectError> {
        let mut ships = Vec::new();
        let mut by_shape: FxHashMap<Vec<Cell>, Vec<(usize, usize)>> = FxHashMap::default();
        let mut seen: FxHashSet<OrientationKey> = FxHashSet::default();
        for (idx, report) in catalog.iter().enumerate() {
            if report.kind != Kind::Ship {
                continue;
            }
            for sym in Symmetry::ALL {
                let seed = report.phases[0].transform(sym)?;
                let Some(oriented) =
                    detect_ship_bounded(&seed, report.period, ExplosionBound::default())?
                        .into_report()
                else {
                    continue;
                };
                // Two orientations with the same phase shapes and the same
                // displacement describe identical motion.
                let mut shapes: Vec<Vec<Cell>> =
                    oriented.phases.iter().map(|p| p.cells().to_vec()).collect();
                shapes.sort();
                if !seen.insert((shapes, oriented.displacement)) {
                    continue;
                }
                let id = ships.len();
                for (k, phase) in oriented.phases.iter().enumerate() {
                    by_shape
                        .entry(phase.cells().to_vec())
                        .or_default()
                        .push((id, k));
                }
                ships.push(OrientedShip {
                    ship: idx,
                    orientation: sym,
                    period: oriented.period,
                    displacement: oriented.displacement,
                    phase_offsets: oriented.phase_offsets,
                });
            }
        }
        let min_period = ships
            .iter()
            .map(|s| s.period)
            .min()
            .ok_or(DetectError::EmptyCatalog)?;
        Ok(EmissionCatalog {
            ships,
            by_shape,
            min_period,
        })
    }
}

/// Identifies one physical ship: its orientation and the phase-0 position
/// extrapolated back to generation `phase` in `0..P`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct WorldLine {
    ship: usize,
    phase: u64,
    anchor: (i64, i64),
}

#[derive(Clone, Copy, Debug)]
struct Sighting {
    generation: u64,
    position: (i64, i64),
    /// Gap to the main body; `None` when there is no main body.
    gap: Option<u64>,
}

struct Track {
    first: Sighting,
    recent: VecDeque<Sighting>,
}

fn further(later: Option<u64>, earlier: Option<u64>) -> bool {
    match (later, earlier) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(a), Some(b)) => a > b,
    }
}

/// Runs `p` for `horizon` generations and reports every catalog ship that
/// detaches from the rest of the pattern and moves away from it.
///
/// A detached cluster matching a catalog phase is a sighting. A ship is
/// confirmed when the same world line is sighted again exactly one period
/// later and its gap to the main body's bounding box has grown. The main
/// body is everything that is not a catalog ship.
pub fn detect_emissions(
    p: &Pattern,
    horizon: u64,
    catalog: &[ShipReport],
) -> Result<Vec<EmissionEvent>, DetectError> {
    let cat = EmissionCatalog::build(catalog)?;
    if horizon < cat.min_period {
        return Err(DetectError::HorizonTooShort {
            horizon,
            period: cat.min_period,
        });
    }

    let mut tracks: FxHashMap<WorldLine, Track> = FxHashMap::default();
    let mut confirmed: FxHashSet<WorldLine> = FxHashSet::default();
    let mut events = Vec::new();
    let mut current = p.clone();
    let start = p.generation();

    for t in 0..=horizon {
        if t > 0 {
            current = current.step()?;
        }
        let g = start + t;
        let parts = clusters(&current, SEPARATION_RADIUS);
        let mut matches: Vec<(&Cluster, &[(usize, usize)])> = Vec::new();
        let mut body: Option<BoundingBox> = None;
        for c in &parts {
            let min_x = c.bbox.min_x;
            let min_y = c.bbox.min_y;
            let shape: Vec<Cell> = c
                .cells
                .iter()
                .map(|cell| Cell::new(cell.x - min_x, cell.y - min_y))
                .collect();
            match cat.by_shape.get(&shape) {
                Some(hyps) => matches.push((c, hyps.as_slice())),
                None => body = Some(body.map_or(c.bbox, |b| b.union(&c.bbox))),
            }
        }

        for (c, hyps) in matches {
            let position = (c.bbox.min_x, c.bbox.min_y);
            let gap = body.map(|b| b.gap(&c.bbox));
            let sighting = Sighting {
                generation: g,
                position,
                gap,
            };
            for &(id, k) in hyps {
                let ship = &cat.ships[id];
                let Some(line) = world_line(id, ship, k, g, position) else {
                    continue;
                };
                if confirmed.contains(&line) {
                    continue;
                }
                let track = tracks.entry(line).or_insert_with(|| Track {
                    first: sighting,
                    recent: VecDeque::new(),
                });
                let earlier = track
                    .recent
                    .iter()
                    .find(|s| s.generation + ship.period == g)
                    .copied();
                if let Some(prev) = earlier {
                    if further(gap, prev.gap) {
                        let period = i128::from(ship.period);
                        let dx = i128::from(position.0 - prev.position.0);
                        let dy = i128::from(position.1 - prev.position.1);
                        events.push(EmissionEvent {
                            birth_generation: track.first.generation,
                            confirmed_generation: g,
                            ship: ship.ship,
                            orientation: ship.orientation,
                            ground_velocity: Velocity::new(
                                Rational::new(dx, period),
                                Rational::new(dy, period),
                            ),
                            first_sighting: Cell::new(
                                track.first.position.0,
                                track.first.position.1,
                            ),
                        });
                        confirmed.insert(line);
                        tracks.remove(&line);
                        continue;
                    }
                }
                track.recent.push_back(sighting);
                while track
                    .recent
                    .front()
                    .is_some_and(|s| s.generation + ship.period < g)
                {
                    track.recent.pop_front();
                }
            }
        }
        // Hypotheses not sighted for a full period cannot be confirmed.
        tracks.retain(|line, track| {
            let period = cat.ships[line.ship].period;
            track
                .recent
                .back()
                .is_some_and(|s| s.generation + period >= g)
        });
    }
    Ok(events)
}

fn world_line(
    id: usize,
    ship: &OrientedShip,
    phase: usize,
    generation: u64,
    position: (i64, i64),
) -> Option<WorldLine> {
    let (ox, oy) = ship.phase_offsets[phase];
    let period = i128::from(ship.period);
    let g0 = i128::from(generation) - phase as i128;
    let q = g0.div_euclid(period);
    let r = g0.rem_euclid(period);
    let ax = i128::from(position.0) - i128::from(ox) - q * i128::from(ship.displacement.0);
    let ay = i128::from(position.1) - i128::from(oy) - q * i128::from(ship.displacement.1);
    Some(WorldLine {
        ship: id,
        phase: u64::try_from(r).ok()?,
        anchor: (i64::try_from(ax).ok()?, i64::try_from(ay).ok()?),
    })
}
