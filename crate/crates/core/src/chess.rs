//! Discrete jump-or-rest token model.
//!
//! A token (pawn, ship, carrier) makes `P` moves; on each move it either
//! jumps one square forward or stays put. A carried token may only jump on
//! moves where its carrier rests, since two tokens never move on the same
//! turn. Counting squares in this model gives the Life composition law
//! without any algebra, so it serves as an independent check of
//! [`crate::kinematics::compose_parallel`].

use std::collections::BTreeSet;

use thiserror::Error;

use crate::kinematics::compose_parallel;
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("a run needs at least one move")]
    NoMoves,
    #[error("{jumps} jumps do not fit in {moves} moves")]
    TooManyJumps { jumps: u64, moves: u64 },
    #[error("move {index} is outside 0..{moves}")]
    MoveOutOfRange { index: u64, moves: u64 },
    #[error("bullet asks for {requested} jumps but the carrier rests only {available} times")]
    Infeasible { requested: u64, available: u64 },
    #[error("move {0} is scheduled for both tokens")]
    Simultaneous(u64),
}

/// One token's schedule and its trajectory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TokenRun {
    pub total_moves: u64,
    pub jump_moves: BTreeSet<u64>,
    /// `trace[t]` is the position after `t` moves; `trace[0] = 0`.
    pub trace: Vec<i64>,
}

impl TokenRun {
    /// Plays the schedule from square 0.
    pub fn play(total_moves: u64, jump_moves: BTreeSet<u64>) -> Result<Self, OracleError> {
        if total_moves == 0 {
            return Err(OracleError::NoMoves);
        }
        if let Some(&index) = jump_moves.iter().find(|&&m| m >= total_moves) {
            return Err(OracleError::MoveOutOfRange {
                index,
                moves: total_moves,
            });
        }
        let mut trace = Vec::with_capacity(total_moves as usize + 1);
        let mut pos = 0i64;
        trace.push(pos);
        for t in 0..total_moves {
            if jump_moves.contains(&t) {
                pos += 1;
            }
            trace.push(pos);
        }
        Ok(TokenRun {
            total_moves,
            jump_moves,
            trace,
        })
    }

    /// Jumps on the first `jumps` moves.
    pub fn earliest(total_moves: u64, jumps: u64) -> Result<Self, OracleError> {
        if jumps > total_moves {
            return Err(OracleError::TooManyJumps {
                jumps,
                moves: total_moves,
            });
        }
        Self::play(total_moves, (0..jumps).collect())
    }

    pub fn displacement(&self) -> i64 {
        *self.trace.last().expect("trace starts at 0")
    }

    /// Moves spent at rest, in order.
    pub fn rest_moves(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.total_moves).filter(|m| !self.jump_moves.contains(m))
    }

    pub fn velocity(&self) -> Rational {
        Rational::new(
            i128::from(self.displacement()),
            i128::from(self.total_moves),
        )
    }
}

/// Ground-frame result of a carrier/bullet run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarrierBulletRun {
    pub carrier: TokenRun,
    /// Bullet position relative to the carrier.
    pub bullet_relative: TokenRun,
    /// Bullet position on the ground after each move.
    pub ground_trace: Vec<i64>,
    pub displacement: i64,
    pub v12: Rational,
}

/// Carrier jumps on `carrier_jumps`; the bullet jumps on `bullet_jumps`,
/// each of which must be a carrier rest move.
pub fn run_carrier_bullet_scheduled(
    total_moves: u64,
    carrier_jumps: BTreeSet<u64>,
    bullet_jumps: BTreeSet<u64>,
) -> Result<CarrierBulletRun, OracleError> {
    if let Some(&m) = bullet_jumps.intersection(&carrier_jumps).next() {
        return Err(OracleError::Simultaneous(m));
    }
    let carrier = TokenRun::play(total_moves, carrier_jumps)?;
    let bullet_relative = TokenRun::play(total_moves, bullet_jumps)?;
    let ground_trace: Vec<i64> = carrier
        .trace
        .iter()
        .zip(&bullet_relative.trace)
        .map(|(c, b)| c + b)
        .collect();
    let displacement = *ground_trace.last().expect("non-empty");
    let v12 = Rational::new(i128::from(displacement), i128::from(total_moves));
    Ok(CarrierBulletRun {
        carrier,
        bullet_relative,
        ground_trace,
        displacement,
        v12,
    })
}

/// Carrier makes `n1` jumps in `P` moves and the bullet `n2` jumps during
/// the carrier's rests, both as early as possible.
pub fn run_carrier_bullet(
    total_moves: u64,
    n1: u64,
    n2: u64,
) -> Result<CarrierBulletRun, OracleError> {
    if n1 > total_moves {
        return Err(OracleError::TooManyJumps {
            jumps: n1,
            moves: total_moves,
        });
    }
    let available = total_moves - n1;
    if n2 > available {
        return Err(OracleError::Infeasible {
            requested: n2,
            available,
        });
    }
    let carrier: BTreeSet<u64> = (0..n1).collect();
    let bullet: BTreeSet<u64> = (n1..n1 + n2).collect();
    run_carrier_bullet_scheduled(total_moves, carrier, bullet)
}

/// Two pawns on one file approaching each other; they alternate, so black
/// may only move when white rests. Returns the closing distance.
pub fn run_pawn_duel(
    total_moves: u64,
    white: &BTreeSet<u64>,
    black: &BTreeSet<u64>,
) -> Result<u64, OracleError> {
    if let Some(&m) = white.intersection(black).next() {
        return Err(OracleError::Simultaneous(m));
    }
    let w = TokenRun::play(total_moves, white.clone())?;
    let b = TokenRun::play(total_moves, black.clone())?;
    Ok((w.displacement() + b.displacement()) as u64)
}

/// A token-model result that disagrees with the formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub total_moves: u64,
    pub n1: u64,
    pub n2: u64,
    pub simulated: Rational,
    pub formula: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ExhaustiveReport {
    pub max_moves: u64,
    /// Every feasible `(P, n1, n2)`.
    pub triples: u64,
    /// Triples with `n1 = P`, where the bullet frame has no rest moves and
    /// `v2` is taken as 0.
    pub degenerate: u64,
    pub counterexamples: Vec<Counterexample>,
}

impl ExhaustiveReport {
    pub fn non_degenerate(&self) -> u64 {
        self.triples - self.degenerate
    }
}

/// Compares the token model with `compose_parallel(n1/P, n2/(P-n1))` for
/// every `P <= max_moves`, `n1 <= P`, `n2 <= P - n1`.
pub fn exhaustive_check(max_moves: u64) -> ExhaustiveReport {
    let mut report = ExhaustiveReport {
        max_moves,
        ..Default::default()
    };
    for p in 1..=max_moves {
        for n1 in 0..=p {
            for n2 in 0..=(p - n1) {
                report.triples += 1;
                let simulated = run_carrier_bullet(p, n1, n2)
                    .expect("enumeration stays feasible")
                    .v12;
                let v1 = Rational::new(i128::from(n1), i128::from(p));
                let v2 = if n1 == p {
                    report.degenerate += 1;
                    Rational::from_integer(0)
                } else {
                    Rational::new(i128::from(n2), i128::from(p - n1))
                };
                let formula = compose_parallel(v1, v2).expect("velocities in [0,1]");
                if simulated != formula {
                    report.counterexamples.push(Counterexample {
                        total_moves: p,
                        n1,
                        n2,
                        simulated,
                        formula,
                    });
                }
            }
        }
    }
    report
}
