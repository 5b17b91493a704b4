//! Velocity composition in moving reference frames of Conway's Game of Life.
//!
//! The crate has three layers:
//!
//! * a sparse B3/S23 engine ([`engine`]) with RLE and plaintext I/O
//!   ([`pattern_io`]),
//! * measurement of periods, displacements and emitted ships
//!   ([`detect`]),
//! * the composition laws for velocities seen from a moving carrier
//!   ([`kinematics`]), cross-checked by a discrete jump/rest token model
//!   ([`chess`]).
//!
//! Kinematics are generic over [`Scalar`]; the aliases below fix the exact
//! rational instantiation used throughout verification.

pub mod catalog;
pub mod chess;
pub mod cluster;
pub mod detect;
pub mod engine;
pub mod kinematics;
pub mod pattern_io;
pub mod scalar;
pub mod verify;

pub use engine::{BoundingBox, Cell, EngineError, Pattern, Symmetry};
pub use scalar::Scalar;

/// Exact reduced fraction used for every measured or composed velocity.
pub type Rational = num_rational::Ratio<i128>;

/// Exact planar velocity.
pub type Velocity2 = kinematics::Velocity<Rational>;
/// Float planar velocity, for display and exploration.
pub type Velocity2f = kinematics::Velocity<f64>;
pub type CompositionInput2 = kinematics::CompositionInput<Rational>;
pub type CompositionResult2 = kinematics::CompositionResult<Rational>;
pub type DeviationReport2 = kinematics::DeviationReport<Rational>;
