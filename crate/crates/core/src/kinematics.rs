//! Velocity composition between moving frames on the Life board.
//!
//! Velocities are measured in cells per generation, so the speed of light is
//! `1` and speeds use the Chebyshev norm `max(|vx|, |vy|)`. A carrier moving
//! along `+x` at `v1` spends a fraction `1 - v1` of its moves at rest, and
//! only those moves are available to whatever it carries. That gives
//!
//! ```text
//! parallel:  v12  = v1 + v2 - v1 v2 = 1 - (1 - v1)(1 - v2)
//! oblique:   v12x = v1 + (1 - v1) v2x
//!            v12y = (1 - v1) v2y
//! ```
//!
//! Galilean and Lorentz composition are provided for comparison. All
//! functions are generic over [`Scalar`]; instantiate with
//! [`crate::Rational`] for exact results.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KinematicsError {
    #[error("{name} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: String,
        lo: &'static str,
        hi: &'static str,
    },
    #[error("velocity {0} exceeds the speed of light")]
    Superluminal(String),
    #[error("zero velocity has no direction")]
    NoDirection,
    #[error("carrier moving at light speed has no rest moves; its frame is degenerate")]
    DegenerateFrame,
    #[error("components are irrational for this angle; supply (v2x, v2y) directly")]
    Irrational,
    #[error("1 + v1*v2 vanishes")]
    Singular,
    #[error("scan step {0} does not divide 1")]
    BadStep(String),
}

/// Composition law tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Law {
    Life,
    Galilean,
    Lorentz,
}

impl Law {
    pub const ALL: [Law; 3] = [Law::Life, Law::Galilean, Law::Lorentz];

    pub fn name(self) -> &'static str {
        match self {
            Law::Life => "life",
            Law::Galilean => "galilean",
            Law::Lorentz => "lorentz",
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Law {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "life" => Ok(Law::Life),
            "galilean" => Ok(Law::Galilean),
            "lorentz" => Ok(Law::Lorentz),
            other => Err(format!("unknown law `{other}`")),
        }
    }
}

/// A planar velocity in cells per generation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Velocity<S> {
    pub vx: S,
    pub vy: S,
}

impl<S: Scalar> Velocity<S> {
    pub fn new(vx: S, vy: S) -> Self {
        Velocity { vx, vy }
    }

    pub fn zero() -> Self {
        Velocity::new(S::zero(), S::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.vx.is_zero() && self.vy.is_zero()
    }

    /// `max(|vx|, |vy|)`: diagonal and orthogonal unit steps cost the same.
    pub fn chebyshev_speed(&self) -> S {
        S::max_of(self.vx.abs(), self.vy.abs())
    }

    /// Rejects velocities faster than light.
    pub fn checked(self) -> Result<Self, KinematicsError> {
        if self.chebyshev_speed() > S::one() {
            Err(KinematicsError::Superluminal(self.to_string()))
        } else {
            Ok(self)
        }
    }
}

impl<S: fmt::Display> fmt::Display for Velocity<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.vx, self.vy)
    }
}

/// Free function form of [`Velocity::chebyshev_speed`].
pub fn chebyshev_speed<S: Scalar>(v: &Velocity<S>) -> S {
    v.chebyshev_speed()
}

/// Slope of a direction: `dy/dx`, or vertical when `dx = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Tangent<S> {
    Slope(S),
    Vertical,
}

impl<S: fmt::Display> fmt::Display for Tangent<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tangent::Slope(s) => write!(f, "{s}"),
            Tangent::Vertical => f.write_str("vertical"),
        }
    }
}

/// Carrier moving along `+x` at `v1`, bullet velocity in the carrier's
/// frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionInput<S> {
    pub v1: S,
    pub bullet: Velocity<S>,
}

impl<S: Scalar> CompositionInput<S> {
    /// Checks `0 <= v1 < 1` and that the bullet is not superluminal.
    pub fn new(v1: S, bullet: Velocity<S>) -> Result<Self, KinematicsError> {
        if v1 < S::zero() || v1 >= S::one() {
            return Err(KinematicsError::OutOfRange {
                name: "v1",
                value: v1.to_string(),
                lo: "0",
                hi: "1)",
            });
        }
        let bullet = bullet.checked()?;
        Ok(CompositionInput { v1, bullet })
    }
}

/// Ground-frame velocity of the bullet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionResult<S> {
    pub v12: Velocity<S>,
    pub law: Law,
    /// `None` when `v12` is zero.
    pub tan_chi: Option<Tangent<S>>,
}

impl<S: Scalar> CompositionResult<S> {
    fn from_velocity(v12: Velocity<S>, law: Law) -> Self {
        let tan_chi = direction_of(&v12).ok();
        CompositionResult { v12, law, tan_chi }
    }

    /// Display-only direction in degrees, `atan2(vy, vx)`.
    pub fn degrees(&self) -> Option<f64> {
        if self.v12.is_zero() {
            return None;
        }
        Some(
            self.v12
                .vy
                .to_f64_lossy()
                .atan2(self.v12.vx.to_f64_lossy())
                .to_degrees(),
        )
    }
}

fn check_unit<S: Scalar>(name: &'static str, v: &S) -> Result<(), KinematicsError> {
    if *v < S::zero() || *v > S::one() {
        Err(KinematicsError::OutOfRange {
            name,
            value: v.to_string(),
            lo: "0",
            hi: "1]",
        })
    } else {
        Ok(())
    }
}

/// Life composition of collinear velocities: `v1 + v2 - v1*v2`.
pub fn compose_parallel<S: Scalar>(v1: S, v2: S) -> Result<S, KinematicsError> {
    check_unit("v1", &v1)?;
    check_unit("v2", &v2)?;
    Ok(v1.clone() + v2.clone() - v1 * v2)
}

/// Life composition for a bullet fired at any angle from a carrier moving
/// along `+x`.
pub fn compose_oblique<S: Scalar>(input: &CompositionInput<S>) -> CompositionResult<S> {
    let rest = S::one() - input.v1.clone();
    let vx = input.v1.clone() + rest.clone() * input.bullet.vx.clone();
    let vy = rest * input.bullet.vy.clone();
    CompositionResult::from_velocity(Velocity::new(vx, vy), Law::Life)
}

/// Composition under the chosen law. The Lorentz transverse component
/// carries `sqrt(1 - v1^2)` and fails with [`KinematicsError::Irrational`]
/// when that root is not representable in `S`.
pub fn compose_with<S: Scalar>(
    law: Law,
    input: &CompositionInput<S>,
) -> Result<CompositionResult<S>, KinematicsError> {
    let CompositionInput { v1, bullet } = input;
    match law {
        Law::Life => Ok(compose_oblique(input)),
        Law::Galilean => Ok(CompositionResult::from_velocity(
            Velocity::new(v1.clone() + bullet.vx.clone(), bullet.vy.clone()),
            Law::Galilean,
        )),
        Law::Lorentz => {
            let denom = S::one() + v1.clone() * bullet.vx.clone();
            if denom.is_zero() {
                return Err(KinematicsError::Singular);
            }
            let vx = (v1.clone() + bullet.vx.clone()) / denom.clone();
            let vy = if bullet.vy.is_zero() {
                S::zero()
            } else {
                let gamma_inv = (S::one() - v1.clone() * v1.clone())
                    .exact_sqrt()
                    .ok_or(KinematicsError::Irrational)?;
                bullet.vy.clone() * gamma_inv / denom
            };
            Ok(CompositionResult::from_velocity(
                Velocity::new(vx, vy),
                Law::Lorentz,
            ))
        }
    }
}

fn direction_of<S: Scalar>(v: &Velocity<S>) -> Result<Tangent<S>, KinematicsError> {
    if v.vx.is_zero() {
        if v.vy.is_zero() {
            Err(KinematicsError::NoDirection)
        } else {
            Ok(Tangent::Vertical)
        }
    } else {
        Ok(Tangent::Slope(v.vy.clone() / v.vx.clone()))
    }
}

/// `tan chi = v12y / v12x` of a composed velocity.
pub fn direction_tangent<S: Scalar>(
    result: &CompositionResult<S>,
) -> Result<Tangent<S>, KinematicsError> {
    direction_of(&result.v12)
}

/// `(v2 cos psi, v2 sin psi)` for `psi` in `[-90°, 90°]` given by its
/// tangent. Succeeds only when both components are representable, which for
/// rationals means `1 + tan^2` is a perfect square (a Pythagorean angle) or
/// the angle is axial.
pub fn polar_components<S: Scalar>(
    v2: S,
    tan_psi: &Tangent<S>,
) -> Result<Velocity<S>, KinematicsError> {
    check_unit("v2", &v2)?;
    match tan_psi {
        Tangent::Vertical => Ok(Velocity::new(S::zero(), v2)),
        Tangent::Slope(t) => {
            let secant = (S::one() + t.clone() * t.clone())
                .exact_sqrt()
                .ok_or(KinematicsError::Irrational)?;
            let cos = S::one() / secant;
            let sin = t.clone() * cos.clone();
            Ok(Velocity::new(v2.clone() * cos, v2 * sin))
        }
    }
}

/// Plain sum, `v1 + v2`. Unbounded: this is the baseline that breaks the
/// light-speed limit.
pub fn galilean<S: Scalar>(v1: S, v2: S) -> S {
    v1 + v2
}

/// Relativistic addition, `(v1 + v2) / (1 + v1 v2)`.
pub fn lorentz<S: Scalar>(v1: S, v2: S) -> Result<S, KinematicsError> {
    let denom = S::one() + v1.clone() * v2.clone();
    if denom.is_zero() {
        return Err(KinematicsError::Singular);
    }
    Ok((v1 + v2) / denom)
}

/// Gap between the Lorentz and Life parallel laws.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeviationReport<S> {
    pub v1: S,
    pub v2: S,
    pub delta: S,
}

/// `v1 v2 (1 - v1 - v2 + v1 v2) / (1 + v1 v2)`, which equals
/// `lorentz(v1, v2) - compose_parallel(v1, v2)`.
pub fn deviation<S: Scalar>(v1: S, v2: S) -> Result<DeviationReport<S>, KinematicsError> {
    check_unit("v1", &v1)?;
    check_unit("v2", &v2)?;
    let p = v1.clone() * v2.clone();
    let delta = p.clone() * (S::one() - v1.clone() - v2.clone() + p.clone()) / (S::one() + p);
    Ok(DeviationReport { v1, v2, delta })
}

/// Largest deviation over the grid `{0, step, ..., 1}^2`.
///
/// Ties resolve to the smallest `v1`, then the smallest `v2`. Rows are
/// scanned in parallel.
pub fn max_deviation_scan<S>(step: S) -> Result<DeviationReport<S>, KinematicsError>
where
    S: Scalar + Send + Sync,
{
    let bad = || KinematicsError::BadStep(step.to_string());
    if step <= S::zero() || step > S::one() {
        return Err(bad());
    }
    // Number of intervals; step must divide 1 exactly.
    let mut n: u64 = 0;
    let mut acc = S::zero();
    while acc < S::one() {
        acc = acc + step.clone();
        n += 1;
    }
    if acc != S::one() {
        return Err(bad());
    }
    let mut axis: Vec<S> = Vec::with_capacity(n as usize + 1);
    axis.push(S::zero());
    for i in 0..n as usize {
        let next = axis[i].clone() + step.clone();
        axis.push(next);
    }
    let better = |a: &DeviationReport<S>, b: &DeviationReport<S>| {
        b.delta > a.delta
            || (b.delta == a.delta && (b.v1.clone(), b.v2.clone()) < (a.v1.clone(), a.v2.clone()))
    };
    let best = axis
        .par_iter()
        .map(|v1| {
            let mut best: Option<DeviationReport<S>> = None;
            for v2 in &axis {
                let d = deviation(v1.clone(), v2.clone()).expect("grid inside the unit square");
                if best.as_ref().is_none_or(|b| better(b, &d)) {
                    best = Some(d);
                }
            }
            best.expect("non-empty axis")
        })
        .reduce_with(|a, b| if better(&a, &b) { b } else { a })
        .expect("non-empty axis");
    Ok(best)
}

/// Recovers the bullet's velocity in the carrier frame from its ground
/// velocity: the embryo seen from inside the carrier.
pub fn invert_oblique<S: Scalar>(v1: S, v12: &Velocity<S>) -> Result<Velocity<S>, KinematicsError> {
    if v1 == S::one() {
        return Err(KinematicsError::DegenerateFrame);
    }
    if v1 < S::zero() || v1 > S::one() {
        return Err(KinematicsError::OutOfRange {
            name: "v1",
            value: v1.to_string(),
            lo: "0",
            hi: "1)",
        });
    }
    let rest = S::one() - v1.clone();
    Ok(Velocity::new(
        (v12.vx.clone() - v1) / rest.clone(),
        v12.vy.clone() / rest,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    fn v(x: Rational, y: Rational) -> Velocity<Rational> {
        Velocity::new(x, y)
    }

    #[test]
    fn parallel_worked_numbers() {
        assert_eq!(compose_parallel(r(1, 2), r(1, 2)).unwrap(), r(3, 4));
        assert_eq!(compose_parallel(r(2, 5), r(1, 2)).unwrap(), r(7, 10));
        assert_eq!(compose_parallel(r(3, 7), r(0, 1)).unwrap(), r(3, 7));
        assert_eq!(compose_parallel(r(3, 7), r(1, 1)).unwrap(), r(1, 1));
    }

    #[test]
    fn parallel_rejects_out_of_range() {
        assert!(matches!(
            compose_parallel(r(3, 2), r(0, 1)),
            Err(KinematicsError::OutOfRange { name: "v1", .. })
        ));
        assert!(matches!(
            compose_parallel(r(0, 1), r(-1, 2)),
            Err(KinematicsError::OutOfRange { name: "v2", .. })
        ));
    }

    #[test]
    fn comparison_laws() {
        assert_eq!(galilean(r(2, 5), r(1, 2)), r(9, 10));
        assert_eq!(galilean(r(1, 2), r(3, 4)), r(5, 4));
        assert_eq!(galilean(r(1, 3), r(0, 1)), r(1, 3));
        assert_eq!(lorentz(r(2, 5), r(1, 2)).unwrap(), r(3, 4));
        assert_eq!(lorentz(r(1, 3), r(0, 1)).unwrap(), r(1, 3));
        assert_eq!(lorentz(r(1, 1), r(1, 1)).unwrap(), r(1, 1));
        assert_eq!(lorentz(r(1, 1), r(-1, 1)), Err(KinematicsError::Singular));
    }

    #[test]
    fn oblique_sample() {
        let input = CompositionInput::new(r(1, 4), v(r(0, 1), r(1, 3))).unwrap();
        let res = compose_oblique(&input);
        assert_eq!(res.v12, v(r(1, 4), r(1, 4)));
        assert_eq!(res.law, Law::Life);
        assert_eq!(res.tan_chi, Some(Tangent::Slope(r(1, 1))));
        assert!((res.degrees().unwrap() - 45.0).abs() < 1e-12);
    }

    #[test]
    fn oblique_identity_and_reduction() {
        let b = v(r(-2, 7), r(3, 5));
        let res = compose_oblique(&CompositionInput::new(r(0, 1), b.clone()).unwrap());
        assert_eq!(res.v12, b);
        let res = compose_oblique(&CompositionInput::new(r(2, 5), v(r(1, 2), r(0, 1))).unwrap());
        assert_eq!(res.v12, v(r(7, 10), r(0, 1)));
    }

    #[test]
    fn composition_input_checks() {
        assert!(CompositionInput::new(r(1, 1), Velocity::zero()).is_err());
        assert!(CompositionInput::new(r(-1, 4), Velocity::zero()).is_err());
        assert!(matches!(
            CompositionInput::new(r(0, 1), v(r(0, 1), r(5, 4))),
            Err(KinematicsError::Superluminal(_))
        ));
    }

    #[test]
    fn other_laws_oblique() {
        let input = CompositionInput::new(r(2, 5), v(r(1, 2), r(0, 1))).unwrap();
        assert_eq!(
            compose_with(Law::Galilean, &input).unwrap().v12,
            v(r(9, 10), r(0, 1))
        );
        assert_eq!(
            compose_with(Law::Lorentz, &input).unwrap().v12,
            v(r(3, 4), r(0, 1))
        );
        // sqrt(1 - 9/25) = 4/5
        let input = CompositionInput::new(r(3, 5), v(r(0, 1), r(1, 2))).unwrap();
        assert_eq!(
            compose_with(Law::Lorentz, &input).unwrap().v12,
            v(r(3, 5), r(2, 5))
        );
        let input = CompositionInput::new(r(1, 2), v(r(0, 1), r(1, 2))).unwrap();
        assert_eq!(
            compose_with(Law::Lorentz, &input),
            Err(KinematicsError::Irrational)
        );
        let f = CompositionInput::new(0.5f64, Velocity::new(0.0, 0.5)).unwrap();
        let vy = compose_with(Law::Lorentz, &f).unwrap().v12.vy;
        assert!((vy - 0.5 * 0.75f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn tangents() {
        let res = |x, y| CompositionResult::from_velocity(v(x, y), Law::Life);
        assert_eq!(
            direction_tangent(&res(r(1, 4), r(1, 4))).unwrap(),
            Tangent::Slope(r(1, 1))
        );
        assert_eq!(
            direction_tangent(&res(r(0, 1), r(1, 3))).unwrap(),
            Tangent::Vertical
        );
        assert_eq!(
            direction_tangent(&res(r(1, 2), r(0, 1))).unwrap(),
            Tangent::Slope(r(0, 1))
        );
        assert_eq!(
            direction_tangent(&res(r(0, 1), r(0, 1))),
            Err(KinematicsError::NoDirection)
        );
        assert_eq!(res(r(0, 1), r(0, 1)).tan_chi, None);
    }

    #[test]
    fn polar() {
        assert_eq!(
            polar_components(r(1, 3), &Tangent::Vertical).unwrap(),
            v(r(0, 1), r(1, 3))
        );
        assert_eq!(
            polar_components(r(1, 2), &Tangent::Slope(r(0, 1))).unwrap(),
            v(r(1, 2), r(0, 1))
        );
        assert_eq!(
            polar_components(r(5, 12), &Tangent::Slope(r(3, 4))).unwrap(),
            v(r(1, 3), r(1, 4))
        );
        assert_eq!(
            polar_components(r(1, 2), &Tangent::Slope(r(1, 1))),
            Err(KinematicsError::Irrational)
        );
        let f = polar_components(0.5f64, &Tangent::Slope(1.0)).unwrap();
        assert!((f.vx - 0.5 / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn deviation_values() {
        assert_eq!(deviation(r(2, 5), r(1, 2)).unwrap().delta, r(1, 20));
        assert_eq!(deviation(r(0, 1), r(5, 9)).unwrap().delta, r(0, 1));
        assert_eq!(deviation(r(1, 2), r(1, 2)).unwrap().delta, r(1, 20));
        assert!(deviation(r(2, 1), r(1, 2)).is_err());
    }

    #[test]
    fn scans() {
        let d = max_deviation_scan(r(1, 2)).unwrap();
        assert_eq!((d.v1, d.v2, d.delta), (r(1, 2), r(1, 2), r(1, 20)));
        let d = max_deviation_scan(r(1, 1)).unwrap();
        assert_eq!(d.delta, r(0, 1));
        assert_eq!((d.v1, d.v2), (r(0, 1), r(0, 1)));
        assert!(max_deviation_scan(r(2, 5)).is_err());
        assert!(max_deviation_scan(r(0, 1)).is_err());
        assert!(max_deviation_scan(r(3, 2)).is_err());
    }

    #[test]
    fn inverse() {
        let b = invert_oblique(r(1, 4), &v(r(1, 4), r(1, 4))).unwrap();
        assert_eq!(b, v(r(0, 1), r(1, 3)));
        let b = invert_oblique(r(1, 2), &v(r(1, 4), r(1, 4))).unwrap();
        assert_eq!(b, v(r(-1, 2), r(1, 2)));
        let back = compose_oblique(&CompositionInput::new(r(1, 2), b).unwrap());
        assert_eq!(back.v12, v(r(1, 4), r(1, 4)));
        assert_eq!(
            invert_oblique(r(1, 1), &Velocity::zero()),
            Err(KinematicsError::DegenerateFrame)
        );
        let same = v(r(-1, 4), r(1, 4));
        assert_eq!(invert_oblique(r(0, 1), &same).unwrap(), same);
    }

    #[test]
    fn chebyshev() {
        assert_eq!(chebyshev_speed(&v(r(1, 4), r(1, 4))), r(1, 4));
        assert_eq!(chebyshev_speed(&Velocity::<Rational>::zero()), r(0, 1));
        assert_eq!(chebyshev_speed(&v(r(1, 2), r(-1, 4))), r(1, 2));
    }

    #[test]
    fn float_instantiation_agrees() {
        assert!((compose_parallel(0.4f64, 0.5).unwrap() - 0.7).abs() < 1e-15);
        assert!((deviation(0.4f64, 0.5).unwrap().delta - 0.05).abs() < 1e-15);
    }
}
