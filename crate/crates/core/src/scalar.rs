//! Scalar abstraction shared by the kinematics laws.
//!
//! The composition laws are plain field arithmetic, so they are written once
//! against [`Scalar`] and instantiated with exact rationals for verification
//! and with floats for display and quick exploration.

use std::fmt::{Debug, Display};

use num_integer::{Integer, Roots};
use num_rational::Ratio;
use num_traits::{Num, Signed, ToPrimitive};

/// Ordered field element usable by the velocity laws.
pub trait Scalar: Num + Signed + PartialOrd + Clone + Debug + Display {
    /// Square root when it is representable exactly in `Self`.
    ///
    /// Floats always succeed for non-negative input. Rationals succeed only
    /// when numerator and denominator are both perfect squares.
    fn exact_sqrt(&self) -> Option<Self>;

    /// Lossy conversion, used for display-only output such as degrees.
    fn to_f64_lossy(&self) -> f64;

    /// `true` for types whose arithmetic never rounds.
    fn is_exact() -> bool;

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn exact_sqrt(&self) -> Option<Self> {
                if *self < 0.0 {
                    None
                } else {
                    Some(self.sqrt())
                }
            }

            fn to_f64_lossy(&self) -> f64 {
                *self as f64
            }

            fn is_exact() -> bool {
                false
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

impl<T> Scalar for Ratio<T>
where
    T: Integer + Signed + Roots + Clone + Debug + Display + ToPrimitive,
{
    fn exact_sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        // Ratio is always reduced, so both parts must be perfect squares.
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if n.clone() * n.clone() == *self.numer() && d.clone() * d.clone() == *self.denom() {
            Some(Ratio::new(n, d))
        } else {
            None
        }
    }

    fn to_f64_lossy(&self) -> f64 {
        let n = self.numer().to_f64().unwrap_or(f64::NAN);
        let d = self.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    }

    fn is_exact() -> bool {
        true
    }
}
