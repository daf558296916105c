//! Scalar abstraction shared by the probabilistic and quantum simulators.
//!
//! Probabilistic programs run over any [`Scalar`] (floating point or exact
//! rationals). Quantum programs need square roots and trigonometry, so they
//! are restricted to [`RealScalar`].

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_rational::{BigRational, Rational64};
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive};

/// Number type usable as a transition probability.
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + Display + FromStr + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// True for exact arithmetic (comparisons use equality).
    const EXACT: bool;

    /// Absolute comparison tolerance.
    fn tolerance() -> Self;

    fn approx_eq(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).abs() <= Self::tolerance()
    }

    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("finite probability")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    fn tolerance() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;
    fn tolerance() -> Self {
        1e-5
    }
}

impl Scalar for Rational64 {
    const EXACT: bool = true;
    fn tolerance() -> Self {
        Rational64::from_integer(0)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    fn tolerance() -> Self {
        BigRational::from_integer(0.into())
    }
}

/// Real field with the operations a state-vector simulator needs.
pub trait RealScalar: Scalar + Float {
    fn pi() -> Self {
        <Self as FromPrimitive>::from_f64(std::f64::consts::PI).unwrap()
    }
}

impl RealScalar for f64 {}
impl RealScalar for f32 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_types_compare_by_equality() {
        let half = Rational64::new(1, 2);
        assert!(half.approx_eq(&Rational64::new(2, 4)));
        assert!(!half.approx_eq(&Rational64::new(1, 3)));
        assert!(<Rational64 as Scalar>::EXACT);
    }

    #[test]
    fn float_tolerance() {
        assert!(0.1f64.approx_eq(&(0.1 + 1e-12)));
        assert!(!0.1f64.approx_eq(&0.1001));
    }
}
