//! Scalar abstraction and the tolerance bundle threaded through every solver.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, NumAssign, NumCast};

/// Floating-point scalar the whole crate is generic over.
///
/// `f64` is the precision grade the default tolerances are calibrated for;
/// `f32` works for smoke-level experiments with correspondingly looser
/// tolerances.
pub trait Real: Float + NumAssign + Sum + Debug + Display + 'static {
    /// Default tolerance bundle for this scalar type.
    fn tolerances() -> Tolerances<Self>;

    /// Convert an `f64` constant into this scalar type.
    #[inline]
    fn of(x: f64) -> Self {
        <Self as NumCast>::from(x).expect("constant representable in scalar type")
    }
}

impl Real for f64 {
    fn tolerances() -> Tolerances<f64> {
        Tolerances {
            feas: 1e-7,
            opt: 1e-9,
            pivot: 1e-11,
            pos: 1e-7,
            rank: 1e-9,
            rm_gap: 1e-7,
            item_rel: 1e-7,
            fractional_floor: 1e-12,
        }
    }
}

impl Real for f32 {
    fn tolerances() -> Tolerances<f32> {
        Tolerances {
            feas: 1e-4,
            opt: 1e-5,
            pivot: 1e-6,
            pos: 1e-4,
            rank: 1e-5,
            rm_gap: 1e-4,
            item_rel: 1e-4,
            fractional_floor: 1e-9,
        }
    }
}

/// Numeric thresholds shared by the LP layer, facet enumeration and the
/// measures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    /// Absolute slack below which a constraint counts as satisfied / active.
    pub feas: T,
    /// Reduced-cost threshold for simplex optimality.
    pub opt: T,
    /// Pivot magnitudes at or below this are treated as zero; persisting past
    /// a tableau rebuild this is a numerical breakdown.
    pub pivot: T,
    /// Strictness threshold for facet coefficient positivity.
    pub pos: T,
    /// Rank / affine-independence threshold for hyperplane fitting.
    pub rank: T,
    /// Objective gap at which the Russell-measure cutting-plane loop stops.
    pub rm_gap: T,
    /// Relative coordinate change that counts as an improvement item.
    pub item_rel: T,
    /// Lower bound on the homogenization variable in linear-fractional solves.
    pub fractional_floor: T,
}

impl Default for Tolerances<f64> {
    fn default() -> Self {
        f64::tolerances()
    }
}

impl Default for Tolerances<f32> {
    fn default() -> Self {
        f32::tolerances()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_defaults_pin_documented_values() {
        let tol = Tolerances::<f64>::default();
        assert_eq!(tol.feas, 1e-7);
        assert_eq!(tol.opt, 1e-9);
        assert_eq!(tol.pivot, 1e-11);
        assert_eq!(tol.pos, 1e-7);
        assert_eq!(tol.rank, 1e-9);
        assert_eq!(tol.rm_gap, 1e-7);
        assert_eq!(tol.item_rel, 1e-7);
        assert_eq!(tol.fractional_floor, 1e-12);
    }

    #[test]
    fn scalar_conversion_round_trips() {
        assert_eq!(f64::of(0.25), 0.25);
        assert_eq!(f32::of(0.25), 0.25f32);
    }
}
