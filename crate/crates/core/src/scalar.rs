//! Scalar types accepted by the density checkers.
//!
//! Counting is always exact (integers); only the parameters `d` and `rho` and
//! the derived bound/deficit are scalar. `f64` is the everyday choice, while
//! [`Ratio`] gives bit-exact deficits for small instances.

use std::fmt::{Debug, Display};

use num_rational::Ratio;
use num_traits::{Num, ToPrimitive};

pub trait Scalar: Num + PartialOrd + Copy + Debug + Display + Send + Sync + 'static {
    fn from_count(c: u64) -> Self;

    fn to_f64(self) -> f64;

    /// Rounding allowance when comparing two objective values whose terms
    /// are of magnitude at most `scale`. Zero for exact types.
    fn slack(scale: u64) -> Self;
}

macro_rules! impl_float_scalar {
    ($t:ty, $eps:expr) => {
        impl Scalar for $t {
            #[inline]
            fn from_count(c: u64) -> Self {
                c as $t
            }

            #[inline]
            fn to_f64(self) -> f64 {
                self as f64
            }

            #[inline]
            fn slack(scale: u64) -> Self {
                $eps * (scale as $t + 1.0)
            }
        }
    };
}

impl_float_scalar!(f32, 1e-4);
impl_float_scalar!(f64, 1e-9);

macro_rules! impl_ratio_scalar {
    ($t:ty) => {
        impl Scalar for Ratio<$t> {
            #[inline]
            fn from_count(c: u64) -> Self {
                Ratio::from_integer(c as $t)
            }

            fn to_f64(self) -> f64 {
                ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
            }

            #[inline]
            fn slack(_scale: u64) -> Self {
                Ratio::from_integer(0)
            }
        }
    };
}

impl_ratio_scalar!(i64);
impl_ratio_scalar!(i128);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_types_have_no_slack() {
        assert_eq!(Ratio::<i64>::slack(1 << 40), Ratio::from_integer(0));
        assert!(f64::slack(1000) > 0.0);
    }

    #[test]
    fn conversions() {
        assert_eq!(<f64 as Scalar>::from_count(7), 7.0);
        assert_eq!(Scalar::to_f64(Ratio::new(1i64, 4)), 0.25);
        assert_eq!(<Ratio<i128> as Scalar>::from_count(3), Ratio::from_integer(3));
    }
}
