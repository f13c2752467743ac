//! Scalar abstraction shared by every module.
//!
//! All numerics are written against [`Real`], so the same code runs in `f64`
//! (the default everywhere in the CLI) and `f32`. Complex values are
//! `num_complex::Complex<T>`.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point type usable as the real carrier of complex coefficients.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 literal representable")
    }

    /// Conversion from a count.
    fn count(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("usize representable")
    }

    /// A tolerance no tighter than what this type can resolve.
    ///
    /// `f64` keeps the requested value for anything at or above ~7e-15; `f32`
    /// widens every tolerance to ~4e-6.
    fn tol(requested: f64) -> Self {
        let floor = Self::epsilon() * Self::lit(32.0);
        Self::lit(requested).max(floor)
    }

    fn as_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex scalar over `T`.
pub type Cplx<T> = Complex<T>;

pub(crate) fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

pub(crate) fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

pub(crate) fn is_finite<T: Real>(z: &Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Sum of a slice of complex values.
pub fn csum<T: Real>(xs: &[Complex<T>]) -> Complex<T> {
    xs.iter()
        .fold(Complex::new(T::zero(), T::zero()), |acc, x| acc + x)
}

/// `Σ x_j^k` for integer k ≥ 1.
pub fn power_sum<T: Real>(xs: &[Complex<T>], k: i32) -> Complex<T> {
    xs.iter()
        .fold(Complex::new(T::zero(), T::zero()), |acc, x| acc + x.powi(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_floor_depends_on_type() {
        assert_eq!(f64::tol(1e-12), 1e-12);
        assert!(f64::tol(1e-16) > 1e-16);
        assert!(f32::tol(1e-12) > 1e-6);
    }

    #[test]
    fn power_sum_of_cube_roots_of_unity() {
        let w = Complex::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let xs = [re(1.0), w, w * w];
        assert!(power_sum(&xs, 1).norm() < 1e-15);
        assert!((power_sum(&xs, 3) - re(3.0)).norm() < 1e-14);
    }
}
