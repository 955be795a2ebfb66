use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar the library is generic over (`f32` or `f64`).
///
/// `slack` is the absolute tolerance used by inequality checks that compare
/// two independently rounded quantities, such as the class inequalities of
/// the classifier or the fixed-point residual `d(T(p), p)`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    fn slack() -> Self;

    /// Converts an `f64` literal. Panics only for values the type cannot hold.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {
    #[inline]
    fn slack() -> f32 {
        1e-5
    }
}

impl Scalar for f64 {
    #[inline]
    fn slack() -> f64 {
        1e-12
    }
}

/// `asinh` via `ln_1p`, accurate for small arguments.
#[inline]
pub(crate) fn asinh_stable<S: Scalar>(x: S) -> S {
    let a = x.abs();
    let r = (a + a * a / (S::one() + (S::one() + a * a).sqrt())).ln_1p();
    if x.is_sign_negative() {
        -r
    } else {
        r
    }
}
