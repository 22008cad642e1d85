use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use crate::calculus::jet::Jet;
use crate::calculus::real::Real;
use crate::error::{Error, Result};

/// Values that expressions and small matrix kernels can be evaluated over:
/// plain reals and jets.
pub trait Scalar:
    Clone
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    type Real: Real;

    fn value(&self) -> Self::Real;
    /// A constant living in the same space as `self`.
    fn constant_like(&self, c: Self::Real) -> Self;
    fn scale(&self, c: Self::Real) -> Self;
    fn try_recip(&self) -> Result<Self>;
    fn try_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.clone() * rhs.try_recip()?)
    }
    fn exp_s(&self) -> Self;
    fn try_ln(&self) -> Result<Self>;
    fn try_sqrt(&self) -> Result<Self>;
    fn sin_s(&self) -> Self;
    fn cos_s(&self) -> Self;
    fn try_powf(&self, r: Self::Real) -> Result<Self>;
    fn try_powi(&self, n: i32) -> Result<Self>;
}

macro_rules! real_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            type Real = $t;

            fn value(&self) -> $t {
                *self
            }
            fn constant_like(&self, c: $t) -> $t {
                c
            }
            fn scale(&self, c: $t) -> $t {
                self * c
            }
            fn try_recip(&self) -> Result<$t> {
                if *self == 0.0 || !self.is_finite() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(1.0 / self)
                }
            }
            fn exp_s(&self) -> $t {
                self.exp()
            }
            fn try_ln(&self) -> Result<$t> {
                if *self > 0.0 {
                    Ok(self.ln())
                } else {
                    Err(Error::Domain {
                        func: "ln",
                        value: *self as f64,
                    })
                }
            }
            fn try_sqrt(&self) -> Result<$t> {
                if *self > 0.0 {
                    Ok(self.sqrt())
                } else {
                    Err(Error::Domain {
                        func: "sqrt",
                        value: *self as f64,
                    })
                }
            }
            fn sin_s(&self) -> $t {
                self.sin()
            }
            fn cos_s(&self) -> $t {
                self.cos()
            }
            fn try_powf(&self, r: $t) -> Result<$t> {
                if *self > 0.0 {
                    Ok(self.powf(r))
                } else {
                    Err(Error::Domain {
                        func: "pow",
                        value: *self as f64,
                    })
                }
            }
            fn try_powi(&self, n: i32) -> Result<$t> {
                if n < 0 && *self == 0.0 {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(self.powi(n))
                }
            }
        }
    };
}

real_scalar!(f32);
real_scalar!(f64);

impl<R: Real> Scalar for Jet<R> {
    type Real = R;

    fn value(&self) -> R {
        Jet::value(self)
    }
    fn constant_like(&self, c: R) -> Self {
        Jet::constant_like(self, c)
    }
    fn scale(&self, c: R) -> Self {
        Jet::scale(self, c)
    }
    fn try_recip(&self) -> Result<Self> {
        self.recip()
    }
    fn try_div(&self, rhs: &Self) -> Result<Self> {
        Jet::try_div(self, rhs)
    }
    fn exp_s(&self) -> Self {
        self.exp()
    }
    fn try_ln(&self) -> Result<Self> {
        self.ln()
    }
    fn try_sqrt(&self) -> Result<Self> {
        self.sqrt()
    }
    fn sin_s(&self) -> Self {
        self.sin()
    }
    fn cos_s(&self) -> Self {
        self.cos()
    }
    fn try_powf(&self, r: R) -> Result<Self> {
        self.powf(r)
    }
    fn try_powi(&self, n: i32) -> Result<Self> {
        self.powi(n)
    }
}
