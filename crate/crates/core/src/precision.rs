//! Double-double arithmetic for everything downstream of the root solve.
//!
//! The entanglement measures are tiny deficits (1 - y, 1 - tr rho^2) of
//! quantities that are 1 to within ~1e-12, and their O(eps^2) corrections
//! sit near 1e-16. Plain f64 cannot resolve them, so the block, amplitudes
//! and density are carried in [`Quad`] (~32 significant digits) and only
//! rounded to f64 once the deficit has been formed.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex;
pub use qd::Quad;

pub type Cplx = Complex<Quad>;

#[inline]
pub fn quad(x: f64) -> Quad {
    Quad::from(x)
}

#[inline]
pub fn to_f64(x: Quad) -> f64 {
    x.0 + x.1
}

#[inline]
pub fn cplx(re: f64, im: f64) -> Cplx {
    Complex::new(quad(re), quad(im))
}

#[inline]
pub fn norm_sqr(z: Cplx) -> Quad {
    z.re * z.re + z.im * z.im
}

#[inline]
pub fn cabs(z: Cplx) -> Quad {
    norm_sqr(z).sqrt()
}

#[inline]
pub fn scale(z: Cplx, s: Quad) -> Cplx {
    Complex::new(z.re * s, z.im * s)
}

/// Real scalar shared by the f64 and double-double evaluations of the
/// information measure and its asymptotic form.
pub trait Scalar:
    Copy
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn of(x: f64) -> Self;
    fn as_f64(self) -> f64;
    fn ln(self) -> Self;
    /// ln(1 + x), accurate for small |x|.
    fn ln_1p(self) -> Self;
    fn sqrt(self) -> Self;
    fn abs(self) -> Self;
}

impl Scalar for f64 {
    fn of(x: f64) -> Self {
        x
    }
    fn as_f64(self) -> f64 {
        self
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn ln_1p(self) -> Self {
        f64::ln_1p(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
}

impl Scalar for Quad {
    fn of(x: f64) -> Self {
        quad(x)
    }
    fn as_f64(self) -> f64 {
        to_f64(self)
    }
    fn ln(self) -> Self {
        Quad::ln(self)
    }
    fn ln_1p(self) -> Self {
        // 1 + x is exact to ~1e-32 absolute and ln is absolutely accurate near 1.
        Quad::ln(Quad::ONE + self)
    }
    fn sqrt(self) -> Self {
        Quad::sqrt(self)
    }
    fn abs(self) -> Self {
        Quad::abs(self)
    }
}
