//! Scalar abstraction so the continuation engine can run the same loop in
//! plain f64 and, when cancellation analysis demands it, in double-double.

use crate::dd::Dd;
use num_complex::Complex64;

pub trait Real: Copy {
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn add(self, b: Self) -> Self;
    fn sub(self, b: Self) -> Self;
    fn mul(self, b: Self) -> Self;
    fn div(self, b: Self) -> Self;
    fn mul_f64(self, b: f64) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin_cos(self) -> (Self, Self);
}

impl Real for f64 {
    #[inline]
    fn from_f64(x: f64) -> f64 {
        x
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    #[inline]
    fn add(self, b: f64) -> f64 {
        self + b
    }
    #[inline]
    fn sub(self, b: f64) -> f64 {
        self - b
    }
    #[inline]
    fn mul(self, b: f64) -> f64 {
        self * b
    }
    #[inline]
    fn div(self, b: f64) -> f64 {
        self / b
    }
    #[inline]
    fn mul_f64(self, b: f64) -> f64 {
        self * b
    }
    #[inline]
    fn exp(self) -> f64 {
        f64::exp(self)
    }
    #[inline]
    fn ln(self) -> f64 {
        f64::ln(self)
    }
    #[inline]
    fn sin_cos(self) -> (f64, f64) {
        f64::sin_cos(self)
    }
}

impl Real for Dd {
    #[inline]
    fn from_f64(x: f64) -> Dd {
        Dd::from_f64(x)
    }
    #[inline]
    fn to_f64(self) -> f64 {
        Dd::to_f64(self)
    }
    #[inline]
    fn add(self, b: Dd) -> Dd {
        Dd::add(self, b)
    }
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        Dd::sub(self, b)
    }
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        Dd::mul(self, b)
    }
    #[inline]
    fn div(self, b: Dd) -> Dd {
        Dd::div(self, b)
    }
    #[inline]
    fn mul_f64(self, b: f64) -> Dd {
        Dd::mul_f64(self, b)
    }
    #[inline]
    fn exp(self) -> Dd {
        Dd::exp(self)
    }
    #[inline]
    fn ln(self) -> Dd {
        Dd::ln(self)
    }
    #[inline]
    fn sin_cos(self) -> (Dd, Dd) {
        Dd::sin_cos(self)
    }
}

/// Rectangular complex over a generic real scalar.
#[derive(Clone, Copy, Debug)]
pub struct Cplx<R: Real> {
    pub re: R,
    pub im: R,
}

impl<R: Real> Cplx<R> {
    #[inline]
    pub fn new(re: R, im: R) -> Self {
        Cplx { re, im }
    }

    #[inline]
    pub fn from_c64(z: Complex64) -> Self {
        Cplx { re: R::from_f64(z.re), im: R::from_f64(z.im) }
    }

    #[inline]
    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    #[inline]
    pub fn add(self, b: Self) -> Self {
        Cplx { re: self.re.add(b.re), im: self.im.add(b.im) }
    }

    #[inline]
    pub fn sub(self, b: Self) -> Self {
        Cplx { re: self.re.sub(b.re), im: self.im.sub(b.im) }
    }

    #[inline]
    pub fn mul(self, b: Self) -> Self {
        Cplx {
            re: self.re.mul(b.re).sub(self.im.mul(b.im)),
            im: self.re.mul(b.im).add(self.im.mul(b.re)),
        }
    }

    #[inline]
    pub fn div(self, b: Self) -> Self {
        let d = b.re.mul(b.re).add(b.im.mul(b.im));
        Cplx {
            re: self.re.mul(b.re).add(self.im.mul(b.im)).div(d),
            im: self.im.mul(b.re).sub(self.re.mul(b.im)).div(d),
        }
    }

    #[inline]
    pub fn scale(self, b: f64) -> Self {
        Cplx { re: self.re.mul_f64(b), im: self.im.mul_f64(b) }
    }

    #[inline]
    pub fn mul_real(self, b: R) -> Self {
        Cplx { re: self.re.mul(b), im: self.im.mul(b) }
    }

    #[inline]
    pub fn div_real(self, b: R) -> Self {
        Cplx { re: self.re.div(b), im: self.im.div(b) }
    }

    /// exp(self) in rectangular form; the real part must be within f64
    /// exponent range (the engine pre-shifts by its running scale).
    #[inline]
    pub fn exp(self) -> Self {
        let m = self.re.exp();
        let (s, c) = self.im.sin_cos();
        Cplx { re: m.mul(c), im: m.mul(s) }
    }

    /// Squared modulus as f64 (control-flow use only).
    #[inline]
    pub fn norm_sqr_f64(self) -> f64 {
        let re = self.re.to_f64();
        let im = self.im.to_f64();
        re * re + im * im
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dd_complex_div_matches_f64() {
        let a = Complex64::new(1.7, -2.3);
        let b = Complex64::new(-0.4, 0.9);
        let want = a / b;
        let got = Cplx::<Dd>::from_c64(a).div(Cplx::from_c64(b)).to_c64();
        assert!((got - want).norm() < 1e-15 * want.norm());
    }

    #[test]
    fn dd_complex_exp_matches_f64() {
        let z = Complex64::new(0.35, -1.2);
        let want = z.exp();
        let got = Cplx::<Dd>::from_c64(z).exp().to_c64();
        assert!((got - want).norm() < 1e-15 * want.norm());
    }
}
