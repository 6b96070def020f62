//! Configurable-precision floating point. `Prec` carries the decimal digit
//! count that every numeric evaluation in the crate is performed at; `Real`
//! is an MPFR float and `Cplx` a rectangular complex built from two of them.

use rug::float::Special;
use rug::ops::Pow;

use super::rat::Rational;

pub type Real = rug::Float;

/// Decimal working precision. Default is 40 digits; the complex-scaling
/// pipeline raises this to 80 when predicted widths drop below 1e-20.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Prec {
    pub digits: u32,
}

impl Default for Prec {
    fn default() -> Self {
        Prec { digits: 40 }
    }
}

impl Prec {
    pub fn new(digits: u32) -> Self {
        Prec { digits }
    }

    /// Mantissa bits: digits * log2(10) plus guard bits.
    pub fn bits(self) -> u32 {
        (self.digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 32
    }

    /// 10^-digits as a Real, the nominal resolution.
    pub fn eps(self) -> Real {
        Real::with_val(self.bits(), 10).pow(-(self.digits as i32))
    }

    pub fn real_from_f64(self, x: f64) -> Real {
        Real::with_val(self.bits(), x)
    }

    pub fn real_from_u32(self, n: u32) -> Real {
        Real::with_val(self.bits(), n)
    }

    pub fn real_from_i64(self, n: i64) -> Real {
        Real::with_val(self.bits(), n)
    }

    pub fn real_from_rat(self, q: &Rational) -> Real {
        Real::with_val(self.bits(), q)
    }

    pub fn zero(self) -> Real {
        Real::with_val(self.bits(), 0)
    }

    pub fn one(self) -> Real {
        Real::with_val(self.bits(), 1)
    }

    pub fn pi(self) -> Real {
        Real::with_val(self.bits(), rug::float::Constant::Pi)
    }

    pub fn nan(self) -> Real {
        Real::with_val(self.bits(), Special::Nan)
    }
}

/// Rectangular complex number at explicit precision.
#[derive(Debug, Clone, PartialEq)]
pub struct Cplx {
    pub re: Real,
    pub im: Real,
}

impl Cplx {
    pub fn new(re: Real, im: Real) -> Self {
        Cplx { re, im }
    }

    pub fn from_real(re: Real) -> Self {
        let im = Real::with_val(re.prec(), 0);
        Cplx { re, im }
    }

    pub fn zero(prec: Prec) -> Self {
        Cplx::new(prec.zero(), prec.zero())
    }

    pub fn one(prec: Prec) -> Self {
        Cplx::new(prec.one(), prec.zero())
    }

    pub fn i(prec: Prec) -> Self {
        Cplx::new(prec.zero(), prec.one())
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn conj(&self) -> Cplx {
        Cplx::new(self.re.clone(), -self.im.clone())
    }

    pub fn neg(&self) -> Cplx {
        Cplx::new(-self.re.clone(), -self.im.clone())
    }

    pub fn add(&self, o: &Cplx) -> Cplx {
        Cplx::new(
            Real::with_val(self.prec(), &self.re + &o.re),
            Real::with_val(self.prec(), &self.im + &o.im),
        )
    }

    pub fn sub(&self, o: &Cplx) -> Cplx {
        Cplx::new(
            Real::with_val(self.prec(), &self.re - &o.re),
            Real::with_val(self.prec(), &self.im - &o.im),
        )
    }

    pub fn mul(&self, o: &Cplx) -> Cplx {
        let re = Real::with_val(self.prec(), &self.re * &o.re)
            - Real::with_val(self.prec(), &self.im * &o.im);
        let im = Real::with_val(self.prec(), &self.re * &o.im)
            + Real::with_val(self.prec(), &self.im * &o.re);
        Cplx::new(re, im)
    }

    pub fn mul_real(&self, r: &Real) -> Cplx {
        Cplx::new(
            Real::with_val(self.prec(), &self.re * r),
            Real::with_val(self.prec(), &self.im * r),
        )
    }

    pub fn div(&self, o: &Cplx) -> Cplx {
        let d = o.norm_sqr();
        let num = self.mul(&o.conj());
        Cplx::new(num.re / d.clone(), num.im / d)
    }

    pub fn norm_sqr(&self) -> Real {
        Real::with_val(self.prec(), self.re.clone().square() + self.im.clone().square())
    }

    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt()
    }

    pub fn arg(&self) -> Real {
        self.im.clone().atan2(&self.re)
    }

    pub fn exp(&self) -> Cplx {
        let r = self.re.clone().exp();
        let (sin, cos) = self.im.clone().sin_cos(Real::new(self.prec()));
        Cplx::new(Real::with_val(self.prec(), &r * &cos), r * sin)
    }

    /// Principal natural log: `ln|z| + i arg(z)` with `arg` in (-pi, pi].
    pub fn ln(&self) -> Cplx {
        Cplx::new(self.abs().ln(), self.arg())
    }

    pub fn sqrt(&self) -> Cplx {
        self.ln().mul_real(&Real::with_val(self.prec(), 0.5)).exp()
    }

    /// Principal power `z^w = exp(w ln z)`.
    pub fn pow(&self, w: &Cplx) -> Cplx {
        self.ln().mul(w).exp()
    }

    pub fn inv(&self) -> Cplx {
        let d = self.norm_sqr();
        Cplx::new(self.re.clone() / d.clone(), -self.im.clone() / d)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl std::fmt::Display for Cplx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.im.is_sign_negative() {
            write!(f, "{} - {}i", self.re, -self.im.clone())
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

/// Principal branch of `x^e` for real `x` approached from the upper half
/// plane (`x + i0`): for x < 0 this is `|x|^e exp(i pi e)`.
pub fn pow_upper_branch(x: &Real, e: &Real, prec: Prec) -> Cplx {
    if x.is_sign_negative() && !x.is_zero() {
        let ln = Cplx::new(x.clone().abs().ln(), prec.pi());
        ln.mul(&Cplx::from_real(e.clone())).exp()
    } else {
        Cplx::from_real(Real::with_val(prec.bits(), x.clone().pow(e)))
    }
}
