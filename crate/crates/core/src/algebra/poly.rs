//! Univariate polynomials with exact rational coefficients.
//!
//! Two formal symbols occur in this crate: the energy `E` (bodies of the
//! perturbative and instanton functions) and the level variable `nu = n + 1/2`
//! (closed forms of perturbation coefficients). Mixing symbols in arithmetic
//! is a bug, so every binary operation asserts they agree.

use std::fmt;

use super::float::{Cplx, Prec, Real};
use super::rat::{rat, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Symbol {
    /// The energy variable E.
    Energy,
    /// The level variable nu = n + 1/2.
    Nu,
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Energy => write!(f, "E"),
            Symbol::Nu => write!(f, "nu"),
        }
    }
}

/// Dense polynomial, coefficients from degree 0 upward, trailing zeros
/// trimmed. The zero polynomial has an empty coefficient list and degree
/// `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    pub symbol: Symbol,
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(symbol: Symbol, mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.cmp0() == std::cmp::Ordering::Equal) {
            coeffs.pop();
        }
        Poly { symbol, coeffs }
    }

    pub fn zero(symbol: Symbol) -> Self {
        Poly { symbol, coeffs: Vec::new() }
    }

    pub fn constant(symbol: Symbol, c: Rational) -> Self {
        Poly::new(symbol, vec![c])
    }

    /// The monomial x (the symbol itself).
    pub fn identity(symbol: Symbol) -> Self {
        Poly::new(symbol, vec![rat(0), rat(1)])
    }

    pub fn monomial(symbol: Symbol, degree: usize, c: Rational) -> Self {
        let mut coeffs = vec![rat(0); degree + 1];
        coeffs[degree] = c;
        Poly::new(symbol, coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(|| rat(0))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Reinterpret the same coefficients under another symbol.
    pub fn with_symbol(&self, symbol: Symbol) -> Poly {
        Poly { symbol, coeffs: self.coeffs.clone() }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        assert_eq!(self.symbol, o.symbol, "symbol mismatch in Poly::add");
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + o.coeff(k));
        }
        Poly::new(self.symbol, out)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            symbol: self.symbol,
            coeffs: self.coeffs.iter().map(|c| Rational::from(-c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> Poly {
        if s.cmp0() == std::cmp::Ordering::Equal {
            return Poly::zero(self.symbol);
        }
        Poly {
            symbol: self.symbol,
            coeffs: self.coeffs.iter().map(|c| Rational::from(c * s)).collect(),
        }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        assert_eq!(self.symbol, o.symbol, "symbol mismatch in Poly::mul");
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.symbol);
        }
        let mut out = vec![rat(0); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.cmp0() == std::cmp::Ordering::Equal {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        Poly::new(self.symbol, out)
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero(self.symbol);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| Rational::from(c * &rat(k as i64)))
            .collect();
        Poly::new(self.symbol, coeffs)
    }

    /// Exact Horner evaluation.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = rat(0);
        for c in self.coeffs.iter().rev() {
            acc = Rational::from(&acc * x) + c;
        }
        acc
    }

    pub fn eval_real(&self, x: &Real, prec: Prec) -> Real {
        let mut acc = prec.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + prec.real_from_rat(c);
        }
        acc
    }

    pub fn eval_cplx(&self, z: &Cplx, prec: Prec) -> Cplx {
        let mut acc = Cplx::zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z).add(&Cplx::from_real(prec.real_from_rat(c)));
        }
        acc
    }

    /// Substitute another polynomial for the variable.
    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly::zero(inner.symbol);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Poly::constant(inner.symbol, c.clone()));
        }
        acc
    }

    /// Exact Newton interpolation through `points`. Panics on repeated
    /// abscissae. The result has degree < points.len().
    pub fn interpolate(symbol: Symbol, points: &[(Rational, Rational)]) -> Poly {
        assert!(!points.is_empty());
        let n = points.len();
        // divided differences
        let mut dd: Vec<Rational> = points.iter().map(|(_, y)| y.clone()).collect();
        let mut coeffs_newton = vec![dd[0].clone()];
        for order in 1..n {
            for i in 0..n - order {
                let dx = Rational::from(&points[i + order].0 - &points[i].0);
                assert!(dx.cmp0() != std::cmp::Ordering::Equal, "repeated abscissa");
                dd[i] = Rational::from(&dd[i + 1] - &dd[i]) / dx;
            }
            coeffs_newton.push(dd[0].clone());
        }
        // expand the Newton form
        let mut result = Poly::zero(symbol);
        let mut basis = Poly::constant(symbol, rat(1));
        for (k, c) in coeffs_newton.iter().enumerate() {
            result = result.add(&basis.scale(c));
            if k + 1 < n {
                let factor = Poly::new(symbol, vec![Rational::from(-&points[k].0), rat(1)]);
                basis = basis.mul(&factor);
            }
        }
        result
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.cmp0() == std::cmp::Ordering::Equal {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*{}", self.symbol)?,
                _ => write!(f, "({c})*{}^{k}", self.symbol)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::ratio;

    #[test]
    fn zero_polynomial_has_no_degree() {
        let p = Poly::new(Symbol::Energy, vec![rat(0), rat(0)]);
        assert!(p.is_zero());
        assert_eq!(p.degree(), None);
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        // P(x) = 7/16 + 15/4 x^2
        let p = Poly::new(Symbol::Nu, vec![ratio(7, 16), rat(0), ratio(15, 4)]);
        let pts: Vec<_> = (0..4)
            .map(|n| {
                let x = ratio(2 * n + 1, 2);
                let y = p.eval(&x);
                (x, y)
            })
            .collect();
        let q = Poly::interpolate(Symbol::Nu, &pts);
        assert_eq!(p, q);
    }

    #[test]
    fn compose_and_derivative() {
        let p = Poly::new(Symbol::Energy, vec![rat(1), rat(0), rat(1)]); // 1 + x^2
        let inner = Poly::new(Symbol::Energy, vec![rat(0), rat(2)]); // 2x
        assert_eq!(
            p.compose(&inner),
            Poly::new(Symbol::Energy, vec![rat(1), rat(0), rat(4)])
        );
        assert_eq!(p.derivative(), Poly::new(Symbol::Energy, vec![rat(0), rat(2)]));
    }
}
