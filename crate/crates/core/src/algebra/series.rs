//! Truncated formal series on a fractional exponent lattice.
//!
//! An `ESeries` stores terms `c_k * x^(k * step)` where `step` is an exact
//! rational (1 for plain perturbation series in g, 2/(N-2) for even
//! trans-series terms, 1/(M-2) for odd ones) and `c_k` is a polynomial in a
//! formal symbol (possibly constant). Laurent heads (negative k) are allowed;
//! `trunc` is the index of the first exponent that is no longer tracked.
//! Binary operations require identical lattice steps and propagate the
//! truncation order: min for addition, min(ta + val(b), tb + val(a)) for
//! multiplication.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::float::{pow_upper_branch, Cplx, Prec, Real};
use super::poly::{Poly, Symbol};
use super::rat::{parse_rat, rat, rat_string, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ESeries {
    lattice_step: Rational,
    symbol: Symbol,
    terms: BTreeMap<i64, Poly>,
    trunc: i64,
}

impl ESeries {
    pub fn new(lattice_step: Rational, symbol: Symbol, trunc: i64) -> Self {
        assert!(lattice_step.cmp0() == std::cmp::Ordering::Greater, "lattice step must be positive");
        ESeries { lattice_step, symbol, terms: BTreeMap::new(), trunc }
    }

    /// Series on the integer lattice (step 1).
    pub fn integer_lattice(symbol: Symbol, trunc: i64) -> Self {
        ESeries::new(rat(1), symbol, trunc)
    }

    pub fn lattice_step(&self) -> &Rational {
        &self.lattice_step
    }

    pub fn symbol(&self) -> Symbol {
        self.symbol
    }

    pub fn truncation(&self) -> i64 {
        self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Poly)> {
        self.terms.iter().map(|(k, p)| (*k, p))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest stored exponent index; `trunc` for the empty series.
    pub fn valuation(&self) -> i64 {
        self.terms.keys().next().copied().unwrap_or(self.trunc)
    }

    pub fn coeff(&self, k: i64) -> Poly {
        assert!(k < self.trunc, "coefficient {k} is beyond truncation {}", self.trunc);
        self.terms.get(&k).cloned().unwrap_or_else(|| Poly::zero(self.symbol))
    }

    pub fn set_coeff(&mut self, k: i64, p: Poly) {
        if k >= self.trunc || p.is_zero() {
            self.terms.remove(&k);
        } else {
            self.terms.insert(k, p);
        }
    }

    pub fn set_scalar(&mut self, k: i64, c: Rational) {
        self.set_coeff(k, Poly::constant(self.symbol, c));
    }

    /// All coefficients constant polynomials?
    pub fn is_scalar(&self) -> bool {
        self.terms.values().all(|p| p.degree().unwrap_or(0) == 0)
    }

    pub fn truncate(&self, trunc: i64) -> ESeries {
        let mut out = ESeries::new(self.lattice_step.clone(), self.symbol, trunc.min(self.trunc));
        for (&k, p) in &self.terms {
            if k < out.trunc {
                out.terms.insert(k, p.clone());
            }
        }
        out
    }

    fn check_lattice(&self, o: &ESeries) -> Result<()> {
        if self.lattice_step != o.lattice_step {
            return Err(Error::LatticeMismatch {
                left: rat_string(&self.lattice_step),
                right: rat_string(&o.lattice_step),
            });
        }
        Ok(())
    }

    pub fn add(&self, o: &ESeries) -> Result<ESeries> {
        self.check_lattice(o)?;
        let mut out = ESeries::new(self.lattice_step.clone(), self.symbol, self.trunc.min(o.trunc));
        for (&k, p) in self.terms.iter().chain(o.terms.iter()) {
            if k < out.trunc {
                let cur = out.terms.remove(&k).unwrap_or_else(|| Poly::zero(self.symbol));
                let sum = cur.add(p);
                if !sum.is_zero() {
                    out.terms.insert(k, sum);
                }
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> ESeries {
        let mut out = self.clone();
        for p in out.terms.values_mut() {
            *p = p.neg();
        }
        out
    }

    pub fn sub(&self, o: &ESeries) -> Result<ESeries> {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &Rational) -> ESeries {
        let mut out = ESeries::new(self.lattice_step.clone(), self.symbol, self.trunc);
        for (&k, p) in &self.terms {
            out.set_coeff(k, p.scale(s));
        }
        out
    }

    pub fn scale_poly(&self, s: &Poly) -> ESeries {
        let mut out = ESeries::new(self.lattice_step.clone(), self.symbol, self.trunc);
        for (&k, p) in &self.terms {
            out.set_coeff(k, p.mul(s));
        }
        out
    }

    /// Multiply by `c * x^(k * step)`.
    pub fn shift(&self, k: i64, c: &Rational) -> ESeries {
        let mut out = ESeries::new(self.lattice_step.clone(), self.symbol, self.trunc + k);
        for (&j, p) in &self.terms {
            out.set_coeff(j + k, p.scale(c));
        }
        out
    }

    pub fn mul(&self, o: &ESeries) -> Result<ESeries> {
        self.check_lattice(o)?;
        let trunc = (self.trunc + o.valuation()).min(o.trunc + self.valuation());
        let mut out = ESeries::new(self.lattice_step.clone(), self.symbol, trunc);
        for (&i, a) in &self.terms {
            for (&j, b) in &o.terms {
                if i + j >= trunc {
                    break;
                }
                let cur = out.terms.remove(&(i + j)).unwrap_or_else(|| Poly::zero(self.symbol));
                let sum = cur.add(&a.mul(b));
                if !sum.is_zero() {
                    out.terms.insert(i + j, sum);
                }
            }
        }
        Ok(out)
    }

    /// Reciprocal of a series whose lowest term is a nonzero constant at
    /// exponent index 0.
    pub fn recip(&self) -> Result<ESeries> {
        let c0 = self.coeff(0);
        if self.valuation() != 0 || c0.degree() != Some(0) {
            return Err(Error::Invalid(
                "reciprocal requires a constant nonzero term at exponent 0".into(),
            ));
        }
        let c0 = c0.coeff(0);
        let mut out = ESeries::new(self.lattice_step.clone(), self.symbol, self.trunc);
        // solve sum_j s_j r_{k-j} = delta_{k0} order by order
        out.set_scalar(0, Rational::from(1) / c0.clone());
        for k in 1..self.trunc {
            let mut acc = Poly::zero(self.symbol);
            for (&j, sj) in self.terms.range(1..=k) {
                let r = out.terms.get(&(k - j));
                if let Some(r) = r {
                    acc = acc.add(&sj.mul(r));
                }
            }
            if !acc.is_zero() {
                let val = acc.scale(&(Rational::from(-1) / c0.clone()));
                out.terms.insert(k, val);
            }
        }
        Ok(out)
    }

    /// Compose `outer(x)` with `inner(g)`: substitute the inner series for
    /// the outer variable. The outer series lives on the integer lattice
    /// (its indices count powers of its own variable). The inner series must
    /// have positive valuation unless the outer one is an exact polynomial
    /// (truncation `i64::MAX`).
    pub fn compose(outer: &ESeries, inner: &ESeries) -> Result<ESeries> {
        if outer.lattice_step != rat(1) || outer.valuation() < 0 {
            return Err(Error::Invalid(
                "composition outer series must be a power series on the integer lattice".into(),
            ));
        }
        let exact_outer = outer.trunc == i64::MAX;
        if inner.valuation() < 1 && !(exact_outer && inner.valuation() >= 0) {
            return Err(Error::NonzeroInnerConstant);
        }
        if inner.valuation() < 0 {
            return Err(Error::NonzeroInnerConstant);
        }
        let v = inner.valuation().max(1);
        let trunc = if exact_outer {
            inner.trunc
        } else {
            inner.trunc.min(outer.trunc.saturating_mul(v))
        };
        let top = if exact_outer {
            outer.terms.keys().next_back().copied().unwrap_or(0)
        } else {
            outer.trunc - 1
        };
        let mut acc = ESeries::new(inner.lattice_step.clone(), inner.symbol, trunc);
        for k in (0..=top).rev() {
            acc = acc.mul(&inner.truncate(trunc))?;
            acc.trunc = trunc; // mul tightens by valuation; composition keeps the target order
            let c = if k < outer.trunc { outer.coeff(k) } else { Poly::zero(outer.symbol) };
            if !c.is_zero() {
                let cur = acc.terms.remove(&0).unwrap_or_else(|| Poly::zero(acc.symbol));
                let sum = cur.add(&c.with_symbol(acc.symbol));
                if !sum.is_zero() {
                    acc.terms.insert(0, sum);
                }
            }
        }
        Ok(acc)
    }

    /// Compositional inverse of `s = s_1 x + s_2 x^2 + ...` with `s_1 != 0`
    /// on the integer lattice: returns `r` with `s(r(y)) = y` up to the
    /// truncation order. Coefficients must be scalars.
    pub fn reverse(&self) -> Result<ESeries> {
        if self.lattice_step != rat(1) {
            return Err(Error::Invalid("reversion requires the integer lattice".into()));
        }
        if !self.is_scalar() {
            return Err(Error::Invalid("reversion requires scalar coefficients".into()));
        }
        if self.valuation() < 1 || self.coeff(1).is_zero() {
            return Err(Error::VanishingLinearCoefficient);
        }
        let s1 = self.coeff(1).coeff(0);
        let mut r = ESeries::new(rat(1), self.symbol, self.trunc);
        r.set_scalar(1, Rational::from(1) / s1.clone());
        for j in 2..self.trunc {
            let c = ESeries::compose(self, &r)?;
            let defect = c.coeff(j).coeff(0);
            if defect.cmp0() != std::cmp::Ordering::Equal {
                r.set_scalar(j, Rational::from(-defect) / s1.clone());
            }
        }
        Ok(r)
    }

    /// `exp` of a series with positive valuation.
    pub fn exp(&self) -> Result<ESeries> {
        let v = self.valuation();
        if v < 1 {
            return Err(Error::Invalid("exp requires positive valuation".into()));
        }
        let mut out = ESeries::new(self.lattice_step.clone(), self.symbol, self.trunc);
        out.set_scalar(0, rat(1));
        let mut power = out.clone(); // s^k / k!
        let mut k: i64 = 0;
        while (k + 1) * v < self.trunc {
            k += 1;
            power = power.mul(self)?;
            power.trunc = self.trunc;
            out = out.add(&power.scale(&(Rational::from(1) / Rational::from(k))))?;
            out.trunc = self.trunc;
        }
        Ok(out)
    }

    /// Horner-style numeric evaluation at coupling `g`. Requires scalar
    /// coefficients; for fractional lattices and negative `g` the caller
    /// must opt into the principal branch (approached from the upper half
    /// plane). Returns the value together with the magnitude of the last
    /// included term as a crude truncation indicator.
    pub fn eval_numeric(&self, g: &Real, prec: Prec, principal_branch: bool) -> Result<(Cplx, Real)> {
        if !self.is_scalar() {
            return Err(Error::Invalid(
                "numeric evaluation requires scalar coefficients; substitute the symbol first".into(),
            ));
        }
        if self.terms.is_empty() {
            return Ok((Cplx::zero(prec), prec.zero()));
        }
        let p = self.lattice_step.numer().to_i64().expect("lattice numerator fits i64");
        let q = self.lattice_step.denom().to_i64().expect("lattice denominator fits i64");
        let fractional = q != 1;
        if g.is_sign_negative() && fractional && !principal_branch {
            return Err(Error::BranchRequired);
        }
        // u = g^(1/q) on the upper branch, base = u^p
        let inv_q = Real::with_val(prec.bits(), 1) / prec.real_from_i64(q);
        let u = if fractional {
            pow_upper_branch(g, &inv_q, prec)
        } else {
            Cplx::from_real(g.clone())
        };
        let base = if p == 1 { u.clone() } else { u.pow(&Cplx::from_real(prec.real_from_i64(p))) };
        let keys: Vec<i64> = self.terms.keys().copied().collect();
        // Horner from the top stored exponent down, then one final shift by
        // base^(lowest exponent).
        let mut acc = Cplx::zero(prec);
        let mut prev: Option<i64> = None;
        for &k in keys.iter().rev() {
            if let Some(pk) = prev {
                let gap = pk - k;
                let factor = base.pow(&Cplx::from_real(prec.real_from_i64(gap)));
                acc = acc.mul(&factor);
            }
            let c = prec.real_from_rat(&self.terms[&k].coeff(0));
            acc = acc.add(&Cplx::from_real(c));
            prev = Some(k);
        }
        let k0 = keys[0];
        let head = base.pow(&Cplx::from_real(prec.real_from_i64(k0)));
        let value = acc.mul(&head);
        let klast = *keys.last().unwrap();
        let last_term = self.terms[&klast].coeff(0);
        let last_mag = Cplx::from_real(prec.real_from_rat(&last_term))
            .mul(&base.pow(&Cplx::from_real(prec.real_from_i64(klast))))
            .abs();
        Ok((value, last_mag))
    }

    /// Substitute a polynomial (or series) value for the coefficient symbol,
    /// turning polynomial coefficients into scalars via an on-shell branch
    /// `sym = branch(x)` given as a scalar series on the same lattice.
    pub fn substitute_symbol(&self, branch: &ESeries) -> Result<ESeries> {
        self.check_lattice(branch)?;
        let mut out = ESeries::new(self.lattice_step.clone(), self.symbol, self.trunc);
        for (&k, p) in &self.terms {
            // evaluate p at the branch series, multiply by x^(k*step)
            let mut acc = ESeries::new(self.lattice_step.clone(), self.symbol, self.trunc - k);
            for c in p.coeffs().iter().rev() {
                acc = acc.mul(&branch.truncate(self.trunc - k))?;
                acc.trunc = self.trunc - k;
                if c.cmp0() != std::cmp::Ordering::Equal {
                    let cur = acc.terms.remove(&0).unwrap_or_else(|| Poly::zero(acc.symbol));
                    let sum = cur.add(&Poly::constant(acc.symbol, c.clone()));
                    if !sum.is_zero() {
                        acc.terms.insert(0, sum);
                    }
                }
            }
            out = out.add(&acc.shift(k, &rat(1)))?;
            out.trunc = self.trunc;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        let dto = SeriesDto {
            lattice_step: rat_string(&self.lattice_step),
            terms: self
                .terms
                .iter()
                .map(|(&k, p)| TermDto {
                    k,
                    poly: p.coeffs().iter().map(rat_string).collect(),
                })
                .collect(),
            truncation: self.trunc,
        };
        serde_json::to_string(&dto).expect("series serialization cannot fail")
    }

    pub fn from_json(symbol: Symbol, json: &str) -> Result<ESeries> {
        let dto: SeriesDto = serde_json::from_str(json)?;
        let mut out = ESeries::new(parse_rat(&dto.lattice_step)?, symbol, dto.truncation);
        for t in dto.terms {
            let coeffs = t.poly.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>>>()?;
            out.set_coeff(t.k, Poly::new(symbol, coeffs));
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesDto {
    lattice_step: String,
    terms: Vec<TermDto>,
    truncation: i64,
}

#[derive(Serialize, Deserialize)]
struct TermDto {
    k: i64,
    poly: Vec<String>,
}

impl fmt::Display for ESeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, (k, p)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "[{p}] * x^({}*{})", k, rat_string(&self.lattice_step))?;
        }
        write!(f, " + O(x^{})", self.trunc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::ratio;

    fn scalar_series(pairs: &[(i64, (i64, i64))], trunc: i64) -> ESeries {
        let mut s = ESeries::integer_lattice(Symbol::Energy, trunc);
        for &(k, (n, d)) in pairs {
            s.set_scalar(k, ratio(n, d));
        }
        s
    }

    #[test]
    fn difference_of_squares() {
        let a = scalar_series(&[(0, (1, 1)), (1, (1, 1))], 3);
        let b = scalar_series(&[(0, (1, 1)), (1, (-1, 1))], 3);
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod, scalar_series(&[(0, (1, 1)), (2, (-1, 1))], 3));
    }

    #[test]
    fn laurent_head_addition() {
        // 2/(15 g) + (77/32) g on the integer lattice
        let head = scalar_series(&[(-1, (2, 15))], 2);
        let tail = scalar_series(&[(1, (77, 32))], 2);
        let sum = head.add(&tail).unwrap();
        assert_eq!(sum.coeff(-1), Poly::constant(Symbol::Energy, ratio(2, 15)));
        assert_eq!(sum.coeff(1), Poly::constant(Symbol::Energy, ratio(77, 32)));
        assert_eq!(sum.valuation(), -1);
    }

    #[test]
    fn mul_truncation_min_rule() {
        let a = scalar_series(&[(0, (1, 1)), (1, (2, 1))], 4);
        let b = scalar_series(&[(0, (1, 1)), (1, (5, 1))], 2);
        assert_eq!(a.mul(&b).unwrap().truncation(), 2);
    }

    #[test]
    fn lattice_mismatch_is_an_error() {
        let a = scalar_series(&[(0, (1, 1))], 3);
        let mut b = ESeries::new(ratio(1, 2), Symbol::Energy, 3);
        b.set_scalar(0, rat(1));
        assert!(matches!(a.add(&b), Err(Error::LatticeMismatch { .. })));
    }

    #[test]
    fn exp_composed_with_linear_term() {
        // exp(c g) to order 2 -> 1 + c g + c^2 g^2 / 2 with c = 3
        let s = scalar_series(&[(1, (3, 1))], 3);
        let e = s.exp().unwrap();
        assert_eq!(e.coeff(0).coeff(0), rat(1));
        assert_eq!(e.coeff(1).coeff(0), rat(3));
        assert_eq!(e.coeff(2).coeff(0), ratio(9, 2));
    }

    #[test]
    fn geometric_compose() {
        // (1+x)^{-1} = 1 - x + x^2 - ... composed with g + g^2 to order 3:
        // 1 - (g+g^2) + (g+g^2)^2 - ... = 1 - g - g^2 + g^2 + O(g^3) = 1 - g + O(g^3)
        let outer = scalar_series(&[(0, (1, 1)), (1, (-1, 1)), (2, (1, 1))], 3);
        let inner = scalar_series(&[(1, (1, 1)), (2, (1, 1))], 3);
        let c = ESeries::compose(&outer, &inner).unwrap();
        assert_eq!(c.coeff(0).coeff(0), rat(1));
        assert_eq!(c.coeff(1).coeff(0), rat(-1));
        assert_eq!(c.coeff(2).coeff(0), rat(0));
    }

    #[test]
    fn reverse_quadratic() {
        // y = x + a x^2  =>  x = y - a y^2 + 2 a^2 y^3 - 5 a^3 y^4 + ...
        let a = ratio(3, 7);
        let mut s = ESeries::integer_lattice(Symbol::Energy, 5);
        s.set_scalar(1, rat(1));
        s.set_scalar(2, a.clone());
        let r = s.reverse().unwrap();
        assert_eq!(r.coeff(1).coeff(0), rat(1));
        assert_eq!(r.coeff(2).coeff(0), Rational::from(-a.clone()));
        assert_eq!(r.coeff(3).coeff(0), Rational::from(2) * Rational::from(&a * &a));
        // round trip
        let id = ESeries::compose(&s, &r).unwrap();
        assert_eq!(id.coeff(1).coeff(0), rat(1));
        for k in 2..5 {
            assert!(id.coeff(k).is_zero(), "k = {k}: {}", id.coeff(k));
        }
        assert!(matches!(
            scalar_series(&[(2, (1, 1))], 4).reverse(),
            Err(Error::VanishingLinearCoefficient)
        ));
    }

    #[test]
    fn eval_numeric_cases() {
        let p = Prec::default();
        // constant 1/2
        let s = scalar_series(&[(0, (1, 2))], 5);
        let (v, _) = s.eval_numeric(&p.real_from_f64(1.7), p, false).unwrap();
        assert!((v.re.to_f64() - 0.5).abs() < 1e-30 && v.im.is_zero());

        // 2/(15 g) at g = 0.01 -> 13.333...
        let s = scalar_series(&[(-1, (2, 15))], 2);
        let (v, _) = s.eval_numeric(&p.real_from_f64(0.01), p, false).unwrap();
        assert!((v.re.to_f64() - 2.0 / 0.15).abs() < 1e-12);

        // 1/2 + 3/4 g - 21/8 g^2 at g = 0.1 -> 0.54875
        let s = scalar_series(&[(0, (1, 2)), (1, (3, 4)), (2, (-21, 8))], 3);
        let (v, last) = s.eval_numeric(&p.real_from_f64(0.1), p, false).unwrap();
        assert!((v.re.to_f64() - 0.54875).abs() < 1e-15);
        assert!((last.to_f64() - 0.02625).abs() < 1e-15);

        // negative g on a fractional lattice needs the branch flag
        let mut s = ESeries::new(ratio(1, 2), Symbol::Energy, 3);
        s.set_scalar(1, rat(1));
        let g = p.real_from_f64(-0.25);
        assert!(matches!(s.eval_numeric(&g, p, false), Err(Error::BranchRequired)));
        let (v, _) = s.eval_numeric(&g, p, true).unwrap();
        // (-0.25)^(1/2) on the upper branch = 0.5 i
        assert!(v.re.clone().abs().to_f64() < 1e-30);
        assert!((v.im.to_f64() - 0.5).abs() < 1e-30);
    }

    #[test]
    fn json_round_trip_bit_exact() {
        let mut s = ESeries::new(ratio(1, 5), Symbol::Energy, 7);
        s.set_coeff(-1, Poly::constant(Symbol::Energy, ratio(2, 15)));
        s.set_coeff(3, Poly::new(Symbol::Energy, vec![ratio(180675, 2048), rat(0), ratio(444381, 512)]));
        let j = s.to_json();
        let back = ESeries::from_json(Symbol::Energy, &j).unwrap();
        assert_eq!(s, back);
        assert_eq!(j, back.to_json());
    }
}
