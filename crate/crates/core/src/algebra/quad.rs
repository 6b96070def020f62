//! Tanh-sinh (double-exponential) quadrature at configurable precision.
//!
//! The abscissae x = tanh(pi/2 sinh t) cluster double-exponentially at the
//! interval ends, so smooth integrands with (integrable) endpoint behaviour
//! converge geometrically in the level number. Levels are doubled until two
//! successive estimates agree to the requested tolerance.

use super::float::{Cplx, Prec, Real};
use crate::error::{Error, Result};

/// Integrate `f` over the finite interval `(a, b)`. Returns the value and
/// an error estimate (the last level-to-level difference).
pub fn tanh_sinh<F>(f: F, a: &Real, b: &Real, prec: Prec, tol: &Real) -> Result<(Real, Real)>
where
    F: Fn(&Real) -> Real,
{
    let wrapped = |x: &Real| Cplx::from_real(f(x));
    let (v, e) = tanh_sinh_cplx(wrapped, a, b, prec, tol)?;
    Ok((v.re, e))
}

/// Complex-valued variant.
pub fn tanh_sinh_cplx<F>(f: F, a: &Real, b: &Real, prec: Prec, tol: &Real) -> Result<(Cplx, Real)>
where
    F: Fn(&Real) -> Cplx,
{
    let bits = prec.bits();
    let half = Real::with_val(bits, 0.5);
    let center = Real::with_val(bits, a + b) * &half;
    let scale = Real::with_val(bits, b - a) * &half;
    let pi_half = prec.pi() * &half;

    // t range: tanh(pi/2 sinh t_max) within eps of 1
    let eps_digits = prec.digits as f64 + 5.0;
    let t_max = ((2.0 / std::f64::consts::PI) * (eps_digits * std::f64::consts::LN_10 + 3.0))
        .asinh()
        + 0.5;

    let eval_at = |t: &Real| -> Option<(Cplx, Real)> {
        let s = Real::with_val(bits, t.clone().sinh()) * &pi_half;
        let ch = Real::with_val(bits, t.clone().cosh()) * &pi_half;
        let sech = Real::with_val(bits, s.clone().cosh());
        // weight = (pi/2) cosh t / cosh^2(pi/2 sinh t)
        let w = ch / Real::with_val(bits, sech.clone().square());
        if !w.is_finite() || w.is_zero() {
            return None;
        }
        let x = Real::with_val(bits, s.tanh());
        let point = Real::with_val(bits, &center + Real::with_val(bits, &scale * &x));
        // skip points that collapse onto an endpoint
        if point == *a || point == *b {
            return None;
        }
        let v = f(&point);
        if !v.is_finite() {
            return None;
        }
        Some((v, w))
    };

    let mut h = Real::with_val(bits, 1);
    let mut sum = Cplx::zero(prec);
    // level 0: coarse trapezoid over t in [-t_max, t_max]
    let n0 = t_max.ceil() as i64;
    for i in -n0..=n0 {
        let t = prec.real_from_i64(i);
        if let Some((v, w)) = eval_at(&t) {
            sum = sum.add(&v.mul_real(&w));
        }
    }
    let mut estimate = sum.mul_real(&h).mul_real(&scale);
    let mut err = estimate.abs();

    for _level in 1..=14 {
        h = Real::with_val(bits, &h * &half);
        // add midpoints of the previous grid: odd multiples of h
        let steps = (t_max / h.to_f64()).ceil() as i64;
        let mut i = 1;
        while i <= steps {
            let t = prec.real_from_i64(i) * &h;
            if let Some((v, w)) = eval_at(&t) {
                sum = sum.add(&v.mul_real(&w));
            }
            let tneg = -(prec.real_from_i64(i) * &h);
            if let Some((v, w)) = eval_at(&tneg) {
                sum = sum.add(&v.mul_real(&w));
            }
            i += 2;
        }
        let next = sum.mul_real(&h).mul_real(&scale);
        err = next.sub(&estimate).abs();
        estimate = next;
        let floor = Real::with_val(bits, estimate.abs().max(&prec.one()));
        if err < Real::with_val(bits, tol * &floor) {
            return Ok((estimate, err));
        }
    }
    Err(Error::QuadratureTolerance {
        tolerance: tol.to_f64(),
        achieved: (err / estimate.abs().max(&prec.one())).to_f64(),
    })
}

/// Integrate `f` over `(0, infinity)` through the substitution `s = e^y`,
/// truncating the window adaptively: the integrand must decay at both ends
/// (superexponentially at 0, at least like a positive power at infinity).
pub fn semi_infinite_cplx<F>(f: F, prec: Prec, tol: &Real) -> Result<(Cplx, Real)>
where
    F: Fn(&Real) -> Cplx,
{
    let bits = prec.bits();
    let g = |y: &Real| -> Cplx {
        let s = y.clone().exp();
        f(&s).mul_real(&s) // Jacobian ds = e^y dy
    };
    // expand the window until both endpoint integrand values are negligible
    let eps = prec.eps();
    let mut lo = -8.0f64;
    let mut hi = 8.0f64;
    for _ in 0..60 {
        let v = g(&prec.real_from_f64(lo)).abs();
        if v.is_finite() && v > eps {
            lo -= 6.0;
        } else {
            break;
        }
    }
    for _ in 0..60 {
        let v = g(&prec.real_from_f64(hi)).abs();
        if v.is_finite() && v > eps {
            hi += 6.0;
        } else {
            break;
        }
    }
    let a = Real::with_val(bits, lo);
    let b = Real::with_val(bits, hi);
    tanh_sinh_cplx(g, &a, &b, prec, tol)
}

#[cfg(test)]
mod tests {
    use rug::ops::Pow;

    use super::*;
    use crate::algebra::gamma::gamma_real;

    #[test]
    fn polynomial_exact() {
        let p = Prec::new(40);
        let tol = p.real_from_f64(1e-35);
        let (v, _) = tanh_sinh(|x| x.clone().square(), &p.zero(), &p.one(), p, &tol).unwrap();
        assert!((v.to_f64() - 1.0 / 3.0).abs() < 1e-30);
    }

    #[test]
    fn gaussian_integral() {
        let p = Prec::new(40);
        let tol = p.real_from_f64(1e-35);
        let a = p.real_from_f64(-12.0);
        let b = p.real_from_f64(12.0);
        let (v, _) = tanh_sinh(|x| (-x.clone().square()).exp(), &a, &b, p, &tol).unwrap();
        let sqrt_pi = p.pi().sqrt();
        assert!((v - sqrt_pi).abs().to_f64() < 1e-30);
    }

    #[test]
    fn semi_infinite_gamma_moment() {
        // int_0^inf s^3 e^{-s} ds = Gamma(4) = 6
        let p = Prec::new(40);
        let tol = p.real_from_f64(1e-30);
        let (v, _) = semi_infinite_cplx(
            |s| {
                let cube = Real::with_val(p.bits(), s.clone().pow(3u32));
                Cplx::from_real(cube * (-s.clone()).exp())
            },
            p,
            &tol,
        )
        .unwrap();
        let expect = gamma_real(&p.real_from_u32(4));
        assert!((v.re - expect).abs().to_f64() < 1e-25);
    }
}
