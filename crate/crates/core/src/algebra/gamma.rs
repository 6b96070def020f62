//! Gamma-family special functions at configurable precision.
//!
//! Real arguments go straight to MPFR. Complex arguments use the Stirling
//! asymptotic series with exact Bernoulli coefficients after an argument
//! shift into the asymptotic regime; arguments left of the imaginary axis
//! are mapped back by the reflection formula.

use std::sync::Mutex;

use once_cell::sync::Lazy;

use super::float::{Cplx, Prec, Real};
use super::rat::{binomial, rat, Rational};

/// Real gamma.
pub fn gamma_real(x: &Real) -> Real {
    x.clone().gamma()
}

/// Real log-gamma (x > 0). Used in log-domain large-order predictors where
/// the argument reaches several hundred.
pub fn ln_gamma_real(x: &Real) -> Real {
    x.clone().ln_gamma()
}

/// Digamma function psi(x).
pub fn digamma_real(x: &Real) -> Real {
    x.clone().digamma()
}

/// Euler beta function B(a, b).
pub fn beta_real(a: &Real, b: &Real) -> Real {
    let prec = a.prec();
    let ln = Real::with_val(prec, ln_gamma_real(a) + ln_gamma_real(b))
        - ln_gamma_real(&Real::with_val(prec, a + b));
    ln.exp()
}

static BERNOULLI: Lazy<Mutex<Vec<Rational>>> = Lazy::new(|| Mutex::new(vec![rat(1)]));

/// Exact Bernoulli number B_n (B_1 = -1/2 convention).
pub fn bernoulli(n: usize) -> Rational {
    let mut cache = BERNOULLI.lock().unwrap();
    while cache.len() <= n {
        let m = cache.len();
        // sum_{k=0}^{m} C(m+1, k) B_k = 0
        let mut acc = rat(0);
        for (k, b) in cache.iter().enumerate() {
            acc += Rational::from(b * &Rational::from(binomial(m as u32 + 1, k as u32)));
        }
        let val = -acc / Rational::from(binomial(m as u32 + 1, m as u32));
        cache.push(val);
    }
    cache[n].clone()
}

/// Complex gamma at precision `prec`, principal branch conventions
/// throughout.
pub fn gamma_cplx(z: &Cplx, prec: Prec) -> Cplx {
    let half = prec.real_from_f64(0.5);
    if z.re < half {
        // reflection: Gamma(z) = pi / (sin(pi z) Gamma(1 - z))
        let one_minus = Cplx::one(prec).sub(z);
        let g = gamma_cplx(&one_minus, prec);
        let pi = prec.pi();
        let pz = z.mul_real(&pi);
        let sin = sin_cplx(&pz, prec);
        return Cplx::from_real(pi).div(&sin.mul(&g));
    }
    ln_gamma_shifted(z, prec).exp()
}

/// log Gamma for Re(z) >= 1/2 via recurrence shift plus Stirling.
fn ln_gamma_shifted(z: &Cplx, prec: Prec) -> Cplx {
    // shift until |w| is comfortably inside the asymptotic regime
    let threshold = prec.digits as f64 * 0.4 + 12.0;
    let mut w = z.clone();
    let mut log_prod = Cplx::zero(prec);
    while w.abs().to_f64() < threshold {
        log_prod = log_prod.add(&w.ln());
        w = w.add(&Cplx::one(prec));
    }
    stirling_ln_gamma(&w, prec).sub(&log_prod)
}

fn stirling_ln_gamma(w: &Cplx, prec: Prec) -> Cplx {
    let half = prec.real_from_f64(0.5);
    let ln_w = w.ln();
    let two_pi = prec.pi() * 2u32;
    let mut acc = w
        .sub(&Cplx::from_real(half.clone()))
        .mul(&ln_w)
        .sub(w)
        .add(&Cplx::from_real(two_pi.ln() * &half));
    // sum B_2j / (2j (2j-1) w^(2j-1))
    let w_inv_sq = w.mul(w).inv();
    let mut pow = w.inv(); // w^{-(2j-1)}
    let eps = prec.eps();
    for j in 1..(prec.digits as usize + 40) {
        let b = bernoulli(2 * j);
        let denom = rat((2 * j) as i64) * Rational::from((2 * j - 1) as i64);
        let coeff = prec.real_from_rat(&Rational::from(b / denom));
        let term = pow.mul_real(&coeff);
        acc = acc.add(&term);
        if term.abs() < eps {
            break;
        }
        pow = pow.mul(&w_inv_sq);
    }
    acc
}

fn sin_cplx(z: &Cplx, prec: Prec) -> Cplx {
    // sin z = (e^{iz} - e^{-iz}) / 2i
    let iz = Cplx::new(-z.im.clone(), z.re.clone());
    let a = iz.exp();
    let b = iz.neg().exp();
    let diff = a.sub(&b);
    let two_i = Cplx::new(prec.zero(), prec.real_from_u32(2));
    diff.div(&two_i)
}
