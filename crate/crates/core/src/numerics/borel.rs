//! Directional Borel-Pade summation of factorially divergent series.
//!
//! The Borel transform divides coefficient K by (beta K)!, where beta is
//! the Gamma-growth index of the series (so the nearest Borel-plane
//! singularity sits at the instanton action, the best-conditioned spot for
//! Pade). The transform is rationally exact, the Pade denominator system is
//! solved in exact arithmetic, and only the final Laplace integral along
//! the requested ray is floating point. A Pade pole sitting on the ray is
//! detected by sampling and handled by a small documented ray deflection.

use crate::algebra::float::{Cplx, Prec, Real};
use crate::algebra::quad::semi_infinite_cplx;
use crate::algebra::rat::{factorial, rat, Rational};
use crate::error::{Error, Result};

/// Result of a directional Borel-Pade summation.
#[derive(Debug, Clone)]
pub struct BorelSum {
    pub value: Cplx,
    /// Stability estimate: change of the value under removing the last two
    /// input coefficients (Pade order -1).
    pub error: f64,
    pub beta: u32,
    /// Requested ray angle (radians).
    pub direction: f64,
    /// Extra angle actually applied to dodge a Pade pole on the ray;
    /// zero when the requested ray was clean.
    pub deflection: f64,
    /// Pade numerator/denominator degrees used.
    pub pade: (usize, usize),
}

/// Rational Pade approximant [L/M] of a power series, exact arithmetic.
struct PadeApprox {
    num: Vec<Rational>,
    den: Vec<Rational>,
}

impl PadeApprox {
    fn eval(&self, t: &Cplx, prec: Prec) -> Cplx {
        (horner(&self.num, t, prec)).div(&horner(&self.den, t, prec))
    }

}

fn horner(coeffs: &[Rational], t: &Cplx, prec: Prec) -> Cplx {
    let mut acc = Cplx::zero(prec);
    for c in coeffs.iter().rev() {
        acc = acc.mul(t).add(&Cplx::from_real(prec.real_from_rat(c)));
    }
    acc
}

/// Exact [L/M] Pade of the series with the given coefficients; on a
/// singular denominator system the denominator degree is lowered until the
/// system solves (degenerate Pade-table blocks).
fn pade(series: &[Rational], mut m: usize) -> PadeApprox {
    loop {
        let l = series.len() - 1 - m;
        if m == 0 {
            return PadeApprox { num: series[..=l].to_vec(), den: vec![rat(1)] };
        }
        // sum_{j=1..M} q_j b_{L+i-j} = -b_{L+i}, i = 1..M, b_k = 0 for k < 0
        let b = |k: i64| -> Rational {
            if k < 0 {
                rat(0)
            } else {
                series[k as usize].clone()
            }
        };
        let mut aug: Vec<Vec<Rational>> = (1..=m)
            .map(|i| {
                let mut row: Vec<Rational> = (1..=m)
                    .map(|j| b(l as i64 + i as i64 - j as i64))
                    .collect();
                row.push(-b(l as i64 + i as i64));
                row
            })
            .collect();
        if let Some(q) = solve_exact(&mut aug) {
            let mut den = vec![rat(1)];
            den.extend(q);
            let num: Vec<Rational> = (0..=l)
                .map(|i| {
                    let mut p = rat(0);
                    for (j, qj) in den.iter().enumerate().take(i + 1) {
                        p += Rational::from(qj * &b(i as i64 - j as i64));
                    }
                    p
                })
                .collect();
            return PadeApprox { num, den };
        }
        m -= 1;
    }
}

/// Exact Gaussian elimination on an augmented system; None when singular.
fn solve_exact(aug: &mut [Vec<Rational>]) -> Option<Vec<Rational>> {
    let n = aug.len();
    for col in 0..n {
        let pivot_row = (col..n).find(|&r| aug[r][col] != 0)?;
        aug.swap(col, pivot_row);
        let piv = aug[col][col].clone();
        for r in col + 1..n {
            if aug[r][col] == 0 {
                continue;
            }
            let f = Rational::from(&aug[r][col] / &piv);
            for c in col..=n {
                let sub = Rational::from(&f * &aug[col][c]);
                aug[r][c] -= sub;
            }
        }
    }
    let mut x = vec![rat(0); n];
    for row in (0..n).rev() {
        let mut acc = aug[row][n].clone();
        for c in row + 1..n {
            acc -= Rational::from(&aug[row][c] * &x[c]);
        }
        x[row] = acc / &aug[row][row];
    }
    Some(x)
}

fn laplace(
    approx: &PadeApprox,
    beta: u32,
    phi: f64,
    g: &Real,
    prec: Prec,
) -> Result<Cplx> {
    let bits = prec.bits();
    let angle = prec.real_from_f64(phi);
    let (sin, cos) = angle.sin_cos(Real::new(bits));
    let ray = Cplx::new(cos, sin); // e^{i phi}
    let g_c = Cplx::from_real(g.clone());
    let tol = Real::with_val(bits, prec.eps() * prec.real_from_f64(1e6));
    let approx = PadeApprox { num: approx.num.clone(), den: approx.den.clone() };
    let integrand = move |s: &Real| -> Cplx {
        let u = ray.mul_real(s); // integration variable along the ray
        let mut t = g_c.clone();
        for _ in 0..beta {
            t = t.mul(&u);
        }
        let r = approx.eval(&t, prec);
        let damp = u.neg().exp();
        r.mul(&damp).mul(&ray)
    };
    let (value, _err) = semi_infinite_cplx(integrand, prec, &tol)?;
    Ok(value)
}

/// Denominator roots in f64 by Durand-Kerner iteration; accuracy only has
/// to support the pole-vs-ray angular test.
fn den_roots(approx: &PadeApprox, prec: Prec) -> Vec<(f64, f64)> {
    // normalize through Real so huge rational coefficients survive to f64
    let reals: Vec<Real> = approx.den.iter().map(|c| prec.real_from_rat(c)).collect();
    let mut top = prec.zero();
    for r in &reals {
        let a = r.clone().abs();
        if a > top {
            top = a;
        }
    }
    if top.is_zero() {
        return Vec::new();
    }
    let mut c: Vec<f64> = reals.iter().map(|r| (r.clone() / &top).to_f64()).collect();
    while c.last().is_some_and(|v| v.abs() < 1e-300) {
        c.pop();
    }
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    let lead = c[deg];
    for v in c.iter_mut() {
        *v /= lead;
    }
    let cmul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let poly = |z: (f64, f64)| -> (f64, f64) {
        let mut acc = (0.0, 0.0);
        for k in (0..=deg).rev() {
            acc = cmul(acc, z);
            acc.0 += c[k];
        }
        acc
    };
    // initial guesses on a slightly irrational spiral
    let mut roots: Vec<(f64, f64)> = (0..deg)
        .map(|k| {
            let ang = 0.4 + 2.0 * std::f64::consts::PI * k as f64 / deg as f64;
            let rad = 0.7 + 0.05 * k as f64;
            (rad * ang.cos(), rad * ang.sin())
        })
        .collect();
    for _ in 0..200 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let zi = roots[i];
            let mut denom = (1.0, 0.0);
            for (j, zj) in roots.iter().enumerate() {
                if j != i {
                    denom = cmul(denom, (zi.0 - zj.0, zi.1 - zj.1));
                }
            }
            let p = poly(zi);
            let d2 = denom.0 * denom.0 + denom.1 * denom.1;
            if d2 < 1e-280 {
                continue;
            }
            let step = (
                (p.0 * denom.0 + p.1 * denom.1) / d2,
                (p.1 * denom.0 - p.0 * denom.1) / d2,
            );
            roots[i] = (zi.0 - step.0, zi.1 - step.1);
            moved = moved.max(step.0.hypot(step.1));
        }
        if moved < 1e-10 {
            break;
        }
    }
    roots
}

/// True when a Pade pole sits on (or hugs) the Laplace ray: the t-plane
/// image of the ray has angle arg(g) + beta*phi, and any pole within the
/// e^{-s} support window and within a small angular margin of that ray
/// spoils the integral.
fn pole_on_ray(roots: &[(f64, f64)], beta: u32, phi: f64, g: f64, prec: Prec) -> bool {
    let s_max = 3.0 * prec.digits as f64; // beyond e^{-s} support
    let t_max = g.abs() * s_max.powi(beta as i32);
    let ray_angle = if g < 0.0 { std::f64::consts::PI } else { 0.0 } + beta as f64 * phi;
    let margin = 0.03 * beta.max(1) as f64;
    roots.iter().any(|&(re, im)| {
        let r = re.hypot(im);
        if r < 1e-12 || r > 1.3 * t_max {
            return false;
        }
        let mut d = (im.atan2(re) - ray_angle) % (2.0 * std::f64::consts::PI);
        if d > std::f64::consts::PI {
            d -= 2.0 * std::f64::consts::PI;
        }
        if d < -std::f64::consts::PI {
            d += 2.0 * std::f64::consts::PI;
        }
        d.abs() < margin
    })
}

/// Directional Borel-Pade sum of `sum_K c_K g^K` with Borel power `beta`
/// and Laplace ray at angle `direction`.
pub fn borel_pade(
    coeffs: &[Rational],
    beta: u32,
    direction: f64,
    g: &Real,
    prec: Prec,
) -> Result<BorelSum> {
    if coeffs.len() < 12 {
        return Err(Error::TooFewCoefficients { min: 12, got: coeffs.len() });
    }
    let sum_with = |take: usize, phi: f64| -> Result<(Cplx, (usize, usize))> {
        let series: Vec<Rational> = coeffs[..take]
            .iter()
            .enumerate()
            .map(|(k, c)| Rational::from(c / &Rational::from(factorial(beta * k as u32))))
            .collect();
        let m = (take - 1) / 2;
        let approx = pade(&series, m);
        let value = laplace(&approx, beta, phi, g, prec)?;
        Ok((value, (approx.num.len() - 1, approx.den.len() - 1)))
    };
    // choose the ray: requested direction, deflected if a pole sits on it
    let full_series: Vec<Rational> = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| Rational::from(c / &Rational::from(factorial(beta * k as u32))))
        .collect();
    let probe = pade(&full_series, (coeffs.len() - 1) / 2);
    let roots = den_roots(&probe, prec);
    let gf = g.to_f64();
    let mut deflection = 0.0;
    for cand in [0.0, 0.05, -0.05, 0.12, -0.12] {
        if !pole_on_ray(&roots, beta, direction + cand, gf, prec) {
            deflection = cand;
            break;
        }
    }
    let phi = direction + deflection;
    let (value, pade_used) = sum_with(coeffs.len(), phi)?;
    let (value_lower, _) = sum_with(coeffs.len() - 2, phi)?;
    let error = value.sub(&value_lower).abs().to_f64();
    Ok(BorelSum {
        value,
        error,
        beta,
        direction,
        deflection,
        pade: pade_used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::ratio;

    const P: Prec = Prec { digits: 40 };

    #[test]
    fn geometric_series_sums_exactly() {
        // sum (-1)^K g^K = 1/(1+g): Borel transform e^{-t}; accuracy is set
        // by how well the Pade approximant tracks e^{-t} over the Laplace
        // support, which sharpens rapidly with the coefficient count
        let coeffs: Vec<Rational> = (0..32).map(|k| rat(if k % 2 == 0 { 1 } else { -1 })).collect();
        let g = P.real_from_f64(0.3);
        let s = borel_pade(&coeffs, 1, 0.0, &g, P).unwrap();
        let expect = 1.0 / 1.3;
        assert!((s.value.re.to_f64() - expect).abs() < 1e-15, "re = {}", s.value.re);
        assert!(s.value.im.to_f64().abs() < s.error.max(1e-25));
        assert_eq!(s.deflection, 0.0);
    }

    #[test]
    fn rejects_short_input() {
        let coeffs: Vec<Rational> = (0..8).map(|_| rat(1)).collect();
        let g = P.real_from_f64(0.1);
        assert!(matches!(
            borel_pade(&coeffs, 1, 0.0, &g, P),
            Err(Error::TooFewCoefficients { min: 12, got: 8 })
        ));
    }

    #[test]
    fn pade_reproduces_rational_function() {
        // series of 1/(1 - t/2): Pade [_/1] must recover it exactly
        let series: Vec<Rational> = (0..10u32)
            .map(|k| ratio(1, 2i64.pow(k)))
            .collect();
        let approx = pade(&series, 4);
        let t = Cplx::new(P.real_from_f64(0.37), P.real_from_f64(-0.2));
        let got = approx.eval(&t, P);
        let expect = Cplx::one(P).sub(&t.mul_real(&P.real_from_f64(0.5)));
        let err = got.mul(&expect).sub(&Cplx::one(P)).abs();
        assert!(err.to_f64() < 1e-30, "err = {err}");
    }

    #[test]
    fn lateral_sum_recovers_cubic_width() {
        // upper-ray lateral sum at cubic n=0: Im equals the (one-sided)
        // leading width times the first correction brace; reflected ray
        // flips the sign
        use crate::instanton::width_leading;
        use crate::rspt::{rspt_coeffs, OscillatorSpec};
        let s3 = OscillatorSpec::new(3).unwrap();
        let table = rspt_coeffs(s3, 0, 36);
        let g = P.real_from_f64(0.004);
        let lead = width_leading(&s3, 0, &g, P).unwrap().to_f64();
        let brace = 1.0 - 169.0 / 16.0 * 0.004;
        let up = borel_pade(&table.coeffs, 1, std::f64::consts::FRAC_PI_4, &g, P).unwrap();
        let ratio = up.value.im.to_f64() / (lead * brace);
        assert!((ratio - 1.0).abs() < 0.1, "im/width = {ratio}");
        let down = borel_pade(&table.coeffs, 1, -std::f64::consts::FRAC_PI_4, &g, P).unwrap();
        let flip = down.value.im.to_f64() / up.value.im.to_f64();
        assert!((flip + 1.0).abs() < 1e-6, "reflected ray ratio {flip}");
        // real parts of the two lateral sums agree (common principal value)
        assert!((up.value.re.to_f64() - down.value.re.to_f64()).abs() < 1e-12);
    }

    #[test]
    fn same_sign_series_deflects_off_real_ray() {
        // sum K! g^K has its Borel singularity at t = 1 on the ray
        let coeffs: Vec<Rational> = (0..20u32).map(|k| Rational::from(factorial(k))).collect();
        let g = P.real_from_f64(0.05);
        let s = borel_pade(&coeffs, 1, 0.0, &g, P).unwrap();
        assert!(s.deflection != 0.0, "expected a documented ray deflection");
        // lateral sum of the Euler series: real part near the principal value
        // int e^{-u}/(1-gu) du; crude sanity band
        assert!((s.value.re.to_f64() - 1.055).abs() < 0.05, "re = {}", s.value.re);
        assert!(s.value.im.to_f64().abs() > 1e-18);
    }
}
