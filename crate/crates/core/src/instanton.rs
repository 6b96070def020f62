//! Instanton world-line profiles, Euclidean actions, and leading decay
//! widths for even and odd oscillators.
//!
//! The scaled profile is chi(t) = {1 + cosh[(m-2)(t-t0)]}^{-1/(m-2)} with
//! t0 a free collective coordinate. Its Euclidean action
//! S = int (chi'^2/2 + chi^2/2 - chi^m) dt has the closed form
//! A(m) = 2^{2/(m-2)} B(m/(m-2), m/(m-2)); both are computed and
//! cross-checked. Leading widths carry the parity-dependent normalization
//! (an extra global 1/2 in the odd case).

use rug::ops::Pow;

use crate::algebra::float::{Prec, Real};
use crate::algebra::gamma::beta_real;
use crate::algebra::quad::tanh_sinh;
use crate::algebra::rat::{factorial, Rational};
use crate::error::{Error, Result};
use crate::rspt::{OscillatorSpec, Parity};

/// Classical instanton configuration of degree `m` centered at `t0`. The
/// `branch` distinguishes the two parity-related solutions of the even
/// case; it must be +1 for odd degree.
#[derive(Debug, Clone)]
pub struct InstantonProfile {
    pub m: u32,
    pub t0: f64,
    pub branch: i8,
}

impl InstantonProfile {
    pub fn new(m: u32, t0: f64, branch: i8) -> Result<Self> {
        if m < 3 {
            return Err(Error::Invalid(format!("degree {m} < 3")));
        }
        let even = m % 2 == 0;
        match branch {
            1 => {}
            -1 if even => {}
            _ => {
                return Err(Error::Invalid(format!(
                    "branch {branch} invalid for degree {m} (even degrees admit +1/-1, odd only +1)"
                )))
            }
        }
        Ok(InstantonProfile { m, t0, branch })
    }

    /// Unit-amplitude profile chi(t) = {1 + cosh[(m-2)(t-t0)]}^{-1/(m-2)}.
    pub fn chi(&self, t: &Real, prec: Prec) -> Real {
        chi_scaled(self.m, &Real::with_val(prec.bits(), t - &prec.real_from_f64(self.t0)), prec)
    }

    /// Analytic time derivative of `chi`.
    pub fn chi_dot(&self, t: &Real, prec: Prec) -> Real {
        chi_dot_scaled(self.m, &Real::with_val(prec.bits(), t - &prec.real_from_f64(self.t0)), prec)
    }

    /// Full classical solution including the coupling-dependent amplitude:
    /// even degree N: branch * (-g)^{-2/(N-2)} * chi (requires g < 0);
    /// odd degree M: g^{-1/(M-2)} * chi (requires g > 0).
    pub fn profile_eval(&self, t: &Real, g: &Real, prec: Prec) -> Result<Real> {
        let rho = self.m as i64 - 2;
        let amplitude = if self.m % 2 == 0 {
            if g.cmp0() != Some(std::cmp::Ordering::Less) {
                return Err(Error::WrongRegime { m: self.m, g: g.to_f64(), regime: "g < 0" });
            }
            let base = Real::with_val(prec.bits(), -g.clone());
            let e = prec.real_from_i64(-2) / prec.real_from_i64(rho);
            Real::with_val(prec.bits(), base.pow(&e)) * prec.real_from_i64(self.branch as i64)
        } else {
            if g.cmp0() != Some(std::cmp::Ordering::Greater) {
                return Err(Error::WrongRegime { m: self.m, g: g.to_f64(), regime: "g > 0" });
            }
            let e = prec.real_from_i64(-1) / prec.real_from_i64(rho);
            Real::with_val(prec.bits(), g.clone().pow(&e))
        };
        Ok(amplitude * self.chi(t, prec))
    }
}

fn chi_scaled(m: u32, tau: &Real, prec: Prec) -> Real {
    let bits = prec.bits();
    let rho = prec.real_from_i64(m as i64 - 2);
    let u = Real::with_val(bits, Real::with_val(bits, tau * &rho).cosh()) + 1u32;
    let e = prec.real_from_i64(-1) / rho;
    u.pow(&e)
}

fn chi_dot_scaled(m: u32, tau: &Real, prec: Prec) -> Real {
    // d/dt u^{-1/rho} = -sinh(rho tau) u^{-1/rho - 1}, u = 1 + cosh(rho tau)
    let bits = prec.bits();
    let rho = prec.real_from_i64(m as i64 - 2);
    let arg = Real::with_val(bits, tau * &rho);
    let u = Real::with_val(bits, arg.clone().cosh()) + 1u32;
    let e = prec.real_from_i64(-1) / rho - prec.one();
    -arg.sinh() * Real::with_val(bits, u.pow(&e))
}

/// The scaled potential U(chi) = chi^m - chi^2/2 in which the world line
/// moves (the inverted well of the Euclidean problem).
pub fn scaled_potential(m: u32, chi: &Real, prec: Prec) -> Real {
    let bits = prec.bits();
    let sq = Real::with_val(bits, chi.clone().square());
    Real::with_val(bits, chi.clone().pow(m)) - sq / 2u32
}

/// Closed-form instanton action A(m) = 2^{2/(m-2)} B(m/(m-2), m/(m-2)).
pub fn action_closed_form(m: u32, prec: Prec) -> Real {
    let bits = prec.bits();
    let rho = prec.real_from_i64(m as i64 - 2);
    let a = prec.real_from_u32(m) / &rho;
    let two_pow = Real::with_val(bits, prec.real_from_u32(2).pow(&(prec.real_from_u32(2) / &rho)));
    two_pow * beta_real(&a, &a)
}

/// Prefactor constant C(m) = 2^{2/(m-2)}.
pub fn c_constant(m: u32, prec: Prec) -> Real {
    let rho = prec.real_from_i64(m as i64 - 2);
    Real::with_val(prec.bits(), prec.real_from_u32(2).pow(&(prec.real_from_u32(2) / rho)))
}

/// Euclidean action of the unit-amplitude profile by tanh-sinh quadrature
/// over a window sized from the cosh decay rate.
pub fn action_numeric(m: u32, t0: f64, prec: Prec) -> Result<Real> {
    let bits = prec.bits();
    // chi ~ 2^{1/(m-2)} e^{-|t-t0|}, so the integrand decays like e^{-2|t-t0|};
    // a half-width of (digits+8) ln 10 / 2 pushes the tail below tolerance
    let half_width = (prec.digits as f64 + 8.0) * std::f64::consts::LN_10 / 2.0;
    let a = prec.real_from_f64(t0 - half_width);
    let b = prec.real_from_f64(t0 + half_width);
    let tol = Real::with_val(bits, prec.eps() * 1e6);
    let integrand = |t: &Real| {
        let tau = Real::with_val(bits, t - &prec.real_from_f64(t0));
        let chi = chi_scaled(m, &tau, prec);
        let dchi = chi_dot_scaled(m, &tau, prec);
        let kinetic = Real::with_val(bits, dchi.square()) / 2u32;
        let quad = Real::with_val(bits, chi.clone().square()) / 2u32;
        kinetic + quad - chi.pow(m)
    };
    let (value, _err) = tanh_sinh(integrand, &a, &b, prec, &tol)?;
    Ok(value)
}

/// Closed-form and quadrature values of the action together with C(m).
#[derive(Debug, Clone)]
pub struct ActionPair {
    pub m: u32,
    pub closed_form: Real,
    pub numeric: Real,
    pub c_m: Real,
}

impl ActionPair {
    pub fn compute(m: u32, prec: Prec) -> Result<Self> {
        Ok(ActionPair {
            m,
            closed_form: action_closed_form(m, prec),
            numeric: action_numeric(m, 0.0, prec)?,
            c_m: c_constant(m, prec),
        })
    }
}

/// Leading-order decay width (imaginary part of the resonance energy):
/// even degree N, g < 0:
///   -(1/(n! sqrt(2 pi))) (2 C(N) (-g)^{-2/(N-2)})^{n+1/2}
///     exp(-A(N) (-g)^{-2/(N-2)});
/// odd degree M, g > 0: same with a global extra 1/2 and exponent
/// 1/(M-2) on the coupling.
pub fn width_leading(spec: &OscillatorSpec, n: u32, g: &Real, prec: Prec) -> Result<Real> {
    let bits = prec.bits();
    let m = spec.degree();
    // inverse lattice variable 1/x: (-g)^{-2/(N-2)} or g^{-1/(M-2)}
    let inv_x = match spec.parity() {
        Parity::Even => {
            if g.cmp0() != Some(std::cmp::Ordering::Less) {
                return Err(Error::WrongRegime { m, g: g.to_f64(), regime: "g < 0" });
            }
            let e = prec.real_from_i64(-2) / prec.real_from_i64(m as i64 - 2);
            Real::with_val(bits, Real::with_val(bits, -g.clone()).pow(&e))
        }
        Parity::Odd => {
            if g.cmp0() != Some(std::cmp::Ordering::Greater) {
                return Err(Error::WrongRegime { m, g: g.to_f64(), regime: "g > 0" });
            }
            let e = prec.real_from_i64(-1) / prec.real_from_i64(m as i64 - 2);
            Real::with_val(bits, g.clone().pow(&e))
        }
    };
    let two_pi = prec.pi() * 2u32;
    let mut pref = prec.one() / (prec.real_from_rat(&Rational::from(factorial(n))) * Real::with_val(bits, two_pi.sqrt()));
    if spec.parity() == Parity::Odd {
        pref /= 2u32;
    }
    let base = c_constant(m, prec) * 2u32 * &inv_x;
    let e = prec.real_from_i64(2 * n as i64 + 1) / 2u32;
    let power = Real::with_val(bits, base.pow(&e));
    let decay = Real::with_val(bits, -action_closed_form(m, prec) * &inv_x).exp();
    Ok(-pref * power * decay)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: Prec = Prec { digits: 40 };

    #[test]
    fn closed_form_matches_known_values() {
        // A(3) = 2/15, A(4) = 1/3, A(6) = pi 2^{-5/2}
        let a3 = action_closed_form(3, P);
        assert!((a3 - P.real_from_rat(&crate::algebra::rat::ratio(2, 15))).abs().to_f64() < 1e-35);
        let a4 = action_closed_form(4, P);
        assert!((a4 - P.real_from_rat(&crate::algebra::rat::ratio(1, 3))).abs().to_f64() < 1e-35);
        let a6 = action_closed_form(6, P);
        let expect = P.pi() / P.real_from_f64(2.0f64).pow(P.real_from_f64(2.5));
        assert!((a6 - expect).abs().to_f64() < 1e-35);
    }

    #[test]
    fn quadrature_agrees_with_closed_form() {
        for m in [3u32, 4, 6, 7] {
            let pair = ActionPair::compute(m, P).unwrap();
            let diff = Real::with_val(P.bits(), &pair.closed_form - &pair.numeric).abs();
            assert!(diff.to_f64() < 1e-30, "m = {m}, diff = {diff}");
        }
    }

    #[test]
    fn c_constant_special_values() {
        assert!((c_constant(3, P).to_f64() - 4.0).abs() < 1e-30);
        assert!((c_constant(4, P).to_f64() - 2.0).abs() < 1e-30);
        assert!(c_constant(6, P).to_f64() > 1.0);
    }

    #[test]
    fn action_independent_of_collective_coordinate() {
        let base = action_numeric(3, 0.0, P).unwrap();
        for t0 in [-1.5, 0.7, 3.0] {
            let shifted = action_numeric(3, t0, P).unwrap();
            assert!((base.clone() - shifted).abs().to_f64() < 1e-30);
        }
    }

    #[test]
    fn euler_lagrange_residual_vanishes() {
        // chi'' = chi - m chi^{m-1}, checked with an analytic second
        // derivative obtained from the first-derivative formula at
        // slightly shifted arguments would lose digits; instead use the
        // energy integral chi'^2 = chi^2 - 2 chi^m, equivalent for this
        // separatrix solution.
        for m in [3u32, 4, 6, 7] {
            for t in [-2.0, -0.3, 0.0, 1.1, 4.0] {
                let tau = P.real_from_f64(t);
                let chi = chi_scaled(m, &tau, P);
                let dchi = chi_dot_scaled(m, &tau, P);
                let lhs = Real::with_val(P.bits(), dchi.square());
                let rhs = Real::with_val(P.bits(), chi.clone().square())
                    - Real::with_val(P.bits(), chi.pow(m)) * 2u32;
                assert!((lhs - rhs).abs().to_f64() < 1e-35, "m = {m}, t = {t}");
            }
        }
    }

    #[test]
    fn profile_peak_values_and_regime_errors() {
        // odd m=3 at g=1, t=t0: (1 + cosh 0)^{-1} = 1/2
        let p3 = InstantonProfile::new(3, 0.0, 1).unwrap();
        let v = p3.profile_eval(&P.zero(), &P.one(), P).unwrap();
        assert!((v.to_f64() - 0.5).abs() < 1e-30);
        // even m=4, branch -1 at g=-1, t=t0: -(1 + cosh 0)^{-1/2}
        let p4 = InstantonProfile::new(4, 0.0, -1).unwrap();
        let v = p4.profile_eval(&P.zero(), &P.real_from_f64(-1.0), P).unwrap();
        assert!((v.to_f64() + 0.5f64.sqrt()).abs() < 1e-15);
        // decay at infinity
        let far = p3.profile_eval(&P.real_from_f64(80.0), &P.one(), P).unwrap();
        assert!(far.to_f64() < 1e-30);
        // regime errors
        assert!(p3.profile_eval(&P.zero(), &P.real_from_f64(-1.0), P).is_err());
        assert!(p4.profile_eval(&P.zero(), &P.one(), P).is_err());
        // odd degree rejects the negative branch
        assert!(InstantonProfile::new(3, 0.0, -1).is_err());
    }

    #[test]
    fn branch_symmetry_of_even_action() {
        // both branches give the same action because only even powers of
        // the profile enter the integrand
        let plus = InstantonProfile::new(4, 0.0, 1).unwrap();
        let minus = InstantonProfile::new(4, 0.0, -1).unwrap();
        let g = P.real_from_f64(-0.2);
        for t in [-1.0, 0.0, 2.0] {
            let t = P.real_from_f64(t);
            let a = plus.profile_eval(&t, &g, P).unwrap();
            let b = minus.profile_eval(&t, &g, P).unwrap();
            assert!((a + b).abs().to_f64() < 1e-30);
        }
    }

    #[test]
    fn cubic_width_reduces_to_known_prefactor() {
        // odd M=3, n=1: -(8/sqrt(pi)) g^{-3/2} exp(-2/(15 g))
        let spec = OscillatorSpec::new(3).unwrap();
        for gv in [0.02, 0.05] {
            let g = P.real_from_f64(gv);
            let got = width_leading(&spec, 1, &g, P).unwrap();
            let expect = -P.real_from_u32(8) / P.pi().sqrt()
                * Real::with_val(P.bits(), g.clone().pow(P.real_from_f64(-1.5)))
                * Real::with_val(
                    P.bits(),
                    -P.real_from_rat(&crate::algebra::rat::ratio(2, 15)) / &g,
                )
                .exp();
            let rel = Real::with_val(P.bits(), &got - &expect).abs() / expect.abs();
            assert!(rel.to_f64() < 1e-30, "g = {gv}");
        }
    }

    #[test]
    fn width_log_slope_recovers_action() {
        // after removing the known power-law prefactor, ln|width| is exactly
        // linear in g^{-1/(m-2)} with slope -A(m)
        let spec = OscillatorSpec::new(7).unwrap();
        let p = Prec::new(60);
        let f = |gv: f64| -> (f64, f64) {
            let g = p.real_from_f64(gv);
            let w = width_leading(&spec, 0, &g, p).unwrap();
            let x = Real::with_val(p.bits(), g.pow(p.real_from_f64(-0.2)));
            let power = Real::with_val(p.bits(), (c_constant(7, p) * 2u32 * &x).ln()) / 2u32;
            let lw = w.abs().ln() - power;
            (x.to_f64(), lw.to_f64())
        };
        let (x1, l1) = f(1e-6);
        let (x2, l2) = f(2e-6);
        let slope = (l2 - l1) / (x2 - x1);
        let a7 = action_closed_form(7, p).to_f64();
        assert!((slope / -a7 - 1.0).abs() < 1e-4, "slope = {slope}, A = {a7}");
    }

    #[test]
    fn quartic_ground_width_direct_arithmetic() {
        let spec = OscillatorSpec::new(4).unwrap();
        let g = P.real_from_f64(-0.05);
        let got = width_leading(&spec, 0, &g, P).unwrap();
        // -(1/sqrt(2 pi)) (4/(-g))^{1/2} exp(-1/(3 (-g)))
        let minus_g = Real::with_val(P.bits(), -g.clone());
        let expect = -Real::with_val(P.bits(), P.real_from_u32(4) / &minus_g).sqrt()
            / (P.pi() * 2u32).sqrt()
            * Real::with_val(P.bits(), -P.one() / (minus_g * 3u32)).exp();
        let rel = Real::with_val(P.bits(), &got - &expect).abs() / expect.abs();
        assert!(rel.to_f64() < 1e-30);
    }
}
