//! Large-order asymptotics of the perturbation coefficients and the
//! dispersion-relation machinery connecting them to decay widths.
//!
//! The K-th coefficient is the K-th inverse-power moment of the width
//! along the unstable coupling axis. Substituting u = A(m)/|s|^{1/rho}
//! maps each moment onto a Gamma integral exactly, so the leading growth
//! and every 1/K correction inherited from the width series have closed
//! forms; numerical quadrature of the same moment is kept as an
//! independent verification path. All Gamma evaluations run in the log
//! domain because the arguments reach several hundred.

use crate::algebra::float::{Cplx, Prec, Real};
use crate::algebra::gamma::ln_gamma_real;
use crate::algebra::quad::semi_infinite_cplx;
use crate::error::{Error, Result};
use crate::instanton::{action_closed_form, c_constant};
use crate::quantize::WidthSeries;
use crate::rspt::{CoeffTable, OscillatorSpec, Parity};

fn ln_factorial(n: u32, prec: Prec) -> Real {
    ln_gamma_real(&prec.real_from_u32(n + 1))
}

/// Leading large-order growth for an even oscillator of degree `nn`:
/// (-1)^{K+1} (N-2) / (pi^{3/2} n! 2^{K+1-n})
///   * Gamma(sK + nu) * B(N/(N-2), N/(N-2))^{-sK - nu}
/// with s = (N-2)/2 and nu = n + 1/2.
pub fn leading_even(nn: u32, n: u32, k: u32, prec: Prec) -> Real {
    assert!(nn >= 4 && nn % 2 == 0, "leading_even needs even degree >= 4");
    let sign = if k % 2 == 0 { -1 } else { 1 };
    signed_leading(nn, n, k, sign, 1, prec)
}

/// Leading large-order growth for an odd oscillator of degree `m`:
/// (2-M) / (pi^{3/2} n! 2^{2K+1-n})
///   * Gamma(rK + nu) * B(M/(M-2), M/(M-2))^{-rK - nu}
/// with r = M-2; the sign is fixed and negative.
pub fn leading_odd(m: u32, n: u32, k: u32, prec: Prec) -> Real {
    assert!(m >= 3 && m % 2 == 1, "leading_odd needs odd degree >= 3");
    signed_leading(m, n, k, -1, 2, prec)
}

fn signed_leading(m: u32, n: u32, k: u32, sign: i32, two_pow: u32, prec: Prec) -> Real {
    let bits = prec.bits();
    let rho = prec.real_from_i64(match two_pow {
        1 => (m as i64 - 2) / 2,
        _ => m as i64 - 2,
    });
    let nu = prec.real_from_u32(n) + prec.real_from_f64(0.5);
    let arg = Real::with_val(bits, &rho * &prec.real_from_u32(k)) + &nu;
    // B(m/(m-2), m/(m-2)) = A(m) / C(m)
    let ln_beta = Real::with_val(
        bits,
        action_closed_form(m, prec).ln() - c_constant(m, prec).ln(),
    );
    let ln2 = prec.real_from_u32(2).ln();
    let ln_pref = prec.real_from_u32(m - 2).ln()
        - prec.pi().ln() * prec.real_from_f64(1.5)
        - ln_factorial(n, prec)
        - ln2 * prec.real_from_i64(two_pow as i64 * k as i64 + 1 - n as i64);
    let ln_val = ln_pref + ln_gamma_real(&arg) - Real::with_val(bits, &arg * &ln_beta);
    ln_val.exp() * prec.real_from_i64(sign as i64)
}

/// Leading growth dispatched on parity.
pub fn leading(spec: OscillatorSpec, n: u32, k: u32, prec: Prec) -> Real {
    match spec.parity() {
        Parity::Even => leading_even(spec.degree(), n, k, prec),
        Parity::Odd => leading_odd(spec.degree(), n, k, prec),
    }
}

/// The 1/K-correction brace inherited from a width series:
/// 1 + sum_{j=1}^{depth} c_j A(m)^j Gamma(rK + nu - j)/Gamma(rK + nu).
pub fn correction_brace(width: &WidthSeries, k: u32, depth: usize, prec: Prec) -> Result<Real> {
    if depth > width.order() {
        return Err(Error::WidthDepth { have: width.order(), need: depth });
    }
    let bits = prec.bits();
    let spec = width.spec;
    let rho = prec.real_from_i64(spec.rho());
    let nu = prec.real_from_u32(width.n) + prec.real_from_f64(0.5);
    let arg = Real::with_val(bits, &rho * &prec.real_from_u32(k)) + &nu;
    let ln_gamma_top = ln_gamma_real(&arg);
    let ln_action = action_closed_form(spec.degree(), prec).ln();
    let mut brace = prec.one();
    for j in 1..=depth {
        let c = width.coeffs[j].eval(prec);
        if c.is_zero() {
            continue;
        }
        let shifted = Real::with_val(bits, &arg - &prec.real_from_i64(j as i64));
        let ln_ratio = Real::with_val(bits, ln_gamma_real(&shifted) - &ln_gamma_top)
            + Real::with_val(bits, &ln_action * &prec.real_from_i64(j as i64));
        brace += c * ln_ratio.exp();
    }
    Ok(brace)
}

/// Large-order prediction including width-inherited corrections through
/// `depth`; depth 0 reduces to the leading form.
pub fn subleading_from_width(width: &WidthSeries, k: u32, depth: usize, prec: Prec) -> Result<Real> {
    let lead = leading(width.spec, width.n, k, prec);
    Ok(lead * correction_brace(width, k, depth, prec)?)
}

/// Analytic 1/K coefficient implied by the first width correction:
/// a = c_1 A(m) / rho, from Gamma(rK+nu-1)/Gamma(rK+nu) ~ 1/(rK).
pub fn one_over_k_coefficient(width: &WidthSeries, prec: Prec) -> Result<Real> {
    if width.order() < 1 {
        return Err(Error::WidthDepth { have: width.order(), need: 1 });
    }
    let c1 = width.coeffs[1].eval(prec);
    Ok(c1 * action_closed_form(width.spec.degree(), prec) / prec.real_from_i64(width.spec.rho()))
}

/// K-th inverse-power moment of the leading width integrand, by
/// double-exponential quadrature over |s| in (0, infinity):
/// (sign) (1/pi) int |Im(s)| / |s|^{K+1} ds. Verifies the closed Gamma
/// form of `leading` to quadrature tolerance.
pub fn dispersion_moment(spec: OscillatorSpec, n: u32, k: u32, prec: Prec) -> Result<Real> {
    let bits = prec.bits();
    let m = spec.degree();
    let rho = spec.rho();
    let nu = prec.real_from_u32(n) + prec.real_from_f64(0.5);
    // |Im(t)| = pref (2C)^nu t^{-nu/rho} exp(-A t^{-1/rho}),
    // pref = 1/(n! sqrt(2 pi)) even, halved odd
    let two_c = c_constant(m, prec) * 2u32;
    let ln_two_c = Real::with_val(bits, two_c.ln());
    let mut ln_pref = Real::with_val(bits, &nu * &ln_two_c)
        - ln_factorial(n, prec)
        - Real::with_val(bits, (prec.pi() * 2u32).ln()) / 2u32;
    if spec.parity() == Parity::Odd {
        ln_pref -= prec.real_from_u32(2).ln();
    }
    let action = action_closed_form(m, prec);
    let tol = prec.real_from_f64(10f64.powi(-(prec.digits as i32) + 6));
    let power = prec.real_from_u32(k + 1) + Real::with_val(bits, &nu / &prec.real_from_i64(rho));
    let integrand = move |t: &Real| -> Cplx {
        let ln_t = Real::with_val(bits, t.clone().ln());
        let inv_pow = (-ln_t.clone() / prec.real_from_i64(rho)).exp();
        let exponent =
            ln_pref.clone() - Real::with_val(bits, &action * &inv_pow) - ln_t * power.clone();
        Cplx::from_real(exponent.exp())
    };
    let (value, _err) = semi_infinite_cplx(integrand, prec, &tol)?;
    let magnitude = value.re / prec.pi();
    // global sign matches the closed form
    let sign = match spec.parity() {
        Parity::Odd => -1,
        Parity::Even => {
            if k % 2 == 0 {
                -1
            } else {
                1
            }
        }
    };
    Ok(magnitude * prec.real_from_i64(sign))
}

/// Coefficient-to-predictor ratios and the fitted 1/K model.
#[derive(Debug, Clone)]
pub struct RatioDiagnostics {
    /// (K, c_K / predictor(K)) for every K in the table from 1 up.
    pub ratios: Vec<(u32, f64)>,
    /// Fit window [k_lo, k_hi] used for the affine model ratio = 1 + a/K.
    pub window: (u32, u32),
    /// Fitted 1/K coefficient.
    pub a: f64,
    /// Least-squares uncertainty of `a` from the windowed residuals.
    pub a_err: f64,
}

/// Compare exact coefficients against the leading predictor and fit
/// ratio(K) = 1 + a/K over K in [Kmax/2, Kmax] with K^2 weights
/// (suppresses 1/K^2 contamination).
pub fn ratio_diagnostics(table: &CoeffTable, prec: Prec) -> Result<RatioDiagnostics> {
    let kmax = table.kmax() as u32;
    if kmax < 10 {
        return Err(Error::Invalid(format!(
            "ratio diagnostics needs at least 10 orders, got {kmax}"
        )));
    }
    let spec = table.spec;
    let n = table.level;
    let mut ratios = Vec::new();
    for k in 1..=kmax {
        let exact = prec.real_from_rat(&table.coeffs[k as usize]);
        let pred = leading(spec, n, k, prec);
        ratios.push((k, (exact / pred).to_f64()));
    }
    let k_lo = kmax / 2;
    let window: Vec<&(u32, f64)> = ratios.iter().filter(|(k, _)| *k >= k_lo).collect();
    // weighted least squares for y = 1 + a x, x = 1/K, w = K^2:
    // a = sum w x (y-1) / sum w x^2 = sum K (y-1) / count
    let count = window.len() as f64;
    let a: f64 = window.iter().map(|(k, y)| *k as f64 * (y - 1.0)).sum::<f64>() / count;
    let ss: f64 = window
        .iter()
        .map(|(k, y)| {
            let r = (*k as f64) * (y - 1.0) - a;
            r * r
        })
        .sum();
    let a_err = (ss / (count - 1.0).max(1.0) / count).sqrt();
    Ok(RatioDiagnostics { ratios, window: (k_lo, kmax), a, a_err })
}

/// CSV rows `K,exact,predictor,ratio` for the CLI.
pub fn ratio_csv(table: &CoeffTable, prec: Prec) -> Result<String> {
    let diag = ratio_diagnostics(table, prec)?;
    let mut out = String::from("K,exact,predictor,ratio\n");
    for (k, r) in &diag.ratios {
        let exact = prec.real_from_rat(&table.coeffs[*k as usize]);
        let pred = leading(table.spec, table.level, *k, prec);
        out.push_str(&format!("{k},{:e},{:e},{r}\n", exact.to_f64(), pred.to_f64()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::gamma::gamma_real;
    use crate::quantize::one_instanton_width_series;
    use crate::rspt::rspt_coeffs;
    use rug::ops::Pow;

    const P: Prec = Prec { digits: 40 };

    fn spec(m: u32) -> OscillatorSpec {
        OscillatorSpec::new(m).unwrap()
    }

    #[test]
    fn quartic_reduces_to_classic_form() {
        // (-1)^{K+1} sqrt(6) pi^{-3/2} Gamma(K+1/2) 3^K
        for k in [1u32, 5, 17] {
            let got = leading_even(4, 0, k, P);
            let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
            let expect = P.real_from_f64(sign)
                * P.real_from_u32(6).sqrt()
                * gamma_real(&(P.real_from_u32(k) + P.real_from_f64(0.5)))
                * Real::with_val(P.bits(), P.real_from_u32(3).pow(k))
                / Real::with_val(P.bits(), P.pi().pow(P.real_from_f64(1.5)));
            let rel = Real::with_val(P.bits(), &got - &expect).abs() / expect.abs();
            assert!(rel.to_f64() < 1e-30, "K = {k}");
        }
    }

    #[test]
    fn cubic_reduces_to_beta_substitution() {
        // -Gamma(K+1/2) 30^{K+1/2} / (pi^{3/2} 2^{2K+1})
        for k in [2u32, 9] {
            let got = leading_odd(3, 0, k, P);
            let expect = -gamma_real(&(P.real_from_u32(k) + P.real_from_f64(0.5)))
                * Real::with_val(P.bits(), P.real_from_u32(30).pow(P.real_from_f64(k as f64 + 0.5)))
                / Real::with_val(P.bits(), P.pi().pow(P.real_from_f64(1.5)))
                / Real::with_val(P.bits(), P.real_from_u32(2).pow(2 * k + 1));
            let rel = Real::with_val(P.bits(), &got - &expect).abs() / expect.abs();
            assert!(rel.to_f64() < 1e-30, "K = {k}");
            assert!(got.is_sign_negative());
        }
    }

    #[test]
    fn degree_seven_matches_printed_prefactor() {
        // -5 Gamma(5K+1/2)/(2^{2K+1} pi^{3/2})
        //   * (18 pi sqrt(phi) / (5^{1/4} Gamma(1/5) Gamma^2(2/5)))^{5K+1/2}
        let k = 3u32;
        let got = leading_odd(7, 0, k, P);
        let bits = P.bits();
        let phi = (P.real_from_u32(5).sqrt() + 1u32) / 2u32;
        let base = P.pi() * 18u32 * Real::with_val(bits, phi.sqrt())
            / (Real::with_val(bits, P.real_from_u32(5).pow(P.real_from_f64(0.25)))
                * gamma_real(&P.real_from_f64(0.2))
                * Real::with_val(bits, gamma_real(&P.real_from_f64(0.4)).square()));
        let expect = -P.real_from_u32(5)
            * gamma_real(&(P.real_from_u32(5 * k) + P.real_from_f64(0.5)))
            / Real::with_val(bits, P.real_from_u32(2).pow(2 * k + 1))
            / Real::with_val(bits, P.pi().pow(P.real_from_f64(1.5)))
            * Real::with_val(bits, base.pow(P.real_from_f64(5.0 * k as f64 + 0.5)));
        let rel = Real::with_val(bits, &got - &expect).abs() / expect.abs();
        assert!(rel.to_f64() < 1e-12, "rel = {rel}");
    }

    #[test]
    fn depth_zero_brace_is_one() {
        let ws = one_instanton_width_series(spec(4), 0, 1).unwrap();
        let b = correction_brace(&ws, 12, 0, P).unwrap();
        assert!((b.to_f64() - 1.0).abs() < 1e-30);
        assert!(matches!(
            correction_brace(&ws, 12, 2, P),
            Err(Error::WidthDepth { have: 1, need: 2 })
        ));
    }

    #[test]
    fn moment_matches_closed_form() {
        for (m, n, k) in [(4u32, 0u32, 20u32), (3, 0, 15), (3, 1, 8), (6, 0, 10)] {
            let s = spec(m);
            let quad = dispersion_moment(s, n, k, P).unwrap();
            let closed = leading(s, n, k, P);
            let rel = Real::with_val(P.bits(), &quad - &closed).abs() / closed.abs();
            assert!(rel.to_f64() < 1e-8, "m={m} n={n} K={k}: rel = {}", rel.to_f64());
        }
    }

    #[test]
    fn quartic_ratios_approach_one() {
        let table = rspt_coeffs(spec(4), 0, 40);
        let diag = ratio_diagnostics(&table, P).unwrap();
        let top = &diag.ratios[diag.ratios.len() - 5..];
        for (k, r) in top {
            assert!((r - 1.0).abs() < 0.06, "K = {k}, ratio = {r}");
        }
        // classic quartic 1/K coefficient: a = c1 * A / rho = -95/24 * 1/3
        let ws = one_instanton_width_series(spec(4), 0, 1).unwrap();
        let a_analytic = one_over_k_coefficient(&ws, P).unwrap().to_f64();
        assert!((a_analytic + 95.0 / 72.0).abs() < 1e-12);
        assert!(
            (diag.a - a_analytic).abs() < 0.15 * a_analytic.abs() + 0.05,
            "fit a = {}, analytic {a_analytic}",
            diag.a
        );
    }

    #[test]
    fn subleading_improves_quartic_prediction() {
        let table = rspt_coeffs(spec(4), 0, 30);
        let ws = one_instanton_width_series(spec(4), 0, 1).unwrap();
        let k = 28u32;
        let exact = P.real_from_rat(&table.coeffs[k as usize]);
        let lead = leading(spec(4), 0, k, P);
        let corr = subleading_from_width(&ws, k, 1, P).unwrap();
        let e_lead = Real::with_val(P.bits(), &exact / &lead).to_f64() - 1.0;
        let e_corr = (exact / corr).to_f64() - 1.0;
        assert!(e_corr.abs() < 0.3 * e_lead.abs(), "lead err {e_lead}, corr err {e_corr}");
    }
}
