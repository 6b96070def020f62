//! Release acceptance gate: twelve numbered end-to-end checks spanning the
//! exact algebra, the instanton fixtures, the large-order diagnostics, and
//! the independent numerical pipelines. Each criterion produces one
//! [`Outcome`] with a pass flag and a human-readable detail line; the
//! `acceptance` integration test prints one line per criterion and fails if
//! any criterion fails. Checks that expose a documented defect in the
//! reference constants assert the defect explicitly instead of silently
//! loosening a tolerance.

use rug::ops::Pow;

use crate::algebra::float::{Prec, Real};
use crate::algebra::gamma::gamma_real;
use crate::algebra::poly::{Poly, Symbol};
use crate::algebra::rat::{rat, ratio, Rational};
use crate::error::Error;
use crate::instanton::{action_closed_form, width_leading, ActionPair};
use crate::largeorder::{dispersion_moment, leading, one_over_k_coefficient, ratio_diagnostics};
use crate::numerics::resonance::{resonance, ResonanceOptions};
use crate::quantize::{
    b_function, j_zero_xi, one_instanton_width_series, quantization_residual, two_instanton_terms,
    ResidualOutcome, TransSeriesTerm, XiValue,
};
use crate::rspt::{rspt_coeffs, OscillatorSpec};

/// Result of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    /// The one-line report format used by the gate.
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        format!("criterion {:02} {} {} — {}", self.id, status, self.name, self.detail)
    }
}

/// Criterion ids in the fast subset (no resonance eigensolves).
pub const FAST_IDS: [u32; 9] = [1, 2, 3, 5, 6, 7, 8, 11, 12];
/// All criterion ids.
pub const ALL_IDS: [u32; 12] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12];

fn prec() -> Prec {
    Prec::new(40)
}

fn spec(m: u32) -> OscillatorSpec {
    OscillatorSpec::new(m).expect("supported degree")
}

fn rel_err(value: &Real, reference: &Real) -> f64 {
    let bits = value.prec();
    let diff = Real::with_val(bits, value - reference).abs();
    (diff / reference.clone().abs()).to_f64()
}

/// Golden ratio (1 + sqrt 5)/2.
fn golden(p: Prec) -> Real {
    (p.real_from_u32(5).sqrt() + 1u32) / 2u32
}

/// Criterion 1: the order-g^1 terms of the quantization function are exact
/// fixed polynomials in E for degrees 3, 4, 6, 7 (zero tolerance).
fn c01() -> Outcome {
    let expected: [(u32, Vec<Rational>); 4] = [
        (3, vec![ratio(7, 16), rat(0), ratio(15, 4)]),
        (4, vec![ratio(-3, 8), rat(0), ratio(-3, 2)]),
        (6, vec![rat(0), ratio(-25, 8), rat(0), ratio(-5, 2)]),
        (
            7,
            vec![
                ratio(180675, 2048),
                rat(0),
                ratio(444381, 512),
                rat(0),
                ratio(82005, 128),
                rat(0),
                ratio(3003, 32),
            ],
        ),
    ];
    let mut failures = Vec::new();
    for (m, coeffs) in &expected {
        let b = match b_function(spec(*m), 1) {
            Ok(b) => b,
            Err(e) => {
                failures.push(format!("m={m}: {e}"));
                continue;
            }
        };
        let want = Poly::new(Symbol::Energy, coeffs.clone());
        if b.terms[1] != want {
            failures.push(format!("m={m}: order-g term mismatch"));
        }
        if b.terms[0] != Poly::identity(Symbol::Energy) {
            failures.push(format!("m={m}: order-g^0 term is not E"));
        }
    }
    Outcome {
        id: 1,
        name: "first-order quantization-function fixtures are exact",
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            "degrees 3, 4, 6, 7 match the exact polynomials with zero tolerance".into()
        } else {
            failures.join("; ")
        },
    }
}

/// Criterion 2: quadrature action agrees with the closed form to 1e-12 for
/// all degrees 3..=10; known closed values are asserted, and the degree-7
/// reference-table constant is shown to be low by exactly Gamma(2/5).
fn c02() -> Outcome {
    let p = prec();
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for m in 3..=10u32 {
        match ActionPair::compute(m, p) {
            Ok(pair) => {
                let e = rel_err(&pair.numeric, &pair.closed_form);
                worst = worst.max(e);
                if e > 1e-12 {
                    failures.push(format!("m={m}: quadrature off by {e:.2e}"));
                }
            }
            Err(e) => failures.push(format!("m={m}: {e}")),
        }
    }
    // spot values: A(3) = 2/15, A(4) = 1/3, A(6) = pi/2^{5/2}
    let spots = [
        (3u32, p.real_from_rat(&ratio(2, 15))),
        (4, p.real_from_rat(&ratio(1, 3))),
        (6, p.pi() / (p.real_from_u32(2).sqrt() * 4u32)),
    ];
    for (m, want) in &spots {
        let got = action_closed_form(*m, p);
        if rel_err(&got, want) > 1e-30 {
            failures.push(format!("m={m}: closed form disagrees with the known value"));
        }
    }
    // degree-7 reference-table constant 5^{1/4} G(1/5) G(2/5) /
    // (2^{3/5} 9 pi sqrt(phi)) g^{-1/5}: low by a factor Gamma(2/5)
    // relative to the true action.
    let bits = p.bits();
    let g15 = gamma_real(&p.real_from_rat(&ratio(1, 5)));
    let g25 = gamma_real(&p.real_from_rat(&ratio(2, 5)));
    let tabulated = Real::with_val(bits, p.real_from_f64(5.0).root(4) * &g15) * &g25
        / (p.real_from_f64(2.0f64).root(5).pow(3) * p.pi() * 9u32 * golden(p).sqrt());
    let corrected = tabulated * &g25;
    let a7 = action_closed_form(7, p);
    let slip = rel_err(&a7, &corrected);
    if slip > 1e-30 {
        failures.push(format!(
            "m=7: action does not equal the tabulated constant times Gamma(2/5) (off by {slip:.2e})"
        ));
    }
    Outcome {
        id: 2,
        name: "instanton actions: quadrature vs closed form",
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            format!(
                "degrees 3..=10 agree to {worst:.1e} (limit 1e-12); degree-7 tabulated leading \
                 constant confirmed low by exactly Gamma(2/5)"
            )
        } else {
            failures.join("; ")
        },
    }
}

/// Criterion 3: cubic first-level width — the first correction coefficient
/// is exactly -853/16 and the leading prefactor reduces to the closed form
/// -8 exp(-2/(15 g)) / (sqrt(pi) g^{3/2}).
fn c03() -> Outcome {
    let p = prec();
    let ws = match one_instanton_width_series(spec(3), 1, 1) {
        Ok(w) => w,
        Err(e) => {
            return Outcome {
                id: 3,
                name: "cubic n=1 width series",
                passed: false,
                detail: e.to_string(),
            }
        }
    };
    let c1 = &ws.coeffs[1];
    let c1_ok = c1.is_exact() && c1.rational == ratio(-853, 16);
    let mut pref_worst = 0.0f64;
    for gv in [0.01f64, 0.003] {
        let g = p.real_from_f64(gv);
        let got = width_leading(&spec(3), 1, &g, p).expect("resonance regime");
        let bits = p.bits();
        let closed = Real::with_val(bits, -(p.real_from_rat(&ratio(-2, 15)) / &g).exp() * 8u32)
            / (p.pi().sqrt() * g.pow(&p.real_from_f64(1.5)));
        pref_worst = pref_worst.max(rel_err(&got, &closed));
    }
    let pref_ok = pref_worst < 1e-30;
    Outcome {
        id: 3,
        name: "cubic n=1 width series",
        passed: c1_ok && pref_ok,
        detail: format!(
            "c1 {} -853/16 exactly; prefactor vs -8 e^(-2/(15g))/(sqrt(pi) g^(3/2)) \
             agrees to {pref_worst:.1e}",
            if c1_ok { "equals" } else { "DIFFERS from" }
        ),
    }
}

/// Weighted-free quadratic least squares y = a + b x + c x^2; returns a.
fn quadratic_intercept(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sx2, mut sx3, mut sx4) = (0.0, 0.0, 0.0, 0.0);
    let (mut sy, mut sxy, mut sx2y) = (0.0, 0.0, 0.0);
    for &(x, y) in points {
        sx += x;
        sx2 += x * x;
        sx3 += x * x * x;
        sx4 += x * x * x * x;
        sy += y;
        sxy += x * y;
        sx2y += x * x * y;
    }
    // solve the 3x3 normal equations by Cramer's rule
    let det3 = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let base = [[n, sx, sx2], [sx, sx2, sx3], [sx2, sx3, sx4]];
    let num = [[sy, sx, sx2], [sxy, sx2, sx3], [sx2y, sx3, sx4]];
    det3(num) / det3(base)
}

/// Criterion 4: quartic ground-level width — c1 = -95/24 exactly, and a fit
/// of the complex-scaling widths over g' in [0.015, 0.04] recovers it
/// within 5%.
fn c04() -> Outcome {
    let p = prec();
    let s = spec(4);
    let ws = match one_instanton_width_series(s, 0, 1) {
        Ok(w) => w,
        Err(e) => {
            return Outcome {
                id: 4,
                name: "quartic width correction from complex scaling",
                passed: false,
                detail: e.to_string(),
            }
        }
    };
    let c1 = &ws.coeffs[1];
    let c1_ok = c1.is_exact() && c1.rational == ratio(-95, 24);
    let opts = ResonanceOptions::quick(s);
    let mut points = Vec::new();
    for gp in [0.015f64, 0.02, 0.025, 0.03, 0.035, 0.04] {
        let g = p.real_from_f64(-gp);
        let r = match resonance(s, 0, &g, &opts, p) {
            Ok(r) => r,
            Err(e) => {
                return Outcome {
                    id: 4,
                    name: "quartic width correction from complex scaling",
                    passed: false,
                    detail: format!("g = -{gp}: {e}"),
                }
            }
        };
        let lead = width_leading(&s, 0, &g, p).expect("resonance regime");
        let ratio_y = (r.energy.im.clone() / lead).to_f64();
        points.push((gp, (ratio_y - 1.0) / gp));
    }
    let fitted = quadratic_intercept(&points);
    let target = -95.0 / 24.0;
    let fit_err = (fitted / target - 1.0).abs();
    Outcome {
        id: 4,
        name: "quartic width correction from complex scaling",
        passed: c1_ok && fit_err < 0.05,
        detail: format!(
            "c1 {} -95/24 exactly; fitted slope {fitted:.4} vs {target:.4} ({:.2}% off, limit 5%)",
            if c1_ok { "equals" } else { "DIFFERS from" },
            100.0 * fit_err
        ),
    }
}

/// Criterion 5: coefficient-to-predictor ratios sit within 5% of 1 over the
/// top decade of orders (Kmax 60 for degrees 3, 4; 40 for 6, 7).
fn c05() -> Outcome {
    let p = prec();
    let cases = [(3u32, 60usize), (4, 60), (6, 40), (7, 40)];
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for (m, kmax) in cases {
        let table = rspt_coeffs(spec(m), 0, kmax);
        let diag = match ratio_diagnostics(&table, p) {
            Ok(d) => d,
            Err(e) => {
                failures.push(format!("m={m}: {e}"));
                continue;
            }
        };
        for (k, r) in diag.ratios.iter().rev().take(10) {
            let dev = (r - 1.0).abs();
            worst = worst.max(dev);
            if dev > 0.05 {
                failures.push(format!("m={m} K={k}: ratio {r:.4}"));
            }
        }
    }
    Outcome {
        id: 5,
        name: "large-order growth matches the leading predictor",
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("worst |ratio - 1| over the top decade: {worst:.3} (limit 0.05)")
        } else {
            failures.join("; ")
        },
    }
}

/// Criterion 6: degree-7 subleading 1/K coefficient — the ratio fit agrees
/// with the analytic value c1 A(7)/5 within 5%, and that value reproduces
/// the closed form -17 pi / (450 5^{1/4} phi^{3/2}) to 12 digits. The
/// reference-table constant carries a spurious extra factor sqrt(2), which
/// is asserted rather than absorbed.
fn c06() -> Outcome {
    let p = prec();
    let table = rspt_coeffs(spec(7), 0, 40);
    let diag = match ratio_diagnostics(&table, p) {
        Ok(d) => d,
        Err(e) => {
            return Outcome {
                id: 6,
                name: "degree-7 subleading constant",
                passed: false,
                detail: e.to_string(),
            }
        }
    };
    let ws = one_instanton_width_series(spec(7), 0, 1).expect("degree-7 fixture");
    let analytic = one_over_k_coefficient(&ws, p).expect("order >= 1");
    let fit_err = (diag.a / analytic.to_f64() - 1.0).abs();
    // closed form implied by the g^{1/5} width data
    let bits = p.bits();
    let closed = Real::with_val(
        bits,
        -(p.pi() * 17u32)
            / (p.real_from_u32(450)
                * p.real_from_f64(5.0).root(4)
                * golden(p).pow(&p.real_from_f64(1.5))),
    );
    let closed_err = rel_err(&analytic, &closed);
    // the reference table lists sqrt(2) times this value; assert the
    // discrepancy is exactly that factor
    let sqrt2 = p.real_from_f64(2.0).sqrt();
    let tabulated = Real::with_val(bits, &closed * &sqrt2);
    let tab_gap = (analytic.to_f64() / tabulated.to_f64() - 1.0).abs();
    let passed = fit_err < 0.05 && closed_err < 1e-12 && tab_gap > 0.25;
    Outcome {
        id: 6,
        name: "degree-7 subleading constant",
        passed,
        detail: format!(
            "fitted a = {:.5} vs analytic {:.5} ({:.2}% off, limit 5%); analytic matches \
             -17 pi/(450 * 5^(1/4) phi^(3/2)) to {closed_err:.1e}; reference-table value \
             {:.5} differs by the spurious factor sqrt(2)",
            diag.a,
            analytic.to_f64(),
            100.0 * fit_err,
            tabulated.to_f64()
        ),
    }
}

/// Criterion 7: the sextic ground-level series has no 1/K term — the fitted
/// coefficient stays below 0.2 in magnitude.
fn c07() -> Outcome {
    let p = prec();
    let table = rspt_coeffs(spec(6), 0, 40);
    match ratio_diagnostics(&table, p) {
        Ok(diag) => Outcome {
            id: 7,
            name: "sextic 1/K coefficient vanishes",
            passed: diag.a.abs() < 0.2,
            detail: format!("fitted a = {:.4} (limit |a| < 0.2)", diag.a),
        },
        Err(e) => Outcome {
            id: 7,
            name: "sextic 1/K coefficient vanishes",
            passed: false,
            detail: e.to_string(),
        },
    }
}

/// Criterion 8: the dispersion-moment quadrature reproduces the closed
/// Gamma form of the leading growth to 1e-8 at (degree 4, K=20) and
/// (degree 3, K=15).
fn c08() -> Outcome {
    let p = prec();
    let cases = [(4u32, 20u32), (3, 15)];
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for (m, k) in cases {
        let closed = leading(spec(m), 0, k, p);
        match dispersion_moment(spec(m), 0, k, p) {
            Ok(moment) => {
                let e = rel_err(&moment, &closed);
                worst = worst.max(e);
                if e > 1e-8 {
                    failures.push(format!("m={m} K={k}: off by {e:.2e}"));
                }
            }
            Err(e) => failures.push(format!("m={m} K={k}: {e}")),
        }
    }
    Outcome {
        id: 8,
        name: "dispersion moments match the closed Gamma form",
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("worst relative error {worst:.1e} (limit 1e-8)")
        } else {
            failures.join("; ")
        },
    }
}

/// Criterion 9: the cubic n=1 complex-scaling width at g = 0.01 against the
/// two-correction formula lead * (1 - 853/16 g + 33349/512 g^2), required
/// to agree within 1%; the leading-order-only value must miss by more than
/// 40%. The 1% clause is not attainable at this coupling: the eigensolver
/// and an independent lateral Borel sum of 30 exact coefficients agree with
/// each other to 8 digits and both sit about 9% from the g^2-truncated
/// formula, so the gap is series truncation, not solver error. The check is
/// kept as stated and reports the measured gap.
fn c09() -> Outcome {
    let p = prec();
    let s = spec(3);
    let gv = 0.01f64;
    let g = p.real_from_f64(gv);
    let r = match resonance(s, 1, &g, &ResonanceOptions::quick(s), p) {
        Ok(r) => r,
        Err(e) => {
            return Outcome {
                id: 9,
                name: "cubic n=1 width vs truncated two-correction formula",
                passed: false,
                detail: e.to_string(),
            }
        }
    };
    let lead = width_leading(&s, 1, &g, p).expect("resonance regime");
    // second-order correction series for the cubic first level
    let brace = p.real_from_rat(&ratio(33349, 512)) * &g * &g
        + p.real_from_rat(&ratio(-853, 16)) * &g
        + 1u32;
    let bits = p.bits();
    let predicted = Real::with_val(bits, &lead * &brace);
    let im = r.energy.im.clone();
    let trunc_gap = rel_err(&im, &predicted);
    let lead_gap = rel_err(&im, &lead);
    let clause1 = trunc_gap < 0.01;
    let clause2 = lead_gap > 0.40;
    Outcome {
        id: 9,
        name: "cubic n=1 width vs truncated two-correction formula",
        passed: clause1 && clause2,
        detail: format!(
            "Im E = {:.6e}; g^2-truncated formula {:.6e}: {:.2}% apart (limit 1%, known \
             unattainable at g = 0.01 — solver and lateral Borel agree to 8 digits, the gap \
             is the missing g^3+ tail); leading-only misses by {:.1}% (required > 40%)",
            im.to_f64(),
            predicted.to_f64(),
            100.0 * trunc_gap,
            100.0 * lead_gap
        ),
    }
}

/// Criterion 10: the generalized quantization condition holds at the
/// numerically computed cubic n=0 resonance for g = 0.005 to fixture
/// depth — residual below 1e-3 at truncation order 1, decreasing at
/// order 2.
fn c10() -> Outcome {
    let p = prec();
    let s = spec(3);
    let g = p.real_from_f64(0.005);
    let r = match resonance(s, 0, &g, &ResonanceOptions::quick(s), p) {
        Ok(r) => r,
        Err(e) => {
            return Outcome {
                id: 10,
                name: "quantization residual at a computed resonance",
                passed: false,
                detail: e.to_string(),
            }
        }
    };
    let mut mags = Vec::new();
    for order in [1usize, 2] {
        match quantization_residual(s, &r.energy, &g, order, p) {
            Ok(ResidualOutcome::Value(v)) => mags.push(v.abs().to_f64()),
            Ok(ResidualOutcome::PerturbativeRoot { n }) => {
                return Outcome {
                    id: 10,
                    name: "quantization residual at a computed resonance",
                    passed: false,
                    detail: format!("order {order}: landed on the perturbative pole at n = {n}"),
                }
            }
            Err(e) => {
                return Outcome {
                    id: 10,
                    name: "quantization residual at a computed resonance",
                    passed: false,
                    detail: format!("order {order}: {e}"),
                }
            }
        }
    }
    let passed = mags[0] < 1e-3 && mags[1] < mags[0];
    Outcome {
        id: 10,
        name: "quantization residual at a computed resonance",
        passed,
        detail: format!(
            "|residual| = {:.2e} at order 1 (limit 1e-3), {:.2e} at order 2 (must decrease)",
            mags[0], mags[1]
        ),
    }
}

/// Criterion 11: the quantization function evaluated on the perturbative
/// branch returns exactly n + 1/2 order by order, levels 0..=4, degrees
/// 3, 4, 6, 7.
fn c11() -> Outcome {
    let mut failures = Vec::new();
    for m in [3u32, 4, 6, 7] {
        let b = match b_function(spec(m), 4) {
            Ok(b) => b,
            Err(e) => {
                failures.push(format!("m={m}: {e}"));
                continue;
            }
        };
        for n in 0..=4u32 {
            let defect = b.on_shell_defect(n);
            if defect.iter().any(|d| d.cmp0() != std::cmp::Ordering::Equal) {
                failures.push(format!("m={m} n={n}: nonzero on-shell defect"));
            }
        }
    }
    Outcome {
        id: 11,
        name: "on-shell identity B(E_n(g), g) = n + 1/2",
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            "exact through order g^4 for degrees 3, 4, 6, 7 and levels 0..=4".into()
        } else {
            failures.join("; ")
        },
    }
}

/// Criterion 12: trans-series bookkeeping — the J=0 sector reproduces the
/// signed perturbation coefficients for K <= 10 (quartic ground level), the
/// two-instanton terms carry the expected single logarithm, and a term with
/// L = J is rejected.
fn c12() -> Outcome {
    let s = spec(4);
    let table = rspt_coeffs(s, 0, 10);
    let mut failures = Vec::new();
    for k in 0..=10usize {
        let xi = j_zero_xi(s, 0, k);
        let want = if k % 2 == 1 {
            -table.coeffs[k].clone()
        } else {
            table.coeffs[k].clone()
        };
        if xi != want {
            failures.push(format!("K={k}: J=0 coefficient mismatch"));
        }
    }
    let terms = two_instanton_terms(s, 0);
    let has_log = terms
        .iter()
        .any(|t| t.j == 2 && t.l == 1 && t.value == XiValue::Exact(rat(1)));
    if !has_log {
        failures.push("missing the J=2, L=1 logarithm term".into());
    }
    match TransSeriesTerm::new(0, 2, 2, 0, XiValue::Exact(rat(1))) {
        Err(Error::LogIndexBound { j: 2, l: 2, lmax: 1 }) => {}
        other => failures.push(format!("L = J term was not rejected: {other:?}")),
    }
    Outcome {
        id: 12,
        name: "trans-series index structure",
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            "J=0 sector matches signed coefficients for K <= 10; J=2 log term present; \
             L = J rejected"
                .into()
        } else {
            failures.join("; ")
        },
    }
}

/// Run one criterion by id; panics on an unknown id.
pub fn run(id: u32) -> Outcome {
    match id {
        1 => c01(),
        2 => c02(),
        3 => c03(),
        4 => c04(),
        5 => c05(),
        6 => c06(),
        7 => c07(),
        8 => c08(),
        9 => c09(),
        10 => c10(),
        11 => c11(),
        12 => c12(),
        other => panic!("no acceptance criterion {other}"),
    }
}

/// Run the gate; `fast_only` skips the criteria that need resonance
/// eigensolves (4, 9, 10).
pub fn run_suite(fast_only: bool) -> Vec<Outcome> {
    let ids: &[u32] = if fast_only { &FAST_IDS } else { &ALL_IDS };
    ids.iter().map(|&id| run(id)).collect()
}
