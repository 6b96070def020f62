//! Exact Rayleigh-Schroedinger perturbation coefficients for even and odd
//! anharmonic oscillators.
//!
//! The wavefunction ansatz is a polynomial times the Gaussian ground-state
//! weight, `psi_k = B_k(q) exp(-q^2/2)` with `B_0` the monic (physicists')
//! Hermite polynomial of the level. Order-by-order matching gives a
//! triangular linear system per order with rational entries only; the
//! solvability condition at the resonant power `q^n` fixes the energy
//! coefficient uniquely. Odd oscillators are expanded in `lambda = sqrt(g)`;
//! every odd lambda power is asserted to cancel exactly before the table is
//! reindexed to integer powers of g.

use serde::{Deserialize, Serialize};

use crate::algebra::poly::{Poly, Symbol};
use crate::algebra::rat::{rat, rat_string, ratio, Rational};
use crate::error::{Error, Result};
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

/// Degree and coupling convention of one oscillator: `+ g q^m` for even m,
/// `+ sqrt(g) q^m` for odd m, mass and frequency fixed at one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OscillatorSpec {
    m: u32,
}

impl OscillatorSpec {
    pub fn new(m: u32) -> Result<Self> {
        if m < 3 {
            return Err(Error::Invalid(format!("oscillator degree must be >= 3, got {m}")));
        }
        Ok(OscillatorSpec { m })
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn parity(&self) -> Parity {
        if self.m % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Instanton scale index rho: widths behave like exp(-A / x) with
    /// x = (-g)^(1/rho) (even) or g^(1/rho) (odd); trans-series corrections
    /// live on the exponent lattice with step 1/rho in the printed coupling.
    pub fn rho(&self) -> i64 {
        match self.parity() {
            Parity::Even => (self.m as i64 - 2) / 2,
            Parity::Odd => self.m as i64 - 2,
        }
    }

    /// Lattice step of trans-series terms in the coupling: 2/(N-2) even,
    /// 1/(M-2) odd.
    pub fn lattice_step(&self) -> Rational {
        ratio(1, self.rho())
    }
}

/// Exact perturbation coefficients `E_n(g) ~ sum_K c_K g^K` for one level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffTable {
    pub spec: OscillatorSpec,
    pub level: u32,
    #[serde(
        serialize_with = "serialize_rationals",
        deserialize_with = "deserialize_rationals"
    )]
    pub coeffs: Vec<Rational>,
}

impl CoeffTable {
    pub fn kmax(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// CSV rows `K,numerator,denominator`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("K,numerator,denominator\n");
        for (k, c) in self.coeffs.iter().enumerate() {
            out.push_str(&format!("{k},{},{}\n", c.numer(), c.denom()));
        }
        out
    }
}

fn serialize_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    let strings: Vec<String> = v.iter().map(rat_string).collect();
    strings.serialize(s)
}

fn deserialize_rationals<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
    let strings: Vec<String> = Vec::deserialize(d)?;
    strings
        .iter()
        .map(|s| crate::algebra::rat::parse_rat(s).map_err(serde::de::Error::custom))
        .collect()
}

/// Coefficients as exact polynomials in the level variable nu = n + 1/2.
#[derive(Debug, Clone, PartialEq)]
pub struct NuPolyTable {
    pub spec: OscillatorSpec,
    pub polys: Vec<Poly>,
}

impl NuPolyTable {
    pub fn kmax(&self) -> usize {
        self.polys.len() - 1
    }

    /// Evaluate all coefficients at nu = n + 1/2.
    pub fn eval_level(&self, n: u32) -> Vec<Rational> {
        let nu = ratio(2 * n as i64 + 1, 2);
        self.polys.iter().map(|p| p.eval(&nu)).collect()
    }
}

/// Monic (physicists') Hermite polynomial as dense coefficients: the
/// degree-n eigenpolynomial of -1/2 B'' + q B' = n B, i.e. the harmonic
/// eigenfunction divided by exp(-q^2/2) and normalized to leading
/// coefficient one: h_k = q h_{k-1} - (k-1)/2 h_{k-2}.
fn hermite(n: u32) -> Vec<Rational> {
    let mut a = vec![rat(1)];
    if n == 0 {
        return a;
    }
    let mut b = vec![rat(0), rat(1)];
    for k in 2..=n as usize {
        let mut c = vec![rat(0); k + 1];
        for (j, v) in b.iter().enumerate() {
            c[j + 1] += v;
        }
        for (j, v) in a.iter().enumerate() {
            c[j] -= Rational::from(v * &ratio(k as i64 - 1, 2));
        }
        a = b;
        b = c;
    }
    b
}

/// Energy coefficients in powers of lambda for the perturbation
/// `lambda q^m` on level n. `E[0] = n + 1/2`.
fn lambda_series(m: u32, n: u32, kmax_lambda: usize) -> Vec<Rational> {
    let m = m as usize;
    let n = n as usize;
    let mut wavefns: Vec<Vec<Rational>> = vec![hermite(n as u32)];
    let mut energies = vec![ratio(2 * n as i64 + 1, 2)];
    for k in 1..=kmax_lambda {
        let deg = n + k * m;
        // known part of the right-hand side
        let mut rhs = vec![rat(0); deg + 1];
        for (j, v) in wavefns[k - 1].iter().enumerate() {
            rhs[j + m] -= v;
        }
        for j in 1..k {
            if energies[j].cmp0() != std::cmp::Ordering::Equal {
                for (i, v) in wavefns[k - j].iter().enumerate() {
                    rhs[i] += Rational::from(&energies[j] * v);
                }
            }
        }
        // triangular solve from the top degree down; the q^n row is the
        // solvability condition that determines E_k
        let b0 = &wavefns[0];
        let mut b = vec![rat(0); deg + 1];
        let mut e_k: Option<Rational> = None;
        for j in (0..=deg).rev() {
            let mut r = rhs[j].clone();
            if let Some(ref ek) = e_k {
                if j < b0.len() {
                    r += Rational::from(ek * &b0[j]);
                }
            }
            if j + 2 <= deg {
                r += Rational::from(&b[j + 2] * &ratio(((j + 2) * (j + 1)) as i64, 2));
            }
            if j == n {
                debug_assert!(e_k.is_none());
                e_k = Some(-r); // b0[n] = 1 (monic); normalization b[n] = 0
            } else if r.cmp0() != std::cmp::Ordering::Equal {
                b[j] = r / rat(j as i64 - n as i64);
            }
        }
        energies.push(e_k.unwrap_or_else(|| rat(0)));
        wavefns.push(b);
    }
    energies
}

/// Exact perturbation coefficients of level `n` through order `g^kmax`.
pub fn rspt_coeffs(spec: OscillatorSpec, n: u32, kmax: usize) -> CoeffTable {
    let coeffs = match spec.parity() {
        Parity::Even => lambda_series(spec.degree(), n, kmax),
        Parity::Odd => {
            let lam = lambda_series(spec.degree(), n, 2 * kmax);
            for (k, c) in lam.iter().enumerate().skip(1).step_by(2) {
                assert!(
                    c.cmp0() == std::cmp::Ordering::Equal,
                    "odd half-power lambda^{k} failed to cancel for m = {}, n = {n}",
                    spec.degree()
                );
            }
            lam.into_iter().step_by(2).collect()
        }
    };
    CoeffTable { spec, level: n, coeffs }
}

/// Empirical degree bound for the K-th coefficient as a polynomial in nu,
/// verified at one extra level by `rspt_nu_polys`.
pub fn nu_degree_bound(spec: OscillatorSpec, k: usize) -> usize {
    match spec.parity() {
        Parity::Even => k * (spec.degree() as usize - 2) / 2 + 1,
        Parity::Odd => k * (spec.degree() as usize - 2) + 1,
    }
}

/// Coefficients as exact polynomials P_K(nu) with P_K(n + 1/2) = c_K(n),
/// built by exact interpolation over levels 0..D_K and verified at one
/// extra level.
pub fn rspt_nu_polys(spec: OscillatorSpec, kmax: usize) -> Result<NuPolyTable> {
    let d_max = nu_degree_bound(spec, kmax);
    // one table per level, including the verification level
    let levels: Vec<u32> = (0..=(d_max as u32 + 1)).collect();
    let tables = par::map(levels, |n| rspt_coeffs(spec, n, kmax));

    let mut polys = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        let d_k = nu_degree_bound(spec, k);
        let pts: Vec<(Rational, Rational)> = (0..=d_k)
            .map(|n| (ratio(2 * n as i64 + 1, 2), tables[n].coeffs[k].clone()))
            .collect();
        let p = Poly::interpolate(Symbol::Nu, &pts);
        // verification level
        let v = d_k + 1;
        let nu = ratio(2 * v as i64 + 1, 2);
        if p.eval(&nu) != tables[v].coeffs[k] {
            return Err(Error::InterpolationMismatch { order: k, level: v as u32 });
        }
        polys.push(p);
    }
    Ok(NuPolyTable { spec, polys })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_order_ground_state_matrix_elements() {
        // <0|q^4|0> = 3/4 and <0|q^6|0> = 15/8
        let quartic = rspt_coeffs(OscillatorSpec::new(4).unwrap(), 0, 2);
        assert_eq!(quartic.coeffs[1], ratio(3, 4));
        assert_eq!(quartic.coeffs[2], ratio(-21, 8));
        let sextic = rspt_coeffs(OscillatorSpec::new(6).unwrap(), 0, 1);
        assert_eq!(sextic.coeffs[1], ratio(15, 8));
    }

    #[test]
    fn cubic_second_order_levels() {
        let spec = OscillatorSpec::new(3).unwrap();
        let n0 = rspt_coeffs(spec, 0, 1);
        assert_eq!(n0.coeffs[0], ratio(1, 2));
        assert_eq!(n0.coeffs[1], ratio(-11, 8));
        let n1 = rspt_coeffs(spec, 1, 1);
        assert_eq!(n1.coeffs[1], ratio(-71, 8));
    }

    #[test]
    fn even_sign_alternation_from_first_order() {
        // quartic ground state alternates +, -, +, ... from K = 1
        let t = rspt_coeffs(OscillatorSpec::new(4).unwrap(), 0, 8);
        for k in 1..=8 {
            let expect_positive = k % 2 == 1;
            assert_eq!(
                t.coeffs[k].cmp0() == std::cmp::Ordering::Greater,
                expect_positive,
                "K = {k}: {}",
                t.coeffs[k]
            );
        }
    }

    #[test]
    fn nu_polys_match_direct_tables() {
        for m in [3u32, 4, 6] {
            let spec = OscillatorSpec::new(m).unwrap();
            let table = rspt_nu_polys(spec, 4).unwrap();
            for n in 0..=6u32 {
                let direct = rspt_coeffs(spec, n, 4);
                assert_eq!(table.eval_level(n), direct.coeffs, "m = {m}, n = {n}");
            }
        }
    }

    #[test]
    fn nu_poly_k0_is_nu() {
        let t = rspt_nu_polys(OscillatorSpec::new(4).unwrap(), 1).unwrap();
        assert_eq!(t.polys[0], Poly::identity(Symbol::Nu));
    }

    #[test]
    fn cubic_k1_nu_polynomial() {
        // c_1(nu) = -(7/16 + 15/4 nu^2): forced by B_3 inversion
        let t = rspt_nu_polys(OscillatorSpec::new(3).unwrap(), 1).unwrap();
        let expect = Poly::new(Symbol::Nu, vec![ratio(-7, 16), rat(0), ratio(-15, 4)]);
        assert_eq!(t.polys[1], expect);
    }

    #[test]
    fn sextic_k1_at_ground_level() {
        let t = rspt_nu_polys(OscillatorSpec::new(6).unwrap(), 1).unwrap();
        assert_eq!(t.polys[1].eval(&ratio(1, 2)), ratio(15, 8));
    }

    #[test]
    fn coeff_table_serialization() {
        let t = rspt_coeffs(OscillatorSpec::new(4).unwrap(), 0, 3);
        let json = serde_json::to_string(&t).unwrap();
        let back: CoeffTable = serde_json::from_str(&json).unwrap();
        assert_eq!(t, back);
        assert!(t.to_csv().contains("1,3,4"));
    }
}
