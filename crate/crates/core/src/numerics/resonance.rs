//! Complex-scaling resonance eigenvalues in a truncated harmonic basis.
//!
//! Under q -> q e^{i theta} the Hamiltonian becomes a complex-symmetric
//! banded matrix in the oscillator basis whose resonance eigenvalues are
//! theta-independent once theta uncovers them; truncation and rotation
//! artifacts are controlled by scanning a (theta, dim) grid and selecting
//! the cell where the eigenvalue is locally stationary (the plateau). Grid
//! cells are independent jobs and run through the data-parallel map.

use crate::algebra::float::{Cplx, Prec, Real};
use crate::error::{Error, Result};
use crate::instanton::width_leading;
use crate::numerics::banded::{eigen_near, BandMatrix};
use crate::numerics::borel::borel_pade;
use crate::par;
use crate::rspt::{rspt_coeffs, OscillatorSpec, Parity};

/// Complex-scaled Hamiltonian
/// e^{-2i theta} p^2/2 + e^{2i theta} q^2/2 + c e^{i m theta} q^m
/// (c = g for even degree, sqrt(g) for odd) in the harmonic basis.
pub struct ScaledHamiltonian {
    pub spec: OscillatorSpec,
    pub g: f64,
    pub theta: f64,
    pub dim: usize,
    pub matrix: BandMatrix,
}

fn polar(angle: f64, prec: Prec) -> Cplx {
    let a = prec.real_from_f64(angle);
    let (sin, cos) = a.sin_cos(Real::new(prec.bits()));
    Cplx::new(cos, sin)
}

/// Build the rotated Hamiltonian matrix. The kinetic-plus-harmonic part is
/// assembled as e^{-2i theta}(H0 - q^2/2) + e^{2i theta} q^2/2, so at g = 0
/// the operator is the harmonic oscillator itself for every theta.
pub fn build_hamiltonian(
    spec: OscillatorSpec,
    g: &Real,
    theta: f64,
    dim: usize,
    prec: Prec,
) -> Result<ScaledHamiltonian> {
    let m = spec.degree();
    let limit = std::f64::consts::PI / (m as f64 + 2.0);
    if !(theta.abs() < limit) {
        return Err(Error::ThetaOutOfRange { m, theta, limit });
    }
    if dim < 16 {
        return Err(Error::DimTooSmall { dim, min: 16 });
    }
    let coupling = match spec.parity() {
        Parity::Even => g.clone(),
        Parity::Odd => {
            if g.is_sign_negative() && !g.is_zero() {
                return Err(Error::WrongRegime {
                    m,
                    g: g.to_f64(),
                    regime: "sqrt(g)-coupled (g >= 0)",
                });
            }
            g.clone().sqrt()
        }
    };
    // position operator: Q[j][j+1] = sqrt((j+1)/2)
    let mut q = BandMatrix::zero(dim, 1, prec);
    for j in 0..dim - 1 {
        let v = (prec.real_from_u32(j as u32 + 1) / 2u32).sqrt();
        q.set(j, j + 1, Cplx::from_real(v.clone()));
        q.set(j + 1, j, Cplx::from_real(v));
    }
    let q2 = q.mul(&q);
    let mut qm = q2.clone();
    for _ in 2..m {
        qm = qm.mul(&q);
    }
    let band = (m as usize).max(2);
    let kin_phase = polar(-2.0 * theta, prec); // e^{-2i theta}
    let pot_phase = polar(2.0 * theta, prec); // e^{+2i theta}
    let cpl_phase = polar(m as f64 * theta, prec).mul_real(&coupling);
    let half = prec.real_from_f64(0.5);
    let mut h = BandMatrix::zero(dim, band, prec);
    for i in 0..dim {
        for j in i.saturating_sub(band)..(i + band + 1).min(dim) {
            let q2_half = q2.get(i, j).mul_real(&half);
            // H0 - q^2/2 = p^2/2, diagonal j + 1/2 minus the q^2 half
            let mut kinetic = q2_half.neg();
            if i == j {
                kinetic = kinetic.add(&Cplx::from_real(
                    prec.real_from_u32(i as u32) + &half,
                ));
            }
            let v = kin_phase
                .mul(&kinetic)
                .add(&pot_phase.mul(&q2_half))
                .add(&cpl_phase.mul(&qm.get(i, j)));
            h.set(i, j, v);
        }
    }
    Ok(ScaledHamiltonian { spec, g: g.to_f64(), theta, dim, matrix: h })
}

/// Grid and policy knobs for the plateau search.
#[derive(Debug, Clone)]
pub struct ResonanceOptions {
    pub thetas: Vec<f64>,
    pub dims: Vec<usize>,
    /// Plateau acceptance threshold on the local eigenvalue variation.
    pub plateau_threshold: f64,
    /// Number of perturbation coefficients feeding the Borel seed.
    pub seed_order: usize,
}

impl ResonanceOptions {
    /// Documented defaults: 8 rotation angles in
    /// [0.1, 0.1 + pi/(2(m+2))], basis sizes {200, 300, 450}.
    pub fn default_for(spec: OscillatorSpec) -> Self {
        let m = spec.degree() as f64;
        let lo = 0.1;
        let hi = 0.1 + std::f64::consts::PI / (2.0 * (m + 2.0));
        let thetas = (0..8).map(|i| lo + (hi - lo) * i as f64 / 7.0).collect();
        ResonanceOptions {
            thetas,
            dims: vec![200, 300, 450],
            plateau_threshold: 1e-8,
            seed_order: 30,
        }
    }

    /// Smaller grids for quick checks and moderate couplings.
    pub fn quick(spec: OscillatorSpec) -> Self {
        let mut o = Self::default_for(spec);
        o.thetas = o.thetas.into_iter().step_by(2).collect();
        o.dims = vec![96, 144, 200];
        o
    }
}

/// A converged resonance eigenvalue with its stability pedigree.
#[derive(Debug, Clone)]
pub struct ResonanceResult {
    pub energy: Cplx,
    pub theta: f64,
    pub dim: usize,
    pub precision: u32,
    /// Maximum eigenvalue deviation across the plateau neighborhood.
    pub error: f64,
}

fn resonance_regime_ok(spec: OscillatorSpec, g: &Real) -> bool {
    match spec.parity() {
        Parity::Even => g.is_sign_negative() && !g.is_zero(),
        Parity::Odd => g.is_sign_positive() && !g.is_zero(),
    }
}

/// Locate the resonance continuing harmonic level `n` at coupling `g`:
/// eigenvalues on the full (theta, dim) grid by inverse iteration from a
/// Borel-plus-width seed, then plateau selection.
pub fn resonance(
    spec: OscillatorSpec,
    n: u32,
    g: &Real,
    opts: &ResonanceOptions,
    prec: Prec,
) -> Result<ResonanceResult> {
    if g.is_zero() {
        // harmonic limit
        let e = Cplx::from_real(prec.real_from_u32(n) + prec.real_from_f64(0.5));
        return Ok(ResonanceResult {
            energy: e,
            theta: opts.thetas[0],
            dim: opts.dims[0],
            precision: prec.digits,
            error: 0.0,
        });
    }
    if spec.parity() == Parity::Odd && g.is_sign_negative() {
        return Err(Error::WrongRegime {
            m: spec.degree(),
            g: g.to_f64(),
            regime: "sqrt(g)-coupled (g >= 0)",
        });
    }
    // even degree with g > 0 is the bound-state regime: real eigenvalue,
    // zero-width seed; otherwise seed the imaginary part with the
    // predicted leading width and raise 40 -> 80 digits when it underflows
    // the plateau resolution
    let width = if resonance_regime_ok(spec, g) {
        Some(width_leading(&spec, n, g, prec)?)
    } else {
        None
    };
    let tiny = width
        .as_ref()
        .is_some_and(|w| w.clone().abs().to_f64() < 1e-20);
    let eff = if tiny && prec.digits < 80 {
        Prec { digits: 80 }
    } else {
        prec
    };
    let g_eff = eff.real_from_f64(g.to_f64());
    let width_eff = match &width {
        Some(_) => width_leading(&spec, n, &g_eff, eff)?,
        None => eff.zero(),
    };

    // seed: Borel-summed real part + leading width imaginary part
    let table = rspt_coeffs(spec, n, opts.seed_order);
    let beta = match spec.parity() {
        Parity::Even => (spec.degree() - 2) / 2,
        Parity::Odd => spec.degree() - 2,
    };
    let seed_sum = borel_pade(&table.coeffs, beta, 0.0, &g_eff, eff)?;
    let seed = Cplx::new(seed_sum.value.re.clone(), width_eff);

    // independent (theta, dim) cells
    let cells: Vec<(usize, usize)> = (0..opts.thetas.len())
        .flat_map(|ti| (0..opts.dims.len()).map(move |di| (ti, di)))
        .collect();
    let energies: Vec<Option<Cplx>> = par::map(cells.clone(), |(ti, di)| {
        let h = build_hamiltonian(spec, &g_eff, opts.thetas[ti], opts.dims[di], eff).ok()?;
        let (e, _) = eigen_near(&h.matrix, &seed, Some(n as usize), eff).ok()?;
        Some(e)
    });
    let nt = opts.thetas.len();
    let nd = opts.dims.len();
    let at = |ti: usize, di: usize| energies[ti * nd + di].as_ref();

    // plateau: cell minimizing the largest deviation to its grid neighbors
    let mut best: Option<(usize, usize, f64)> = None;
    for ti in 0..nt {
        for di in 0..nd {
            let Some(e) = at(ti, di) else { continue };
            let mut variation = 0.0f64;
            let mut neighbors = 0;
            let mut probe = |tj: usize, dj: usize| {
                if let Some(o) = at(tj, dj) {
                    variation = variation.max(e.sub(o).abs().to_f64());
                    neighbors += 1;
                }
            };
            if ti > 0 {
                probe(ti - 1, di);
            }
            if ti + 1 < nt {
                probe(ti + 1, di);
            }
            if di > 0 {
                probe(ti, di - 1);
            }
            if di + 1 < nd {
                probe(ti, di + 1);
            }
            if neighbors == 0 {
                continue;
            }
            if best.is_none() || variation < best.as_ref().unwrap().2 {
                best = Some((ti, di, variation));
            }
        }
    }
    let Some((ti, di, variation)) = best else {
        return Err(Error::EigenNoConvergence { iterations: 0 });
    };
    if variation > opts.plateau_threshold {
        let mut tbl = String::from("theta,dim,re,im\n");
        for tj in 0..nt {
            for dj in 0..nd {
                match at(tj, dj) {
                    Some(e) => tbl.push_str(&format!(
                        "{:.4},{},{:.12e},{:.12e}\n",
                        opts.thetas[tj],
                        opts.dims[dj],
                        e.re.to_f64(),
                        e.im.to_f64()
                    )),
                    None => tbl.push_str(&format!(
                        "{:.4},{},failed,failed\n",
                        opts.thetas[tj], opts.dims[dj]
                    )),
                }
            }
        }
        return Err(Error::NoPlateau {
            variation,
            threshold: opts.plateau_threshold,
            table: tbl,
        });
    }
    Ok(ResonanceResult {
        energy: at(ti, di).unwrap().clone(),
        theta: opts.thetas[ti],
        dim: opts.dims[di],
        precision: eff.digits,
        error: variation,
    })
}
