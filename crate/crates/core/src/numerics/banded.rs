//! Banded complex-symmetric linear algebra at configurable precision:
//! storage by diagonals, unpivoted LU factorization, and Rayleigh-quotient
//! inverse iteration for an eigenvalue near a seed.
//!
//! The matrices here come from polynomial potentials in the oscillator
//! basis, so the half-bandwidth never exceeds the potential degree and the
//! factorization creates no fill outside the original band. Pivoting is
//! omitted on purpose: inverse iteration works with deliberately
//! near-singular shifts, a tiny pivot is handled by nudging the shift, and
//! the generous working precision absorbs unpivoted element growth.

use crate::algebra::float::{Cplx, Prec, Real};
use crate::error::{Error, Result};

/// Complex banded matrix stored by diagonals: `diags[d]` holds the diagonal
/// with offset `d as i64 - band as i64` (column minus row).
#[derive(Debug, Clone)]
pub struct BandMatrix {
    pub dim: usize,
    pub band: usize,
    pub prec: Prec,
    diags: Vec<Vec<Cplx>>,
}

impl BandMatrix {
    pub fn zero(dim: usize, band: usize, prec: Prec) -> Self {
        let diags = (0..2 * band + 1)
            .map(|d| {
                let off = (d as i64 - band as i64).unsigned_abs() as usize;
                vec![Cplx::zero(prec); dim - off.min(dim)]
            })
            .collect();
        BandMatrix { dim, band, prec, diags }
    }

    fn slot(&self, i: usize, j: usize) -> Option<(usize, usize)> {
        let off = j as i64 - i as i64;
        if off.unsigned_abs() as usize > self.band {
            return None;
        }
        let d = (off + self.band as i64) as usize;
        let idx = i.min(j);
        Some((d, idx))
    }

    pub fn get(&self, i: usize, j: usize) -> Cplx {
        match self.slot(i, j) {
            Some((d, idx)) => self.diags[d][idx].clone(),
            None => Cplx::zero(self.prec),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: Cplx) {
        let (d, idx) = self.slot(i, j).expect("entry outside the band");
        self.diags[d][idx] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &Cplx) {
        let (d, idx) = self.slot(i, j).expect("entry outside the band");
        self.diags[d][idx] = self.diags[d][idx].add(v);
    }

    /// Largest |A_ij - A_ji| over the band; zero for complex-symmetric input.
    pub fn asymmetry(&self) -> Real {
        let mut worst = self.prec.zero();
        for i in 0..self.dim {
            for j in i + 1..(i + self.band + 1).min(self.dim) {
                let d = self.get(i, j).sub(&self.get(j, i)).abs();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }

    /// Largest |Im A_ij| over the band; zero for real matrices.
    pub fn max_imag(&self) -> Real {
        let mut worst = self.prec.zero();
        for diag in &self.diags {
            for v in diag {
                let a = v.im.clone().abs();
                if a > worst {
                    worst = a;
                }
            }
        }
        worst
    }

    pub fn matvec(&self, x: &[Cplx]) -> Vec<Cplx> {
        let mut y = vec![Cplx::zero(self.prec); self.dim];
        for (i, yi) in y.iter_mut().enumerate() {
            let lo = i.saturating_sub(self.band);
            let hi = (i + self.band + 1).min(self.dim);
            for j in lo..hi {
                *yi = yi.add(&self.get(i, j).mul(&x[j]));
            }
        }
        y
    }

    /// Banded product; the result band is the sum of the operand bands.
    pub fn mul(&self, o: &BandMatrix) -> BandMatrix {
        assert_eq!(self.dim, o.dim);
        let band = self.band + o.band;
        let mut r = BandMatrix::zero(self.dim, band, self.prec);
        for i in 0..self.dim {
            let klo = i.saturating_sub(self.band);
            let khi = (i + self.band + 1).min(self.dim);
            for k in klo..khi {
                let aik = self.get(i, k);
                if aik.re.is_zero() && aik.im.is_zero() {
                    continue;
                }
                let jlo = k.saturating_sub(o.band);
                let jhi = (k + o.band + 1).min(self.dim);
                for j in jlo..jhi {
                    let t = aik.mul(&o.get(k, j));
                    r.add_to(i, j, &t);
                }
            }
        }
        r
    }

    /// A - sigma I.
    pub fn shifted(&self, sigma: &Cplx) -> BandMatrix {
        let mut m = self.clone();
        let d = m.band; // main diagonal slot
        for v in m.diags[d].iter_mut() {
            *v = v.sub(sigma);
        }
        m
    }

    /// Unpivoted banded LU in place; multipliers land in the strict lower
    /// band. Fails on a pivot below the given absolute threshold.
    pub fn lu(mut self, pivot_floor: &Real) -> Result<BandLu> {
        let n = self.dim;
        let b = self.band;
        for k in 0..n {
            let piv = self.get(k, k);
            if piv.abs() < *pivot_floor {
                return Err(Error::SingularMatrix);
            }
            let inv = piv.inv();
            for i in k + 1..(k + b + 1).min(n) {
                let m = self.get(i, k).mul(&inv);
                for j in k + 1..(k + b + 1).min(n) {
                    let upd = self.get(i, j).sub(&m.mul(&self.get(k, j)));
                    self.set(i, j, upd);
                }
                self.set(i, k, m);
            }
        }
        Ok(BandLu { factors: self })
    }
}

/// LU factors of a banded matrix (unit-lower multipliers in the lower band,
/// U in the diagonal and upper band).
pub struct BandLu {
    factors: BandMatrix,
}

impl BandLu {
    pub fn solve(&self, rhs: &[Cplx]) -> Vec<Cplx> {
        let a = &self.factors;
        let n = a.dim;
        let b = a.band;
        let mut x = rhs.to_vec();
        // forward: L y = rhs
        for i in 0..n {
            let lo = i.saturating_sub(b);
            for j in lo..i {
                let t = a.get(i, j).mul(&x[j]);
                x[i] = x[i].sub(&t);
            }
        }
        // backward: U x = y
        for i in (0..n).rev() {
            let hi = (i + b + 1).min(n);
            for j in i + 1..hi {
                let t = a.get(i, j).mul(&x[j]);
                x[i] = x[i].sub(&t);
            }
            x[i] = x[i].div(&a.get(i, i));
        }
        x
    }
}

fn norm(x: &[Cplx], prec: Prec) -> Real {
    let mut s = prec.zero();
    for v in x {
        s += v.norm_sqr();
    }
    s.sqrt()
}

fn scale(x: &mut [Cplx], factor: &Real) {
    for v in x.iter_mut() {
        *v = v.mul_real(factor);
    }
}

/// Unconjugated bilinear form x^T y (the natural inner product for
/// complex-symmetric eigenproblems).
fn bilinear(x: &[Cplx], y: &[Cplx], prec: Prec) -> Cplx {
    let mut s = Cplx::zero(prec);
    for (a, b) in x.iter().zip(y) {
        s = s.add(&a.mul(b));
    }
    s
}

/// Eigenvalue of `h` nearest the seed, by Rayleigh-quotient inverse
/// iteration with the unconjugated quotient. `start_index`, when given,
/// selects the initial basis vector (otherwise the one nearest the seed's
/// real part on the harmonic ladder).
pub fn eigen_near(h: &BandMatrix, seed: &Cplx, start_index: Option<usize>, prec: Prec) -> Result<(Cplx, Vec<Cplx>)> {
    let n = h.dim;
    let idx = start_index
        .unwrap_or_else(|| (seed.re.to_f64() - 0.5).round().max(0.0) as usize)
        .min(n - 1);
    let mut x = vec![Cplx::zero(prec); n];
    x[idx] = Cplx::one(prec);
    let mut sigma = seed.clone();
    let bits = prec.bits();
    let tol = Real::with_val(bits, prec.eps() * prec.real_from_f64(1e8));
    let pivot_floor = Real::with_val(bits, prec.eps() * prec.eps());
    let max_iter = 60;
    let mut nudge = 0u32;
    for _ in 0..max_iter {
        let lu = match h.shifted(&sigma).lu(&pivot_floor) {
            Ok(lu) => lu,
            Err(Error::SingularMatrix) if nudge < 4 => {
                // shift sits numerically on the spectrum: nudge and retry
                nudge += 1;
                let off = Real::with_val(bits, prec.eps().sqrt());
                sigma = sigma.add(&Cplx::from_real(off));
                continue;
            }
            Err(e) => return Err(e),
        };
        let mut y = lu.solve(&x);
        let nrm = norm(&y, prec);
        if !nrm.is_finite() || nrm.is_zero() {
            return Err(Error::EigenNoConvergence { iterations: max_iter });
        }
        let inv = Real::with_val(bits, nrm.recip_ref());
        scale(&mut y, &inv);
        let hy = h.matvec(&y);
        let num = bilinear(&y, &hy, prec);
        let den = bilinear(&y, &y, prec);
        let lambda = num.div(&den);
        let drift = lambda.sub(&sigma).abs();
        x = y;
        sigma = lambda.clone();
        let floor = Real::with_val(bits, lambda.abs().max(&prec.one()));
        if drift < Real::with_val(bits, &tol * &floor) {
            return Ok((lambda, x));
        }
    }
    Err(Error::EigenNoConvergence { iterations: max_iter })
}
