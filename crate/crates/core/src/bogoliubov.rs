//! Photon-sector block of the canonical transformation.
//!
//! Rows and columns are indexed by `sλ` in the order 11, 12, 21, 22
//! (see [`idx`]). Entries are
//!
//! ```text
//! u[sλ][kλ'] = phase(λ, λ') q_{kλ'} (r + κ_s) / (√(r κ_s) 2 (r² - κ_s²))
//! v[sλ][kλ'] = phase(λ, λ') q_{kλ'} (r - κ_s) / (√(r κ_s) 2 (r² - κ_s²))
//! ```
//!
//! with r = r_{kλ'}, using √(r/κ) ± √(κ/r) = (r ± κ)/√(rκ). The phase is
//! (-1)^(λ'-1) on λ = 1 rows and -i on λ = 2 rows.

use num_complex::Complex;

use crate::dispersion::ModeRoots;
use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::precision::{cabs, quad, to_f64, Cplx, Quad};

/// Flat index of the mode/polarization pair (s, λ).
#[inline]
pub fn idx(s: usize, lambda: usize) -> usize {
    debug_assert!((1..=2).contains(&s) && (1..=2).contains(&lambda));
    2 * (s - 1) + (lambda - 1)
}

#[derive(Clone, Debug)]
pub struct BogoliubovBlock {
    pub u: [[Cplx; 4]; 4],
    pub v: [[Cplx; 4]; 4],
    pub q: [[Quad; 2]; 2],
    pub roots: ModeRoots,
}

impl BogoliubovBlock {
    /// u_{sλ,kλ'}.
    pub fn u_at(&self, s: usize, lambda: usize, k: usize, lambda_p: usize) -> Cplx {
        self.u[idx(s, lambda)][idx(k, lambda_p)]
    }

    pub fn v_at(&self, s: usize, lambda: usize, k: usize, lambda_p: usize) -> Cplx {
        self.v[idx(s, lambda)][idx(k, lambda_p)]
    }

    pub fn q_at(&self, k: usize, lambda: usize) -> f64 {
        to_f64(self.q[k - 1][lambda - 1])
    }
}

/// r_{kλ} - κ_s in double-double, exact for the stored offset.
fn gap(roots: &ModeRoots, k: usize, lambda: usize, s: usize) -> Quad {
    (quad(roots.kappa(k)) - quad(roots.kappa(s))) + quad(roots.offset(k, lambda))
}

/// r_{kλ}² - κ_s².
fn gap_sq(roots: &ModeRoots, k: usize, lambda: usize, s: usize) -> Quad {
    gap(roots, k, lambda, s) * (roots.r_quad(k, lambda) + quad(roots.kappa(s)))
}

/// Normalizations q_{kλ}, indexed `[k-1][λ-1]`.
pub fn q_norms(roots: &ModeRoots, params: &ModelParams) -> Result<[[Quad; 2]; 2]> {
    let mut q = [[Quad::ZERO; 2]; 2];
    for k in 1..=2 {
        for lambda in 1..=2 {
            let r = roots.r_quad(k, lambda);
            // (-1)^λ ω / (r³ eps)
            let sign = if lambda == 1 { -1.0 } else { 1.0 };
            let field = quad(sign * params.omega()) / (r * r * r * quad(params.eps()));
            let mut poles = Quad::ZERO;
            for s in 1..=2 {
                let g = gap_sq(roots, k, lambda, s);
                poles += (g * g).recip();
            }
            let radicand = field + quad(2.0) * poles;
            if !(radicand > Quad::ZERO) || !radicand.is_finite() {
                return Err(Error::NegativeRadicand {
                    k,
                    lambda,
                    radicand: to_f64(radicand),
                });
            }
            q[k - 1][lambda - 1] = radicand.sqrt().recip();
        }
    }
    Ok(q)
}

fn phase(lambda: usize, lambda_p: usize) -> Cplx {
    match (lambda, lambda_p) {
        (1, 1) => Complex::new(Quad::ONE, Quad::ZERO),
        (1, _) => Complex::new(-Quad::ONE, Quad::ZERO),
        _ => Complex::new(Quad::ZERO, -Quad::ONE),
    }
}

pub fn build_block(roots: &ModeRoots, params: &ModelParams) -> Result<BogoliubovBlock> {
    let q = q_norms(roots, params)?;
    let zero = Complex::new(Quad::ZERO, Quad::ZERO);
    let mut u = [[zero; 4]; 4];
    let mut v = [[zero; 4]; 4];
    for k in 1..=2 {
        for lambda_p in 1..=2 {
            let r = roots.r_quad(k, lambda_p);
            for s in 1..=2 {
                let kappa = quad(roots.kappa(s));
                let minus = gap(roots, k, lambda_p, s);
                if minus == Quad::ZERO {
                    return Err(Error::PoleEvaluation {
                        r: roots.r(k, lambda_p),
                        kappa: roots.kappa(s),
                    });
                }
                let plus = r + kappa;
                let common =
                    q[k - 1][lambda_p - 1] / ((r * kappa).sqrt() * quad(2.0) * minus * plus);
                let u_mag = plus * common;
                let v_mag = minus * common;
                for lambda in 1..=2 {
                    let ph = phase(lambda, lambda_p);
                    let (row, col) = (idx(s, lambda), idx(k, lambda_p));
                    u[row][col] = Complex::new(ph.re * u_mag, ph.im * u_mag);
                    v[row][col] = Complex::new(ph.re * v_mag, ph.im * v_mag);
                }
            }
        }
    }
    Ok(BogoliubovBlock {
        u,
        v,
        q,
        roots: roots.clone(),
    })
}

/// (max |u u† - v v† - I|, max |v uᵀ - u vᵀ|) over the photon block.
///
/// The block omits the quasielectron rows, so neither vanishes exactly;
/// both go to zero with eps.
pub fn identity_defect(block: &BogoliubovBlock) -> (f64, f64) {
    let (u, v) = (&block.u, &block.v);
    let mut defect_uu = Quad::ZERO;
    let mut defect_sym = Quad::ZERO;
    for i in 0..4 {
        for j in 0..4 {
            let mut herm = Complex::new(Quad::ZERO, Quad::ZERO);
            let mut sym = herm;
            for m in 0..4 {
                herm = herm + u[i][m] * u[j][m].conj() - v[i][m] * v[j][m].conj();
                sym = sym + v[i][m] * u[j][m] - u[i][m] * v[j][m];
            }
            if i == j {
                herm.re -= Quad::ONE;
            }
            let (a, b) = (cabs(herm), cabs(sym));
            if a > defect_uu {
                defect_uu = a;
            }
            if b > defect_sym {
                defect_sym = b;
            }
        }
    }
    (to_f64(defect_uu), to_f64(defect_sym))
}
