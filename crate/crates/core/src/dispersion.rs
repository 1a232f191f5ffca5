//! Quasiphoton frequencies r_{kλ}.
//!
//! Exact roots are positive zeros of
//!
//! ```text
//! Σ_s eps / (r² - κ_s²) = 1 + (-1)^(λ-1) ω / r
//! ```
//!
//! one next to each photon frequency κ_k per branch λ. Roots are stored as
//! offsets `r - κ_k`: at the reference parameters the offset is ~2e-5 while the
//! exact/perturbative disagreement is ~1e-13, below the resolution of `r`
//! itself in f64.

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::precision::{quad, Quad};

/// Default relative tolerance for exact roots.
pub const DEFAULT_TOL: f64 = 1e-12;

const MAX_BISECTIONS: usize = 400;
const NEWTON_POLISH_STEPS: usize = 4;
const MAX_BRACKET_DOUBLINGS: usize = 200;

/// (-1)^(λ-1): +1 for the λ = 1 branch, -1 for λ = 2.
#[inline]
pub fn branch_sign(lambda: usize) -> f64 {
    match lambda {
        1 => 1.0,
        2 => -1.0,
        _ => panic!("polarization index must be 1 or 2, got {lambda}"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RootMethod {
    /// Bracketed solve; `tol` is relative to κ_k.
    Exact {
        tol: f64,
    },
    Perturbative,
}

/// The four roots r_{kλ}, k, λ ∈ {1, 2}.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeRoots {
    kappa: [f64; 2],
    offset: [[f64; 2]; 2],
    method: RootMethod,
}

impl Default for RootMethod {
    fn default() -> Self {
        RootMethod::Exact { tol: DEFAULT_TOL }
    }
}

impl ModeRoots {
    pub fn method(&self) -> RootMethod {
        self.method
    }

    /// r_{kλ} rounded to f64.
    pub fn r(&self, k: usize, lambda: usize) -> f64 {
        self.kappa[k - 1] + self.offset[k - 1][lambda - 1]
    }

    /// r_{kλ} - κ_k, at full precision.
    pub fn offset(&self, k: usize, lambda: usize) -> f64 {
        self.offset[k - 1][lambda - 1]
    }

    /// r_{kλ} as an exact double-double sum κ_k + offset.
    pub fn r_quad(&self, k: usize, lambda: usize) -> Quad {
        quad(self.kappa[k - 1]) + quad(self.offset[k - 1][lambda - 1])
    }

    pub fn kappa(&self, k: usize) -> f64 {
        self.kappa[k - 1]
    }

    /// Residuals of the dispersion equation at each stored root, `[k-1][λ-1]`.
    pub fn residuals(&self, params: &ModelParams) -> [[f64; 2]; 2] {
        let mut out = [[0.0; 2]; 2];
        for k in 1..=2 {
            for lambda in 1..=2 {
                out[k - 1][lambda - 1] =
                    offset_residual(params, k, lambda, self.offset(k, lambda)).value;
            }
        }
        out
    }
}

/// Residual of the dispersion equation at frequency `r` for branch `lambda`.
pub fn residual(r: f64, params: &ModelParams, lambda: usize) -> Result<f64> {
    let sigma = branch_sign(lambda);
    let mut sum = 0.0;
    for s in 1..=2 {
        let kappa = params.kappa(s);
        let gap = r - kappa;
        if gap.abs() <= 8.0 * f64::EPSILON * kappa {
            return Err(Error::PoleEvaluation { r, kappa });
        }
        sum += params.eps() / (gap * (r + kappa));
    }
    Ok(sum - 1.0 - sigma * params.omega() / r)
}

struct Eval {
    value: f64,
    slope: f64,
}

/// Residual and its derivative written in terms of the offset δ = r - κ_k.
fn offset_residual(params: &ModelParams, k: usize, lambda: usize, delta: f64) -> Eval {
    let kappa = params.kappa(k);
    let other = params.kappa(3 - k);
    let eps = params.eps();
    let omega = params.omega();
    let sigma = branch_sign(lambda);

    let r = kappa + delta;
    let self_gap = delta * (2.0 * kappa + delta);
    let cross_gap = (kappa - other) * (kappa + other) + self_gap;
    let value = eps / self_gap + eps / cross_gap - 1.0 - sigma * omega / r;
    let slope = -2.0 * eps * r / (self_gap * self_gap) - 2.0 * eps * r / (cross_gap * cross_gap)
        + sigma * omega / (r * r);
    Eval { value, slope }
}

/// Roots by the chosen method.
pub fn solve(params: &ModelParams, method: RootMethod) -> Result<ModeRoots> {
    match method {
        RootMethod::Exact { tol } => exact_roots(params, tol),
        RootMethod::Perturbative => perturbative_roots(params),
    }
}

/// First-order roots in eps.
pub fn perturbative_roots(params: &ModelParams) -> Result<ModeRoots> {
    let mut offset = [[0.0; 2]; 2];
    for k in 1..=2 {
        for lambda in 1..=2 {
            offset[k - 1][lambda - 1] = perturbative_offset(params, k, lambda)?;
        }
    }
    Ok(ModeRoots {
        kappa: [params.kappa1(), params.kappa2()],
        offset,
        method: RootMethod::Perturbative,
    })
}

fn perturbative_offset(params: &ModelParams, k: usize, lambda: usize) -> Result<f64> {
    let (k1, k2) = (params.kappa1(), params.kappa2());
    let kappa = params.kappa(k);
    let sum_sq = k1 * k1 + k2 * k2;
    let numerator = 2.0 * kappa * kappa - sum_sq;
    let denominator = branch_sign(lambda) * 2.0 * params.omega() * numerator
        + kappa * (5.0 * kappa * kappa - 3.0 * sum_sq)
        + k1 * k1 * k2 * k2 / kappa;
    if !(denominator.abs() > 1e-12 * kappa.powi(3)) {
        return Err(Error::SingularDenominator {
            k,
            lambda,
            denominator,
        });
    }
    Ok(params.eps() * numerator / denominator)
}

/// Bracketed roots nearest each κ_k, polished to |residual| ≤ `tol`·κ_k.
pub fn exact_roots(params: &ModelParams, tol: f64) -> Result<ModeRoots> {
    if !(params.eps() > 0.0) {
        return Err(Error::ZeroCoupling);
    }
    if !(tol > 0.0) {
        return Err(Error::DomainError {
            what: "root tolerance",
            value: tol,
        });
    }
    let mut offset = [[0.0; 2]; 2];
    for k in 1..=2 {
        for lambda in 1..=2 {
            offset[k - 1][lambda - 1] = solve_offset(params, k, lambda, tol)?;
        }
    }
    Ok(ModeRoots {
        kappa: [params.kappa1(), params.kappa2()],
        offset,
        method: RootMethod::Exact { tol },
    })
}

fn solve_offset(params: &ModelParams, k: usize, lambda: usize, tol: f64) -> Result<f64> {
    let kappa = params.kappa(k);
    let other = params.kappa(3 - k);
    let cap = 0.5 * (kappa - other).abs().min(kappa);
    let g = |d: f64| offset_residual(params, k, lambda, d).value;

    let hint = match perturbative_offset(params, k, lambda) {
        Ok(h) if h.is_finite() && h != 0.0 => h.abs(),
        _ => params.eps() / (2.0 * kappa),
    };
    // stay clear of the pole at δ = 0, where g → ±∞
    let inner = (hint * 1e-9).min(cap * 1e-3);

    let mut width = (10.0 * hint).min(cap);
    let mut found = None;
    for _ in 0..MAX_BRACKET_DOUBLINGS {
        let right = (inner, width);
        let left = (-width, -inner);
        let mut candidates = Vec::with_capacity(2);
        for (lo, hi) in [right, left] {
            if (g(lo) > 0.0) != (g(hi) > 0.0) {
                candidates.push(bisect(&g, lo, hi));
            }
        }
        if let Some(best) = candidates
            .into_iter()
            .min_by(|a, b| a.0.abs().total_cmp(&b.0.abs()))
        {
            found = Some(best);
            break;
        }
        if width >= cap {
            break;
        }
        width = (2.0 * width).min(cap);
    }
    let Some((mut delta, lo, hi)) = found else {
        return Err(Error::BracketFailure {
            k,
            lambda,
            lo: kappa - width,
            hi: kappa + width,
        });
    };

    // damped Newton polish, kept inside the final bracket
    for _ in 0..NEWTON_POLISH_STEPS {
        let e = offset_residual(params, k, lambda, delta);
        if e.value == 0.0 || e.slope == 0.0 {
            break;
        }
        let mut step = e.value / e.slope;
        let mut accepted = false;
        for _ in 0..8 {
            let trial = delta - step;
            if trial >= lo && trial <= hi && g(trial).abs() < e.value.abs() {
                delta = trial;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }

    let res = g(delta);
    if !(res.abs() <= tol * kappa) {
        return Err(Error::NonConvergence {
            k,
            lambda,
            iterations: MAX_BISECTIONS,
            residual: res,
        });
    }
    Ok(delta)
}

/// Bisection down to adjacent floats. Returns (midpoint, lo, hi).
fn bisect(g: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64, f64) {
    let lo_positive = g(lo) > 0.0;
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = g(mid);
        if v == 0.0 {
            return (mid, mid, mid);
        }
        if (v > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi), lo, hi)
}
