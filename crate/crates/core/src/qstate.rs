//! Two-photon amplitudes over the computational basis |00⟩, |01⟩, |10⟩, |11⟩.
//!
//! A state with one quasiphoton of each kind, polarizations (λ1, λ2), expands
//! over free-photon pairs as
//!
//! ```text
//! υ(λ, λ') = u[1λ][1λ1] u[2λ'][2λ2] + u[2λ'][1λ1] u[1λ][2λ2]
//! ```
//!
//! with same-mode double-creation terms dropped. Basis index is
//! 2(λ-1) + (λ'-1), so λ = 1 maps to qubit value 0.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::bogoliubov::{q_norms, BogoliubovBlock};
use crate::dispersion::ModeRoots;
use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::precision::{norm_sqr, quad, scale, to_f64, Cplx, Quad};

/// Polarizations of the first- and second-kind quasiphoton; 1 = up (along B), 2 = down.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PolarizationConfig {
    pub lambda1: usize,
    pub lambda2: usize,
}

impl PolarizationConfig {
    pub const UP_UP: Self = Self {
        lambda1: 1,
        lambda2: 1,
    };
    pub const UP_DOWN: Self = Self {
        lambda1: 1,
        lambda2: 2,
    };
    pub const DOWN_UP: Self = Self {
        lambda1: 2,
        lambda2: 1,
    };
    pub const DOWN_DOWN: Self = Self {
        lambda1: 2,
        lambda2: 2,
    };
    pub const ALL: [Self; 4] = [Self::UP_UP, Self::UP_DOWN, Self::DOWN_UP, Self::DOWN_DOWN];

    pub fn new(lambda1: usize, lambda2: usize) -> Result<Self> {
        if !(1..=2).contains(&lambda1) || !(1..=2).contains(&lambda2) {
            return Err(Error::Validation(vec![format!(
                "polarization indices must be 1 or 2 (got {lambda1}, {lambda2})"
            )]));
        }
        Ok(Self { lambda1, lambda2 })
    }

    /// Parallel polarizations, for which the state is a product state at first order.
    pub fn is_parallel(&self) -> bool {
        self.lambda1 == self.lambda2
    }
}

impl fmt::Display for PolarizationConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = |l: usize| if l == 1 { 'u' } else { 'd' };
        write!(f, "{}{}", c(self.lambda1), c(self.lambda2))
    }
}

impl FromStr for PolarizationConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            location: "pol".into(),
            message: format!("expected one of uu, ud, du, dd (got {s:?})"),
        };
        let mut chars = s.trim().chars();
        let mut next = || match chars.next() {
            Some('u') | Some('U') => Ok(1),
            Some('d') | Some('D') => Ok(2),
            _ => Err(bad()),
        };
        let (lambda1, lambda2) = (next()?, next()?);
        if chars.next().is_some() {
            return Err(bad());
        }
        Ok(Self { lambda1, lambda2 })
    }
}

#[derive(Clone, Debug)]
pub struct TwoQubitAmplitudes {
    v: [Cplx; 4],
    raw_norm_sqr: Quad,
    normalized: bool,
}

impl TwoQubitAmplitudes {
    /// Wraps a raw amplitude vector.
    pub fn from_values(v: [Cplx; 4]) -> Result<Self> {
        let n: Quad = v.iter().fold(Quad::ZERO, |acc, z| acc + norm_sqr(*z));
        if !(n > Quad::ZERO) {
            return Err(Error::ZeroNorm);
        }
        Ok(Self {
            v,
            raw_norm_sqr: n,
            normalized: false,
        })
    }

    pub fn values(&self) -> &[Cplx; 4] {
        &self.v
    }

    pub fn value(&self, i: usize) -> Complex<f64> {
        Complex::new(to_f64(self.v[i].re), to_f64(self.v[i].im))
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Σ|υ|² of the vector as built, before any rescaling.
    pub fn raw_norm_sqr(&self) -> Quad {
        self.raw_norm_sqr
    }

    pub fn raw_norm(&self) -> f64 {
        to_f64(self.raw_norm_sqr.sqrt())
    }

    pub fn norm_sqr(&self) -> Quad {
        self.v.iter().fold(Quad::ZERO, |acc, z| acc + norm_sqr(*z))
    }

    /// Rescaled to unit norm; the raw norm is kept.
    pub fn normalized(&self) -> Self {
        let s = self.raw_norm_sqr.sqrt().recip();
        Self {
            v: self.v.map(|z| scale(z, s)),
            raw_norm_sqr: self.raw_norm_sqr,
            normalized: true,
        }
    }

    /// M[λ][λ'] = υ(λ, λ').
    pub fn matrix(&self) -> [[Cplx; 2]; 2] {
        [[self.v[0], self.v[1]], [self.v[2], self.v[3]]]
    }

    pub fn det(&self) -> Cplx {
        self.v[0] * self.v[3] - self.v[1] * self.v[2]
    }
}

pub fn amplitudes(
    block: &BogoliubovBlock,
    config: PolarizationConfig,
) -> Result<TwoQubitAmplitudes> {
    let PolarizationConfig { lambda1, lambda2 } = config;
    let mut v = [Complex::new(Quad::ZERO, Quad::ZERO); 4];
    for lambda in 1..=2 {
        for lambda_p in 1..=2 {
            v[2 * (lambda - 1) + (lambda_p - 1)] = block.u_at(1, lambda, 1, lambda1)
                * block.u_at(2, lambda_p, 2, lambda2)
                + block.u_at(2, lambda_p, 1, lambda1) * block.u_at(1, lambda, 2, lambda2);
        }
    }
    TwoQubitAmplitudes::from_values(v)
}

/// Real coefficients of the closed-form amplitude patterns.
///
/// `a` pairs each root with the other mode's frequency, `b` with its own.
/// Down-up: υ = (-(a+b), -i(a-b), i(a-b), -(a+b)).
/// Up-up: υ = (a+b)(1, -i, -i, -1).
#[derive(Clone, Copy, Debug)]
pub struct ClosedFormAb {
    pub a: Quad,
    pub b: Quad,
    pub config: PolarizationConfig,
}

impl ClosedFormAb {
    /// Schmidt gap implied by the pattern: 4|a² - b²| (down-up) or 4(a+b)² (up-up).
    pub fn y(&self) -> Quad {
        let four = quad(4.0);
        if self.config == PolarizationConfig::DOWN_UP {
            (four * (self.a * self.a - self.b * self.b)).abs()
        } else {
            four * (self.a + self.b) * (self.a + self.b)
        }
    }

    /// Amplitudes the pattern predicts.
    pub fn pattern(&self) -> [Cplx; 4] {
        let (a, b) = (self.a, self.b);
        let z = Quad::ZERO;
        if self.config == PolarizationConfig::DOWN_UP {
            let s = -(a + b);
            let d = a - b;
            [
                Complex::new(s, z),
                Complex::new(z, -d),
                Complex::new(z, d),
                Complex::new(s, z),
            ]
        } else {
            let s = a + b;
            [
                Complex::new(s, z),
                Complex::new(z, -s),
                Complex::new(z, -s),
                Complex::new(-s, z),
            ]
        }
    }
}

/// (r_a + κ_x)(r_b + κ_y) q_a q_b / (4 √(r_a κ_x r_b κ_y) (r_a² - κ_x²)(r_b² - κ_y²)).
fn pair_product(
    roots: &ModeRoots,
    q: &[[Quad; 2]; 2],
    a: (usize, usize, usize),
    b: (usize, usize, usize),
) -> Quad {
    let factor = |(k, lambda, s): (usize, usize, usize)| {
        let r = roots.r_quad(k, lambda);
        let kappa = quad(roots.kappa(s));
        let minus = (quad(roots.kappa(k)) - kappa) + quad(roots.offset(k, lambda));
        q[k - 1][lambda - 1] / ((r * kappa).sqrt() * minus)
    };
    factor(a) * factor(b) / quad(4.0)
}

/// Closed-form (a, b) for the down-up and up-up configurations.
pub fn closed_form_ab(
    roots: &ModeRoots,
    params: &ModelParams,
    config: PolarizationConfig,
) -> Result<ClosedFormAb> {
    if config != PolarizationConfig::DOWN_UP && config != PolarizationConfig::UP_UP {
        return Err(Error::UnsupportedConfig(config));
    }
    let q = q_norms(roots, params)?;
    let (l1, l2) = (config.lambda1, config.lambda2);
    let a = pair_product(roots, &q, (1, l1, 2), (2, l2, 1));
    let b = pair_product(roots, &q, (1, l1, 1), (2, l2, 2));
    Ok(ClosedFormAb { a, b, config })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bogoliubov::build_block;
    use crate::dispersion::{exact_roots, perturbative_roots, DEFAULT_TOL};
    use crate::params::make_params;
    use crate::precision::cabs;

    fn setup(eps: f64, omega: f64) -> (ModelParams, BogoliubovBlock) {
        let p = make_params(2500.0, 3000.0, omega, eps).unwrap();
        let b = build_block(&exact_roots(&p, DEFAULT_TOL).unwrap(), &p).unwrap();
        (p, b)
    }

    fn max_diff(x: &[Cplx; 4], y: &[Cplx; 4]) -> f64 {
        x.iter()
            .zip(y)
            .map(|(a, b)| to_f64(cabs(*a - *b)))
            .fold(0.0, f64::max)
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["uu", "ud", "du", "dd"] {
            let c: PolarizationConfig = s.parse().unwrap();
            assert_eq!(c.to_string(), s);
        }
        assert_eq!(
            "du".parse::<PolarizationConfig>().unwrap(),
            PolarizationConfig::DOWN_UP
        );
        assert_eq!(
            "ud".parse::<PolarizationConfig>().unwrap(),
            PolarizationConfig {
                lambda1: 1,
                lambda2: 2
            }
        );
        for bad in ["", "u", "udu", "xy", "d1"] {
            assert!(bad.parse::<PolarizationConfig>().is_err(), "{bad}");
        }
        assert!(PolarizationConfig::new(0, 1).is_err());
    }

    #[test]
    fn down_up_matches_closed_pattern() {
        let (p, b) = setup(0.1, 0.5);
        let amps = amplitudes(&b, PolarizationConfig::DOWN_UP).unwrap();
        let ab = closed_form_ab(&b.roots, &p, PolarizationConfig::DOWN_UP).unwrap();
        assert!(max_diff(amps.values(), &ab.pattern()) < 1e-28);
        let v = amps.values();
        assert_eq!(v[2], -v[1]);
        assert_eq!(v[3], v[0]);
    }

    #[test]
    fn up_up_matches_closed_pattern() {
        let (p, b) = setup(0.1, 0.5);
        let amps = amplitudes(&b, PolarizationConfig::UP_UP).unwrap();
        let ab = closed_form_ab(&b.roots, &p, PolarizationConfig::UP_UP).unwrap();
        assert!(max_diff(amps.values(), &ab.pattern()) < 1e-28);
        let v = amps.values();
        let minus_i = Complex::new(Quad::ZERO, -Quad::ONE);
        assert_eq!(v[1], minus_i * v[0]);
        assert_eq!(v[3], -v[0]);
    }

    #[test]
    fn down_up_gap_is_one_minus_first_order() {
        // oracle: eps Phi at the reference point, from the closed-form expression
        let (k1, k2, w) = (2500.0f64, 3000.0f64, 0.5f64);
        let phi = w
            * (w * w * (k2 - k1) + 2.0 * w * (k2 * k2 + k1 * k1) + (k2.powi(3) - k1.powi(3)))
            / (2.0 * k1 * k2 * (w - k1).powi(2) * (w + k2).powi(2));
        let defect = |eps: f64| {
            let (p, b) = setup(eps, w);
            let ab = closed_form_ab(&b.roots, &p, PolarizationConfig::DOWN_UP).unwrap();
            to_f64(ab.y() - quad(1.0 - eps * phi))
        };
        let (d1, d2) = (defect(0.1), defect(0.05));
        assert!(d1.abs() < 50.0 * 0.01 * phi, "{d1:e}");
        let ratio = d1 / d2;
        assert!((3.5..=4.5).contains(&ratio), "{ratio}");
    }

    #[test]
    fn zero_field_gap_is_one_to_second_order() {
        for eps in [0.1, 0.05] {
            let (p, b) = setup(eps, 0.0);
            let ab = closed_form_ab(&b.roots, &p, PolarizationConfig::DOWN_UP).unwrap();
            let d = to_f64(ab.y() - Quad::ONE).abs();
            assert!(d < 50.0 * eps * eps * 1e-12, "{d:e}");
        }
    }

    #[test]
    fn up_up_closed_gap_is_one() {
        let (p, b) = setup(0.1, 0.5);
        let ab = closed_form_ab(&b.roots, &p, PolarizationConfig::UP_UP).unwrap();
        assert!((to_f64(ab.y()) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn antiparallel_closed_form_rejects_other_configs() {
        let (p, b) = setup(0.1, 0.5);
        for c in [PolarizationConfig::UP_DOWN, PolarizationConfig::DOWN_DOWN] {
            assert!(matches!(
                closed_form_ab(&b.roots, &p, c),
                Err(Error::UnsupportedConfig(_))
            ));
        }
    }

    #[test]
    fn raw_norm_is_one_to_first_order() {
        let mut prev = f64::INFINITY;
        for eps in [0.1, 0.05, 0.025] {
            let (_, b) = setup(eps, 0.5);
            let amps = amplitudes(&b, PolarizationConfig::DOWN_UP).unwrap();
            let dev = to_f64(amps.raw_norm_sqr() - Quad::ONE).abs();
            assert!(dev < 50.0 * eps * 1e-10, "{dev:e}");
            assert!(dev < prev);
            prev = dev;
        }
    }

    #[test]
    fn normalization_preserves_raw_norm() {
        let (_, b) = setup(0.1, 0.5);
        for c in PolarizationConfig::ALL {
            let amps = amplitudes(&b, c).unwrap();
            let n = amps.normalized();
            assert!(n.is_normalized() && !amps.is_normalized());
            assert!(to_f64(n.norm_sqr() - Quad::ONE).abs() < 1e-28);
            assert_eq!(n.raw_norm(), amps.raw_norm());
        }
    }

    #[test]
    fn parallel_states_are_rank_one() {
        for eps in [0.1, 0.01] {
            let (_, b) = setup(eps, 0.5);
            for c in [PolarizationConfig::UP_UP, PolarizationConfig::DOWN_DOWN] {
                let det = to_f64(cabs(amplitudes(&b, c).unwrap().det()));
                assert!(det <= 50.0 * eps * eps, "{c}: {det:e}");
            }
        }
    }

    #[test]
    fn zero_vector_is_rejected() {
        let z = Complex::new(Quad::ZERO, Quad::ZERO);
        assert!(matches!(
            TwoQubitAmplitudes::from_values([z; 4]),
            Err(Error::ZeroNorm)
        ));
    }

    #[test]
    fn perturbative_and_exact_patterns_agree() {
        let p = make_params(2500.0, 3000.0, 0.5, 0.1).unwrap();
        let pert = build_block(&perturbative_roots(&p).unwrap(), &p).unwrap();
        let (_, exact) = setup(0.1, 0.5);
        let c = PolarizationConfig::DOWN_UP;
        let d = max_diff(
            amplitudes(&pert, c).unwrap().values(),
            amplitudes(&exact, c).unwrap().values(),
        );
        assert!(d < 50.0 * 0.01, "{d:e}");
    }
}
