//! Entanglement measures of the two-photon state.
//!
//! The information measure is the von Neumann entropy (bits) of the
//! first photon's reduced density; the Schmidt measure is the linear entropy
//! 1 - tr ρ². Both are driven by the Schmidt gap y, and at weak coupling both
//! are tiny deficits, so they are formed in double-double from 1 - y.

use num_complex::Complex;

use crate::bogoliubov::build_block;
use crate::dispersion::{solve, RootMethod};
use crate::error::{Error, Result, Stage};
use crate::params::ModelParams;
use crate::precision::{cabs, norm_sqr, quad, to_f64, Cplx, Quad, Scalar};
use crate::qstate::{amplitudes, PolarizationConfig, TwoQubitAmplitudes};

/// How far y may overshoot 1 (or 1 - y undershoot 0) before it is a domain error.
pub const GAP_SLACK: f64 = 1e-9;

/// Which state the density is built from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Normalization {
    /// The truncated first-order vector as built. Its norm deficit carries the
    /// first-order entanglement, matching the closed forms.
    #[default]
    Truncated,
    /// The truncated vector rescaled to unit norm.
    Renormalized,
}

/// Perturbative order kept in the measures.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Order {
    /// Everything the truncated pipeline produces.
    #[default]
    Full,
    /// First order in eps only, by Richardson elimination over eps and eps/2.
    Leading,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EvalOptions {
    pub method: RootMethod,
    pub normalization: Normalization,
    pub order: Order,
}

/// ρ = M M† for the first photon, M[λ][λ'] = υ(λ, λ').
#[derive(Clone, Debug)]
pub struct ReducedDensity {
    pub rho: [[Cplx; 2]; 2],
}

impl ReducedDensity {
    pub fn trace(&self) -> Quad {
        self.rho[0][0].re + self.rho[1][1].re
    }

    /// Schmidt gap √((ρ11 - ρ22)² + 4|ρ12|²).
    pub fn y(&self) -> Quad {
        let d = self.rho[0][0].re - self.rho[1][1].re;
        (d * d + quad(4.0) * norm_sqr(self.rho[0][1])).sqrt()
    }

    /// 1 - y.
    pub fn gap_deficit(&self) -> Quad {
        Quad::ONE - self.y()
    }

    /// Eigenvalues (tr - y)/2 ≤ (tr + y)/2.
    pub fn eigs(&self) -> (f64, f64) {
        let (t, y) = (self.trace(), self.y());
        let half = quad(0.5);
        (to_f64((t - y) * half), to_f64((t + y) * half))
    }

    /// Largest entry of |ρ - ρ†|.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = Quad::ZERO;
        for i in 0..2 {
            for j in 0..2 {
                let d = cabs(self.rho[i][j] - self.rho[j][i].conj());
                if d > worst {
                    worst = d;
                }
            }
        }
        to_f64(worst)
    }

    pub fn purity(&self) -> Quad {
        let r = &self.rho;
        r[0][0].re * r[0][0].re + r[1][1].re * r[1][1].re + quad(2.0) * norm_sqr(r[0][1])
    }
}

pub fn reduced_density(amps: &TwoQubitAmplitudes) -> ReducedDensity {
    let m = amps.matrix();
    let zero = Complex::new(Quad::ZERO, Quad::ZERO);
    let mut rho = [[zero; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            rho[i][j] = m[i][0] * m[j][0].conj() + m[i][1] * m[j][1].conj();
        }
    }
    ReducedDensity { rho }
}

/// Information measure in bits from the Schmidt gap y.
pub fn info_measure(y: f64) -> Result<f64> {
    if !(y >= 0.0) {
        return Err(Error::DomainError {
            what: "Schmidt gap y",
            value: y,
        });
    }
    info_measure_deficit(1.0 - y)
}

/// Information measure in bits from d = 1 - y:
/// -(1/ln 4) [d ln(d/2) + (2 - d) ln(1 - d/2)].
///
/// Taking the deficit keeps full relative precision when y is within an ulp
/// of 1. Overshoot up to [`GAP_SLACK`] is clamped.
pub fn info_measure_deficit<T: Scalar>(d: T) -> Result<T> {
    let zero = T::of(0.0);
    let one = T::of(1.0);
    let slack = T::of(GAP_SLACK);
    let d = if d < zero && d >= -slack {
        zero
    } else if d > one && d <= one + slack {
        one
    } else {
        d
    };
    if !(d >= zero && d <= one) {
        return Err(Error::DomainError {
            what: "1 - y",
            value: d.as_f64(),
        });
    }
    if d == zero {
        return Ok(zero);
    }
    let half = T::of(0.5);
    let ln4 = T::of(4.0).ln();
    let s = d * (d * half).ln() + (T::of(2.0) - d) * (-(d * half)).ln_1p();
    Ok(-s / ln4)
}

/// Linear entropy 1 - tr ρ².
pub fn schmidt_measure(rho: &ReducedDensity) -> f64 {
    to_f64(Quad::ONE - rho.purity())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhiClosed {
    pub phi: f64,
    /// 1 - eps Φ.
    pub y_closed: f64,
}

/// First-order gap coefficient Φ for the down-up state, y = 1 - eps Φ.
pub fn phi_closed(params: &ModelParams) -> Result<PhiClosed> {
    let (k1, k2, w) = (params.kappa1(), params.kappa2(), params.omega());
    let pole = (w - k1) * (w - k1);
    if !(pole > (1e-12 * k1) * (1e-12 * k1)) {
        return Err(Error::ResonancePole(pole));
    }
    let numerator =
        w * (w * w * (k2 - k1) + 2.0 * w * (k2 * k2 + k1 * k1) + (k2.powi(3) - k1.powi(3)));
    let phi = numerator / (2.0 * k1 * k2 * pole * (w + k2) * (w + k2));
    let eps_phi = params.eps() * phi;
    if !(0.0..1.0).contains(&eps_phi) {
        return Err(Error::RangeViolation(eps_phi));
    }
    Ok(PhiClosed {
        phi,
        y_closed: 1.0 - eps_phi,
    })
}

/// Small-eps form of the information measure:
/// (Φ / 2 ln 2) [eps (1 - ln(Φ/2)) - eps ln eps].
pub fn asymptotic_info(params: &ModelParams) -> Result<f64> {
    let phi = phi_closed(params)?.phi;
    asymptotic_info_from(params.eps(), phi)
}

/// [`asymptotic_info`] for given eps and Φ, in any scalar precision.
pub fn asymptotic_info_from<T: Scalar>(eps: T, phi: T) -> Result<T> {
    if !(phi > T::of(0.0)) {
        return Err(Error::DomainError {
            what: "Phi",
            value: phi.as_f64(),
        });
    }
    let eps_phi = eps * phi;
    if !(eps_phi > T::of(0.0) && eps_phi < T::of(1.0)) {
        return Err(Error::RangeViolation(eps_phi.as_f64()));
    }
    let ln2 = T::of(2.0).ln();
    let bracket = eps * (T::of(1.0) - (phi * T::of(0.5)).ln()) - eps * eps.ln();
    Ok(phi / (T::of(2.0) * ln2) * bracket)
}

/// Closed-form comparators attached to a report.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Comparators {
    pub phi: f64,
    pub y_closed: f64,
    pub e_i_asymptotic: f64,
    pub e_s_closed: f64,
}

/// Comparators for the configurations the closed forms cover: down-up, and
/// the parallel cases, whose first-order entanglement vanishes.
pub fn comparators(
    params: &ModelParams,
    config: PolarizationConfig,
) -> Result<Option<Comparators>> {
    if config.is_parallel() {
        return Ok(Some(Comparators {
            phi: 0.0,
            y_closed: 1.0,
            e_i_asymptotic: 0.0,
            e_s_closed: 0.0,
        }));
    }
    if config != PolarizationConfig::DOWN_UP {
        return Ok(None);
    }
    let PhiClosed { phi, y_closed } = phi_closed(params)?;
    let e_i_asymptotic = if phi > 0.0 {
        asymptotic_info(params)?
    } else {
        0.0
    };
    Ok(Some(Comparators {
        phi,
        y_closed,
        e_i_asymptotic,
        e_s_closed: 2.0 * params.eps() * phi,
    }))
}

#[derive(Clone, Debug)]
pub struct EntanglementReport {
    pub config: PolarizationConfig,
    pub options: EvalOptions,
    pub e_i: f64,
    pub e_s: f64,
    pub y: f64,
    /// 1 - y, unrounded by the subtraction.
    pub gap_deficit: f64,
    /// Norm of the truncated amplitude vector at the requested eps.
    pub raw_norm: f64,
    pub amplitudes: TwoQubitAmplitudes,
    pub density: ReducedDensity,
    pub closed: Option<Comparators>,
}

struct Point {
    amps: TwoQubitAmplitudes,
    density: ReducedDensity,
    deficit: Quad,
    impurity: Quad,
}

fn evaluate(params: &ModelParams, config: PolarizationConfig, opts: &EvalOptions) -> Result<Point> {
    let roots = solve(params, opts.method).map_err(|e| e.at(Stage::Roots))?;
    let block = build_block(&roots, params).map_err(|e| e.at(Stage::Block))?;
    let amps = amplitudes(&block, config).map_err(|e| e.at(Stage::Amplitudes))?;
    let state = match opts.normalization {
        Normalization::Truncated => amps.clone(),
        Normalization::Renormalized => amps.normalized(),
    };
    let density = reduced_density(&state);
    let deficit = density.gap_deficit();
    let impurity = Quad::ONE - density.purity();
    Ok(Point {
        amps,
        density,
        deficit,
        impurity,
    })
}

/// Roots, block, amplitudes, density and measures for one parameter point.
pub fn full_report(
    params: &ModelParams,
    config: PolarizationConfig,
    opts: &EvalOptions,
) -> Result<EntanglementReport> {
    let params = params.revalidate().map_err(|e| e.at(Stage::Params))?;
    let point = evaluate(&params, config, opts)?;
    let (deficit, impurity) = match opts.order {
        Order::Full => (point.deficit, point.impurity),
        Order::Leading => {
            let half = params
                .with_eps(0.5 * params.eps())
                .map_err(|e| e.at(Stage::Params))?;
            let h = evaluate(&half, config, opts)?;
            let four = quad(4.0);
            (
                four * h.deficit - point.deficit,
                four * h.impurity - point.impurity,
            )
        }
    };
    let e_i = info_measure_deficit(deficit).map_err(|e| e.at(Stage::Measures))?;
    let closed = comparators(&params, config).map_err(|e| e.at(Stage::ClosedForm))?;
    Ok(EntanglementReport {
        config,
        options: *opts,
        e_i: to_f64(e_i),
        e_s: to_f64(impurity),
        y: to_f64(Quad::ONE - deficit),
        gap_deficit: to_f64(deficit),
        raw_norm: point.amps.raw_norm(),
        amplitudes: point.amps,
        density: point.density,
        closed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::make_params;
    use crate::precision::cplx;
    use proptest::prelude::*;

    fn base(eps: f64) -> ModelParams {
        make_params(2500.0, 3000.0, 0.5, eps).unwrap()
    }

    fn amps(v: [(f64, f64); 4]) -> TwoQubitAmplitudes {
        TwoQubitAmplitudes::from_values(v.map(|(re, im)| cplx(re, im))).unwrap()
    }

    #[test]
    fn bell_state_is_maximally_mixed() {
        let h = 0.5f64.sqrt();
        let rho = reduced_density(&amps([(h, 0.0), (0.0, 0.0), (0.0, 0.0), (h, 0.0)]).normalized());
        assert!(to_f64(rho.y()).abs() < 1e-16);
        assert!((schmidt_measure(&rho) - 0.5).abs() < 1e-15);
        assert!((info_measure(to_f64(rho.y())).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_state_is_pure() {
        let rho = reduced_density(&amps([(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)]));
        assert_eq!(to_f64(rho.y()), 1.0);
        assert_eq!(rho.eigs(), (0.0, 1.0));
        assert_eq!(schmidt_measure(&rho), 0.0);
    }

    #[test]
    fn information_measure_endpoints() {
        assert_eq!(info_measure(1.0).unwrap(), 0.0);
        assert!((info_measure(0.0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(info_measure(1.0 + 1e-12).unwrap(), 0.0);
        assert!(info_measure(1.1).is_err());
        assert!(info_measure(-0.1).is_err());
        assert!(info_measure_deficit(f64::NAN).is_err());
    }

    #[test]
    fn information_measure_matches_entropy_of_eigenvalues() {
        for y in [0.1f64, 0.5, 0.9, 0.999] {
            let (l1, l2) = ((1.0 - y) / 2.0, (1.0 + y) / 2.0);
            let direct = -(l1 * l1.log2() + l2 * l2.log2());
            assert!((info_measure(y).unwrap() - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn asymptotic_form_tracks_information_measure_at_small_gap_deficit() {
        // eps Φ = 1e-6 with eps = 0.1
        let (eps, phi) = (0.1, 1e-5);
        let exact = info_measure_deficit(eps * phi).unwrap();
        let asym = asymptotic_info_from(eps, phi).unwrap();
        assert!((asym / exact - 1.0).abs() < 0.05);
        let tighter =
            asymptotic_info_from(0.01, phi).unwrap() / info_measure_deficit(0.01 * phi).unwrap();
        assert!((tighter - 1.0).abs() < (asym / exact - 1.0).abs());
    }

    #[test]
    fn asymptotic_form_needs_positive_phi() {
        let p = make_params(2500.0, 3000.0, 0.0, 0.1).unwrap();
        assert!(matches!(
            asymptotic_info(&p),
            Err(Error::DomainError { .. })
        ));
    }

    #[test]
    fn phi_at_reference_point() {
        let c = phi_closed(&base(0.1)).unwrap();
        assert!((c.phi - 6.75023e-12).abs() < 1e-16, "{:e}", c.phi);
        assert_eq!(c.y_closed, 1.0 - 0.1 * c.phi);
        let zero = phi_closed(&make_params(2500.0, 3000.0, 0.0, 0.1).unwrap()).unwrap();
        assert_eq!((zero.phi, zero.y_closed), (0.0, 1.0));
    }

    #[test]
    fn phi_out_of_range() {
        let p = make_params(1.0, 1.5, 0.9, 1e3).unwrap();
        assert!(matches!(phi_closed(&p), Err(Error::RangeViolation(_))));
    }

    #[test]
    fn phi_increases_with_field() {
        for dk in [10.0, 500.0, 3500.0] {
            let mut prev = -1.0;
            for i in 0..=20 {
                let p = make_params(2500.0, 2500.0 + dk, 0.025 * i as f64, 0.1).unwrap();
                let phi = phi_closed(&p).unwrap().phi;
                assert!(phi > prev);
                prev = phi;
            }
        }
    }

    #[test]
    fn down_up_schmidt_measure_near_closed_form() {
        let r = full_report(
            &base(0.1),
            PolarizationConfig::DOWN_UP,
            &EvalOptions::default(),
        )
        .unwrap();
        let c = r.closed.unwrap();
        assert!((r.e_s - c.e_s_closed).abs() < 50.0 * 0.01 * c.phi);
        assert!((r.e_s - 1.3553e-12).abs() < 1e-16, "{:e}", r.e_s);
        assert!(
            (r.gap_deficit - 6.7764e-13).abs() < 1e-16,
            "{:e}",
            r.gap_deficit
        );
    }

    #[test]
    fn leading_order_matches_closed_form() {
        let opts = EvalOptions {
            order: Order::Leading,
            ..Default::default()
        };
        let r = full_report(&base(0.1), PolarizationConfig::DOWN_UP, &opts).unwrap();
        let c = r.closed.unwrap();
        assert!(
            (r.e_s - c.e_s_closed).abs() < 1e-20,
            "{:e}",
            r.e_s - c.e_s_closed
        );
        assert!((r.gap_deficit - 0.1 * c.phi).abs() < 1e-20);
    }

    #[test]
    fn zero_field_down_up_is_unentangled() {
        let p = make_params(2500.0, 3000.0, 0.0, 0.1).unwrap();
        let r = full_report(&p, PolarizationConfig::DOWN_UP, &EvalOptions::default()).unwrap();
        assert!(r.e_s.abs() <= 50.0 * 0.01 && r.e_i <= 50.0 * 0.01);
        assert_eq!(r.closed.unwrap().e_i_asymptotic, 0.0);
    }

    #[test]
    fn parallel_configs_are_unentangled() {
        for c in [PolarizationConfig::UP_UP, PolarizationConfig::DOWN_DOWN] {
            let r = full_report(&base(0.1), c, &EvalOptions::default()).unwrap();
            assert!(
                r.e_s.abs() <= 50.0 * 0.01 && r.e_i.abs() <= 50.0 * 0.01,
                "{c}"
            );
            assert_eq!(r.closed.unwrap().phi, 0.0);
        }
    }

    #[test]
    fn up_down_has_no_comparator() {
        let r = full_report(
            &base(0.1),
            PolarizationConfig::UP_DOWN,
            &EvalOptions::default(),
        )
        .unwrap();
        assert!(r.closed.is_none());
    }

    #[test]
    fn renormalized_state_satisfies_pure_state_identities() {
        let opts = EvalOptions {
            normalization: Normalization::Renormalized,
            ..Default::default()
        };
        for c in PolarizationConfig::ALL {
            let r = full_report(&base(0.1), c, &opts).unwrap();
            // rounding of the double-double purity is ~1e-31
            assert!(
                (-1e-28..=0.5).contains(&r.e_s) && (0.0..=1.0).contains(&r.e_i),
                "{c}: {:e}",
                r.e_s
            );
            assert!((r.e_s - (1.0 - r.y * r.y) / 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn stage_labels_are_attached() {
        let p = ModelParams::uncoupled(2500.0, 3000.0, 0.5).unwrap();
        let err =
            full_report(&p, PolarizationConfig::DOWN_UP, &EvalOptions::default()).unwrap_err();
        assert!(
            matches!(
                err,
                Error::Stage {
                    stage: Stage::Roots,
                    ..
                }
            ),
            "{err}"
        );
        assert!(matches!(err.root_cause(), Error::ZeroCoupling));
    }

    fn unit_vector() -> impl Strategy<Value = TwoQubitAmplitudes> {
        prop::array::uniform8(-1.0f64..1.0)
            .prop_filter("nonzero", |x| x.iter().map(|v| v * v).sum::<f64>() > 1e-6)
            .prop_map(|x| {
                let v = [0, 2, 4, 6].map(|i| cplx(x[i], x[i + 1]));
                TwoQubitAmplitudes::from_values(v).unwrap().normalized()
            })
    }

    proptest! {
        #[test]
        fn pure_state_identities(a in unit_vector()) {
            let rho = reduced_density(&a);
            let y = to_f64(rho.y());
            let det = to_f64(norm_sqr(a.det()));
            prop_assert!((to_f64(rho.trace()) - 1.0).abs() < 1e-12);
            prop_assert!(rho.hermiticity_defect() < 1e-12);
            prop_assert!((y * y + 4.0 * det - 1.0).abs() < 1e-10);
            prop_assert!((schmidt_measure(&rho) - (1.0 - y * y) / 2.0).abs() < 1e-10);
            let (l1, l2) = rho.eigs();
            prop_assert!(l1 >= -1e-15 && l2 <= 1.0 + 1e-15);
            let e_i = info_measure(y).unwrap();
            prop_assert!((0.0..=1.0 + 1e-12).contains(&e_i));
        }

        #[test]
        fn information_measure_is_decreasing_in_gap(y1 in 0.0f64..1.0, y2 in 0.0f64..1.0) {
            let (lo, hi) = if y1 < y2 { (y1, y2) } else { (y2, y1) };
            prop_assume!(hi - lo > 1e-9);
            prop_assert!(info_measure(lo).unwrap() > info_measure(hi).unwrap());
        }
    }
}
