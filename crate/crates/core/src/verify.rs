//! Internal consistency checks at one parameter point.
//!
//! Each check compares the pipeline against a closed form or an identity and,
//! where the mismatch is claimed to be O(eps²), checks that it shrinks by
//! ~4 when eps is halved.

use std::fmt;

use crate::bogoliubov::{build_block, identity_defect};
use crate::config::SweepConfig;
use crate::dispersion::{exact_roots, perturbative_roots};
use crate::entangle::{
    asymptotic_info_from, full_report, info_measure_deficit, phi_closed, reduced_density,
    schmidt_measure, EvalOptions, Normalization, Order,
};
use crate::error::Result;
use crate::params::ModelParams;
use crate::precision::{cabs, norm_sqr, quad, to_f64, Quad};
use crate::qstate::{amplitudes, closed_form_ab, PolarizationConfig};

/// Accepted range for the defect ratio per halving of eps, O(eps²) claims.
pub const QUADRATIC_RATIO: (f64, f64) = (3.5, 4.5);
/// Prefactor C in O(eps²) bounds C eps².
pub const EPS2_CONSTANT: f64 = 50.0;
/// Bound on the pure-state identities.
pub const IDENTITY_TOL: f64 = 1e-10;
/// Coupling ladder for the asymptotic information measure.
pub const ASYMPTOTIC_LADDER: [f64; 3] = [1e-3, 1e-4, 1e-5];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::NotApplicable => "N/A",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{:<4} {:<24} {}", c.status, c.name, c.detail)?;
        }
        Ok(())
    }
}

fn in_ratio(r: f64) -> bool {
    (QUADRATIC_RATIO.0..=QUADRATIC_RATIO.1).contains(&r)
}

fn ratios(defects: &[f64]) -> Vec<f64> {
    defects.windows(2).map(|w| w[0] / w[1]).collect()
}

fn fmt_list(xs: &[f64]) -> String {
    xs.iter()
        .map(|x| format!("{x:.3e}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// eps, eps/2, eps/4.
fn ladder(p: &ModelParams) -> Result<Vec<ModelParams>> {
    [1.0, 0.5, 0.25]
        .iter()
        .map(|f| p.with_eps(p.eps() * f))
        .collect()
}

fn check(name: &'static str, f: impl FnOnce() -> Result<(Status, String)>) -> Check {
    match f() {
        Ok((status, detail)) => Check {
            name,
            status,
            detail,
        },
        Err(e) => Check {
            name,
            status: Status::Fail,
            detail: format!("error: {e}"),
        },
    }
}

fn pass_if(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn na(reason: &str) -> Result<(Status, String)> {
    Ok((Status::NotApplicable, reason.to_string()))
}

pub fn root_order(p: &ModelParams, tol: f64) -> Result<(Status, String)> {
    let mut ok = true;
    let mut worst_res = 0.0f64;
    let mut all = Vec::new();
    let mut per_root = [[Vec::new(), Vec::new()], [Vec::new(), Vec::new()]];
    for q in ladder(p)? {
        let ex = exact_roots(&q, tol)?;
        let pe = perturbative_roots(&q)?;
        let res = ex.residuals(&q);
        for k in 1..=2 {
            for l in 1..=2 {
                per_root[k - 1][l - 1].push((ex.offset(k, l) - pe.offset(k, l)).abs());
                let r = res[k - 1][l - 1].abs();
                ok &= r <= tol * q.kappa(k);
                worst_res = worst_res.max(r / q.kappa(k));
            }
        }
    }
    for row in &per_root {
        for d in row {
            let rs = ratios(d);
            ok &= rs.iter().all(|r| in_ratio(*r));
            all.extend(rs);
        }
    }
    Ok((
        pass_if(ok),
        format!(
            "ratios [{}]; max residual/kappa {worst_res:.1e}",
            fmt_list(&all)
        ),
    ))
}

pub fn amplitude_pattern(
    p: &ModelParams,
    pol: PolarizationConfig,
    tol: f64,
) -> Result<(Status, String)> {
    if pol != PolarizationConfig::DOWN_UP && pol != PolarizationConfig::UP_UP {
        return na("no closed form for this polarization");
    }
    let roots = exact_roots(p, tol)?;
    let block = build_block(&roots, p)?;
    let amps = amplitudes(&block, pol)?;
    let ab = closed_form_ab(&roots, p, pol)?;
    let worst = amps
        .values()
        .iter()
        .zip(ab.pattern())
        .map(|(a, b)| to_f64(cabs(*a - b)))
        .fold(0.0, f64::max);
    let bound = EPS2_CONSTANT * p.eps() * p.eps();
    Ok((
        pass_if(worst <= bound),
        format!("max |pipeline - pattern| {worst:.2e} (bound {bound:.1e})"),
    ))
}

/// Defects of a full-order measure against its first-order closed form, on the eps ladder.
fn closed_defects(
    p: &ModelParams,
    tol: f64,
    measure: impl Fn(&crate::entangle::EntanglementReport, f64) -> f64,
) -> Result<(Vec<f64>, f64)> {
    let opts = EvalOptions {
        method: crate::dispersion::RootMethod::Exact { tol },
        ..Default::default()
    };
    let phi = phi_closed(p)?.phi;
    let mut defects = Vec::new();
    for q in ladder(p)? {
        let r = full_report(&q, PolarizationConfig::DOWN_UP, &opts)?;
        defects.push(measure(&r, q.eps() * phi));
    }
    Ok((defects, phi))
}

pub fn closed_gap(p: &ModelParams, pol: PolarizationConfig, tol: f64) -> Result<(Status, String)> {
    if pol != PolarizationConfig::DOWN_UP {
        return na("closed-form gap applies to du only");
    }
    let (defects, phi) = closed_defects(p, tol, |r, eps_phi| eps_phi - r.gap_deficit)?;
    if phi == 0.0 {
        return na("Phi = 0 at omega = 0");
    }
    let bound = EPS2_CONSTANT * p.eps() * p.eps() * phi;
    let rs = ratios(&defects);
    let ok = defects[0].abs() <= bound && rs.iter().all(|r| in_ratio(*r));
    Ok((
        pass_if(ok),
        format!(
            "y - (1 - eps Phi) [{}] ratios [{}]",
            fmt_list(&defects),
            fmt_list(&rs)
        ),
    ))
}

pub fn closed_schmidt(
    p: &ModelParams,
    pol: PolarizationConfig,
    tol: f64,
) -> Result<(Status, String)> {
    if pol != PolarizationConfig::DOWN_UP {
        return na("closed-form Schmidt measure applies to du only");
    }
    let (defects, phi) = closed_defects(p, tol, |r, eps_phi| r.e_s - 2.0 * eps_phi)?;
    if phi == 0.0 {
        return na("Phi = 0 at omega = 0");
    }
    let rs = ratios(&defects);
    let ok = rs.iter().all(|r| in_ratio(*r));
    Ok((
        pass_if(ok),
        format!(
            "E_S - 2 eps Phi [{}] ratios [{}]",
            fmt_list(&defects),
            fmt_list(&rs)
        ),
    ))
}

/// |asymptotic / exact - 1| along [`ASYMPTOTIC_LADDER`], in double-double.
pub fn asymptotic_gaps(phi: f64) -> Result<Vec<f64>> {
    ASYMPTOTIC_LADDER
        .iter()
        .map(|&eps| {
            let (e, f) = (quad(eps), quad(phi));
            let asym = asymptotic_info_from::<Quad>(e, f)?;
            let exact = info_measure_deficit::<Quad>(e * f)?;
            Ok(to_f64((asym / exact - Quad::ONE).abs()))
        })
        .collect()
}

pub fn asymptotic_ratio(p: &ModelParams, pol: PolarizationConfig) -> Result<(Status, String)> {
    if pol != PolarizationConfig::DOWN_UP {
        return na("asymptotic form applies to du only");
    }
    let phi = phi_closed(p)?.phi;
    if phi == 0.0 {
        return na("Phi = 0 at omega = 0");
    }
    let gaps = asymptotic_gaps(phi)?;
    let ok = gaps.windows(2).all(|w| w[1] < w[0]);
    Ok((
        pass_if(ok),
        format!(
            "|ratio - 1| at eps {:?}: [{}]",
            ASYMPTOTIC_LADDER,
            fmt_list(&gaps)
        ),
    ))
}

pub fn zero_entanglement(
    p: &ModelParams,
    pol: PolarizationConfig,
    tol: f64,
) -> Result<(Status, String)> {
    if !pol.is_parallel() {
        return na("antiparallel polarizations entangle");
    }
    let opts = EvalOptions {
        method: crate::dispersion::RootMethod::Exact { tol },
        ..Default::default()
    };
    let r = full_report(p, pol, &opts)?;
    let bound = EPS2_CONSTANT * p.eps() * p.eps();
    let ok = r.e_i.abs() <= bound && r.e_s.abs() <= bound;
    Ok((
        pass_if(ok),
        format!("E_I {:.2e}, E_S {:.2e} (bound {bound:.1e})", r.e_i, r.e_s),
    ))
}

pub fn pure_state_identities(
    p: &ModelParams,
    pol: PolarizationConfig,
    tol: f64,
) -> Result<(Status, String)> {
    let roots = exact_roots(p, tol)?;
    let amps = amplitudes(&build_block(&roots, p)?, pol)?.normalized();
    let rho = reduced_density(&amps);
    let y = rho.y();
    let trace = to_f64(rho.trace() - Quad::ONE).abs();
    let herm = rho.hermiticity_defect();
    let concurrence = to_f64(y * y + quad(4.0) * norm_sqr(amps.det()) - Quad::ONE).abs();
    let yf = to_f64(y);
    let schmidt = (schmidt_measure(&rho) - (1.0 - yf * yf) / 2.0).abs();
    let worst = trace.max(herm).max(concurrence).max(schmidt);
    Ok((
        pass_if(worst <= IDENTITY_TOL),
        format!("trace {trace:.1e}, hermiticity {herm:.1e}, y^2+4|det|^2 {concurrence:.1e}, E_S {schmidt:.1e}"),
    ))
}

pub fn identity_decay(p: &ModelParams, tol: f64) -> Result<(Status, String)> {
    let mut uu = Vec::new();
    let mut sym = Vec::new();
    for q in ladder(p)? {
        let d = identity_defect(&build_block(&exact_roots(&q, tol)?, &q)?);
        uu.push(d.0);
        sym.push(d.1);
    }
    let ok = uu.windows(2).all(|w| w[1] < w[0]) && sym.windows(2).all(|w| w[1] < w[0]);
    Ok((
        pass_if(ok),
        format!(
            "uu-vv-1 [{}], vu^T-uv^T [{}]",
            fmt_list(&uu),
            fmt_list(&sym)
        ),
    ))
}

/// Leading-order measures vanish at zero field.
pub fn zero_field(p: &ModelParams, pol: PolarizationConfig, tol: f64) -> Result<(Status, String)> {
    let q = p.with_omega(0.0)?;
    let opts = EvalOptions {
        method: crate::dispersion::RootMethod::Exact { tol },
        normalization: Normalization::Truncated,
        order: Order::Leading,
    };
    let r = full_report(&q, pol, &opts)?;
    let bound = EPS2_CONSTANT * p.eps() * p.eps();
    let ok = r.e_i.abs() <= bound && r.e_s.abs() <= bound;
    Ok((
        pass_if(ok),
        format!("E_I {:.2e}, E_S {:.2e} at omega = 0", r.e_i, r.e_s),
    ))
}

/// Runs every check at the configured single point.
pub fn verify(cfg: &SweepConfig) -> Result<VerifyReport> {
    let p = cfg.validate_point()?;
    let (pol, tol) = (cfg.pol, cfg.tol);
    let checks = vec![
        check("root_order", || root_order(&p, tol)),
        check("amplitude_pattern", || amplitude_pattern(&p, pol, tol)),
        check("closed_gap", || closed_gap(&p, pol, tol)),
        check("closed_schmidt", || closed_schmidt(&p, pol, tol)),
        check("asymptotic_ratio", || asymptotic_ratio(&p, pol)),
        check("zero_entanglement", || zero_entanglement(&p, pol, tol)),
        check("zero_field", || zero_field(&p, pol, tol)),
        check("pure_state_identities", || {
            pure_state_identities(&p, pol, tol)
        }),
        check("identity_decay", || identity_decay(&p, tol)),
    ];
    Ok(VerifyReport { checks })
}
