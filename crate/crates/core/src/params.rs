//! Model parameters in a single frequency unit.
//!
//! Every frequency (photon frequencies, cyclotron frequency, dispersion
//! roots) shares one user unit; the coupling `eps` carries unit².

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Fraction of kappa1 that omega must stay below.
pub const DEFAULT_RESONANCE_MARGIN: f64 = 0.01;

/// Fine-structure constant, fixed at 1/137.
pub const FINE_STRUCTURE: f64 = 1.0 / 137.0;

/// Validated input state of every computation.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams {
    kappa1: f64,
    kappa2: f64,
    omega: f64,
    eps: f64,
    resonance_margin: f64,
    unit_label: String,
}

/// Validates `(kappa1, kappa2, omega, eps)` with the default resonance margin.
pub fn make_params(kappa1: f64, kappa2: f64, omega: f64, eps: f64) -> Result<ModelParams> {
    make_params_with_margin(kappa1, kappa2, omega, eps, DEFAULT_RESONANCE_MARGIN)
}

pub fn make_params_with_margin(
    kappa1: f64,
    kappa2: f64,
    omega: f64,
    eps: f64,
    resonance_margin: f64,
) -> Result<ModelParams> {
    check_frequencies(kappa1, kappa2, omega, resonance_margin)?;
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::NonPositive {
            name: "eps",
            value: eps,
        });
    }
    Ok(ModelParams {
        kappa1,
        kappa2,
        omega,
        eps,
        resonance_margin,
        unit_label: "THz".to_owned(),
    })
}

fn check_frequencies(kappa1: f64, kappa2: f64, omega: f64, margin: f64) -> Result<()> {
    for (name, value) in [("kappa1", kappa1), ("kappa2", kappa2)] {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::NonPositive { name, value });
        }
    }
    if !(omega >= 0.0) || !omega.is_finite() {
        return Err(Error::NonPositive {
            name: "omega",
            value: omega,
        });
    }
    if !(0.0..1.0).contains(&margin) {
        return Err(Error::DomainError {
            what: "resonance margin",
            value: margin,
        });
    }
    if kappa1 == kappa2 {
        return Err(Error::DegenerateFrequencies(kappa1));
    }
    if kappa1 > kappa2 {
        return Err(Error::UnorderedFrequencies { kappa1, kappa2 });
    }
    let limit = kappa1 * (1.0 - margin);
    if omega >= limit {
        return Err(Error::NearResonance {
            omega,
            kappa1,
            limit,
        });
    }
    Ok(())
}

impl ModelParams {
    /// The eps = 0 limit (no medium). Only perturbative roots accept it.
    pub fn uncoupled(kappa1: f64, kappa2: f64, omega: f64) -> Result<ModelParams> {
        check_frequencies(kappa1, kappa2, omega, DEFAULT_RESONANCE_MARGIN)?;
        Ok(ModelParams {
            kappa1,
            kappa2,
            omega,
            eps: 0.0,
            resonance_margin: DEFAULT_RESONANCE_MARGIN,
            unit_label: "THz".to_owned(),
        })
    }

    pub fn kappa1(&self) -> f64 {
        self.kappa1
    }
    pub fn kappa2(&self) -> f64 {
        self.kappa2
    }
    /// Photon frequency of mode `k` (1 or 2).
    pub fn kappa(&self, k: usize) -> f64 {
        match k {
            1 => self.kappa1,
            2 => self.kappa2,
            _ => panic!("photon mode index must be 1 or 2, got {k}"),
        }
    }
    pub fn omega(&self) -> f64 {
        self.omega
    }
    pub fn eps(&self) -> f64 {
        self.eps
    }
    pub fn delta_kappa(&self) -> f64 {
        self.kappa2 - self.kappa1
    }
    pub fn resonance_margin(&self) -> f64 {
        self.resonance_margin
    }
    pub fn unit_label(&self) -> &str {
        &self.unit_label
    }

    pub fn with_unit_label(mut self, label: impl Into<String>) -> Self {
        self.unit_label = label.into();
        self
    }

    /// Same frequencies, different coupling (used for eps ladders).
    pub fn with_eps(&self, eps: f64) -> Result<ModelParams> {
        make_params_with_margin(
            self.kappa1,
            self.kappa2,
            self.omega,
            eps,
            self.resonance_margin,
        )
        .map(|p| p.with_unit_label(self.unit_label.clone()))
    }

    pub fn with_omega(&self, omega: f64) -> Result<ModelParams> {
        make_params_with_margin(
            self.kappa1,
            self.kappa2,
            omega,
            self.eps,
            self.resonance_margin,
        )
        .map(|p| p.with_unit_label(self.unit_label.clone()))
    }

    /// Runs validation again on the stored values.
    pub fn revalidate(&self) -> Result<ModelParams> {
        if self.eps == 0.0 {
            let mut p = ModelParams::uncoupled(self.kappa1, self.kappa2, self.omega)?;
            p.resonance_margin = self.resonance_margin;
            return Ok(p.with_unit_label(self.unit_label.clone()));
        }
        self.with_eps(self.eps)
    }
}

/// Box-quantization inputs from which eps and omega are derived.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalInputs {
    /// Fundamental momentum 2π/L.
    pub kappa0: f64,
    pub m1: u32,
    pub m2: u32,
    /// Light-front momentum (np) = p0 - pz.
    pub np_momentum: f64,
    pub b_field: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Couplings {
    /// alpha * rho = alpha kappa0³ / 8π³.
    pub eps_raw: f64,
    /// eps_raw / (np).
    pub eps: f64,
    /// Cyclotron frequency e B / (np).
    pub omega: f64,
}

impl PhysicalInputs {
    /// Electron density of one particle in the box, L⁻³ = (kappa0 / 2π)³.
    pub fn density(&self) -> f64 {
        (self.kappa0 / (2.0 * PI)).powi(3)
    }

    pub fn kappa(&self, s: usize) -> f64 {
        match s {
            1 => self.kappa0 * f64::from(self.m1),
            2 => self.kappa0 * f64::from(self.m2),
            _ => panic!("photon mode index must be 1 or 2, got {s}"),
        }
    }

    /// Derives the couplings and validates the resulting model parameters.
    pub fn to_params(&self) -> Result<ModelParams> {
        let c = derive_couplings(self)?;
        make_params(self.kappa(1), self.kappa(2), c.omega, c.eps)
    }
}

/// Electron charge in natural Gaussian units, e² = alpha.
pub fn electron_charge() -> f64 {
    FINE_STRUCTURE.sqrt()
}

pub fn derive_couplings(inputs: &PhysicalInputs) -> Result<Couplings> {
    let np = inputs.np_momentum;
    if !(np > 0.0) {
        return Err(Error::ZeroLightFront(np));
    }
    if !(inputs.kappa0 >= 0.0) {
        return Err(Error::NonPositive {
            name: "kappa0",
            value: inputs.kappa0,
        });
    }
    if !(inputs.b_field >= 0.0) {
        return Err(Error::NonPositive {
            name: "B",
            value: inputs.b_field,
        });
    }
    if inputs.m1 == 0 || inputs.m1 >= inputs.m2 {
        return Err(Error::Validation(vec![format!(
            "mode numbers must satisfy 0 < m1 < m2 (got m1={}, m2={})",
            inputs.m1, inputs.m2
        )]));
    }
    let eps_raw = FINE_STRUCTURE * inputs.kappa0.powi(3) / (8.0 * PI.powi(3));
    Ok(Couplings {
        eps_raw,
        eps: eps_raw / np,
        omega: electron_charge() * inputs.b_field / np,
    })
}
