//! Run configuration: a flat `key = value` file plus command-line overrides.
//!
//! ```text
//! # default grid, explicit
//! kappa1 = 2500
//! omega_max = 0.5
//! pol = du
//! ```
//!
//! Overrides are applied after the file, so flags win.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::dispersion::{RootMethod, DEFAULT_TOL};
use crate::entangle::{EvalOptions, Normalization, Order};
use crate::error::{Error, Result};
use crate::params::{make_params_with_margin, ModelParams, DEFAULT_RESONANCE_MARGIN};
use crate::qstate::PolarizationConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodKind {
    Exact,
    Perturbative,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub kappa1: f64,
    /// Second photon frequency for single-point commands.
    pub kappa2: f64,
    /// Cyclotron frequency for single-point commands.
    pub omega: f64,
    pub eps: f64,
    pub dk_min: f64,
    pub dk_max: f64,
    pub dk_steps: usize,
    pub omega_min: f64,
    pub omega_max: f64,
    pub omega_steps: usize,
    pub pol: PolarizationConfig,
    pub method: MethodKind,
    pub tol: f64,
    /// `None` picks the command default: leading order for sweeps, full otherwise.
    pub order: Option<Order>,
    pub norm: Normalization,
    pub resonance_margin: f64,
    pub out_path: Option<PathBuf>,
    pub matrix_path: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            kappa1: 2500.0,
            kappa2: 3000.0,
            omega: 0.5,
            eps: 0.1,
            dk_min: 10.0,
            dk_max: 3500.0,
            dk_steps: 64,
            omega_min: 0.0,
            omega_max: 0.5,
            omega_steps: 64,
            pol: PolarizationConfig::DOWN_UP,
            method: MethodKind::Exact,
            tol: DEFAULT_TOL,
            order: None,
            norm: Normalization::Truncated,
            resonance_margin: DEFAULT_RESONANCE_MARGIN,
            out_path: None,
            matrix_path: None,
        }
    }
}

pub const KEYS: &[&str] = &[
    "kappa1",
    "kappa2",
    "omega",
    "eps",
    "dk_min",
    "dk_max",
    "dk_steps",
    "omega_min",
    "omega_max",
    "omega_steps",
    "pol",
    "method",
    "tol",
    "order",
    "norm",
    "resonance_margin",
    "out",
    "matrix",
];

impl SweepConfig {
    pub fn root_method(&self) -> RootMethod {
        match self.method {
            MethodKind::Exact => RootMethod::Exact { tol: self.tol },
            MethodKind::Perturbative => RootMethod::Perturbative,
        }
    }

    pub fn sweep_options(&self) -> EvalOptions {
        EvalOptions {
            method: self.root_method(),
            normalization: self.norm,
            order: self.order.unwrap_or(Order::Leading),
        }
    }

    pub fn point_options(&self) -> EvalOptions {
        EvalOptions {
            order: self.order.unwrap_or(Order::Full),
            ..self.sweep_options()
        }
    }

    /// Validated parameters of the single point (kappa1, kappa2, omega, eps).
    pub fn point_params(&self) -> Result<ModelParams> {
        make_params_with_margin(
            self.kappa1,
            self.kappa2,
            self.omega,
            self.eps,
            self.resonance_margin,
        )
    }

    pub fn omega_grid(&self) -> Vec<f64> {
        linspace(self.omega_min, self.omega_max, self.omega_steps)
    }

    pub fn dk_grid(&self) -> Vec<f64> {
        linspace(self.dk_min, self.dk_max, self.dk_steps)
    }

    /// Applies one `key = value` setting. `location` is used in error messages.
    pub fn set(&mut self, key: &str, value: &str, location: &str) -> Result<()> {
        let err = |message: String| Error::Parse {
            location: location.to_string(),
            message,
        };
        let num = |v: &str| -> Result<f64> {
            let x: f64 = v
                .parse()
                .map_err(|_| err(format!("{key}: not a number: {v:?}")))?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(err(format!("{key}: must be finite (got {v})")))
            }
        };
        let count = |v: &str| -> Result<usize> {
            v.parse()
                .map_err(|_| err(format!("{key}: not a non-negative integer: {v:?}")))
        };
        match key {
            "kappa1" => self.kappa1 = num(value)?,
            "kappa2" => self.kappa2 = num(value)?,
            "omega" => self.omega = num(value)?,
            "eps" => self.eps = num(value)?,
            "dk_min" => self.dk_min = num(value)?,
            "dk_max" => self.dk_max = num(value)?,
            "dk_steps" => self.dk_steps = count(value)?,
            "omega_min" => self.omega_min = num(value)?,
            "omega_max" => self.omega_max = num(value)?,
            "omega_steps" => self.omega_steps = count(value)?,
            "tol" => self.tol = num(value)?,
            "resonance_margin" => self.resonance_margin = num(value)?,
            "pol" => {
                self.pol = value
                    .parse()
                    .map_err(|_| err(format!("pol: expected uu, ud, du or dd (got {value:?})")))?
            }
            "method" => {
                self.method = match value {
                    "exact" => MethodKind::Exact,
                    "pert" | "perturbative" => MethodKind::Perturbative,
                    _ => {
                        return Err(err(format!(
                            "method: expected exact or pert (got {value:?})"
                        )))
                    }
                }
            }
            "order" => {
                self.order = Some(match value {
                    "leading" => Order::Leading,
                    "full" => Order::Full,
                    _ => {
                        return Err(err(format!(
                            "order: expected leading or full (got {value:?})"
                        )))
                    }
                })
            }
            "norm" => {
                self.norm = match value {
                    "truncated" => Normalization::Truncated,
                    "renormalized" => Normalization::Renormalized,
                    _ => {
                        return Err(err(format!(
                            "norm: expected truncated or renormalized (got {value:?})"
                        )))
                    }
                }
            }
            "out" => self.out_path = Some(PathBuf::from(value)),
            "matrix" => self.matrix_path = Some(PathBuf::from(value)),
            _ => return Err(err(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Applies a config file body. Blank lines and `#` comments are skipped.
    pub fn apply_str(&mut self, text: &str, source: &str) -> Result<()> {
        let mut seen: Vec<String> = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let location = format!("{source}:{}", n + 1);
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Parse {
                    location,
                    message: format!("expected key = value, got {line:?}"),
                });
            };
            let (key, value) = (key.trim(), value.trim());
            if seen.iter().any(|k| k == key) {
                return Err(Error::Parse {
                    location,
                    message: format!("duplicate key {key:?}"),
                });
            }
            seen.push(key.to_string());
            self.set(key, value, &location)?;
        }
        Ok(())
    }

    /// Scalar checks shared by every command.
    fn scalar_violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !(self.kappa1 > 0.0) {
            v.push(format!("kappa1 must be positive (got {})", self.kappa1));
        }
        if !(self.eps > 0.0) {
            v.push(format!("eps must be positive (got {})", self.eps));
        }
        if !(self.tol > 0.0) {
            v.push(format!("tol must be positive (got {})", self.tol));
        }
        if !(self.resonance_margin > 0.0 && self.resonance_margin < 1.0) {
            v.push(format!(
                "resonance_margin must lie in (0, 1) (got {})",
                self.resonance_margin
            ));
        }
        v
    }

    /// Every violated sweep invariant, including each invalid grid point.
    pub fn sweep_violations(&self) -> Vec<String> {
        let mut v = self.scalar_violations();
        if self.dk_steps < 2 {
            v.push(format!(
                "dk_steps must be at least 2 (got {})",
                self.dk_steps
            ));
        }
        if self.omega_steps < 2 {
            v.push(format!(
                "omega_steps must be at least 2 (got {})",
                self.omega_steps
            ));
        }
        if !(self.dk_min > 0.0) {
            v.push(format!(
                "dk_min must be positive, kappa2 = kappa1 is degenerate (got {})",
                self.dk_min
            ));
        }
        if !(self.dk_max > self.dk_min) {
            v.push(format!(
                "dk_max must exceed dk_min (got {} <= {})",
                self.dk_max, self.dk_min
            ));
        }
        if !(self.omega_min >= 0.0) {
            v.push(format!(
                "omega_min must be non-negative (got {})",
                self.omega_min
            ));
        }
        if !(self.omega_max > self.omega_min) {
            v.push(format!(
                "omega_max must exceed omega_min (got {} <= {})",
                self.omega_max, self.omega_min
            ));
        }
        if !v.is_empty() {
            return v;
        }
        for omega in self.omega_grid() {
            for dk in self.dk_grid() {
                let k2 = self.kappa1 + dk;
                if let Err(e) =
                    make_params_with_margin(self.kappa1, k2, omega, self.eps, self.resonance_margin)
                {
                    v.push(format!("grid point omega={omega}, delta_kappa={dk}: {e}"));
                }
            }
        }
        v
    }

    pub fn validate_sweep(&self) -> Result<()> {
        let v = self.sweep_violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(v))
        }
    }

    /// Checks needed by single-point commands.
    pub fn validate_point(&self) -> Result<ModelParams> {
        let v = self.scalar_violations();
        if !v.is_empty() {
            return Err(Error::Validation(v));
        }
        self.point_params()
    }

    /// Deterministic `key = value` echo of the whole configuration.
    pub fn echo(&self) -> String {
        let mut s = String::new();
        let method = match self.method {
            MethodKind::Exact => "exact",
            MethodKind::Perturbative => "pert",
        };
        let order = match self.order.unwrap_or(Order::Leading) {
            Order::Leading => "leading",
            Order::Full => "full",
        };
        let norm = match self.norm {
            Normalization::Truncated => "truncated",
            Normalization::Renormalized => "renormalized",
        };
        let _ = writeln!(s, "kappa1 = {}", self.kappa1);
        let _ = writeln!(s, "eps = {}", self.eps);
        let _ = writeln!(s, "dk_min = {}", self.dk_min);
        let _ = writeln!(s, "dk_max = {}", self.dk_max);
        let _ = writeln!(s, "dk_steps = {}", self.dk_steps);
        let _ = writeln!(s, "omega_min = {}", self.omega_min);
        let _ = writeln!(s, "omega_max = {}", self.omega_max);
        let _ = writeln!(s, "omega_steps = {}", self.omega_steps);
        let _ = writeln!(s, "pol = {}", self.pol);
        let _ = writeln!(s, "method = {method}");
        let _ = writeln!(s, "tol = {}", self.tol);
        let _ = writeln!(s, "order = {order}");
        let _ = writeln!(s, "norm = {norm}");
        let _ = writeln!(s, "resonance_margin = {}", self.resonance_margin);
        s
    }
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// Reads an optional file, then applies overrides in order, without validating.
pub fn load(path: Option<&Path>, overrides: &[(String, String)]) -> Result<SweepConfig> {
    let mut cfg = SweepConfig::default();
    if let Some(path) = path {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        cfg.apply_str(&text, &path.display().to_string())?;
    }
    for (key, value) in overrides {
        cfg.set(key, value, &format!("--{}", key.replace('_', "-")))?;
    }
    Ok(cfg)
}

/// [`load`] followed by full sweep validation.
pub fn parse_config(path: Option<&Path>, overrides: &[(String, String)]) -> Result<SweepConfig> {
    let cfg = load(path, overrides)?;
    cfg.validate_sweep()?;
    Ok(cfg)
}
