use std::fmt;
use std::path::PathBuf;

/// Pipeline stage an error was raised in, attached by [`crate::entangle::full_report`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Params,
    Roots,
    Block,
    Amplitudes,
    Density,
    Measures,
    ClosedForm,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Params => "params",
            Stage::Roots => "roots",
            Stage::Block => "block",
            Stage::Amplitudes => "amplitudes",
            Stage::Density => "density",
            Stage::Measures => "measures",
            Stage::ClosedForm => "closed-form",
        };
        f.write_str(s)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("photon frequencies coincide (kappa1 = kappa2 = {0})")]
    DegenerateFrequencies(f64),
    #[error("photon frequencies must be ordered kappa1 < kappa2 (got {kappa1} >= {kappa2})")]
    UnorderedFrequencies { kappa1: f64, kappa2: f64 },
    #[error("cyclotron frequency {omega} is within the resonance margin of kappa1 = {kappa1} (limit {limit})")]
    NearResonance { omega: f64, kappa1: f64, limit: f64 },
    #[error("{name} must be positive (got {value})")]
    NonPositive { name: &'static str, value: f64 },
    #[error("light-front momentum (np) must be positive (got {0})")]
    ZeroLightFront(f64),
    #[error("residual evaluated at a pole: r = {r} coincides with kappa = {kappa}")]
    PoleEvaluation { r: f64, kappa: f64 },
    #[error(
        "perturbative root denominator vanishes for k={k}, lambda={lambda} (|D| = {denominator:e})"
    )]
    SingularDenominator {
        k: usize,
        lambda: usize,
        denominator: f64,
    },
    #[error("no sign change bracketing r_{k}{lambda} in [{lo}, {hi}]")]
    BracketFailure {
        k: usize,
        lambda: usize,
        lo: f64,
        hi: f64,
    },
    #[error(
        "root r_{k}{lambda} did not converge after {iterations} iterations (residual {residual:e})"
    )]
    NonConvergence {
        k: usize,
        lambda: usize,
        iterations: usize,
        residual: f64,
    },
    #[error("exact roots need eps > 0; use perturbative roots for the eps = 0 limit")]
    ZeroCoupling,
    #[error("negative normalization radicand for k={k}, lambda={lambda}: {radicand:e}")]
    NegativeRadicand {
        k: usize,
        lambda: usize,
        radicand: f64,
    },
    #[error("all four two-photon amplitudes vanish")]
    ZeroNorm,
    #[error("no closed form for polarization configuration {0}")]
    UnsupportedConfig(crate::qstate::PolarizationConfig),
    #[error("{what} outside its domain: {value:e}")]
    DomainError { what: &'static str, value: f64 },
    #[error("closed form hits the resonance pole (omega - kappa1)^2 = {0:e}")]
    ResonancePole(f64),
    #[error("eps * Phi = {0:e} leaves the admissible range [0, 1)")]
    RangeViolation(f64),
    #[error("{stage} stage: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Box<Error>,
    },
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    Validation(Vec<String>),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("every grid point failed ({0} points)")]
    AllRowsFailed(usize),
}

impl Error {
    pub(crate) fn at(self, stage: Stage) -> Error {
        match self {
            e @ Error::Stage { .. } => e,
            e => Error::Stage {
                stage,
                source: Box::new(e),
            },
        }
    }

    /// Innermost error, with stage labels stripped.
    pub fn root_cause(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root_cause(),
            e => e,
        }
    }

    /// True for errors caused by bad input rather than a failed computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self.root_cause(),
            Error::DegenerateFrequencies(_)
                | Error::UnorderedFrequencies { .. }
                | Error::NearResonance { .. }
                | Error::NonPositive { .. }
                | Error::ZeroLightFront(_)
                | Error::Parse { .. }
                | Error::Validation(_)
        )
    }

    /// Short snake_case tag used in the sweep CSV status column.
    pub fn kind(&self) -> &'static str {
        match self.root_cause() {
            Error::DegenerateFrequencies(_) => "degenerate_frequencies",
            Error::UnorderedFrequencies { .. } => "unordered_frequencies",
            Error::NearResonance { .. } => "near_resonance",
            Error::NonPositive { .. } => "non_positive",
            Error::ZeroLightFront(_) => "zero_light_front",
            Error::PoleEvaluation { .. } => "pole_evaluation",
            Error::SingularDenominator { .. } => "singular_denominator",
            Error::BracketFailure { .. } => "bracket_failure",
            Error::NonConvergence { .. } => "non_convergence",
            Error::ZeroCoupling => "zero_coupling",
            Error::NegativeRadicand { .. } => "negative_radicand",
            Error::ZeroNorm => "zero_norm",
            Error::UnsupportedConfig(_) => "unsupported_config",
            Error::DomainError { .. } => "domain_error",
            Error::ResonancePole(_) => "resonance_pole",
            Error::RangeViolation(_) => "range_violation",
            Error::Parse { .. } => "parse",
            Error::Validation(_) => "validation",
            Error::Io { .. } => "io",
            Error::AllRowsFailed(_) => "all_rows_failed",
            Error::Stage { .. } => unreachable!("root_cause strips stages"),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
