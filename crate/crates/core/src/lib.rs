//! Entanglement of two photons coupled through a magnetized electron medium.
//!
//! The pipeline runs dispersion roots → canonical-transformation block →
//! two-photon amplitudes → reduced density → entanglement measures:
//!
//! ```
//! use qubeam_core::{full_report, make_params, EvalOptions, PolarizationConfig};
//!
//! let p = make_params(2500.0, 3000.0, 0.5, 0.1).unwrap();
//! let r = full_report(&p, PolarizationConfig::DOWN_UP, &EvalOptions::default()).unwrap();
//! assert!(r.e_s > 0.0 && r.e_s < 1e-11);
//! ```

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bogoliubov;
pub mod config;
pub mod dispersion;
pub mod entangle;
pub mod error;
pub mod params;
pub mod precision;
pub mod qstate;
pub mod sweep;
pub mod verify;

pub use bogoliubov::{build_block, identity_defect, q_norms, BogoliubovBlock};
pub use config::{load, parse_config, MethodKind, SweepConfig};
pub use dispersion::{
    exact_roots, perturbative_roots, residual, ModeRoots, RootMethod, DEFAULT_TOL,
};
pub use entangle::{
    asymptotic_info, full_report, info_measure, phi_closed, reduced_density, schmidt_measure,
    EntanglementReport, EvalOptions, Normalization, Order, ReducedDensity,
};
pub use error::{Error, Result, Stage};
pub use params::{derive_couplings, make_params, ModelParams, PhysicalInputs};
pub use qstate::{amplitudes, closed_form_ab, PolarizationConfig, TwoQubitAmplitudes};
pub use sweep::{run_sweep, write_csv, write_matrix, SweepRow, SweepTable};
pub use verify::{verify, VerifyReport};
