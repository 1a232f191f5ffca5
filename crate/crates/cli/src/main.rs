//! `qubeam`: roots, transformation block, two-photon state, entanglement
//! measures, parameter sweeps and self-checks.
//!
//! Exit codes: 0 success, 1 invalid input, 2 computation failure or failed checks.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qubeam_core::config::{load, SweepConfig};
use qubeam_core::entangle::EntanglementReport;
use qubeam_core::precision::{to_f64, Cplx};
use qubeam_core::sweep::{run_sweep, write_csv, write_matrix};
use qubeam_core::{
    amplitudes, build_block, exact_roots, full_report, perturbative_roots, verify, Error,
    Normalization, Order, RootMethod,
};

#[derive(Parser)]
#[command(
    name = "qubeam",
    version,
    about = "Photon entanglement through a magnetized electron medium"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact and perturbative quasiphoton frequencies
    Roots(PointArgs),
    /// Transformation matrices u, v and normalizations q as CSV
    Block(PointArgs),
    /// Two-photon amplitudes over |00>, |01>, |10>, |11>
    State(PointArgs),
    /// Entanglement measures with closed-form comparators
    Measures(PointArgs),
    /// Measures over an (omega, delta_kappa) grid
    Sweep(SweepArgs),
    /// Internal consistency checks at one point
    Verify(PointArgs),
}

#[derive(Args)]
struct PointArgs {
    /// Config file of `key = value` lines; flags override it
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long)]
    kappa1: Option<String>,
    #[arg(long)]
    kappa2: Option<String>,
    /// Cyclotron frequency
    #[arg(long)]
    omega: Option<String>,
    /// Coupling
    #[arg(long)]
    eps: Option<String>,
    /// Polarizations: uu, ud, du or dd (first letter is photon 1)
    #[arg(long)]
    pol: Option<String>,
    /// Root method: exact or pert
    #[arg(long)]
    method: Option<String>,
    /// Relative root tolerance
    #[arg(long)]
    tol: Option<String>,
    /// Perturbative order: full or leading
    #[arg(long)]
    order: Option<String>,
    /// State normalization: truncated or renormalized
    #[arg(long)]
    norm: Option<String>,
    #[arg(long)]
    resonance_margin: Option<String>,
    /// Machine-readable CSV output
    #[arg(long)]
    csv: bool,
    /// `key=value` output
    #[arg(long)]
    machine: bool,
    /// Write output to a file instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    point: PointArgs,
    #[arg(long)]
    dk_min: Option<String>,
    #[arg(long)]
    dk_max: Option<String>,
    #[arg(long)]
    dk_steps: Option<String>,
    #[arg(long)]
    omega_min: Option<String>,
    #[arg(long)]
    omega_max: Option<String>,
    #[arg(long)]
    omega_steps: Option<String>,
    /// Also write a gnuplot nonuniform matrix file (E_I then E_S)
    #[arg(long, value_name = "PATH")]
    matrix: Option<PathBuf>,
}

impl PointArgs {
    fn overrides(&self) -> Vec<(String, String)> {
        let mut o = Vec::new();
        let fields = [
            ("kappa1", &self.kappa1),
            ("kappa2", &self.kappa2),
            ("omega", &self.omega),
            ("eps", &self.eps),
            ("pol", &self.pol),
            ("method", &self.method),
            ("tol", &self.tol),
            ("order", &self.order),
            ("norm", &self.norm),
            ("resonance_margin", &self.resonance_margin),
        ];
        for (k, v) in fields {
            if let Some(v) = v {
                o.push((k.to_string(), v.clone()));
            }
        }
        if let Some(p) = &self.out {
            o.push(("out".into(), p.display().to_string()));
        }
        o
    }

    fn load(&self, extra: Vec<(String, String)>) -> Result<SweepConfig, Failure> {
        let mut o = self.overrides();
        o.extend(extra);
        load(self.config.as_deref(), &o).map_err(Failure::Input)
    }
}

enum Failure {
    Input(Error),
    Compute(Error),
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e)
        } else {
            Failure::Compute(e)
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Compute(Error::Io {
            path: PathBuf::from("<stdout>"),
            source: e,
        })
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| {
            Failure::Compute(Error::Io {
                path: path.to_path_buf(),
                source,
            })
        }),
        None => {
            io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn g(x: f64) -> String {
    format!("{x:.16e}")
}

fn roots_cmd(args: &PointArgs) -> Result<(), Failure> {
    let cfg = args.load(Vec::new())?;
    let p = cfg.validate_point()?;
    let exact = exact_roots(&p, cfg.tol)?;
    let pert = perturbative_roots(&p)?;
    let res = exact.residuals(&p);
    let mut s = String::new();
    if args.csv {
        s.push_str("k,lambda,r_exact,r_perturbative,residual,defect\n");
    } else {
        let _ = writeln!(
            s,
            "{:>1} {:>6} {:>24} {:>24} {:>12} {:>12}",
            "k", "lambda", "r_exact", "r_perturbative", "residual", "defect"
        );
    }
    for k in 1..=2 {
        for l in 1..=2 {
            let defect = exact.offset(k, l) - pert.offset(k, l);
            let r = res[k - 1][l - 1];
            if args.csv {
                let _ = writeln!(
                    s,
                    "{k},{l},{},{},{},{}",
                    g(exact.r(k, l)),
                    g(pert.r(k, l)),
                    g(r),
                    g(defect)
                );
            } else {
                let _ = writeln!(
                    s,
                    "{k:>1} {l:>6} {:>24.16} {:>24.16} {r:>12.3e} {defect:>12.3e}",
                    exact.r(k, l),
                    pert.r(k, l)
                );
            }
        }
    }
    emit(cfg.out_path.as_deref(), &s)
}

fn point_roots(
    cfg: &SweepConfig,
) -> Result<(qubeam_core::ModelParams, qubeam_core::ModeRoots), Failure> {
    let p = cfg.validate_point()?;
    let roots = match cfg.root_method() {
        RootMethod::Exact { tol } => exact_roots(&p, tol)?,
        RootMethod::Perturbative => perturbative_roots(&p)?,
    };
    Ok((p, roots))
}

const SLAMBDA: [&str; 4] = ["11", "12", "21", "22"];

fn block_cmd(args: &PointArgs) -> Result<(), Failure> {
    let cfg = args.load(Vec::new())?;
    let (p, roots) = point_roots(&cfg)?;
    let b = build_block(&roots, &p)?;
    let mut s = String::from("matrix,row,col,re,im\n");
    for (name, m) in [("u", &b.u), ("v", &b.v)] {
        for s_l in 0..4 {
            for k_l in 0..4 {
                let z = m[s_l][k_l];
                let _ = writeln!(
                    s,
                    "{name},{},{},{},{}",
                    SLAMBDA[s_l],
                    SLAMBDA[k_l],
                    g(to_f64(z.re)),
                    g(to_f64(z.im))
                );
            }
        }
    }
    for k in 1..=2 {
        for l in 1..=2 {
            let _ = writeln!(s, "q,{k},{l},{},{}", g(b.q_at(k, l)), g(0.0));
        }
    }
    emit(cfg.out_path.as_deref(), &s)
}

const BASIS: [&str; 4] = ["|00>", "|01>", "|10>", "|11>"];

fn state_cmd(args: &PointArgs) -> Result<(), Failure> {
    let cfg = args.load(Vec::new())?;
    let (p, roots) = point_roots(&cfg)?;
    let amps = amplitudes(&build_block(&roots, &p)?, cfg.pol)?;
    let amps = match cfg.norm {
        Normalization::Truncated => amps,
        Normalization::Renormalized => amps.normalized(),
    };
    let part = |z: Cplx| (to_f64(z.re), to_f64(z.im));
    let mut s = String::new();
    if args.csv {
        s.push_str("index,basis,re,im\n");
        for (i, z) in amps.values().iter().enumerate() {
            let (re, im) = part(*z);
            let _ = writeln!(s, "{},{},{},{}", i + 1, BASIS[i], g(re), g(im));
        }
    } else if args.machine {
        let _ = writeln!(s, "config={}", cfg.pol);
        for (i, z) in amps.values().iter().enumerate() {
            let (re, im) = part(*z);
            let _ = writeln!(s, "v{}_re={}\nv{}_im={}", i + 1, g(re), i + 1, g(im));
        }
        let _ = writeln!(s, "raw_norm={}", g(amps.raw_norm()));
    } else {
        let _ = writeln!(s, "config    {}", cfg.pol);
        for (i, z) in amps.values().iter().enumerate() {
            let (re, im) = part(*z);
            let _ = writeln!(s, "v{} {}  {re:>24.16e} {im:>24.16e}", i + 1, BASIS[i]);
        }
        let _ = writeln!(s, "raw_norm  {}", g(amps.raw_norm()));
    }
    emit(cfg.out_path.as_deref(), &s)
}

fn report_fields(cfg: &SweepConfig, r: &EntanglementReport) -> Vec<(&'static str, String)> {
    let opt = |x: Option<f64>| x.map(g).unwrap_or_else(|| "n/a".into());
    let order = match r.options.order {
        Order::Full => "full",
        Order::Leading => "leading",
    };
    let norm = match r.options.normalization {
        Normalization::Truncated => "truncated",
        Normalization::Renormalized => "renormalized",
    };
    let method = match r.options.method {
        RootMethod::Exact { .. } => "exact",
        RootMethod::Perturbative => "pert",
    };
    vec![
        ("config", r.config.to_string()),
        ("method", method.into()),
        ("order", order.into()),
        ("norm", norm.into()),
        ("kappa1", g(cfg.kappa1)),
        ("kappa2", g(cfg.kappa2)),
        ("omega", g(cfg.omega)),
        ("eps", g(cfg.eps)),
        ("E_I", g(r.e_i)),
        ("E_S", g(r.e_s)),
        ("y", g(r.y)),
        ("gap_deficit", g(r.gap_deficit)),
        ("raw_norm", g(r.raw_norm)),
        ("Phi", opt(r.closed.map(|c| c.phi))),
        ("y_closed", opt(r.closed.map(|c| c.y_closed))),
        ("E_I_asymptotic", opt(r.closed.map(|c| c.e_i_asymptotic))),
        ("E_S_closed", opt(r.closed.map(|c| c.e_s_closed))),
    ]
}

fn measures_cmd(args: &PointArgs) -> Result<(), Failure> {
    let cfg = args.load(Vec::new())?;
    let p = cfg.validate_point()?;
    let r = full_report(&p, cfg.pol, &cfg.point_options())?;
    let mut s = String::new();
    for (k, v) in report_fields(&cfg, &r) {
        if args.machine {
            let _ = writeln!(s, "{k}={v}");
        } else {
            let _ = writeln!(s, "{k:<15} {v}");
        }
    }
    emit(cfg.out_path.as_deref(), &s)
}

fn sweep_cmd(args: &SweepArgs) -> Result<(), Failure> {
    let mut extra = Vec::new();
    let grid = [
        ("dk_min", &args.dk_min),
        ("dk_max", &args.dk_max),
        ("dk_steps", &args.dk_steps),
        ("omega_min", &args.omega_min),
        ("omega_max", &args.omega_max),
        ("omega_steps", &args.omega_steps),
    ];
    for (k, v) in grid {
        if let Some(v) = v {
            extra.push((k.to_string(), v.clone()));
        }
    }
    if let Some(m) = &args.matrix {
        extra.push(("matrix".into(), m.display().to_string()));
    }
    let cfg = args.point.load(extra)?;
    cfg.validate_sweep().map_err(Failure::Input)?;
    let table = run_sweep(&cfg)?;
    let mut csv = Vec::new();
    write_csv(&table, &cfg, &mut csv)?;
    emit(cfg.out_path.as_deref(), &String::from_utf8_lossy(&csv))?;
    if let Some(path) = &cfg.matrix_path {
        let mut m = Vec::new();
        write_matrix(&table, &mut m)?;
        fs::write(path, m).map_err(|source| {
            Failure::Compute(Error::Io {
                path: path.clone(),
                source,
            })
        })?;
    }
    eprintln!("{} points, {} failed", table.rows.len(), table.failures());
    Ok(())
}

fn verify_cmd(args: &PointArgs) -> Result<(), Failure> {
    let cfg = args.load(Vec::new())?;
    let report = verify(&cfg)?;
    emit(cfg.out_path.as_deref(), &report.to_string())?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Roots(a) => roots_cmd(a),
        Command::Block(a) => block_cmd(a),
        Command::State(a) => state_cmd(a),
        Command::Measures(a) => measures_cmd(a),
        Command::Sweep(a) => sweep_cmd(a),
        Command::Verify(a) => verify_cmd(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Checks) => {
            eprintln!("verification failed");
            ExitCode::from(2)
        }
    }
}
