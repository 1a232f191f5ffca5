//! Grid evaluation over (ω, Δκ) and its CSV / gnuplot output.

use std::io::{self, Write};

use rayon::prelude::*;

use crate::config::SweepConfig;
use crate::entangle::{full_report, EntanglementReport};
use crate::error::{Error, Result};
use crate::params::make_params_with_margin;

pub const CSV_HEADER: &str =
    "omega,delta_kappa,kappa2,y,E_I,E_S,E_I_asymptotic,E_S_closed,raw_norm,status";

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "QUBEAM_THREADS";

#[derive(Clone, Debug, PartialEq)]
pub struct RowValues {
    pub y: f64,
    pub e_i: f64,
    pub e_s: f64,
    pub e_i_asymptotic: Option<f64>,
    pub e_s_closed: Option<f64>,
    pub raw_norm: f64,
}

impl From<&EntanglementReport> for RowValues {
    fn from(r: &EntanglementReport) -> Self {
        Self {
            y: r.y,
            e_i: r.e_i,
            e_s: r.e_s,
            e_i_asymptotic: r.closed.map(|c| c.e_i_asymptotic),
            e_s_closed: r.closed.map(|c| c.e_s_closed),
            raw_norm: r.raw_norm,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub omega: f64,
    pub delta_kappa: f64,
    pub kappa2: f64,
    /// Values, or the error kind of a failed point.
    pub outcome: std::result::Result<RowValues, &'static str>,
}

#[derive(Clone, Debug)]
pub struct SweepTable {
    pub omega: Vec<f64>,
    pub delta_kappa: Vec<f64>,
    /// Row-major in (omega, delta_kappa).
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.outcome.is_err()).count()
    }

    pub fn row(&self, i_omega: usize, i_dk: usize) -> &SweepRow {
        &self.rows[i_omega * self.delta_kappa.len() + i_dk]
    }
}

/// Thread cap from [`THREADS_ENV`], if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()?
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
}

/// Runs the sweep on the global pool, capped by [`THREADS_ENV`].
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepTable> {
    run_sweep_with_threads(cfg, threads_from_env())
}

pub fn run_sweep_with_threads(cfg: &SweepConfig, threads: Option<usize>) -> Result<SweepTable> {
    cfg.validate_sweep()?;
    match threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Validation(vec![format!("thread pool: {e}")]))?;
            pool.install(|| evaluate_grid(cfg))
        }
        None => evaluate_grid(cfg),
    }
}

fn evaluate_grid(cfg: &SweepConfig) -> Result<SweepTable> {
    let omega = cfg.omega_grid();
    let delta_kappa = cfg.dk_grid();
    let opts = cfg.sweep_options();
    let points: Vec<(f64, f64)> = omega
        .iter()
        .flat_map(|&w| delta_kappa.iter().map(move |&dk| (w, dk)))
        .collect();
    // indexed collect keeps grid order whatever the completion order
    let rows: Vec<SweepRow> = points
        .par_iter()
        .map(|&(w, dk)| {
            let kappa2 = cfg.kappa1 + dk;
            let outcome =
                make_params_with_margin(cfg.kappa1, kappa2, w, cfg.eps, cfg.resonance_margin)
                    .and_then(|p| full_report(&p, cfg.pol, &opts))
                    .map(|r| RowValues::from(&r))
                    .map_err(|e| e.kind());
            SweepRow {
                omega: w,
                delta_kappa: dk,
                kappa2,
                outcome,
            }
        })
        .collect();
    if rows.iter().all(|r| r.outcome.is_err()) {
        return Err(Error::AllRowsFailed(rows.len()));
    }
    Ok(SweepTable {
        omega,
        delta_kappa,
        rows,
    })
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// CSV with a `#` comment header holding the version and config echo.
pub fn write_csv(table: &SweepTable, cfg: &SweepConfig, mut w: impl Write) -> io::Result<()> {
    writeln!(w, "# qubeam {}", env!("CARGO_PKG_VERSION"))?;
    for line in cfg.echo().lines() {
        writeln!(w, "# {line}")?;
    }
    writeln!(
        w,
        "# failed_points = {} of {}",
        table.failures(),
        table.rows.len()
    )?;
    writeln!(w, "{CSV_HEADER}")?;
    for r in &table.rows {
        let head = format!("{},{},{}", num(r.omega), num(r.delta_kappa), num(r.kappa2));
        match &r.outcome {
            Ok(v) => writeln!(
                w,
                "{head},{},{},{},{},{},{},ok",
                num(v.y),
                num(v.e_i),
                num(v.e_s),
                opt(v.e_i_asymptotic),
                opt(v.e_s_closed),
                num(v.raw_norm)
            )?,
            Err(kind) => writeln!(w, "{head},,,,,,,error:{kind}")?,
        }
    }
    Ok(())
}

/// gnuplot `nonuniform matrix` data: index 0 holds E_I, index 1 holds E_S.
///
/// Columns are Δκ, rows are ω. Failed points are written as NaN.
pub fn write_matrix(table: &SweepTable, mut w: impl Write) -> io::Result<()> {
    type Getter = fn(&RowValues) -> f64;
    let blocks: [(&str, Getter); 2] = [("E_I", |v| v.e_i), ("E_S", |v| v.e_s)];
    for (b, (name, get)) in blocks.iter().enumerate() {
        if b > 0 {
            writeln!(w)?;
            writeln!(w)?;
        }
        writeln!(w, "# {name}: rows omega, columns delta_kappa")?;
        write!(w, "{}", table.delta_kappa.len())?;
        for dk in &table.delta_kappa {
            write!(w, " {}", num(*dk))?;
        }
        writeln!(w)?;
        for (i, om) in table.omega.iter().enumerate() {
            write!(w, "{}", num(*om))?;
            for j in 0..table.delta_kappa.len() {
                match &table.row(i, j).outcome {
                    Ok(v) => write!(w, " {}", num(get(v)))?,
                    Err(_) => write!(w, " NaN")?,
                }
            }
            writeln!(w)?;
        }
    }
    Ok(())
}
