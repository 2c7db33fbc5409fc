//! Command-line driver: `trees`, `evaluate`, `verify` and `decay`.

mod config;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub use config::{
    ClassName, ClassSection, DecaySection, GridSection, InitialSection, MutationName, OutputSection, RunConfig,
    SuiteSection, TreesSection, TruncationSection, OUT_DIR_ENV,
};

use crate::bounds::{
    decay_fit, estimate_a_prime, log_majorant, majorant_slope, write_json, write_table, zn_fit_enumerated, BoundParams,
    DecayFit, MajorantSlope, DEFAULT_MIN_SPAN,
};
use crate::error::{Error, Result};
use crate::series::{class_sum, fit_envelope, PhiCache};
use crate::spectral::{io as field_io, make_initial, to_velocity, vnorm, Grid, SpectralField};
use crate::suite::{run_suite, Family, SuiteInput};
use crate::treelib::{enumerate, write_csv, Tree};

#[derive(Debug, Parser)]
#[command(name = "nstrees", version, about = "Tree series for 3D Navier-Stokes in Fourier space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate trees with their statistics.
    Trees(CommonArgs),
    /// Evaluate a truncated tree series.
    Evaluate(CommonArgs),
    /// Run the verification suite.
    Verify(CommonArgs),
    /// Decay profiles and fits in the critical case.
    Decay(CommonArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// TOML run configuration; defaults apply when absent.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Report family to run (repeatable).
    #[arg(long)]
    pub only: Vec<Family>,
    #[arg(long)]
    pub max_size: Option<usize>,
    /// all, simple or short
    #[arg(long)]
    pub class: Option<ClassName>,
    #[arg(long)]
    pub seed: Option<u64>,
}

impl CommonArgs {
    /// Config file, then flags, then the output-dir environment override
    /// (which `--out` beats).
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(n) = self.max_size {
            c.trees.max_size = n;
        }
        if let Some(k) = self.class {
            c.class.filter = k;
        }
        if let Some(s) = self.seed {
            c.initial.seed = s;
        }
        if !self.only.is_empty() {
            c.suite.only = self.only.clone();
        }
        if let Some(o) = &self.out {
            c.output.dir = o.clone();
        } else if let Some(o) = std::env::var_os(OUT_DIR_ENV) {
            c.output.dir = PathBuf::from(o);
        }
        c.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    command: &'a str,
    config_fingerprint: String,
    files: Vec<String>,
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    std::fs::create_dir_all(dir)?;
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn write_manifest(c: &RunConfig, command: &str, files: &[&str]) -> Result<()> {
    let m = Manifest {
        command,
        config_fingerprint: c.fingerprint()?,
        files: files.iter().map(|s| s.to_string()).collect(),
    };
    let mut w = create(&c.output.dir, "manifest.json")?;
    serde_json::to_writer_pretty(&mut w, &m)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct CountRow {
    size: usize,
    count: usize,
    in_class: usize,
}

/// `trees.csv` with one row per admitted tree and `counts.csv` with `Z_n`.
pub fn cmd_trees(c: &RunConfig) -> Result<Vec<PathBuf>> {
    let p = c.class_params()?;
    let filter = c.class_filter()?;
    let groups = enumerate(c.trees.max_size)?;
    let mut admitted: Vec<&Tree> = Vec::new();
    let mut rows = Vec::new();
    for g in &groups {
        let mut n_in = 0;
        for t in g {
            if filter.admits(t)? {
                admitted.push(t);
                n_in += 1;
            }
        }
        rows.push(CountRow {
            size: g[0].size(),
            count: g.len(),
            in_class: n_in,
        });
    }
    let mut w = create(&c.output.dir, "trees.csv")?;
    write_csv(&mut w, admitted, &p)?;
    w.flush()?;
    let mut w = csv::Writer::from_writer(create(&c.output.dir, "counts.csv")?);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    write_manifest(c, "trees", &["trees.csv", "counts.csv"])?;
    Ok(["trees.csv", "counts.csv", "manifest.json"]
        .iter()
        .map(|f| c.output.dir.join(f))
        .collect())
}

/// Datum and memo table of a run.
pub fn session(c: &RunConfig) -> Result<PhiCache> {
    let grid = Grid::new(c.grid_spec()?)?;
    let h = make_initial(&grid, c.initial.kind, c.initial.amplitude, c.initial.seed)?;
    Ok(PhiCache::with_mutation(&h, c.mutation()))
}

/// Constants of the majorants: `A = B` fitted on the run's trees at every
/// positive time node, `D` from the tree counts up to 12, `A'` by
/// quadrature. `None` for the zero datum.
pub fn fitted_params(cache: &PhiCache, size_cap: usize) -> Result<Option<BoundParams>> {
    if cache.h().is_zero() {
        return Ok(None);
    }
    let spec = cache.h().grid().spec();
    let times: Vec<f64> = spec.times().into_iter().skip(1).collect();
    let fit = fit_envelope(cache, size_cap.max(1), &times)?;
    let d = zn_fit_enumerated(12)?.d;
    let a_prime = estimate_a_prime(spec.alpha)?.value;
    let h_norm = crate::spectral::sup_norm(cache.h());
    Ok(Some(BoundParams::new(spec.alpha, fit.a_fit, a_prime, d, fit.a_fit, h_norm)?))
}

#[derive(Debug, Serialize)]
struct EvaluateFile<'a> {
    config_fingerprint: String,
    params: Option<&'a BoundParams>,
    #[serde(flatten)]
    report: serde_json::Value,
}

/// `series.json`, `series.csv` and the partial-sum trajectory.
pub fn cmd_evaluate(c: &RunConfig) -> Result<Vec<PathBuf>> {
    let cache = session(c)?;
    let params = fitted_params(&cache, c.truncation.size_cap)?;
    let report = class_sum(&cache, c.class_filter()?, c.truncation.size_cap, params.as_ref())?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let mut buf = Vec::new();
    report.write_json(&mut buf)?;
    let file = EvaluateFile {
        config_fingerprint: c.fingerprint()?,
        params: params.as_ref(),
        report: serde_json::from_slice(&buf)?,
    };
    let mut w = create(&c.output.dir, "series.json")?;
    serde_json::to_writer_pretty(&mut w, &file)?;
    w.write_all(b"\n")?;
    w.flush()?;
    report.write_csv(create(&c.output.dir, "series.csv")?, params.as_ref())?;
    let mut w = create(&c.output.dir, "partial_sum.json")?;
    field_io::write_trajectory(&mut w, &report.partial_sum)?;
    w.flush()?;
    write_manifest(c, "evaluate", &["series.json", "series.csv", "partial_sum.json"])?;
    Ok(["series.json", "series.csv", "partial_sum.json", "manifest.json"]
        .iter()
        .map(|f| c.output.dir.join(f))
        .collect())
}

/// Runs the suite, writes `suite.json` and `suite.txt`, and returns
/// whether every report passed.
pub fn cmd_verify(c: &RunConfig) -> Result<bool> {
    let input = SuiteInput {
        spec: c.grid_spec()?,
        kind: c.initial.kind,
        amplitude: c.initial.amplitude,
        seed: c.initial.seed,
        size_cap: c.truncation.size_cap,
        class: c.class_params()?,
        mutation: c.mutation(),
    };
    let reports = run_suite(&input, &c.suite.only)?;
    let mut w = create(&c.output.dir, "suite.json")?;
    write_json(&mut w, &reports)?;
    w.flush()?;
    let mut w = create(&c.output.dir, "suite.txt")?;
    write_table(&mut w, &reports)?;
    w.flush()?;
    write_table(std::io::stdout().lock(), &reports)?;
    write_manifest(c, "verify", &["suite.json", "suite.txt"])?;
    Ok(reports.iter().all(|r| r.pass))
}

#[derive(Debug, Serialize)]
struct ProfileRow {
    wavenumber: f64,
    measured: f64,
    majorant: f64,
}

#[derive(Debug, Serialize)]
struct TimeRow {
    time: f64,
    measured: f64,
    majorant: f64,
}

#[derive(Debug, Serialize)]
struct DecayFile {
    config_fingerprint: String,
    c1: f64,
    h_norm: f64,
    time: f64,
    fit: DecayFit,
    majorant_slope: MajorantSlope,
}

/// Largest `|v(k)|` on each lattice shell.
pub fn shell_maxima(v: &SpectralField) -> Vec<(f64, f64)> {
    let grid = v.grid();
    let mut shells: Vec<(f64, f64)> = Vec::new();
    for (idx, x) in v.values().iter().enumerate() {
        let kn = grid.norms[idx];
        if kn == 0.0 {
            continue;
        }
        let a = vnorm(x);
        match shells.iter_mut().find(|s| (s.0 - kn).abs() <= 1e-9 * kn) {
            Some(s) => s.1 = s.1.max(a),
            None => shells.push((kn, a)),
        }
    }
    shells.sort_by(|a, b| a.0.total_cmp(&b.0));
    shells
}

/// `decay_k.csv` (shell profile at `decay.time`), `decay_t.csv` (the shell
/// nearest `decay.wavenumber` over time) and `decay.json`.
pub fn cmd_decay(c: &RunConfig) -> Result<Vec<PathBuf>> {
    if c.grid.alpha != 2.0 {
        return Err(Error::Divergent(format!(
            "decay profiles need alpha = 2, got {}",
            c.grid.alpha
        )));
    }
    let cache = session(c)?;
    let p = fitted_params(&cache, c.truncation.size_cap)?
        .ok_or_else(|| Error::Divergent("zero datum has no decay profile".into()))?;
    let c1 = p.combined();
    let report = class_sum(&cache, c.class_filter()?, c.truncation.size_cap, Some(&p))?;
    let spec = cache.h().grid().spec().clone();
    let j = spec.nearest_time_index(c.decay.time);
    let t = spec.time(j);
    let v = to_velocity(report.partial_sum.frame(j));
    let fit = decay_fit(&v, t, c1, p.h_norm, 1e-300, DEFAULT_MIN_SPAN)?;
    let slope = majorant_slope(c1, p.h_norm, 1.0, 5.0, 15.0, 21)?;

    let mut w = csv::Writer::from_writer(create(&c.output.dir, "decay_k.csv")?);
    for (kn, a) in shell_maxima(&v) {
        w.serialize(ProfileRow {
            wavenumber: kn,
            measured: a,
            majorant: log_majorant(kn, t, c1, p.h_norm)?.exp(),
        })?;
    }
    w.flush()?;

    let shells = shell_maxima(cache.h());
    let k0 = shells
        .iter()
        .map(|s| s.0)
        .min_by(|a, b| (a - c.decay.wavenumber).abs().total_cmp(&(b - c.decay.wavenumber).abs()))
        .ok_or_else(|| Error::InsufficientData("no nonzero wavevectors".into()))?;
    let mut w = csv::Writer::from_writer(create(&c.output.dir, "decay_t.csv")?);
    for (jj, time) in spec.times().into_iter().enumerate() {
        let vt = to_velocity(report.partial_sum.frame(jj));
        let measured = shell_maxima(&vt)
            .into_iter()
            .find(|s| (s.0 - k0).abs() <= 1e-9 * k0)
            .map_or(0.0, |s| s.1);
        let majorant = if time > 0.0 { log_majorant(k0, time, c1, p.h_norm)?.exp() } else { f64::NAN };
        w.serialize(TimeRow { time, measured, majorant })?;
    }
    w.flush()?;

    let file = DecayFile {
        config_fingerprint: c.fingerprint()?,
        c1,
        h_norm: p.h_norm,
        time: t,
        fit,
        majorant_slope: slope,
    };
    let mut w = create(&c.output.dir, "decay.json")?;
    serde_json::to_writer_pretty(&mut w, &file)?;
    w.write_all(b"\n")?;
    w.flush()?;
    write_manifest(c, "decay", &["decay_k.csv", "decay_t.csv", "decay.json"])?;
    Ok(["decay_k.csv", "decay_t.csv", "decay.json", "manifest.json"]
        .iter()
        .map(|f| c.output.dir.join(f))
        .collect())
}

/// Exit status of a finished command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Usage,
    VerifyFailed,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        ExitCode::from(match s {
            Status::Ok => 0,
            Status::Usage => 1,
            Status::VerifyFailed => 2,
        })
    }
}

/// Run one parsed command.
pub fn execute(cli: &Cli) -> Status {
    let (args, name) = match &cli.command {
        Command::Trees(a) => (a, "trees"),
        Command::Evaluate(a) => (a, "evaluate"),
        Command::Verify(a) => (a, "verify"),
        Command::Decay(a) => (a, "decay"),
    };
    let c = match args.resolve() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("nstrees {name}: {e}");
            return Status::Usage;
        }
    };
    let done = match &cli.command {
        Command::Trees(_) => cmd_trees(&c).map(|_| Status::Ok),
        Command::Evaluate(_) => cmd_evaluate(&c).map(|_| Status::Ok),
        Command::Verify(_) => cmd_verify(&c).map(|ok| if ok { Status::Ok } else { Status::VerifyFailed }),
        Command::Decay(_) => cmd_decay(&c).map(|_| Status::Ok),
    };
    done.unwrap_or_else(|e| {
        eprintln!("nstrees {name}: {e}");
        Status::Usage
    })
}

/// Entry point of the `nstrees` binary.
pub fn run() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { Status::Usage.into() } else { Status::Ok.into() };
        }
    };
    execute(&cli).into()
}
