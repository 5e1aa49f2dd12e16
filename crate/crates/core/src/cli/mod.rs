//! Command-line front end.

pub mod config;
pub mod report;
pub mod suites;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::potentials::{FamilyParams, JetFn, PotentialFamily};
use crate::shape_invariance::si_hamiltonian_fn;
use crate::transforms::{crum_potential_fn, crum_wavefunction_fn, TransformChain};
use crate::verify::{build_grid, sample_values, Grid};
use config::{parse_grid, parse_key_value, ConfigError, Method, Overrides, Resolved};
use report::Report;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SINGULAR: i32 = 3;
pub const EXIT_MISSING_FLOW: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "darboux-crum", version, about = "Darboux and Crum transforms of solvable potentials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a transformed potential and eigenfunctions on a grid (CSV + JSON).
    Transform(Common),
    /// Run a verification suite and print a JSON report.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    CrumDarboux,
    ShapeInvariance,
    WronskianIdentities,
    Residuals,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::CrumDarboux => "crum-darboux",
            Suite::ShapeInvariance => "shape-invariance",
            Suite::WronskianIdentities => "wronskian-identities",
            Suite::Residuals => "residuals",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Args)]
pub struct Common {
    /// JSON run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// morse or ginocchio.
    #[arg(long)]
    pub family: Option<String>,
    /// Family parameter, e.g. `A=3` or `beta=0.8` (repeatable).
    #[arg(long = "param", value_parser = parse_key_value, allow_hyphen_values = true)]
    pub params: Vec<(String, f64)>,
    /// Number of eigenpairs to build.
    #[arg(long)]
    pub levels: Option<usize>,
    /// Transform order n.
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// `min,max,count`
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub grid: Option<(f64, f64, usize)>,
    /// Do not carve out points near zeros of the seed Wronskians
    #[arg(long)]
    pub no_node_scan: bool,
    /// CSV output path; the JSON sidecar goes next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Tolerance override, e.g. `morse=1e-9` (repeatable).
    #[arg(long = "tol", value_parser = parse_key_value)]
    pub tols: Vec<(String, f64)>,
    /// Half-width in `y` of the band removed around the Ginocchio pole.
    #[arg(long)]
    pub band: Option<f64>,
    /// Allow flowed parameters that no longer carry a bound state.
    #[arg(long)]
    pub allow_unbound_flow: bool,
}

impl Common {
    fn resolve(&self) -> Result<Resolved, ConfigError> {
        let cfg = config::load(self.config.as_deref())?;
        let ov = Overrides {
            family: self.family.clone(),
            params: self.params.clone(),
            levels: self.levels,
            order: self.order,
            method: self.method,
            grid: self.grid,
            no_node_scan: self.no_node_scan,
            out: self.out.clone(),
            tols: self.tols.clone(),
            band: self.band,
            allow_unbound_flow: self.allow_unbound_flow,
        };
        config::resolve(cfg, &ov)
    }
}

/// Failure of a command, with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure { code: EXIT_CONFIG, message: e.to_string() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::MissingFlow(_) => EXIT_MISSING_FLOW,
            Error::SingularDivision { .. }
            | Error::Singularities { .. }
            | Error::EmptyGrid
            | Error::DegenerateComparand(_) => EXIT_SINGULAR,
            _ => EXIT_CONFIG,
        };
        let message = match &e {
            Error::Singularities { points, .. } => format!("{e}; offending points: {points:?}"),
            _ => e.to_string(),
        };
        Failure { code, message }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: EXIT_CONFIG, message: format!("i/o error: {e}") }
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Transform(common) => cmd_transform(common, stdout),
        Command::Verify { suite, common } => cmd_verify(common, *suite, stdout),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn family_and_grid(cfg: &Resolved, n: usize) -> Result<(PotentialFamily, Grid), Failure> {
    let fam = PotentialFamily::build(cfg.params, cfg.levels)?;
    suites::require_levels(&fam, n)?;
    let grid = build_grid(&fam, n, cfg.grid, cfg.band)?;
    Ok((fam, grid))
}

pub fn cmd_verify(common: &Common, suite: Suite, out: &mut dyn Write) -> Result<i32, Failure> {
    let cfg = common.resolve()?;
    let (fam, grid) = family_and_grid(&cfg, cfg.levels)?;
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    if matches!(suite, Suite::CrumDarboux | Suite::All) {
        records.extend(suites::crum_darboux(&fam, &cfg, &grid)?);
    }
    if matches!(suite, Suite::ShapeInvariance | Suite::All) {
        match suites::shape_invariance(&fam, &cfg, &grid) {
            Err(Error::MissingFlow(_)) if suite == Suite::All => skipped.push("shape-invariance".to_string()),
            r => records.extend(r?),
        }
    }
    if matches!(suite, Suite::WronskianIdentities | Suite::All) {
        records.extend(suites::wronskian_identities(&fam, &cfg, &grid)?);
    }
    if matches!(suite, Suite::Residuals | Suite::All) {
        records.extend(suites::residuals(&fam, &cfg, &grid)?);
    }
    let report = Report::new(suite.name(), cfg.params, cfg.levels, cfg.order, records, skipped);
    serde_json::to_writer_pretty(&mut *out, &report).map_err(|e| Failure { code: EXIT_CONFIG, message: e.to_string() })?;
    writeln!(out)?;
    Ok(if report.passed() { EXIT_PASS } else { EXIT_FAIL })
}

struct Column {
    name: String,
    f: JetFn,
}

fn transform_columns(fam: &PotentialFamily, cfg: &Resolved) -> Result<Vec<Column>, Failure> {
    let n = cfg.order;
    let col = |name: String, f: JetFn| Column { name, f };
    let labels: Vec<usize> = fam.eigenpairs.iter().skip(n).map(|e| e.index).collect();
    let mut cols = vec![col("u0".into(), fam.potential.clone())];
    match cfg.method {
        Method::Crum => {
            cols.push(col(format!("u_{n}"), crum_potential_fn(fam, n)));
            cols.extend(labels.iter().map(|&s| col(format!("psi_{s}"), crum_wavefunction_fn(fam, n, s))));
        }
        Method::Darboux => {
            let chain = TransformChain::at_level(fam, n)?;
            cols.push(col(format!("u_{n}"), chain.potential.clone()));
            for &s in &labels {
                cols.push(col(format!("psi_{s}"), chain.wavefunction(s)?.clone()));
            }
        }
        Method::Both => {
            let chain = TransformChain::at_level(fam, n)?;
            cols.push(col(format!("u_{n}_crum"), crum_potential_fn(fam, n)));
            cols.push(col(format!("u_{n}_darboux"), chain.potential.clone()));
            for &s in &labels {
                cols.push(col(format!("psi_{s}_crum"), crum_wavefunction_fn(fam, n, s)));
                cols.push(col(format!("psi_{s}_darboux"), chain.wavefunction(s)?.clone()));
            }
        }
        Method::Si => {
            cols.push(col(format!("u_{n}"), si_hamiltonian_fn(fam, n, cfg.allow_unbound_flow)?));
            // level s of the transform is level s - n of the flowed family
            if !labels.is_empty() {
                let a_n = fam.flow()?.iterate(&fam.params, n);
                let flowed = fam.with_params(a_n, labels.len())?;
                for (e, &s) in flowed.eigenpairs.iter().zip(&labels) {
                    cols.push(col(format!("psi_{s}"), e.wavefunction.clone()));
                }
            }
        }
    }
    Ok(cols)
}

#[derive(Serialize)]
struct Sidecar<'a> {
    family: FamilyParams,
    levels: usize,
    order: usize,
    method: Method,
    eigenvalues: Vec<(usize, f64)>,
    grid: GridInfo<'a>,
    columns: Vec<&'a str>,
    csv: Option<String>,
}

#[derive(Serialize)]
struct GridInfo<'a> {
    min: f64,
    max: f64,
    count: usize,
    node_scan: bool,
    band: f64,
    exclusions: &'a [(f64, f64)],
    points: usize,
}

pub fn cmd_transform(common: &Common, out: &mut dyn Write) -> Result<i32, Failure> {
    let cfg = common.resolve()?;
    let (fam, grid) = family_and_grid(&cfg, cfg.order)?;
    let cols = transform_columns(&fam, &cfg)?;

    let mut data = Vec::with_capacity(cols.len());
    let mut bad: Vec<f64> = Vec::new();
    for c in &cols {
        match sample_values(&c.f, &grid) {
            Ok(v) => data.push(v),
            Err(Error::Singularities { points, .. }) => bad.extend(points),
            Err(e) => return Err(e.into()),
        }
    }
    if !bad.is_empty() {
        bad.sort_by(f64::total_cmp);
        bad.dedup();
        return Err(Error::Singularities { count: bad.len(), first: bad[0], points: bad }.into());
    }

    let mut csv = String::new();
    csv.push('x');
    for c in &cols {
        csv.push(',');
        csv.push_str(&c.name);
    }
    csv.push('\n');
    for (i, x) in grid.points.iter().enumerate() {
        csv.push_str(&format!("{x:.16e}"));
        for d in &data {
            csv.push_str(&format!(",{:.16e}", d[i]));
        }
        csv.push('\n');
    }

    let sidecar = Sidecar {
        family: cfg.params,
        levels: cfg.levels,
        order: cfg.order,
        method: cfg.method,
        eigenvalues: fam.eigenpairs.iter().map(|e| (e.index, e.eigenvalue)).collect(),
        grid: GridInfo {
            min: cfg.grid.min,
            max: cfg.grid.max,
            count: cfg.grid.count,
            node_scan: cfg.grid.node_scan,
            band: cfg.band,
            exclusions: &grid.exclusions,
            points: grid.len(),
        },
        columns: std::iter::once("x").chain(cols.iter().map(|c| c.name.as_str())).collect(),
        csv: cfg.csv.as_ref().map(|p| p.display().to_string()),
    };
    let json = serde_json::to_string_pretty(&sidecar).map_err(|e| Failure { code: EXIT_CONFIG, message: e.to_string() })?;

    match &cfg.csv {
        Some(path) => std::fs::write(path, csv)?,
        None => out.write_all(csv.as_bytes())?,
    }
    if let Some(path) = &cfg.json {
        std::fs::write(path, json + "\n")?;
    }
    Ok(EXIT_PASS)
}
