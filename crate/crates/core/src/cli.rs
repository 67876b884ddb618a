//! Command-line front end: `generate`, `certify` and `hopf-project`.
//!
//! A job is described by a [`JobConfig`], built either from flags or from a
//! JSON file (`--config`). `--dump-config` prints the resolved job instead of
//! running it. Exit codes: 0 success, 1 usage or configuration error, 2
//! certification failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::certify::{full_report, CertReport, ReportGrid, Tolerances};
use crate::diffgeo::{gauss_curvature, surface_point, DEFAULT_STEP};
use crate::error::{Error, Result};
use crate::helix::{Case, HelixSurface, ModelParams};
use crate::isofam::{solve_admissible, IsometryFamily, VGrid, XiFn, XiSpec};
use crate::sl2geo::{hopf_project, minkowski_norm, Sl2Point};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CERT_FAILED: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Generate,
    Certify,
    HopfProject,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CaseArg {
    B0,
    Bpos,
    Bneg,
}

impl From<CaseArg> for Case {
    fn from(c: CaseArg) -> Self {
        match c {
            CaseArg::B0 => Case::Zero,
            CaseArg::Bpos => Case::Positive,
            CaseArg::Bneg => Case::Negative,
        }
    }
}

/// A fully described job.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub command: Command,
    pub tau: f64,
    #[serde(default)]
    pub theta: Option<f64>,
    #[serde(default)]
    pub cos_theta: Option<f64>,
    #[serde(default)]
    pub case: Option<Case>,
    pub xi: String,
    pub xi1: String,
    pub xi3: String,
    /// Initial value of the solved `ξ2`; ignored when `xi2` is given.
    /// Defaults to [`default_xi2_init`].
    #[serde(default)]
    pub xi2_init: Option<f64>,
    /// An explicit `ξ2`, taken as is, without solving the constraint.
    #[serde(default)]
    pub xi2: Option<String>,
    pub u_range: (f64, f64),
    pub v_range: (f64, f64),
    pub grid: (usize, usize),
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub report: Option<PathBuf>,
    #[serde(default = "one")]
    pub tol_scale: f64,
}

fn one() -> f64 {
    1.0
}

impl JobConfig {
    /// The default job for `command`: the report family of the test suite on
    /// `[0, 0.5] x [0, 1]`.
    pub fn new(command: Command, tau: f64) -> Self {
        JobConfig {
            command,
            tau,
            theta: None,
            cos_theta: None,
            case: None,
            xi: "0.3".into(),
            xi1: "sin:0.15,1,0,0.2".into(),
            xi3: "poly:0,0.2".into(),
            xi2_init: None,
            xi2: None,
            u_range: (0.0, 0.5),
            v_range: (0.0, 1.0),
            grid: (20, 20),
            out: None,
            report: None,
            tol_scale: 1.0,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config {
            field: format!("line {}, column {}", e.line(), e.column()),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    fn parse_xi(&self, field: &str, text: &str) -> Result<XiFn> {
        XiFn::parse(text).map_err(|e| config_error(field, e.to_string()))
    }

    /// Case constants, honoring the angle inputs and the case override.
    pub fn params(&self) -> Result<ModelParams> {
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return Err(config_error(
                "tau",
                format!("must be positive, got {}", self.tau),
            ));
        }
        let params = match (self.theta, self.cos_theta) {
            (Some(_), Some(_)) => {
                return Err(config_error("theta", "give theta or cos_theta, not both"))
            }
            (Some(t), None) => crate::helix::case_params(self.tau, t)?,
            (None, Some(c)) => ModelParams::from_cos(self.tau, c)?,
            (None, None) if self.case == Some(Case::Zero) => ModelParams::b_zero(self.tau)?,
            (None, None) => {
                return Err(config_error(
                    "cos_theta",
                    "one of theta or cos_theta is required unless case is b0",
                ))
            }
        };
        if let Some(case) = self.case {
            if case != params.case {
                return Err(Error::CaseMismatch {
                    family: case.to_string(),
                    params: params.case.to_string(),
                });
            }
        }
        Ok(params)
    }

    fn validate_ranges(&self) -> Result<()> {
        for (field, r) in [("u_range", self.u_range), ("v_range", self.v_range)] {
            if !(r.0.is_finite() && r.1.is_finite() && r.0 < r.1) {
                return Err(config_error(
                    field,
                    format!("need a < b, got {}:{}", r.0, r.1),
                ));
            }
        }
        if self.grid.0 < 2 || self.grid.1 < 2 {
            return Err(config_error("grid", "need at least 2x2"));
        }
        if !(self.tol_scale.is_finite() && self.tol_scale > 0.0) {
            return Err(config_error("tol_scale", "must be positive"));
        }
        Ok(())
    }

    /// Builds the surface on a domain padded around the requested ranges, so
    /// that finite-difference stencils at the edges stay inside it.
    pub fn surface(&self) -> Result<HelixSurface> {
        self.validate_ranges()?;
        let params = self.params()?;
        let xi = self.parse_xi("xi", &self.xi)?;
        let xi1 = self.parse_xi("xi1", &self.xi1)?;
        let xi3 = self.parse_xi("xi3", &self.xi3)?;
        let v_dom = padded(self.v_range);
        let family = match &self.xi2 {
            Some(text) => {
                let xi2 = self.parse_xi("xi2", text)?;
                IsometryFamily::new(
                    XiSpec {
                        xi,
                        xi1,
                        xi2,
                        xi3,
                        domain: v_dom,
                    },
                    params.case,
                )?
            }
            None => {
                let init = self.xi2_init.unwrap_or(default_xi2_init(params.case));
                solve_admissible(&params, xi, xi1, xi3, init, VGrid::new(v_dom.0, v_dom.1))?
            }
        };
        HelixSurface::new(params, family, padded(self.u_range))
    }

    pub fn report_grid(&self) -> ReportGrid {
        ReportGrid {
            u_range: self.u_range,
            v_range: self.v_range,
            nu: self.grid.0,
            nv: self.grid.1,
        }
    }
}

fn config_error(field: &str, message: impl Into<String>) -> Error {
    Error::Config {
        field: field.into(),
        message: message.into(),
    }
}

/// Initial `ξ2` of the default family. For `B > 0` it is shifted so that the
/// default patch stays clear of the curve where `F_u` and `F_v` align.
pub fn default_xi2_init(case: Case) -> f64 {
    match case {
        Case::Positive => 1.15,
        Case::Zero => 1.0,
        Case::Negative => 0.1,
    }
}

/// `[a, b]` widened by `0.02 (b - a) + 0.01` on each side.
pub fn padded(r: (f64, f64)) -> (f64, f64) {
    let pad = 0.02 * (r.1 - r.0) + 0.01;
    (r.0 - pad, r.1 + pad)
}

fn parse_range(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected a:b, got `{s}`"))?;
    let a = a.trim().parse::<f64>().map_err(|e| format!("`{a}`: {e}"))?;
    let b = b.trim().parse::<f64>().map_err(|e| format!("`{b}`: {e}"))?;
    Ok((a, b))
}

fn parse_grid(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected NUxNV, got `{s}`"))?;
    let a = a
        .trim()
        .parse::<usize>()
        .map_err(|e| format!("`{a}`: {e}"))?;
    let b = b
        .trim()
        .parse::<usize>()
        .map_err(|e| format!("`{b}`: {e}"))?;
    Ok((a, b))
}

#[derive(Debug, Parser)]
#[command(
    name = "sl2helix",
    version,
    about = "Helix surfaces in SL(2,R) with the metric g_tau"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Write an OBJ mesh (Hopf-projected) and a CSV of per-vertex data.
    Generate(JobArgs),
    /// Write a certification report; exit 2 if any check fails.
    Certify(JobArgs),
    /// Write the Hopf projection of the sampled surface as CSV.
    HopfProject(JobArgs),
}

#[derive(Debug, Args)]
struct JobArgs {
    /// Read the job from a JSON file; other flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    cos_theta: Option<f64>,
    #[arg(long, value_enum)]
    case: Option<CaseArg>,
    /// Constant, `poly:c0,c1,..` or `sin:amp,freq,phase,offset`.
    #[arg(long, allow_hyphen_values = true)]
    xi: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    xi1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    xi3: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    xi2_init: Option<f64>,
    /// Explicit xi2, used without solving the admissibility constraint.
    #[arg(long, allow_hyphen_values = true)]
    xi2: Option<String>,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    u_range: Option<(f64, f64)>,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    v_range: Option<(f64, f64)>,
    #[arg(long, value_parser = parse_grid)]
    grid: Option<(usize, usize)>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    tol_scale: Option<f64>,
    /// Print the resolved job as JSON and exit.
    #[arg(long)]
    dump_config: bool,
}

impl JobArgs {
    fn into_config(self, command: Command) -> Result<(JobConfig, bool)> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                let mut cfg = JobConfig::from_json(&text)?;
                cfg.command = command;
                cfg
            }
            None => {
                let tau = self
                    .tau
                    .ok_or_else(|| config_error("tau", "--tau is required without --config"))?;
                JobConfig::new(command, tau)
            }
        };
        if let Some(t) = self.tau {
            cfg.tau = t;
        }
        if self.theta.is_some() || self.cos_theta.is_some() {
            cfg.theta = self.theta;
            cfg.cos_theta = self.cos_theta;
        }
        if let Some(c) = self.case {
            cfg.case = Some(c.into());
        }
        if let Some(x) = self.xi {
            cfg.xi = x;
        }
        if let Some(x) = self.xi1 {
            cfg.xi1 = x;
        }
        if let Some(x) = self.xi3 {
            cfg.xi3 = x;
        }
        if self.xi2_init.is_some() {
            cfg.xi2_init = self.xi2_init;
        }
        if self.xi2.is_some() {
            cfg.xi2 = self.xi2;
        }
        if let Some(r) = self.u_range {
            cfg.u_range = r;
        }
        if let Some(r) = self.v_range {
            cfg.v_range = r;
        }
        if let Some(g) = self.grid {
            cfg.grid = g;
        }
        if self.out.is_some() {
            cfg.out = self.out;
        }
        if self.report.is_some() {
            cfg.report = self.report;
        }
        if let Some(t) = self.tol_scale {
            cfg.tol_scale = t;
        }
        Ok((cfg, self.dump_config))
    }
}

/// What a job produced.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Written(Vec<PathBuf>),
    Certified {
        report: Box<CertReport>,
        path: Option<PathBuf>,
    },
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self {
            Outcome::Certified { report, .. } if !report.pass => EXIT_CERT_FAILED,
            _ => EXIT_OK,
        }
    }
}

/// Samples of the surface on the job grid, row-major in `u`.
struct Sample {
    i: usize,
    j: usize,
    u: f64,
    v: f64,
    point: Sl2Point,
}

fn samples(s: &HelixSurface, grid: &ReportGrid) -> Result<Vec<Sample>> {
    let mut out = Vec::with_capacity(grid.nu * grid.nv);
    for i in 0..grid.nu {
        for j in 0..grid.nv {
            let (u, v) = (grid.u(i), grid.v(j));
            out.push(Sample {
                i,
                j,
                u,
                v,
                point: Sl2Point::new(s.eval(u, v)?)?,
            });
        }
    }
    Ok(out)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    Ok(BufWriter::new(File::create(path)?))
}

/// Writes the OBJ mesh at `obj` and the attribute CSV next to it.
pub fn write_mesh(s: &HelixSurface, grid: &ReportGrid, obj: &Path) -> Result<Vec<PathBuf>> {
    let pts = samples(s, grid)?;
    let mut w = create(obj)?;
    writeln!(
        w,
        "# helix surface, {} x {} vertices, Hopf-projected",
        grid.nu, grid.nv
    )?;
    for sm in &pts {
        let [x, y, z] = hopf_project(&sm.point);
        writeln!(w, "v {x:.12} {y:.12} {z:.12}")?;
    }
    for i in 0..grid.nu - 1 {
        for j in 0..grid.nv - 1 {
            let k = |i: usize, j: usize| i * grid.nv + j + 1;
            writeln!(
                w,
                "f {} {} {} {}",
                k(i, j),
                k(i + 1, j),
                k(i + 1, j + 1),
                k(i, j + 1)
            )?;
        }
    }
    w.flush()?;

    let csv = obj.with_extension("csv");
    let mut w = create(&csv)?;
    writeln!(w, "i,j,u,v,x1,x2,x3,x4,cos_theta,gauss_curvature,phi")?;
    let tau = s.params.metric();
    for sm in &pts {
        let d = surface_point(s, sm.u, sm.v)?;
        let k = gauss_curvature(s, sm.u, sm.v, DEFAULT_STEP)?;
        let p = sm.point.coords();
        writeln!(
            w,
            "{},{},{},{},{:.15e},{:.15e},{:.15e},{:.15e},{:.15e},{:.15e},{:.15e}",
            sm.i,
            sm.j,
            sm.u,
            sm.v,
            p[0],
            p[1],
            p[2],
            p[3],
            crate::diffgeo::measured_angle(&d, tau),
            k,
            d.phi
        )?;
    }
    w.flush()?;
    Ok(vec![obj.to_path_buf(), csv])
}

/// Writes the Hopf projection of the grid as CSV.
pub fn write_hopf_projection(
    s: &HelixSurface,
    grid: &ReportGrid,
    path: &Path,
) -> Result<Vec<PathBuf>> {
    let mut w = create(path)?;
    writeln!(w, "i,j,u,v,x,y,z,minkowski_norm")?;
    for sm in samples(s, grid)? {
        let q = hopf_project(&sm.point);
        writeln!(
            w,
            "{},{},{},{},{:.15e},{:.15e},{:.15e},{:.15e}",
            sm.i,
            sm.j,
            sm.u,
            sm.v,
            q[0],
            q[1],
            q[2],
            minkowski_norm(&q)
        )?;
    }
    w.flush()?;
    Ok(vec![path.to_path_buf()])
}

/// Runs a job.
pub fn run_job(cfg: &JobConfig) -> Result<Outcome> {
    let s = cfg.surface()?;
    let grid = cfg.report_grid();
    match cfg.command {
        Command::Generate => {
            let out = cfg
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from("surface.obj"));
            Ok(Outcome::Written(write_mesh(&s, &grid, &out)?))
        }
        Command::HopfProject => {
            let out = cfg.out.clone().unwrap_or_else(|| PathBuf::from("hopf.csv"));
            Ok(Outcome::Written(write_hopf_projection(&s, &grid, &out)?))
        }
        Command::Certify => {
            let tol = Tolerances::default().scaled(cfg.tol_scale);
            let report = full_report(&s, grid, &tol)?;
            if let Some(path) = &cfg.report {
                let mut w = create(path)?;
                w.write_all(report.to_json().as_bytes())?;
                w.write_all(b"\n")?;
                w.flush()?;
            }
            Ok(Outcome::Certified {
                report: Box::new(report),
                path: cfg.report.clone(),
            })
        }
    }
}

fn summary(outcome: &Outcome) -> String {
    let mut s = String::new();
    match outcome {
        Outcome::Written(paths) => {
            for p in paths {
                let _ = writeln!(s, "wrote {}", p.display());
            }
        }
        Outcome::Certified { report, path } => {
            if let Some(p) = path {
                let _ = writeln!(s, "wrote {}", p.display());
            }
            let failed = report.failed();
            if failed.is_empty() {
                let _ = writeln!(s, "certification passed ({} checks)", report.checks.len());
            } else {
                let _ = writeln!(s, "certification FAILED: {}", failed.join(", "));
            }
        }
    }
    s
}

/// Parses `args` (program name first), runs the job and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let (command, job) = match cli.command {
        Sub::Generate(a) => (Command::Generate, a),
        Sub::Certify(a) => (Command::Certify, a),
        Sub::HopfProject(a) => (Command::HopfProject, a),
    };
    let (cfg, dump) = match job.into_config(command) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    if dump {
        println!("{}", cfg.to_json());
        return EXIT_OK;
    }
    match run_job(&cfg) {
        Ok(outcome) => {
            if let Outcome::Certified { report, path: None } = &outcome {
                println!("{}", report.to_json());
            }
            eprint!("{}", summary(&outcome));
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
