//! Command-line front end: job configuration, commands and report output.
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration error,
//! 3 truncation bound not converged.

use std::collections::HashMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::density::{self, DensityEngine};
use crate::error::Error;
use crate::laguerre;
use crate::partitions::{self, Partition};
use crate::petrov::{self, PDParams};
use crate::scalar::{fmt_q, parse_q, q_to_f64, Scalar, Q};
use crate::spectral;
use crate::symalg::Basis;
use crate::verify;
use crate::zmeasure::{validate_params, ParamTriple, ThomaPoint};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_TAIL: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Complex number as exact rational strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexSpec {
    pub re: String,
    #[serde(default = "zero")]
    pub im: String,
}

fn zero() -> String {
    "0".into()
}

impl ComplexSpec {
    fn parse(&self) -> Result<Scalar, Error> {
        Ok(Scalar::new(parse_q(&self.re)?, parse_q(&self.im)?))
    }

    fn from_flag(s: &str) -> Result<Self, Error> {
        let v: Scalar = s.parse()?;
        Ok(ComplexSpec {
            re: fmt_q(&v.re),
            im: fmt_q(&v.im),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSpec {
    pub id: String,
    #[serde(default)]
    pub alpha: Vec<String>,
    #[serde(default)]
    pub beta: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PdSpec {
    pub a: String,
    pub tau: String,
}

/// Job description as read from TOML or JSON; every rational is a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    pub z: ComplexSpec,
    pub zp: ComplexSpec,
    pub theta: String,
    #[serde(default)]
    pub points: Vec<PointSpec>,
    /// `(σ id, ω id)` pairs; all ordered pairs of `points` when empty.
    #[serde(default)]
    pub pairs: Vec<(String, String)>,
    #[serde(default)]
    pub t: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
    /// Partitions for `laguerre` and `petrov-compare`, as part lists.
    #[serde(default)]
    pub lambdas: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pd: Option<PdSpec>,
    #[serde(default)]
    pub thetas: Vec<String>,
}

impl Default for JobConfig {
    fn default() -> Self {
        JobConfig {
            command: None,
            z: ComplexSpec {
                re: "1".into(),
                im: "2".into(),
            },
            zp: ComplexSpec {
                re: "1".into(),
                im: "-2".into(),
            },
            theta: "1".into(),
            points: Vec::new(),
            pairs: Vec::new(),
            t: Vec::new(),
            max_degree: None,
            out: None,
            format: None,
            suite: None,
            lambdas: Vec::new(),
            pd: None,
            thetas: Vec::new(),
        }
    }
}

impl JobConfig {
    pub fn from_toml(s: &str) -> Result<Self, Error> {
        toml::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self, Error> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Reads a `.json` file as JSON and anything else as TOML.
    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let is_json = path.extension().is_some_and(|x| x == "json");
        let parsed = if is_json { Self::from_json(&text) } else { Self::from_toml(&text) };
        parsed.map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    pub fn params(&self) -> Result<ParamTriple, Error> {
        let field = |name: &str, e: Error| Error::Parse(format!("field `{name}`: {e}"));
        let z = self.z.parse().map_err(|e| field("z", e))?;
        let zp = self.zp.parse().map_err(|e| field("zp", e))?;
        let theta = parse_q(&self.theta).map_err(|e| field("theta", e))?;
        validate_params(&z, &zp, &theta)
    }

    pub fn parsed_points(&self) -> Result<Vec<(String, ThomaPoint)>, Error> {
        let mut seen = std::collections::HashSet::new();
        self.points
            .iter()
            .enumerate()
            .map(|(k, ps)| {
                if !seen.insert(ps.id.clone()) {
                    return Err(Error::Parse(format!("points[{k}]: duplicate id {:?}", ps.id)));
                }
                let parse_all = |v: &[String]| v.iter().map(|s| parse_q(s)).collect::<Result<Vec<Q>, Error>>();
                let wrap = |e: Error| Error::Parse(format!("points[{k}] ({}): {e}", ps.id));
                let pt = ThomaPoint::new(parse_all(&ps.alpha).map_err(wrap)?, parse_all(&ps.beta).map_err(wrap)?).map_err(wrap)?;
                Ok((ps.id.clone(), pt))
            })
            .collect()
    }

    pub fn parsed_pairs(&self) -> Result<Vec<(usize, usize)>, Error> {
        let ids: HashMap<&str, usize> = self.points.iter().enumerate().map(|(i, p)| (p.id.as_str(), i)).collect();
        if self.pairs.is_empty() {
            let n = self.points.len();
            return Ok((0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect());
        }
        self.pairs
            .iter()
            .map(|(a, b)| {
                let look = |s: &str| {
                    ids.get(s)
                        .copied()
                        .ok_or_else(|| Error::Parse(format!("pairs: unknown point id {s:?}")))
                };
                Ok((look(a)?, look(b)?))
            })
            .collect()
    }

    pub fn parsed_lambdas(&self) -> Result<Vec<Partition>, Error> {
        self.lambdas.iter().map(|l| Partition::new(l.clone())).collect()
    }

    pub fn pd_params(&self) -> Result<PDParams, Error> {
        let spec = self.pd.clone().unwrap_or(PdSpec {
            a: "1/3".into(),
            tau: "3/2".into(),
        });
        PDParams::new(parse_q(&spec.a)?, parse_q(&spec.tau)?)
    }

    pub fn parsed_thetas(&self) -> Result<Vec<Q>, Error> {
        if self.thetas.is_empty() {
            return Ok(["1/100", "1/10000", "1/1000000"].iter().map(|s| parse_q(s).unwrap()).collect());
        }
        self.thetas.iter().map(|s| parse_q(s)).collect()
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "thoma",
    version,
    about = "Exact spectral computations for z-measure diffusions on the Thoma simplex"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run invariant suites and report PASS/FAIL per check.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        suite: Option<String>,
    },
    /// Truncated transition density over a (t, σ, ω) grid.
    Density(Common),
    /// Eigenvalues α_m, multiplicities and an exact eigenbasis.
    Eigen(Common),
    /// Laguerre function expansions.
    Laguerre {
        #[command(flatten)]
        common: Common,
        /// Partition as comma-separated parts, e.g. `2,1`; repeatable.
        #[arg(long = "lambda")]
        lambdas: Vec<String>,
    },
    /// Total-variation bounds.
    TvBound(Common),
    /// Normalized θ → 0 comparison with the Poisson–Dirichlet Laguerre functions.
    PetrovCompare {
        #[command(flatten)]
        common: Common,
        #[arg(long = "lambda")]
        lambdas: Vec<String>,
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        tau: Option<String>,
    },
    /// Human-readable summary: eigenvalue table, TV bounds, degeneration check.
    Report(Common),
}

#[derive(Args, Debug, Default, Clone)]
pub struct Common {
    /// TOML or JSON job file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// `p/q` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub zp: Option<String>,
    #[arg(long)]
    pub theta: Option<String>,
    /// Comma-separated times.
    #[arg(long, value_delimiter = ',')]
    pub t: Vec<f64>,
    #[arg(long)]
    pub max_degree: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::TailNotConverged(_) => EXIT_TAIL,
            _ => EXIT_CONFIG,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<(String, i32), Failure>;

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Verify { .. } => "verify",
        Command::Density(_) => "density",
        Command::Eigen(_) => "eigen",
        Command::Laguerre { .. } => "laguerre",
        Command::TvBound(_) => "tv-bound",
        Command::PetrovCompare { .. } => "petrov-compare",
        Command::Report(_) => "report",
    }
}

fn common(c: &Command) -> &Common {
    match c {
        Command::Verify { common, .. } | Command::Laguerre { common, .. } | Command::PetrovCompare { common, .. } => common,
        Command::Density(c) | Command::Eigen(c) | Command::TvBound(c) | Command::Report(c) => c,
    }
}

fn parse_partition_flag(s: &str) -> Result<Vec<usize>, Error> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad partition {s:?}"))))
        .collect()
}

/// Config file contents with command-line overrides applied.
pub fn effective_config(cmd: &Command) -> Result<JobConfig, Error> {
    let c = common(cmd);
    let mut cfg = match &c.config {
        Some(path) => JobConfig::load(path)?,
        None => JobConfig::default(),
    };
    let name = command_name(cmd);
    if let Some(declared) = &cfg.command {
        if declared != name {
            return Err(Error::Parse(format!("config declares command {declared:?} but {name:?} was run")));
        }
    }
    cfg.command = Some(name.to_string());
    if let Some(z) = &c.z {
        cfg.z = ComplexSpec::from_flag(z)?;
        if c.zp.is_none() && c.config.is_none() {
            let v: Scalar = z.parse()?;
            cfg.zp = ComplexSpec {
                re: fmt_q(&v.re),
                im: fmt_q(&-v.im),
            };
        }
    }
    if let Some(zp) = &c.zp {
        cfg.zp = ComplexSpec::from_flag(zp)?;
    }
    if let Some(th) = &c.theta {
        cfg.theta = th.clone();
    }
    if !c.t.is_empty() {
        cfg.t = c.t.clone();
    }
    if c.max_degree.is_some() {
        cfg.max_degree = c.max_degree;
    }
    if let Some(o) = &c.out {
        cfg.out = Some(o.display().to_string());
    }
    if c.format.is_some() {
        cfg.format = c.format;
    }
    match cmd {
        Command::Verify { suite: Some(s), .. } => cfg.suite = Some(s.clone()),
        Command::Laguerre { lambdas, .. } | Command::PetrovCompare { lambdas, .. } if !lambdas.is_empty() => {
            cfg.lambdas = lambdas.iter().map(|s| parse_partition_flag(s)).collect::<Result<_, _>>()?;
        }
        _ => {}
    }
    if let Command::PetrovCompare { a, tau, .. } = cmd {
        if a.is_some() || tau.is_some() {
            let base = cfg.pd.clone().unwrap_or(PdSpec {
                a: "1/3".into(),
                tau: "3/2".into(),
            });
            cfg.pd = Some(PdSpec {
                a: a.clone().unwrap_or(base.a),
                tau: tau.clone().unwrap_or(base.tau),
            });
        }
    }
    for t in &cfg.t {
        if !(*t > 0.0) || !t.is_finite() {
            return Err(Error::Parse(format!("field `t`: {t} must be positive and finite")));
        }
    }
    Ok(cfg)
}

/// Float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".into()
    }
}

/// JSON number emitted with [`fmt_f64`].
#[derive(Clone, Copy, Debug)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawValue::from_string(fmt_f64(self.0))
            .map_err(serde::ser::Error::custom)?
            .serialize(s)
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct VerifyReport {
    params: ParamsOut,
    max_degree: usize,
    all_passed: bool,
    checks: Vec<verify::Check>,
}

#[derive(Serialize)]
struct ParamsOut {
    z: Scalar,
    zp: Scalar,
    theta: String,
    c: String,
    series: String,
}

impl ParamsOut {
    fn of(p: &ParamTriple) -> Self {
        ParamsOut {
            z: p.z.clone(),
            zp: p.zp.clone(),
            theta: fmt_q(&p.theta),
            c: fmt_q(&p.c),
            series: p.series.to_string(),
        }
    }
}

fn run_verify(cfg: &JobConfig) -> CmdResult {
    let p = cfg.params()?;
    let d = cfg.max_degree.unwrap_or(5);
    let suite = cfg.suite.clone().unwrap_or_else(|| "all".into());
    let checks = verify::run_suite(&suite, d, &p)?;
    let all_passed = checks.iter().all(|c| c.passed);
    let rep = VerifyReport {
        params: ParamsOut::of(&p),
        max_degree: d,
        all_passed,
        checks,
    };
    Ok((to_json(&rep), if all_passed { EXIT_OK } else { EXIT_VERIFY_FAILED }))
}

#[derive(Serialize)]
struct DensityRow {
    t: Num,
    sigma_id: String,
    omega_id: String,
    value: Option<Num>,
    tail: Option<Num>,
    #[serde(rename = "M")]
    max_degree: usize,
    alpha2: Num,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn run_density(cfg: &JobConfig) -> CmdResult {
    let p = cfg.params()?;
    let pts = cfg.parsed_points()?;
    if pts.is_empty() {
        return Err(Error::Parse("density needs at least one entry in `points`".into()).into());
    }
    let pairs = cfg.parsed_pairs()?;
    let ts = if cfg.t.is_empty() { vec![1.0] } else { cfg.t.clone() };
    let m = cfg.max_degree.unwrap_or(12);
    let eng = DensityEngine::new(&p, m)?;
    let alpha2 = q_to_f64(&p.alpha(2));
    let jobs: Vec<(f64, usize, usize)> = ts.iter().flat_map(|&t| pairs.iter().map(move |&(i, j)| (t, i, j))).collect();
    let rows: Vec<DensityRow> = jobs
        .par_iter()
        .map(|&(t, i, j)| {
            let r = eng.density(t, &pts[i].1, &pts[j].1);
            let (value, tail, error) = match r {
                Ok(r) => (Some(Num(r.value)), Some(Num(r.rigorous_tail)), None),
                Err(e) => (None, None, Some(e.to_string())),
            };
            DensityRow {
                t: Num(t),
                sigma_id: pts[i].0.clone(),
                omega_id: pts[j].0.clone(),
                value,
                tail,
                max_degree: m,
                alpha2: Num(alpha2),
                error,
            }
        })
        .collect();
    let code = if rows.iter().any(|r| r.error.is_some()) {
        EXIT_TAIL
    } else {
        EXIT_OK
    };
    let text = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["t", "sigma_id", "omega_id", "value", "tail", "M", "alpha2"])
                .map_err(csv_err)?;
            let opt = |x: &Option<Num>| x.map_or_else(|| "NA".to_string(), |n| fmt_f64(n.0));
            for r in &rows {
                w.write_record([
                    fmt_f64(r.t.0),
                    r.sigma_id.clone(),
                    r.omega_id.clone(),
                    opt(&r.value),
                    opt(&r.tail),
                    r.max_degree.to_string(),
                    fmt_f64(r.alpha2.0),
                ])
                .map_err(csv_err)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| csv_err(e.into_error()))?).expect("utf-8")
        }
    };
    Ok((text, code))
}

fn csv_err(e: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_CONFIG,
        message: format!("csv: {e}"),
    }
}

#[derive(Serialize)]
struct EigenRow {
    m: usize,
    alpha: String,
    multiplicity: u128,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    basis: Vec<String>,
}

fn eigen_rows(p: &ParamTriple, m_max: usize, with_basis: bool) -> Result<Vec<EigenRow>, Error> {
    let sys = if with_basis {
        Some(spectral::eigen_decompose(m_max, p)?)
    } else {
        None
    };
    Ok((2..=m_max)
        .map(|m| EigenRow {
            m,
            alpha: fmt_q(&p.alpha(m)),
            multiplicity: partitions::count_no_ones(m),
            basis: sys
                .as_ref()
                .and_then(|s| s.block(m))
                .map(|b| b.basis.iter().map(|g| g.to_string()).collect())
                .unwrap_or_default(),
        })
        .collect())
}

fn run_eigen(cfg: &JobConfig) -> CmdResult {
    let p = cfg.params()?;
    let m = cfg.max_degree.unwrap_or(6);
    let rows = eigen_rows(&p, m, p.is_diffusion_series() && m <= 8)?;
    Ok((
        to_json(&serde_json::json!({ "params": ParamsOut::of(&p), "blocks": rows })),
        EXIT_OK,
    ))
}

#[derive(Serialize)]
struct LaguerreOut {
    lambda: String,
    norm: Scalar,
    jack_q: Vec<(String, Scalar)>,
    monomial: Vec<(String, Scalar)>,
}

fn run_laguerre(cfg: &JobConfig) -> CmdResult {
    let p = cfg.params()?;
    let ctx = p.context();
    let lams = if cfg.lambdas.is_empty() {
        partitions::enumerate_up_to(cfg.max_degree.unwrap_or(2))
    } else {
        cfg.parsed_lambdas()?
    };
    let mut out = Vec::new();
    for lam in lams {
        let f = laguerre::laguerre_fn(&lam, &ctx)?;
        let fm = f.convert(&Basis::Monomial)?;
        let list = |g: &crate::symalg::SymFunc| g.terms().iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        out.push(LaguerreOut {
            lambda: lam.to_string(),
            norm: laguerre::laguerre_norm(&lam, &ctx),
            jack_q: list(&f),
            monomial: list(&fm),
        });
    }
    Ok((
        to_json(&serde_json::json!({ "params": ParamsOut::of(&p), "functions": out })),
        EXIT_OK,
    ))
}

#[derive(Serialize)]
struct TvRow {
    t: Num,
    crude: Num,
    refined: Num,
    leading_constant: String,
    k_constant: Num,
}

fn tv_rows(p: &ParamTriple, ts: &[f64], m: usize) -> Result<Vec<TvRow>, Error> {
    ts.iter()
        .map(|&t| {
            let b = density::tv_bound(t, p, m)?;
            Ok(TvRow {
                t: Num(t),
                crude: Num(b.crude),
                refined: Num(b.refined),
                leading_constant: b.leading_constant,
                k_constant: Num(b.k_constant),
            })
        })
        .collect()
}

fn run_tv(cfg: &JobConfig) -> CmdResult {
    let p = cfg.params()?;
    let ts = if cfg.t.is_empty() { vec![1.0, 2.0, 4.0] } else { cfg.t.clone() };
    let rows = tv_rows(&p, &ts, cfg.max_degree.unwrap_or(12))?;
    Ok((
        to_json(&serde_json::json!({ "params": ParamsOut::of(&p), "bounds": rows })),
        EXIT_OK,
    ))
}

fn petrov_reports(cfg: &JobConfig) -> Result<Vec<petrov::LimitReport>, Error> {
    let pd = cfg.pd_params()?;
    let thetas = cfg.parsed_thetas()?;
    let lams = if cfg.lambdas.is_empty() {
        vec![Partition::new(vec![1])?, Partition::new(vec![2])?, Partition::new(vec![1, 1])?]
    } else {
        cfg.parsed_lambdas()?
    };
    lams.iter().map(|l| petrov::limit_compare(l, &pd, &thetas)).collect()
}

fn run_petrov(cfg: &JobConfig) -> CmdResult {
    let reps = petrov_reports(cfg)?;
    let ok = reps.iter().all(|r| r.strictly_decreasing);
    Ok((to_json(&reps), if ok { EXIT_OK } else { EXIT_VERIFY_FAILED }))
}

fn run_report(cfg: &JobConfig) -> CmdResult {
    let p = cfg.params()?;
    let m = cfg.max_degree.unwrap_or(6);
    let ts = if cfg.t.is_empty() { vec![1.0, 2.0, 4.0] } else { cfg.t.clone() };
    let eig = eigen_rows(&p, m, false)?;
    let tv = tv_rows(&p, &ts, m.max(12))?;
    let pet = petrov_reports(cfg)?;
    if cfg.format == Some(Format::Json) {
        let v = serde_json::json!({ "params": ParamsOut::of(&p), "eigen": eig, "tv": tv, "petrov": pet });
        return Ok((to_json(&v), EXIT_OK));
    }
    let mut s = String::new();
    let _ = writeln!(
        s,
        "parameters: z = {}, z' = {}, θ = {}, c = {} ({})",
        p.z,
        p.zp,
        fmt_q(&p.theta),
        fmt_q(&p.c),
        p.series
    );
    let _ = writeln!(s, "\neigenvalues of -A on Λ°");
    let _ = writeln!(s, "{:>4} {:>14} {:>12}", "m", "α_m", "multiplicity");
    for r in &eig {
        let _ = writeln!(s, "{:>4} {:>14} {:>12}", r.m, r.alpha, r.multiplicity);
    }
    let _ = writeln!(
        s,
        "\ntotal variation bounds (refined leading constant {})",
        tv.first().map_or("-", |r| r.leading_constant.as_str())
    );
    let _ = writeln!(s, "{:>8} {:>25} {:>25}", "t", "crude", "refined");
    for r in &tv {
        let _ = writeln!(s, "{:>8} {:>25} {:>25}", r.t.0, fmt_f64(r.crude.0), fmt_f64(r.refined.0));
    }
    let _ = writeln!(s, "\nθ → 0 comparison (normalized max coefficient deviation)");
    for r in &pet {
        let devs: Vec<String> = r
            .rows
            .iter()
            .map(|row| format!("θ={}: {}", row.theta, row.deviation_f64.map_or("n/a".into(), fmt_f64)))
            .collect();
        let _ = writeln!(
            s,
            "  λ = {}: {} [{}]",
            r.lambda,
            devs.join(", "),
            if r.strictly_decreasing { "decreasing" } else { "NOT decreasing" }
        );
    }
    Ok((s, EXIT_OK))
}

/// Runs a parsed command; returns the output text and exit code.
pub fn execute(cmd: &Command) -> CmdResult {
    let cfg = effective_config(cmd)?;
    let (text, code) = match cmd {
        Command::Verify { .. } => run_verify(&cfg)?,
        Command::Density(_) => run_density(&cfg)?,
        Command::Eigen(_) => run_eigen(&cfg)?,
        Command::Laguerre { .. } => run_laguerre(&cfg)?,
        Command::TvBound(_) => run_tv(&cfg)?,
        Command::PetrovCompare { .. } => run_petrov(&cfg)?,
        Command::Report(_) => run_report(&cfg)?,
    };
    if let Some(path) = &cfg.out {
        std::fs::write(path, &text).map_err(|e| Failure {
            code: EXIT_CONFIG,
            message: format!("{path}: {e}"),
        })?;
        return Ok((String::new(), code));
    }
    Ok((text, code))
}

/// Entry point for the binary: parse, run, print, return the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok((text, code)) => {
            print!("{text}");
            code
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
