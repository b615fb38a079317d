//! Command-line front end: argument parsing, the TOML run configuration and
//! report rendering. `main.rs` only wires [`execute`] to the process.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::kernel::{build_joint, compose, image, parse_kernel_file, posterior_kernel, predictive_kernel, KernelFile};
use crate::measure::SampleVec;
use crate::models::{DominatedModel, Family};
use crate::oracle::{reconcile_with_grid, DEFAULT_GRID};
use crate::risk::{consistency_curve, dominance_report, EstimatorKind, EstimatorSpec, LossKind, RiskEstimate};
use crate::VERSION;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_DOMINANCE: i32 = 3;

/// Oracle tolerance used by `reconcile` when none is given.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Points in the `predict` density and CDF tables of continuous laws.
pub const TABLE_POINTS: usize = 101;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Predict,
    Kernel,
    Reconcile,
    Risk,
    Consistency,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "bayespred",
    version,
    about = "Posterior predictive estimators, oracles and Bayes-risk experiments"
)]
pub struct Args {
    /// What to run. May also come from the config file.
    #[arg(value_enum)]
    pub command: Option<Command>,

    /// TOML run configuration; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Model family: ExpGamma, NormalNormal, PoissonGamma, BernoulliUniform or Finite.
    #[arg(long)]
    pub model: Option<String>,

    /// Hyperparameters, e.g. `mu=0,tau2=1,sigma0_sq=1`.
    #[arg(long, allow_hyphen_values = true)]
    pub hyper: Option<String>,

    /// Observed sample, e.g. `1,0,1`.
    #[arg(long, allow_hyphen_values = true)]
    pub data: Option<String>,

    /// Matrix file with a prior row followed by likelihood rows.
    #[arg(long)]
    pub matrix: Option<PathBuf>,

    /// Comma-separated losses: SquaredTV, L1, L1Squared, SupCDFSquared, SquaredError{1;2}, SquaredError[0:1].
    #[arg(long)]
    pub loss: Option<String>,

    /// Comma-separated estimators; defaults to every one applicable to the loss.
    #[arg(long)]
    pub estimators: Option<String>,

    #[arg(long)]
    pub n: Option<usize>,

    /// Strictly increasing sample sizes, e.g. `1,2,5,10`.
    #[arg(long)]
    pub n_grid: Option<String>,

    #[arg(long)]
    pub reps: Option<usize>,

    #[arg(long)]
    pub seed: Option<u64>,

    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Exit with status 3 when the posterior predictive is not dominant.
    #[arg(long)]
    pub assert_dominance: bool,

    /// Quadrature nodes of the reconcile oracle.
    #[arg(long)]
    pub grid_size: Option<usize>,

    /// Reconcile tolerance.
    #[arg(long)]
    pub tol: Option<f64>,

    /// Print the merged configuration as TOML and exit.
    #[arg(long)]
    pub print_config: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default)]
    pub hyper: BTreeMap<String, f64>,
    #[serde(default)]
    pub data: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RiskConfig {
    #[serde(default)]
    pub losses: Vec<String>,
    #[serde(default)]
    pub estimators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default)]
    pub n_grid: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub assert_dominance: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

/// Everything a run needs. Serialized as TOML by `--print-config`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub model: ModelConfig,
    #[serde(default)]
    pub risk: RiskConfig,
    #[serde(default)]
    pub oracle: OracleConfig,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::config("config", e.to_string().trim_end().to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::config("config", e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config("config", format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Applies command-line overrides.
    pub fn merge_args(&mut self, args: &Args) -> Result<()> {
        if args.command.is_some() {
            self.command = args.command;
        }
        if args.format.is_some() {
            self.format = args.format;
        }
        if args.out.is_some() {
            self.out.clone_from(&args.out);
        }
        if let Some(m) = &args.model {
            self.model.family = Some(m.clone());
        }
        if let Some(h) = &args.hyper {
            self.model.hyper = parse_hyper(h)?;
        }
        if let Some(d) = &args.data {
            self.model.data = parse_list(d, "data")?;
        }
        if args.matrix.is_some() {
            self.model.matrix.clone_from(&args.matrix);
        }
        if let Some(l) = &args.loss {
            self.risk.losses = split_list(l);
        }
        if let Some(e) = &args.estimators {
            self.risk.estimators = split_list(e);
        }
        if args.n.is_some() {
            self.risk.n = args.n;
        }
        if let Some(g) = &args.n_grid {
            self.risk.n_grid = parse_list(g, "n_grid")?;
        }
        if args.reps.is_some() {
            self.risk.reps = args.reps;
        }
        if args.seed.is_some() {
            self.risk.seed = args.seed;
        }
        if args.assert_dominance {
            self.risk.assert_dominance = true;
        }
        if args.grid_size.is_some() {
            self.oracle.grid_size = args.grid_size;
        }
        if args.tol.is_some() {
            self.oracle.tol = args.tol;
        }
        Ok(())
    }
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(|t| t.trim().to_string())
        .filter(|t| !t.is_empty())
        .collect()
}

fn parse_list<T: std::str::FromStr>(s: &str, field: &str) -> Result<Vec<T>> {
    split_list(s)
        .iter()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::config(field, format!("cannot parse {t:?}")))
        })
        .collect()
}

/// Parses `k=v,k=v`.
pub fn parse_hyper(s: &str) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for item in split_list(s) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Error::config("hyper", format!("expected key=value, got {item:?}")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::config("hyper", format!("{} is not a number", v.trim())))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

/// Outcome of a run: the report text and whether a requested dominance
/// assertion failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub body: String,
    pub dominance_failed: bool,
}

fn require<T: Clone>(v: &Option<T>, field: &str) -> Result<T> {
    v.clone().ok_or_else(|| Error::config(field, "missing"))
}

fn load_matrix(cfg: &RunConfig) -> Result<KernelFile> {
    let path = cfg
        .model
        .matrix
        .as_ref()
        .ok_or_else(|| Error::config("matrix", "missing"))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::config("matrix", format!("cannot read {}: {e}", path.display())))?;
    parse_kernel_file(&text).map_err(|e| Error::config("matrix", e.to_string()))
}

fn build_model(cfg: &RunConfig) -> Result<DominatedModel> {
    let name = require(&cfg.model.family, "model")?;
    let family: Family = name.parse()?;
    if family == Family::Finite {
        let kf = load_matrix(cfg)?;
        return DominatedModel::finite(kf.prior, kf.likelihood).map_err(|e| Error::config("matrix", e.to_string()));
    }
    DominatedModel::from_hyper(family, cfg.model.hyper.iter().map(|(k, v)| (k.as_str(), *v)))
}

fn build_data(cfg: &RunConfig, model: &DominatedModel) -> Result<SampleVec> {
    SampleVec::new(cfg.model.data.clone(), &model.support()).map_err(|e| Error::config("data", e.to_string()))
}

fn build_losses(cfg: &RunConfig) -> Result<Vec<LossKind>> {
    if cfg.risk.losses.is_empty() {
        return Err(Error::config("loss", "missing"));
    }
    cfg.risk.losses.iter().map(|l| l.parse()).collect()
}

fn build_estimators(cfg: &RunConfig, loss: &LossKind, default: &[EstimatorKind]) -> Result<Vec<EstimatorKind>> {
    let kinds: Vec<EstimatorKind> = if cfg.risk.estimators.is_empty() {
        default.to_vec()
    } else {
        cfg.risk.estimators.iter().map(|e| e.parse()).collect::<Result<_>>()?
    };
    for k in &kinds {
        EstimatorSpec::for_loss(*k, loss).map_err(|e| Error::config("estimators", e.to_string()))?;
    }
    Ok(kinds)
}

fn build_reps_seed(cfg: &RunConfig) -> Result<(usize, u64)> {
    let reps = require(&cfg.risk.reps, "reps")?;
    if reps < 2 {
        return Err(Error::config("reps", format!("must be at least 2, got {reps}")));
    }
    let seed = require(&cfg.risk.seed, "seed")?;
    Ok((reps, seed))
}

/// Runs a merged configuration.
pub fn run(cfg: &RunConfig) -> Result<Report> {
    let command = require(&cfg.command, "command")?;
    let body = match command {
        Command::Predict => predict(cfg)?,
        Command::Kernel => kernel(cfg)?,
        Command::Reconcile => reconcile(cfg)?,
        Command::Risk => return risk(cfg),
        Command::Consistency => consistency(cfg)?,
    };
    Ok(Report {
        body,
        dominance_failed: false,
    })
}

fn to_json(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn predict(cfg: &RunConfig) -> Result<String> {
    let model = build_model(cfg)?;
    let data = build_data(cfg, &model)?;
    let pred = model.predictive(&data)?;
    let dens = pred.marginal_density();
    let points: Vec<f64> = if model.support().is_counting() {
        let len = dens.counting_len(1e-10)?.min(1000);
        (0..len).map(|k| k as f64).collect()
    } else {
        let (lo, hi) = dens.effective_range(1e-6)?;
        let step = (hi - lo) / (TABLE_POINTS - 1) as f64;
        (0..TABLE_POINTS).map(|i| lo + step * i as f64).collect()
    };
    let mut density = Vec::with_capacity(points.len());
    let mut cdf = Vec::with_capacity(points.len());
    for &x in &points {
        density.push(json!({ "x": x, "density": dens.pdf(x) }));
        cdf.push(json!({ "t": x, "cdf": dens.cdf(x)? }));
    }
    Ok(to_json(&json!({
        "version": VERSION,
        "command": "predict",
        "family": model.family(),
        "hyper": model.hyper_json(),
        "data": data.points(),
        "n": data.n(),
        "posterior": pred.posterior().describe(),
        "predictive": dens.describe(),
        "density_table": density,
        "cdf_table": cdf,
    })))
}

fn fmt_row(labels: &[String], w: &[f64]) -> String {
    let body: Vec<String> = w.iter().map(|v| format!("{v:.6}")).collect();
    format!("({}) over [{}]", body.join(", "), labels.join(", "))
}

fn fmt_kernel(out: &mut String, k: &crate::kernel::FiniteKernel) {
    for i in 0..k.n_sources() {
        let label = &k.source_labels()[i];
        match k.row(i) {
            Some(r) => {
                let body: Vec<String> = r.iter().map(|v| format!("{v:.6}")).collect();
                let _ = writeln!(out, "  {label}: ({})", body.join(", "));
            }
            None => {
                let _ = writeln!(out, "  {label}: undefined");
            }
        }
    }
}

fn kernel(cfg: &RunConfig) -> Result<String> {
    let kf = load_matrix(cfg)?;
    let (q, p) = (&kf.prior, &kf.likelihood);
    let beta = image(q, p)?;
    let joint = build_joint(p, q)?;
    let post = posterior_kernel(&joint)?;
    let pp = predictive_kernel(&post, p)?;
    let post_prior = image(&beta, &post)?;
    let round_trip = image(q, &compose(p, &post)?)?;
    let d1 = post_prior.max_abs_diff(q);
    let d2 = round_trip.max_abs_diff(q);
    let verdict = |d: f64| if d <= 1e-12 { "PASS" } else { "FAIL" };
    if cfg.format == Some(Format::Json) {
        let rows = |k: &crate::kernel::FiniteKernel| -> Vec<Option<Vec<f64>>> {
            (0..k.n_sources()).map(|i| k.row(i).map(<[f64]>::to_vec)).collect()
        };
        return Ok(to_json(&json!({
            "version": VERSION,
            "command": "kernel",
            "theta_labels": q.labels(),
            "omega_labels": p.target_labels(),
            "prior": q.weights(),
            "likelihood": rows(p),
            "prior_predictive": beta.weights(),
            "posterior": rows(&post),
            "predictive": rows(&pp),
            "posterior_image_dev": d1,
            "round_trip_dev": d2,
            "posterior_image_check": verdict(d1),
            "round_trip_check": verdict(d2),
        })));
    }
    let mut out = String::new();
    let _ = writeln!(out, "# bayespred {VERSION} kernel");
    let _ = writeln!(out, "prior Q: {}", fmt_row(q.labels(), q.weights()));
    let _ = writeln!(out, "likelihood P:");
    fmt_kernel(&mut out, p);
    let _ = writeln!(
        out,
        "prior predictive beta*_Q: {}",
        fmt_row(beta.labels(), beta.weights())
    );
    let _ = writeln!(out, "posterior P* (rows over {}):", q.labels().join(", "));
    fmt_kernel(&mut out, &post);
    let _ = writeln!(out, "predictive PP* (rows over {}):", p.target_labels().join(", "));
    fmt_kernel(&mut out, &pp);
    let _ = writeln!(out, "(beta*_Q)^{{P*}}=Q: {} (max deviation {d1:.3e})", verdict(d1));
    let _ = writeln!(out, "Q^{{P*P}}=Q: {} (max deviation {d2:.3e})", verdict(d2));
    Ok(out)
}

fn reconcile(cfg: &RunConfig) -> Result<String> {
    let model = build_model(cfg)?;
    let data = build_data(cfg, &model)?;
    let grid = cfg.oracle.grid_size.unwrap_or(DEFAULT_GRID);
    let tol = cfg.oracle.tol.unwrap_or(DEFAULT_TOL);
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::config("tol", "must be positive"));
    }
    let reports = reconcile_with_grid(&model, &data, tol, grid).map_err(|e| match e {
        Error::Domain(m) => Error::config("grid_size", m),
        other => other,
    })?;
    Ok(to_json(&json!({
        "version": VERSION,
        "command": "reconcile",
        "grid_size": grid,
        "reports": reports,
    })))
}

fn csv_rows(rows: &[RiskEstimate], header: &str) -> Result<String> {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record([
        "estimator",
        "loss",
        "n",
        "reps",
        "seed",
        "mean",
        "std_error",
        "failures",
    ])
    .map_err(|e| Error::config("out", e.to_string()))?;
    for r in rows {
        w.write_record([
            r.estimator.to_string(),
            r.loss.to_string(),
            r.n.to_string(),
            r.reps.to_string(),
            r.seed.to_string(),
            r.mean.to_string(),
            r.std_error.to_string(),
            r.failures.to_string(),
        ])
        .map_err(|e| Error::config("out", e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::config("out", e.to_string()))?;
    Ok(format!(
        "{header}{}",
        String::from_utf8(bytes).expect("csv output is utf-8")
    ))
}

fn risk(cfg: &RunConfig) -> Result<Report> {
    let model = build_model(cfg)?;
    let losses = build_losses(cfg)?;
    let n = require(&cfg.risk.n, "n")?;
    if n < 1 {
        return Err(Error::config("n", "must be at least 1"));
    }
    let (reps, seed) = build_reps_seed(cfg)?;
    let mut reports = Vec::with_capacity(losses.len());
    for loss in &losses {
        let kinds = build_estimators(cfg, loss, &EstimatorKind::applicable(loss))?;
        if !kinds.contains(&EstimatorKind::PosteriorPredictive) {
            return Err(Error::config("estimators", "must include PosteriorPredictive"));
        }
        reports.push((loss.clone(), dominance_report(&model, &kinds, loss, n, reps, seed)?));
    }
    let dominance_failed = cfg.risk.assert_dominance && reports.iter().any(|(_, r)| !r.dominant);
    let body = match cfg.format.unwrap_or(Format::Csv) {
        Format::Json => to_json(&json!({
            "version": VERSION,
            "command": "risk",
            "family": model.family(),
            "hyper": model.hyper_json(),
            "n": n,
            "reps": reps,
            "seed": seed,
            "reports": reports.iter().map(|(l, r)| json!({ "loss": l, "report": r })).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut header = format!(
                "# bayespred {VERSION} risk family={} n={n} reps={reps} seed={seed}\n",
                model.family()
            );
            for (l, r) in &reports {
                let _ = writeln!(header, "# dominance {l}: {}", if r.dominant { "PASS" } else { "FAIL" });
            }
            let rows: Vec<RiskEstimate> = reports.iter().flat_map(|(_, r)| r.rows.iter().cloned()).collect();
            csv_rows(&rows, &header)?
        }
    };
    Ok(Report { body, dominance_failed })
}

fn consistency(cfg: &RunConfig) -> Result<String> {
    let model = build_model(cfg)?;
    let losses = build_losses(cfg)?;
    let grid = cfg.risk.n_grid.clone();
    if grid.is_empty() {
        return Err(Error::config("n_grid", "missing"));
    }
    if grid[0] < 1 || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::config("n_grid", "must be positive and strictly increasing"));
    }
    let (reps, seed) = build_reps_seed(cfg)?;
    let mut rows = Vec::new();
    for loss in &losses {
        for kind in build_estimators(cfg, loss, &[EstimatorKind::PosteriorPredictive])? {
            let spec = EstimatorSpec::for_loss(kind, loss)?;
            rows.extend(
                consistency_curve(&model, &spec, loss, &grid, reps, seed)?
                    .into_iter()
                    .map(|(_, r)| r),
            );
        }
    }
    Ok(match cfg.format.unwrap_or(Format::Csv) {
        Format::Json => to_json(&json!({
            "version": VERSION,
            "command": "consistency",
            "family": model.family(),
            "hyper": model.hyper_json(),
            "n_grid": grid,
            "reps": reps,
            "seed": seed,
            "curves": rows,
        })),
        Format::Csv => csv_rows(
            &rows,
            &format!(
                "# bayespred {VERSION} consistency family={} reps={reps} seed={seed}\n",
                model.family()
            ),
        )?,
    })
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config { .. }
        | Error::Parse { .. }
        | Error::Domain(_)
        | Error::Dimension(_)
        | Error::InvalidDistribution(_)
        | Error::OutOfSupport(_)
        | Error::TargetMismatch(_)
        | Error::TooManyAtoms { .. } => EXIT_VALIDATION,
        _ => EXIT_FAILURE,
    }
}

/// Full pipeline behind the binary: load, merge, run, write. Returns the
/// process exit status.
pub fn execute(args: &Args, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = (|| -> Result<i32> {
        let mut cfg = match &args.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        cfg.merge_args(args)?;
        if args.print_config {
            stdout.write_all(cfg.to_toml()?.as_bytes())?;
            return Ok(EXIT_OK);
        }
        let report = run(&cfg)?;
        match &cfg.out {
            Some(path) => std::fs::write(path, &report.body)
                .map_err(|e| Error::config("out", format!("cannot write {}: {e}", path.display())))?,
            None => stdout.write_all(report.body.as_bytes())?,
        }
        if report.dominance_failed {
            let _ = writeln!(stderr, "dominance assertion failed");
            return Ok(EXIT_DOMINANCE);
        }
        Ok(EXIT_OK)
    })();
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(v: &[&str]) -> Args {
        Args::parse_from(std::iter::once("bayespred").chain(v.iter().copied()))
    }

    #[test]
    fn flags_override_config() {
        let mut cfg = RunConfig::from_toml("command = \"risk\"\n[risk]\nreps = 10\nseed = 1\n").unwrap();
        cfg.merge_args(&args(&["--reps", "20", "--hyper", "mu=0,tau2=1,sigma0_sq=2"]))
            .unwrap();
        assert_eq!(cfg.risk.reps, Some(20));
        assert_eq!(cfg.risk.seed, Some(1));
        assert_eq!(cfg.model.hyper["sigma0_sq"], 2.0);
    }

    #[test]
    fn unknown_field_is_rejected() {
        let e = RunConfig::from_toml("[risk]\nrepz = 3\n").unwrap_err();
        assert!(e.to_string().contains("repz"));
    }

    #[test]
    fn missing_seed_names_the_field() {
        let cfg = RunConfig::from_toml(
            "command = \"risk\"\n[model]\nfamily = \"BernoulliUniform\"\n[risk]\nlosses = [\"L1\"]\nn = 1\nreps = 5\n",
        )
        .unwrap();
        let e = run(&cfg).unwrap_err();
        assert_eq!(exit_code(&e), EXIT_VALIDATION);
        assert!(e.to_string().contains("`seed`"));
    }

    #[test]
    fn hyper_parsing() {
        assert!(parse_hyper("lambda").is_err());
        assert!(parse_hyper("lambda=x").is_err());
        assert_eq!(parse_hyper("lambda = 2").unwrap()["lambda"], 2.0);
    }
}
