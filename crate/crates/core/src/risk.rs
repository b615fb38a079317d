//! Loss functions, the seeded Monte Carlo Bayes-risk harness, dominance
//! tables and consistency curves.
//!
//! Replicate `i` of a run draws `θ ~ Q` and then `n` observations from
//! `P_θ`, all from the ChaCha stream `(seed, i)`. Estimators never touch the
//! generator, so every estimator in a comparison sees the same `(θ, data)`
//! pairs, and the n-sample of a consistency curve is a prefix of the
//! larger ones.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{draw_n, l1_distance, replicate_rng, Density, Event, SampleVec, COUNTING_TAIL};
use crate::models::{plugin_density, DominatedModel, PluginKind};
use crate::special::std_normal_quantile;

/// Points in the quantile grid of the sup-CDF loss.
pub const CDF_GRID: usize = 4096;
/// Largest tolerated share of failed replicates.
pub const MAX_FAILURE_RATE: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum LossKind {
    /// `(X − P_θ(A))²`.
    SquaredError(Event),
    /// `sup_A |P(A) − P_θ(A)|²`, computed as `(½·L¹)²`.
    SquaredTV,
    L1,
    L1Squared,
    /// `(sup_t |F(t) − F_θ(t)|)²`.
    SupCDFSquared,
}

impl LossKind {
    pub fn target(&self) -> Target {
        match self {
            LossKind::SquaredError(a) => Target::EventProbability(a.clone()),
            LossKind::SupCDFSquared => Target::Cdf,
            _ => Target::Density,
        }
    }
}

impl fmt::Display for LossKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LossKind::SquaredError(a) => write!(f, "SquaredError{a}"),
            LossKind::SquaredTV => f.write_str("SquaredTV"),
            LossKind::L1 => f.write_str("L1"),
            LossKind::L1Squared => f.write_str("L1Squared"),
            LossKind::SupCDFSquared => f.write_str("SupCDFSquared"),
        }
    }
}

impl FromStr for LossKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some(rest) = t.strip_prefix("SquaredError") {
            return Ok(LossKind::SquaredError(rest.parse()?));
        }
        match t.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "squaredtv" | "tv2" => Ok(LossKind::SquaredTV),
            "l1" => Ok(LossKind::L1),
            "l1squared" => Ok(LossKind::L1Squared),
            "supcdfsquared" | "kolmogorov2" => Ok(LossKind::SupCDFSquared),
            _ => Err(Error::config("loss", format!("unknown loss {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum EstimatorKind {
    PosteriorPredictive,
    PluginPosteriorMean,
    PluginMLE,
    PriorPredictive,
    EmpiricalCDF,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 5] = [
        EstimatorKind::PosteriorPredictive,
        EstimatorKind::PluginPosteriorMean,
        EstimatorKind::PluginMLE,
        EstimatorKind::PriorPredictive,
        EstimatorKind::EmpiricalCDF,
    ];

    /// The estimators that apply to `loss`.
    pub fn applicable(loss: &LossKind) -> Vec<EstimatorKind> {
        Self::ALL
            .into_iter()
            .filter(|k| EstimatorSpec::new(*k, loss.target()).is_ok())
            .collect()
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "posteriorpredictive" | "predictive" => Ok(EstimatorKind::PosteriorPredictive),
            "pluginposteriormean" | "posteriormean" => Ok(EstimatorKind::PluginPosteriorMean),
            "pluginmle" | "mle" => Ok(EstimatorKind::PluginMLE),
            "priorpredictive" | "prior" => Ok(EstimatorKind::PriorPredictive),
            "empiricalcdf" | "ecdf" => Ok(EstimatorKind::EmpiricalCDF),
            _ => Err(Error::config("estimators", format!("unknown estimator {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Target {
    Density,
    Cdf,
    EventProbability(Event),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimatorSpec {
    kind: EstimatorKind,
    target: Target,
}

impl EstimatorSpec {
    pub fn new(kind: EstimatorKind, target: Target) -> Result<Self> {
        if kind == EstimatorKind::EmpiricalCDF && target != Target::Cdf {
            return Err(Error::TargetMismatch(
                "the empirical CDF only estimates distribution functions".into(),
            ));
        }
        Ok(EstimatorSpec { kind, target })
    }

    pub fn for_loss(kind: EstimatorKind, loss: &LossKind) -> Result<Self> {
        Self::new(kind, loss.target())
    }

    pub fn kind(&self) -> EstimatorKind {
        self.kind
    }

    pub fn target(&self) -> &Target {
        &self.target
    }

    /// Forms the estimate from an observed sample.
    pub fn estimate(&self, model: &DominatedModel, data: &SampleVec) -> Result<Estimate> {
        if self.kind == EstimatorKind::EmpiricalCDF {
            if data.is_empty() {
                return Err(Error::UndefinedEstimator("empirical CDF of an empty sample".into()));
            }
            let mut pts = data.points().to_vec();
            pts.sort_by(f64::total_cmp);
            return Ok(Estimate::Cdf(CdfEstimate::Empirical(pts)));
        }
        let density = match self.kind {
            EstimatorKind::PosteriorPredictive => model.predictive(data)?.marginal_density(),
            EstimatorKind::PluginPosteriorMean => plugin_density(model, data, PluginKind::PosteriorMean)?,
            EstimatorKind::PluginMLE => plugin_density(model, data, PluginKind::Mle)?,
            EstimatorKind::PriorPredictive => plugin_density(model, data, PluginKind::PriorPredictive)?,
            EstimatorKind::EmpiricalCDF => unreachable!(),
        };
        Ok(match &self.target {
            Target::Density => Estimate::Density(density),
            Target::Cdf => Estimate::Cdf(CdfEstimate::Density(density)),
            Target::EventProbability(a) => Estimate::Probability(density.prob(a)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CdfEstimate {
    Density(Density),
    /// Sorted sample.
    Empirical(Vec<f64>),
}

impl CdfEstimate {
    pub fn cdf(&self, t: f64) -> Result<f64> {
        match self {
            CdfEstimate::Density(d) => d.cdf(t),
            CdfEstimate::Empirical(xs) => Ok(xs.partition_point(|&x| x <= t) as f64 / xs.len() as f64),
        }
    }

    pub fn cdf_left(&self, t: f64) -> Result<f64> {
        match self {
            CdfEstimate::Density(d) => d.cdf_left(t),
            CdfEstimate::Empirical(xs) => Ok(xs.partition_point(|&x| x < t) as f64 / xs.len() as f64),
        }
    }

    fn jumps(&self) -> &[f64] {
        match self {
            CdfEstimate::Empirical(xs) => xs,
            CdfEstimate::Density(_) => &[],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Estimate {
    Density(Density),
    Cdf(CdfEstimate),
    Probability(f64),
}

fn std_normal_quantiles() -> &'static [f64] {
    static Q: OnceLock<Vec<f64>> = OnceLock::new();
    Q.get_or_init(|| {
        (0..CDF_GRID)
            .map(|i| std_normal_quantile((i as f64 + 0.5) / CDF_GRID as f64))
            .collect()
    })
}

fn std_exp_quantiles() -> &'static [f64] {
    static Q: OnceLock<Vec<f64>> = OnceLock::new();
    Q.get_or_init(|| {
        (0..CDF_GRID)
            .map(|i| -(-(i as f64 + 0.5) / CDF_GRID as f64).ln_1p())
            .collect()
    })
}

fn quantile_grid(truth: &Density) -> Result<Vec<f64>> {
    Ok(match truth {
        Density::Normal { mean, var } => {
            let sd = var.sqrt();
            std_normal_quantiles().iter().map(|z| mean + sd * z).collect()
        }
        Density::Exponential { rate } => std_exp_quantiles().iter().map(|e| e / rate).collect(),
        Density::Lomax { shape, scale } => (0..CDF_GRID)
            .map(|i| {
                let u = (i as f64 + 0.5) / CDF_GRID as f64;
                scale * ((1.0 - u).powf(-1.0 / shape) - 1.0)
            })
            .collect(),
        other => {
            let (lo, hi) = other.effective_range(1e-12)?;
            let mut out = Vec::with_capacity(CDF_GRID);
            for i in 0..CDF_GRID {
                let u = (i as f64 + 0.5) / CDF_GRID as f64;
                let (mut a, mut b) = (lo, hi);
                for _ in 0..60 {
                    let m = 0.5 * (a + b);
                    if other.cdf(m)? < u {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                out.push(0.5 * (a + b));
            }
            out
        }
    })
}

/// Kolmogorov distance `sup_t |F(t) − F_θ(t)|`. For counting laws the sup
/// runs over the atoms; otherwise over a quantile grid of the true law plus
/// both sides of every jump of the estimate.
pub fn sup_cdf_distance(est: &CdfEstimate, truth: &Density) -> Result<f64> {
    if let CdfEstimate::Density(d) = est {
        if !d.support().same_measure(&truth.support()) {
            return Err(Error::SupportMismatch(
                d.support().to_string(),
                truth.support().to_string(),
            ));
        }
    }
    let mut worst: f64 = 0.0;
    if truth.support().is_counting() {
        let mut len = truth.counting_len(COUNTING_TAIL * 0.1)?;
        match est {
            CdfEstimate::Density(d) => len = len.max(d.counting_len(COUNTING_TAIL * 0.1)?),
            CdfEstimate::Empirical(xs) => {
                if let Some(&m) = xs.last() {
                    len = len.max(m as usize + 1);
                }
            }
        }
        let t_pmf = truth.pmf_table(len);
        let (mut ft, mut fe) = (0.0, 0.0);
        let e_pmf = match est {
            CdfEstimate::Density(d) => Some(d.pmf_table(len)),
            CdfEstimate::Empirical(_) => None,
        };
        for k in 0..len {
            ft += t_pmf[k];
            fe = match (&e_pmf, est) {
                (Some(p), _) => fe + p[k],
                (None, e) => e.cdf(k as f64)?,
            };
            worst = worst.max((ft - fe).abs());
        }
        return Ok(worst.min(1.0));
    }
    for t in quantile_grid(truth)? {
        worst = worst.max((est.cdf(t)? - truth.cdf(t)?).abs());
    }
    for &t in est.jumps() {
        let ft = truth.cdf(t)?;
        worst = worst.max((est.cdf(t)? - ft).abs());
        worst = worst.max((est.cdf_left(t)? - ft).abs());
    }
    Ok(worst.min(1.0))
}

/// Loss of an estimate when the true parameter is `theta`.
pub fn loss_eval(estimate: &Estimate, theta: f64, model: &DominatedModel, loss: &LossKind) -> Result<f64> {
    let truth = model.sampling_density(theta)?;
    match (loss, estimate) {
        (LossKind::SquaredError(a), Estimate::Probability(x)) => {
            let d = x - truth.prob(a)?;
            Ok(d * d)
        }
        (LossKind::SquaredTV, Estimate::Density(d)) => {
            let tv = 0.5 * l1_distance(d, &truth)?;
            Ok(tv * tv)
        }
        (LossKind::L1, Estimate::Density(d)) => l1_distance(d, &truth),
        (LossKind::L1Squared, Estimate::Density(d)) => {
            let l = l1_distance(d, &truth)?;
            Ok(l * l)
        }
        (LossKind::SupCDFSquared, Estimate::Cdf(c)) => {
            let k = sup_cdf_distance(c, &truth)?;
            Ok(k * k)
        }
        (loss, est) => Err(Error::TargetMismatch(format!(
            "{loss} cannot score a {} estimate",
            match est {
                Estimate::Density(_) => "density",
                Estimate::Cdf(_) => "distribution function",
                Estimate::Probability(_) => "probability",
            }
        ))),
    }
}

/// Monte Carlo estimate of a Bayes risk.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RiskEstimate {
    pub estimator: EstimatorKind,
    pub loss: LossKind,
    pub n: usize,
    /// Replicates requested, failed ones included.
    pub reps: usize,
    pub seed: u64,
    pub mean: f64,
    /// Sample standard deviation over `√(successful replicates)`.
    pub std_error: f64,
    pub failures: usize,
}

fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// One replicate: `θ ~ Q`, data `~ P_θⁿ`, estimate, loss.
fn replicate(
    model: &DominatedModel,
    spec: &EstimatorSpec,
    loss: &LossKind,
    n: usize,
    seed: u64,
    i: u64,
) -> Result<f64> {
    let mut rng = replicate_rng(seed, i);
    let theta = model.draw_theta(&mut rng)?;
    let data = draw_n(&model.sampling_density(theta)?, n, &mut rng)?;
    let est = spec.estimate(model, &data)?;
    loss_eval(&est, theta, model, loss)
}

/// Seeded Monte Carlo Bayes risk `∫ W dΠₙ` of an estimator.
pub fn bayes_risk_mc(
    model: &DominatedModel,
    est: &EstimatorSpec,
    loss: &LossKind,
    n: usize,
    reps: usize,
    seed: u64,
) -> Result<RiskEstimate> {
    if reps < 2 {
        return Err(Error::Domain(format!("need at least 2 replicates, got {reps}")));
    }
    if n < 1 {
        return Err(Error::Domain("sample size must be at least 1".into()));
    }
    if *est.target() != loss.target() {
        return Err(Error::TargetMismatch(format!(
            "{} estimator scored by {loss}",
            est.kind()
        )));
    }
    let outcomes: Vec<Result<f64>> = (0..reps as u64)
        .into_par_iter()
        .map(|i| replicate(model, est, loss, n, seed, i))
        .collect();
    let mut values = Vec::with_capacity(reps);
    let mut failures = 0;
    let mut first = None;
    for o in outcomes {
        match o {
            Ok(v) => values.push(v),
            Err(e) => {
                failures += 1;
                first.get_or_insert_with(|| e.to_string());
            }
        }
    }
    if failures as f64 > MAX_FAILURE_RATE * reps as f64 || values.len() < 2 {
        return Err(Error::TooManyFailures {
            failures,
            reps,
            first: first.unwrap_or_default(),
        });
    }
    let k = values.len() as f64;
    let mean = pairwise_sum(&values) / k;
    let dev: Vec<f64> = values.iter().map(|v| (v - mean).powi(2)).collect();
    let sd = (pairwise_sum(&dev) / (k - 1.0)).sqrt();
    Ok(RiskEstimate {
        estimator: est.kind(),
        loss: loss.clone(),
        n,
        reps,
        seed,
        mean: mean.max(0.0),
        std_error: sd / k.sqrt(),
        failures,
    })
}

/// The posterior predictive compared against one competitor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub competitor: EstimatorKind,
    /// `competitor mean − predictive mean`.
    pub gap: f64,
    /// `√(se₁² + se₂²)`.
    pub combined_se: f64,
    /// `predictive mean ≤ competitor mean + 2·combined_se`.
    pub dominated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominanceReport {
    /// Sorted by mean risk, lowest first.
    pub rows: Vec<RiskEstimate>,
    pub comparisons: Vec<Comparison>,
    /// Every comparison holds.
    pub dominant: bool,
}

pub fn dominance_report(
    model: &DominatedModel,
    estimators: &[EstimatorKind],
    loss: &LossKind,
    n: usize,
    reps: usize,
    seed: u64,
) -> Result<DominanceReport> {
    if !estimators.contains(&EstimatorKind::PosteriorPredictive) {
        return Err(Error::Domain("dominance report needs the posterior predictive".into()));
    }
    let mut rows = Vec::with_capacity(estimators.len());
    for &k in estimators {
        let spec = EstimatorSpec::for_loss(k, loss)?;
        rows.push(bayes_risk_mc(model, &spec, loss, n, reps, seed)?);
    }
    let pp = rows
        .iter()
        .find(|r| r.estimator == EstimatorKind::PosteriorPredictive)
        .cloned()
        .expect("checked above");
    let comparisons: Vec<Comparison> = rows
        .iter()
        .filter(|r| r.estimator != EstimatorKind::PosteriorPredictive)
        .map(|r| {
            let combined_se = (pp.std_error.powi(2) + r.std_error.powi(2)).sqrt();
            Comparison {
                competitor: r.estimator,
                gap: r.mean - pp.mean,
                combined_se,
                dominated: pp.mean <= r.mean + 2.0 * combined_se,
            }
        })
        .collect();
    rows.sort_by(|a, b| a.mean.total_cmp(&b.mean));
    Ok(DominanceReport {
        dominant: comparisons.iter().all(|c| c.dominated),
        rows,
        comparisons,
    })
}

/// Risk along an increasing grid of sample sizes, one seed for all sizes.
pub fn consistency_curve(
    model: &DominatedModel,
    est: &EstimatorSpec,
    loss: &LossKind,
    n_grid: &[usize],
    reps: usize,
    seed: u64,
) -> Result<Vec<(usize, RiskEstimate)>> {
    if n_grid.is_empty() || n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("n grid must be non-empty and strictly increasing".into()));
    }
    n_grid
        .iter()
        .map(|&n| Ok((n, bayes_risk_mc(model, est, loss, n, reps, seed)?)))
        .collect()
}

/// Pointwise error `|predictive density(x′) − p_θ(x′)|` along a single
/// simulated trajectory of length `max(n_grid)`. A finite-n diagnostic of
/// almost-everywhere consistency; no acceptance decision rests on it.
pub fn pointwise_trajectory(
    model: &DominatedModel,
    theta: f64,
    x: f64,
    n_grid: &[usize],
    seed: u64,
) -> Result<Vec<(usize, f64)>> {
    let truth = model.sampling_density(theta)?;
    let longest = n_grid.iter().copied().max().unwrap_or(0);
    let mut rng = replicate_rng(seed, 0);
    let all = draw_n(&truth, longest.max(1), &mut rng)?;
    n_grid
        .iter()
        .map(|&n| {
            let data = SampleVec::new(all.points()[..n].to_vec(), &model.support())?;
            let p = model.predictive(&data)?.marginal_density().pdf(x);
            Ok((n, (p - truth.pdf(x)).abs()))
        })
        .collect()
}
