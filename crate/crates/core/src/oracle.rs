//! Posterior predictive densities computed directly from their defining
//! integrals on a parameter grid, independent of the conjugate algebra in
//! [`crate::models`]. Used to validate every closed form and to adjudicate
//! the printed example formulas, which are kept in [`printed`] and never
//! feed an estimator.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::SampleVec;
use crate::models::{
    predictive_joint_density, predictive_marginal_density, Arity, DominatedModel, Family, PredictiveDistribution, Prior,
};
use crate::quadrature::GaussLegendre;

pub const MIN_GRID: usize = 64;
pub const DEFAULT_GRID: usize = 1024;

/// Discretised posterior: quadrature nodes on Θ with normalised weights.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaGrid {
    nodes: Vec<f64>,
    log_prior: Vec<f64>,
    weights: Vec<f64>,
    log_evidence: f64,
}

impl ThetaGrid {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn log_prior(&self) -> &[f64] {
        &self.log_prior
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `ln ∫ p_θ(ω) dQ(θ)`, i.e. `−ln C(ω)`.
    pub fn log_evidence(&self) -> f64 {
        self.log_evidence
    }

    pub fn mean(&self) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(t, w)| t * w).sum()
    }
}

fn rule(order: usize) -> Arc<GaussLegendre> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard
        .entry(order)
        .or_insert_with(|| Arc::new(GaussLegendre::new(order)))
        .clone()
}

/// Interval of Θ holding all but a negligible part of the posterior. The
/// conjugate posterior only positions the window; values come from the grid.
fn window(model: &DominatedModel, data: &SampleVec) -> Result<(f64, f64)> {
    let post = model.posterior_update(data)?;
    let (mean, sd) = (post.mean(), post.variance().sqrt());
    let (lo, hi) = model
        .parameter_range()
        .ok_or_else(|| Error::Domain("grid posterior needs a continuous parameter".into()))?;
    // Skewed posteriors need wider windows on the long side.
    let k = match model.prior() {
        Prior::ExpGamma { .. } | Prior::PoissonGamma { .. } => {
            let shape = (mean / sd).powi(2);
            12.0 + 40.0 / shape.sqrt()
        }
        Prior::BernoulliBeta { .. } => {
            let s = mean * (1.0 - mean) / (sd * sd) - 1.0;
            let short = (mean * s).min((1.0 - mean) * s);
            12.0 + 40.0 / short.sqrt()
        }
        _ => 12.0,
    };
    Ok(((mean - k * sd).max(lo), (mean + k * sd).min(hi)))
}

/// Posterior weights ∝ prior × likelihood on `grid_size` Gauss–Legendre
/// nodes, computed in log-space with max-subtraction.
pub fn grid_posterior(model: &DominatedModel, data: &SampleVec, grid_size: usize) -> Result<ThetaGrid> {
    if grid_size < MIN_GRID {
        return Err(Error::Domain(format!("grid size {grid_size} below minimum {MIN_GRID}")));
    }
    model.check_data(data)?;
    let (lo, hi) = window(model, data)?;
    let gl = rule(grid_size);
    let mut nodes = Vec::with_capacity(grid_size);
    let mut log_prior = Vec::with_capacity(grid_size);
    let mut logs = Vec::with_capacity(grid_size);
    for (theta, w) in gl.mapped(lo, hi) {
        let lp = model.ln_prior(theta);
        let ll: f64 = match model.sampling_density(theta) {
            Ok(d) => data.points().iter().map(|&x| d.pdf(x).ln()).sum(),
            Err(_) => f64::NEG_INFINITY,
        };
        nodes.push(theta);
        log_prior.push(lp);
        logs.push(lp + ll + w.ln());
    }
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return Err(Error::Underflow);
    }
    let raw: Vec<f64> = logs.iter().map(|l| (l - max).exp()).collect();
    let total: f64 = raw.iter().sum();
    Ok(ThetaGrid {
        nodes,
        log_prior,
        weights: raw.iter().map(|v| v / total).collect(),
        log_evidence: max + total.ln(),
    })
}

/// `Σᵢ wᵢ p_θᵢ(x)`.
pub fn predictive_density_quadrature(grid: &ThetaGrid, model: &DominatedModel, x: f64) -> Result<f64> {
    let mut acc = 0.0;
    for (&t, &w) in grid.nodes.iter().zip(&grid.weights) {
        acc += w * model.sampling_density(t)?.pdf(x);
    }
    Ok(acc)
}

/// `Σᵢ wᵢ ∏ⱼ p_θᵢ(xⱼ)`.
pub fn predictive_joint_density_quadrature(grid: &ThetaGrid, model: &DominatedModel, xs: &[f64]) -> Result<f64> {
    let mut acc = 0.0;
    for (&t, &w) in grid.nodes.iter().zip(&grid.weights) {
        let d = model.sampling_density(t)?;
        acc += w * xs.iter().map(|&x| d.pdf(x)).product::<f64>();
    }
    Ok(acc)
}

/// The example formulas exactly as printed, for reconciliation only.
pub mod printed {
    use crate::special::ln_gamma;

    fn ln_fact(k: f64) -> f64 {
        ln_gamma(k + 1.0)
    }

    /// Exponential–gamma marginal: `nλ S^{n+1} / (λ + x′ + S)^{n+2}`.
    pub fn exp_gamma_marginal(lambda: f64, n: usize, s: f64, x: f64) -> f64 {
        let nf = n as f64;
        nf * lambda * s.powf(nf + 1.0) / (lambda + x + s).powf(nf + 2.0)
    }

    /// Exponential–gamma joint: `λ (2n)!/n! · S^{n+1} / (λ + S′ + S)^{2n+1}`.
    pub fn exp_gamma_joint(lambda: f64, n: usize, s: f64, s_new: f64) -> f64 {
        let nf = n as f64;
        let ln = lambda.ln() + ln_fact(2.0 * nf) - ln_fact(nf) + (nf + 1.0) * s.ln()
            - (2.0 * nf + 1.0) * (lambda + s_new + s).ln();
        ln.exp()
    }

    /// Normal–normal marginal: the N(mₙ, σ₀² + sₙ²) density.
    pub fn normal_marginal(mu: f64, tau2: f64, sigma0_sq: f64, n: usize, mean_x: f64, x: f64) -> f64 {
        let nf = n as f64;
        let m = (nf * tau2 * mean_x + sigma0_sq * mu) / (nf * tau2 + sigma0_sq);
        let s2 = tau2 * sigma0_sq / (nf * tau2 + sigma0_sq);
        let v = sigma0_sq + s2;
        (-(x - m).powi(2) / (2.0 * v)).exp() / (2.0 * std::f64::consts::PI * v).sqrt()
    }

    /// Poisson–gamma marginal:
    /// `(k′+K)!/(k′! K!) · (λ+n)^{K+1} / (λ+n+1)^{k′+K+1}`.
    pub fn poisson_gamma_marginal(lambda: f64, n: usize, k_sum: f64, k: f64) -> f64 {
        let nf = n as f64;
        let ln = ln_fact(k + k_sum) - ln_fact(k) - ln_fact(k_sum) + (k_sum + 1.0) * (lambda + nf).ln()
            - (k + k_sum + 1.0) * (lambda + nf + 1.0).ln();
        ln.exp()
    }

    /// Poisson–gamma joint with the factorial product taken over the new
    /// counts: `(K′+K)!/(∏k′ᵢ! K!) · (λ+n)^{K+1} / (λ+2n)^{K′+K+1}`.
    pub fn poisson_gamma_joint(lambda: f64, n: usize, k_sum: f64, new: &[f64]) -> f64 {
        let nf = n as f64;
        let k_new: f64 = new.iter().sum();
        let prod: f64 = new.iter().map(|&k| ln_fact(k)).sum();
        let ln = ln_fact(k_new + k_sum) - prod - ln_fact(k_sum) + (k_sum + 1.0) * (lambda + nf).ln()
            - (k_new + k_sum + 1.0) * (lambda + 2.0 * nf).ln();
        ln.exp()
    }

    /// Bernoulli–uniform single-observation formula, printed with `2n`:
    /// `Γ(n+2)/Γ(2n+2) · (k′+K)! (2n−k′−K)! / (K! (n−K)!)`.
    pub fn bernoulli_marginal(n: usize, k_sum: f64, k: f64) -> f64 {
        bernoulli_joint(n, k_sum, k)
    }

    /// Bernoulli–uniform joint of n new observations with K′ ones:
    /// `Γ(n+2)/Γ(2n+2) · (K′+K)! (2n−K′−K)! / (K! (n−K)!)`.
    pub fn bernoulli_joint(n: usize, k_sum: f64, k_new: f64) -> f64 {
        let nf = n as f64;
        let rest = 2.0 * nf - k_new - k_sum;
        if rest < 0.0 {
            return 0.0;
        }
        let ln = ln_gamma(nf + 2.0) - ln_gamma(2.0 * nf + 2.0) + ln_fact(k_new + k_sum) + ln_fact(rest)
            - ln_fact(k_sum)
            - ln_fact(nf - k_sum);
        ln.exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Match,
    /// The implemented closed form disagrees with the oracle.
    Mismatch,
    /// A formula as printed disagrees with the oracle.
    PaperFormulaMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FormulaKind {
    Marginal,
    Joint,
}

/// Deviation of the closed forms (and of the printed formulas, when one is
/// registered for the family) from the quadrature oracle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconcileReport {
    pub family: Family,
    pub formula: FormulaKind,
    pub n: usize,
    pub hyper: serde_json::Value,
    pub data: Vec<f64>,
    pub tol: f64,
    /// `max |closed form − oracle|` over the evaluation grid.
    pub max_abs_dev: f64,
    /// `max |printed − oracle|`, if a printed formula exists.
    pub paper_formula_dev: Option<f64>,
    /// `Match` iff `max_abs_dev < tol`.
    pub verdict: Verdict,
    pub printed_verdict: Option<Verdict>,
}

/// Fixed single-coordinate evaluation points for a predictive.
fn evaluation_points(model: &DominatedModel, data: &SampleVec) -> Result<Vec<f64>> {
    let pred = model.predictive(data)?.marginal_density();
    Ok(match model.family() {
        Family::ExpGamma => vec![1e-9, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0],
        Family::NormalNormal => {
            let m = pred.mean().unwrap_or(0.0);
            let sd = pred.center_scale().1;
            [-5.0, -3.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0, 5.0]
                .iter()
                .map(|z| m + z * sd)
                .collect()
        }
        Family::PoissonGamma => (0..=20).map(f64::from).collect(),
        Family::BernoulliUniform => vec![0.0, 1.0],
        Family::Finite => return Err(Error::Domain("reconcile needs a conjugate family".into())),
    })
}

fn uniform_bernoulli(model: &DominatedModel) -> bool {
    matches!(model.prior(), Prior::BernoulliBeta { alpha0, beta0 } if *alpha0 == 1.0 && *beta0 == 1.0)
}

fn printed_marginal(model: &DominatedModel, data: &SampleVec, x: f64) -> Option<f64> {
    let n = data.n();
    let s = data.sum();
    match model.prior() {
        Prior::ExpGamma { lambda } => Some(printed::exp_gamma_marginal(*lambda, n, s, x)),
        Prior::NormalNormal { mu, tau2, sigma0_sq } => {
            let mean = if n == 0 { 0.0 } else { s / n as f64 };
            Some(printed::normal_marginal(*mu, *tau2, *sigma0_sq, n, mean, x))
        }
        Prior::PoissonGamma { lambda } => Some(printed::poisson_gamma_marginal(*lambda, n, s, x)),
        Prior::BernoulliBeta { .. } if uniform_bernoulli(model) => Some(printed::bernoulli_marginal(n, s, x)),
        _ => None,
    }
}

fn printed_joint(model: &DominatedModel, data: &SampleVec, xs: &[f64]) -> Option<f64> {
    let n = data.n();
    let s = data.sum();
    let s_new: f64 = xs.iter().sum();
    match model.prior() {
        Prior::ExpGamma { lambda } => Some(printed::exp_gamma_joint(*lambda, n, s, s_new)),
        Prior::PoissonGamma { lambda } => Some(printed::poisson_gamma_joint(*lambda, n, s, xs)),
        Prior::BernoulliBeta { .. } if uniform_bernoulli(model) => Some(printed::bernoulli_joint(n, s, s_new)),
        _ => None,
    }
}

fn tuples(points: &[f64], m: usize) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|t| {
                points.iter().map(move |&p| {
                    let mut t = t.clone();
                    t.push(p);
                    t
                })
            })
            .collect();
    }
    out
}

fn verdict(dev: f64, tol: f64, miss: Verdict) -> Verdict {
    if dev < tol {
        Verdict::Match
    } else {
        miss
    }
}

/// Compares the closed-form marginal (and, for 1 ≤ n ≤ 3, joint) predictive
/// densities against the quadrature oracle on a fixed evaluation grid.
pub fn reconcile(model: &DominatedModel, data: &SampleVec, tol: f64) -> Result<Vec<ReconcileReport>> {
    reconcile_with_grid(model, data, tol, DEFAULT_GRID)
}

pub fn reconcile_with_grid(
    model: &DominatedModel,
    data: &SampleVec,
    tol: f64,
    grid_size: usize,
) -> Result<Vec<ReconcileReport>> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let grid = grid_posterior(model, data, grid_size)?;
    let points = evaluation_points(model, data)?;
    let n = data.n();
    let pred = model.predictive(data)?;

    let mut dev: f64 = 0.0;
    let mut printed_dev: Option<f64> = None;
    for &x in &points {
        let oracle = predictive_density_quadrature(&grid, model, x)?;
        dev = dev.max((predictive_marginal_density(&pred, x)? - oracle).abs());
        if n > 0 {
            if let Some(p) = printed_marginal(model, data, x) {
                printed_dev = Some(printed_dev.unwrap_or(0.0).max((p - oracle).abs()));
            }
        }
    }
    let base = |formula, max_abs_dev: f64, paper_formula_dev: Option<f64>| ReconcileReport {
        family: model.family(),
        formula,
        n,
        hyper: model.hyper_json(),
        data: data.points().to_vec(),
        tol,
        max_abs_dev,
        paper_formula_dev,
        verdict: verdict(max_abs_dev, tol, Verdict::Mismatch),
        printed_verdict: paper_formula_dev.map(|d| verdict(d, tol, Verdict::PaperFormulaMismatch)),
    };
    let mut reports = vec![base(FormulaKind::Marginal, dev, printed_dev)];

    if (1..=3).contains(&n) {
        let joint = PredictiveDistribution::new(model, data, Arity::Joint(n))?;
        let coords: Vec<f64> = if points.len() > 5 {
            let step = points.len() / 5;
            points.iter().step_by(step).copied().take(5).collect()
        } else {
            points.clone()
        };
        let mut dev: f64 = 0.0;
        let mut printed_dev: Option<f64> = None;
        for t in tuples(&coords, n) {
            let oracle = predictive_joint_density_quadrature(&grid, model, &t)?;
            let xs = SampleVec::new(t.clone(), &model.support())?;
            dev = dev.max((predictive_joint_density(&joint, &xs)? - oracle).abs());
            if let Some(p) = printed_joint(model, data, &t) {
                printed_dev = Some(printed_dev.unwrap_or(0.0).max((p - oracle).abs()));
            }
        }
        reports.push(base(FormulaKind::Joint, dev, printed_dev));
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(model: &DominatedModel, xs: &[f64]) -> SampleVec {
        SampleVec::new(xs.to_vec(), &model.support()).unwrap()
    }

    #[test]
    fn beta_prior_matches_grid() {
        for (a, b) in [(2.0, 3.0), (0.5, 0.5), (7.0, 1.5)] {
            let m = DominatedModel::bernoulli_beta(a, b).unwrap();
            let d = data(&m, &[1.0, 0.0, 1.0, 1.0]);
            let r = reconcile(&m, &d, 1e-8).unwrap();
            assert!(
                r.iter()
                    .all(|r| r.verdict == Verdict::Match && r.paper_formula_dev.is_none()),
                "{r:?}"
            );
        }
    }

    #[test]
    fn grid_mean_normal() {
        let m = DominatedModel::normal_normal(0.0, 1.0, 1.0).unwrap();
        let g = grid_posterior(&m, &data(&m, &[2.0]), 1024).unwrap();
        assert!((g.mean() - 1.0).abs() < 1e-6);
        assert!((g.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(g.nodes().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn grid_mean_bernoulli() {
        let b = DominatedModel::bernoulli_uniform();
        let g = grid_posterior(&b, &data(&b, &[1.0, 0.0, 1.0]), 1024).unwrap();
        assert!((g.mean() - 0.6).abs() < 1e-6);
    }

    #[test]
    fn empty_sample_reproduces_prior() {
        let m = DominatedModel::exp_gamma(2.0).unwrap();
        let g = grid_posterior(&m, &SampleVec::empty(), 512).unwrap();
        // prior mean 1/λ
        assert!((g.mean() - 0.5).abs() < 1e-10);
        assert!(g.log_evidence().abs() < 1e-10);
    }

    #[test]
    fn evidence_matches_marginal_likelihood() {
        // One Bernoulli success under a uniform prior has evidence 1/2.
        let b = DominatedModel::bernoulli_uniform();
        let g = grid_posterior(&b, &data(&b, &[1.0]), 256).unwrap();
        assert!((g.log_evidence() - 0.5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn small_grids_are_rejected() {
        let b = DominatedModel::bernoulli_uniform();
        assert!(grid_posterior(&b, &SampleVec::empty(), 32).is_err());
    }

    #[test]
    fn quadrature_predictive_examples() {
        let b = DominatedModel::bernoulli_uniform();
        let g = grid_posterior(&b, &data(&b, &[1.0]), 1024).unwrap();
        assert!((predictive_density_quadrature(&g, &b, 1.0).unwrap() - 2.0 / 3.0).abs() < 1e-8);

        let e = DominatedModel::exp_gamma(1.0).unwrap();
        let g = grid_posterior(&e, &data(&e, &[1.0]), 1024).unwrap();
        assert!((predictive_density_quadrature(&g, &e, 2.0).unwrap() - 0.125).abs() < 1e-8);

        let n = DominatedModel::normal_normal(0.5, 1e-12, 1.0).unwrap();
        let g = grid_posterior(&n, &data(&n, &[3.0]), 1024).unwrap();
        let want = (-0.5f64 * 0.25).exp() / (2.0 * std::f64::consts::PI).sqrt();
        assert!((predictive_density_quadrature(&g, &n, 1.0).unwrap() - want).abs() < 1e-4);
    }

    #[test]
    fn printed_formulas_at_known_points() {
        // Ex.1 marginal at x' -> 0 with λ = 1, x = (1): 1/8, against the true value 1.
        assert!((printed::exp_gamma_marginal(1.0, 1, 1.0, 0.0) - 0.125).abs() < 1e-15);
        assert!((printed::bernoulli_joint(1, 1.0, 1.0) - 2.0 / 3.0).abs() < 1e-14);
        assert!((printed::bernoulli_joint(2, 1.0, 1.0) - 0.2).abs() < 1e-14);
        let s: f64 = [0.0, 1.0].iter().map(|&k| printed::bernoulli_marginal(2, 1.0, k)).sum();
        assert!((s - 0.5).abs() < 1e-14);
        assert!((printed::poisson_gamma_marginal(1.0, 1, 2.0, 0.0) - 8.0 / 27.0).abs() < 1e-15);
    }

    #[test]
    fn reconcile_examples() {
        let p = DominatedModel::poisson_gamma(1.0).unwrap();
        for r in reconcile(&p, &data(&p, &[2.0, 0.0]), 1e-8).unwrap() {
            assert_eq!(r.verdict, Verdict::Match, "{r:?}");
            assert_eq!(r.printed_verdict, Some(Verdict::Match), "{r:?}");
        }

        let e = DominatedModel::exp_gamma(1.0).unwrap();
        let rs = reconcile(&e, &data(&e, &[1.0]), 1e-8).unwrap();
        assert_eq!(rs[0].verdict, Verdict::Match);
        assert!(rs[0].paper_formula_dev.unwrap() > 0.1);
        assert_eq!(rs[0].printed_verdict, Some(Verdict::PaperFormulaMismatch));
        assert_eq!(rs[1].printed_verdict, Some(Verdict::PaperFormulaMismatch));

        let b = DominatedModel::bernoulli_uniform();
        let rs = reconcile(&b, &data(&b, &[1.0, 0.0]), 1e-8).unwrap();
        assert_eq!(rs[1].formula, FormulaKind::Joint);
        assert_eq!(rs[1].verdict, Verdict::Match);
        assert_eq!(rs[1].printed_verdict, Some(Verdict::Match));
        assert_eq!(rs[0].printed_verdict, Some(Verdict::PaperFormulaMismatch));
    }
}
