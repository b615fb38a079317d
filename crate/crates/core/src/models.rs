//! Conjugate Bayesian experiments with exact posterior updates and
//! closed-form posterior predictive densities, plus the plug-in densities
//! used as competitors in risk comparisons.
//!
//! | family           | `P_θ`          | prior `Q`          | posterior           | marginal predictive |
//! |------------------|----------------|--------------------|---------------------|---------------------|
//! | `ExpGamma`       | Exp(rate θ)    | Exp(rate λ)        | Gamma(n+1, λ+Σx)    | Lomax               |
//! | `NormalNormal`   | N(θ, σ₀²)      | N(μ, τ²)           | N(mₙ, sₙ²)          | N(mₙ, σ₀²+sₙ²)      |
//! | `PoissonGamma`   | Poisson(θ)     | Exp(rate λ)        | Gamma(Σk+1, λ+n)    | negative binomial   |
//! | `BernoulliUniform` | Bernoulli(θ) | Uniform(0, 1)      | Beta(Σk+1, n−Σk+1)  | Bernoulli((Σk+1)/(n+2)) |
//!
//! A finite experiment (a prior vector and a likelihood kernel) is also
//! accepted, so the exact finite computations can be fed to the same
//! Monte Carlo machinery.

use std::fmt;
use std::str::FromStr;

use crate::special::{ln_beta, ln_gamma};
use rand::Rng;
use rand_distr::{Beta, Distribution, Exp, Normal};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::kernel::{FiniteDist, FiniteKernel};
use crate::measure::{Density, SampleVec, SupportSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    ExpGamma,
    NormalNormal,
    PoissonGamma,
    BernoulliUniform,
    Finite,
}

impl Family {
    pub const CONJUGATE: [Family; 4] = [
        Family::ExpGamma,
        Family::NormalNormal,
        Family::PoissonGamma,
        Family::BernoulliUniform,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::ExpGamma => "ExpGamma",
            Family::NormalNormal => "NormalNormal",
            Family::PoissonGamma => "PoissonGamma",
            Family::BernoulliUniform => "BernoulliUniform",
            Family::Finite => "Finite",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "expgamma" | "exponentialgamma" | "exponential" => Ok(Family::ExpGamma),
            "normalnormal" | "normal" | "gaussian" => Ok(Family::NormalNormal),
            "poissongamma" | "poisson" => Ok(Family::PoissonGamma),
            "bernoulliuniform" | "bernoulli" | "betabernoulli" => Ok(Family::BernoulliUniform),
            "finite" | "kernel" => Ok(Family::Finite),
            _ => Err(Error::config("model", format!("unknown family {s:?}"))),
        }
    }
}

/// Prior hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Prior {
    /// `Q = Exp(rate λ)`, i.e. Gamma(1, scale 1/λ).
    ExpGamma {
        lambda: f64,
    },
    NormalNormal {
        mu: f64,
        tau2: f64,
        sigma0_sq: f64,
    },
    PoissonGamma {
        lambda: f64,
    },
    /// Beta(α₀, β₀) prior; the uniform prior is (1, 1).
    BernoulliBeta {
        alpha0: f64,
        beta0: f64,
    },
    Finite {
        prior: FiniteDist,
        likelihood: FiniteKernel,
    },
}

/// A parametric family `{P_θ}` dominated by the measure of its support,
/// together with a prior `Q` on θ.
#[derive(Debug, Clone, PartialEq)]
pub struct DominatedModel {
    prior: Prior,
}

fn require_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive and finite, got {v}")))
    }
}

impl DominatedModel {
    pub fn exp_gamma(lambda: f64) -> Result<Self> {
        require_positive("lambda", lambda)?;
        Ok(DominatedModel {
            prior: Prior::ExpGamma { lambda },
        })
    }

    pub fn normal_normal(mu: f64, tau2: f64, sigma0_sq: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::Domain(format!("mu must be finite, got {mu}")));
        }
        require_positive("tau2", tau2)?;
        require_positive("sigma0_sq", sigma0_sq)?;
        Ok(DominatedModel {
            prior: Prior::NormalNormal { mu, tau2, sigma0_sq },
        })
    }

    pub fn poisson_gamma(lambda: f64) -> Result<Self> {
        require_positive("lambda", lambda)?;
        Ok(DominatedModel {
            prior: Prior::PoissonGamma { lambda },
        })
    }

    pub fn bernoulli_uniform() -> Self {
        DominatedModel {
            prior: Prior::BernoulliBeta {
                alpha0: 1.0,
                beta0: 1.0,
            },
        }
    }

    /// Bernoulli sampling with a Beta(α₀, β₀) prior.
    #[cfg(test)]
    pub(crate) fn bernoulli_beta(alpha0: f64, beta0: f64) -> Result<Self> {
        require_positive("alpha0", alpha0)?;
        require_positive("beta0", beta0)?;
        Ok(DominatedModel {
            prior: Prior::BernoulliBeta { alpha0, beta0 },
        })
    }

    /// A finite experiment: θ indexes the rows of `likelihood`, ω its columns.
    pub fn finite(prior: FiniteDist, likelihood: FiniteKernel) -> Result<Self> {
        if prior.labels() != likelihood.source_labels() {
            return Err(Error::Dimension("prior labels differ from kernel source labels".into()));
        }
        if !likelihood.undefined_rows().is_empty() {
            return Err(Error::Dimension("likelihood kernel has undefined rows".into()));
        }
        Ok(DominatedModel {
            prior: Prior::Finite { prior, likelihood },
        })
    }

    /// Builds a conjugate model from named hyperparameters.
    pub fn from_hyper<'a, I>(family: Family, hyper: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, f64)>,
    {
        let mut lambda = None;
        let mut mu = None;
        let mut tau2 = None;
        let mut sigma0_sq = None;
        for (k, v) in hyper {
            let slot = match (family, k) {
                (Family::ExpGamma | Family::PoissonGamma, "lambda") => &mut lambda,
                (Family::NormalNormal, "mu") => &mut mu,
                (Family::NormalNormal, "tau2") => &mut tau2,
                (Family::NormalNormal, "sigma0_sq" | "sigma02" | "sigma2") => &mut sigma0_sq,
                _ => return Err(Error::config("hyper", format!("{family} has no hyperparameter {k:?}"))),
            };
            *slot = Some(v);
        }
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| Error::config("hyper", format!("{family} needs hyperparameter {name}")))
        };
        let wrap = |r: Result<Self>| r.map_err(|e| Error::config("hyper", e.to_string()));
        match family {
            Family::ExpGamma => wrap(Self::exp_gamma(need(lambda, "lambda")?)),
            Family::PoissonGamma => wrap(Self::poisson_gamma(need(lambda, "lambda")?)),
            Family::NormalNormal => wrap(Self::normal_normal(
                need(mu, "mu")?,
                need(tau2, "tau2")?,
                need(sigma0_sq, "sigma0_sq")?,
            )),
            Family::BernoulliUniform => Ok(Self::bernoulli_uniform()),
            Family::Finite => Err(Error::config("model", "the Finite family is loaded from a matrix file")),
        }
    }

    pub fn prior(&self) -> &Prior {
        &self.prior
    }

    pub fn family(&self) -> Family {
        match self.prior {
            Prior::ExpGamma { .. } => Family::ExpGamma,
            Prior::NormalNormal { .. } => Family::NormalNormal,
            Prior::PoissonGamma { .. } => Family::PoissonGamma,
            Prior::BernoulliBeta { .. } => Family::BernoulliUniform,
            Prior::Finite { .. } => Family::Finite,
        }
    }

    pub fn hyper_json(&self) -> serde_json::Value {
        match &self.prior {
            Prior::ExpGamma { lambda } | Prior::PoissonGamma { lambda } => json!({ "lambda": lambda }),
            Prior::NormalNormal { mu, tau2, sigma0_sq } => {
                json!({ "mu": mu, "tau2": tau2, "sigma0_sq": sigma0_sq })
            }
            Prior::BernoulliBeta { alpha0, beta0 } => json!({ "alpha0": alpha0, "beta0": beta0 }),
            Prior::Finite { prior, likelihood } => json!({
                "prior": prior.weights(),
                "likelihood": (0..likelihood.n_sources()).map(|i| likelihood.row(i)).collect::<Vec<_>>(),
            }),
        }
    }

    pub fn support(&self) -> SupportSpec {
        match &self.prior {
            Prior::ExpGamma { .. } => SupportSpec::positive_reals(),
            Prior::NormalNormal { .. } => SupportSpec::real_line(),
            Prior::PoissonGamma { .. } => SupportSpec::naturals(),
            Prior::BernoulliBeta { .. } => SupportSpec::atoms(2),
            Prior::Finite { likelihood, .. } => SupportSpec::atoms(likelihood.n_targets() as u64),
        }
    }

    /// Open parameter range used for grids; `None` for finite experiments.
    pub fn parameter_range(&self) -> Option<(f64, f64)> {
        match self.prior {
            Prior::ExpGamma { .. } | Prior::PoissonGamma { .. } => Some((0.0, f64::INFINITY)),
            Prior::NormalNormal { .. } => Some((f64::NEG_INFINITY, f64::INFINITY)),
            Prior::BernoulliBeta { .. } => Some((0.0, 1.0)),
            Prior::Finite { .. } => None,
        }
    }

    /// `P_θ`. Boundary values that give degenerate laws (θ = 0 for Poisson,
    /// θ ∈ {0, 1} for Bernoulli) are accepted.
    pub fn sampling_density(&self, theta: f64) -> Result<Density> {
        let bad = || Error::Domain(format!("θ = {theta} outside the {} parameter domain", self.family()));
        match &self.prior {
            Prior::ExpGamma { .. } => Density::exponential(theta).map_err(|_| bad()),
            Prior::NormalNormal { sigma0_sq, .. } => Density::normal(theta, *sigma0_sq).map_err(|_| bad()),
            Prior::PoissonGamma { .. } => Density::poisson(theta).map_err(|_| bad()),
            Prior::BernoulliBeta { .. } => Density::bernoulli(theta).map_err(|_| bad()),
            Prior::Finite { likelihood, .. } => {
                if theta < 0.0 || theta.fract() != 0.0 || theta as usize >= likelihood.n_sources() {
                    return Err(bad());
                }
                Density::categorical(likelihood.row(theta as usize).ok_or_else(bad)?.to_vec())
            }
        }
    }

    /// Log prior density (w.r.t. Lebesgue, or counting for finite experiments).
    pub fn ln_prior(&self, theta: f64) -> f64 {
        match &self.prior {
            Prior::ExpGamma { lambda } | Prior::PoissonGamma { lambda } => {
                if theta > 0.0 {
                    lambda.ln() - lambda * theta
                } else {
                    f64::NEG_INFINITY
                }
            }
            Prior::NormalNormal { mu, tau2, .. } => {
                let d = theta - mu;
                -0.5 * d * d / tau2 - 0.5 * (2.0 * std::f64::consts::PI * tau2).ln()
            }
            Prior::BernoulliBeta { alpha0, beta0 } => {
                if theta > 0.0 && theta < 1.0 {
                    (alpha0 - 1.0) * theta.ln() + (beta0 - 1.0) * (-theta).ln_1p() - ln_beta(*alpha0, *beta0)
                } else {
                    f64::NEG_INFINITY
                }
            }
            Prior::Finite { prior, .. } => {
                if theta >= 0.0 && theta.fract() == 0.0 {
                    prior
                        .weights()
                        .get(theta as usize)
                        .map_or(f64::NEG_INFINITY, |w| w.ln())
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }

    /// `θ ~ Q`.
    pub fn draw_theta<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        let err = |e: String| Error::InvalidDistribution(e);
        Ok(match &self.prior {
            Prior::ExpGamma { lambda } | Prior::PoissonGamma { lambda } => {
                Exp::new(*lambda).map_err(|e| err(e.to_string()))?.sample(rng)
            }
            Prior::NormalNormal { mu, tau2, .. } => Normal::new(*mu, tau2.sqrt())
                .map_err(|e| err(e.to_string()))?
                .sample(rng),
            Prior::BernoulliBeta { alpha0, beta0 } => {
                if *alpha0 == 1.0 && *beta0 == 1.0 {
                    rng.random::<f64>()
                } else {
                    Beta::new(*alpha0, *beta0).map_err(|e| err(e.to_string()))?.sample(rng)
                }
            }
            Prior::Finite { prior, .. } => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                let mut pick = prior.len() - 1;
                for (k, w) in prior.weights().iter().enumerate() {
                    acc += w;
                    if u < acc {
                        pick = k;
                        break;
                    }
                }
                pick as f64
            }
        })
    }

    pub fn check_data(&self, data: &SampleVec) -> Result<()> {
        let sup = self.support();
        match data.points().iter().find(|&&x| !sup.contains(x)) {
            Some(&x) => Err(Error::OutOfSupport(x)),
            None => Ok(()),
        }
    }

    /// Exact conjugate update. An empty sample returns the prior.
    pub fn posterior_update(&self, data: &SampleVec) -> Result<PosteriorState> {
        self.check_data(data)?;
        let n = data.n() as f64;
        let total = order_free_sum(data.points());
        Ok(match &self.prior {
            Prior::ExpGamma { lambda } => PosteriorState::ExpGamma {
                shape: 1.0 + n,
                rate: lambda + total,
            },
            Prior::PoissonGamma { lambda } => PosteriorState::PoissonGamma {
                shape: 1.0 + total,
                rate: lambda + n,
            },
            Prior::NormalNormal { mu, tau2, sigma0_sq } => {
                let denom = n * tau2 + sigma0_sq;
                PosteriorState::NormalNormal {
                    mean: (tau2 * total + sigma0_sq * mu) / denom,
                    var: tau2 * sigma0_sq / denom,
                }
            }
            Prior::BernoulliBeta { alpha0, beta0 } => PosteriorState::BernoulliUniform {
                alpha: alpha0 + total,
                beta: beta0 + n - total,
            },
            Prior::Finite { prior, likelihood } => {
                let logs: Vec<f64> = (0..prior.len())
                    .map(|t| {
                        let row = likelihood.row(t).expect("checked at construction");
                        prior.weights()[t].ln() + data.points().iter().map(|&x| row[x as usize].ln()).sum::<f64>()
                    })
                    .collect();
                let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                if max == f64::NEG_INFINITY {
                    return Err(Error::Domain("observation has zero prior predictive mass".into()));
                }
                let w: Vec<f64> = logs.iter().map(|l| (l - max).exp()).collect();
                let s: f64 = w.iter().sum();
                PosteriorState::Finite {
                    weights: w.into_iter().map(|v| v / s).collect(),
                }
            }
        })
    }

    /// Maximum-likelihood estimate of θ.
    pub fn mle(&self, data: &SampleVec) -> Result<f64> {
        self.check_data(data)?;
        if data.is_empty() {
            return Err(Error::UndefinedEstimator(
                "MLE needs at least one observation (n = 0)".into(),
            ));
        }
        let n = data.n() as f64;
        let total = order_free_sum(data.points());
        match &self.prior {
            Prior::ExpGamma { .. } => {
                if total > 0.0 {
                    Ok(n / total)
                } else {
                    Err(Error::UndefinedEstimator(
                        "MLE of the exponential rate needs Σx > 0".into(),
                    ))
                }
            }
            Prior::NormalNormal { .. } | Prior::PoissonGamma { .. } | Prior::BernoulliBeta { .. } => Ok(total / n),
            Prior::Finite { likelihood, .. } => {
                let mut best = (f64::NEG_INFINITY, 0usize);
                for t in 0..likelihood.n_sources() {
                    let row = likelihood.row(t).expect("checked at construction");
                    let ll: f64 = data.points().iter().map(|&x| row[x as usize].ln()).sum();
                    if ll > best.0 {
                        best = (ll, t);
                    }
                }
                Ok(best.1 as f64)
            }
        }
    }

    pub fn predictive(&self, data: &SampleVec) -> Result<PredictiveDistribution> {
        PredictiveDistribution::new(self, data, Arity::Marginal)
    }
}

/// Sum that does not depend on the order of `xs`.
fn order_free_sum(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v.iter().sum()
}

/// Exact posterior parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PosteriorState {
    /// Gamma(shape, rate) posterior of an exponential rate.
    ExpGamma {
        shape: f64,
        rate: f64,
    },
    NormalNormal {
        mean: f64,
        var: f64,
    },
    PoissonGamma {
        shape: f64,
        rate: f64,
    },
    /// Beta(alpha, beta).
    BernoulliUniform {
        alpha: f64,
        beta: f64,
    },
    Finite {
        weights: Vec<f64>,
    },
}

impl PosteriorState {
    pub fn mean(&self) -> f64 {
        match self {
            PosteriorState::ExpGamma { shape, rate } | PosteriorState::PoissonGamma { shape, rate } => shape / rate,
            PosteriorState::NormalNormal { mean, .. } => *mean,
            PosteriorState::BernoulliUniform { alpha, beta } => alpha / (alpha + beta),
            PosteriorState::Finite { weights } => weights.iter().enumerate().map(|(i, w)| i as f64 * w).sum(),
        }
    }

    pub fn variance(&self) -> f64 {
        match self {
            PosteriorState::ExpGamma { shape, rate } | PosteriorState::PoissonGamma { shape, rate } => {
                shape / (rate * rate)
            }
            PosteriorState::NormalNormal { var, .. } => *var,
            PosteriorState::BernoulliUniform { alpha, beta } => {
                let s = alpha + beta;
                alpha * beta / (s * s * (s + 1.0))
            }
            PosteriorState::Finite { weights } => {
                let m = self.mean();
                weights
                    .iter()
                    .enumerate()
                    .map(|(i, w)| w * (i as f64 - m).powi(2))
                    .sum()
            }
        }
    }

    pub fn describe(&self) -> serde_json::Value {
        match self {
            PosteriorState::ExpGamma { shape, rate } | PosteriorState::PoissonGamma { shape, rate } => {
                json!({"distribution": "Gamma", "shape": shape, "rate": rate})
            }
            PosteriorState::NormalNormal { mean, var } => {
                json!({"distribution": "Normal", "mean": mean, "variance": var})
            }
            PosteriorState::BernoulliUniform { alpha, beta } => {
                json!({"distribution": "Beta", "alpha": alpha, "beta": beta})
            }
            PosteriorState::Finite { weights } => json!({"distribution": "Categorical", "weights": weights}),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Arity {
    /// Law of the next single observation.
    Marginal,
    /// Law of `m` further observations jointly.
    Joint(usize),
}

/// The posterior predictive distribution given an observed sample.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictiveDistribution {
    model: DominatedModel,
    posterior: PosteriorState,
    n: usize,
    arity: Arity,
}

impl PredictiveDistribution {
    pub fn new(model: &DominatedModel, data: &SampleVec, arity: Arity) -> Result<Self> {
        if arity == Arity::Joint(0) {
            return Err(Error::Dimension(
                "joint predictive needs at least one coordinate".into(),
            ));
        }
        Ok(PredictiveDistribution {
            model: model.clone(),
            posterior: model.posterior_update(data)?,
            n: data.n(),
            arity,
        })
    }

    /// The joint law of as many new observations as were observed.
    pub fn joint_of_sample_size(model: &DominatedModel, data: &SampleVec) -> Result<Self> {
        Self::new(model, data, Arity::Joint(data.n().max(1)))
    }

    pub fn model(&self) -> &DominatedModel {
        &self.model
    }

    pub fn posterior(&self) -> &PosteriorState {
        &self.posterior
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }

    /// Size of the conditioning sample.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The single-observation predictive law, whatever the arity.
    pub fn marginal_density(&self) -> Density {
        match (&self.posterior, self.model.prior()) {
            (PosteriorState::ExpGamma { shape, rate }, _) => Density::Lomax {
                shape: *shape,
                scale: *rate,
            },
            (PosteriorState::NormalNormal { mean, var }, Prior::NormalNormal { sigma0_sq, .. }) => Density::Normal {
                mean: *mean,
                var: var + sigma0_sq,
            },
            (PosteriorState::PoissonGamma { shape, rate }, _) => Density::NegBinomial {
                shape: *shape,
                rate: *rate,
            },
            (PosteriorState::BernoulliUniform { alpha, beta }, _) => Density::Bernoulli {
                p: alpha / (alpha + beta),
            },
            (PosteriorState::Finite { weights }, Prior::Finite { likelihood, .. }) => {
                let mut probs = vec![0.0; likelihood.n_targets()];
                for (t, w) in weights.iter().enumerate() {
                    for (acc, v) in probs.iter_mut().zip(likelihood.row(t).expect("defined")) {
                        *acc += w * v;
                    }
                }
                Density::Categorical(probs.into())
            }
            _ => unreachable!("posterior state always matches its model"),
        }
    }
}

/// Posterior predictive density of one new observation at `x`.
pub fn predictive_marginal_density(pred: &PredictiveDistribution, x: f64) -> Result<f64> {
    if pred.arity != Arity::Marginal {
        return Err(Error::Dimension(
            "marginal density requested from a joint predictive".into(),
        ));
    }
    if !pred.model.support().contains(x) {
        return Err(Error::OutOfSupport(x));
    }
    Ok(pred.marginal_density().pdf(x))
}

/// Joint posterior predictive density of `m` new observations, with respect
/// to the m-fold product of the dominating measure.
pub fn predictive_joint_density(pred: &PredictiveDistribution, xs: &SampleVec) -> Result<f64> {
    let m = match pred.arity {
        Arity::Joint(m) => m,
        Arity::Marginal => 1,
    };
    if xs.n() != m {
        return Err(Error::Dimension(format!(
            "joint predictive of {m} points evaluated at {}",
            xs.n()
        )));
    }
    pred.model.check_data(xs)?;
    let mf = m as f64;
    let total = order_free_sum(xs.points());
    let ln = match (&pred.posterior, pred.model.prior()) {
        (PosteriorState::ExpGamma { shape: a, rate: b }, _) => {
            a * b.ln() + ln_gamma(a + mf) - ln_gamma(*a) - (a + mf) * (b + total).ln()
        }
        (PosteriorState::PoissonGamma { shape: a, rate: b }, _) => {
            let fact: f64 = xs.points().iter().map(|k| ln_gamma(k + 1.0)).sum();
            a * b.ln() + ln_gamma(a + total) - ln_gamma(*a) - fact - (a + total) * (b + mf).ln()
        }
        (PosteriorState::BernoulliUniform { alpha, beta }, _) => {
            ln_beta(alpha + total, beta + mf - total) - ln_beta(*alpha, *beta)
        }
        (PosteriorState::NormalNormal { mean, var }, Prior::NormalNormal { sigma0_sq, .. }) => {
            // covariance σ₀²·I + s²·11ᵀ
            let d: Vec<f64> = xs.points().iter().map(|x| x - mean).collect();
            let ss: f64 = d.iter().map(|v| v * v).sum();
            let s1: f64 = d.iter().sum();
            let denom = sigma0_sq + mf * var;
            let quad = (ss - var * s1 * s1 / denom) / sigma0_sq;
            let ln_det = (mf - 1.0) * sigma0_sq.ln() + denom.ln();
            -0.5 * mf * (2.0 * std::f64::consts::PI).ln() - 0.5 * ln_det - 0.5 * quad
        }
        (PosteriorState::Finite { weights }, Prior::Finite { likelihood, .. }) => {
            let v: f64 = weights
                .iter()
                .enumerate()
                .map(|(t, w)| {
                    let row = likelihood.row(t).expect("defined");
                    w * xs.points().iter().map(|&x| row[x as usize]).product::<f64>()
                })
                .sum();
            return Ok(v);
        }
        _ => unreachable!("posterior state always matches its model"),
    };
    Ok(ln.exp())
}

/// Posterior predictive distribution function of one new observation.
pub fn predictive_cdf(pred: &PredictiveDistribution, t: f64) -> Result<f64> {
    if pred.arity != Arity::Marginal {
        return Err(Error::Dimension(
            "distribution function requested from a joint predictive".into(),
        ));
    }
    pred.marginal_density().cdf(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PluginKind {
    PosteriorMean,
    Mle,
    PriorPredictive,
}

/// Competitor densities: `p_θ̂` at the posterior mean or the MLE, or the
/// prior predictive density that ignores the data.
pub fn plugin_density(model: &DominatedModel, data: &SampleVec, kind: PluginKind) -> Result<Density> {
    match kind {
        PluginKind::PosteriorMean => {
            let post = model.posterior_update(data)?;
            if model.family() == Family::Finite {
                return Err(Error::UndefinedEstimator(
                    "posterior mean of an unordered finite parameter".into(),
                ));
            }
            model.sampling_density(post.mean())
        }
        PluginKind::Mle => model.sampling_density(model.mle(data)?),
        PluginKind::PriorPredictive => Ok(model.predictive(&SampleVec::empty())?.marginal_density()),
    }
}
