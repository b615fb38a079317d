//! Posterior predictive distributions as Bayes estimators of sampling
//! distributions, densities and distribution functions.
//!
//! * [`measure`]: supports, densities, samples, L¹ and total-variation distances.
//! * [`kernel`]: finite Markov kernels and the exact finite Bayesian experiment.
//! * [`models`]: conjugate families with closed-form predictive densities.
//! * [`oracle`]: grid quadrature of the defining integrals.
//! * [`risk`]: losses and the seeded Monte Carlo Bayes-risk harness.
//! * [`cli`]: configuration and report generation behind the `bayespred` binary.

pub mod cli;
pub mod error;
pub mod kernel;
pub mod measure;
pub mod models;
pub mod oracle;
pub mod quadrature;
pub mod risk;
pub mod special;

pub use error::{Error, Result};
pub use measure::{l1_distance, sample, tv_distance_exhaustive, Density, Event, SampleVec, SupportSpec};
pub use models::{
    plugin_density, predictive_cdf, predictive_joint_density, predictive_marginal_density, Arity, DominatedModel,
    Family, PluginKind, PosteriorState, PredictiveDistribution,
};
pub use risk::{
    bayes_risk_mc, consistency_curve, dominance_report, loss_eval, EstimatorKind, EstimatorSpec, LossKind, RiskEstimate,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
