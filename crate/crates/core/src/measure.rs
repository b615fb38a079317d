//! Dominating measures, densities, samples, and the L¹ / total-variation
//! distances everything else is built on.
//!
//! Densities are stored with respect to Lebesgue measure on an interval or
//! counting measure on `{0, 1, 2, ...}`; no renormalisation of the base
//! measure takes place.

use std::fmt;
use std::sync::Arc;

use crate::special::{ln_gamma, std_normal_cdf};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Gamma, Normal, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::DominatedModel;
use crate::quadrature::{geometric_breaks, split_at_roots, Quadrature};

/// Envelope below which continuous tails are dropped.
pub const CONTINUOUS_TAIL: f64 = 1e-14;
/// Discarded tail mass allowed when a counting support is enumerated.
pub const COUNTING_TAIL: f64 = 1e-12;
/// Largest support enumerated by `tv_distance_exhaustive`.
pub const EXHAUSTIVE_ATOM_LIMIT: usize = 20;
const ENUMERATION_CAP: usize = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SupportKind {
    /// Lebesgue measure on `(lo, hi)`; either end may be infinite.
    RealInterval { lo: f64, hi: f64 },
    /// Counting measure on `{0, 1, ..., max_enumerated - 1}`.
    /// `u64::MAX` stands for all of ℕ₀.
    CountingSet { max_enumerated: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportSpec {
    pub kind: SupportKind,
    /// Initial panel count for continuous quadrature.
    pub quadrature_hint: usize,
}

impl SupportSpec {
    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::Domain(format!(
                "interval support needs lo < hi, got ({lo}, {hi})"
            )));
        }
        Ok(SupportSpec {
            kind: SupportKind::RealInterval { lo, hi },
            quadrature_hint: 1,
        })
    }

    pub fn counting(max_enumerated: u64) -> Result<Self> {
        if max_enumerated < 1 {
            return Err(Error::Domain("counting support needs at least one atom".into()));
        }
        Ok(SupportSpec {
            kind: SupportKind::CountingSet { max_enumerated },
            quadrature_hint: 1,
        })
    }

    pub fn real_line() -> Self {
        SupportSpec {
            kind: SupportKind::RealInterval {
                lo: f64::NEG_INFINITY,
                hi: f64::INFINITY,
            },
            quadrature_hint: 1,
        }
    }

    pub fn positive_reals() -> Self {
        SupportSpec {
            kind: SupportKind::RealInterval {
                lo: 0.0,
                hi: f64::INFINITY,
            },
            quadrature_hint: 1,
        }
    }

    pub fn naturals() -> Self {
        SupportSpec {
            kind: SupportKind::CountingSet {
                max_enumerated: u64::MAX,
            },
            quadrature_hint: 1,
        }
    }

    pub fn atoms(count: u64) -> Self {
        SupportSpec {
            kind: SupportKind::CountingSet {
                max_enumerated: count.max(1),
            },
            quadrature_hint: 1,
        }
    }

    pub fn with_quadrature_hint(mut self, panels: usize) -> Self {
        self.quadrature_hint = panels.max(1);
        self
    }

    pub fn is_counting(&self) -> bool {
        matches!(self.kind, SupportKind::CountingSet { .. })
    }

    /// Interval endpoints are excluded; atoms must be integers in range.
    pub fn contains(&self, x: f64) -> bool {
        match self.kind {
            SupportKind::RealInterval { lo, hi } => x.is_finite() && lo < x && x < hi,
            SupportKind::CountingSet { max_enumerated } => {
                x.is_finite() && x >= 0.0 && x.fract() == 0.0 && (x as u64) < max_enumerated
            }
        }
    }

    /// Two supports carry the same dominating measure.
    pub fn same_measure(&self, other: &SupportSpec) -> bool {
        self.kind == other.kind
    }
}

impl fmt::Display for SupportSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SupportKind::RealInterval { lo, hi } => write!(f, "({lo}, {hi})"),
            SupportKind::CountingSet { max_enumerated } if max_enumerated == u64::MAX => {
                write!(f, "{{0, 1, 2, ...}}")
            }
            SupportKind::CountingSet { max_enumerated } => {
                write!(f, "{{0, ..., {}}}", max_enumerated - 1)
            }
        }
    }
}

/// A measurable event used by squared-error losses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Event {
    /// Closed interval `[lo, hi]`.
    Interval { lo: f64, hi: f64 },
    /// A finite set of atoms.
    Atoms(Vec<u64>),
}

impl Event {
    pub fn contains(&self, x: f64) -> bool {
        match self {
            Event::Interval { lo, hi } => *lo <= x && x <= *hi,
            Event::Atoms(atoms) => x >= 0.0 && x.fract() == 0.0 && atoms.contains(&(x as u64)),
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::Interval { lo, hi } => write!(f, "[{lo}:{hi}]"),
            Event::Atoms(a) => {
                let s: Vec<String> = a.iter().map(|v| v.to_string()).collect();
                write!(f, "{{{}}}", s.join(";"))
            }
        }
    }
}

impl std::str::FromStr for Event {
    type Err = Error;

    /// `{1;2}` for atoms, `[lo:hi]` for a closed interval.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::config("loss", format!("cannot parse event {s:?}; use {{1;2}} or [lo:hi]"));
        if let Some(body) = s.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
            let atoms = body
                .split(';')
                .filter(|t| !t.trim().is_empty())
                .map(|t| t.trim().parse::<u64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            return Ok(Event::Atoms(atoms));
        }
        if let Some(body) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let (lo, hi) = body.split_once(':').ok_or_else(bad)?;
            let lo = lo.trim().parse::<f64>().map_err(|_| bad())?;
            let hi = hi.trim().parse::<f64>().map_err(|_| bad())?;
            if lo > hi {
                return Err(bad());
            }
            return Ok(Event::Interval { lo, hi });
        }
        Err(bad())
    }
}

/// A probability density with respect to the measure of its support.
#[derive(Clone)]
pub enum Density {
    Exponential {
        rate: f64,
    },
    Normal {
        mean: f64,
        var: f64,
    },
    /// `shape·scale^shape / (scale + x)^(shape+1)` on `(0, ∞)`.
    Lomax {
        shape: f64,
        scale: f64,
    },
    Poisson {
        rate: f64,
    },
    /// Gamma(shape, rate) mixture of Poissons.
    NegBinomial {
        shape: f64,
        rate: f64,
    },
    Bernoulli {
        p: f64,
    },
    /// Arbitrary pmf on `{0, ..., len-1}`.
    Categorical(Arc<[f64]>),
    Custom {
        support: SupportSpec,
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl fmt::Debug for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Density::Exponential { rate } => write!(f, "Exponential(rate={rate})"),
            Density::Normal { mean, var } => write!(f, "Normal(mean={mean}, var={var})"),
            Density::Lomax { shape, scale } => write!(f, "Lomax(shape={shape}, scale={scale})"),
            Density::Poisson { rate } => write!(f, "Poisson(rate={rate})"),
            Density::NegBinomial { shape, rate } => {
                write!(f, "NegBinomial(shape={shape}, rate={rate})")
            }
            Density::Bernoulli { p } => write!(f, "Bernoulli(p={p})"),
            Density::Categorical(p) => write!(f, "Categorical({:?})", &p[..]),
            Density::Custom { support, .. } => write!(f, "Custom(support={support})"),
        }
    }
}

impl PartialEq for Density {
    fn eq(&self, other: &Self) -> bool {
        use Density::*;
        match (self, other) {
            (Exponential { rate: a }, Exponential { rate: b }) => a == b,
            (Normal { mean: m1, var: v1 }, Normal { mean: m2, var: v2 }) => m1 == m2 && v1 == v2,
            (Lomax { shape: a1, scale: s1 }, Lomax { shape: a2, scale: s2 }) => a1 == a2 && s1 == s2,
            (Poisson { rate: a }, Poisson { rate: b }) => a == b,
            (NegBinomial { shape: a1, rate: b1 }, NegBinomial { shape: a2, rate: b2 }) => a1 == a2 && b1 == b2,
            (Bernoulli { p: a }, Bernoulli { p: b }) => a == b,
            (Categorical(a), Categorical(b)) => a == b,
            _ => false,
        }
    }
}

impl Density {
    pub fn exponential(rate: f64) -> Result<Self> {
        positive("exponential rate", rate)?;
        Ok(Density::Exponential { rate })
    }

    pub fn normal(mean: f64, var: f64) -> Result<Self> {
        finite("normal mean", mean)?;
        positive("normal variance", var)?;
        Ok(Density::Normal { mean, var })
    }

    pub fn lomax(shape: f64, scale: f64) -> Result<Self> {
        positive("lomax shape", shape)?;
        positive("lomax scale", scale)?;
        Ok(Density::Lomax { shape, scale })
    }

    /// `rate = 0` is the point mass at zero.
    pub fn poisson(rate: f64) -> Result<Self> {
        if !(rate >= 0.0 && rate.is_finite()) {
            return Err(Error::InvalidDistribution(format!("poisson rate {rate}")));
        }
        Ok(Density::Poisson { rate })
    }

    pub fn neg_binomial(shape: f64, rate: f64) -> Result<Self> {
        positive("negative binomial shape", shape)?;
        positive("negative binomial rate", rate)?;
        Ok(Density::NegBinomial { shape, rate })
    }

    pub fn bernoulli(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidDistribution(format!("bernoulli p = {p}")));
        }
        Ok(Density::Bernoulli { p })
    }

    pub fn categorical(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() || probs.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::InvalidDistribution(
                "categorical weights must be finite and nonnegative".into(),
            ));
        }
        let s: f64 = probs.iter().sum();
        if (s - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution(format!("categorical weights sum to {s}")));
        }
        Ok(Density::Categorical(probs.into()))
    }

    /// A density given only by its pointwise values. Must integrate to one;
    /// see [`Density::total_mass`].
    pub fn custom<F>(support: SupportSpec, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Density::Custom {
            support,
            f: Arc::new(f),
        }
    }

    pub fn support(&self) -> SupportSpec {
        match self {
            Density::Exponential { .. } | Density::Lomax { .. } => SupportSpec::positive_reals(),
            Density::Normal { .. } => SupportSpec::real_line(),
            Density::Poisson { .. } | Density::NegBinomial { .. } => SupportSpec::naturals(),
            Density::Bernoulli { .. } => SupportSpec::atoms(2),
            Density::Categorical(p) => SupportSpec::atoms(p.len() as u64),
            Density::Custom { support, .. } => *support,
        }
    }

    /// Density value; zero off the support.
    pub fn pdf(&self, x: f64) -> f64 {
        let sup = self.support();
        if !sup.contains(x) {
            return 0.0;
        }
        match self {
            Density::Exponential { rate } => rate * (-rate * x).exp(),
            Density::Normal { mean, var } => {
                let z = x - mean;
                (-0.5 * z * z / var).exp() / (2.0 * std::f64::consts::PI * var).sqrt()
            }
            Density::Lomax { shape, scale } => shape / scale * (scale / (scale + x)).powf(shape + 1.0),
            Density::Poisson { rate } => {
                if *rate == 0.0 {
                    return if x == 0.0 { 1.0 } else { 0.0 };
                }
                (x * rate.ln() - rate - ln_gamma(x + 1.0)).exp()
            }
            Density::NegBinomial { shape, rate } => {
                let lp = ln_gamma(x + shape) - ln_gamma(*shape) - ln_gamma(x + 1.0)
                    + shape * (rate / (rate + 1.0)).ln()
                    - x * (rate + 1.0).ln();
                lp.exp()
            }
            Density::Bernoulli { p } => {
                if x == 1.0 {
                    *p
                } else {
                    1.0 - p
                }
            }
            Density::Categorical(p) => p[x as usize],
            Density::Custom { f, .. } => f(x),
        }
    }

    /// `P((-∞, t])`.
    pub fn cdf(&self, t: f64) -> Result<f64> {
        if t.is_nan() {
            return Err(Error::NonFinite { at: t, value: t });
        }
        let v = match self {
            Density::Exponential { rate } => {
                if t <= 0.0 {
                    0.0
                } else {
                    -(-rate * t).exp_m1()
                }
            }
            Density::Normal { mean, var } => std_normal_cdf((t - mean) / var.sqrt()),
            Density::Lomax { shape, scale } => {
                if t <= 0.0 {
                    0.0
                } else {
                    1.0 - (scale / (scale + t)).powf(*shape)
                }
            }
            Density::Custom { support, .. } if !support.is_counting() => {
                let (lo, _) = self.effective_range(CONTINUOUS_TAIL)?;
                if t <= lo {
                    0.0
                } else {
                    let (c, s) = self.center_scale();
                    let breaks = geometric_breaks(lo, t, c, s);
                    Quadrature::with_panels(support.quadrature_hint).integrate(&breaks, |x| self.pdf(x))?
                }
            }
            _ => {
                if t < 0.0 {
                    0.0
                } else {
                    let len = self.counting_len(COUNTING_TAIL)?;
                    let k = t.floor().min(len as f64 - 1.0) as usize;
                    let table = self.pmf_table(k + 1);
                    if k + 1 >= len {
                        1.0
                    } else {
                        table.iter().sum::<f64>()
                    }
                }
            }
        };
        Ok(v.clamp(0.0, 1.0))
    }

    /// Left limit `P((-∞, t))`.
    pub fn cdf_left(&self, t: f64) -> Result<f64> {
        if self.support().is_counting() {
            let k = t.ceil();
            if t == k {
                return self.cdf(k - 1.0);
            }
        }
        self.cdf(t)
    }

    pub fn prob(&self, event: &Event) -> Result<f64> {
        match event {
            Event::Interval { lo, hi } => {
                if hi < lo {
                    return Ok(0.0);
                }
                Ok((self.cdf(*hi)? - self.cdf_left(*lo)?).max(0.0))
            }
            Event::Atoms(atoms) => {
                if !self.support().is_counting() {
                    return Ok(0.0);
                }
                Ok(atoms.iter().map(|&k| self.pdf(k as f64)).sum())
            }
        }
    }

    pub fn mean(&self) -> Option<f64> {
        match self {
            Density::Exponential { rate } => Some(1.0 / rate),
            Density::Normal { mean, .. } => Some(*mean),
            Density::Lomax { shape, scale } if *shape > 1.0 => Some(scale / (shape - 1.0)),
            Density::Lomax { .. } => None,
            Density::Poisson { rate } => Some(*rate),
            Density::NegBinomial { shape, rate } => Some(shape / rate),
            Density::Bernoulli { p } => Some(*p),
            Density::Categorical(p) => Some(p.iter().enumerate().map(|(k, w)| k as f64 * w).sum()),
            Density::Custom { .. } => None,
        }
    }

    /// Bulk location and width used to lay out quadrature breakpoints.
    pub fn center_scale(&self) -> (f64, f64) {
        match self {
            Density::Exponential { rate } => (0.0, 1.0 / rate),
            Density::Normal { mean, var } => (*mean, var.sqrt()),
            Density::Lomax { shape, scale } => (0.0, scale / shape),
            Density::Custom { support, .. } => match support.kind {
                SupportKind::RealInterval { lo, hi } if lo.is_finite() && hi.is_finite() => {
                    (0.5 * (lo + hi), 0.125 * (hi - lo))
                }
                SupportKind::RealInterval { lo, .. } if lo.is_finite() => (lo, 1.0),
                SupportKind::RealInterval { hi, .. } if hi.is_finite() => (hi, 1.0),
                _ => (0.0, 1.0),
            },
            _ => (self.mean().unwrap_or(0.0), 1.0),
        }
    }

    /// A finite interval outside of which the density's mass is below `eps`.
    pub fn effective_range(&self, eps: f64) -> Result<(f64, f64)> {
        match self {
            Density::Exponential { rate } => Ok((0.0, -eps.ln() / rate)),
            Density::Normal { mean, var } => {
                let z = (-2.0 * eps.ln()).sqrt();
                let sd = var.sqrt();
                Ok((mean - z * sd, mean + z * sd))
            }
            Density::Lomax { shape, scale } => Ok((0.0, scale * (eps.powf(-1.0 / shape) - 1.0))),
            Density::Custom { support, .. } => match support.kind {
                SupportKind::RealInterval { lo, hi } if lo.is_finite() && hi.is_finite() => Ok((lo, hi)),
                SupportKind::RealInterval { .. } => Err(Error::Domain(
                    "custom densities on unbounded intervals need a finite support to integrate".into(),
                )),
                SupportKind::CountingSet { max_enumerated } => {
                    Ok((0.0, (max_enumerated.min(ENUMERATION_CAP as u64) - 1) as f64))
                }
            },
            _ => {
                let len = self.counting_len(eps)?;
                Ok((0.0, (len - 1) as f64))
            }
        }
    }

    /// Number of leading atoms whose complement carries mass below `eps`.
    /// Fails if the support would have to be enumerated past its declared end.
    pub fn counting_len(&self, eps: f64) -> Result<usize> {
        let declared = match self.support().kind {
            SupportKind::CountingSet { max_enumerated } => max_enumerated,
            SupportKind::RealInterval { .. } => {
                return Err(Error::Domain("counting length of a continuous density".into()))
            }
        };
        match self {
            Density::Bernoulli { .. } => Ok(2),
            Density::Categorical(p) => Ok(p.len()),
            Density::Custom { .. } => {
                let n = declared.min(ENUMERATION_CAP as u64) as usize;
                let mass: f64 = (0..n).map(|k| self.pdf(k as f64)).sum();
                if (1.0 - mass).abs() >= eps.max(COUNTING_TAIL) && declared as usize > n {
                    return Err(Error::TailMass {
                        mass: 1.0 - mass,
                        limit: eps,
                    });
                }
                Ok(n)
            }
            _ => {
                let mean = self.mean().unwrap_or(0.0);
                let mut cum = 0.0;
                let mut k = 0usize;
                let mut lp = self.ln_pmf_start();
                loop {
                    cum += lp.exp();
                    k += 1;
                    if (k as f64) > mean && 1.0 - cum < eps {
                        return Ok(k);
                    }
                    if k >= ENUMERATION_CAP || (k as u64) >= declared {
                        return Err(Error::TailMass {
                            mass: 1.0 - cum,
                            limit: eps,
                        });
                    }
                    lp = self.ln_pmf_step(lp, k - 1);
                }
            }
        }
    }

    fn ln_pmf_start(&self) -> f64 {
        match self {
            Density::Poisson { rate } => -rate,
            Density::NegBinomial { shape, rate } => shape * (rate / (rate + 1.0)).ln(),
            _ => self.pdf(0.0).ln(),
        }
    }

    /// ln p(k+1) from ln p(k).
    fn ln_pmf_step(&self, lp: f64, k: usize) -> f64 {
        let kf = k as f64;
        match self {
            Density::Poisson { rate } => {
                if *rate == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    lp + rate.ln() - (kf + 1.0).ln()
                }
            }
            Density::NegBinomial { shape, rate } => lp + (kf + shape).ln() - (kf + 1.0).ln() - (rate + 1.0).ln(),
            _ => self.pdf(kf + 1.0).ln(),
        }
    }

    /// The first `len` pmf values of a counting density.
    pub fn pmf_table(&self, len: usize) -> Vec<f64> {
        match self {
            Density::Poisson { .. } | Density::NegBinomial { .. } => {
                let mut out = Vec::with_capacity(len);
                let mut lp = self.ln_pmf_start();
                for k in 0..len {
                    out.push(lp.exp());
                    lp = self.ln_pmf_step(lp, k);
                }
                out
            }
            _ => (0..len).map(|k| self.pdf(k as f64)).collect(),
        }
    }

    /// Mass of the density under its own quadrature or summation rule.
    pub fn total_mass(&self) -> Result<f64> {
        let sup = self.support();
        if sup.is_counting() {
            let len = self.counting_len(COUNTING_TAIL)?;
            return Ok(self.pmf_table(len).iter().sum());
        }
        let (lo, hi) = self.effective_range(CONTINUOUS_TAIL)?;
        let (c, s) = self.center_scale();
        let breaks = geometric_breaks(lo, hi, c, s);
        Quadrature::with_panels(sup.quadrature_hint).integrate(&breaks, |x| self.pdf(x))
    }

    /// Draws one point.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        let v = match self {
            Density::Exponential { rate } => Exp::new(*rate).map_err(dist_err)?.sample(rng),
            Density::Normal { mean, var } => Normal::new(*mean, var.sqrt()).map_err(dist_err)?.sample(rng),
            Density::Lomax { shape, scale } => {
                let theta = Gamma::new(*shape, 1.0 / scale).map_err(dist_err)?.sample(rng);
                Exp::new(theta).map_err(dist_err)?.sample(rng)
            }
            Density::Poisson { rate } => {
                if *rate == 0.0 {
                    0.0
                } else {
                    Poisson::new(*rate).map_err(dist_err)?.sample(rng)
                }
            }
            Density::NegBinomial { shape, rate } => {
                let theta = Gamma::new(*shape, 1.0 / rate).map_err(dist_err)?.sample(rng);
                if theta > 0.0 {
                    Poisson::new(theta).map_err(dist_err)?.sample(rng)
                } else {
                    0.0
                }
            }
            Density::Bernoulli { p } => {
                if rng.random::<f64>() < *p {
                    1.0
                } else {
                    0.0
                }
            }
            Density::Categorical(p) => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                let mut pick = p.len() - 1;
                for (k, w) in p.iter().enumerate() {
                    acc += w;
                    if u < acc {
                        pick = k;
                        break;
                    }
                }
                pick as f64
            }
            Density::Custom { .. } => {
                return Err(Error::Domain("sampling from a custom density is not supported".into()))
            }
        };
        Ok(v)
    }

    /// Short machine-readable description.
    pub fn describe(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            Density::Exponential { rate } => json!({"distribution": "Exponential", "rate": rate}),
            Density::Normal { mean, var } => json!({"distribution": "Normal", "mean": mean, "variance": var}),
            Density::Lomax { shape, scale } => json!({"distribution": "Lomax", "shape": shape, "scale": scale}),
            Density::Poisson { rate } => json!({"distribution": "Poisson", "rate": rate}),
            Density::NegBinomial { shape, rate } => {
                json!({"distribution": "NegativeBinomial", "shape": shape, "gamma_rate": rate})
            }
            Density::Bernoulli { p } => json!({"distribution": "Bernoulli", "p": p}),
            Density::Categorical(p) => json!({"distribution": "Categorical", "probs": &p[..]}),
            Density::Custom { .. } => json!({"distribution": "Custom"}),
        }
    }
}

fn dist_err<E: fmt::Display>(e: E) -> Error {
    Error::InvalidDistribution(e.to_string())
}

fn positive(what: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidDistribution(format!(
            "{what} must be positive and finite, got {v}"
        )))
    }
}

fn finite(what: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidDistribution(format!("{what} must be finite, got {v}")))
    }
}

/// An ordered sample `(ω₁, ..., ωₙ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleVec {
    points: Vec<f64>,
}

impl SampleVec {
    pub fn new(points: Vec<f64>, support: &SupportSpec) -> Result<Self> {
        if let Some(&bad) = points.iter().find(|&&x| !support.contains(x)) {
            return Err(Error::OutOfSupport(bad));
        }
        Ok(SampleVec { points })
    }

    pub fn empty() -> Self {
        SampleVec { points: Vec::new() }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.points.iter().sum()
    }
}

/// Generator for replicate `index` of a run keyed by `seed`. Each index gets
/// its own ChaCha stream, so results do not depend on scheduling.
pub fn replicate_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// `n` independent draws from `P_θ`; a pure function of its arguments.
pub fn sample(model: &DominatedModel, theta: f64, n: usize, seed: u64) -> Result<SampleVec> {
    if n == 0 {
        return Err(Error::Domain("sample size must be at least 1".into()));
    }
    let density = model.sampling_density(theta)?;
    let mut rng = replicate_rng(seed, 0);
    draw_n(&density, n, &mut rng)
}

pub(crate) fn draw_n<R: Rng + ?Sized>(density: &Density, n: usize, rng: &mut R) -> Result<SampleVec> {
    let points = (0..n).map(|_| density.draw(rng)).collect::<Result<Vec<_>>>()?;
    Ok(SampleVec { points })
}

fn check_same_support(f: &Density, g: &Density) -> Result<SupportSpec> {
    let (sf, sg) = (f.support(), g.support());
    if !sf.same_measure(&sg) {
        return Err(Error::SupportMismatch(sf.to_string(), sg.to_string()));
    }
    Ok(sf)
}

fn counting_pair(f: &Density, g: &Density) -> Result<(Vec<f64>, Vec<f64>)> {
    let len = f
        .counting_len(COUNTING_TAIL * 0.1)?
        .max(g.counting_len(COUNTING_TAIL * 0.1)?);
    let (p, q) = (f.pmf_table(len), g.pmf_table(len));
    for (k, v) in p.iter().chain(q.iter()).enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite {
                at: (k % len) as f64,
                value: *v,
            });
        }
    }
    Ok((p, q))
}

/// `∫|f − g| dμ`: a sum on counting supports, composite quadrature on
/// intervals. The result lies in `[0, 2]`.
pub fn l1_distance(f: &Density, g: &Density) -> Result<f64> {
    let support = check_same_support(f, g)?;
    if f == g {
        return Ok(0.0);
    }
    let v = if support.is_counting() {
        let (p, q) = counting_pair(f, g)?;
        p.iter().zip(&q).map(|(a, b)| (a - b).abs()).sum()
    } else {
        let (lf, hf) = f.effective_range(CONTINUOUS_TAIL)?;
        let (lg, hg) = g.effective_range(CONTINUOUS_TAIL)?;
        let (lo, hi) = (lf.min(lg), hf.max(hg));
        let (cf, sf) = f.center_scale();
        let (cg, sg) = g.center_scale();
        let mut breaks = geometric_breaks(lo, hi, cf, sf);
        breaks.extend(geometric_breaks(lo, hi, cg, sg));
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let breaks = split_at_roots(&breaks, 8, |x| f.pdf(x) - g.pdf(x));
        Quadrature::with_panels(support.quadrature_hint).integrate(&breaks, |x| (f.pdf(x) - g.pdf(x)).abs())?
    };
    if !v.is_finite() {
        return Err(Error::NonFinite { at: f64::NAN, value: v });
    }
    Ok(v.clamp(0.0, 2.0))
}

/// `max_A |P(A) − Q(A)|` by literal enumeration of every subset of a
/// counting support with at most [`EXHAUSTIVE_ATOM_LIMIT`] atoms.
pub fn tv_distance_exhaustive(p: &Density, q: &Density) -> Result<f64> {
    let support = check_same_support(p, q)?;
    let atoms = match support.kind {
        SupportKind::CountingSet { max_enumerated } if max_enumerated <= EXHAUSTIVE_ATOM_LIMIT as u64 => {
            max_enumerated as usize
        }
        SupportKind::CountingSet { .. } => p
            .counting_len(COUNTING_TAIL * 0.1)?
            .max(q.counting_len(COUNTING_TAIL * 0.1)?),
        SupportKind::RealInterval { .. } => {
            return Err(Error::Domain(
                "exhaustive total variation needs a counting support".into(),
            ))
        }
    };
    if atoms > EXHAUSTIVE_ATOM_LIMIT {
        return Err(Error::TooManyAtoms {
            atoms,
            limit: EXHAUSTIVE_ATOM_LIMIT,
        });
    }
    let diff: Vec<f64> = p
        .pmf_table(atoms)
        .iter()
        .zip(q.pmf_table(atoms))
        .map(|(a, b)| a - b)
        .collect();
    fn walk(d: &[f64], partial: f64, best: &mut f64) {
        match d.split_first() {
            None => *best = best.max(partial.abs()),
            Some((head, rest)) => {
                walk(rest, partial, best);
                walk(rest, partial + head, best);
            }
        }
    }
    let mut best = 0.0;
    walk(&diff, 0.0, &mut best);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::DominatedModel;

    #[test]
    fn l1_of_identical_densities_is_zero() {
        let f = Density::normal(0.3, 2.0).unwrap();
        assert_eq!(l1_distance(&f, &f.clone()).unwrap(), 0.0);
    }

    #[test]
    fn l1_between_bernoullis() {
        let f = Density::bernoulli(0.5).unwrap();
        let g = Density::bernoulli(0.75).unwrap();
        assert!((l1_distance(&f, &g).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn l1_rejects_mismatched_supports() {
        let f = Density::bernoulli(0.5).unwrap();
        let g = Density::poisson(1.0).unwrap();
        assert!(matches!(l1_distance(&f, &g), Err(Error::SupportMismatch(..))));
        let h = Density::normal(0.0, 1.0).unwrap();
        let e = Density::exponential(1.0).unwrap();
        assert!(matches!(l1_distance(&h, &e), Err(Error::SupportMismatch(..))));
    }

    #[test]
    fn l1_rejects_non_finite_values() {
        let sup = SupportSpec::interval(0.0, 1.0).unwrap();
        let f = Density::custom(sup, |_| 1.0);
        let g = Density::custom(sup, |x| if x > 0.5 { f64::NAN } else { 1.0 });
        assert!(matches!(l1_distance(&f, &g), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn exhaustive_tv_examples() {
        let p = Density::bernoulli(0.5).unwrap();
        let q = Density::bernoulli(0.75).unwrap();
        assert!((tv_distance_exhaustive(&p, &q).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(tv_distance_exhaustive(&p, &p).unwrap(), 0.0);
        let a = Density::categorical(vec![0.2, 0.3, 0.5]).unwrap();
        let b = Density::categorical(vec![0.5, 0.3, 0.2]).unwrap();
        assert!((tv_distance_exhaustive(&a, &b).unwrap() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn exhaustive_tv_refuses_large_supports() {
        let p = Density::categorical(vec![1.0 / 21.0; 21]).unwrap();
        assert!(matches!(
            tv_distance_exhaustive(&p, &p),
            Err(Error::TooManyAtoms { atoms: 21, .. })
        ));
    }

    #[test]
    fn degenerate_bernoulli_sample() {
        let m = DominatedModel::bernoulli_uniform();
        let s = sample(&m, 1.0, 5, 12345).unwrap();
        assert_eq!(s.points(), &[1.0; 5]);
    }

    #[test]
    fn poisson_sample_mean() {
        let m = DominatedModel::poisson_gamma(1.0).unwrap();
        let s = sample(&m, 4.0, 100_000, 7).unwrap();
        let mean = s.sum() / s.n() as f64;
        assert!((mean - 4.0).abs() < 0.05, "{mean}");
        assert_eq!(s, sample(&m, 4.0, 100_000, 7).unwrap());
    }

    #[test]
    fn sample_rejects_bad_theta() {
        let m = DominatedModel::bernoulli_uniform();
        assert!(matches!(sample(&m, 1.5, 3, 1), Err(Error::Domain(_))));
        let e = DominatedModel::exp_gamma(1.0).unwrap();
        assert!(sample(&e, 0.0, 3, 1).is_err());
    }

    #[test]
    fn counting_cdf_and_left_limits() {
        let b = Density::bernoulli(0.75).unwrap();
        assert_eq!(b.cdf(-0.1).unwrap(), 0.0);
        assert!((b.cdf(0.0).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(b.cdf_left(0.0).unwrap(), 0.0);
        assert!((b.cdf(0.7).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(b.cdf(1.0).unwrap(), 1.0);
        let p = Density::poisson(3.0).unwrap();
        let direct: f64 = (0..=4).map(|k| p.pdf(k as f64)).sum();
        assert!((p.cdf(4.5).unwrap() - direct).abs() < 1e-14);
    }

    #[test]
    fn events() {
        let n = Density::normal(0.0, 1.0).unwrap();
        let v = n.prob(&Event::Interval { lo: -1.0, hi: 1.0 }).unwrap();
        assert!((v - 0.682_689_492_137_085_9).abs() < 1e-12, "{v}");
        let p = Density::poisson(2.0).unwrap();
        let w = p.prob(&Event::Atoms(vec![0, 2])).unwrap();
        assert!((w - (p.pdf(0.0) + p.pdf(2.0))).abs() < 1e-15);
        let i = p.prob(&Event::Interval { lo: 0.0, hi: 2.0 }).unwrap();
        assert!((i - p.cdf(2.0).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn support_membership() {
        assert!(!SupportSpec::positive_reals().contains(0.0));
        assert!(SupportSpec::atoms(2).contains(1.0));
        assert!(!SupportSpec::atoms(2).contains(2.0));
        assert!(!SupportSpec::naturals().contains(1.5));
        assert!(SupportSpec::interval(1.0, 1.0).is_err());
        assert!(SupportSpec::counting(0).is_err());
    }
}
