//! Markov kernels on finite spaces: images, composition, the joint law of a
//! Bayesian experiment, its posterior kernel and the posterior predictive
//! kernel. Kernels are row-stochastic matrices indexed by opaque labels.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Identity tolerance for row sums and total masses.
pub const STOCHASTIC_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteDist {
    weights: Vec<f64>,
    labels: Vec<String>,
}

impl FiniteDist {
    pub fn new(weights: Vec<f64>, labels: Vec<String>) -> Result<Self> {
        if weights.len() != labels.len() {
            return Err(Error::Dimension(format!(
                "{} weights for {} labels",
                weights.len(),
                labels.len()
            )));
        }
        check_probability_row(&weights, "distribution")?;
        Ok(FiniteDist { weights, labels })
    }

    /// Uses labels `prefix1, prefix2, ...`.
    pub fn unlabeled(weights: Vec<f64>, prefix: &str) -> Result<Self> {
        let labels = default_labels(prefix, weights.len());
        FiniteDist::new(weights, labels)
    }

    pub fn point_mass(index: usize, labels: Vec<String>) -> Result<Self> {
        if index >= labels.len() {
            return Err(Error::Dimension(format!(
                "point mass index {index} out of {}",
                labels.len()
            )));
        }
        let mut w = vec![0.0; labels.len()];
        w[index] = 1.0;
        FiniteDist::new(w, labels)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn max_abs_diff(&self, other: &FiniteDist) -> f64 {
        self.weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// A Markov kernel `source ⇝ target`. Rows left undefined (posterior rows
/// at observations of zero marginal mass) carry no values and may only be
/// reached with zero weight.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteKernel {
    rows: Vec<Option<Vec<f64>>>,
    source_labels: Vec<String>,
    target_labels: Vec<String>,
}

impl FiniteKernel {
    pub fn new(rows: Vec<Vec<f64>>, source_labels: Vec<String>, target_labels: Vec<String>) -> Result<Self> {
        Self::with_undefined(rows.into_iter().map(Some).collect(), source_labels, target_labels)
    }

    pub fn unlabeled(rows: Vec<Vec<f64>>, source_prefix: &str, target_prefix: &str) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let src = default_labels(source_prefix, rows.len());
        let tgt = default_labels(target_prefix, cols);
        FiniteKernel::new(rows, src, tgt)
    }

    fn with_undefined(
        rows: Vec<Option<Vec<f64>>>,
        source_labels: Vec<String>,
        target_labels: Vec<String>,
    ) -> Result<Self> {
        if rows.len() != source_labels.len() {
            return Err(Error::Dimension(format!(
                "{} rows for {} source labels",
                rows.len(),
                source_labels.len()
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            if let Some(row) = row {
                if row.len() != target_labels.len() {
                    return Err(Error::Dimension(format!(
                        "row {i} has {} entries for {} target labels",
                        row.len(),
                        target_labels.len()
                    )));
                }
                check_probability_row(row, &format!("kernel row {i}"))?;
            }
        }
        Ok(FiniteKernel {
            rows,
            source_labels,
            target_labels,
        })
    }

    pub fn identity(labels: Vec<String>) -> Self {
        let n = labels.len();
        let rows = (0..n)
            .map(|i| Some((0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()))
            .collect();
        FiniteKernel {
            rows,
            source_labels: labels.clone(),
            target_labels: labels,
        }
    }

    /// The Dirac kernel of a map `source index -> target index`.
    pub fn deterministic(map: &[usize], source_labels: Vec<String>, target_labels: Vec<String>) -> Result<Self> {
        let m = target_labels.len();
        let rows = map
            .iter()
            .map(|&j| {
                if j >= m {
                    return Err(Error::Dimension(format!("map target {j} out of {m}")));
                }
                let mut r = vec![0.0; m];
                r[j] = 1.0;
                Ok(r)
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteKernel::new(rows, source_labels, target_labels)
    }

    pub fn n_sources(&self) -> usize {
        self.source_labels.len()
    }

    pub fn n_targets(&self) -> usize {
        self.target_labels.len()
    }

    pub fn source_labels(&self) -> &[String] {
        &self.source_labels
    }

    pub fn target_labels(&self) -> &[String] {
        &self.target_labels
    }

    /// Row `i`, or `None` if it is undefined.
    pub fn row(&self, i: usize) -> Option<&[f64]> {
        self.rows.get(i).and_then(|r| r.as_deref())
    }

    pub fn is_defined(&self, i: usize) -> bool {
        self.row(i).is_some()
    }

    pub fn undefined_rows(&self) -> Vec<usize> {
        (0..self.rows.len()).filter(|&i| !self.is_defined(i)).collect()
    }

    pub fn max_abs_diff(&self, other: &FiniteKernel) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, b) in self.rows.iter().zip(&other.rows) {
            match (a, b) {
                (Some(a), Some(b)) => {
                    for (x, y) in a.iter().zip(b) {
                        worst = worst.max((x - y).abs());
                    }
                }
                (None, None) => {}
                _ => return f64::INFINITY,
            }
        }
        worst
    }
}

impl fmt::Display for FiniteKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (label, row) in self.source_labels.iter().zip(&self.rows) {
            write!(f, "{label}:")?;
            match row {
                Some(r) => {
                    for v in r {
                        write!(f, " {v:.6}")?;
                    }
                }
                None => write!(f, " undefined")?,
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// The joint law `Π(ω, θ) = Q(θ)·P(θ, ω)` of a finite Bayesian experiment,
/// stored with one row per observation ω and one column per parameter θ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteJoint {
    table: Vec<Vec<f64>>,
    omega_labels: Vec<String>,
    theta_labels: Vec<String>,
}

impl FiniteJoint {
    pub fn table(&self) -> &[Vec<f64>] {
        &self.table
    }

    pub fn get(&self, omega: usize, theta: usize) -> f64 {
        self.table[omega][theta]
    }

    pub fn omega_labels(&self) -> &[String] {
        &self.omega_labels
    }

    pub fn theta_labels(&self) -> &[String] {
        &self.theta_labels
    }

    /// Marginal over Θ, i.e. the prior predictive `β*_Q`.
    pub fn omega_marginal(&self) -> FiniteDist {
        FiniteDist {
            weights: self.table.iter().map(|r| r.iter().sum()).collect(),
            labels: self.omega_labels.clone(),
        }
    }

    /// Marginal over Ω, which reproduces the prior.
    pub fn theta_marginal(&self) -> FiniteDist {
        let mut w = vec![0.0; self.theta_labels.len()];
        for row in &self.table {
            for (acc, v) in w.iter_mut().zip(row) {
                *acc += v;
            }
        }
        FiniteDist {
            weights: w,
            labels: self.theta_labels.clone(),
        }
    }
}

/// Pushes `q` through `m`: `qᵀ·m`.
pub fn image(q: &FiniteDist, m: &FiniteKernel) -> Result<FiniteDist> {
    if q.labels != m.source_labels {
        return Err(Error::Dimension(format!(
            "distribution over {:?} pushed through kernel from {:?}",
            q.labels, m.source_labels
        )));
    }
    let mut out = vec![0.0; m.n_targets()];
    for (i, &w) in q.weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let row = m
            .row(i)
            .ok_or_else(|| Error::Dimension(format!("positive mass {w} on undefined row {}", m.source_labels[i])))?;
        for (acc, v) in out.iter_mut().zip(row) {
            *acc += w * v;
        }
    }
    FiniteDist::new(out, m.target_labels.clone())
}

/// `m1` followed by `m2`, the matrix product `m1·m2`.
pub fn compose(m1: &FiniteKernel, m2: &FiniteKernel) -> Result<FiniteKernel> {
    if m1.target_labels != m2.source_labels {
        return Err(Error::Dimension(format!(
            "cannot compose kernel into {:?} with kernel from {:?}",
            m1.target_labels, m2.source_labels
        )));
    }
    let rows = m1
        .rows
        .iter()
        .map(|row| match row {
            None => Ok(None),
            Some(r) => {
                let mut out = vec![0.0; m2.n_targets()];
                for (k, &w) in r.iter().enumerate() {
                    if w == 0.0 {
                        continue;
                    }
                    let inner = m2.row(k).ok_or_else(|| {
                        Error::Dimension(format!("positive mass on undefined row {}", m2.source_labels[k]))
                    })?;
                    for (acc, v) in out.iter_mut().zip(inner) {
                        *acc += w * v;
                    }
                }
                Ok(Some(out))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    FiniteKernel::with_undefined(rows, m1.source_labels.clone(), m2.target_labels.clone())
}

/// `Π = P ⊗ Q` for a likelihood kernel `p: Θ ⇝ Ω` and a prior `q` on Θ.
pub fn build_joint(p: &FiniteKernel, q: &FiniteDist) -> Result<FiniteJoint> {
    if q.labels != p.source_labels {
        return Err(Error::Dimension(format!(
            "prior over {:?} for kernel from {:?}",
            q.labels, p.source_labels
        )));
    }
    let mut table = vec![vec![0.0; p.n_sources()]; p.n_targets()];
    for (theta, &w) in q.weights.iter().enumerate() {
        let row = p
            .row(theta)
            .ok_or_else(|| Error::Dimension(format!("likelihood row {} undefined", p.source_labels[theta])))?;
        for (omega, v) in row.iter().enumerate() {
            table[omega][theta] = w * v;
        }
    }
    Ok(FiniteJoint {
        table,
        omega_labels: p.target_labels.clone(),
        theta_labels: p.source_labels.clone(),
    })
}

/// The posterior kernel `P*: Ω ⇝ Θ`. Observations with zero prior
/// predictive mass get an undefined row.
pub fn posterior_kernel(j: &FiniteJoint) -> Result<FiniteKernel> {
    let rows = j
        .table
        .iter()
        .map(|row| {
            let mass: f64 = row.iter().sum();
            if mass > 0.0 {
                Some(row.iter().map(|v| v / mass).collect())
            } else {
                None
            }
        })
        .collect();
    FiniteKernel::with_undefined(rows, j.omega_labels.clone(), j.theta_labels.clone())
}

/// `PP*`: row ω is the posterior predictive distribution given ω.
pub fn predictive_kernel(post: &FiniteKernel, p: &FiniteKernel) -> Result<FiniteKernel> {
    compose(post, p)
}

/// Exact `E_Π[(X(ω) − P_θ(A))²]` for an event `A` (target indices of `p`)
/// and an estimate `x[ω]`. Observations of zero mass do not contribute.
pub fn event_bayes_risk(p: &FiniteKernel, q: &FiniteDist, event: &[usize], x: &[f64]) -> Result<f64> {
    let joint = build_joint(p, q)?;
    if x.len() != p.n_targets() {
        return Err(Error::Dimension(format!(
            "{} estimates for {} observations",
            x.len(),
            p.n_targets()
        )));
    }
    let f_a = event_probabilities(p, event)?;
    let mut risk = 0.0;
    for (omega, row) in joint.table.iter().enumerate() {
        for (theta, &w) in row.iter().enumerate() {
            if w > 0.0 {
                let d = x[omega] - f_a[theta];
                risk += w * d * d;
            }
        }
    }
    Ok(risk)
}

/// `θ ↦ P_θ(A)`.
pub fn event_probabilities(p: &FiniteKernel, event: &[usize]) -> Result<Vec<f64>> {
    if let Some(&bad) = event.iter().find(|&&k| k >= p.n_targets()) {
        return Err(Error::Dimension(format!("event atom {bad} out of {}", p.n_targets())));
    }
    (0..p.n_sources())
        .map(|theta| {
            let row = p
                .row(theta)
                .ok_or_else(|| Error::Dimension(format!("row {theta} undefined")))?;
            Ok(event.iter().map(|&k| row[k]).sum())
        })
        .collect()
}

/// The posterior predictive probability of `A` for every observation;
/// `NaN` where the posterior is undefined.
pub fn predictive_event_probabilities(p: &FiniteKernel, q: &FiniteDist, event: &[usize]) -> Result<Vec<f64>> {
    let post = posterior_kernel(&build_joint(p, q)?)?;
    let pred = predictive_kernel(&post, p)?;
    Ok((0..pred.n_sources())
        .map(|omega| match pred.row(omega) {
            Some(r) => event.iter().map(|&k| r[k]).sum(),
            None => f64::NAN,
        })
        .collect())
}

/// Prior and likelihood kernel read from the plain-text matrix format.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelFile {
    pub prior: FiniteDist,
    pub likelihood: FiniteKernel,
}

/// Parses a matrix file: one row per line, whitespace-separated numbers,
/// `#` starts a comment. The first row is the prior over Θ, the remaining
/// rows are the likelihood kernel `Θ ⇝ Ω`, one row per θ. Optional
/// `@theta l1 l2 ...` and `@omega ...` lines name the states.
pub fn parse_kernel_file(text: &str) -> Result<KernelFile> {
    let mut theta_labels = None;
    let mut omega_labels = None;
    let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('@') {
            let mut parts = rest.split_whitespace();
            let key = parts.next().unwrap_or("");
            let labels: Vec<String> = parts.map(str::to_owned).collect();
            match key {
                "theta" => theta_labels = Some(labels),
                "omega" => omega_labels = Some(labels),
                other => {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("unknown directive @{other}"),
                    })
                }
            }
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("not a number: {tok:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push((line_no, row));
    }
    let Some(((prior_line, prior), kernel_rows)) = rows.split_first() else {
        return Err(Error::Parse {
            line: 0,
            msg: "empty matrix file".into(),
        });
    };
    let theta_n = prior.len();
    if kernel_rows.len() != theta_n {
        return Err(Error::Parse {
            line: *prior_line,
            msg: format!(
                "prior has {theta_n} entries but {} kernel rows follow",
                kernel_rows.len()
            ),
        });
    }
    let omega_n = kernel_rows[0].1.len();
    for (line, r) in kernel_rows {
        if r.len() != omega_n {
            return Err(Error::Parse {
                line: *line,
                msg: format!("expected {omega_n} columns, found {}", r.len()),
            });
        }
        check_probability_row(r, "kernel row").map_err(|e| Error::Parse {
            line: *line,
            msg: e.to_string(),
        })?;
    }
    check_probability_row(prior, "prior").map_err(|e| Error::Parse {
        line: *prior_line,
        msg: e.to_string(),
    })?;
    let theta_labels = theta_labels.unwrap_or_else(|| default_labels("theta", theta_n));
    let omega_labels = omega_labels.unwrap_or_else(|| default_labels("omega", omega_n));
    let prior = FiniteDist::new(prior.clone(), theta_labels.clone()).map_err(|e| Error::Parse {
        line: *prior_line,
        msg: e.to_string(),
    })?;
    let likelihood = FiniteKernel::new(
        kernel_rows.iter().map(|(_, r)| r.clone()).collect(),
        theta_labels,
        omega_labels,
    )
    .map_err(|e| Error::Parse {
        line: kernel_rows[0].0,
        msg: e.to_string(),
    })?;
    Ok(KernelFile { prior, likelihood })
}

fn default_labels(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn check_probability_row(row: &[f64], what: &str) -> Result<()> {
    if row.is_empty() {
        return Err(Error::Dimension(format!("{what} is empty")));
    }
    if let Some(bad) = row.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::InvalidDistribution(format!("{what} has entry {bad}")));
    }
    let s: f64 = row.iter().sum();
    if (s - 1.0).abs() > STOCHASTIC_TOL {
        return Err(Error::InvalidDistribution(format!("{what} sums to {s}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn two_by_two() -> (FiniteDist, FiniteKernel) {
        let q = FiniteDist::new(vec![0.5, 0.5], labels(&["t1", "t2"])).unwrap();
        let p = FiniteKernel::new(
            vec![vec![0.9, 0.1], vec![0.2, 0.8]],
            labels(&["t1", "t2"]),
            labels(&["a", "b"]),
        )
        .unwrap();
        (q, p)
    }

    #[test]
    fn image_examples() {
        let (q, p) = two_by_two();
        let beta = image(&q, &p).unwrap();
        assert!((beta.weights()[0] - 0.55).abs() < 1e-15);
        assert!((beta.weights()[1] - 0.45).abs() < 1e-15);
        let id = FiniteKernel::identity(q.labels().to_vec());
        assert_eq!(image(&q, &id).unwrap(), q);
        let dirac = FiniteDist::point_mass(0, q.labels().to_vec()).unwrap();
        assert_eq!(image(&dirac, &p).unwrap().weights(), p.row(0).unwrap());
    }

    #[test]
    fn image_dimension_mismatch() {
        let (_, p) = two_by_two();
        let q3 = FiniteDist::unlabeled(vec![0.2, 0.3, 0.5], "t").unwrap();
        assert!(matches!(image(&q3, &p), Err(Error::Dimension(_))));
        assert!(matches!(compose(&p, &p), Err(Error::Dimension(_))));
    }

    #[test]
    fn compose_examples() {
        let (q, p) = two_by_two();
        let id = FiniteKernel::identity(p.target_labels().to_vec());
        assert_eq!(compose(&p, &id).unwrap(), p);

        let l = labels(&["x", "y", "z"]);
        let f = FiniteKernel::deterministic(&[1, 2, 0], l.clone(), l.clone()).unwrap();
        let g = FiniteKernel::deterministic(&[2, 2, 1], l.clone(), l.clone()).unwrap();
        // g ∘ f : x -> y -> z, y -> z -> y, z -> x -> z
        let gf = FiniteKernel::deterministic(&[2, 1, 2], l.clone(), l).unwrap();
        assert_eq!(compose(&f, &g).unwrap(), gf);

        let post = posterior_kernel(&build_joint(&p, &q).unwrap()).unwrap();
        let pp = compose(&p, &post).unwrap();
        let row = pp.row(0).unwrap();
        // 0.9·(9/11, 2/11) + 0.1·(1/9, 8/9)
        let expected = [0.9 * 9.0 / 11.0 + 0.1 / 9.0, 0.9 * 2.0 / 11.0 + 0.1 * 8.0 / 9.0];
        assert!((row[0] - expected[0]).abs() < 1e-15);
        assert!((row[0] - 0.747_475).abs() < 1e-6);
        assert!((row[1] - 0.252_525).abs() < 1e-6);
    }

    #[test]
    fn joint_examples() {
        let (q, p) = two_by_two();
        let j = build_joint(&p, &q).unwrap();
        let want = [[0.45, 0.10], [0.05, 0.40]];
        for (w, row) in want.iter().enumerate() {
            for (t, v) in row.iter().enumerate() {
                assert!((j.get(w, t) - v).abs() < 1e-15);
            }
        }
        assert!(j.theta_marginal().max_abs_diff(&q) < 1e-15);
        assert!(j.omega_marginal().max_abs_diff(&image(&q, &p).unwrap()) < 1e-15);

        let dirac = FiniteDist::point_mass(0, q.labels().to_vec()).unwrap();
        let jd = build_joint(&p, &dirac).unwrap();
        assert_eq!(jd.get(0, 0), 0.9);
        assert_eq!(jd.get(1, 0), 0.1);
        assert_eq!(jd.get(0, 1), 0.0);
    }

    #[test]
    fn posterior_examples() {
        let (q, p) = two_by_two();
        let post = posterior_kernel(&build_joint(&p, &q).unwrap()).unwrap();
        let a = post.row(0).unwrap();
        assert!((a[0] - 9.0 / 11.0).abs() < 1e-15 && (a[1] - 2.0 / 11.0).abs() < 1e-15);

        let flat = FiniteKernel::new(
            vec![vec![0.3, 0.7], vec![0.3, 0.7]],
            q.labels().to_vec(),
            labels(&["a", "b"]),
        )
        .unwrap();
        let q2 = FiniteDist::new(vec![0.2, 0.8], q.labels().to_vec()).unwrap();
        let post2 = posterior_kernel(&build_joint(&flat, &q2).unwrap()).unwrap();
        for w in 0..2 {
            assert!((post2.row(w).unwrap()[0] - 0.2).abs() < 1e-15);
        }

        let dirac = FiniteDist::point_mass(1, q.labels().to_vec()).unwrap();
        let post3 = posterior_kernel(&build_joint(&p, &dirac).unwrap()).unwrap();
        assert_eq!(post3.row(0).unwrap(), &[0.0, 1.0]);
    }

    #[test]
    fn zero_mass_observation_is_undefined() {
        let q = FiniteDist::unlabeled(vec![0.5, 0.5], "t").unwrap();
        let p = FiniteKernel::unlabeled(vec![vec![0.5, 0.5, 0.0], vec![1.0, 0.0, 0.0]], "t", "w").unwrap();
        let j = build_joint(&p, &q).unwrap();
        let post = posterior_kernel(&j).unwrap();
        assert_eq!(post.undefined_rows(), vec![2]);
        // β*_Q puts no mass on the undefined row, so the round trip still works.
        let back = image(&image(&q, &p).unwrap(), &post).unwrap();
        assert!(back.max_abs_diff(&q) < 1e-15);
        let pred = predictive_kernel(&post, &p).unwrap();
        assert!(!pred.is_defined(2));
        // A point mass on the undefined observation cannot be pushed through.
        let bad = FiniteDist::point_mass(2, p.target_labels().to_vec()).unwrap();
        assert!(image(&bad, &post).is_err());
    }

    #[test]
    fn predictive_examples() {
        let (q, p) = two_by_two();
        let post = posterior_kernel(&build_joint(&p, &q).unwrap()).unwrap();
        let pred = predictive_kernel(&post, &p).unwrap();
        let a = pred.row(0).unwrap();
        assert!((a[0] - 17.0 / 22.0).abs() < 1e-15);
        assert!((a[1] - 5.0 / 22.0).abs() < 1e-15);

        let dirac = FiniteDist::point_mass(0, q.labels().to_vec()).unwrap();
        let post_d = posterior_kernel(&build_joint(&p, &dirac).unwrap()).unwrap();
        let pred_d = predictive_kernel(&post_d, &p).unwrap();
        assert_eq!(pred_d.row(0).unwrap(), p.row(0).unwrap());

        let back = image(&q, &compose(&p, &post).unwrap()).unwrap();
        assert!(back.max_abs_diff(&q) < 1e-12);
    }

    #[test]
    fn exact_event_risk_of_two_by_two() {
        let (q, p) = two_by_two();
        let x = predictive_event_probabilities(&p, &q, &[0]).unwrap();
        let r = event_bayes_risk(&p, &q, &[0], &x).unwrap();
        // 0.55·Var(f_A | a) + 0.45·Var(f_A | b), f_A = (0.9, 0.2)
        let var = |w: [f64; 2]| {
            let m = w[0] * 0.9 + w[1] * 0.2;
            w[0] * 0.81 + w[1] * 0.04 - m * m
        };
        let oracle = 0.55 * var([9.0 / 11.0, 2.0 / 11.0]) + 0.45 * var([1.0 / 9.0, 8.0 / 9.0]);
        assert!((r - oracle).abs() < 1e-15);
        assert!((r - 0.061_869).abs() < 1e-6);
    }

    #[test]
    fn parses_matrix_file() {
        let text = "# prior\n0.5 0.5\n@theta t1 t2\n@omega a b\n0.9 0.1  # row t1\n0.2 0.8\n";
        let k = parse_kernel_file(text).unwrap();
        assert_eq!(k.likelihood.target_labels(), &["a", "b"]);
        assert_eq!(k.prior.weights(), &[0.5, 0.5]);
        let bad = parse_kernel_file("0.5 0.5\n0.9 x\n0.2 0.8\n").unwrap_err();
        assert!(matches!(bad, Error::Parse { line: 2, .. }), "{bad}");
        let ragged = parse_kernel_file("1\n0.5 0.5 0\n").unwrap();
        assert_eq!(ragged.likelihood.n_targets(), 3);
        assert!(parse_kernel_file("0.5 0.5\n0.9 0.1\n").is_err());
        assert!(parse_kernel_file("0.5 0.5\n0.9 0.2\n0.2 0.8\n").is_err());
    }
}
