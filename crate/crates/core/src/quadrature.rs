//! Composite Gauss–Legendre quadrature with panel doubling.
//!
//! Integrals are split at caller-supplied breakpoints; every piece is then
//! integrated with a fixed-order rule on `k, 2k, 4k, ...` equal panels until
//! two successive estimates agree to the requested tolerance. Long or
//! heavy-tailed ranges are handled by geometric breakpoints rather than by
//! variable transforms, and kinks of `|f - g|` integrands are located up front
//! so every piece is smooth.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Nodes and weights of an `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes the rule by Newton iteration on the Legendre polynomial.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess for the i-th largest root.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            weights[i] = w;
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights mapped affinely onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }

    /// Single-panel estimate of `∫_a^b f`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> Result<f64> {
        let mut sum = 0.0;
        for (x, w) in self.mapped(a, b) {
            let v = f(x);
            if !v.is_finite() {
                return Err(Error::NonFinite { at: x, value: v });
            }
            sum += w * v;
        }
        Ok(sum)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// The 16-point rule used for every composite panel.
pub fn gl16() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(16))
}

/// Panel-doubling controls.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    /// Absolute difference between successive estimates that ends doubling.
    pub tol: f64,
    /// Panels used for the first estimate of every piece.
    pub initial_panels: usize,
    pub max_doublings: u32,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature {
            tol: 1e-10,
            initial_panels: 1,
            max_doublings: 14,
        }
    }
}

impl Quadrature {
    pub fn with_panels(initial_panels: usize) -> Self {
        Quadrature {
            initial_panels: initial_panels.max(1),
            ..Quadrature::default()
        }
    }

    fn composite<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, panels: usize, f: &mut F) -> Result<f64> {
        let rule = gl16();
        let h = (b - a) / panels as f64;
        let mut sum = 0.0;
        for p in 0..panels {
            let lo = a + h * p as f64;
            let hi = if p + 1 == panels { b } else { lo + h };
            sum += rule.integrate(lo, hi, &mut *f)?;
        }
        Ok(sum)
    }

    /// `∫_a^b f` on one smooth piece, doubling panels until convergence.
    pub fn integrate_piece<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, f: &mut F) -> Result<f64> {
        if b <= a {
            return Ok(0.0);
        }
        let mut panels = self.initial_panels.max(1);
        let mut prev = self.composite(a, b, panels, f)?;
        let mut diff = f64::INFINITY;
        for _ in 0..self.max_doublings {
            panels *= 2;
            let next = self.composite(a, b, panels, f)?;
            diff = (next - prev).abs();
            if diff < self.tol {
                return Ok(next);
            }
            prev = next;
        }
        Err(Error::Quadrature { lo: a, hi: b, diff })
    }

    /// `∫ f` over consecutive pieces delimited by the sorted `breaks`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, breaks: &[f64], mut f: F) -> Result<f64> {
        let mut total = 0.0;
        for w in breaks.windows(2) {
            total += self.integrate_piece(w[0], w[1], &mut f)?;
        }
        Ok(total)
    }
}

/// Breakpoints on `[lo, hi]` that grow geometrically away from `center`
/// in steps of `scale * 2^j`. Keeps each piece within a bounded ratio of its
/// distance from the bulk, so power-law tails need only a few panels each.
pub fn geometric_breaks(lo: f64, hi: f64, center: f64, scale: f64) -> Vec<f64> {
    assert!(lo < hi && lo.is_finite() && hi.is_finite());
    let c = center.clamp(lo, hi);
    let s = if scale.is_finite() && scale > 0.0 {
        scale
    } else {
        (hi - lo) / 8.0
    };
    let mut pts = vec![lo, c, hi];
    let mut step = s;
    loop {
        let mut any = false;
        for x in [c - step, c + step] {
            if x > lo && x < hi {
                pts.push(x);
                any = true;
            }
        }
        if !any {
            break;
        }
        step *= 2.0;
    }
    // Resolve the bulk: a few equal pieces inside ±scale.
    for k in 1..4 {
        let d = s * k as f64 / 4.0;
        for x in [c - d, c + d] {
            if x > lo && x < hi {
                pts.push(x);
            }
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * b.abs().max(1e-300));
    pts
}

/// Inserts the sign changes of `g` into `breaks`. Each piece is scanned at
/// `scan` interior points; bracketed roots are refined by bisection.
pub fn split_at_roots<G: FnMut(f64) -> f64>(breaks: &[f64], scan: usize, mut g: G) -> Vec<f64> {
    let mut out = Vec::with_capacity(breaks.len() * 2);
    let Some(&first) = breaks.first() else {
        return out;
    };
    out.push(first);
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        let h = (b - a) / (scan + 1) as f64;
        let mut x0 = a;
        let mut g0 = g(a);
        for i in 1..=scan + 1 {
            let x1 = if i == scan + 1 { b } else { a + h * i as f64 };
            let g1 = g(x1);
            if g0.is_finite() && g1.is_finite() && g0 * g1 < 0.0 {
                out.push(bisect(&mut g, x0, x1, g0));
            }
            x0 = x1;
            if g1 != 0.0 || i == scan + 1 {
                g0 = g1;
            }
        }
        out.push(b);
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

fn bisect<G: FnMut(f64) -> f64>(g: &mut G, mut a: f64, mut b: f64, mut ga: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let gm = g(m);
        if gm == 0.0 {
            return m;
        }
        if ga * gm < 0.0 {
            b = m;
        } else {
            a = m;
            ga = gm;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(5);
        // degree 9 is the exactness bound for 5 nodes
        let v = rule.integrate(-1.0, 2.0, |x| x.powi(9) + 3.0 * x * x).unwrap();
        let exact = (2f64.powi(10) - 1.0) / 10.0 + (8.0 + 1.0);
        assert!((v - exact).abs() < 1e-10, "{v} vs {exact}");
        let w: f64 = gl16().weights().iter().sum();
        assert!((w - 2.0).abs() < 1e-14);
    }

    #[test]
    fn high_order_rule_is_accurate() {
        let rule = GaussLegendre::new(200);
        let v = rule.integrate(0.0, std::f64::consts::PI, f64::sin).unwrap();
        assert!((v - 2.0).abs() < 1e-13);
        assert!(rule.nodes().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn panel_doubling_converges_on_gaussian() {
        let q = Quadrature::default();
        let breaks = geometric_breaks(-40.0, 40.0, 0.0, 1.0);
        let v = q
            .integrate(&breaks, |x| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt())
            .unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn heavy_tail_over_long_range() {
        // ∫_0^T 1/(1+x)^2 = 1 - 1/(1+T)
        let t = 1e12;
        let breaks = geometric_breaks(0.0, t, 0.0, 1.0);
        let v = Quadrature::default()
            .integrate(&breaks, |x| (1.0 + x).powi(-2))
            .unwrap();
        assert!((v - (1.0 - 1.0 / (1.0 + t))).abs() < 1e-10);
    }

    #[test]
    fn roots_are_located() {
        let b = split_at_roots(&[0.0, 10.0], 16, |x| (x - 1.234_567) * (x - 7.5));
        assert_eq!(b.len(), 4);
        assert!((b[1] - 1.234_567).abs() < 1e-12);
        assert!((b[2] - 7.5).abs() < 1e-12);
    }

    #[test]
    fn non_finite_integrand_is_an_error() {
        let r = Quadrature::default().integrate(&[0.0, 1.0], |_| f64::NAN);
        assert!(matches!(r, Err(Error::NonFinite { .. })));
    }
}
