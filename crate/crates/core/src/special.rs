//! Special functions.

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

pub fn std_normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Standard normal quantile by bisection, then two Newton steps.
pub fn std_normal_quantile(u: f64) -> f64 {
    if u <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if u >= 1.0 {
        return f64::INFINITY;
    }
    let (mut lo, mut hi) = (-40.0f64, 40.0f64);
    for _ in 0..64 {
        let m = 0.5 * (lo + hi);
        if std_normal_cdf(m) < u {
            lo = m;
        } else {
            hi = m;
        }
    }
    let mut z = 0.5 * (lo + hi);
    for _ in 0..2 {
        let pdf = (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt();
        if pdf > 0.0 {
            z -= (std_normal_cdf(z) - u) / pdf;
        }
    }
    z
}
