//! Hinge activations `max(0, w·x − a)` and the posterior they approximate in
//! the two-overlap regime.

use std::f64::consts::PI;

use crate::codec::{build_profile, posterior_eval, wrap_angle, Manifold, ProblemSpec, Regime};
use crate::error::{domain, Result};
use crate::numerics::golden_min;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HingeActivation {
    pub w: [f64; 2],
    pub a: f64,
}

impl HingeActivation {
    pub fn new(y: i64, s: f64, m: f64) -> Self {
        let h = PI / m;
        let phi = 2.0 * h * y as f64;
        HingeActivation {
            w: [phi.cos(), phi.sin()],
            a: threshold(s, m),
        }
    }

    pub fn eval(&self, theta: f64) -> f64 {
        (self.w[0] * theta.cos() + self.w[1] * theta.sin() - self.a).max(0.0)
    }
}

/// `a = cos(π/M) − sin(π/M)·sin s`.
pub fn threshold(s: f64, m: f64) -> f64 {
    let h = PI / m;
    h.cos() - h.sin() * s.sin()
}

fn check(s: f64, m: f64) -> Result<()> {
    if !(m >= 4.0 && m.is_finite()) {
        return domain(format!("M ≥ 4 required (got M = {m})"));
    }
    if !(s > 0.0 && s <= PI / m) {
        return domain(format!("s in (0, π/M] required (got s = {s}, π/M = {})", PI / m));
    }
    Ok(())
}

pub fn activation_eval(y: i64, theta: f64, s: f64, m: f64) -> Result<f64> {
    check(s, m)?;
    Ok(HingeActivation::new(y, s, m).eval(theta))
}

/// Normalised hinge ratios `(y, Q_y/ΣQ)` for every neuron with `Q_y > 0`.
/// Indices follow the same convention as `codec::posterior_all`.
pub fn approx_posterior_all(theta: f64, s: f64, m: f64) -> Result<Vec<(i64, f64)>> {
    check(s, m)?;
    let d = 2.0 * PI / m;
    let t = wrap_angle(theta);
    let k0 = (t / d).round() as i64;
    let ring = (m.round() == m).then_some(m as i64);
    let q: Vec<(i64, f64)> = (k0 - 2..=k0 + 2)
        .map(|k| (ring.map_or(k, |r| k.rem_euclid(r)), HingeActivation::new(k, s, m).eval(t)))
        .filter(|&(_, v)| v > 0.0)
        .collect();
    let total: f64 = q.iter().map(|&(_, v)| v).sum();
    assert!(total > 0.0, "no active neuron at θ = {theta}");
    Ok(q.into_iter().map(|(y, v)| (y, v / total)).collect())
}

/// Hinge-ratio approximation to neuron 0's posterior at θ.
pub fn approx_posterior(theta: f64, s: f64, m: f64) -> Result<f64> {
    let all = approx_posterior_all(theta, s, m)?;
    Ok(all.iter().find(|&&(y, _)| y == 0).map_or(0.0, |&(_, p)| p))
}

/// Third-order coefficients of p about θ = π/M: `(exact, hinge)`.
pub fn cubic_coefficients(s: f64, m: f64) -> (f64, f64) {
    let h = PI / m;
    let exact = 1.0 / (12.0 * s.sin());
    let approx = (1.0 / s.sin() - 3.0 / (h.tan() * s.sin().powi(2))) / 12.0;
    (exact, approx)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxError {
    pub sup_error: f64,
    /// θ where the sup is attained.
    pub theta_at_sup: f64,
    pub exact_cubic: f64,
    pub approx_cubic: f64,
}

/// `|p_exact − p_approx|` for neuron 0 at θ.
pub fn pointwise_error(theta: f64, s: f64, m: f64) -> Result<f64> {
    let spec = ProblemSpec::new(Manifold::Circle, m, 2.0)?;
    let profile = build_profile(&spec, s, Regime::TwoOverlap)?;
    Ok((posterior_eval(&profile, theta) - approx_posterior(theta, s, m)?).abs())
}

/// Sup of the error over `|θ − π/M| ≤ half_width`: dense scan, then a
/// golden-section refinement around the largest sample.
pub fn sup_error_within(s: f64, m: f64, half_width: f64) -> Result<(f64, f64)> {
    check(s, m)?;
    let spec = ProblemSpec::new(Manifold::Circle, m, 2.0)?;
    let profile = build_profile(&spec, s, Regime::TwoOverlap)?;
    let err = |t: f64| -> f64 {
        let approx = approx_posterior(t, s, m).expect("checked inputs");
        (posterior_eval(&profile, t) - approx).abs()
    };
    let h = PI / m;
    let (lo, hi) = (h - half_width, h + half_width);
    const N: usize = 10_000;
    let step = (hi - lo) / N as f64;
    let (mut best_t, mut best) = (lo, err(lo));
    for i in 1..=N {
        let t = lo + step * i as f64;
        let e = err(t);
        if e > best {
            best = e;
            best_t = t;
        }
    }
    let a = (best_t - step).max(lo);
    let b = (best_t + step).min(hi);
    let (t, neg) = golden_min(|t| -err(t), a, b, 1e-13);
    if -neg > best {
        best = -neg;
        best_t = t;
    }
    Ok((best, best_t))
}

/// Error summary over the exact transition interval `|θ − π/M| ≤ s`.
pub fn approx_error(s: f64, m: f64) -> Result<ApproxError> {
    let (sup_error, theta_at_sup) = sup_error_within(s, m, s)?;
    let (exact_cubic, approx_cubic) = cubic_coefficients(s, m);
    Ok(ApproxError {
        sup_error,
        theta_at_sup,
        exact_cubic,
        approx_cubic,
    })
}

/// Least-squares slope of log error against log |θ − π/M| over `k`
/// offsets spaced geometrically in `[lo, hi]` on both sides of π/M.
pub fn discrepancy_exponent(s: f64, m: f64, lo: f64, hi: f64, k: usize) -> Result<f64> {
    check(s, m)?;
    let h = PI / m;
    let mut pts = Vec::with_capacity(2 * k);
    for i in 0..k {
        let delta = lo * (hi / lo).powf(i as f64 / (k - 1) as f64);
        for t in [h - delta, h + delta] {
            let e = pointwise_error(t, s, m)?;
            if e > 0.0 {
                pts.push((delta.ln(), e.ln()));
            }
        }
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}
