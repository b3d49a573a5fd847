//! Stationarity equations for the overlap half-width s and the closed forms
//! for r and the minimum D1+D2.

use crate::asymptotics;
use crate::codec::{build_profile, Manifold, ProblemSpec, Regime};
use crate::error::{domain, Result};
use crate::numerics::bracket_root;
use crate::oracle;

/// Optimum for a problem, with the D1/D2 split taken from quadrature.
///
/// `d_total` is the closed-form minimum; `d1 + d2` agrees with it to the
/// quadrature tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Solution {
    pub spec: ProblemSpec,
    pub regime: Regime,
    pub s: f64,
    pub r: f64,
    pub d1: f64,
    pub d2: f64,
    pub d_total: f64,
}

impl Solution {
    /// s in units of the half spacing, π/M_eff (2π/M for the factorial torus).
    pub fn s_normalized(&self) -> f64 {
        self.s / self.spec.half()
    }
}

/// Closed-form optimum without the quadrature split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum {
    pub regime: Regime,
    pub s: f64,
    pub r: f64,
    pub d_total: f64,
}

fn factorial(spec: &ProblemSpec) -> bool {
    spec.manifold() == Manifold::TorusFactorial
}

fn require_n_above_one(spec: &ProblemSpec) -> Result<()> {
    if spec.n() > 1.0 {
        Ok(())
    } else {
        domain(format!(
            "n > 1 required (got n = {}); use the n = 1 limit instead",
            spec.n()
        ))
    }
}

fn raw_residual(fac: bool, h: f64, n: f64, s: f64, regime: Regime) -> f64 {
    match regime {
        Regime::TwoOverlap => {
            let k = if fac { (n - 1.0) / (n + 1.0) } else { (n - 1.0) / n };
            s.sin() / h.sin() - k / h * h.sin() * (s.cos() + s * s.sin())
        }
        Regime::ThreeOverlap => {
            let k = if fac { (n - 1.0) / (2.0 * n) } else { (n - 1.0) / n };
            let t = 2.0 * h - s;
            t.cos() / (n * h.cos()) - k / h * h.cos() * (t.sin() - t * t.cos())
        }
    }
}

/// Left-hand side of the s-equation for `regime`.
pub fn residual_s(spec: &ProblemSpec, s: f64, regime: Regime) -> Result<f64> {
    require_n_above_one(spec)?;
    let h = spec.half();
    let (lo, hi) = regime.interval(h);
    if !(s >= lo && s <= hi) {
        return domain(format!("s = {s} outside [{lo}, {hi}] for {regime:?}"));
    }
    Ok(raw_residual(factorial(spec), h, spec.n(), s, regime))
}

/// Root of the s-equation. The regime is fixed by the sign of the
/// two-overlap residual at s = Δ/2.
pub fn solve_s(spec: &ProblemSpec) -> Result<(f64, Regime)> {
    require_n_above_one(spec)?;
    let (fac, h, n) = (factorial(spec), spec.half(), spec.n());
    let regime = if raw_residual(fac, h, n, h, Regime::TwoOverlap) >= 0.0 {
        Regime::TwoOverlap
    } else {
        Regime::ThreeOverlap
    };
    let (lo, hi) = regime.interval(h);
    let s = bracket_root(|s| raw_residual(fac, h, n, s, regime), lo, hi)?;
    Ok((s, regime))
}

/// Optimal reference-vector length at overlap `s`.
pub fn optimal_r(spec: &ProblemSpec, s: f64, regime: Regime) -> Result<f64> {
    require_n_above_one(spec)?;
    let (h, n) = (spec.half(), spec.n());
    let k = if factorial(spec) { 2.0 * n / (n - 1.0) } else { n / (n - 1.0) };
    Ok(match regime {
        Regime::TwoOverlap => k * s.sin() / h.sin(),
        Regime::ThreeOverlap => k * (2.0 * h - s).cos() / h.cos(),
    })
}

/// Minimum D1+D2 from the closed forms, valid only at the optimal `s`.
/// At n = 1 the dedicated limit is returned and `s` is ignored.
pub fn objective_closed_form(spec: &ProblemSpec, s: f64, regime: Regime) -> f64 {
    let (h, n) = (spec.half(), spec.n());
    if n == 1.0 {
        return asymptotics::limit_n1(spec).d_total;
    }
    let q = n / (n - 1.0);
    let sec2 = 1.0 / (h.cos() * h.cos());
    let circle = |regime| match regime {
        Regime::TwoOverlap => 2.0 - q / (2.0 * h) * (2.0 * s + (2.0 * s).sin()),
        Regime::ThreeOverlap => {
            let den = 2.0 * (n - 1.0) * (n - 1.0);
            n * ((n - 1.0) * (2.0 * (n - 2.0) / n - s / h) - sec2) / den
                - n * ((n - 1.0) * (2.0 - s / h) + sec2) / den * (4.0 * h - 2.0 * s).cos()
        }
    };
    match spec.manifold() {
        Manifold::Circle => circle(regime),
        Manifold::TorusJoint => 2.0 * circle(regime),
        Manifold::TorusFactorial => match regime {
            Regime::TwoOverlap => 4.0 - q / h * (2.0 * s + (2.0 * s).sin()),
            Regime::ThreeOverlap => {
                let den = (n - 1.0) * (n - 1.0);
                n * ((n - 1.0) * (2.0 * (n - 2.0) / n - s / h) - 2.0 * sec2) / den
                    - n * ((n - 1.0) * (2.0 - s / h) + 2.0 * sec2) / den
                        * (4.0 * h - 2.0 * s).cos()
            }
        },
    }
}

pub fn analytic_optimum(spec: &ProblemSpec) -> Result<Optimum> {
    if spec.n() == 1.0 {
        let lim = asymptotics::limit_n1(spec);
        return Ok(Optimum {
            regime: Regime::TwoOverlap,
            s: 0.0,
            r: lim.r,
            d_total: lim.d_total,
        });
    }
    let (s, regime) = solve_s(spec)?;
    Ok(Optimum {
        regime,
        s,
        r: optimal_r(spec, s, regime)?,
        d_total: objective_closed_form(spec, s, regime),
    })
}

pub fn solve(spec: &ProblemSpec) -> Result<Solution> {
    solve_with_tol(spec, oracle::DEFAULT_TOL)
}

/// As [`solve`], with an explicit tolerance for the D1/D2 quadrature.
pub fn solve_with_tol(spec: &ProblemSpec, tol: f64) -> Result<Solution> {
    let opt = analytic_optimum(spec)?;
    let profile = build_profile(spec, opt.s, opt.regime)?;
    let q = oracle::quadrature_objective(&profile, opt.r, spec, tol)?;
    Ok(Solution {
        spec: *spec,
        regime: opt.regime,
        s: opt.s,
        r: opt.r,
        d1: q.d1,
        d2: q.d2,
        d_total: opt.d_total,
    })
}
