//! Series expansions and special limits of the optimum, the two/three overlap
//! boundary, and the large-n joint/factorial crossing.

use std::f64::consts::PI;

use crate::codec::{Manifold, ProblemSpec};
use crate::error::Result;
use crate::numerics::bracket_root;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Validity {
    LargeM,
    NEqualsOne,
    LargeN,
    LinearManifold,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticTriple {
    pub s: f64,
    pub r: f64,
    pub d_total: f64,
    pub validity: Validity,
}

fn doubled(t: AsymptoticTriple) -> AsymptoticTriple {
    AsymptoticTriple { d_total: 2.0 * t.d_total, ..t }
}

/// Two-term series in inverse powers of M.
pub fn expand_large_m(spec: &ProblemSpec) -> AsymptoticTriple {
    let n = spec.n();
    let circle = |h: f64| AsymptoticTriple {
        s: (n - 1.0) / n * h + (n - 1.0) * (n * n - 4.0 * n + 2.0) / (3.0 * n.powi(3)) * h.powi(3),
        r: 1.0 + (2.0 * n * n - 6.0 * n + 3.0) / (6.0 * n * n) * h * h,
        d_total: 2.0 * (2.0 * n - 1.0) / (3.0 * n * n) * h * h,
        validity: Validity::LargeM,
    };
    match spec.manifold() {
        Manifold::Circle => circle(spec.half()),
        Manifold::TorusJoint => doubled(circle(spec.half())),
        Manifold::TorusFactorial => {
            let h = spec.half();
            let m = spec.m();
            let p = n + 1.0;
            let pm2 = PI * PI / (m * m);
            AsymptoticTriple {
                s: (n - 1.0) / p * h + (n - 1.0) * (n * n - 6.0 * n + 1.0) / (3.0 * p.powi(3)) * h.powi(3),
                r: 2.0 * n / p + 8.0 * n * (n * n - 4.0 * n + 1.0) / (3.0 * p.powi(3)) * pm2,
                d_total: 4.0 / p + 64.0 * n * n / (3.0 * p.powi(3)) * pm2,
                validity: Validity::LargeM,
            }
        }
    }
}

/// Exact single-event limit: no overlap, r at the centroid of one cell's arc.
pub fn limit_n1(spec: &ProblemSpec) -> AsymptoticTriple {
    let h = spec.half();
    let r = h.sin() / h;
    let d_total = match spec.manifold() {
        Manifold::Circle => 2.0 - 2.0 * r * r,
        Manifold::TorusJoint => 2.0 * (2.0 - 2.0 * r * r),
        Manifold::TorusFactorial => 4.0 - 2.0 * r * r,
    };
    AsymptoticTriple {
        s: 0.0,
        r,
        d_total,
        validity: Validity::NEqualsOne,
    }
}

/// Leading behaviour of s just above n = 1.
pub fn small_overlap_s(spec: &ProblemSpec) -> f64 {
    let (h, n) = (spec.half(), spec.n());
    match spec.manifold() {
        Manifold::Circle | Manifold::TorusJoint => (n - 1.0) / h * h.sin().powi(2),
        Manifold::TorusFactorial => 0.5 * (n - 1.0) / h * h.sin().powi(2),
    }
}

/// Cube-root expansion about the four-overlap edge s = Δ.
pub fn expand_large_n(spec: &ProblemSpec) -> AsymptoticTriple {
    let (h, n) = (spec.half(), spec.n());
    let cos2 = h.cos().powi(2);
    match spec.manifold() {
        Manifold::Circle | Manifold::TorusJoint => {
            let c = 3.0 * h / (n * cos2);
            let t = AsymptoticTriple {
                s: 2.0 * h - c.cbrt(),
                r: 0.5 / h.cos() * (2.0 - c.powf(2.0 / 3.0)),
                d_total: 2.0 / n * h.tan().powi(2),
                validity: Validity::LargeN,
            };
            if spec.manifold() == Manifold::TorusJoint {
                doubled(t)
            } else {
                t
            }
        }
        Manifold::TorusFactorial => {
            let c = 6.0 * h / (n * cos2);
            AsymptoticTriple {
                s: 2.0 * h - c.cbrt(),
                r: (2.0 - c.powf(2.0 / 3.0)) / h.cos(),
                d_total: 4.0 / n * (2.0 / cos2 - 1.0),
                validity: Validity::LargeN,
            }
        }
    }
}

/// Optimum for a straight line with unit neuron spacing: `(s, D1+D2)`.
pub fn linear_manifold_limit(n: f64) -> (f64, f64) {
    ((n - 1.0) / (2.0 * n), (2.0 * n - 1.0) / (6.0 * n * n))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub m_eff: f64,
    /// n at which the optimum sits exactly at s = Δ/2.
    pub n_exact: f64,
    /// Quadratic large-M asymptote of the same curve.
    pub n_asymptote: f64,
}

/// n on the two/three overlap boundary for a given per-circle count.
///
/// At s = Δ/2 the s-equation is linear in the n-dependent factor, so the
/// boundary is explicit.
pub fn boundary_two_three(m_eff: f64, manifold: Manifold) -> Result<BoundaryPoint> {
    let m = match manifold {
        Manifold::Circle => m_eff,
        Manifold::TorusJoint => m_eff * m_eff,
        Manifold::TorusFactorial => 2.0 * m_eff,
    };
    let spec = ProblemSpec::new(manifold, m, 2.0)?;
    let h = spec.half();
    let k = h.sin() / h * (h.cos() + h * h.sin());
    let (n_exact, n_asymptote) = match manifold {
        Manifold::Circle | Manifold::TorusJoint => (1.0 / (1.0 - 1.0 / k), 3.0 * m_eff * m_eff / (PI * PI)),
        Manifold::TorusFactorial => ((k + 1.0) / (k - 1.0), 1.5 * m * m / (PI * PI)),
    };
    Ok(BoundaryPoint {
        m_eff,
        n_exact,
        n_asymptote,
    })
}

fn crossing_residual(m: f64) -> f64 {
    (PI / m.sqrt()).tan().powi(2) - (2.0 / (2.0 * PI / m).cos().powi(2) - 1.0)
}

/// M where the large-n joint and factorial distortions coincide.
pub fn asymptotic_crossing_m() -> f64 {
    // tan²(π/√M) diverges at M = 4, so bracket from just above it.
    bracket_root(crossing_residual, 5.0, 100.0).expect("crossing bracket has a sign change")
}

pub fn asymptotic_crossing_residual(m: f64) -> f64 {
    crossing_residual(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_limit_values() {
        assert_eq!(linear_manifold_limit(1.0), (0.0, 1.0 / 6.0));
        assert_eq!(linear_manifold_limit(2.0), (0.25, 0.125));
        let (s, d) = linear_manifold_limit(1e12);
        assert!((s - 0.5).abs() < 1e-11 && d < 1e-11);
    }

    #[test]
    fn crossing_root() {
        let m = asymptotic_crossing_m();
        assert!((m - 11.735_718_739_616).abs() < 1e-9, "{m}");
        assert!(crossing_residual(m).abs() < 1e-10);
    }
}
