//! Joint versus factorial encoding of the 2-torus over the (n, M) plane.

use crate::codec::{Manifold, ProblemSpec};
use crate::error::{domain, Result};
use crate::exec::Execution;
use crate::numerics::bracket_root;
use crate::solver::analytic_optimum;

/// Smallest M for which the factorial encoder has a validated posterior.
pub const MIN_FACTORIAL_M: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Winner {
    Joint,
    Factorial,
}

impl Winner {
    pub fn label(self) -> &'static str {
        match self {
            Winner::Joint => "joint",
            Winner::Factorial => "factorial",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRow {
    pub m: f64,
    pub n: f64,
    pub d_joint: f64,
    pub d_factorial: f64,
    pub winner: Winner,
    /// `(d_factorial − d_joint)/d_factorial`; negative where factorial wins.
    pub rel_gap: f64,
}

/// Joint D1+D2 from the circle closed forms at √M, doubled. √M may fall
/// below 4 here, where the forms are used as an analytic continuation.
fn d_joint(m: f64, n: f64) -> Result<f64> {
    let spec = ProblemSpec::relaxed(Manifold::TorusJoint, m, n)?;
    Ok(analytic_optimum(&spec)?.d_total)
}

fn d_factorial(m: f64, n: f64) -> Result<f64> {
    let spec = ProblemSpec::new(Manifold::TorusFactorial, m, n)?;
    Ok(analytic_optimum(&spec)?.d_total)
}

pub fn compare(m: f64, n: f64) -> Result<ComparisonRow> {
    if !(m >= MIN_FACTORIAL_M) {
        return domain(format!("M ≥ {MIN_FACTORIAL_M} required for comparison (got M = {m})"));
    }
    let d_joint = d_joint(m, n)?;
    let d_factorial = d_factorial(m, n)?;
    let winner = if d_factorial < d_joint { Winner::Factorial } else { Winner::Joint };
    Ok(ComparisonRow {
        m,
        n,
        d_joint,
        d_factorial,
        winner,
        rel_gap: (d_factorial - d_joint) / d_factorial,
    })
}

/// M in [8, 64] where the two encoders tie at this n, or `None` when one of
/// them wins throughout.
pub fn winner_boundary(n: f64) -> Result<Option<f64>> {
    let gap = |m: f64| d_factorial(m, n).and_then(|f| Ok(f - d_joint(m, n)?));
    let (lo, hi) = (MIN_FACTORIAL_M, 64.0);
    let (g_lo, g_hi) = (gap(lo)?, gap(hi)?);
    if g_lo.signum() == g_hi.signum() {
        return Ok(None);
    }
    let root = bracket_root(|m| gap(m).unwrap_or(f64::NAN), lo, hi)?;
    Ok(Some(root))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub rows: Vec<ComparisonRow>,
    /// Requested M values dropped because M/2 < 4.
    pub excluded_m: Vec<f64>,
}

/// `steps` geometrically spaced n values from `n_lo` to `n_hi`, inclusive.
pub fn geometric_range(n_lo: f64, n_hi: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 || !(n_lo >= 1.0) || !(n_hi >= n_lo) || !n_hi.is_finite() {
        return domain(format!(
            "need 1 ≤ n_lo ≤ n_hi and steps ≥ 1 (got {n_lo}, {n_hi}, {steps})"
        ));
    }
    if steps == 1 {
        return Ok(vec![n_lo]);
    }
    // Base 10 so that decade-aligned grids hit powers of ten exactly.
    let (a, b) = (n_lo.log10(), n_hi.log10());
    Ok((0..steps)
        .map(|i| match i {
            0 => n_lo,
            _ if i == steps - 1 => n_hi,
            _ => 10f64.powf(a + (b - a) * i as f64 / (steps - 1) as f64),
        })
        .collect())
}

pub fn sweep(m_list: &[f64], n_lo: f64, n_hi: f64, steps: usize) -> Result<Sweep> {
    sweep_with(m_list, n_lo, n_hi, steps, Execution::default())
}

/// Rows are M-major, then ascending n.
pub fn sweep_with(
    m_list: &[f64],
    n_lo: f64,
    n_hi: f64,
    steps: usize,
    exec: Execution,
) -> Result<Sweep> {
    let ns = geometric_range(n_lo, n_hi, steps)?;
    let (kept, excluded_m): (Vec<f64>, Vec<f64>) =
        m_list.iter().partition(|&&m| m >= MIN_FACTORIAL_M);
    let grid: Vec<(f64, f64)> = kept
        .iter()
        .flat_map(|&m| ns.iter().map(move |&n| (m, n)))
        .collect();
    let rows = exec
        .map(&grid, |&(m, n)| compare(m, n))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(Sweep { rows, excluded_m })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_range_endpoints() {
        let v = geometric_range(2.0, 1e4, 5).unwrap();
        assert_eq!(v.len(), 5);
        assert_eq!(v[0], 2.0);
        assert_eq!(v[4], 1e4);
        assert!(geometric_range(3.0, 2.0, 4).is_err());
        assert!(geometric_range(2.0, 3.0, 0).is_err());
    }

    #[test]
    fn small_m_is_rejected() {
        assert!(compare(7.0, 2.0).is_err());
    }
}
