//! Grid verification suites comparing the closed forms with the oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codec::{build_profile, Manifold, ProblemSpec, Regime};
use crate::error::Result;
use crate::exec::Execution;
use crate::oracle::{
    mc_estimate_with, numeric_minimize_s, quadrature_objective, stationarity_residual_p,
    stationarity_residual_x, DEFAULT_TOL,
};
use crate::solver::{analytic_optimum, Optimum};

pub const CLOSED_FORM_REL: f64 = 1e-8;
pub const STATIONARITY_ABS: f64 = 1e-9;
pub const PERTURBATION: f64 = 1e-3;
pub const MIN_INCREASE: f64 = 1e-9;
pub const MINIMIZER_S: f64 = 1e-6;
pub const MINIMUM_SLACK: f64 = 1e-9;
pub const Z_MAX: f64 = 5.0;
pub const MEAN_Z_MAX: f64 = 0.5;
pub const P_SAMPLES: usize = 50;

pub const GRID_M_EFF: [f64; 6] = [4.0, 6.0, 8.0, 12.0, 16.0, 32.0];
pub const GRID_N: [f64; 6] = [1.5, 2.0, 5.0, 20.0, 100.0, 1e4];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Fast,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Family {
    ClosedForm,
    StationarityP,
    StationarityX,
    LocalMinimality,
    Minimization,
    MonteCarlo,
}

impl Family {
    pub fn label(self) -> &'static str {
        match self {
            Family::ClosedForm => "closed-form",
            Family::StationarityP => "stationarity-p",
            Family::StationarityX => "stationarity-x",
            Family::LocalMinimality => "local-minimality",
            Family::Minimization => "minimization",
            Family::MonteCarlo => "monte-carlo",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub id: String,
    pub family: Family,
    pub value: f64,
    pub bound: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub level: Level,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failing(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.id.as_str()).collect()
    }

    pub fn family_passed(&self, family: Family) -> bool {
        self.checks.iter().filter(|c| c.family == family).all(|c| c.passed)
    }
}

/// Deliberate defects for exercising the suite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fault {
    /// Multiplies every optimal r before it is checked.
    pub r_scale: f64,
}

impl Default for Fault {
    fn default() -> Self {
        Fault { r_scale: 1.0 }
    }
}

fn spec_for(manifold: Manifold, m_eff: f64, n: f64) -> ProblemSpec {
    let m = match manifold {
        Manifold::TorusFactorial => 2.0 * m_eff,
        Manifold::TorusJoint => m_eff * m_eff,
        Manifold::Circle => m_eff,
    };
    ProblemSpec::new(manifold, m, n).expect("grid points are valid")
}

/// Circle and factorial-torus grid, manifold-major, then M_eff, then n.
pub fn grid(level: Level) -> Vec<ProblemSpec> {
    let (ms, ns): (&[f64], &[f64]) = match level {
        Level::Full => (&GRID_M_EFF, &GRID_N),
        Level::Fast => (&[4.0, 8.0, 32.0], &[1.5, 5.0, 100.0, 1e4]),
    };
    let mut out = Vec::new();
    for manifold in [Manifold::Circle, Manifold::TorusFactorial] {
        for &m in ms {
            for &n in ns {
                out.push(spec_for(manifold, m, n));
            }
        }
    }
    out
}

pub fn point_id(spec: &ProblemSpec) -> String {
    format!("{}/M_eff={}/n={}", spec.manifold().name(), spec.m_eff(), spec.n())
}

fn check(family: Family, id: String, value: f64, bound: f64, passed: bool) -> Check {
    Check {
        id: format!("{}/{}", family.label(), id),
        family,
        value,
        bound,
        passed: passed && value.is_finite(),
    }
}

/// Quadrature D1+D2 at overlap `s` with r held fixed.
pub fn quadrature_total(spec: &ProblemSpec, s: f64, r: f64) -> Result<f64> {
    let regime = Regime::classify(s, spec.half()).unwrap_or(Regime::ThreeOverlap);
    let profile = build_profile(spec, s, regime)?;
    let q = quadrature_objective(&profile, r, spec, DEFAULT_TOL)?;
    Ok(q.d1 + q.d2)
}

/// Uniform θ inside the overlap of neuron 0 with its neighbours.
pub fn overlap_thetas(spec: &ProblemSpec, opt: &Optimum, count: usize, seed: u64) -> Vec<f64> {
    let h = spec.half();
    let (lo, hi) = match opt.regime {
        Regime::TwoOverlap => (h - opt.s, h + opt.s),
        Regime::ThreeOverlap => (0.0, h + opt.s),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            // Skip the exact support end, where the residual is unconstrained.
            let u: f64 = rng.random();
            let t = lo + (hi - lo) * (1e-9 + (1.0 - 2e-9) * u);
            if i % 2 == 0 {
                t
            } else {
                -t
            }
        })
        .collect()
}

fn point_checks(spec: &ProblemSpec, seed: u64, fault: Fault, minimize: bool) -> Result<Vec<Check>> {
    let id = point_id(spec);
    let opt = analytic_optimum(spec)?;
    let r = opt.r * fault.r_scale;
    let profile = build_profile(spec, opt.s, opt.regime)?;
    let mut out = Vec::new();

    let q = quadrature_objective(&profile, r, spec, DEFAULT_TOL)?;
    let rel = ((q.d1 + q.d2) - opt.d_total).abs() / opt.d_total;
    out.push(check(Family::ClosedForm, id.clone(), rel, CLOSED_FORM_REL, rel <= CLOSED_FORM_REL));

    let worst_p = overlap_thetas(spec, &opt, P_SAMPLES, seed)
        .into_iter()
        .map(|t| stationarity_residual_p(&profile, r, spec, t, 0).map(f64::abs))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    out.push(check(Family::StationarityP, id.clone(), worst_p, STATIONARITY_ABS, worst_p <= STATIONARITY_ABS));

    let x = stationarity_residual_x(&profile, r, spec, 0, DEFAULT_TOL)?;
    let xn = x[0].hypot(x[1]);
    out.push(check(Family::StationarityX, id.clone(), xn, STATIONARITY_ABS, xn <= STATIONARITY_ABS));

    let base = q.d1 + q.d2;
    let up = quadrature_total(spec, opt.s + PERTURBATION, r)? - base;
    let down = quadrature_total(spec, opt.s - PERTURBATION, r)? - base;
    let rise = up.min(down);
    out.push(check(Family::LocalMinimality, id.clone(), rise, MIN_INCREASE, rise >= MIN_INCREASE));

    if minimize {
        let (s_num, d_num) = numeric_minimize_s(spec, opt.regime)?;
        let ds = (s_num - opt.s).abs();
        out.push(check(
            Family::Minimization,
            format!("{id}/s"),
            ds,
            MINIMIZER_S,
            ds <= MINIMIZER_S,
        ));
        let slack = d_num - (opt.d_total - MINIMUM_SLACK);
        out.push(check(
            Family::Minimization,
            format!("{id}/d"),
            slack,
            0.0,
            slack >= 0.0,
        ));
    }
    Ok(out)
}

/// z-scores of Monte Carlo D1+D2 against quadrature for consecutive seeds.
pub fn mc_z_scores(
    spec: &ProblemSpec,
    samples: usize,
    seeds: impl IntoIterator<Item = u64>,
    r_scale: f64,
    exec: Execution,
) -> Result<Vec<f64>> {
    let opt = analytic_optimum(spec)?;
    let r = opt.r * r_scale;
    let profile = build_profile(spec, opt.s, opt.regime)?;
    let q = quadrature_objective(&profile, r, spec, DEFAULT_TOL)?;
    seeds
        .into_iter()
        .map(|seed| {
            let mc = mc_estimate_with(&profile, r, spec, samples, seed, exec)?;
            Ok((mc.total() - (q.d1 + q.d2)) / mc.total_se)
        })
        .collect()
}

pub fn run(level: Level, seed: u64, fault: Fault, exec: Execution) -> Result<Report> {
    let specs = grid(level);
    let per_point = exec.map(&specs, |spec| {
        let minimize = match level {
            Level::Full => true,
            Level::Fast => spec.n() == 5.0,
        };
        point_checks(spec, seed, fault, minimize)
    });
    let mut checks = Vec::new();
    for c in per_point {
        checks.extend(c?);
    }

    let (samples, count) = match level {
        Level::Fast => (100_000, 20u64),
        Level::Full => (1_000_000, 20u64),
    };
    let mc_spec = ProblemSpec::new(Manifold::Circle, 8.0, 2.0)?;
    let zs = mc_z_scores(&mc_spec, samples, seed..seed + count, fault.r_scale, exec)?;
    let base = point_id(&mc_spec);
    for (i, z) in zs.iter().enumerate() {
        checks.push(check(
            Family::MonteCarlo,
            format!("{base}/seed={}", seed + i as u64),
            z.abs(),
            Z_MAX,
            z.abs() <= Z_MAX,
        ));
    }
    let mean = zs.iter().sum::<f64>() / zs.len() as f64;
    checks.push(check(
        Family::MonteCarlo,
        format!("{base}/mean-z"),
        mean.abs(),
        MEAN_Z_MAX,
        mean.abs() <= MEAN_Z_MAX,
    ));
    Ok(Report { level, seed, checks })
}
