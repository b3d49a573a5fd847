//! Independent numerical checks: quadrature of D1 and D2, stationarity
//! residuals, direct minimisation over s and Monte Carlo estimates.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codec::{
    build_profile, posterior_all, reference_vector, Manifold, PosteriorProfile, ProblemSpec,
    ReferenceLayout, Regime,
};
use crate::error::{domain, Error, Result};
use crate::exec::Execution;
use crate::numerics::{golden_min, integrate};
use crate::solver::optimal_r;

pub const DEFAULT_TOL: f64 = 1e-12;
const MAX_SEGMENTS: usize = 50_000;
/// Samples per Monte Carlo substream.
pub const MC_CHUNK: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub d1: f64,
    pub d2: f64,
    pub abs_error_estimate: f64,
    pub segments_used: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCEstimate {
    pub d1_hat: f64,
    pub d2_hat: f64,
    pub d1_se: f64,
    pub d2_se: f64,
    /// Standard error of the per-sample `d1 + d2`.
    pub total_se: f64,
    pub samples: usize,
    pub seed: u64,
}

impl MCEstimate {
    pub fn total(&self) -> f64 {
        self.d1_hat + self.d2_hat
    }
}

/// How the per-angle terms combine into D1 and D2 for each manifold.
#[derive(Debug, Clone, Copy)]
struct Weights {
    d1: f64,
    d1_offset: f64,
    d2: f64,
    mix: f64,
    copies: f64,
    pull: f64,
}

impl Weights {
    fn of(spec: &ProblemSpec) -> Self {
        let n = spec.n();
        match spec.manifold() {
            Manifold::Circle | Manifold::TorusJoint => Weights {
                d1: 2.0 / n,
                d1_offset: 0.0,
                d2: 2.0 * (n - 1.0) / n,
                mix: 1.0,
                copies: if spec.manifold() == Manifold::TorusJoint { 2.0 } else { 1.0 },
                pull: n - 1.0,
            },
            Manifold::TorusFactorial => Weights {
                d1: 2.0 / n,
                d1_offset: 1.0,
                d2: 4.0 * (n - 1.0) / n,
                mix: 0.5,
                copies: 1.0,
                pull: 0.5 * (n - 1.0),
            },
        }
    }

    fn finish(&self, avg1: f64, avg2: f64) -> (f64, f64) {
        (
            self.copies * self.d1 * (avg1 + self.d1_offset),
            self.copies * self.d2 * avg2,
        )
    }
}

fn check_profile(profile: &PosteriorProfile, spec: &ProblemSpec) -> Result<()> {
    if (profile.m_eff() - spec.m_eff()).abs() > 1e-12 * spec.m_eff() {
        return domain(format!(
            "profile built for M_eff = {} but spec has M_eff = {}",
            profile.m_eff(),
            spec.m_eff()
        ));
    }
    Ok(())
}

/// Raw `(Σ_y p‖x − x′(y)‖², ‖x − mix·Σ_y p x′(y)‖²)` at angle θ.
fn point_terms(profile: &PosteriorProfile, layout: &ReferenceLayout, mix: f64, theta: f64) -> [f64; 2] {
    let x = [theta.cos(), theta.sin()];
    let mut d1 = 0.0;
    let mut rec = [0.0; 2];
    for (y, p) in posterior_all(profile, theta) {
        let xr = reference_vector(y, layout);
        d1 += p * ((x[0] - xr[0]).powi(2) + (x[1] - xr[1]).powi(2));
        rec[0] += p * xr[0];
        rec[1] += p * xr[1];
    }
    let d2 = (x[0] - mix * rec[0]).powi(2) + (x[1] - mix * rec[1]).powi(2);
    [d1, d2]
}

/// Averaging domain and its kink points: the full ring when M_eff is an
/// integer, else one lattice cell.
fn period_points(profile: &PosteriorProfile) -> Vec<f64> {
    let d = profile.delta();
    let mut pts = Vec::new();
    let (lo, hi, ks): (f64, f64, Vec<i64>) = match profile.ring_size() {
        Some(m) => (0.0, 2.0 * PI, (0..m).collect()),
        None => (-0.5 * d, 0.5 * d, (-2..=2).collect()),
    };
    for k in ks {
        let c = k as f64 * d;
        for &b in profile.breakpoints() {
            for t in [c - b, c + b] {
                let t = if profile.ring_size().is_some() { t.rem_euclid(2.0 * PI) } else { t };
                if t > lo && t < hi {
                    pts.push(t);
                }
            }
        }
    }
    pts.push(lo);
    pts.push(hi);
    sorted_unique(pts)
}

fn sorted_unique(mut pts: Vec<f64>) -> Vec<f64> {
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * (1.0 + b.abs()));
    pts
}

/// D1 and D2 by adaptive quadrature of the neuron sum over a full period.
pub fn quadrature_objective(
    profile: &PosteriorProfile,
    r: f64,
    spec: &ProblemSpec,
    tol: f64,
) -> Result<QuadratureResult> {
    check_profile(profile, spec)?;
    if !(tol > 0.0) {
        return domain("tol > 0 required");
    }
    let w = Weights::of(spec);
    let layout = ReferenceLayout { r, m_eff: spec.m_eff() };
    let pts = period_points(profile);
    let len = pts[pts.len() - 1] - pts[0];
    let scale = w.copies * w.d1.max(w.d2);
    let out = integrate(
        |t| point_terms(profile, &layout, w.mix, t),
        &pts,
        tol * len / scale,
        MAX_SEGMENTS,
    )?;
    if out.abs_error > tol * len / scale {
        return Err(Error::Quadrature {
            tol,
            error: out.abs_error / len * scale,
            segments: out.segments,
            best: { let (a, b) = w.finish(out.value[0] / len, out.value[1] / len); vec![a, b] },
        });
    }
    let (d1, d2) = w.finish(out.value[0] / len, out.value[1] / len);
    Ok(QuadratureResult {
        d1,
        d2,
        abs_error_estimate: out.abs_error / len * scale,
        segments_used: out.segments,
    })
}

/// D1 and D2 from the symmetry-folded forms: one half cell (two-overlap) or
/// one full spacing (three-overlap), with the contributing neighbours and
/// their pieces written out explicitly.
pub fn quadrature_objective_folded(
    profile: &PosteriorProfile,
    r: f64,
    spec: &ProblemSpec,
    tol: f64,
) -> Result<QuadratureResult> {
    check_profile(profile, spec)?;
    let w = Weights::of(spec);
    let layout = ReferenceLayout { r, m_eff: spec.m_eff() };
    let (h, s, d) = (profile.half(), profile.s(), profile.delta());
    let piece = |i: usize, t: f64| profile.pieces()[i].eval(t.abs());
    // Each region: interval and the (neuron, weight function) pairs active on it.
    type Term<'a> = (i64, Box<dyn Fn(f64) -> f64 + 'a>);
    let mut regions: Vec<(f64, f64, Vec<Term>)> = Vec::new();
    match profile.regime() {
        Regime::TwoOverlap => {
            regions.push((0.0, h - s, vec![(0, Box::new(|_| 1.0))]));
            if s > 0.0 {
                let tr = profile.pieces().len() - 1;
                regions.push((
                    h - s,
                    h,
                    vec![
                        (0, Box::new(move |t| piece(tr, t))),
                        (1, Box::new(move |t| piece(tr, d - t))),
                    ],
                ));
            }
        }
        Regime::ThreeOverlap => {
            // At s = Δ/2 the f1 piece has zero width and only the f2 region remains.
            if profile.pieces().len() == 3 {
                let (f1, f2, f3) = (0, 1, 2);
                regions.push((
                    0.0,
                    s - h,
                    vec![
                        (0, Box::new(move |t| piece(f1, t))),
                        (1, Box::new(move |t| piece(f3, d - t))),
                        (-1, Box::new(move |t| piece(f3, d + t))),
                    ],
                ));
                regions.push((
                    s - h,
                    3.0 * h - s,
                    vec![
                        (0, Box::new(move |t| piece(f2, t))),
                        (1, Box::new(move |t| piece(f2, d - t))),
                    ],
                ));
                regions.push((
                    3.0 * h - s,
                    d,
                    vec![
                        (0, Box::new(move |t| piece(f3, t))),
                        (1, Box::new(move |t| piece(f1, d - t))),
                        (2, Box::new(move |t| piece(f3, 2.0 * d - t))),
                    ],
                ));
            } else {
                regions.push((
                    0.0,
                    d,
                    vec![
                        (0, Box::new(move |t| piece(0, t))),
                        (1, Box::new(move |t| piece(0, d - t))),
                    ],
                ));
            }
        }
    }
    let span = match profile.regime() {
        Regime::TwoOverlap => h,
        Regime::ThreeOverlap => d,
    };
    let scale = w.copies * w.d1.max(w.d2);
    regions.retain(|r| r.1 > r.0);
    let region_tol = tol * span / (scale * regions.len() as f64);
    let (mut a1, mut a2, mut err, mut segs) = (0.0, 0.0, 0.0, 0);
    for (lo, hi, terms) in &regions {
        let f = |t: f64| {
            let x = [t.cos(), t.sin()];
            let mut d1 = 0.0;
            let mut rec = [0.0; 2];
            for (y, wf) in terms {
                let p = wf(t);
                let xr = reference_vector(*y, &layout);
                d1 += p * ((x[0] - xr[0]).powi(2) + (x[1] - xr[1]).powi(2));
                rec[0] += p * xr[0];
                rec[1] += p * xr[1];
            }
            [d1, (x[0] - w.mix * rec[0]).powi(2) + (x[1] - w.mix * rec[1]).powi(2)]
        };
        let out = integrate(f, &[*lo, *hi], region_tol, MAX_SEGMENTS)?;
        a1 += out.value[0];
        a2 += out.value[1];
        err += out.abs_error;
        segs += out.segments;
    }
    let (d1, d2) = w.finish(a1 / span, a2 / span);
    let abs_error_estimate = err / span * scale;
    if abs_error_estimate > tol {
        return Err(Error::Quadrature {
            tol,
            error: abs_error_estimate,
            segments: segs,
            best: vec![d1, d2],
        });
    }
    Ok(QuadratureResult {
        d1,
        d2,
        abs_error_estimate,
        segments_used: segs,
    })
}

/// Per-neuron `x′·(½x′ − n x + c R)`, whose spread across the active
/// neurons measures non-stationarity in the posterior.
fn p_terms(
    profile: &PosteriorProfile,
    r: f64,
    spec: &ProblemSpec,
    theta: f64,
) -> (Vec<(i64, f64)>, Vec<f64>) {
    let w = Weights::of(spec);
    let layout = ReferenceLayout { r, m_eff: spec.m_eff() };
    let x = [theta.cos(), theta.sin()];
    let active = posterior_all(profile, theta);
    let xs: Vec<[f64; 2]> = active.iter().map(|&(y, _)| reference_vector(y, &layout)).collect();
    let mut rec = [0.0; 2];
    for (&(_, p), xr) in active.iter().zip(&xs) {
        rec[0] += p * xr[0];
        rec[1] += p * xr[1];
    }
    let n = spec.n();
    let g = xs
        .iter()
        .map(|xr| {
            xr[0] * (0.5 * xr[0] - n * x[0] + w.pull * rec[0])
                + xr[1] * (0.5 * xr[1] - n * x[1] + w.pull * rec[1])
        })
        .collect();
    (active, g)
}

/// `Σ_y′ (p_y′ − δ_yy′) x′(y′)·(½x′(y′) − n x + c Σ_y″ p_y″ x′(y″))` at x = n(θ),
/// with c = n − 1 (circle) or (n − 1)/2 (factorial torus).
pub fn stationarity_residual_p(
    profile: &PosteriorProfile,
    r: f64,
    spec: &ProblemSpec,
    theta: f64,
    y: i64,
) -> Result<f64> {
    check_profile(profile, spec)?;
    let (active, g) = p_terms(profile, r, spec, theta);
    let y = profile.ring_size().map_or(y, |m| y.rem_euclid(m));
    let Some(iy) = active.iter().position(|&(k, _)| k == y) else {
        return domain(format!("neuron {y} has zero posterior at θ = {theta}"));
    };
    let mean: f64 = active.iter().zip(&g).map(|(&(_, p), gi)| p * gi).sum();
    Ok(mean - g[iy])
}

/// Kink points of `θ ↦ p(θ − yΔ)·(neighbour sum)` across the support of neuron y.
fn neuron_points(profile: &PosteriorProfile, y: i64) -> Vec<f64> {
    let d = profile.delta();
    let c = y as f64 * d;
    let edge = profile.support_edge();
    let mut pts = vec![c - edge, c + edge];
    for k in -3..=3 {
        let ck = c + k as f64 * d;
        for &b in profile.breakpoints() {
            for t in [ck - b, ck + b] {
                if t > c - edge && t < c + edge {
                    pts.push(t);
                }
            }
        }
    }
    sorted_unique(pts)
}

/// `n∫Pr(x|y) x − x′(y) − c∫Pr(x|y) Σ_y′ Pr(y′|x) x′(y′)`, with
/// Pr(x|y) = p(θ − yΔ)·M_eff/2π.
pub fn stationarity_residual_x(
    profile: &PosteriorProfile,
    r: f64,
    spec: &ProblemSpec,
    y: i64,
    tol: f64,
) -> Result<[f64; 2]> {
    check_profile(profile, spec)?;
    let w = Weights::of(spec);
    let layout = ReferenceLayout { r, m_eff: spec.m_eff() };
    let d = profile.delta();
    let yc = y as f64 * d;
    let norm = spec.m_eff() / (2.0 * PI);
    let out = integrate(
        |t| {
            let p = profile.eval_abs((t - yc).abs());
            let mut rec = [0.0; 2];
            // Neighbours by lattice offset from y, so no wrap is needed.
            for k in -2..=2 {
                let pk = profile.eval_abs((t - yc - k as f64 * d).abs());
                if pk > 0.0 {
                    let xr = reference_vector(y + k, &layout);
                    rec[0] += pk * xr[0];
                    rec[1] += pk * xr[1];
                }
            }
            [p * t.cos(), p * t.sin(), p * rec[0], p * rec[1]]
        },
        &neuron_points(profile, y),
        tol / (norm * spec.n()),
        MAX_SEGMENTS,
    )?;
    let xr = reference_vector(y, &layout);
    let n = spec.n();
    Ok([0, 1].map(|i| n * norm * out.value[i] - xr[i] - w.pull * norm * out.value[i + 2]))
}

/// `(M_eff/2π)∫p(θ − yΔ)dθ`, which is 1 when Pr(y) = 1/M_eff.
pub fn neuron_mass(profile: &PosteriorProfile, y: i64, tol: f64) -> Result<f64> {
    let yc = y as f64 * profile.delta();
    let out = integrate(
        |t| [profile.eval_abs((t - yc).abs())],
        &neuron_points(profile, y),
        tol,
        MAX_SEGMENTS,
    )?;
    Ok(out.value[0] * profile.m_eff() / (2.0 * PI))
}

/// Golden-section minimum of quadrature D1+D2 over the regime interval,
/// with r at its optimal value for each trial s.
pub fn numeric_minimize_s(spec: &ProblemSpec, regime: Regime) -> Result<(f64, f64)> {
    if spec.n() <= 1.0 {
        return domain(format!("n > 1 required (got n = {})", spec.n()));
    }
    let (lo, hi) = regime.interval(spec.half());
    let objective = |s: f64| -> Result<f64> {
        let r = optimal_r(spec, s, regime)?;
        let profile = build_profile(spec, s, regime)?;
        let q = quadrature_objective(&profile, r, spec, DEFAULT_TOL)?;
        Ok(q.d1 + q.d2)
    };
    let mut failure = None;
    let (s, d) = golden_min(
        |s| match objective(s) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::INFINITY
            }
        },
        lo,
        hi,
        1e-10,
    );
    match failure {
        Some(e) => Err(e),
        None => Ok((s, d)),
    }
}

pub fn mc_estimate(
    profile: &PosteriorProfile,
    r: f64,
    spec: &ProblemSpec,
    samples: usize,
    seed: u64,
) -> Result<MCEstimate> {
    mc_estimate_with(profile, r, spec, samples, seed, Execution::default())
}

/// Monte Carlo D1 and D2 with θ uniform over the period (one lattice cell
/// when M_eff is not an integer).
///
/// Chunk `i` draws from ChaCha8 seeded with `seed` on stream `i`; chunk sums
/// are folded in chunk order, so the result does not depend on `exec`.
pub fn mc_estimate_with(
    profile: &PosteriorProfile,
    r: f64,
    spec: &ProblemSpec,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<MCEstimate> {
    check_profile(profile, spec)?;
    if samples < 100 {
        return domain(format!("samples ≥ 100 required (got {samples})"));
    }
    let w = Weights::of(spec);
    let layout = ReferenceLayout { r, m_eff: spec.m_eff() };
    let (lo, width) = match profile.ring_size() {
        Some(_) => (0.0, 2.0 * PI),
        None => (-profile.half(), profile.delta()),
    };
    let chunks: Vec<u64> = (0..samples.div_ceil(MC_CHUNK) as u64).collect();
    let sums = exec.map(&chunks, |&i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i);
        let count = MC_CHUNK.min(samples - i as usize * MC_CHUNK);
        let mut acc = [0.0f64; 6];
        for _ in 0..count {
            let theta = lo + width * rng.random::<f64>();
            let [a, b] = point_terms(profile, &layout, w.mix, theta);
            let (d1, d2) = w.finish(a, b);
            let t = d1 + d2;
            for (slot, v) in acc.iter_mut().zip([d1, d1 * d1, d2, d2 * d2, t, t * t]) {
                *slot += v;
            }
        }
        acc
    });
    let mut acc = [0.0f64; 6];
    for c in &sums {
        for (a, v) in acc.iter_mut().zip(c) {
            *a += v;
        }
    }
    let n = samples as f64;
    let stat = |sum: f64, sq: f64| {
        let mean = sum / n;
        let var = ((sq - n * mean * mean) / (n - 1.0)).max(0.0);
        (mean, (var / n).sqrt())
    };
    let (d1_hat, d1_se) = stat(acc[0], acc[1]);
    let (d2_hat, d2_se) = stat(acc[2], acc[3]);
    let (_, total_se) = stat(acc[4], acc[5]);
    Ok(MCEstimate {
        d1_hat,
        d2_hat,
        d1_se,
        d2_se,
        total_se,
        samples,
        seed,
    })
}
