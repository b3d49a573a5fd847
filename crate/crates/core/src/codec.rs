//! Problem description, piecewise-sinusoidal posteriors and reference vectors.

use std::f64::consts::PI;

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Manifold {
    Circle,
    /// One codebook over the whole 2-torus, solved as a circle with √M neurons.
    TorusJoint,
    /// Two independent circle codebooks of M/2 neurons each.
    TorusFactorial,
}

impl Manifold {
    pub const ALL: [Manifold; 3] = [Manifold::Circle, Manifold::TorusJoint, Manifold::TorusFactorial];

    pub fn name(self) -> &'static str {
        match self {
            Manifold::Circle => "circle",
            Manifold::TorusJoint => "torus-joint",
            Manifold::TorusFactorial => "torus-factorial",
        }
    }

    /// Neurons per circular factor.
    pub fn m_eff(self, m: f64) -> f64 {
        match self {
            Manifold::Circle => m,
            Manifold::TorusJoint => m.sqrt(),
            Manifold::TorusFactorial => m / 2.0,
        }
    }

    fn m_eff_label(self) -> &'static str {
        match self {
            Manifold::Circle => "M",
            Manifold::TorusJoint => "√M",
            Manifold::TorusFactorial => "M/2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemSpec {
    manifold: Manifold,
    m: f64,
    n: f64,
}

impl ProblemSpec {
    pub fn new(manifold: Manifold, m: f64, n: f64) -> Result<Self> {
        Self::with_floor(manifold, m, n, 4.0)
    }

    /// Admits 2 < M_eff < 4, where the closed forms stay finite but no
    /// posterior construction has been validated. Used only for the joint
    /// encoder inside the comparator.
    pub(crate) fn relaxed(manifold: Manifold, m: f64, n: f64) -> Result<Self> {
        Self::with_floor(manifold, m, n, 2.0 + 1e-9)
    }

    fn with_floor(manifold: Manifold, m: f64, n: f64, floor: f64) -> Result<Self> {
        if !(n.is_finite() && n >= 1.0) {
            return domain(format!("n ≥ 1 required (got n = {n})"));
        }
        let m_eff = manifold.m_eff(m);
        if !(m.is_finite() && m_eff >= floor) {
            return domain(format!(
                "{} ≥ {} required for {} (got M = {m})",
                manifold.m_eff_label(),
                floor.round(),
                manifold.name()
            ));
        }
        Ok(ProblemSpec { manifold, m, n })
    }

    pub fn manifold(&self) -> Manifold {
        self.manifold
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn m_eff(&self) -> f64 {
        self.manifold.m_eff(self.m)
    }

    /// Angular neuron spacing Δ = 2π/M_eff.
    pub fn delta(&self) -> f64 {
        2.0 * PI / self.m_eff()
    }

    /// Half spacing h = Δ/2, the edge of a neuron's cell.
    pub fn half(&self) -> f64 {
        PI / self.m_eff()
    }

    /// Same manifold and M with a different n.
    pub fn with_n(&self, n: f64) -> Result<Self> {
        ProblemSpec::new(self.manifold, self.m, n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    TwoOverlap,
    ThreeOverlap,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::TwoOverlap => "two",
            Regime::ThreeOverlap => "three",
        }
    }

    /// Valid overlap half-widths for this regime given the half spacing `h`.
    pub fn interval(self, h: f64) -> (f64, f64) {
        match self {
            Regime::TwoOverlap => (0.0, h),
            Regime::ThreeOverlap => (h, 2.0 * h),
        }
    }

    /// The regime that owns `s`; `s = h` belongs to `TwoOverlap`.
    pub fn classify(s: f64, h: f64) -> Option<Regime> {
        if (0.0..=h).contains(&s) {
            Some(Regime::TwoOverlap)
        } else if s > h && s <= 2.0 * h {
            Some(Regime::ThreeOverlap)
        } else {
            None
        }
    }
}

/// One piece `a + b·cos θ + c·sin|θ|` on `lo ≤ |θ| ≤ hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Piece {
    pub fn eval(&self, t: f64) -> f64 {
        self.a + self.b * t.cos() + self.c * t.sin()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorProfile {
    m_eff: f64,
    delta: f64,
    s: f64,
    regime: Regime,
    pieces: Vec<Piece>,
    breakpoints: Vec<f64>,
}

impl PosteriorProfile {
    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn half(&self) -> f64 {
        0.5 * self.delta
    }

    pub fn m_eff(&self) -> f64 {
        self.m_eff
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Piece ends in |θ|, ascending; the last one is the support edge Δ/2 + s.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn support_edge(&self) -> f64 {
        self.half() + self.s
    }

    /// `Some(M_eff)` when the neuron ring closes on itself.
    pub fn ring_size(&self) -> Option<i64> {
        let k = self.m_eff.round();
        (k == self.m_eff).then_some(k as i64)
    }

    /// p at `t = |θ|` with `t` already reduced to `[0, π]`.
    pub fn eval_abs(&self, t: f64) -> f64 {
        match self.pieces.iter().find(|p| t <= p.hi) {
            Some(p) => p.eval(t).clamp(0.0, 1.0),
            None => 0.0,
        }
    }
}

/// Reduces an angle to `(−π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    if theta > -PI && theta <= PI {
        return theta;
    }
    let t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t - 2.0 * PI
    } else {
        t
    }
}

pub fn build_profile(spec: &ProblemSpec, s: f64, regime: Regime) -> Result<PosteriorProfile> {
    let h = spec.half();
    let (lo, hi) = regime.interval(h);
    if !(s >= lo && s <= hi) {
        return domain(format!(
            "s = {s} outside [{lo}, {hi}] for {regime:?} at M_eff = {}",
            spec.m_eff()
        ));
    }
    let mut pieces = Vec::with_capacity(3);
    match regime {
        Regime::TwoOverlap => {
            pieces.push(Piece { lo: 0.0, hi: h - s, a: 1.0, b: 0.0, c: 0.0 });
            if s > 0.0 {
                let k = 0.5 / s.sin();
                pieces.push(Piece {
                    lo: h - s,
                    hi: h + s,
                    a: 0.5,
                    b: k * h.sin(),
                    c: -k * h.cos(),
                });
            }
        }
        Regime::ThreeOverlap => {
            let csc2 = 1.0 / (h.sin() * h.sin());
            let sec = 1.0 / (2.0 * h - s).cos();
            pieces.push(Piece {
                lo: 0.0,
                hi: s - h,
                a: -0.25 * ((4.0 * h - s).cos() + s.cos()) * csc2 * sec,
                b: 0.5 * h.cos() * csc2 * sec,
                c: 0.0,
            });
            pieces.push(Piece {
                lo: s - h,
                hi: 3.0 * h - s,
                a: 0.5,
                b: 0.5 * h.cos() * sec,
                c: -0.5 * h.cos() * h.cos() / h.sin() * sec,
            });
            pieces.push(Piece {
                lo: 3.0 * h - s,
                hi: h + s,
                a: 0.25 * csc2,
                b: -0.25 * csc2 * sec * (3.0 * h).cos(),
                c: -0.25 * csc2 * sec * (3.0 * h).sin(),
            });
        }
    }
    pieces.retain(|p| p.hi > p.lo);
    let breakpoints = pieces.iter().map(|p| p.hi).collect();
    Ok(PosteriorProfile {
        m_eff: spec.m_eff(),
        delta: spec.delta(),
        s,
        regime,
        pieces,
        breakpoints,
    })
}

pub fn posterior_eval(profile: &PosteriorProfile, theta: f64) -> f64 {
    profile.eval_abs(wrap_angle(theta).abs())
}

/// Every neuron with `p(θ − yΔ) > 0`, in lattice order.
///
/// Neuron indices are taken mod M_eff when M_eff is an integer. Otherwise the
/// lattice is unwrapped around θ = 0 and indices may be negative.
pub fn posterior_all(profile: &PosteriorProfile, theta: f64) -> Vec<(i64, f64)> {
    let t = wrap_angle(theta);
    let d = profile.delta;
    let k0 = (t / d).round() as i64;
    let ring = profile.ring_size();
    (k0 - 2..=k0 + 2)
        .filter_map(|k| {
            let p = profile.eval_abs((t - k as f64 * d).abs());
            (p > 0.0).then(|| (ring.map_or(k, |m| k.rem_euclid(m)), p))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceLayout {
    pub r: f64,
    pub m_eff: f64,
}

impl ReferenceLayout {
    pub fn delta(&self) -> f64 {
        2.0 * PI / self.m_eff
    }
}

/// `x′(y) = r·(cos yΔ, sin yΔ)`.
pub fn reference_vector(y: i64, layout: &ReferenceLayout) -> [f64; 2] {
    let k = layout.m_eff.round();
    let y = if k == layout.m_eff { y.rem_euclid(k as i64) } else { y };
    let phi = y as f64 * layout.delta();
    [layout.r * phi.cos(), layout.r * phi.sin()]
}
