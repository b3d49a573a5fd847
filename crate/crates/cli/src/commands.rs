use std::f64::consts::PI;

use serde_json::{json, Map, Value};
use softvq::activation::{approx_error, approx_posterior};
use softvq::asymptotics::{asymptotic_crossing_m, boundary_two_three};
use softvq::codec::{build_profile, posterior_eval};
use softvq::comparator::{geometric_range, winner_boundary};
use softvq::solver::analytic_optimum;
use softvq::verify::{self, Fault, Level};
use softvq::{Execution, Manifold, ProblemSpec, Regime};

use crate::output::{Cell, Manifest, Output, Table};

pub type CmdResult = std::result::Result<Output, String>;

fn err(e: softvq::Error) -> String {
    e.to_string()
}

fn finish(manifest: Manifest, table: Table, json: Value) -> Output {
    Output {
        manifest,
        table,
        json,
        failing: Vec::new(),
    }
}

pub fn solve_cmd(manifest: Manifest, manifold: Manifold, m: f64, n: f64, tol: f64) -> CmdResult {
    let spec = ProblemSpec::new(manifold, m, n).map_err(err)?;
    let sol = softvq::solver::solve_with_tol(&spec, tol).map_err(err)?;
    let mut table = Table::new(&[
        "manifold", "M", "n", "M_eff", "regime", "s", "s_normalized", "r", "d1", "d2", "d_total",
    ]);
    table.push(vec![
        manifold.name().into(),
        m.into(),
        n.into(),
        spec.m_eff().into(),
        sol.regime.label().into(),
        sol.s.into(),
        sol.s_normalized().into(),
        sol.r.into(),
        sol.d1.into(),
        sol.d2.into(),
        sol.d_total.into(),
    ]);
    let json = table.json_row(&table.rows[0]);
    Ok(finish(manifest, table, json))
}

/// Solves at one point of a sweep; failures become the row's error text.
fn sweep_row(manifold: Manifold, m: f64, n: f64) -> Vec<Cell> {
    let solved = ProblemSpec::new(manifold, m, n).and_then(|spec| Ok((spec, analytic_optimum(&spec)?)));
    match solved {
        Ok((spec, opt)) => vec![
            m.into(),
            n.into(),
            opt.regime.label().into(),
            opt.s.into(),
            (opt.s / spec.half()).into(),
            opt.r.into(),
            opt.d_total.into(),
            Cell::Empty,
        ],
        Err(e) => {
            let mut row = vec![m.into(), n.into()];
            row.extend(std::iter::repeat_n(Cell::Empty, 5));
            row.push(e.to_string().into());
            row
        }
    }
}

pub fn sweep_cmd(manifest: Manifest, manifold: Manifold, ms: &[f64], ns: &[f64]) -> CmdResult {
    if ms.is_empty() {
        return Err("at least one M value required".into());
    }
    let grid: Vec<(f64, f64)> = ms.iter().flat_map(|&m| ns.iter().map(move |&n| (m, n))).collect();
    let rows = Execution::default().map(&grid, |&(m, n)| sweep_row(manifold, m, n));
    let mut table = Table::new(&["M", "n", "regime", "s", "s_normalized", "r", "d_total", "error"]);
    for row in rows {
        table.push(row);
    }
    if table.rows.iter().all(|r| r[7] != Cell::Empty) {
        let first = match &table.rows[0][7] {
            Cell::Text(t) => t.clone(),
            _ => String::new(),
        };
        return Err(format!("no grid point could be solved: {first}"));
    }
    let json = Value::Array(table.json_rows());
    Ok(finish(manifest, table, json))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum BoundaryKind {
    TwoThreeCircle,
    TwoThreeFactorial,
    JointFactorial,
}

impl BoundaryKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundaryKind::TwoThreeCircle => "two-three-circle",
            BoundaryKind::TwoThreeFactorial => "two-three-factorial",
            BoundaryKind::JointFactorial => "joint-factorial",
        }
    }
}

pub fn boundary_two_three_cmd(manifest: Manifest, kind: BoundaryKind, ms: &[f64]) -> CmdResult {
    let manifold = match kind {
        BoundaryKind::TwoThreeCircle => Manifold::Circle,
        _ => Manifold::TorusFactorial,
    };
    if ms.is_empty() {
        return Err("at least one M value required".into());
    }
    let mut table = Table::new(&["M", "M_eff", "n_exact", "n_asymptote"]);
    for &m in ms {
        let m_eff = manifold.m_eff(m);
        let b = boundary_two_three(m_eff, manifold).map_err(err)?;
        table.push(vec![m.into(), m_eff.into(), b.n_exact.into(), b.n_asymptote.into()]);
    }
    let json = Value::Array(table.json_rows());
    Ok(finish(manifest, table, json))
}

pub fn boundary_joint_factorial_cmd(manifest: Manifest, ns: &[f64]) -> CmdResult {
    if ns.is_empty() {
        return Err("at least one n value required".into());
    }
    let limit = asymptotic_crossing_m();
    let found = Execution::default().map(ns, |&n| winner_boundary(n));
    let mut table = Table::new(&["n", "M_boundary", "M_asymptote"]);
    for (&n, m) in ns.iter().zip(found) {
        table.push(vec![n.into(), m.map_err(err)?.into(), limit.into()]);
    }
    let json = Value::Array(table.json_rows());
    Ok(finish(manifest, table, json))
}

pub fn verify_cmd(manifest: Manifest, level: Level, seed: u64, r_scale: f64) -> CmdResult {
    let report = verify::run(level, seed, Fault { r_scale }, Execution::default()).map_err(err)?;
    let mut table = Table::new(&["id", "family", "value", "bound", "passed"]);
    for c in &report.checks {
        table.push(vec![
            c.id.as_str().into(),
            c.family.label().into(),
            c.value.into(),
            c.bound.into(),
            c.passed.into(),
        ]);
    }
    let mut families = Map::new();
    for c in &report.checks {
        families.entry(c.family.label()).or_insert(Value::Bool(report.family_passed(c.family)));
    }
    let failing: Vec<String> = report.failing().into_iter().map(String::from).collect();
    let json = json!({
        "level": match level { Level::Fast => "fast", Level::Full => "full" },
        "seed": seed,
        "passed": report.passed(),
        "families": families,
        "failing": failing,
        "checks": table.json_rows(),
    });
    Ok(Output {
        failing,
        ..finish(manifest, table, json)
    })
}

/// θ samples over [−2Δ, 2Δ] (at most a full turn), or θ = 0 alone.
fn theta_grid(points: usize, half_range: f64) -> Vec<f64> {
    if points == 1 {
        return vec![0.0];
    }
    let l = half_range.min(PI);
    (0..points)
        .map(|i| -l + 2.0 * l * i as f64 / (points - 1) as f64)
        .collect()
}

pub fn posterior_cmd(manifest: Manifest, manifold: Manifold, m: f64, n: f64, points: usize) -> CmdResult {
    if points == 0 {
        return Err("points ≥ 1 required".into());
    }
    let spec = ProblemSpec::new(manifold, m, n).map_err(err)?;
    let opt = analytic_optimum(&spec).map_err(err)?;
    let profile = build_profile(&spec, opt.s, opt.regime).map_err(err)?;
    let d = spec.delta();
    let mut table = Table::new(&["theta", "p", "p_minus_delta", "p_plus_delta"]);
    for t in theta_grid(points, 2.0 * d) {
        table.push(vec![
            t.into(),
            posterior_eval(&profile, t).into(),
            posterior_eval(&profile, t - d).into(),
            posterior_eval(&profile, t + d).into(),
        ]);
    }
    let json = json!({
        "regime": opt.regime.label(),
        "s": opt.s,
        "delta": d,
        "points": table.json_rows(),
    });
    Ok(finish(manifest, table, json))
}

pub fn approx_cmd(manifest: Manifest, m: f64, n: f64, points: usize) -> CmdResult {
    if points < 2 {
        return Err("points ≥ 2 required".into());
    }
    let spec = ProblemSpec::new(Manifold::Circle, m, n).map_err(err)?;
    let opt = analytic_optimum(&spec).map_err(err)?;
    if opt.regime == Regime::ThreeOverlap {
        return Err(format!(
            "optimum at M = {m}, n = {n} is three-overlap (s = {} > π/M); the hinge approximation is defined for two-overlap optima only",
            opt.s
        ));
    }
    if opt.s == 0.0 {
        return Err(format!("optimum at n = {n} has s = 0; there is no transition to approximate"));
    }
    let profile = build_profile(&spec, opt.s, opt.regime).map_err(err)?;
    let h = spec.half();
    let row = |kind: &str, t: f64| -> std::result::Result<Vec<Cell>, String> {
        let exact = posterior_eval(&profile, t);
        let approx = approx_posterior(t, opt.s, m).map_err(err)?;
        Ok(vec![kind.into(), t.into(), exact.into(), approx.into(), (exact - approx).into()])
    };
    let mut table = Table::new(&[
        "kind", "theta", "p_exact", "p_approx", "difference", "sup_error", "exact_cubic", "approx_cubic",
    ]);
    for i in 0..points {
        let t = h - opt.s + 2.0 * opt.s * i as f64 / (points - 1) as f64;
        let mut r = row("point", t)?;
        r.extend([Cell::Empty, Cell::Empty, Cell::Empty]);
        table.push(r);
    }
    let summary = approx_error(opt.s, m).map_err(err)?;
    let mut r = row("summary", summary.theta_at_sup)?;
    r.extend([summary.sup_error.into(), summary.exact_cubic.into(), summary.approx_cubic.into()]);
    table.push(r);
    let rows = table.json_rows();
    let json = json!({
        "s": opt.s,
        "points": rows[..points],
        "summary": rows[points],
    });
    Ok(finish(manifest, table, json))
}

/// `steps` values from `lo` to `hi` inclusive, evenly spaced.
pub fn linear_range(lo: f64, hi: f64, steps: usize) -> std::result::Result<Vec<f64>, String> {
    if steps == 0 || !(hi >= lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(format!("need lo ≤ hi and steps ≥ 1 (got {lo}, {hi}, {steps})"));
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..steps)
        .map(|i| if i == steps - 1 { hi } else { lo + (hi - lo) * i as f64 / (steps - 1) as f64 })
        .collect())
}

pub fn n_range(lo: f64, hi: f64, steps: usize) -> std::result::Result<Vec<f64>, String> {
    geometric_range(lo, hi, steps).map_err(err)
}
