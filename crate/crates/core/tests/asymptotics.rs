use std::f64::consts::PI;

use softvq::asymptotics::{
    asymptotic_crossing_m, boundary_two_three, expand_large_m, expand_large_n, limit_n1,
    linear_manifold_limit, small_overlap_s, Validity,
};
use softvq::solver::{analytic_optimum, solve_s};
use softvq::{Manifold, ProblemSpec, Regime};

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn large_m_error_shrinks_like_a_high_power() {
    for man in Manifold::ALL {
        let m = |k: f64| match man {
            Manifold::TorusJoint => k * k,
            Manifold::TorusFactorial => 2.0 * k,
            Manifold::Circle => k,
        };
        let err = |k: f64| {
            let sp = ProblemSpec::new(man, m(k), 3.0).unwrap();
            let ex = analytic_optimum(&sp).unwrap();
            let se = expand_large_m(&sp);
            assert_eq!(se.validity, Validity::LargeM);
            (
                (ex.s - se.s).abs(),
                rel(se.r, ex.r),
                rel(se.d_total, ex.d_total),
            )
        };
        let (a, b) = (err(50.0), err(100.0));
        // Neglected terms are O(h⁵) in s and O(h⁴) in r, D; allow slack for mixed orders.
        assert!(b.0 < a.0 / 20.0, "{man:?} s {:e} {:e}", a.0, b.0);
        assert!(b.1 < a.1 / 10.0, "{man:?} r {:e} {:e}", a.1, b.1);
        assert!(b.2 < a.2 / 3.5, "{man:?} D {:e} {:e}", a.2, b.2);
        assert!(b.0 < 1e-8 && b.1 < 1e-6 && b.2 < 1e-3, "{man:?} {b:?}");
    }
}

#[test]
fn n1_limit_is_continuous() {
    for man in Manifold::ALL {
        let m = if man == Manifold::TorusJoint { 64.0 } else { 16.0 };
        let lim = limit_n1(&ProblemSpec::new(man, m, 1.0).unwrap());
        let near = analytic_optimum(&ProblemSpec::new(man, m, 1.0 + 1e-7).unwrap()).unwrap();
        assert!(near.s < 1e-6);
        assert!(rel(near.r, lim.r) < 1e-5, "{man:?}");
        assert!(rel(near.d_total, lim.d_total) < 1e-5, "{man:?}");
    }
}

#[test]
fn small_overlap_leading_term() {
    for man in [Manifold::Circle, Manifold::TorusFactorial] {
        let sp = ProblemSpec::new(man, 16.0, 1.001).unwrap();
        let (s, _) = solve_s(&sp).unwrap();
        assert!(rel(small_overlap_s(&sp), s) < 1e-2, "{man:?}");
    }
}

#[test]
fn large_n_error_shrinks() {
    for man in Manifold::ALL {
        let m = match man {
            Manifold::TorusJoint => 64.0,
            Manifold::TorusFactorial => 16.0,
            Manifold::Circle => 8.0,
        };
        let err = |n: f64| {
            let sp = ProblemSpec::new(man, m, n).unwrap();
            let ex = analytic_optimum(&sp).unwrap();
            assert_eq!(ex.regime, Regime::ThreeOverlap);
            let se = expand_large_n(&sp);
            rel(se.d_total, ex.d_total).max(rel(se.r, ex.r)).max(rel(se.s, ex.s))
        };
        let (a, b) = (err(1e5), err(1e7));
        assert!(b < a / 10.0, "{man:?} {a:e} {b:e}");
    }
}

#[test]
fn linear_limit_from_large_m() {
    let n = 4.0;
    let (s_lin, d_lin) = linear_manifold_limit(n);
    let sp = ProblemSpec::new(Manifold::Circle, 2000.0, n).unwrap();
    let opt = analytic_optimum(&sp).unwrap();
    let d = sp.delta();
    assert!(rel(opt.s / d, s_lin) < 1e-5);
    assert!(rel(opt.d_total / (d * d), d_lin) < 1e-5);
}

#[test]
fn boundary_is_where_s_reaches_half_spacing() {
    for man in [Manifold::Circle, Manifold::TorusFactorial] {
        for &m_eff in &[4.0, 8.0, 20.0, 50.0] {
            let b = boundary_two_three(m_eff, man).unwrap();
            let m = if man == Manifold::Circle { m_eff } else { 2.0 * m_eff };
            let sp = ProblemSpec::new(man, m, b.n_exact).unwrap();
            let (s, _) = solve_s(&sp).unwrap();
            assert!(rel(s, sp.half()) < 1e-9, "{man:?} {m_eff}: {s} vs {}", sp.half());
            let below = ProblemSpec::new(man, m, b.n_exact * 0.99).unwrap();
            let above = ProblemSpec::new(man, m, b.n_exact * 1.01).unwrap();
            assert_eq!(solve_s(&below).unwrap().1, Regime::TwoOverlap);
            assert_eq!(solve_s(&above).unwrap().1, Regime::ThreeOverlap);
        }
    }
}

#[test]
fn boundary_asymptote_ratio_tends_to_one() {
    let ratio = |m: f64| {
        let b = boundary_two_three(m, Manifold::Circle).unwrap();
        b.n_exact / b.n_asymptote
    };
    assert!((ratio(200.0) - 1.0).abs() < (ratio(20.0) - 1.0).abs());
    assert!((ratio(200.0) - 1.0).abs() < 1e-3);
}

#[test]
fn boundary_rejects_small_m() {
    assert!(boundary_two_three(3.0, Manifold::Circle).is_err());
}

#[test]
fn crossing_is_where_large_n_forms_tie() {
    let m = asymptotic_crossing_m();
    let j = 2.0 * (PI / m.sqrt()).tan().powi(2);
    let f = 2.0 * (2.0 / (2.0 * PI / m).cos().powi(2) - 1.0);
    assert!((j - f).abs() < 1e-12);
}
