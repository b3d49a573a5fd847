use std::f64::consts::PI;

use proptest::prelude::*;
use softvq::asymptotics::boundary_two_three;
use softvq::solver::{analytic_optimum, objective_closed_form, optimal_r, residual_s, solve_s};
use softvq::{solve, Manifold, ProblemSpec, Regime};

fn circle(m: f64, n: f64) -> ProblemSpec {
    ProblemSpec::new(Manifold::Circle, m, n).unwrap()
}

#[test]
fn circle_m8_n2_values() {
    // Independent high-precision root of sin s/sin h = ½(1/h) sin h (cos s + s sin s).
    let sol = solve(&circle(8.0, 2.0)).unwrap();
    assert_eq!(sol.regime, Regime::TwoOverlap);
    assert!((sol.s - 0.190_990_501_3).abs() < 1e-10, "{}", sol.s);
    assert!((sol.r - 0.992_107_118_5).abs() < 1e-10, "{}", sol.r);
    assert!((sol.d_total - 0.078_069_276_5).abs() < 1e-10, "{}", sol.d_total);
    assert!((sol.d1 + sol.d2 - sol.d_total).abs() < 1e-11);
}

#[test]
fn circle_m8_n100_is_three_overlap() {
    let sol = solve(&circle(8.0, 100.0)).unwrap();
    assert_eq!(sol.regime, Regime::ThreeOverlap);
    assert!((sol.s_normalized() - 1.391_81).abs() < 1e-5);
}

#[test]
fn n_equals_one() {
    let sol = solve(&circle(8.0, 1.0)).unwrap();
    assert_eq!(sol.s, 0.0);
    assert_eq!(sol.d2, 0.0);
    let h = PI / 8.0;
    assert!((sol.r - h.sin() / h).abs() < 1e-16);
    assert!((sol.d1 - sol.d_total).abs() < 1e-12);
}

#[test]
fn joint_is_twice_circle_at_root_m() {
    for &(m, n) in &[(16.0, 2.0), (64.0, 30.0), (100.0, 1e3)] {
        let j = analytic_optimum(&ProblemSpec::new(Manifold::TorusJoint, m, n).unwrap()).unwrap();
        let c = analytic_optimum(&circle(m.sqrt(), n)).unwrap();
        assert_eq!(j.s, c.s);
        assert_eq!(j.r, c.r);
        assert_eq!(j.d_total, 2.0 * c.d_total);
    }
}

#[test]
fn factorial_two_overlap_matches_circle_at_shifted_n() {
    // Two-overlap s-equation of the factorial torus is the circle one with n → (n + 1)/2.
    for &(m, n) in &[(16.0, 2.0), (32.0, 5.0), (64.0, 20.0)] {
        let f = ProblemSpec::new(Manifold::TorusFactorial, m, n).unwrap();
        let (s_f, reg) = solve_s(&f).unwrap();
        assert_eq!(reg, Regime::TwoOverlap);
        let (s_c, _) = solve_s(&circle(m / 2.0, 0.5 * (n + 1.0))).unwrap();
        assert!((s_f - s_c).abs() < 1e-14, "{s_f} {s_c}");
    }
}

#[test]
fn residual_vanishes_at_root() {
    for man in [Manifold::Circle, Manifold::TorusFactorial] {
        for &n in &[1.2, 2.0, 7.0, 80.0, 5e3] {
            let m = if man == Manifold::Circle { 10.0 } else { 20.0 };
            let sp = ProblemSpec::new(man, m, n).unwrap();
            let (s, reg) = solve_s(&sp).unwrap();
            let res = residual_s(&sp, s, reg).unwrap();
            assert!(res.abs() < 1e-14, "{man:?} n={n}: {res}");
        }
    }
}

#[test]
fn out_of_range_s_is_a_domain_error() {
    let sp = circle(8.0, 3.0);
    assert!(residual_s(&sp, -0.1, Regime::TwoOverlap).is_err());
    assert!(residual_s(&sp, PI / 4.0 + 0.01, Regime::ThreeOverlap).is_err());
}

#[test]
fn optimal_r_continuous_across_regimes() {
    let sp = circle(8.0, 30.0);
    let h = sp.half();
    let a = optimal_r(&sp, h, Regime::TwoOverlap).unwrap();
    let b = optimal_r(&sp, h, Regime::ThreeOverlap).unwrap();
    assert!((a - b).abs() < 1e-15);
}

#[test]
fn objective_continuous_across_regimes() {
    // The minimum forms hold only at the optimal s, which is Δ/2 on the boundary.
    for man in [Manifold::Circle, Manifold::TorusFactorial] {
        let n = boundary_two_three(8.0, man).unwrap().n_exact;
        let m = if man == Manifold::Circle { 8.0 } else { 16.0 };
        let sp = ProblemSpec::new(man, m, n).unwrap();
        let h = sp.half();
        let a = objective_closed_form(&sp, h, Regime::TwoOverlap);
        let b = objective_closed_form(&sp, h, Regime::ThreeOverlap);
        assert!((a - b).abs() < 1e-13, "{man:?} {a} {b}");
    }
}

#[test]
fn factorial_single_event_adds_two() {
    for &m in &[8.0, 16.0, 50.0] {
        let f = analytic_optimum(&ProblemSpec::new(Manifold::TorusFactorial, m, 1.0).unwrap()).unwrap();
        let c = analytic_optimum(&circle(m / 2.0, 1.0)).unwrap();
        assert_eq!(f.d_total, c.d_total + 2.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn optimum_lies_in_its_regime(m in 4.0f64..200.0, n in 1.0001f64..1e6, fac in any::<bool>()) {
        let man = if fac { Manifold::TorusFactorial } else { Manifold::Circle };
        let sp = ProblemSpec::new(man, if fac { 2.0 * m } else { m }, n).unwrap();
        let opt = analytic_optimum(&sp).unwrap();
        prop_assert_eq!(Regime::classify(opt.s, sp.half()), Some(opt.regime));
        prop_assert!(opt.r > 0.0 && opt.d_total > 0.0);
    }

    #[test]
    fn s_increases_and_d_decreases_with_n(m in 4.0f64..100.0, n in 1.0001f64..1e5, fac in any::<bool>()) {
        let man = if fac { Manifold::TorusFactorial } else { Manifold::Circle };
        let sp = ProblemSpec::new(man, if fac { 2.0 * m } else { m }, n).unwrap();
        let a = analytic_optimum(&sp).unwrap();
        let b = analytic_optimum(&sp.with_n(n * 1.1).unwrap()).unwrap();
        prop_assert!(b.s > a.s, "s {} -> {}", a.s, b.s);
        prop_assert!(b.d_total < a.d_total, "D {} -> {}", a.d_total, b.d_total);
    }

    #[test]
    fn d_increases_with_spacing(m in 4.0f64..100.0, n in 1.0f64..1e4) {
        let a = analytic_optimum(&circle(m, n)).unwrap();
        let b = analytic_optimum(&circle(m * 1.1, n)).unwrap();
        prop_assert!(b.d_total < a.d_total);
    }
}
