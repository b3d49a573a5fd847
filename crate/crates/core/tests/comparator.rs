use softvq::asymptotics::asymptotic_crossing_m;
use softvq::comparator::{compare, geometric_range, sweep, sweep_with, winner_boundary, Winner};
use softvq::Execution;

#[test]
fn known_winners() {
    let a = compare(8.0, 100.0).unwrap();
    assert_eq!(a.winner, Winner::Factorial);
    assert!((a.d_joint - 0.132_92).abs() < 1e-5, "{}", a.d_joint);
    assert!((a.d_factorial - 0.104_12).abs() < 1e-5, "{}", a.d_factorial);
    assert!(a.rel_gap < 0.0);
    let b = compare(16.0, 1e4).unwrap();
    assert_eq!(b.winner, Winner::Joint);
    assert!(b.rel_gap > 0.0);
}

#[test]
fn rel_gap_signs_across_n() {
    // Factorial wins at M = 8 for large n, by a growing margin.
    let gaps: Vec<f64> = [1e2, 1e3, 1e4]
        .iter()
        .map(|&n| compare(8.0, n).unwrap().rel_gap)
        .collect();
    assert!(gaps.iter().all(|&g| g < 0.0));
    assert!(gaps[2] < gaps[0]);
    for &n in &[1.0, 2.0, 10.0, 1e3, 1e6] {
        assert!(compare(16.0, n).unwrap().rel_gap > 0.0, "n = {n}");
    }
}

#[test]
fn boundary_approaches_asymptotic_crossing() {
    let m6 = winner_boundary(1e6).unwrap().unwrap();
    assert!((m6 - asymptotic_crossing_m()).abs() < 0.05, "{m6}");
    let m3 = winner_boundary(1e3).unwrap().unwrap();
    assert!(m3 > 11.0 && m3 < 12.0, "{m3}");
    assert!(compare(m3 - 0.01, 1e3).unwrap().winner == Winner::Factorial);
    assert!(compare(m3 + 0.01, 1e3).unwrap().winner == Winner::Joint);
}

#[test]
fn no_boundary_at_small_n() {
    assert_eq!(winner_boundary(3.0).unwrap(), None);
    assert_eq!(winner_boundary(5.0).unwrap(), None);
}

#[test]
fn sweep_is_m_major_and_drops_small_m() {
    let sw = sweep(&[16.0, 6.0, 8.0], 2.0, 200.0, 3).unwrap();
    assert_eq!(sw.excluded_m, vec![6.0]);
    let keys: Vec<(f64, f64)> = sw.rows.iter().map(|r| (r.m, r.n)).collect();
    let ns = geometric_range(2.0, 200.0, 3).unwrap();
    assert_eq!(keys[0], (16.0, ns[0]));
    assert_eq!(keys[2], (16.0, ns[2]));
    assert_eq!(keys[3], (8.0, ns[0]));
    assert_eq!(keys.len(), 6);
    assert!((ns[1] - 20.0).abs() < 1e-12);
}

#[test]
fn sweep_is_execution_independent() {
    let ms: Vec<f64> = (8..=40).map(f64::from).collect();
    let a = sweep_with(&ms, 1.0, 1e5, 25, Execution::Parallel).unwrap();
    let b = sweep_with(&ms, 1.0, 1e5, 25, Execution::Sequential).unwrap();
    assert_eq!(a, b);
}
