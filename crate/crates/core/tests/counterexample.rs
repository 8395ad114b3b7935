use std::f64::consts::PI;

use gjl_core::counterexample::{
    build_h, build_h_tilde, cb_norm_report, family_norm, jets_at_origin, obstruction_demo,
    Conclusion, TorusPotential, TrigTerm,
};
use gjl_core::TimeGrid;

/// `|h_20|_10 + max_kappa |h~_20|_10`, frozen after calibration. The
/// `sin^2 x` term alone contributes `2^9 sin(pi/40)`, so the value cannot
/// approach zero at this `B`.
const NORM_N20_B10: f64 = 208.481_360_827_892_3;

#[test]
fn norm_decay_is_monotone_and_matches_frozen_value() {
    let values: Vec<f64> = (10..=20).map(|n| family_norm(n, 10).unwrap()).collect();
    assert!(values.windows(2).all(|w| w[1] < w[0]), "{values:?}");
    let last = values[10];
    assert!((last - NORM_N20_B10).abs() < 1e-9 * NORM_N20_B10, "{last}");
    // lower bound from the leading term of the tenth x-derivative
    let leading = 2f64.powi(9) * (PI / 40.0).sin();
    assert!(last > 2.0 * leading);
}

#[test]
fn norm_of_h_matches_closed_form_sup() {
    // d^B/dx^B of c sin^2 x = -c 2^(B-1) cos(2x + B pi/2), sup c 2^(B-1)
    for n in [3, 7] {
        let c = 0.5 * (PI / (2.0 * n as f64)).sin();
        for b in [2, 4, 7] {
            let got = cb_norm_report(&build_h(n).unwrap(), b);
            let want = c * 2f64.powi(b as i32 - 1);
            assert!(
                (got - want).abs() < 1e-12 * want,
                "n {n} b {b}: {got} vs {want}"
            );
        }
        assert!((cb_norm_report(&build_h(n).unwrap(), 0) - c).abs() < 1e-15);
    }
}

#[test]
fn jets_of_h_tilde_agree_below_the_top_degree() {
    for n in 3..=6 {
        let h = jets_at_origin(&build_h(n).unwrap(), 2 * n).unwrap();
        for kappa in 0..=n {
            let t = jets_at_origin(&build_h_tilde(n, kappa, 0.5).unwrap(), 2 * n).unwrap();
            for d in (2..2 * n).step_by(2) {
                assert_eq!(h.order(d), t.order(d));
            }
            let diff: Vec<f64> = t
                .order(2 * n)
                .iter()
                .zip(h.order(2 * n))
                .map(|(a, b)| a - b)
                .collect();
            assert!((diff[kappa] - 0.5).abs() < 1e-15);
        }
    }
}

#[test]
fn demos_are_consistent() {
    let grid = TimeGrid::new(64).unwrap();
    for n in 3..=6 {
        let d = obstruction_demo(n, &grid).unwrap();
        assert_eq!(d.resonant_order, 2 * n);
        assert!((d.epsilon - PI / (4.0 * n as f64)).abs() < 1e-10);
        assert_eq!(d.shared_data_mismatch, 0.0);
        assert!(
            (d.difference - d.expected_difference).abs() <= 1e-12 * d.expected_difference.abs()
        );
        assert!(!matches!(d.conclusion, Conclusion::Both));
        // kappa maximizes |v|, ties to the smallest index
        let best = d.v.iter().map(|v| v.abs()).fold(0.0, f64::max);
        assert_eq!(d.v[d.kappa].abs(), best);
        assert!(d.v[..d.kappa].iter().all(|v| v.abs() < best));
    }
}

#[test]
fn potential_round_trips_through_json() {
    let p = TorusPotential::new(vec![TrigTerm {
        coeff: 0.1,
        sin_x_power: 4,
        sin_y_power: 2,
    }])
    .unwrap();
    let s = serde_json::to_string(&p).unwrap();
    let back: TorusPotential = serde_json::from_str(&s).unwrap();
    assert_eq!(back.validated().unwrap(), p);
}
