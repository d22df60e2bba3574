//! End-to-end pipeline: laboratory pulse to validity report.

use proptest::prelude::*;
use singlemode::corrections::{WidthBranch, WIDTH_BRANCH_NOTE};
use singlemode::{build_report, to_natural, ElectronKinematics, SpreadParams, Thresholds};

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a / b - 1.0).abs() <= rel
}

#[test]
fn reference_pulse_report() {
    let p = to_natural(1e22, 800.0, 30.0, 1e-8).unwrap();
    let s = SpreadParams::from_pulse(&p, 1.0).unwrap();
    let e = ElectronKinematics::new(0.127, 0.99).unwrap();
    let r = build_report(&p, &s, &e, Thresholds::default()).unwrap();

    assert!(close(s.omega0, 78539.816, 1e-8));
    assert!(close(s.sigma1, 0.127323954, 1e-8));
    assert!(close(s.sigma2, 0.0141569, 1e-5));
    assert!(close(r.delta, 3.542095813563357, 1e-12));
    assert!(close(r.lambda, 0.2465401, 1e-6));
    assert!(close(r.width_branch_lambda, 0.0098115, 1e-4));
    assert!(close(r.width_branch_inverse, 0.16142, 1e-4));
    assert!(close(r.freq_shift_rel, -7.358e-4, 1e-3));
    assert!(close(r.external_ratio, 1.639e-6, 1e-3));
    assert_eq!(r.width_literal_branch, WidthBranch::InverseLambda);
    assert_eq!(r.width_rel, r.width_branch_lambda);
    assert!(r.notes.iter().any(|n| n == WIDTH_BRANCH_NOTE));
    assert!(r.verdict.all());
}

#[test]
fn long_pulse_keeps_lambda_branch_below_one() {
    let p = to_natural(1e20, 1064.0, 300.0, 1e-8).unwrap();
    let s = SpreadParams::from_pulse(&p, 1.0).unwrap();
    let e = ElectronKinematics::new(0.05, 0.9).unwrap();
    let r = build_report(&p, &s, &e, Thresholds::default()).unwrap();
    assert!(r.lambda < 1.0);
    assert!(r.width_branch_lambda < r.width_branch_inverse);
}

#[test]
fn tight_thresholds_flip_the_verdict() {
    let p = to_natural(1e22, 800.0, 30.0, 1e-8).unwrap();
    let s = SpreadParams::from_pulse(&p, 1.0).unwrap();
    let e = ElectronKinematics::new(0.127, 0.99).unwrap();
    let t = Thresholds { shift: 1e-4, width: 1e-3, mu: 1e-30 };
    let r = build_report(&p, &s, &e, t).unwrap();
    assert!(!r.verdict.shift_ok && !r.verdict.width_ok && !r.verdict.mu_ok);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mu_scales_inversely_with_intensity(log_i in 16.0f64..23.0, factor in 1.5f64..100.0) {
        let e = ElectronKinematics::new(0.127, 0.99).unwrap();
        let p1 = to_natural(10f64.powf(log_i), 800.0, 30.0, 1e-8).unwrap();
        let p2 = p1.with_intensity(p1.intensity_lab * factor).unwrap();
        let s = SpreadParams::from_pulse(&p1, 1.0).unwrap();
        let r1 = build_report(&p1, &s, &e, Thresholds::default()).unwrap();
        let r2 = build_report(&p2, &s, &e, Thresholds::default()).unwrap();
        prop_assert!(close(r1.mu / r2.mu, factor, 1e-12));
    }

    #[test]
    fn width_grows_as_duration_shrinks(tau in 5.0f64..300.0, factor in 1.5f64..10.0) {
        let e = ElectronKinematics::new(0.127, 0.99).unwrap();
        let long = to_natural(1e22, 800.0, tau * factor, 1e-8).unwrap();
        let short = long.with_duration(tau).unwrap();
        let rl = build_report(&long, &SpreadParams::from_pulse(&long, 1.0).unwrap(), &e, Thresholds::default()).unwrap();
        let rs = build_report(&short, &SpreadParams::from_pulse(&short, 1.0).unwrap(), &e, Thresholds::default()).unwrap();
        prop_assert!(close(rs.width_rel / rl.width_rel, factor, 1e-9));
        prop_assert!(close(rs.lambda / rl.lambda, factor, 1e-9));
    }

    #[test]
    fn report_is_finite_over_the_input_box(
        log_i in 14.0f64..24.0,
        wl in 200.0f64..2000.0,
        tau in 1.0f64..1000.0,
        log_spot in -10.0f64..-4.0,
        v_perp in 0.0f64..0.6,
        v_z in 0.01f64..0.79,
    ) {
        let p = to_natural(10f64.powf(log_i), wl, tau, 10f64.powf(log_spot)).unwrap();
        let s = SpreadParams::from_pulse(&p, 1.0).unwrap();
        let e = ElectronKinematics::new(v_perp, v_z).unwrap();
        let r = build_report(&p, &s, &e, Thresholds::default()).unwrap();
        prop_assert!(r.lambda.is_finite() && r.lambda > 0.0);
        prop_assert!(r.mu.is_finite() && r.mu >= 0.0);
        prop_assert!(r.width_branch_lambda >= 0.0 && r.width_branch_inverse >= 0.0);
        prop_assert!(r.collective_fraction > 0.99);
    }
}
