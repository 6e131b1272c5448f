mod common;

use common::*;
use pmcw_core::io::{code_from_json, code_from_text, code_to_json, code_to_text, rd_map_to_csv, rd_maps_to_pgm};
use pmcw_core::{interference_power_db, simulate, threshold_detect, DesignGrid, PhaseCode, Scenario};
use proptest::prelude::*;

#[test]
fn two_vehicle_random_pair_report() {
    let s = Scenario::<f64>::two_vehicle(3);
    let x = PhaseCode::seeded(50, 1).unwrap();
    let y = PhaseCode::seeded(50, 2).unwrap();
    let rd = simulate(&x, &y, &s).unwrap();
    let truth = s.expected_target_bins()[0];
    let report = threshold_detect(&rd, -20.0).unwrap().with_ground_truth(truth);
    assert!(report.target_detected());
    let mags: Vec<f64> = report.detections.iter().map(|d| d.magnitude_db).collect();
    assert!(mags.windows(2).all(|w| w[0] >= w[1]));
    assert!(mags.iter().all(|&m| (-20.0..=0.0).contains(&m)));
    assert_eq!(mags[0], 0.0);
    assert!(report.summary_line().contains("detected"));
}

#[test]
fn same_code_scores_ten_log_k() {
    let x = PhaseCode::<f64>::seeded(32, 5).unwrap();
    let db = interference_power_db(&x, &x, &DesignGrid::zero_lag()).unwrap();
    assert!((db - 10.0 * 32f64.log10()).abs() < 1e-12);
}

#[test]
fn io_round_trips_are_exact() {
    let x = PhaseCode::<f64>::seeded(17, 3).unwrap();
    assert_eq!(code_from_text::<f64>(&code_to_text(&x)).unwrap(), x);
    assert_eq!(code_from_json::<f64>(&code_to_json(&x)).unwrap(), x);
}

#[test]
fn map_exports_have_expected_shape() {
    let s = Scenario::<f64>::two_vehicle(0);
    let x = PhaseCode::seeded(50, 1).unwrap();
    let rd = simulate(&x, &x, &s).unwrap();
    let csv = rd_map_to_csv(&rd);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 51);
    assert!(lines.iter().all(|l| l.split(',').count() == 141));
    let pgm = rd_maps_to_pgm(&[&rd, &rd]);
    assert!(pgm.starts_with(b"P5\n"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn detections_ignore_global_scale(seed in 0u64..1000, exp in -20i32..20, threshold in -40.0f64..-3.0) {
        let s = Scenario::<f64>::two_vehicle(seed);
        let x = PhaseCode::seeded(50, seed).unwrap();
        let y = PhaseCode::seeded(50, seed + 1).unwrap();
        let rd = simulate(&x, &y, &s).unwrap();
        let base = threshold_detect(&rd, threshold).unwrap();
        let scaled = threshold_detect(&rd.scaled(2f64.powi(exp)), threshold).unwrap();
        prop_assert_eq!(base.bins(), scaled.bins());
        let bumped = threshold_detect(&rd.scaled(3.7), threshold).unwrap();
        prop_assert_eq!(base.bins(), bumped.bins());
    }

    #[test]
    fn interference_power_ignores_global_phases(seed in any::<u64>(), a in -10.0f64..10.0, b in -10.0f64..10.0) {
        let x = PhaseCode::<f64>::seeded(24, seed).unwrap();
        let y = PhaseCode::<f64>::seeded(24, seed ^ 0xABCD).unwrap();
        let grid = DesignGrid::new(5, 2, 0.02).unwrap();
        let base = interference_power_db(&x, &y, &grid).unwrap();
        let rot = interference_power_db(&x.rotated(a), &y.rotated(b), &grid).unwrap();
        prop_assert!((base - rot).abs() < 1e-9);
        let direct = 10.0 * (objective_oracle(x.entries(), y.entries(), 5, 2, 0.02) / (55.0 * 24.0)).log10();
        prop_assert!((base - direct).abs() < 1e-9);
    }
}
