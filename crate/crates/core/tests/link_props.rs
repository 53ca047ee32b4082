//! Link-budget properties against a hand-written oracle.

use proptest::prelude::*;
use rwa_ntn::link::{atmospheric_loss, compute_cnr, fspl, rescale_cnr, LossBreakdown, LossModel};
use rwa_ntn::scenario::{builtin_file, Band};

/// Friis path loss written out from 4πd/λ.
fn fspl_oracle(d_km: f64, f_ghz: f64) -> f64 {
    let lambda_m = 299_792_458.0 / (f_ghz * 1e9);
    20.0 * (4.0 * std::f64::consts::PI * d_km * 1e3 / lambda_m).log10()
}

#[test]
fn fspl_matches_friis() {
    for (d, f) in [(500.0, 2.0), (1600.0, 29.5), (38_000.0, 14.25), (8063.0, 19.0)] {
        // the 92.45 constant is a rounding of the Friis constant
        assert!((fspl(d, f).unwrap() - fspl_oracle(d, f)).abs() < 0.01, "{d} {f}");
    }
}

#[test]
fn rain_loss_follows_power_law() {
    let model = LossModel::default();
    // 20 GHz sits on a table row: k = 0.09164, α = 1.0568
    let gamma = 0.09164 * 25f64.powf(1.0568);
    let path = 3.0 / 40f64.to_radians().sin();
    let atm = atmospheric_loss(40.0, 20.0, 25.0, &model).unwrap();
    assert!((atm.rain_db - gamma * path).abs() < 1e-9);
    assert!((atm.gaseous_db - 0.25 * path / 3.0).abs() < 1e-12);
    assert!((atm.cloud_db - 0.3 * path / 3.0).abs() < 1e-12);
}

proptest! {
    #[test]
    fn decomposition_sums_and_is_non_negative(el in 1.0f64..90.0, f in 1.0f64..40.0, rain in 0.0f64..100.0, d in 300.0f64..42_000.0) {
        let atm = atmospheric_loss(el, f, rain, &LossModel::default()).unwrap();
        let fs = fspl(d, f).unwrap();
        let b = LossBreakdown::new(fs, atm.gaseous_db, atm.rain_db, atm.cloud_db);
        prop_assert!((b.total_db - (b.fspl_db + b.gaseous_db + b.rain_db + b.cloud_db)).abs() < 1e-9);
        prop_assert!(b.fspl_db >= 0.0 && b.gaseous_db >= 0.0 && b.rain_db >= 0.0 && b.cloud_db >= 0.0);
    }

    #[test]
    fn fspl_is_strictly_increasing(d in 100.0f64..40_000.0, f in 1.0f64..40.0, dd in 0.001f64..1000.0, df in 0.001f64..5.0) {
        prop_assert!(fspl(d + dd, f).unwrap() > fspl(d, f).unwrap());
        prop_assert!(fspl(d, f + df).unwrap() > fspl(d, f).unwrap());
    }

    #[test]
    fn rescale_round_trips(c in -60.0f64..40.0, b in 1.0f64..400.0, ratio in 1.0f64..100.0) {
        let reduced = b / ratio;
        let there = rescale_cnr(c, b, reduced).unwrap();
        prop_assert!((there - c - 10.0 * ratio.log10()).abs() < 1e-9);
        // back up to the wider bandwidth is the same identity with the ratio inverted
        let back = there + 10.0 * (reduced / b).log10();
        prop_assert!((back - c).abs() < 1e-9);
    }

    #[test]
    fn cnr_is_monotone(eirp in 0.0f64..70.0, gt in -30.0f64..20.0, loss in 150.0f64..220.0, pen in 0.0f64..10.0, bw in 1.0f64..400.0, step in 0.0f64..10.0) {
        let c = compute_cnr(eirp, gt, loss, pen, bw);
        prop_assert!(compute_cnr(eirp + step, gt, loss, pen, bw) >= c);
        prop_assert!(compute_cnr(eirp, gt + step, loss, pen, bw) >= c);
        prop_assert!(compute_cnr(eirp, gt, loss - step, pen, bw) >= c);
        prop_assert!(compute_cnr(eirp, gt, loss, pen - step, bw) >= c);
    }

    #[test]
    fn rain_loss_grows_with_rate_and_lower_elevation(el in 5.0f64..89.0, f in 2.0f64..40.0, r in 0.1f64..50.0) {
        let m = LossModel::default();
        let base = atmospheric_loss(el, f, r, &m).unwrap().rain_db;
        prop_assert!(atmospheric_loss(el, f, r * 1.5, &m).unwrap().rain_db > base);
        prop_assert!(atmospheric_loss(el - 1.0, f, r, &m).unwrap().rain_db >= base);
    }
}

#[test]
fn widening_is_rejected() {
    assert!(rescale_cnr(0.0, 5.0, 30.0).is_err());
    assert!(rescale_cnr(0.0, 0.0, 0.0).is_err());
}

#[test]
fn downlink_cnr_ordering_follows_beam_eirp() {
    let file = builtin_file();
    let mut by_eirp: Vec<(f64, f64)> = file
        .constellations
        .iter()
        .map(|c| {
            let p = c.payload(Band::Ka).unwrap();
            (p.beam_eirp_dbw, compute_cnr(p.beam_eirp_dbw, 10.0, 190.0, 0.0, 400.0))
        })
        .collect();
    by_eirp.sort_by(|a, b| a.0.total_cmp(&b.0));
    assert!(by_eirp.windows(2).all(|w| w[0].1 < w[1].1));
}
