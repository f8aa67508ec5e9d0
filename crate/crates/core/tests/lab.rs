//! Batch-level properties: comparative statics along sweeps, the regime
//! comparison on random scenarios, and oracle spot checks of sweep rows.

use proptest::prelude::*;

use electoral_tariffs::actors::{Lobby, PrCoalition};
use electoral_tariffs::bargaining::{nash_oracle, NashProblem, OracleGrid};
use electoral_tariffs::lab::{sweep, verify_theorem, Param, Scenario, SweepAxis, SweepSpec};

fn axis(param: Param, start: f64, stop: f64, step: f64) -> SweepAxis {
    SweepAxis { param, start, stop, step }
}

#[test]
fn pr_tariff_rises_with_large_party_share() {
    let spec = SweepSpec::new(vec![axis(Param::Alpha, 0.55, 0.95, 0.05)])
        .fix(Param::TM, 2.0)
        .fix(Param::TF, 0.0)
        .fix(Param::TL, 3.0)
        .fix(Param::TS, 1.0);
    let table = sweep(&spec).unwrap();
    let t: Vec<f64> = table.records.iter().map(|r| r.result.as_ref().unwrap().pr.unwrap().t_star).collect();
    assert_eq!(t.len(), 9);
    assert!(t.windows(2).all(|w| w[1] > w[0]), "{t:?}");
}

#[test]
fn gaps_shrink_as_lobby_ideal_rises() {
    // tariff gap is (ideal - t_m)/2 and does not depend on t_f; the transfer
    // gap is linear in t_f with slope -(ideal - t_m)
    let spec = SweepSpec::new(vec![axis(Param::TF, 0.0, 1.75, 0.25)])
        .fix(Param::TM, 2.0)
        .fix(Param::TL, 3.0)
        .fix(Param::TS, 1.0)
        .fix(Param::Alpha, 0.6);
    let table = sweep(&spec).unwrap();
    let reports: Vec<_> = table.records.iter().map(|r| r.result.as_ref().unwrap().report.unwrap()).collect();
    for r in &reports {
        assert!((r.tariff_gap - 0.1).abs() < 1e-12);
        assert!(r.holds);
    }
    assert!(reports.windows(2).all(|w| w[1].transfer_gap < w[0].transfer_gap));
}

#[test]
fn oracle_spot_checks_sweep_rows() {
    let spec = SweepSpec::new(vec![axis(Param::TM, 1.5, 4.5, 0.1), axis(Param::Alpha, 0.05, 0.95, 0.05)])
        .fix(Param::TF, 0.5)
        .fix(Param::TL, 5.0)
        .fix(Param::TS, 1.0);
    let table = sweep(&spec).unwrap();
    let grid = OracleGrid::with_points(501);
    let valid: Vec<_> = table.records.iter().filter_map(|r| r.result.as_ref().ok()).collect();
    assert!(valid.len() > 100);
    // every 50th valid row, about 2% of the table
    for ev in valid.iter().step_by(50) {
        let s = &ev.scenario;
        let smd = nash_oracle(s.t_m, s.t_f, &grid).unwrap();
        assert!((smd.t - ev.smd.t_star).abs() <= 1e-6 && (smd.m - ev.smd.m_star).abs() <= 1e-6);
        let c = s.coalition.unwrap();
        let pr = NashProblem::new(&c, c.ideal(), &Lobby { t_f: s.t_f }).unwrap().solve(&grid).unwrap();
        let want = ev.pr.unwrap();
        assert!((pr.t - want.t_star).abs() <= 1e-6 && (pr.m - want.m_star).abs() <= 1e-6);
    }
}

prop_compose! {
    fn valid_scenario()(t_s in 0.1..5.0f64, above in 0.1..5.0f64, spread in 0.1..10.0f64,
                        lobby in 0.0..0.99f64, alpha_slack in 0.01..0.99f64) -> Scenario {
        let t_m = t_s + above;
        let t_l = t_m + spread;
        // alpha above the threshold where the weighted ideal reaches t_m
        let threshold = (t_m - t_s) / (t_l - t_s);
        let alpha = threshold + alpha_slack * (1.0 - threshold);
        let t_f = lobby * t_m;
        Scenario::new(t_m, t_f, Some(PrCoalition::new(t_l, t_s, alpha).unwrap()), "prop").unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn coalition_government_pays_more_and_protects_more(s in valid_scenario()) {
        let r = verify_theorem(&s).unwrap();
        prop_assert!(r.holds);
        prop_assert!(r.tariff_gap > 0.0 && r.transfer_gap > 0.0);
    }
}
