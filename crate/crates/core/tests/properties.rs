// SPDX-License-Identifier: Apache-2.0
//! Property tests over the physics and performance layers.

use comet_core::dse::{pareto_indices, ParameterSpace};
use comet_core::dw::{dw_width_bisection, dw_width_fixed_point, propagate, DwConfig};
use comet_core::lkh::{lkh_step, me_field, FeState, LandauCoefficients};
use comet_core::perf::{fe_charge_energy, joule_energy, tx_energy, Drive, EnergyBreakdown, GateReport, StageDelays};
use comet_core::units::{DeviceGeometry, GateKind, MaterialParams, PhysicalConstants, TechNode};
use proptest::prelude::*;

fn brute_front(te: &[(f64, f64)]) -> Vec<usize> {
    let mut out: Vec<usize> = (0..te.len())
        .filter(|&i| {
            !(0..te.len()).any(|j| {
                let (a, b) = (te[j], te[i]);
                (a.0 <= b.0 && a.1 <= b.1 && (a.0 < b.0 || a.1 < b.1)) || (a == b && j < i)
            })
        })
        .collect();
    out.sort_by(|&a, &b| te[a].0.total_cmp(&te[b].0).then(a.cmp(&b)));
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn width_routes_agree(
        ms in 2e5f64..1.2e6,
        ku in 3e5f64..1.5e6,
        a_ex in 5e-12f64..40e-12,
        d in 0.0f64..2e-3,
        h in 0.6e-9f64..3e-9,
        phi in -3.1f64..3.1,
    ) {
        let params = MaterialParams { ms_pma: ms, ku_pma: ku, a_ex, d_dmi: d, ..MaterialParams::default() };
        let geometry = DeviceGeometry { h_pma: h, ..DeviceGeometry::default() };
        let c = PhysicalConstants::default();
        let fp = dw_width_fixed_point(phi, &params, &geometry, &c, None).unwrap();
        let bi = dw_width_bisection(phi, &params, &geometry, &c).unwrap();
        prop_assert!(((fp - bi) / bi).abs() < 1e-10, "{fp} vs {bi}");
    }

    #[test]
    fn landau_wells_and_spinodal(pr in 0.005f64..0.5, ec in 1e6f64..1e9) {
        let c = LandauCoefficients::calibrate(pr, ec).unwrap();
        let slope = |p: f64| 2.0 * c.a2 * p + 4.0 * c.a4 * p.powi(3);
        prop_assert!(slope(pr).abs() <= 1e-9 * ec);
        prop_assert!(slope(-pr).abs() <= 1e-9 * ec);
        // steepest restoring slope, at P_r/√3, is the coercive field
        prop_assert!((slope(pr / 3f64.sqrt()) + ec).abs() <= 1e-9 * ec);
        prop_assert!(c.landau_energy([pr, 0.0, 0.0]) < c.landau_energy([0.5 * pr, 0.0, 0.0]));
    }

    #[test]
    fn lkh_step_descends(p0 in -0.04f64..0.04, e in -5e7f64..5e7) {
        let c = LandauCoefficients::calibrate(0.022, 1.27e7).unwrap();
        let axis = [0.0, 0.0, 1.0];
        let f = |p: f64| c.free_energy([0.0, 0.0, p], [0.0, 0.0, e]);
        let st = FeState { p_vec: [0.0, 0.0, p0], t_now: 0.0 };
        let gamma_v = MaterialParams::default().gamma_v;
        let n = lkh_step(st, [0.0, 0.0, e], &c, gamma_v, 1e-24, Some(axis), 1e-15).unwrap();
        prop_assert!(f(n.p_vec[2]) <= f(p0) + 1e-12 * f(p0).abs());
    }

    #[test]
    fn me_field_is_linear_and_odd(p in -0.1f64..0.1, k in 0.5f64..2.0) {
        let c = PhysicalConstants::default();
        let m = MaterialParams::default();
        let b = |x: f64| me_field([x, 0.0, -x], m.kappa_me, m.h_int, 5e-9, c.eps0, 1.0).unwrap();
        let (b1, bk, bn) = (b(p), b(k * p), b(-p));
        for i in 0..3 {
            prop_assert!((bk[i] - k * b1[i]).abs() <= 1e-12 * (1.0 + bk[i].abs()));
            prop_assert_eq!(bn[i], -b1[i]);
        }
    }

    #[test]
    fn pareto_matches_brute_force(pts in prop::collection::vec((0u32..50, 0u32..50), 0..300)) {
        // coarse integer grid so ties and duplicates are common
        let te: Vec<(f64, f64)> = pts.iter().map(|&(t, e)| (t as f64, e as f64)).collect();
        prop_assert_eq!(pareto_indices(&te), brute_front(&te));
    }

    #[test]
    fn gate_totals_are_twice_the_stage_sums(
        d in prop::array::uniform3(0.0f64..1e-9),
        e in prop::array::uniform4(0.0f64..1e-15),
    ) {
        let delays = StageDelays { t_nucleate: d[0], t_propagate: d[1], t_qtransfer: d[2] };
        let energies = EnergyBreakdown { e_fe: e[0], e_tx: e[1], e_joule: e[2], e_leakage: e[3] };
        let r = GateReport::from_stages(GateKind::Maj3, delays, energies, Drive::default(), 0.0);
        prop_assert_eq!(r.t_comet, 2.0 * (d[0] + d[1] + d[2]));
        prop_assert_eq!(r.e_comet, 2.0 * (e[0] + e[1] + e[2] + e[3]));
        prop_assert_eq!(r.k_inputs, 3);
    }

    #[test]
    fn energy_scalings(v in 0.01f64..1.0, jc in 1e10f64..1e12, k in 1u32..8) {
        let p = MaterialParams::default();
        let g = DeviceGeometry::default();
        let c = PhysicalConstants::default();
        let tr = TechNode::N15.transistor();
        let e1 = fe_charge_energy(k, v, &p, &g, &c).unwrap();
        let e2 = fe_charge_energy(k, 2.0 * v, &p, &g, &c).unwrap();
        prop_assert!((e2 / e1 - 4.0).abs() < 1e-12);
        let j1 = joule_energy(jc, &g, &p, &tr, 1e-10).unwrap();
        let j2 = joule_energy(2.0 * jc, &g, &p, &tr, 1e-10).unwrap();
        prop_assert!((j2 / j1 - 4.0).abs() < 1e-12);
        let t1 = tx_energy(k, v, v, 0.0, tr.c_g).unwrap();
        let t2 = tx_energy(k + 1, v, v, 0.0, tr.c_g).unwrap();
        prop_assert!(t2 > t1);
    }
}

fn design_point() -> (MaterialParams, DeviceGeometry, PhysicalConstants) {
    let p = MaterialParams { ms_pma: 0.3e6, ku_pma: 0.5e6, a_ex: 10e-12, alpha: 0.01, ..MaterialParams::default() };
    (p, DeviceGeometry::default(), PhysicalConstants::default())
}

#[test]
fn reversed_current_reverses_the_wall() {
    let (p, g, c) = design_point();
    let cfg = DwConfig::default();
    let fwd = comet_core::dw::mean_velocity(&p, &g, &c, &cfg, 5e11, 0.2e-9, 0.2e-9).unwrap();
    let back = comet_core::dw::mean_velocity(&p, &g, &c, &cfg, -5e11, 0.2e-9, 0.2e-9).unwrap();
    assert!(fwd > 0.0 && back < 0.0, "{fwd} {back}");
    // mirror image: D → −D together with the current
    let flipped = DwConfig { dmi_sign: -1.0, she_sign: -1.0, ..cfg };
    let mirror = comet_core::dw::mean_velocity(&p, &g, &c, &flipped, 5e11, 0.2e-9, 0.2e-9).unwrap();
    assert!(mirror > 0.0);
}

#[test]
fn delay_falls_and_joule_rises_with_current() {
    let (p, g, c) = design_point();
    let cfg = DwConfig::default();
    let tr = TechNode::N15.transistor();
    let mut prev: Option<(f64, f64)> = None;
    for jc in ParameterSpace::default().jc_values {
        let t = propagate(g.propagation_distance, &p, &g, &c, &cfg, jc).unwrap().t_propagate;
        let e = joule_energy(jc, &g, &p, &tr, t).unwrap();
        if let Some((t0, e0)) = prev {
            assert!(t < t0, "t_propagate not falling at {jc:e}");
            assert!(e > e0, "E_Joule not rising at {jc:e}");
        }
        prev = Some((t, e));
    }
}

#[test]
fn velocity_orders_by_ms() {
    let g = DeviceGeometry::default();
    let c = PhysicalConstants::default();
    let cfg = DwConfig::default();
    let v = |ms: f64| {
        let p = MaterialParams { ms_pma: ms, ku_pma: 0.6e6, a_ex: 10e-12, alpha: 0.01, ..MaterialParams::default() };
        propagate(g.propagation_distance, &p, &g, &c, &cfg, 5e11).unwrap().v_avg
    };
    let (a, b, d) = (v(0.3e6), v(0.4e6), v(0.5e6));
    assert!(a > b && b > d, "{a} {b} {d}");
}
