// SPDX-License-Identifier: Apache-2.0
//! Integrator physics on the 90 × 15 strip (15 nm node, 1 nm cells).

use comet_core::llg::{stability_bound, total_energy, GridSpec, MagnetizationGrid, Stepper, Zeeman};
use comet_core::units::{DeviceGeometry, MaterialParams, PhysicalConstants};

fn strip(alpha: f64) -> MagnetizationGrid {
    // material validation rejects α = 0; the grid carries its own copy
    let params = MaterialParams { ms_pma: 0.5e6, ku_pma: 0.6e6, alpha: 0.01, ..MaterialParams::default() };
    let mut g = MagnetizationGrid::build(
        &params,
        &DeviceGeometry::default(),
        &PhysicalConstants::default(),
        &GridSpec::default(),
        false,
    )
    .unwrap();
    assert_eq!((g.nx, g.ny), (90, 15));
    g.alpha = alpha;
    // a smooth twist so every energy term is active
    for iy in 0..g.ny {
        for ix in 0..g.nx {
            let th = 0.6 * (ix as f64 / 14.0).sin() + 0.05 * iy as f64;
            let ph = 0.3 * ix as f64 / 90.0;
            let i = g.index(ix, iy);
            g.cells[i] = [th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()];
        }
    }
    g
}

fn run(g: &mut MagnetizationGrid, dt: f64, steps: usize, mut each: impl FnMut(&MagnetizationGrid, f64)) {
    let mut s = Stepper::new(g);
    let zero = |_: f64| [0.0; 3];
    for k in 0..steps {
        let info = s.step(g, &zero, None, k as f64 * dt, dt, 1e-3).unwrap();
        each(g, info.norm_drift);
    }
}

#[test]
fn unit_norm_drift_per_step_is_small() {
    let mut g = strip(0.01);
    let dt = 0.5 * stability_bound(&g, 0.0);
    let mut worst = 0.0f64;
    run(&mut g, dt, 400, |_, d| worst = worst.max(d));
    assert!(worst < 1e-3, "drift {worst}");
    for m in &g.cells {
        assert!((m.iter().map(|x| x * x).sum::<f64>().sqrt() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn energy_descends_under_damping() {
    let mut g = strip(0.05);
    let dt = 0.5 * stability_bound(&g, 0.0);
    let mut prev = total_energy(&g, &Zeeman::none());
    let e0 = prev;
    let mut violations = 0;
    run(&mut g, dt, 2000, |gr, _| {
        let e = total_energy(gr, &Zeeman::none());
        if e > prev + 1e-10 * prev.abs() {
            violations += 1;
        }
        prev = e;
    });
    assert_eq!(violations, 0);
    assert!(prev < e0);
}

#[test]
fn energy_is_conserved_to_fourth_order_without_damping() {
    let t_end = 20e-12;
    let base = 0.25 * stability_bound(&strip(0.0), 0.0);
    let n0 = (t_end / base).ceil() as usize;
    let err = |n: usize| {
        let mut g = strip(0.0);
        let e0 = total_energy(&g, &Zeeman::none());
        run(&mut g, t_end / n as f64, n, |_, _| {});
        ((total_energy(&g, &Zeeman::none()) - e0) / e0).abs()
    };
    let (e1, e2) = (err(n0), err(2 * n0));
    let ratio = e1 / e2;
    // RK4 global error drops by 2^4 = 16 per halving
    assert!(ratio > 10.0 && ratio < 40.0, "errors {e1:e} → {e2:e}, ratio {ratio}");
}
