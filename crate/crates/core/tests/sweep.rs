// SPDX-License-Identifier: Apache-2.0
//! Sweep engine: checkpoint resume, worker-count invariance, outputs.

use comet_core::config::parse_config;
use comet_core::dse::{enumerate_space, rows_to_csv, run_sweep, ParameterSpace, SweepContext, SweepMode};
use comet_core::io::{emit_plotdata, summarize, summary_json, PlotKind, PlotSource};
use comet_core::units::MaterialParams;

fn small_space() -> ParameterSpace {
    ParameterSpace {
        ms_values: vec![0.3e6, 0.5e6],
        ku_values: vec![0.5e6, 1e6],
        a_values: vec![10e-12],
        alpha_values: vec![0.01],
        jc_values: vec![1e11, 3e11, 1e12],
        vfe_values: vec![],
    }
}

#[test]
fn worker_count_does_not_change_results() {
    let pts = enumerate_space(&small_space(), &MaterialParams::default(), None);
    let ctx = SweepContext::default();
    let a = run_sweep(&pts, SweepMode::Propagation, &ctx, 1, None).unwrap();
    let b = run_sweep(&pts, SweepMode::Propagation, &ctx, 3, None).unwrap();
    assert_eq!(rows_to_csv(&a.rows).unwrap(), rows_to_csv(&b.rows).unwrap());
    assert!(a.rows.iter().all(|r| r.status == "ok"));
}

#[test]
fn interrupted_sweep_resumes_from_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("ck.csv");
    let pts = enumerate_space(&small_space(), &MaterialParams::default(), None);
    let ctx = SweepContext::default();
    let full = run_sweep(&pts, SweepMode::Propagation, &ctx, 1, None).unwrap();

    // first half, then the whole set against the same checkpoint
    run_sweep(&pts[..5], SweepMode::Propagation, &ctx, 2, Some(&ck)).unwrap();
    let resumed = run_sweep(&pts, SweepMode::Propagation, &ctx, 2, Some(&ck)).unwrap();
    assert_eq!(resumed.resumed, 5);
    assert_eq!(rows_to_csv(&resumed.rows).unwrap(), rows_to_csv(&full.rows).unwrap());
    let lines = std::fs::read_to_string(&ck).unwrap().lines().count();
    assert_eq!(lines, 1 + pts.len());

    // a checkpoint of another mode is refused
    assert!(run_sweep(&pts, SweepMode::Nucleation, &ctx, 1, Some(&ck)).is_err());
}

#[test]
fn full_gate_sweep_outputs_are_byte_stable() {
    let cfg = parse_config(
        r#"
        [sweep]
        ms_values = ["0.5e6 A/m"]
        ku_values = ["0.6e6 J/m^3"]
        a_values = ["10 pJ/m"]
        alpha_values = [0.01]
        jc_values = [1e11, 5e11]
        vfe_values = ["110 mV", "150 mV"]
        "#,
    )
    .unwrap();
    let pts = enumerate_space(&cfg.sweep.space, &cfg.material, None);
    assert_eq!(pts.len(), 4);
    let ctx = cfg.sweep_context();
    let run = || {
        let o = run_sweep(&pts, SweepMode::FullGate, &ctx, 2, None).unwrap();
        (
            rows_to_csv(&o.rows).unwrap(),
            summary_json(&summarize(&o.rows, cfg.sweep.knee)).unwrap(),
            emit_plotdata(PlotKind::FigEdp, PlotSource::Sweep(&o.rows)).unwrap(),
        )
    };
    let (a, b) = (run(), run());
    assert_eq!(a, b);
    assert_eq!(a.2.lines().count(), 5);
    assert!(!a.0.contains("failed"));
}
