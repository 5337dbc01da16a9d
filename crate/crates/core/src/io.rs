// SPDX-License-Identifier: Apache-2.0
//! File formats: benchmark tables, tidy plot data, sweep summaries and
//! solver traces.
//!
//! Machine files hold SI values in shortest round-trip form. Display files
//! use fixed decimals in ps and aJ. Nothing written here carries a
//! timestamp; run provenance goes to a separate sidecar.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::dse::{pareto_front_rows, robust_point, FrontPoint, ParetoFront, ResultRow, RobustPick};
use crate::dw::DwSample;
use crate::error::{Error, Result};
use crate::lkh::{lkh_advance, me_field, voltage_to_field, FeState};
use crate::llg::FerroParams;
use crate::perf::{Drive, EnergyBreakdown, GateReport, StageDelays};
use crate::units::{DeviceGeometry, GateKind, MaterialParams, PhysicalConstants};
use crate::vec3;

const PS: f64 = 1e12;
const AJ: f64 = 1e18;

/// Display columns, in benchmark-table order.
pub const TABLE2_HEADER: [&str; 11] = [
    "gate",
    "v_fe_mV",
    "t_nucleate_ps",
    "t_propagate_ps",
    "t_qtransfer_ps",
    "t_comet_ps",
    "e_fe_aJ",
    "e_tx_aJ",
    "e_joule_aJ",
    "e_leakage_aJ",
    "e_comet_aJ",
];

/// Machine columns (SI). Everything needed to rebuild a [`GateReport`].
pub const TABLE2_MACHINE_HEADER: [&str; 17] = [
    "gate",
    "k_inputs",
    "v_fe",
    "t_nucleate",
    "t_propagate",
    "t_qtransfer",
    "t_comet",
    "e_fe",
    "e_tx",
    "e_joule",
    "e_leakage",
    "e_comet",
    "j_c",
    "v_prop",
    "v_rst",
    "v_out",
    "node",
];

/// The two renderings of one table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table2Csv {
    pub display: String,
    pub machine: String,
}

fn csv_line(fields: &[String]) -> String {
    let mut line = fields.join(",");
    line.push('\n');
    line
}

/// Shortest round-trip text of `x`.
pub fn fmt_num(x: f64) -> String {
    format!("{x:?}")
}

/// Render `reports` as the benchmark table. `node` labels each machine row
/// (empty when unknown).
pub fn emit_table2(reports: &[GateReport], node: &str) -> Table2Csv {
    let mut display = csv_line(&TABLE2_HEADER.map(String::from));
    let mut machine = csv_line(&TABLE2_MACHINE_HEADER.map(String::from));
    for r in reports {
        let d = |x: f64| format!("{:.1}", x);
        display.push_str(&csv_line(&[
            r.gate_kind.label(),
            d(r.drive.v_fe * 1e3),
            d(r.delays.t_nucleate * PS),
            d(r.delays.t_propagate * PS),
            d(r.delays.t_qtransfer * PS),
            d(r.t_comet * PS),
            d(r.energies.e_fe * AJ),
            d(r.energies.e_tx * AJ),
            d(r.energies.e_joule * AJ),
            d(r.energies.e_leakage * AJ),
            d(r.e_comet * AJ),
        ]));
        let m = fmt_num;
        machine.push_str(&csv_line(&[
            r.gate_kind.label(),
            r.k_inputs.to_string(),
            m(r.drive.v_fe),
            m(r.delays.t_nucleate),
            m(r.delays.t_propagate),
            m(r.delays.t_qtransfer),
            m(r.t_comet),
            m(r.energies.e_fe),
            m(r.energies.e_tx),
            m(r.energies.e_joule),
            m(r.energies.e_leakage),
            m(r.e_comet),
            m(r.drive.j_c),
            m(r.drive.v_prop),
            m(r.drive.v_rst),
            m(r.v_out),
            node.to_string(),
        ]));
    }
    Table2Csv { display, machine }
}

/// Parse a machine table back into reports.
pub fn parse_table2_machine(text: &str) -> Result<Vec<GateReport>> {
    let mut rd = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header: Vec<String> = rd.headers()?.iter().map(String::from).collect();
    if header != TABLE2_MACHINE_HEADER {
        return Err(Error::Config(format!("unexpected table header: {}", header.join(","))));
    }
    let mut out = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        let num = |i: usize| -> Result<f64> {
            f64::from_str(&rec[i]).map_err(|_| Error::Config(format!("column {}: `{}` is not a number", TABLE2_MACHINE_HEADER[i], &rec[i])))
        };
        let gate_kind = GateKind::from_str(&rec[0])?;
        let k_inputs = rec[1].parse().map_err(|_| Error::Config(format!("bad k_inputs `{}`", &rec[1])))?;
        out.push(GateReport {
            gate_kind,
            k_inputs,
            delays: StageDelays { t_nucleate: num(3)?, t_propagate: num(4)?, t_qtransfer: num(5)? },
            energies: EnergyBreakdown { e_fe: num(7)?, e_tx: num(8)?, e_joule: num(9)?, e_leakage: num(10)? },
            t_comet: num(6)?,
            e_comet: num(11)?,
            v_out: num(15)?,
            drive: Drive { v_fe: num(2)?, j_c: num(12)?, v_prop: num(13)?, v_rst: num(14)? },
        });
    }
    Ok(out)
}

/// Figure families with tidy plot data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlotKind {
    /// Nucleation success and delay per material corner and V_FE
    FigNuc,
    /// Wall velocity and propagation delay against Jc
    FigProp,
    /// Energy against delay, with Pareto membership
    FigEdp,
    /// Nucleation delay against IMA-FM thickness
    FigImafm,
}

impl PlotKind {
    pub const ALL: [PlotKind; 4] = [PlotKind::FigNuc, PlotKind::FigProp, PlotKind::FigEdp, PlotKind::FigImafm];

    pub fn label(self) -> &'static str {
        match self {
            PlotKind::FigNuc => "fig-nuc",
            PlotKind::FigProp => "fig-prop",
            PlotKind::FigEdp => "fig-edp",
            PlotKind::FigImafm => "fig-imafm",
        }
    }
}

impl FromStr for PlotKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PlotKind::ALL
            .into_iter()
            .find(|k| k.label() == s.trim())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown figure `{s}` (fig-nuc, fig-prop, fig-edp, fig-imafm)")))
    }
}

/// What a figure is built from.
#[derive(Debug, Clone, Copy)]
pub enum PlotSource<'a> {
    Sweep(&'a [ResultRow]),
    /// (h_IMA, t_nucleate) pairs at one V_FE
    ImaSweep { v_fe: f64, points: &'a [(f64, Option<f64>)] },
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

fn material_cols(r: &ResultRow) -> [String; 4] {
    [fmt_num(r.ms), fmt_num(r.ku), fmt_num(r.a), fmt_num(r.alpha)]
}

/// Long-format CSV for `kind`. A source that lacks the stage the figure
/// needs gives [`Error::IncompleteSweep`].
pub fn emit_plotdata(kind: PlotKind, source: PlotSource<'_>) -> Result<String> {
    let incomplete = |what: &str| Error::IncompleteSweep(format!("{} needs {what}", kind.label()));
    match (kind, source) {
        (PlotKind::FigImafm, PlotSource::ImaSweep { v_fe, points }) => {
            let mut out = csv_line(&["v_fe", "h_ima", "nucleated", "t_nucleate"].map(String::from));
            for &(h, t) in points {
                out.push_str(&csv_line(&[fmt_num(v_fe), fmt_num(h), t.is_some().to_string(), opt(t)]));
            }
            Ok(out)
        }
        (PlotKind::FigImafm, PlotSource::Sweep(_)) => Err(incomplete("an IMA-FM thickness sweep")),
        (_, PlotSource::ImaSweep { .. }) => Err(incomplete("a material sweep")),
        (PlotKind::FigNuc, PlotSource::Sweep(rows)) => {
            if rows.iter().all(|r| r.nucleated.is_none() && r.error.is_none()) {
                return Err(incomplete("nucleation results"));
            }
            let mut out = csv_line(&["ms", "ku", "a", "alpha", "v_fe", "status", "nucleated", "t_nucleate"].map(String::from));
            for r in rows {
                let mut f = material_cols(r).to_vec();
                f.extend([opt(r.v_fe), r.status.clone(), r.nucleated.map(|b| b.to_string()).unwrap_or_default(), opt(r.t_nucleate)]);
                out.push_str(&csv_line(&f));
            }
            Ok(out)
        }
        (PlotKind::FigProp, PlotSource::Sweep(rows)) => {
            if rows.iter().all(|r| r.v_avg.is_none() && r.error.is_none()) {
                return Err(incomplete("propagation results"));
            }
            let mut out = csv_line(&["ms", "ku", "alpha", "a", "jc", "status", "v_avg", "t_propagate"].map(String::from));
            for r in rows {
                out.push_str(&csv_line(&[
                    fmt_num(r.ms),
                    fmt_num(r.ku),
                    fmt_num(r.alpha),
                    fmt_num(r.a),
                    opt(r.jc),
                    r.status.clone(),
                    opt(r.v_avg),
                    opt(r.t_propagate),
                ]));
            }
            Ok(out)
        }
        (PlotKind::FigEdp, PlotSource::Sweep(rows)) => {
            if rows.iter().any(|r| r.mode != "full-gate") || rows.is_empty() {
                return Err(incomplete("a full-gate sweep"));
            }
            let front: std::collections::HashSet<usize> = pareto_front_rows(rows).points.iter().map(|p| p.index).collect();
            let mut out =
                csv_line(&["ms", "ku", "a", "alpha", "jc", "v_fe", "status", "t_comet", "e_comet", "on_front"].map(String::from));
            for r in rows {
                let mut f = material_cols(r).to_vec();
                f.extend([
                    opt(r.jc),
                    opt(r.v_fe),
                    r.status.clone(),
                    opt(r.t_comet),
                    opt(r.e_comet),
                    front.contains(&r.index).to_string(),
                ]);
                out.push_str(&csv_line(&f));
            }
            Ok(out)
        }
    }
}

/// Knee of one energy-delay curve at fixed (Ms, Ku, A, α, V_FE).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveKnee {
    pub ms: f64,
    pub ku: f64,
    pub a: f64,
    pub alpha: f64,
    pub v_fe: Option<f64>,
    pub knee: RobustPick,
}

/// Summary of a full-gate sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub mode: String,
    pub points: usize,
    pub ok: usize,
    pub failed: usize,
    pub no_nucleation: usize,
    pub knee_threshold: f64,
    /// Global front over every evaluated point
    pub front: ParetoFront,
    /// Knee of the global front
    pub knee: Option<RobustPick>,
    /// Knee of each Jc curve
    pub curve_knees: Vec<CurveKnee>,
}

/// Build the summary of `rows`.
pub fn summarize(rows: &[ResultRow], knee_threshold: f64) -> SweepSummary {
    let count = |s: &str| rows.iter().filter(|r| r.status == s).count();
    let front = pareto_front_rows(rows);
    let knee = robust_point(&front, knee_threshold).ok();
    let mut curves: BTreeMap<[u64; 5], Vec<FrontPoint>> = BTreeMap::new();
    for r in rows {
        if let (Some(t), Some(e)) = (r.t_comet, r.e_comet) {
            let key = [r.ms.to_bits(), r.ku.to_bits(), r.a.to_bits(), r.alpha.to_bits(), r.v_fe.unwrap_or(f64::NAN).to_bits()];
            curves.entry(key).or_default().push(FrontPoint { t_comet: t, e_comet: e, index: r.index, j_c: r.jc, v_fe: r.v_fe, ms: r.ms });
        }
    }
    let curve_knees = curves
        .into_iter()
        .filter_map(|(k, points)| {
            let knee = robust_point(&ParetoFront { points }, knee_threshold).ok()?;
            let v_fe = f64::from_bits(k[4]);
            Some(CurveKnee {
                ms: f64::from_bits(k[0]),
                ku: f64::from_bits(k[1]),
                a: f64::from_bits(k[2]),
                alpha: f64::from_bits(k[3]),
                v_fe: (!v_fe.is_nan()).then_some(v_fe),
                knee,
            })
        })
        .collect();
    SweepSummary {
        mode: rows.first().map(|r| r.mode.clone()).unwrap_or_default(),
        points: rows.len(),
        ok: count("ok"),
        failed: count("failed"),
        no_nucleation: count("no-nucleation"),
        knee_threshold,
        front,
        knee,
        curve_knees,
    }
}

pub fn summary_json(summary: &SweepSummary) -> Result<String> {
    let mut s = serde_json::to_string_pretty(summary)?;
    s.push('\n');
    Ok(s)
}

/// Provenance written next to the data files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config_path: Option<String>,
    pub overrides: Vec<(String, String)>,
    pub outputs: Vec<String>,
    /// Seconds since the Unix epoch
    pub created_unix: u64,
    pub deterministic: bool,
    pub resolved: RunConfig,
}

/// Wall trajectory rows (t, Q, φ, Δ, v_inst).
pub fn dw_trace_csv(trace: &[DwSample]) -> String {
    let mut out = String::from("t,q,phi,delta,v_inst\n");
    for s in trace {
        out.push_str(&csv_line(&[fmt_num(s.t), fmt_num(s.q), fmt_num(s.phi), fmt_num(s.delta), fmt_num(s.v_inst)]));
    }
    out
}

/// Nucleation detector trace (t, strip-mean m_z).
pub fn mz_trace_csv(trace: &[(f64, f64)]) -> String {
    let mut out = String::from("t,mz_strip\n");
    for (t, m) in trace {
        out.push_str(&csv_line(&[fmt_num(*t), fmt_num(*m)]));
    }
    out
}

/// One sample of the FE_in response.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeSample {
    pub t: f64,
    /// Polarization along the polar axis (C/m²)
    pub p: f64,
    /// ME field (T)
    pub b_me: [f64; 3],
}

/// FE_in polarization and ME field under a `v_fe` step, every `every`
/// seconds up to `t_end`.
#[allow(clippy::too_many_arguments)]
pub fn fe_trace(
    v_fe: f64,
    params: &MaterialParams,
    geometry: &DeviceGeometry,
    consts: &PhysicalConstants,
    ferro: &FerroParams,
    fe_area: f64,
    t_end: f64,
    every: f64,
) -> Result<Vec<FeSample>> {
    if !(every > 0.0 && t_end >= 0.0) {
        return Err(Error::InvalidArgument("trace interval must be positive".into()));
    }
    let coeffs = ferro.coefficients(params, consts)?;
    let e = voltage_to_field(v_fe, geometry.h_fe_in)?;
    let axis = ferro.axis();
    let volume = fe_area * geometry.h_fe_in;
    let mut state = FeState { p_vec: vec3::scale(axis, ferro.p_initial * ferro.p_remnant), t_now: 0.0 };
    let n = (t_end / every).round() as usize;
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let t = k as f64 * every;
        if k > 0 {
            state = lkh_advance(state, [0.0, 0.0, -e], &coeffs, params.gamma_v, volume, Some(axis), ferro.dt, t)?;
        }
        let b_me = me_field(state.p_vec, params.kappa_me, params.h_int, geometry.h_fe_in, consts.eps0, ferro.me_scale)?;
        out.push(FeSample { t, p: vec3::dot(state.p_vec, axis), b_me });
    }
    Ok(out)
}

pub fn fe_trace_csv(trace: &[FeSample]) -> String {
    let mut out = String::from("t,p,b_me_x,b_me_y,b_me_z\n");
    for s in trace {
        out.push_str(&csv_line(&[fmt_num(s.t), fmt_num(s.p), fmt_num(s.b_me[0]), fmt_num(s.b_me[1]), fmt_num(s.b_me[2])]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perf::REFERENCE_ROWS;

    fn injected() -> Vec<GateReport> {
        REFERENCE_ROWS
            .iter()
            .flat_map(|row| {
                [(GateKind::Maj3, row.maj3), (GateKind::Inv, row.inv)].map(|(g, v)| {
                    let drive = Drive { v_fe: row.v_fe, j_c: 5e11, v_prop: 0.8, v_rst: 0.8 };
                    GateReport::from_stages(g, v.delays(), v.energies(), drive, 0.0)
                })
            })
            .collect()
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = emit_table2(&[], "");
        assert_eq!(t.display.lines().count(), 1);
        assert_eq!(t.machine.lines().count(), 1);
        assert!(parse_table2_machine(&t.machine).unwrap().is_empty());
    }

    #[test]
    fn injected_rows_print_totals() {
        let t = emit_table2(&injected(), "");
        let totals: Vec<&str> = t.display.lines().skip(1).map(|l| l.split(',').nth(5).unwrap()).collect();
        assert_eq!(totals[0], "242.4");
        assert_eq!(totals[2], "231.2");
    }

    #[test]
    fn machine_table_round_trips() {
        let r = injected();
        let back = parse_table2_machine(&emit_table2(&r, "15nm").machine).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn edp_needs_full_gate_rows() {
        let row = ResultRow {
            index: 0,
            mode: "propagation".into(),
            ms: 3e5,
            ku: 5e5,
            a: 1e-11,
            alpha: 0.01,
            jc: Some(5e11),
            v_fe: None,
            status: "ok".into(),
            nucleated: None,
            t_nucleate: None,
            t_propagate: Some(8e-11),
            v_avg: Some(730.0),
            t_qtransfer: None,
            t_comet: None,
            e_fe: None,
            e_tx: None,
            e_joule: None,
            e_leakage: None,
            e_comet: None,
            error: None,
        };
        let rows = [row];
        assert!(matches!(emit_plotdata(PlotKind::FigEdp, PlotSource::Sweep(&rows)), Err(Error::IncompleteSweep(_))));
        assert!(matches!(emit_plotdata(PlotKind::FigNuc, PlotSource::Sweep(&rows)), Err(Error::IncompleteSweep(_))));
        let prop = emit_plotdata(PlotKind::FigProp, PlotSource::Sweep(&rows)).unwrap();
        let header = prop.lines().next().unwrap();
        for col in ["ms", "ku", "alpha", "jc", "v_avg", "t_propagate"] {
            assert!(header.split(',').any(|c| c == col), "{col}");
        }
    }

    #[test]
    fn fe_trace_starts_at_zero_and_moves_with_voltage() {
        let p = MaterialParams::default();
        let g = DeviceGeometry::default();
        let f = FerroParams::default();
        let tr = fe_trace(0.11, &p, &g, &PhysicalConstants::default(), &f, 2.0 * 15e-9 * 15e-9, 20e-12, 1e-12).unwrap();
        assert_eq!(tr.len(), 21);
        assert_eq!(tr[0].p, 0.0);
        assert!(tr[20].p > 0.0);
        assert!(fe_trace_csv(&tr).starts_with("t,p,"));
    }
}
