// SPDX-License-Identifier: Apache-2.0
//! `comet`: command-line front end for the magnetoelectric DW logic
//! simulator.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use comet_core::calibration::Calibration;
use comet_core::config::{parse_config_with, parse_override, RunConfig};
use comet_core::dse::{enumerate_space, pareto_front_rows, rows_from_csv, rows_to_csv, run_sweep, ResultRow, SweepMode};
use comet_core::dw::{propagate, velocity_vs_jc};
use comet_core::io::{
    dw_trace_csv, emit_plotdata, emit_table2, fe_trace, fe_trace_csv, fmt_num, mz_trace_csv, summarize, summary_json,
    PlotKind, PlotSource, Sidecar,
};
use comet_core::llg::{ima_thickness_sweep, nucleate_case, threshold_voltage, InputCase};
use comet_core::perf::gate_report;
use comet_core::units::GateKind;
use comet_core::{Error, Result};

/// Environment variable naming the default config directory.
const CONFIG_DIR_ENV: &str = "COMET_CONFIG_DIR";

const EXIT_TABLE: &str = "\
Exit codes:
  0  success
  2  config or usage error (bad key, unit, preset, argument)
  3  solver failure (numerics, no nucleation where one is required)
  4  incomplete sweep (input lacks the stage a figure needs)
  5  I/O error

Environment:
  COMET_CONFIG_DIR  directory searched for relative --config paths, and for
                    comet.toml when --config is not given";

#[derive(Parser)]
#[command(name = "comet", version, about = "Magnetoelectric domain-wall logic simulator", after_help = EXIT_TABLE)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Run configuration (TOML)
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Override one config key, e.g. --set drive.v_fe="150 mV" (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory
    #[arg(long, value_name = "DIR", default_value = "out")]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Case {
    Composite,
    Bare2f,
    Bare1f,
}

impl From<Case> for InputCase {
    fn from(c: Case) -> Self {
        match c {
            Case::Composite => InputCase::Composite,
            Case::Bare2f => InputCase::Bare2F,
            Case::Bare1f => InputCase::Bare1F,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Nucleation,
    Propagation,
    FullGate,
}

impl From<Mode> for SweepMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Nucleation => SweepMode::Nucleation,
            Mode::Propagation => SweepMode::Propagation,
            Mode::FullGate => SweepMode::FullGate,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Figure {
    FigNuc,
    FigProp,
    FigEdp,
    FigImafm,
    Table2,
}

impl Figure {
    fn plot_kind(self) -> Option<PlotKind> {
        match self {
            Figure::FigNuc => Some(PlotKind::FigNuc),
            Figure::FigProp => Some(PlotKind::FigProp),
            Figure::FigEdp => Some(PlotKind::FigEdp),
            Figure::FigImafm => Some(PlotKind::FigImafm),
            Figure::Table2 => None,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Voltage-driven nucleation on the input window (LKh + LLG)
    Nucleate {
        #[command(flatten)]
        common: Common,
        /// Input structure; defaults to the config's input_case
        #[arg(long, value_enum)]
        case: Option<Case>,
        /// Bisect the smallest nucleating V_FE over [0, 3] V instead
        #[arg(long)]
        threshold: bool,
        /// Sweep the IMA-FM thickness over sweep.ima_thicknesses
        #[arg(long, conflicts_with = "threshold")]
        ima_sweep: bool,
    },
    /// Current-driven wall propagation (1D model)
    Propagate {
        #[command(flatten)]
        common: Common,
        /// Velocity against every Jc in sweep.jc_values instead of one run
        #[arg(long)]
        curve: bool,
    },
    /// Full gate delay and energy at the configured operating point
    Gate {
        #[command(flatten)]
        common: Common,
    },
    /// Design-space sweep with checkpointing
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Stages to evaluate; defaults to sweep.mode
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        /// Worker threads
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Also write plot data for these figures (repeatable)
        #[arg(long, value_enum)]
        figure: Vec<Figure>,
    },
    /// Pareto front and knee of a finished sweep
    Pareto {
        #[command(flatten)]
        common: Common,
        /// results.csv of a full-gate sweep
        #[arg(long, value_name = "PATH")]
        input: PathBuf,
    },
    /// Plot data or the benchmark table
    Report {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        figure: Figure,
        /// results.csv of a sweep (for fig-nuc, fig-prop, fig-edp)
        #[arg(long, value_name = "PATH")]
        input: Option<PathBuf>,
    },
    /// Refit the circuit calibration against the benchmark rows
    Calibrate {
        #[command(flatten)]
        common: Common,
    },
}

fn resolve_config_path(given: Option<&Path>) -> Option<PathBuf> {
    let dir = std::env::var_os(CONFIG_DIR_ENV).map(PathBuf::from);
    match given {
        Some(p) if p.is_relative() && !p.exists() => match &dir {
            Some(d) if d.join(p).exists() => Some(d.join(p)),
            _ => Some(p.to_path_buf()),
        },
        Some(p) => Some(p.to_path_buf()),
        None => dir.map(|d| d.join("comet.toml")).filter(|p| p.exists()),
    }
}

struct Session {
    cfg: RunConfig,
    out: PathBuf,
    command: String,
    config_path: Option<PathBuf>,
    overrides: Vec<(String, String)>,
    outputs: Vec<String>,
}

impl Session {
    fn open(command: &str, common: &Common) -> Result<Self> {
        let config_path = resolve_config_path(common.config.as_deref());
        let text = match &config_path {
            Some(p) => std::fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?,
            None => String::new(),
        };
        let overrides = common.set.iter().map(|s| parse_override(s)).collect::<Result<Vec<_>>>()?;
        let cfg = parse_config_with(&text, &overrides).map_err(|e| match (&config_path, e) {
            (Some(p), Error::Config(m)) => Error::Config(format!("{}: {m}", p.display())),
            (_, e) => e,
        })?;
        std::fs::create_dir_all(&common.out)?;
        Ok(Self { cfg, out: common.out.clone(), command: command.into(), config_path, overrides, outputs: Vec::new() })
    }

    fn write(&mut self, name: &str, body: &str) -> Result<()> {
        std::fs::write(self.out.join(name), body)?;
        self.outputs.push(name.to_string());
        Ok(())
    }

    fn finish(self) -> Result<()> {
        let sidecar = Sidecar {
            tool: "comet".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: self.command.clone(),
            config_path: self.config_path.as_ref().map(|p| p.display().to_string()),
            overrides: self.overrides.clone(),
            outputs: self.outputs.clone(),
            created_unix: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
            deterministic: true,
            resolved: self.cfg.clone(),
        };
        let path = self.out.join(format!("{}.meta.json", self.command));
        std::fs::write(&path, serde_json::to_string_pretty(&sidecar)? + "\n")?;
        for o in &self.outputs {
            println!("wrote {}", self.out.join(o).display());
        }
        Ok(())
    }
}

fn json<T: serde::Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn cmd_nucleate(common: &Common, case: Option<Case>, threshold: bool, ima_sweep: bool) -> Result<()> {
    let mut s = Session::open("nucleate", common)?;
    let c = s.cfg.clone();
    let case = case.map(InputCase::from).unwrap_or(c.input_case);
    if ima_sweep {
        let pts = ima_thickness_sweep(&c.sweep.ima_thicknesses, &c.material, &c.geometry, &c.constants, &c.ferro, &c.llg, c.drive.v_fe)?;
        for (h, t) in &pts {
            println!("h_ima = {:.2} nm: {}", h * 1e9, t.map(|t| format!("t_nucleate = {:.1} ps", t * 1e12)).unwrap_or("no nucleation".into()));
        }
        let body = emit_plotdata(PlotKind::FigImafm, PlotSource::ImaSweep { v_fe: c.drive.v_fe, points: &pts })?;
        s.write("fig-imafm.csv", &body)?;
        return s.finish();
    }
    if threshold {
        let v = threshold_voltage(&c.material, &c.geometry, &c.constants, &c.ferro, &c.llg, case, 0.0, 3.0, 2e-3)?;
        match v {
            Some(v) => println!("threshold V_FE = {:.1} mV", v * 1e3),
            None => println!("no nucleation up to 3 V"),
        }
        s.write("threshold.json", &json(&serde_json::json!({ "case": case, "v_threshold": v }))?)?;
        return s.finish();
    }
    let r = nucleate_case(c.drive.v_fe, &c.material, &c.geometry, &c.constants, &c.ferro, &c.llg, case)?;
    match r.t_nucleate {
        Some(t) => println!("nucleated: t_nucleate = {:.2} ps", t * 1e12),
        None => println!("no nucleation within {:.0} ps", c.llg.horizon * 1e12),
    }
    let fe_area = case.window_f() * c.geometry.f_feat * c.geometry.f_feat;
    let fe = fe_trace(c.drive.v_fe, &c.material, &c.geometry, &c.constants, &c.ferro, fe_area, c.llg.horizon, c.llg.sample_every)?;
    s.write(
        "nucleate.json",
        &json(&serde_json::json!({ "case": case, "v_fe": c.drive.v_fe, "nucleated": r.nucleated, "t_nucleate": r.t_nucleate }))?,
    )?;
    s.write("mz_trace.csv", &mz_trace_csv(&r.trace))?;
    s.write("fe_trace.csv", &fe_trace_csv(&fe))?;
    s.write("snapshot.csv", &r.final_grid.snapshot_csv())?;
    s.finish()
}

fn cmd_propagate(common: &Common, curve: bool) -> Result<()> {
    let mut s = Session::open("propagate", common)?;
    let c = s.cfg.clone();
    let d = c.geometry.propagation_distance;
    if curve {
        let pts = velocity_vs_jc(&c.sweep.space.jc_values, d, &c.material, &c.geometry, &c.constants, &c.dw)?;
        let mut body = String::from("ms,ku,a,alpha,jc,v_avg,t_propagate\n");
        for (jc, v) in &pts {
            let m = &c.material;
            body.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                fmt_num(m.ms_pma),
                fmt_num(m.ku_pma),
                fmt_num(m.a_ex),
                fmt_num(m.alpha),
                fmt_num(*jc),
                fmt_num(*v),
                fmt_num(d / v)
            ));
        }
        s.write("velocity.csv", &body)?;
        return s.finish();
    }
    let mut dw = c.dw;
    if dw.trace_every == 0 {
        dw.trace_every = 10;
    }
    let r = propagate(d, &c.material, &c.geometry, &c.constants, &dw, c.drive.j_c)?;
    println!("v_avg = {:.1} m/s, t_propagate = {:.2} ps over {:.1} nm", r.v_avg, r.t_propagate * 1e12, d * 1e9);
    s.write(
        "propagate.json",
        &json(&serde_json::json!({ "j_c": c.drive.j_c, "distance": d, "v_avg": r.v_avg, "t_propagate": r.t_propagate, "final_state": r.final_state }))?,
    )?;
    s.write("dw_trace.csv", &dw_trace_csv(&r.trace))?;
    s.finish()
}

fn gate_at(c: &RunConfig, gate: GateKind, v_fe: f64) -> Result<comet_core::perf::GateReport> {
    let nuc = nucleate_case(v_fe, &c.material, &c.geometry, &c.constants, &c.ferro, &c.llg, c.input_case)?;
    let t_n = nuc.t_nucleate.ok_or_else(|| {
        Error::NumericFailure(format!("no nucleation at V_FE = {:.1} mV within {:.0} ps", v_fe * 1e3, c.llg.horizon * 1e12))
    })?;
    let (mut geometry, perf) = c.perf_inputs(v_fe)?;
    geometry.propagation_distance = gate.distance_in_f() * geometry.f_feat;
    let p = propagate(geometry.propagation_distance, &c.material, &geometry, &c.constants, &c.dw, c.drive.j_c)?;
    gate_report(gate, &c.material, &geometry, &c.transistor, &c.constants, &perf, v_fe, c.drive.j_c, t_n, p.t_propagate)
}

fn cmd_gate(common: &Common) -> Result<()> {
    let mut s = Session::open("gate", common)?;
    let c = s.cfg.clone();
    let r = gate_at(&c, c.gate, c.drive.v_fe)?;
    println!("{}: T = {:.1} ps, E = {:.1} aJ", r.gate_kind.label(), r.t_comet * 1e12, r.e_comet * 1e18);
    let t = emit_table2(&[r], c.node.label());
    s.write("gate.json", &json(&r)?)?;
    s.write("gate.csv", &t.display)?;
    s.write("gate.machine.csv", &t.machine)?;
    s.finish()
}

fn cmd_sweep(common: &Common, mode: Option<Mode>, jobs: usize, figures: &[Figure]) -> Result<()> {
    let mut s = Session::open("sweep", common)?;
    let c = s.cfg.clone();
    let mode = mode.map(SweepMode::from).unwrap_or(c.sweep.mode);
    let points = enumerate_space(&c.sweep.space.restricted_to(mode), &c.material, None);
    let checkpoint = s.out.join("checkpoint.csv");
    eprintln!("{} points, mode {}, {} worker(s)", points.len(), mode.label(), jobs.max(1));
    let outcome = run_sweep(&points, mode, &c.sweep_context(), jobs, Some(&checkpoint))?;
    if outcome.resumed > 0 {
        eprintln!("resumed {} rows from {}", outcome.resumed, checkpoint.display());
    }
    s.write("results.csv", &rows_to_csv(&outcome.rows)?)?;
    if mode == SweepMode::FullGate {
        s.write("summary.json", &summary_json(&summarize(&outcome.rows, c.sweep.knee))?)?;
    }
    for f in figures {
        match f.plot_kind() {
            Some(PlotKind::FigImafm) | None => {
                return Err(Error::InvalidArgument(format!("{} is not produced by a material sweep; use `comet report`", figure_label(*f))))
            }
            Some(k) => s.write(&format!("{}.csv", k.label()), &emit_plotdata(k, PlotSource::Sweep(&outcome.rows))?)?,
        }
    }
    std::fs::remove_file(&checkpoint)?;
    s.finish()
}

fn figure_label(f: Figure) -> &'static str {
    f.plot_kind().map(|k| k.label()).unwrap_or("table2")
}

fn read_rows(path: &Path) -> Result<Vec<ResultRow>> {
    rows_from_csv(&std::fs::read_to_string(path)?)
}

fn cmd_pareto(common: &Common, input: &Path) -> Result<()> {
    let mut s = Session::open("pareto", common)?;
    let rows = read_rows(input)?;
    if rows.iter().all(|r| r.t_comet.is_none()) {
        return Err(Error::IncompleteSweep(format!("{} has no gate totals; run a full-gate sweep", input.display())));
    }
    let summary = summarize(&rows, s.cfg.sweep.knee);
    let front = pareto_front_rows(&rows);
    let mut body = String::from("index,ms,jc,v_fe,t_comet,e_comet\n");
    for p in &front.points {
        body.push_str(&format!(
            "{},{},{},{},{},{}\n",
            p.index,
            fmt_num(p.ms),
            p.j_c.map(fmt_num).unwrap_or_default(),
            p.v_fe.map(fmt_num).unwrap_or_default(),
            fmt_num(p.t_comet),
            fmt_num(p.e_comet)
        ));
    }
    if let Some(k) = &summary.knee {
        println!(
            "front: {} points; knee at index {} (T = {:.1} ps, E = {:.1} aJ){}",
            front.points.len(),
            k.point.index,
            k.point.t_comet * 1e12,
            k.point.e_comet * 1e18,
            if k.flagged { ", threshold never met" } else { "" }
        );
    }
    s.write("front.csv", &body)?;
    s.write("summary.json", &summary_json(&summary)?)?;
    s.finish()
}

fn cmd_report(common: &Common, figure: Figure, input: Option<&Path>) -> Result<()> {
    let mut s = Session::open("report", common)?;
    let c = s.cfg.clone();
    match figure.plot_kind() {
        None => {
            let mut reports = Vec::new();
            for &v in &c.sweep.space.vfe_values {
                for g in [GateKind::Maj3, GateKind::Inv] {
                    reports.push(gate_at(&c, g, v)?);
                }
            }
            let t = emit_table2(&reports, c.node.label());
            print!("{}", t.display);
            s.write("table2.csv", &t.display)?;
            s.write("table2.machine.csv", &t.machine)?;
        }
        Some(PlotKind::FigImafm) => {
            let pts = ima_thickness_sweep(&c.sweep.ima_thicknesses, &c.material, &c.geometry, &c.constants, &c.ferro, &c.llg, c.drive.v_fe)?;
            s.write("fig-imafm.csv", &emit_plotdata(PlotKind::FigImafm, PlotSource::ImaSweep { v_fe: c.drive.v_fe, points: &pts })?)?;
        }
        Some(k) => {
            let input = input.ok_or_else(|| Error::InvalidArgument(format!("{} needs --input results.csv", k.label())))?;
            let rows = read_rows(input)?;
            s.write(&format!("{}.csv", k.label()), &emit_plotdata(k, PlotSource::Sweep(&rows))?)?;
        }
    }
    s.finish()
}

fn cmd_calibrate(common: &Common) -> Result<()> {
    let mut s = Session::open("calibrate", common)?;
    let cal = Calibration::fit(&s.cfg.material, &s.cfg.constants)?;
    for e in &cal.entry {
        println!(
            "{} {:.0} mV: k_inv {:.3}, V_gate {:.3} V, h_shm {:.3} nm (INV residuals: E_TX {:+.1}%, E_Joule {:+.0}%)",
            e.node.label(),
            e.v_fe * 1e3,
            e.k_inv,
            e.v_gate,
            e.h_shm * 1e9,
            e.inv_tx_residual * 100.0,
            e.inv_joule_residual * 100.0
        );
    }
    s.write("table2.toml", &cal.to_toml())?;
    s.finish()
}

fn exit_code(e: &Error) -> u8 {
    match e {
        _ if e.is_config() => 2,
        Error::IncompleteSweep(_) => 4,
        Error::Io(_) | Error::Csv(_) | Error::Json(_) => 5,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Nucleate { common, case, threshold, ima_sweep } => cmd_nucleate(common, *case, *threshold, *ima_sweep),
        Command::Propagate { common, curve } => cmd_propagate(common, *curve),
        Command::Gate { common } => cmd_gate(common),
        Command::Sweep { common, mode, jobs, figure } => cmd_sweep(common, *mode, *jobs, figure),
        Command::Pareto { common, input } => cmd_pareto(common, input),
        Command::Report { common, figure, input } => cmd_report(common, *figure, input.as_deref()),
        Command::Calibrate { common } => cmd_calibrate(common),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
