// SPDX-License-Identifier: Apache-2.0
//! Design-space exploration: grid enumeration, per-point evaluation,
//! checkpointed parallel sweeps, Pareto fronts and knee selection.

use std::collections::{BTreeSet, HashMap};
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::Path;
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::calibration::Calibration;
use crate::dw::{propagate, DwConfig};
use crate::error::{Error, Result};
use crate::llg::{nucleate_case, FerroParams, InputCase, LlgSettings};
use crate::perf::{gate_report, GateReport, PerfSettings};
use crate::units::{DeviceGeometry, GateKind, MaterialParams, PhysicalConstants, TechNode, TransistorParams};

/// `n` log-spaced values from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.log10(), hi.log10());
            (0..n).map(|i| 10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64)).collect()
        }
    }
}

/// Swept values. An empty list leaves that axis out of the product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParameterSpace {
    pub ms_values: Vec<f64>,
    pub ku_values: Vec<f64>,
    pub a_values: Vec<f64>,
    pub alpha_values: Vec<f64>,
    pub jc_values: Vec<f64>,
    pub vfe_values: Vec<f64>,
}

impl Default for ParameterSpace {
    fn default() -> Self {
        Self {
            ms_values: vec![0.3e6, 0.4e6, 0.5e6],
            ku_values: vec![0.5e6, 0.6e6, 1e6],
            a_values: vec![10e-12, 20e-12, 30e-12, 40e-12],
            alpha_values: vec![0.01, 0.05, 0.08, 0.1],
            jc_values: log_space(1e10, 1e12, 13),
            vfe_values: vec![0.110, 0.150],
        }
    }
}

impl ParameterSpace {
    /// Material axes only.
    pub fn corners() -> Self {
        Self { jc_values: vec![], vfe_values: vec![], ..Self::default() }
    }

    /// Drops the drive axis a mode never reads (V_FE for propagation,
    /// Jc for nucleation) so it does not multiply identical runs.
    pub fn restricted_to(&self, mode: SweepMode) -> Self {
        let mut s = self.clone();
        match mode {
            SweepMode::Nucleation => s.jc_values.clear(),
            SweepMode::Propagation => s.vfe_values.clear(),
            SweepMode::FullGate => {}
        }
        s
    }
}

/// What a sweep evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepMode {
    Nucleation,
    Propagation,
    FullGate,
}

impl SweepMode {
    pub fn label(self) -> &'static str {
        match self {
            SweepMode::Nucleation => "nucleation",
            SweepMode::Propagation => "propagation",
            SweepMode::FullGate => "full-gate",
        }
    }
}

impl std::str::FromStr for SweepMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nucleation" => Ok(SweepMode::Nucleation),
            "propagation" => Ok(SweepMode::Propagation),
            "full-gate" | "gate" => Ok(SweepMode::FullGate),
            _ => Err(Error::InvalidArgument(format!("unknown sweep mode `{s}` (nucleation, propagation, full-gate)"))),
        }
    }
}

/// Outcome of evaluating one point.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PointResult {
    pub nucleated: Option<bool>,
    pub t_nucleate: Option<f64>,
    pub t_propagate: Option<f64>,
    pub v_avg: Option<f64>,
    pub report: Option<GateReport>,
    /// Solver failure, recorded instead of aborting the sweep
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignPoint {
    /// Position in enumeration order
    pub index: usize,
    pub params: MaterialParams,
    pub j_c: Option<f64>,
    pub v_fe: Option<f64>,
    pub results: Option<PointResult>,
}

/// Cartesian product in field order (Ms, Ku, A, α, Jc, V_FE), last axis
/// fastest. `filter` drops points; indices stay consecutive.
pub fn enumerate_space(
    space: &ParameterSpace,
    base: &MaterialParams,
    filter: Option<&dyn Fn(&DesignPoint) -> bool>,
) -> Vec<DesignPoint> {
    let opt = |v: &[f64]| -> Vec<Option<f64>> {
        if v.is_empty() {
            vec![None]
        } else {
            v.iter().copied().map(Some).collect()
        }
    };
    let (ms, ku, a, al) = (opt(&space.ms_values), opt(&space.ku_values), opt(&space.a_values), opt(&space.alpha_values));
    let (jc, vf) = (opt(&space.jc_values), opt(&space.vfe_values));
    let mut out = Vec::new();
    for &m in &ms {
        for &k in &ku {
            for &x in &a {
                for &al_ in &al {
                    let mut p = *base;
                    p.ms_pma = m.unwrap_or(p.ms_pma);
                    p.ku_pma = k.unwrap_or(p.ku_pma);
                    p.a_ex = x.unwrap_or(p.a_ex);
                    p.alpha = al_.unwrap_or(p.alpha);
                    for &j in &jc {
                        for &v in &vf {
                            let pt = DesignPoint { index: 0, params: p, j_c: j, v_fe: v, results: None };
                            if filter.is_none_or(|f| f(&pt)) {
                                out.push(DesignPoint { index: out.len(), ..pt });
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Shared inputs of every point in a sweep.
#[derive(Debug, Clone)]
pub struct SweepContext {
    pub geometry: DeviceGeometry,
    pub transistor: TransistorParams,
    pub consts: PhysicalConstants,
    pub ferro: FerroParams,
    pub llg: LlgSettings,
    pub dw: DwConfig,
    pub perf: PerfSettings,
    /// Per-(node, V_FE) circuit calibration; overrides `perf` when set
    pub calibration: Option<(TechNode, Calibration)>,
    pub gate: GateKind,
    pub case: InputCase,
    /// V_FE used when a point carries none (V)
    pub default_v_fe: f64,
    /// Jc used when a point carries none (A/m²)
    pub default_j_c: f64,
}

impl Default for SweepContext {
    fn default() -> Self {
        Self {
            geometry: DeviceGeometry::default(),
            transistor: TransistorParams::default(),
            consts: PhysicalConstants::default(),
            ferro: FerroParams::default(),
            llg: LlgSettings::default(),
            dw: DwConfig::default(),
            perf: PerfSettings::default(),
            calibration: None,
            gate: GateKind::Maj3,
            case: InputCase::Composite,
            default_v_fe: 0.110,
            default_j_c: 5e11,
        }
    }
}

/// Nucleation outcome (nucleated, t_nucleate).
type NucOutcome = std::result::Result<(bool, Option<f64>), String>;
/// Propagation outcome (t_propagate, v_avg).
type PropOutcome = std::result::Result<(f64, f64), String>;

fn key_bits(p: &MaterialParams, x: f64) -> [u64; 5] {
    [p.ms_pma.to_bits(), p.ku_pma.to_bits(), p.a_ex.to_bits(), p.alpha.to_bits(), x.to_bits()]
}

/// Memo tables shared by the workers of one sweep. Nucleation does not
/// depend on Jc and propagation does not depend on V_FE, so full-gate
/// sweeps evaluate each only once per key.
#[derive(Default)]
pub struct StageCache {
    nuc: HashMap<[u64; 5], OnceLock<NucOutcome>>,
    prop: HashMap<[u64; 5], OnceLock<PropOutcome>>,
}

impl StageCache {
    pub fn for_points(points: &[DesignPoint], mode: SweepMode, ctx: &SweepContext) -> Self {
        let mut c = Self::default();
        for p in points {
            if mode != SweepMode::Propagation {
                c.nuc.entry(key_bits(&p.params, p.v_fe.unwrap_or(ctx.default_v_fe))).or_default();
            }
            if mode != SweepMode::Nucleation {
                c.prop.entry(key_bits(&p.params, p.j_c.unwrap_or(ctx.default_j_c))).or_default();
            }
        }
        c
    }

    fn nucleation(&self, params: &MaterialParams, v_fe: f64, ctx: &SweepContext) -> NucOutcome {
        let run = || -> NucOutcome {
            nucleate_case(v_fe, params, &ctx.geometry, &ctx.consts, &ctx.ferro, &ctx.llg, ctx.case)
                .map(|r| (r.nucleated, r.t_nucleate))
                .map_err(|e| e.to_string())
        };
        match self.nuc.get(&key_bits(params, v_fe)) {
            Some(cell) => cell.get_or_init(run).clone(),
            None => run(),
        }
    }

    fn propagation(&self, params: &MaterialParams, j_c: f64, ctx: &SweepContext) -> PropOutcome {
        let run = || -> PropOutcome {
            propagate(ctx.geometry.propagation_distance, params, &ctx.geometry, &ctx.consts, &ctx.dw, j_c)
                .map(|r| (r.t_propagate, r.v_avg))
                .map_err(|e| e.to_string())
        };
        match self.prop.get(&key_bits(params, j_c)) {
            Some(cell) => cell.get_or_init(run).clone(),
            None => run(),
        }
    }
}

/// Evaluate `point` for `mode`. Solver failures land in
/// `results.error`; the call itself only fails on invalid context.
pub fn run_point(point: &DesignPoint, mode: SweepMode, ctx: &SweepContext, cache: &StageCache) -> Result<DesignPoint> {
    let p = &point.params;
    let v_fe = point.v_fe.unwrap_or(ctx.default_v_fe);
    let j_c = point.j_c.unwrap_or(ctx.default_j_c);
    let mut r = PointResult::default();
    if mode != SweepMode::Propagation {
        match cache.nucleation(p, v_fe, ctx) {
            Ok((ok, t)) => {
                r.nucleated = Some(ok);
                r.t_nucleate = t;
            }
            Err(e) => r.error = Some(e),
        }
    }
    if mode != SweepMode::Nucleation && r.error.is_none() {
        match cache.propagation(p, j_c, ctx) {
            Ok((t, v)) => {
                r.t_propagate = Some(t);
                r.v_avg = Some(v);
            }
            Err(e) => r.error = Some(e),
        }
    }
    if mode == SweepMode::FullGate && r.error.is_none() {
        if let (Some(tn), Some(tp)) = (r.t_nucleate, r.t_propagate) {
            let mut geometry = ctx.geometry;
            let mut settings = ctx.perf;
            if let Some((node, cal)) = &ctx.calibration {
                let entry = cal.lookup(*node, v_fe)?;
                entry.apply_geometry(&mut geometry);
                settings = PerfSettings { ime_scale: ctx.perf.ime_scale, wire_r: ctx.perf.wire_r, wire_c: ctx.perf.wire_c, ..entry.settings() };
            }
            r.report = Some(gate_report(ctx.gate, p, &geometry, &ctx.transistor, &ctx.consts, &settings, v_fe, j_c, tn, tp)?);
        }
    }
    Ok(DesignPoint { results: Some(r), ..point.clone() })
}

/// Flat CSV row of an evaluated point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub index: usize,
    pub mode: String,
    pub ms: f64,
    pub ku: f64,
    pub a: f64,
    pub alpha: f64,
    pub jc: Option<f64>,
    pub v_fe: Option<f64>,
    pub status: String,
    pub nucleated: Option<bool>,
    pub t_nucleate: Option<f64>,
    pub t_propagate: Option<f64>,
    pub v_avg: Option<f64>,
    pub t_qtransfer: Option<f64>,
    pub t_comet: Option<f64>,
    pub e_fe: Option<f64>,
    pub e_tx: Option<f64>,
    pub e_joule: Option<f64>,
    pub e_leakage: Option<f64>,
    pub e_comet: Option<f64>,
    pub error: Option<String>,
}

impl ResultRow {
    pub fn from_point(p: &DesignPoint, mode: SweepMode) -> Self {
        let r = p.results.clone().unwrap_or_default();
        let rep = r.report;
        let status = if r.error.is_some() {
            "failed"
        } else if r.nucleated == Some(false) {
            "no-nucleation"
        } else {
            "ok"
        };
        Self {
            index: p.index,
            mode: mode.label().into(),
            ms: p.params.ms_pma,
            ku: p.params.ku_pma,
            a: p.params.a_ex,
            alpha: p.params.alpha,
            jc: p.j_c,
            v_fe: p.v_fe,
            status: status.into(),
            nucleated: r.nucleated,
            t_nucleate: r.t_nucleate,
            t_propagate: r.t_propagate,
            v_avg: r.v_avg,
            t_qtransfer: rep.map(|g| g.delays.t_qtransfer),
            t_comet: rep.map(|g| g.t_comet),
            e_fe: rep.map(|g| g.energies.e_fe),
            e_tx: rep.map(|g| g.energies.e_tx),
            e_joule: rep.map(|g| g.energies.e_joule),
            e_leakage: rep.map(|g| g.energies.e_leakage),
            e_comet: rep.map(|g| g.e_comet),
            error: r.error,
        }
    }
}

/// CSV text (with header) for `rows` in the given order.
pub fn rows_to_csv(rows: &[ResultRow]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(true).from_writer(Vec::new());
    if rows.is_empty() {
        return Ok(RESULT_HEADER.join(",") + "\n");
    }
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn rows_from_csv(text: &str) -> Result<Vec<ResultRow>> {
    let mut rd = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    rd.deserialize().map(|r| r.map_err(Error::from)).collect()
}

pub const RESULT_HEADER: [&str; 21] = [
    "index", "mode", "ms", "ku", "a", "alpha", "jc", "v_fe", "status", "nucleated", "t_nucleate", "t_propagate", "v_avg",
    "t_qtransfer", "t_comet", "e_fe", "e_tx", "e_joule", "e_leakage", "e_comet", "error",
];

/// Sweep outcome in index order.
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub points: Vec<DesignPoint>,
    pub rows: Vec<ResultRow>,
    /// Points skipped because the checkpoint already had them
    pub resumed: usize,
}

/// Evaluate `points` on `jobs` workers. With `checkpoint`, every finished
/// row is appended to that file as it completes, and rows already present
/// there are not recomputed. The returned rows are ordered by index
/// whatever the completion order.
pub fn run_sweep(
    points: &[DesignPoint],
    mode: SweepMode,
    ctx: &SweepContext,
    jobs: usize,
    checkpoint: Option<&Path>,
) -> Result<SweepOutcome> {
    let mut done: HashMap<usize, ResultRow> = HashMap::new();
    if let Some(path) = checkpoint {
        if path.exists() {
            let text = std::fs::read_to_string(path)?;
            for row in rows_from_csv(&text)? {
                if row.mode != mode.label() {
                    return Err(Error::Config(format!("checkpoint {} holds a {} sweep", path.display(), row.mode)));
                }
                done.insert(row.index, row);
            }
        }
    }
    let todo: Vec<&DesignPoint> = points.iter().filter(|p| !done.contains_key(&p.index)).collect();
    let resumed = points.len() - todo.len();

    let sink: Option<Mutex<File>> = match checkpoint {
        Some(path) => {
            let fresh = !path.exists() || std::fs::metadata(path)?.len() == 0;
            let mut f = OpenOptions::new().create(true).append(true).open(path)?;
            if fresh {
                writeln!(f, "{}", RESULT_HEADER.join(","))?;
            }
            Some(Mutex::new(f))
        }
        None => None,
    };
    let cache = StageCache::for_points(points, mode, ctx);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?;
    let evaluated: Vec<DesignPoint> = pool.install(|| {
        todo.par_iter()
            .map(|p| -> Result<DesignPoint> {
                let out = run_point(p, mode, ctx, &cache)?;
                if let Some(sink) = &sink {
                    let line = rows_to_csv(&[ResultRow::from_point(&out, mode)])?;
                    let body = line.split_once('\n').map(|(_, b)| b).unwrap_or("");
                    let mut f = sink.lock().expect("checkpoint lock");
                    f.write_all(body.as_bytes())?;
                    f.flush()?;
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut by_index: HashMap<usize, DesignPoint> = evaluated.into_iter().map(|p| (p.index, p)).collect();
    let mut out_points = Vec::with_capacity(points.len());
    let mut rows = Vec::with_capacity(points.len());
    for p in points {
        if let Some(e) = by_index.remove(&p.index) {
            rows.push(ResultRow::from_point(&e, mode));
            out_points.push(e);
        } else if let Some(r) = done.remove(&p.index) {
            out_points.push(DesignPoint { results: Some(result_from_row(&r)), ..p.clone() });
            rows.push(r);
        }
    }
    Ok(SweepOutcome { points: out_points, rows, resumed })
}

/// Rebuild the scalar results of a checkpointed row; the full gate report
/// is not stored, only its totals.
fn result_from_row(r: &ResultRow) -> PointResult {
    PointResult {
        nucleated: r.nucleated,
        t_nucleate: r.t_nucleate,
        t_propagate: r.t_propagate,
        v_avg: r.v_avg,
        report: None,
        error: r.error.clone(),
    }
}

/// A non-dominated (T, E) point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontPoint {
    pub t_comet: f64,
    pub e_comet: f64,
    /// Index of the source point
    pub index: usize,
    pub j_c: Option<f64>,
    pub v_fe: Option<f64>,
    pub ms: f64,
}

/// Sorted by ascending T with strictly descending E.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ParetoFront {
    pub points: Vec<FrontPoint>,
}

/// Positions of the non-dominated entries of `te` (minimize both), in
/// ascending-T order. Exact duplicates keep the earliest position.
pub fn pareto_indices(te: &[(f64, f64)]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..te.len()).filter(|&i| te[i].0.is_finite() && te[i].1.is_finite()).collect();
    order.sort_by(|&a, &b| te[a].0.total_cmp(&te[b].0).then(te[a].1.total_cmp(&te[b].1)).then(a.cmp(&b)));
    let mut out = Vec::new();
    let mut best_e = f64::INFINITY;
    for i in order {
        if te[i].1 < best_e {
            best_e = te[i].1;
            out.push(i);
        }
    }
    out
}

/// Front over the points carrying (T_CoMET, E_CoMET).
pub fn pareto_front(points: &[DesignPoint]) -> ParetoFront {
    let with: Vec<(&DesignPoint, f64, f64)> = points
        .iter()
        .filter_map(|p| p.results.as_ref().and_then(|r| r.report).map(|g| (p, g.t_comet, g.e_comet)))
        .collect();
    front_from(&with)
}

/// Front over result rows carrying totals.
pub fn pareto_front_rows(rows: &[ResultRow]) -> ParetoFront {
    let te: Vec<(f64, f64)> = rows.iter().map(|r| (r.t_comet.unwrap_or(f64::NAN), r.e_comet.unwrap_or(f64::NAN))).collect();
    let points = pareto_indices(&te)
        .into_iter()
        .map(|i| FrontPoint { t_comet: te[i].0, e_comet: te[i].1, index: rows[i].index, j_c: rows[i].jc, v_fe: rows[i].v_fe, ms: rows[i].ms })
        .collect();
    ParetoFront { points }
}

fn front_from(with: &[(&DesignPoint, f64, f64)]) -> ParetoFront {
    let te: Vec<(f64, f64)> = with.iter().map(|w| (w.1, w.2)).collect();
    let points = pareto_indices(&te)
        .into_iter()
        .map(|i| {
            let p = with[i].0;
            FrontPoint { t_comet: te[i].0, e_comet: te[i].1, index: p.index, j_c: p.j_c, v_fe: p.v_fe, ms: p.params.ms_pma }
        })
        .collect();
    ParetoFront { points }
}

/// Velocity curves grouped by Ms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    /// (Ms, positions of the member curves), ascending Ms
    pub groups: Vec<(f64, Vec<usize>)>,
    /// At every shared Jc ≥ 1e11, the gap between neighbouring groups
    /// exceeds the largest within-group spread
    pub separated: bool,
}

/// Group velocity-vs-Jc curves by Ms and check that the groups do not
/// overlap.
pub fn cluster_by_ms(curves: &[(MaterialParams, Vec<(f64, f64)>)]) -> Clustering {
    let keys: BTreeSet<u64> = curves.iter().map(|c| c.0.ms_pma.to_bits()).collect();
    let mut ms_sorted: Vec<f64> = keys.iter().map(|b| f64::from_bits(*b)).collect();
    ms_sorted.sort_by(f64::total_cmp);
    let groups: Vec<(f64, Vec<usize>)> = ms_sorted
        .iter()
        .map(|&ms| (ms, (0..curves.len()).filter(|&i| curves[i].0.ms_pma == ms).collect()))
        .collect();
    let mut separated = true;
    if groups.len() > 1 {
        let jcs: Vec<f64> = curves[0].1.iter().map(|x| x.0).filter(|j| *j >= 1e11).collect();
        for jc in jcs {
            let at = |i: usize| curves[i].1.iter().find(|x| x.0 == jc).map(|x| x.1);
            let mut ranges = Vec::new();
            for (_, members) in &groups {
                let vs: Vec<f64> = members.iter().filter_map(|&i| at(i)).collect();
                if vs.len() != members.len() {
                    separated = false;
                    continue;
                }
                let lo = vs.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = vs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                ranges.push((lo, hi));
            }
            let spread = ranges.iter().map(|r| r.1 - r.0).fold(0.0, f64::max);
            let mut sorted = ranges.clone();
            sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
            for w in sorted.windows(2) {
                if !(w[1].0 - w[0].1 > spread) {
                    separated = false;
                }
            }
        }
    }
    Clustering { groups, separated }
}

/// Knee selection result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustPick {
    pub point: FrontPoint,
    /// The threshold was never met; `point` is the last one
    pub flagged: bool,
}

/// Relative delay gain per Jc doubling between two front points.
pub fn gain_per_doubling(t0: f64, t1: f64, j0: f64, j1: f64) -> f64 {
    let steps = (j1 / j0).ln() / std::f64::consts::LN_2;
    if !(steps > 0.0) {
        return 1.0 - t1 / t0;
    }
    1.0 - (t1 / t0).powf(1.0 / steps)
}

/// Walk the front by ascending Jc and return the first point reached by a
/// step whose delay gain per Jc doubling is below `knee_threshold`.
pub fn robust_point(front: &ParetoFront, knee_threshold: f64) -> Result<RobustPick> {
    if front.points.is_empty() {
        return Err(Error::InvalidArgument("empty Pareto front".into()));
    }
    let mut pts = front.points.clone();
    pts.sort_by(|a, b| a.j_c.unwrap_or(0.0).total_cmp(&b.j_c.unwrap_or(0.0)).then(b.t_comet.total_cmp(&a.t_comet)));
    for w in pts.windows(2) {
        let g = gain_per_doubling(w[0].t_comet, w[1].t_comet, w[0].j_c.unwrap_or(1.0), w[1].j_c.unwrap_or(1.0));
        if g < knee_threshold {
            return Ok(RobustPick { point: w[1].clone(), flagged: false });
        }
    }
    Ok(RobustPick { point: pts.last().cloned().expect("non-empty"), flagged: true })
}

/// Default knee threshold: 10 % delay gain per Jc doubling.
pub const DEFAULT_KNEE: f64 = 0.10;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cardinalities() {
        let base = MaterialParams::default();
        assert_eq!(enumerate_space(&ParameterSpace::corners(), &base, None).len(), 144);
        let a10 = |p: &DesignPoint| p.params.a_ex == 10e-12;
        assert_eq!(enumerate_space(&ParameterSpace::corners(), &base, Some(&a10)).len(), 36);
        let one = ParameterSpace {
            ms_values: vec![0.3e6],
            ku_values: vec![0.5e6],
            a_values: vec![10e-12],
            alpha_values: vec![0.01],
            jc_values: vec![5e11],
            vfe_values: vec![0.11],
        };
        assert_eq!(enumerate_space(&one, &base, None).len(), 1);
        let all = enumerate_space(&ParameterSpace::default(), &base, None);
        assert_eq!(all.len(), 144 * 13 * 2);
        assert!(all.iter().enumerate().all(|(i, p)| p.index == i));
    }

    #[test]
    fn jc_grid_endpoints() {
        let j = log_space(1e10, 1e12, 13);
        assert_eq!(j.len(), 13);
        assert!((j[0] - 1e10).abs() < 1e-3 && (j[12] - 1e12).abs() < 1e-1 && (j[6] - 1e11).abs() < 1e-2);
    }

    #[test]
    fn pareto_small_cases() {
        assert_eq!(pareto_indices(&[(1.0, 1.0)]), vec![0]);
        assert_eq!(pareto_indices(&[(2.0, 2.0), (1.0, 1.0)]), vec![1]);
        assert_eq!(pareto_indices(&[(1.0, 1.0), (1.0, 1.0)]), vec![0]);
        assert_eq!(pareto_indices(&[(1.0, 3.0), (2.0, 2.0), (3.0, 1.0), (2.5, 2.5)]), vec![0, 1, 2]);
        assert!(pareto_indices(&[]).is_empty());
    }

    fn fp(t: f64, jc: f64) -> FrontPoint {
        FrontPoint { t_comet: t, e_comet: 1.0 / t, index: 0, j_c: Some(jc), v_fe: None, ms: 0.3e6 }
    }

    #[test]
    fn knee_examples() {
        // T halves per doubling: never below 10 %
        let front = ParetoFront { points: vec![fp(1.0, 4.0), fp(2.0, 2.0), fp(4.0, 1.0)] };
        let pick = robust_point(&front, DEFAULT_KNEE).unwrap();
        assert!(pick.flagged);
        assert_eq!(pick.point.j_c, Some(4.0));
        let front = ParetoFront { points: vec![fp(1.0, 2.0), fp(1.001, 1.0)] };
        let pick = robust_point(&front, DEFAULT_KNEE).unwrap();
        assert!(!pick.flagged);
        assert_eq!(pick.point.j_c, Some(2.0));
        assert!(robust_point(&ParetoFront::default(), DEFAULT_KNEE).is_err());
    }

    #[test]
    fn clustering_trivial_cases() {
        let c = cluster_by_ms(&[]);
        assert!(c.groups.is_empty() && c.separated);
        let p = MaterialParams::default();
        let c = cluster_by_ms(&[(p, vec![(1e11, 1.0)]), (p, vec![(1e11, 5.0)])]);
        assert_eq!(c.groups.len(), 1);
        assert!(c.separated);
    }
}
