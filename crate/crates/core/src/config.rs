// SPDX-License-Identifier: Apache-2.0
//! Run configuration: TOML with optional unit suffixes, strict key
//! checking, and `key=value` overrides.
//!
//! Quantities can be plain numbers (SI) or strings carrying a unit:
//!
//! ```toml
//! preset = "7nm"
//!
//! [material]
//! ms_pma = "0.3e6 A/m"
//! a_ex = "10 pJ/m"
//!
//! [drive]
//! v_fe = "150 mV"
//! ```
//!
//! `preset`, `constants` and `gate` are applied first because they set the
//! defaults every other key overrides.

use serde::{Deserialize, Serialize};
use toml::Value;

use crate::calibration::{Calibration, CalibrationEntry};
use crate::dse::{log_space, ParameterSpace, SweepContext, SweepMode, DEFAULT_KNEE};
use crate::dw::{DwConfig, HkModel};
use crate::error::{Error, Result};
use crate::llg::{FerroParams, ImaCoupling, InputCase, LlgSettings, StripRule};
use crate::perf::PerfSettings;
use crate::units::{ConstantsMode, DeviceGeometry, GateKind, MaterialParams, PhysicalConstants, TechNode, TransistorParams};

/// Physical dimension of a config value; decides the accepted units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dim {
    Plain,
    Magnetization,
    EnergyDensity,
    Exchange,
    ArealEnergy,
    Length,
    Area,
    Resistivity,
    Resistance,
    Capacitance,
    Voltage,
    Energy,
    CurrentDensity,
    Time,
    Polarization,
    EField,
    Angle,
    Count,
    Flag,
    Text,
}

fn units(dim: Dim) -> &'static [(&'static str, f64)] {
    match dim {
        Dim::Magnetization => &[("A/m", 1.0), ("kA/m", 1e3), ("MA/m", 1e6)],
        Dim::EnergyDensity => &[("J/m^3", 1.0), ("J/m3", 1.0), ("kJ/m^3", 1e3), ("MJ/m^3", 1e6), ("MJ/m3", 1e6)],
        Dim::Exchange => &[("J/m", 1.0), ("pJ/m", 1e-12)],
        Dim::ArealEnergy => &[("J/m^2", 1.0), ("J/m2", 1.0), ("mJ/m^2", 1e-3), ("mJ/m2", 1e-3)],
        Dim::Length => &[("m", 1.0), ("mm", 1e-3), ("um", 1e-6), ("µm", 1e-6), ("nm", 1e-9), ("pm", 1e-12)],
        Dim::Area => &[("m^2", 1.0), ("m2", 1.0), ("um^2", 1e-12), ("nm^2", 1e-18), ("nm2", 1e-18)],
        Dim::Resistivity => &[("Ohm*m", 1.0), ("Ohm.m", 1.0), ("Ohm*cm", 1e-2), ("uOhm*cm", 1e-8)],
        Dim::Resistance => &[("Ohm", 1.0), ("kOhm", 1e3)],
        Dim::Capacitance => &[("F", 1.0), ("pF", 1e-12), ("fF", 1e-15), ("aF", 1e-18)],
        Dim::Voltage => &[("V", 1.0), ("mV", 1e-3)],
        Dim::Energy => &[("J", 1.0), ("fJ", 1e-15), ("aJ", 1e-18), ("zJ", 1e-21)],
        Dim::CurrentDensity => &[("A/m^2", 1.0), ("A/m2", 1.0), ("A/cm^2", 1e4), ("A/cm2", 1e4)],
        Dim::Time => &[("s", 1.0), ("ns", 1e-9), ("ps", 1e-12), ("fs", 1e-15)],
        Dim::Polarization => &[("C/m^2", 1.0), ("C/m2", 1.0), ("uC/cm^2", 1e-2), ("uC/cm2", 1e-2)],
        Dim::EField => &[("V/m", 1.0), ("MV/m", 1e6), ("MV/cm", 1e8), ("kV/cm", 1e5)],
        Dim::Angle => &[("deg", 1.0), ("rad", 180.0 / std::f64::consts::PI)],
        Dim::Plain | Dim::Count | Dim::Flag | Dim::Text => &[],
    }
}

/// Every accepted key with its dimension.
pub const SCHEMA: &[(&str, Dim)] = &[
    ("preset", Dim::Text),
    ("constants", Dim::Text),
    ("gate", Dim::Text),
    ("input_case", Dim::Text),
    ("material.ms_pma", Dim::Magnetization),
    ("material.ku_pma", Dim::EnergyDensity),
    ("material.a_ex", Dim::Exchange),
    ("material.alpha", Dim::Plain),
    ("material.ms_ima", Dim::Magnetization),
    ("material.d_dmi", Dim::ArealEnergy),
    ("material.theta_she", Dim::Plain),
    ("material.beta_stt", Dim::Plain),
    ("material.p_pma", Dim::Plain),
    ("material.rho_shm", Dim::Resistivity),
    ("material.eps_fe", Dim::Plain),
    ("material.kappa_me", Dim::Plain),
    ("material.kappa_ime", Dim::Plain),
    ("material.gamma_v", Dim::Plain),
    ("material.h_int", Dim::Length),
    ("geometry.f_feat", Dim::Length),
    ("geometry.h_pma", Dim::Length),
    ("geometry.h_ima", Dim::Length),
    ("geometry.h_fe_in", Dim::Length),
    ("geometry.h_fe_out", Dim::Length),
    ("geometry.fe_in_area", Dim::Area),
    ("geometry.nucleation_offset", Dim::Length),
    ("geometry.propagation_distance", Dim::Length),
    ("geometry.l_shm", Dim::Length),
    ("geometry.w_shm", Dim::Length),
    ("geometry.h_shm", Dim::Length),
    ("transistor.r_on", Dim::Resistance),
    ("transistor.c_g", Dim::Capacitance),
    ("transistor.v_th", Dim::Voltage),
    ("transistor.leak_energy_per_gate", Dim::Energy),
    ("transistor.v_dd", Dim::Voltage),
    ("drive.v_fe", Dim::Voltage),
    ("drive.j_c", Dim::CurrentDensity),
    ("ferro.p_remnant", Dim::Polarization),
    ("ferro.e_coercive", Dim::EField),
    ("ferro.polar_tilt_deg", Dim::Angle),
    ("ferro.me_scale", Dim::Plain),
    ("ferro.dt", Dim::Time),
    ("ferro.p_initial", Dim::Plain),
    ("llg.dt", Dim::Time),
    ("llg.relax_time", Dim::Time),
    ("llg.horizon", Dim::Time),
    ("llg.sample_every", Dim::Time),
    ("llg.persist", Dim::Count),
    ("llg.strip", Dim::Text),
    ("llg.strip_width_f", Dim::Plain),
    ("llg.stop_on_nucleation", Dim::Flag),
    ("llg.cell", Dim::Length),
    ("llg.length_f", Dim::Plain),
    ("llg.width_f", Dim::Plain),
    ("llg.ima_length_f", Dim::Plain),
    ("llg.coupling", Dim::Text),
    ("llg.local_demag", Dim::Flag),
    ("dw.hk_model", Dim::Text),
    ("dw.dmi_sign", Dim::Plain),
    ("dw.she_sign", Dim::Plain),
    ("dw.stt_scale", Dim::Plain),
    ("dw.dt", Dim::Time),
    ("dw.phase_relax", Dim::Time),
    ("dw.phase_start", Dim::Plain),
    ("dw.horizon", Dim::Time),
    ("dw.trace_every", Dim::Count),
    ("perf.k_inv", Dim::Plain),
    ("perf.wire_r", Dim::Resistance),
    ("perf.wire_c", Dim::Capacitance),
    ("perf.v_prop", Dim::Voltage),
    ("perf.v_rst", Dim::Voltage),
    ("perf.ime_scale", Dim::Plain),
    ("perf.leakage", Dim::Energy),
    ("perf.calibrated", Dim::Flag),
    ("sweep.mode", Dim::Text),
    ("sweep.ms_values", Dim::Magnetization),
    ("sweep.ku_values", Dim::EnergyDensity),
    ("sweep.a_values", Dim::Exchange),
    ("sweep.alpha_values", Dim::Plain),
    ("sweep.jc_values", Dim::CurrentDensity),
    ("sweep.jc_points", Dim::Count),
    ("sweep.vfe_values", Dim::Voltage),
    ("sweep.knee", Dim::Plain),
    ("sweep.ima_thicknesses", Dim::Length),
];

fn dim_of(key: &str) -> Result<Dim> {
    SCHEMA.iter().find(|(k, _)| *k == key).map(|(_, d)| *d).ok_or_else(|| Error::UnknownKey {
        key: key.to_string(),
        hint: SCHEMA
            .iter()
            .map(|(k, _)| (*k, strsim::jaro_winkler(key, k)))
            .filter(|(_, s)| *s > 0.8)
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(k, _)| k.to_string()),
    })
}

fn normalize_unit(u: &str) -> String {
    u.replace(['·', '×'], "*").replace('Ω', "Ohm").replace('³', "^3").replace('²', "^2").replace(' ', "")
}

/// SI value of `v` for a key of dimension `dim`.
pub fn to_si(key: &str, dim: Dim, v: &Value) -> Result<f64> {
    let mismatch = |msg: String| Error::UnitMismatch { key: key.to_string(), msg };
    match v {
        Value::Integer(i) => Ok(*i as f64),
        Value::Float(f) => Ok(*f),
        Value::String(s) => {
            let s = s.trim();
            let split = s
                .char_indices()
                .find(|&(i, c)| c.is_alphabetic() && !(matches!(c, 'e' | 'E') && s[i + 1..].starts_with(|d: char| d.is_ascii_digit() || d == '-' || d == '+')) || c == 'µ' || c == 'Ω')
                .map(|(i, _)| i)
                .unwrap_or(s.len());
            let (num, unit) = s.split_at(split);
            let x: f64 = num.trim().parse().map_err(|_| mismatch(format!("`{s}` is not a number with a unit")))?;
            let unit = normalize_unit(unit.trim());
            if unit.is_empty() {
                return Ok(x);
            }
            let table = units(dim);
            match table.iter().find(|(u, _)| normalize_unit(u) == unit) {
                Some((_, f)) => Ok(x * f),
                None if table.is_empty() => Err(mismatch(format!("`{key}` is dimensionless, got unit `{unit}`"))),
                None => Err(mismatch(format!(
                    "unit `{unit}` not accepted; use one of {}",
                    table.iter().map(|(u, _)| *u).collect::<Vec<_>>().join(", ")
                ))),
            }
        }
        other => Err(mismatch(format!("expected a number, got {}", other.type_str()))),
    }
}

/// Operating point for single-run commands.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveConfig {
    /// V
    pub v_fe: f64,
    /// A/m²
    pub j_c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub mode: SweepMode,
    pub space: ParameterSpace,
    pub knee: f64,
    /// IMA-FM thicknesses for the thickness sweep (m)
    pub ima_thicknesses: Vec<f64>,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub node: TechNode,
    pub constants_mode: ConstantsMode,
    pub constants: PhysicalConstants,
    pub gate: GateKind,
    pub input_case: InputCase,
    pub material: MaterialParams,
    pub geometry: DeviceGeometry,
    pub transistor: TransistorParams,
    pub drive: DriveConfig,
    pub ferro: FerroParams,
    pub llg: LlgSettings,
    pub dw: DwConfig,
    pub perf: PerfSettings,
    /// Use the shipped per-(node, V_FE) circuit calibration
    pub calibrated: bool,
    pub sweep: SweepConfig,
}

impl RunConfig {
    /// Defaults for a node, constants mode and gate.
    pub fn defaults(node: TechNode, mode: ConstantsMode, gate: GateKind) -> Self {
        let constants = PhysicalConstants::for_mode(mode);
        Self {
            node,
            constants_mode: mode,
            constants,
            gate,
            input_case: InputCase::Composite,
            material: MaterialParams::reference(&constants),
            geometry: DeviceGeometry::for_feature(node.feature(), gate),
            transistor: node.transistor(),
            drive: DriveConfig { v_fe: 0.110, j_c: 5e11 },
            ferro: FerroParams::default(),
            llg: LlgSettings::default(),
            dw: DwConfig::default(),
            perf: PerfSettings::default(),
            calibrated: false,
            sweep: SweepConfig {
                mode: SweepMode::FullGate,
                space: ParameterSpace::default(),
                knee: DEFAULT_KNEE,
                ima_thicknesses: vec![1e-9, 2e-9, 3e-9],
            },
        }
    }
}

impl RunConfig {
    /// Shipped calibration entry for the current node and `v_fe`, when
    /// `calibrated` is set.
    pub fn calibration_entry(&self, v_fe: f64) -> Result<Option<CalibrationEntry>> {
        if !self.calibrated {
            return Ok(None);
        }
        Calibration::builtin().lookup(self.node, v_fe).map(Some)
    }

    /// Geometry and circuit settings for a gate evaluation at `v_fe`.
    pub fn perf_inputs(&self, v_fe: f64) -> Result<(DeviceGeometry, PerfSettings)> {
        let mut geometry = self.geometry;
        let mut perf = self.perf;
        if let Some(e) = self.calibration_entry(v_fe)? {
            e.apply_geometry(&mut geometry);
            perf = PerfSettings { ime_scale: self.perf.ime_scale, wire_r: self.perf.wire_r, wire_c: self.perf.wire_c, ..e.settings() };
        }
        Ok((geometry, perf))
    }

    pub fn sweep_context(&self) -> SweepContext {
        SweepContext {
            geometry: self.geometry,
            transistor: self.transistor,
            consts: self.constants,
            ferro: self.ferro,
            llg: self.llg,
            dw: self.dw,
            perf: self.perf,
            calibration: self.calibrated.then(|| (self.node, Calibration::builtin())),
            gate: self.gate,
            case: self.input_case,
            default_v_fe: self.drive.v_fe,
            default_j_c: self.drive.j_c,
        }
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        Self::defaults(TechNode::N15, ConstantsMode::Codata, GateKind::Maj3)
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, Value)>) {
    match v {
        Value::Table(t) => {
            for (k, x) in t {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                if matches!(x, Value::Table(_)) {
                    flatten(&key, x, out);
                } else {
                    out.push((key, x.clone()));
                }
            }
        }
        _ => out.push((prefix.to_string(), v.clone())),
    }
}

fn text(key: &str, v: &Value) -> Result<String> {
    v.as_str().map(str::to_string).ok_or_else(|| Error::Config(format!("`{key}` expects a string")))
}

fn flag(key: &str, v: &Value) -> Result<bool> {
    v.as_bool().ok_or_else(|| Error::Config(format!("`{key}` expects true or false")))
}

fn count(key: &str, v: &Value) -> Result<usize> {
    match v.as_integer() {
        Some(i) if i >= 0 => Ok(i as usize),
        _ => Err(Error::Config(format!("`{key}` expects a non-negative integer"))),
    }
}

fn list(key: &str, dim: Dim, v: &Value) -> Result<Vec<f64>> {
    match v {
        Value::Array(a) => a.iter().map(|x| to_si(key, dim, x)).collect(),
        _ => Ok(vec![to_si(key, dim, v)?]),
    }
}

fn kebab<T: serde::de::DeserializeOwned>(key: &str, v: &Value) -> Result<T> {
    let s = text(key, v)?;
    T::deserialize(toml::Value::String(s.clone())).map_err(|_| Error::Config(format!("`{key}`: unrecognised value `{s}`")))
}

fn apply(cfg: &mut RunConfig, key: &str, v: &Value) -> Result<()> {
    let dim = dim_of(key)?;
    let num = || to_si(key, dim, v);
    let m = &mut cfg.material;
    let g = &mut cfg.geometry;
    let t = &mut cfg.transistor;
    match key {
        "preset" | "constants" | "gate" => {}
        "input_case" => cfg.input_case = kebab(key, v)?,
        "material.ms_pma" => m.ms_pma = num()?,
        "material.ku_pma" => m.ku_pma = num()?,
        "material.a_ex" => m.a_ex = num()?,
        "material.alpha" => m.alpha = num()?,
        "material.ms_ima" => m.ms_ima = num()?,
        "material.d_dmi" => m.d_dmi = num()?,
        "material.theta_she" => m.theta_she = num()?,
        "material.beta_stt" => m.beta_stt = num()?,
        "material.p_pma" => m.p_pma = num()?,
        "material.rho_shm" => m.rho_shm = num()?,
        "material.eps_fe" => m.eps_fe = num()?,
        "material.kappa_me" => m.kappa_me = num()?,
        "material.kappa_ime" => m.kappa_ime = num()?,
        "material.gamma_v" => m.gamma_v = num()?,
        "material.h_int" => m.h_int = num()?,
        "geometry.f_feat" => g.f_feat = num()?,
        "geometry.h_pma" => g.h_pma = num()?,
        "geometry.h_ima" => g.h_ima = num()?,
        "geometry.h_fe_in" => g.h_fe_in = num()?,
        "geometry.h_fe_out" => g.h_fe_out = num()?,
        "geometry.fe_in_area" => g.fe_in_area = num()?,
        "geometry.nucleation_offset" => g.nucleation_offset = num()?,
        "geometry.propagation_distance" => g.propagation_distance = num()?,
        "geometry.l_shm" => g.l_shm = num()?,
        "geometry.w_shm" => g.w_shm = num()?,
        "geometry.h_shm" => g.h_shm = num()?,
        "transistor.r_on" => t.r_on = num()?,
        "transistor.c_g" => t.c_g = num()?,
        "transistor.v_th" => t.v_th = num()?,
        "transistor.leak_energy_per_gate" => t.leak_energy_per_gate = num()?,
        "transistor.v_dd" => t.v_dd = num()?,
        "drive.v_fe" => cfg.drive.v_fe = num()?,
        "drive.j_c" => cfg.drive.j_c = num()?,
        "ferro.p_remnant" => cfg.ferro.p_remnant = num()?,
        "ferro.e_coercive" => cfg.ferro.e_coercive = Some(num()?),
        "ferro.polar_tilt_deg" => cfg.ferro.polar_tilt_deg = num()?,
        "ferro.me_scale" => cfg.ferro.me_scale = num()?,
        "ferro.dt" => cfg.ferro.dt = num()?,
        "ferro.p_initial" => cfg.ferro.p_initial = num()?,
        "llg.dt" => cfg.llg.dt = num()?,
        "llg.relax_time" => cfg.llg.relax_time = num()?,
        "llg.horizon" => cfg.llg.horizon = num()?,
        "llg.sample_every" => cfg.llg.sample_every = num()?,
        "llg.persist" => cfg.llg.persist = count(key, v)?,
        "llg.strip" => cfg.llg.strip = kebab::<StripRule>(key, v)?,
        "llg.strip_width_f" => cfg.llg.strip_width_f = num()?,
        "llg.stop_on_nucleation" => cfg.llg.stop_on_nucleation = flag(key, v)?,
        "llg.cell" => cfg.llg.grid.cell = num()?,
        "llg.length_f" => cfg.llg.grid.length_f = num()?,
        "llg.width_f" => cfg.llg.grid.width_f = num()?,
        "llg.ima_length_f" => cfg.llg.grid.ima_length_f = num()?,
        "llg.coupling" => cfg.llg.grid.coupling = kebab::<ImaCoupling>(key, v)?,
        "llg.local_demag" => cfg.llg.grid.local_demag = flag(key, v)?,
        "dw.hk_model" => cfg.dw.hk_model = kebab::<HkModel>(key, v)?,
        "dw.dmi_sign" => cfg.dw.dmi_sign = num()?,
        "dw.she_sign" => cfg.dw.she_sign = num()?,
        "dw.stt_scale" => cfg.dw.stt_scale = num()?,
        "dw.dt" => cfg.dw.dt = num()?,
        "dw.phase_relax" => cfg.dw.phase_relax = num()?,
        "dw.phase_start" => cfg.dw.phase_start = num()?,
        "dw.horizon" => cfg.dw.horizon = num()?,
        "dw.trace_every" => cfg.dw.trace_every = count(key, v)?,
        "perf.k_inv" => cfg.perf.k_inv = num()?,
        "perf.wire_r" => cfg.perf.wire_r = num()?,
        "perf.wire_c" => cfg.perf.wire_c = num()?,
        "perf.v_prop" => cfg.perf.v_prop = Some(num()?),
        "perf.v_rst" => cfg.perf.v_rst = Some(num()?),
        "perf.ime_scale" => cfg.perf.ime_scale = num()?,
        "perf.leakage" => cfg.perf.leakage = Some(num()?),
        "perf.calibrated" => cfg.calibrated = flag(key, v)?,
        "sweep.mode" => cfg.sweep.mode = text(key, v)?.parse()?,
        "sweep.ms_values" => cfg.sweep.space.ms_values = list(key, dim, v)?,
        "sweep.ku_values" => cfg.sweep.space.ku_values = list(key, dim, v)?,
        "sweep.a_values" => cfg.sweep.space.a_values = list(key, dim, v)?,
        "sweep.alpha_values" => cfg.sweep.space.alpha_values = list(key, dim, v)?,
        "sweep.jc_values" => cfg.sweep.space.jc_values = list(key, dim, v)?,
        "sweep.jc_points" => {
            let n = count(key, v)?;
            cfg.sweep.space.jc_values = log_space(1e10, 1e12, n);
        }
        "sweep.vfe_values" => cfg.sweep.space.vfe_values = list(key, dim, v)?,
        "sweep.knee" => cfg.sweep.knee = num()?,
        "sweep.ima_thicknesses" => cfg.sweep.ima_thicknesses = list(key, dim, v)?,
        _ => unreachable!("schema key without a setter: {key}"),
    }
    Ok(())
}

/// Parse an override value: TOML syntax when it parses, a bare string
/// otherwise (so `--set drive.v_fe="150 mV"` and `--set gate=INV` both work).
fn override_value(raw: &str) -> Value {
    match toml::from_str::<toml::Table>(&format!("v = {raw}")) {
        Ok(mut t) => t.remove("v").unwrap_or(Value::String(raw.to_string())),
        Err(_) => Value::String(raw.trim().to_string()),
    }
}

/// Split `key=value`.
pub fn parse_override(s: &str) -> Result<(String, String)> {
    match s.split_once('=') {
        Some((k, v)) if !k.trim().is_empty() => Ok((k.trim().to_string(), v.trim().to_string())),
        _ => Err(Error::Config(format!("override `{s}` is not key=value"))),
    }
}

/// Parse config text, then apply `overrides` on top.
pub fn parse_config_with(src: &str, overrides: &[(String, String)]) -> Result<RunConfig> {
    let root: toml::Table = toml::from_str(src).map_err(|e| Error::Config(e.to_string()))?;
    let mut entries = Vec::new();
    flatten("", &Value::Table(root), &mut entries);
    for (k, v) in overrides {
        entries.push((k.clone(), override_value(v)));
    }
    for (k, _) in &entries {
        dim_of(k)?;
    }
    let last = |name: &str| entries.iter().rev().find(|(k, _)| k == name).map(|(k, v)| text(k, v)).transpose();
    let node = match last("preset")? {
        Some(s) => s.parse()?,
        None => TechNode::N15,
    };
    let mode = match last("constants")?.as_deref() {
        None | Some("codata") => ConstantsMode::Codata,
        Some("rounded") => ConstantsMode::Rounded,
        Some(other) => return Err(Error::Config(format!("`constants`: expected codata or rounded, got `{other}`"))),
    };
    let gate = match last("gate")? {
        Some(s) => s.parse()?,
        None => GateKind::Maj3,
    };
    let mut cfg = RunConfig::defaults(node, mode, gate);
    for (k, v) in &entries {
        apply(&mut cfg, k, v)?;
    }
    cfg.material.validate()?;
    cfg.geometry.validate()?;
    Ok(cfg)
}

/// Parse config text with no overrides.
pub fn parse_config(src: &str) -> Result<RunConfig> {
    parse_config_with(src, &[])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_defaults() {
        assert_eq!(parse_config("").unwrap(), RunConfig::default());
    }

    #[test]
    fn unit_suffixes_convert() {
        let c = parse_config("[material]\nms_pma = \"0.3e6 A/m\"\na_ex = \"20 pJ/m\"\n[drive]\nv_fe = \"150 mV\"\n").unwrap();
        assert_eq!(c.material.ms_pma, 3e5);
        assert!((c.material.a_ex - 20e-12).abs() < 1e-24);
        assert!((c.drive.v_fe - 0.150).abs() < 1e-15);
        let c = parse_config("[geometry]\nh_shm = \"1.1 nm\"\n[ferro]\ne_coercive = \"0.127 MV/cm\"").unwrap();
        assert!((c.geometry.h_shm - 1.1e-9).abs() < 1e-21);
        assert!((c.ferro.e_coercive.unwrap() - 1.27e7).abs() < 1e-3);
    }

    #[test]
    fn near_miss_is_named() {
        let e = parse_config("[material]\nms_pm = 1.0\n").unwrap_err();
        match e {
            Error::UnknownKey { key, hint } => {
                assert_eq!(key, "material.ms_pm");
                assert_eq!(hint.as_deref(), Some("material.ms_pma"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn wrong_unit_is_rejected() {
        let e = parse_config("[material]\nms_pma = \"0.3 T\"\n").unwrap_err();
        assert!(matches!(e, Error::UnitMismatch { .. }), "{e:?}");
        let e = parse_config("[material]\nalpha = \"0.01 nm\"\n").unwrap_err();
        assert!(matches!(e, Error::UnitMismatch { .. }), "{e:?}");
    }

    #[test]
    fn parse_errors_carry_position() {
        let e = parse_config("[material\nms_pma = 1").unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("line 1"), "{msg}");
    }

    #[test]
    fn overrides_and_presets() {
        let o = vec![
            ("preset".to_string(), "7nm".to_string()),
            ("gate".to_string(), "INV".to_string()),
            ("drive.j_c".to_string(), "2e11".to_string()),
            ("sweep.vfe_values".to_string(), "[\"110 mV\", 0.15]".to_string()),
        ];
        let c = parse_config_with("", &o).unwrap();
        assert_eq!(c.node, TechNode::N7);
        assert_eq!(c.gate, GateKind::Inv);
        assert!((c.geometry.propagation_distance - 14e-9).abs() < 1e-20);
        assert_eq!(c.transistor.r_on, 4109.0);
        assert_eq!(c.drive.j_c, 2e11);
        assert_eq!(c.sweep.space.vfe_values.len(), 2);
        assert!(parse_config_with("", &[("drive.vfe".into(), "1".into())]).is_err());
        assert!(parse_override("novalue").is_err());
        assert_eq!(parse_override("a.b = 3").unwrap(), ("a.b".to_string(), "3".to_string()));
    }

    #[test]
    fn rounded_constants_mode() {
        let c = parse_config("constants = \"rounded\"").unwrap();
        assert_eq!(c.constants.c_light, 3e8);
        assert!((c.material.kappa_me - 0.2 / 3e8).abs() < 1e-24);
    }

    #[test]
    fn every_schema_key_has_a_setter() {
        for (k, d) in SCHEMA {
            let v = match d {
                Dim::Text => match *k {
                    "preset" => Value::String("15nm".into()),
                    "constants" => Value::String("codata".into()),
                    "gate" => Value::String("MAJ3".into()),
                    "input_case" => Value::String("bare-2f".into()),
                    "llg.strip" => Value::String("centered".into()),
                    "llg.coupling" => Value::String("rigid".into()),
                    "dw.hk_model" => Value::String("uniaxial".into()),
                    "sweep.mode" => Value::String("nucleation".into()),
                    _ => panic!("text key {k} not covered"),
                },
                Dim::Flag => Value::Boolean(true),
                Dim::Count => Value::Integer(3),
                _ => Value::Float(1.0),
            };
            let mut c = RunConfig::default();
            apply(&mut c, k, &v).unwrap_or_else(|e| panic!("{k}: {e}"));
        }
    }
}
