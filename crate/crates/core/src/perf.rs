// SPDX-License-Identifier: Apache-2.0
//! Gate-level delay and energy.
//!
//! ```text
//! T = 2·(t_nucleate + t_propagate + t_qtransfer)
//! E = 2·(E_FE + E_TX + E_Joule + E_leakage)
//! ```
//!
//! The factor 2 accounts for re-initializing every input magnet before the
//! evaluation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{DeviceGeometry, GateKind, MaterialParams, PhysicalConstants, TechNode, TransistorParams};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StageDelays {
    pub t_nucleate: f64,
    pub t_propagate: f64,
    pub t_qtransfer: f64,
}

impl StageDelays {
    pub fn sum(&self) -> f64 {
        self.t_nucleate + self.t_propagate + self.t_qtransfer
    }

    pub fn validate(&self) -> Result<()> {
        if [self.t_nucleate, self.t_propagate, self.t_qtransfer].iter().all(|t| *t >= 0.0 && t.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("stage delays must be non-negative: {self:?}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub e_fe: f64,
    pub e_tx: f64,
    pub e_joule: f64,
    pub e_leakage: f64,
}

impl EnergyBreakdown {
    pub fn sum(&self) -> f64 {
        self.e_fe + self.e_tx + self.e_joule + self.e_leakage
    }

    pub fn validate(&self) -> Result<()> {
        if [self.e_fe, self.e_tx, self.e_joule, self.e_leakage].iter().all(|e| *e >= 0.0 && e.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("energies must be non-negative: {self:?}")))
        }
    }
}

/// Operating point of one evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Drive {
    /// Input FE voltage (V)
    pub v_fe: f64,
    /// SHM current density (A/m²)
    pub j_c: f64,
    /// Propagation-transistor gate voltage (V)
    pub v_prop: f64,
    /// Reset-transistor gate voltage (V)
    pub v_rst: f64,
}

/// Circuit-level knobs that the device physics does not fix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PerfSettings {
    /// Dual-rail inverter delay in units of R_on·C_load
    pub k_inv: f64,
    /// Wire resistance to the next FE_in (Ω)
    pub wire_r: f64,
    /// Wire capacitance (F)
    pub wire_c: f64,
    /// Propagation-transistor gate voltage (V); the node supply when absent
    pub v_prop: Option<f64>,
    /// Reset-transistor gate voltage (V); the node supply when absent
    pub v_rst: Option<f64>,
    /// Unit-convention factor on the IME output voltage
    pub ime_scale: f64,
    /// Leakage energy per evaluation (J); the transistor record's value when
    /// absent
    pub leakage: Option<f64>,
}

impl Default for PerfSettings {
    fn default() -> Self {
        Self { k_inv: DEFAULT_K_INV, wire_r: 0.0, wire_c: 0.0, v_prop: None, v_rst: None, ime_scale: 1.0, leakage: None }
    }
}

/// k_inv that puts t_qtransfer at 8.8 ps for the 15 nm node (C_load = C_FEin
/// with CODATA ε0).
pub const DEFAULT_K_INV: f64 = 19.349;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateReport {
    pub gate_kind: GateKind,
    pub k_inputs: u32,
    pub delays: StageDelays,
    pub energies: EnergyBreakdown,
    pub t_comet: f64,
    pub e_comet: f64,
    pub v_out: f64,
    pub drive: Drive,
}

impl GateReport {
    /// Assemble a report from stage values; totals follow the factor-2
    /// identities.
    pub fn from_stages(gate_kind: GateKind, delays: StageDelays, energies: EnergyBreakdown, drive: Drive, v_out: f64) -> Self {
        Self {
            gate_kind,
            k_inputs: gate_kind.k_inputs(),
            delays,
            energies,
            t_comet: 2.0 * delays.sum(),
            e_comet: 2.0 * energies.sum(),
            v_out,
            drive,
        }
    }
}

/// Output voltage κ_IME·h_int·M (V). The FE_out thickness cancels; it is
/// still validated.
pub fn ime_output_voltage(m: f64, params: &MaterialParams, geometry: &DeviceGeometry) -> Result<f64> {
    if !(geometry.h_fe_out > 0.0) {
        return Err(Error::InvalidGeometry(format!("h_fe_out must be positive, got {}", geometry.h_fe_out)));
    }
    let e_ime = params.kappa_ime * params.h_int / geometry.h_fe_out * m;
    Ok(e_ime * geometry.h_fe_out)
}

/// Parallel-plate capacitance of FE_in (F).
pub fn fe_capacitance(params: &MaterialParams, geometry: &DeviceGeometry, consts: &PhysicalConstants) -> Result<f64> {
    if !(geometry.h_fe_in > 0.0 && geometry.fe_in_area > 0.0) {
        return Err(Error::InvalidGeometry("FE_in area and thickness must be positive".into()));
    }
    Ok(consts.eps0 * params.eps_fe * geometry.fe_in_area / geometry.h_fe_in)
}

/// (K/2)·C_FEin·V_FE².
pub fn fe_charge_energy(
    k_inputs: u32,
    v_fe: f64,
    params: &MaterialParams,
    geometry: &DeviceGeometry,
    consts: &PhysicalConstants,
) -> Result<f64> {
    if k_inputs == 0 {
        return Err(Error::InvalidArgument("a gate needs at least one input".into()));
    }
    Ok(0.5 * k_inputs as f64 * fe_capacitance(params, geometry, consts)? * v_fe * v_fe)
}

/// ρ·l/(w·t) of the SHM current path (Ω).
pub fn shm_resistance(geometry: &DeviceGeometry, params: &MaterialParams) -> Result<f64> {
    let (l, w, t) = (geometry.l_shm, geometry.w_shm, geometry.h_shm);
    if !(w * t > 0.0) || !(l > 0.0) {
        return Err(Error::InvalidGeometry(format!("SHM path must have positive l, w, t; got {l}, {w}, {t}")));
    }
    Ok(params.rho_shm * l / (w * t))
}

/// (Jc·w·t)²·(R_on + R_SHM)·t_propagate.
pub fn joule_energy(
    j_c: f64,
    geometry: &DeviceGeometry,
    params: &MaterialParams,
    transistor: &TransistorParams,
    t_propagate: f64,
) -> Result<f64> {
    if !(t_propagate >= 0.0) {
        return Err(Error::InvalidArgument(format!("t_propagate must be non-negative, got {t_propagate}")));
    }
    let i = j_c * geometry.w_shm * geometry.h_shm;
    Ok(i * i * (transistor.r_on + shm_resistance(geometry, params)?) * t_propagate)
}

/// (C_g/2)·((K+1)·V_RST² + V_PROP² + 2·V_OUT²).
pub fn tx_energy(k_inputs: u32, v_rst: f64, v_prop: f64, v_out: f64, c_g: f64) -> Result<f64> {
    if k_inputs == 0 {
        return Err(Error::InvalidArgument("a gate needs at least one input".into()));
    }
    Ok(0.5 * c_g * ((k_inputs as f64 + 1.0) * v_rst * v_rst + v_prop * v_prop + 2.0 * v_out * v_out))
}

/// k_inv·R_on·C_load + 0.69·R_wire·C_wire.
pub fn qtransfer_delay(r_on: f64, k_inv: f64, c_load: f64, wire_rc: (f64, f64)) -> Result<f64> {
    if r_on < 0.0 || k_inv < 0.0 || c_load < 0.0 || wire_rc.0 < 0.0 || wire_rc.1 < 0.0 {
        return Err(Error::InvalidArgument("RC values must be non-negative".into()));
    }
    Ok(k_inv * r_on * c_load + 0.69 * wire_rc.0 * wire_rc.1)
}

/// Full gate evaluation from physical stage delays. The propagation
/// distance behind `t_propagate` is the gate's full travel (4F for a
/// majority gate, whichever inputs flip).
#[allow(clippy::too_many_arguments)]
pub fn gate_report(
    gate_kind: GateKind,
    params: &MaterialParams,
    geometry: &DeviceGeometry,
    transistor: &TransistorParams,
    consts: &PhysicalConstants,
    settings: &PerfSettings,
    v_fe: f64,
    j_c: f64,
    t_nucleate: f64,
    t_propagate: f64,
) -> Result<GateReport> {
    let k = gate_kind.k_inputs();
    let c_fe = fe_capacitance(params, geometry, consts)?;
    let delays = StageDelays {
        t_nucleate,
        t_propagate,
        t_qtransfer: qtransfer_delay(transistor.r_on, settings.k_inv, c_fe, (settings.wire_r, settings.wire_c))?,
    };
    delays.validate()?;
    let drive = Drive {
        v_fe,
        j_c,
        v_prop: settings.v_prop.unwrap_or(transistor.v_dd),
        v_rst: settings.v_rst.unwrap_or(transistor.v_dd),
    };
    let v_out = (settings.ime_scale * ime_output_voltage(params.ms_pma, params, geometry)?).clamp(-transistor.v_dd, transistor.v_dd);
    let energies = EnergyBreakdown {
        e_fe: fe_charge_energy(k, v_fe, params, geometry, consts)?,
        e_tx: tx_energy(k, drive.v_rst, drive.v_prop, v_out, transistor.c_g)?,
        e_joule: joule_energy(j_c, geometry, params, transistor, t_propagate)?,
        e_leakage: settings.leakage.unwrap_or(transistor.leak_energy_per_gate),
    };
    energies.validate()?;
    Ok(GateReport::from_stages(gate_kind, delays, energies, drive, v_out))
}

/// One gate column of a benchmark row, ps and aJ as printed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RowValues {
    pub t_nucleate: f64,
    pub t_propagate: f64,
    pub t_qtransfer: f64,
    pub t_comet: f64,
    pub e_fe: f64,
    pub e_tx: f64,
    pub e_joule: f64,
    pub e_leakage: f64,
    pub e_comet: f64,
}

impl RowValues {
    /// Stage values converted to SI.
    pub fn delays(&self) -> StageDelays {
        StageDelays { t_nucleate: self.t_nucleate * 1e-12, t_propagate: self.t_propagate * 1e-12, t_qtransfer: self.t_qtransfer * 1e-12 }
    }

    pub fn energies(&self) -> EnergyBreakdown {
        EnergyBreakdown { e_fe: self.e_fe * 1e-18, e_tx: self.e_tx * 1e-18, e_joule: self.e_joule * 1e-18, e_leakage: self.e_leakage * 1e-18 }
    }
}

/// A benchmark row: MAJ3 and INV at one node and FE voltage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceRow {
    pub node: TechNode,
    pub v_fe: f64,
    pub maj3: RowValues,
    pub inv: RowValues,
}

const fn row(v: [f64; 9]) -> RowValues {
    RowValues {
        t_nucleate: v[0],
        t_propagate: v[1],
        t_qtransfer: v[2],
        t_comet: v[3],
        e_fe: v[4],
        e_tx: v[5],
        e_joule: v[6],
        e_leakage: v[7],
        e_comet: v[8],
    }
}

/// Published benchmark rows at Ms = 0.3e6 A/m, Ku = 0.5e6 J/m³,
/// A = 10 pJ/m, α = 0.01, Jc = 5e11 A/m².
pub const REFERENCE_ROWS: [ReferenceRow; 4] = [
    ReferenceRow {
        node: TechNode::N15,
        v_fe: 0.110,
        maj3: row([35.0, 77.4, 8.8, 242.4, 2.4, 40.8, 19.8, 16.3, 158.6]),
        inv: row([35.0, 38.7, 8.8, 165.5, 0.8, 24.2, 1.6, 16.3, 85.8]),
    },
    ReferenceRow {
        node: TechNode::N15,
        v_fe: 0.150,
        maj3: row([30.0, 77.4, 8.2, 231.2, 4.4, 42.0, 25.5, 22.8, 189.4]),
        inv: row([30.0, 38.7, 8.2, 153.8, 1.5, 30.6, 1.5, 22.8, 112.8]),
    },
    ReferenceRow {
        node: TechNode::N7,
        v_fe: 0.110,
        maj3: row([30.0, 36.2, 7.9, 148.2, 0.5, 16.8, 1.8, 13.7, 65.6]),
        inv: row([30.0, 18.1, 7.9, 112.0, 0.1, 12.0, 0.1, 13.7, 51.8]),
    },
    ReferenceRow {
        node: TechNode::N7,
        v_fe: 0.150,
        maj3: row([25.0, 36.2, 6.2, 134.8, 0.9, 21.4, 1.8, 18.5, 85.2]),
        inv: row([25.0, 18.1, 6.2, 98.6, 0.3, 15.3, 0.1, 18.5, 68.4]),
    },
];

/// Reference design point current density (A/m²).
pub const REFERENCE_JC: f64 = 5e11;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shm_resistance_examples() {
        let p = MaterialParams::default();
        let mut g = DeviceGeometry { l_shm: 90e-9, w_shm: 15e-9, h_shm: 3e-9, ..DeviceGeometry::default() };
        assert!((shm_resistance(&g, &p).unwrap() - 212.0).abs() < 1e-9);
        g.l_shm = g.w_shm;
        assert!((shm_resistance(&g, &p).unwrap() - p.rho_shm / g.h_shm).abs() < 1e-9);
        g.h_shm = 0.0;
        assert!(matches!(shm_resistance(&g, &p), Err(Error::InvalidGeometry(_))));
    }

    #[test]
    fn tx_energy_algebra() {
        assert_eq!(tx_energy(3, 0.0, 0.0, 0.0, 1e-16).unwrap(), 0.0);
        let a = tx_energy(3, 0.4, 0.5, 0.1, 1e-16).unwrap();
        let b = tx_energy(1, 0.4, 0.5, 0.1, 1e-16).unwrap();
        assert!((a - b - 0.5e-16 * 2.0 * 0.16).abs() < 1e-30);
        assert!(tx_energy(0, 0.1, 0.1, 0.1, 1e-16).is_err());
    }

    #[test]
    fn joule_is_quadratic_in_current() {
        let (p, g, t) = (MaterialParams::default(), DeviceGeometry::default(), TransistorParams::default());
        assert_eq!(joule_energy(0.0, &g, &p, &t, 1e-10).unwrap(), 0.0);
        let a = joule_energy(1e11, &g, &p, &t, 1e-10).unwrap();
        let b = joule_energy(2e11, &g, &p, &t, 1e-10).unwrap();
        assert!((b / a - 4.0).abs() < 1e-12);
    }

    #[test]
    fn ime_voltage_is_odd_and_tiny() {
        let c = PhysicalConstants::ROUNDED;
        let p = MaterialParams::reference(&c);
        let g = DeviceGeometry::default();
        assert_eq!(ime_output_voltage(0.0, &p, &g).unwrap(), 0.0);
        let v = ime_output_voltage(0.3e6, &p, &g).unwrap();
        assert!((v - 1.4 / 3e8 * 1.5e-9 * 0.3e6).abs() < 1e-22);
        assert_eq!(ime_output_voltage(-0.3e6, &p, &g).unwrap(), -v);
        let mut g0 = g;
        g0.h_fe_out = 0.0;
        assert!(ime_output_voltage(1.0, &p, &g0).is_err());
    }

    #[test]
    fn default_k_inv_hits_qtransfer_at_15nm() {
        let c = PhysicalConstants::default();
        let cfe = fe_capacitance(&MaterialParams::default(), &DeviceGeometry::default(), &c).unwrap();
        let t = qtransfer_delay(3480.0, DEFAULT_K_INV, cfe, (0.0, 0.0)).unwrap();
        assert!((t - 8.8e-12).abs() < 0.005e-12, "{t}");
        assert_eq!(qtransfer_delay(3480.0, DEFAULT_K_INV, 0.0, (0.0, 0.0)).unwrap(), 0.0);
    }

    #[test]
    fn report_identities() {
        let r = GateReport::from_stages(GateKind::Maj3, StageDelays::default(), EnergyBreakdown::default(), Drive::default(), 0.0);
        assert_eq!((r.t_comet, r.e_comet), (0.0, 0.0));
    }
}
