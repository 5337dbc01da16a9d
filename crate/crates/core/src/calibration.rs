// SPDX-License-Identifier: Apache-2.0
//! Circuit calibration against the benchmark rows.
//!
//! Four quantities have no device-level derivation: the inverter delay
//! factor k_inv, the reset/propagation gate voltages, the SHM thickness
//! behind E_Joule, and the leakage energy. Each is fitted per (node, V_FE)
//! to the MAJ3 column; the INV column is then predicted and its relative
//! residual recorded.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perf::{fe_capacitance, PerfSettings, ReferenceRow, REFERENCE_JC, REFERENCE_ROWS};
use crate::units::{DeviceGeometry, GateKind, MaterialParams, PhysicalConstants, TechNode};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationEntry {
    pub node: TechNode,
    /// FE voltage of the row (V)
    pub v_fe: f64,
    pub k_inv: f64,
    /// V_RST = V_PROP (V)
    pub v_gate: f64,
    /// SHM thickness (m)
    pub h_shm: f64,
    /// Leakage energy (J)
    pub leakage: f64,
    /// (predicted − printed)/printed for the INV E_TX
    pub inv_tx_residual: f64,
    /// (predicted − printed)/printed for the INV E_Joule
    pub inv_joule_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Calibration {
    pub entry: Vec<CalibrationEntry>,
}

/// Shipped calibration file.
pub const BUILTIN_TOML: &str = include_str!("../../../calibration/table2.toml");

/// SHM thickness t solving (Jc·w·t)²·(R_on + ρ·l/(w·t))·t_p = E, with
/// l = 6w. The equation is a quadratic in t.
fn fit_h_shm(e: f64, j_c: f64, w: f64, l: f64, rho: f64, r_on: f64, t_p: f64) -> f64 {
    let jw2 = (j_c * w) * (j_c * w);
    let a = jw2 * r_on * t_p;
    let b = jw2 * rho * l / w * t_p;
    (-b + (b * b + 4.0 * a * e).sqrt()) / (2.0 * a)
}

fn fit_row(row: &ReferenceRow, params: &MaterialParams, consts: &PhysicalConstants) -> Result<CalibrationEntry> {
    let f = row.node.feature();
    let tr = row.node.transistor();
    let g = DeviceGeometry::for_feature(f, GateKind::Maj3);
    let c_fe = fe_capacitance(params, &g, consts)?;
    let m = row.maj3.delays();
    let me = row.maj3.energies();
    let k_inv = m.t_qtransfer / (tr.r_on * c_fe);
    // E_TX = (C_g/2)·(K+2)·V² with V_RST = V_PROP = V and V_OUT ≈ 0
    let v_gate = (2.0 * me.e_tx / (tr.c_g * 5.0)).sqrt();
    let h_shm = fit_h_shm(me.e_joule, REFERENCE_JC, g.w_shm, g.l_shm, params.rho_shm, tr.r_on, m.t_propagate);

    let inv = row.inv.energies();
    let inv_tx = 0.5 * tr.c_g * 3.0 * v_gate * v_gate;
    let i = REFERENCE_JC * g.w_shm * h_shm;
    let inv_joule = i * i * (tr.r_on + params.rho_shm * g.l_shm / (g.w_shm * h_shm)) * row.inv.delays().t_propagate;
    Ok(CalibrationEntry {
        node: row.node,
        v_fe: row.v_fe,
        k_inv,
        v_gate,
        h_shm,
        leakage: me.e_leakage,
        inv_tx_residual: (inv_tx - inv.e_tx) / inv.e_tx,
        inv_joule_residual: (inv_joule - inv.e_joule) / inv.e_joule,
    })
}

impl Calibration {
    /// Fit every benchmark row.
    pub fn fit(params: &MaterialParams, consts: &PhysicalConstants) -> Result<Self> {
        let entry = REFERENCE_ROWS.iter().map(|r| fit_row(r, params, consts)).collect::<Result<_>>()?;
        Ok(Self { entry })
    }

    pub fn builtin() -> Self {
        Self::from_toml(BUILTIN_TOML).expect("shipped calibration parses")
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let c: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if c.entry.is_empty() {
            return Err(Error::Config("calibration has no entries".into()));
        }
        Ok(c)
    }

    pub fn to_toml(&self) -> String {
        let body = toml::to_string(self).expect("calibration serializes");
        format!("# Written by `comet calibrate`. SI units. Residuals are (predicted - printed)/printed for INV.\n\n{body}")
    }

    /// Entry for `node`, linearly interpolated in V_FE between the node's
    /// rows and clamped outside them.
    pub fn lookup(&self, node: TechNode, v_fe: f64) -> Result<CalibrationEntry> {
        let mut rows: Vec<&CalibrationEntry> = self.entry.iter().filter(|e| e.node == node).collect();
        rows.sort_by(|a, b| a.v_fe.total_cmp(&b.v_fe));
        let (first, last) = match (rows.first(), rows.last()) {
            (Some(f), Some(l)) => (**f, **l),
            _ => return Err(Error::UnsupportedPreset(format!("no calibration for {}", node.label()))),
        };
        if v_fe <= first.v_fe {
            return Ok(CalibrationEntry { v_fe, ..first });
        }
        if v_fe >= last.v_fe {
            return Ok(CalibrationEntry { v_fe, ..last });
        }
        let k = rows.windows(2).position(|w| v_fe <= w[1].v_fe).unwrap_or(0);
        let (a, b) = (rows[k], rows[k + 1]);
        let s = (v_fe - a.v_fe) / (b.v_fe - a.v_fe);
        let lerp = |x: f64, y: f64| x + s * (y - x);
        Ok(CalibrationEntry {
            node,
            v_fe,
            k_inv: lerp(a.k_inv, b.k_inv),
            v_gate: lerp(a.v_gate, b.v_gate),
            h_shm: lerp(a.h_shm, b.h_shm),
            leakage: lerp(a.leakage, b.leakage),
            inv_tx_residual: lerp(a.inv_tx_residual, b.inv_tx_residual),
            inv_joule_residual: lerp(a.inv_joule_residual, b.inv_joule_residual),
        })
    }
}

impl CalibrationEntry {
    /// Circuit settings for this entry; the SHM thickness goes into the
    /// geometry separately.
    pub fn settings(&self) -> PerfSettings {
        PerfSettings {
            k_inv: self.k_inv,
            v_prop: Some(self.v_gate),
            v_rst: Some(self.v_gate),
            leakage: Some(self.leakage),
            ..PerfSettings::default()
        }
    }

    pub fn apply_geometry(&self, geometry: &mut DeviceGeometry) {
        geometry.h_shm = self.h_shm;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_shm_solves_the_joule_equation() {
        let t = fit_h_shm(19.8e-18, 5e11, 15e-9, 90e-9, 1.06e-7, 3480.0, 77.4e-12);
        let i = 5e11 * 15e-9 * t;
        let e = i * i * (3480.0 + 1.06e-7 * 90e-9 / (15e-9 * t)) * 77.4e-12;
        assert!((e - 19.8e-18).abs() < 1e-27);
        assert!(t > 0.9e-9 && t < 1.2e-9, "{t}");
    }

    #[test]
    fn lookup_interpolates_and_clamps() {
        let c = Calibration::fit(&MaterialParams::default(), &PhysicalConstants::default()).unwrap();
        let lo = c.lookup(TechNode::N15, 0.110).unwrap();
        let hi = c.lookup(TechNode::N15, 0.150).unwrap();
        let mid = c.lookup(TechNode::N15, 0.130).unwrap();
        assert!((mid.k_inv - 0.5 * (lo.k_inv + hi.k_inv)).abs() < 1e-12);
        assert_eq!(c.lookup(TechNode::N15, 0.05).unwrap().k_inv, lo.k_inv);
        assert_eq!(c.lookup(TechNode::N15, 0.5).unwrap().k_inv, hi.k_inv);
    }

    #[test]
    fn builtin_file_matches_a_fresh_fit() {
        let fresh = Calibration::fit(&MaterialParams::default(), &PhysicalConstants::default()).unwrap();
        let shipped = Calibration::builtin();
        assert_eq!(fresh.entry.len(), shipped.entry.len());
        for (a, b) in fresh.entry.iter().zip(&shipped.entry) {
            assert_eq!(a.node, b.node);
            for (x, y) in [(a.k_inv, b.k_inv), (a.v_gate, b.v_gate), (a.h_shm, b.h_shm), (a.leakage, b.leakage)] {
                assert!(((x - y) / y).abs() < 1e-12, "{x} vs {y}");
            }
        }
    }
}
