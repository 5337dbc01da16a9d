// SPDX-License-Identifier: Apache-2.0
//! Physical constants, material/transistor/geometry records and the
//! technology presets.
//!
//! Everything is SI. Config files may carry unit suffixes; those are
//! resolved in [`crate::config`] before values reach these types.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which set of constant values to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstantsMode {
    /// CODATA 2018 values.
    #[default]
    Codata,
    /// Rounded values (c = 3e8, ε0 = 8.85e-12) for reproducing hand arithmetic.
    Rounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Vacuum permittivity (F/m)
    pub eps0: f64,
    /// Vacuum permeability (T·m/A)
    pub mu0: f64,
    /// Elementary charge (C)
    pub e_charge: f64,
    /// Gyromagnetic ratio (rad/(s·T))
    pub gamma_g: f64,
    /// Reduced Planck constant (J·s)
    pub hbar: f64,
    /// Bohr magneton (J/T)
    pub mu_b: f64,
    /// Speed of light (m/s)
    pub c_light: f64,
}

impl PhysicalConstants {
    pub const CODATA: Self = Self {
        eps0: 8.854_187_812_8e-12,
        mu0: 1.256_637_062_12e-6,
        e_charge: 1.602_176_634e-19,
        gamma_g: 1.760_859_630_23e11,
        hbar: 1.054_571_817e-34,
        mu_b: 9.274_010_078_3e-24,
        c_light: 299_792_458.0,
    };

    /// Values at the precision printed in the parameter table. ħ is not
    /// listed there and keeps its CODATA value.
    pub const ROUNDED: Self = Self {
        eps0: 8.85e-12,
        mu0: 1.25e-6,
        e_charge: 1.60e-19,
        gamma_g: 1.76e11,
        hbar: 1.054_571_817e-34,
        mu_b: 9.274e-24,
        c_light: 3e8,
    };

    pub fn for_mode(mode: ConstantsMode) -> Self {
        match mode {
            ConstantsMode::Codata => Self::CODATA,
            ConstantsMode::Rounded => Self::ROUNDED,
        }
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA
    }
}

/// Magnetic, ferroelectric and spin-Hall material parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MaterialParams {
    /// PMA-FM saturation magnetization (A/m)
    pub ms_pma: f64,
    /// PMA-FM uniaxial anisotropy (J/m³)
    pub ku_pma: f64,
    /// Exchange stiffness, shared by both magnetic layers (J/m)
    pub a_ex: f64,
    /// Gilbert damping
    pub alpha: f64,
    /// IMA-FM saturation magnetization (A/m)
    pub ms_ima: f64,
    /// DMI constant magnitude (J/m²)
    pub d_dmi: f64,
    /// Spin-Hall angle
    pub theta_she: f64,
    /// Adiabatic STT parameter β
    pub beta_stt: f64,
    /// Spin polarization of the PMA-FM
    pub p_pma: f64,
    /// SHM resistivity (Ω·m)
    pub rho_shm: f64,
    /// FE relative permittivity
    pub eps_fe: f64,
    /// ME coefficient of FE_in (s/m)
    pub kappa_me: f64,
    /// Inverse-ME coefficient of FE_out (s/m)
    pub kappa_ime: f64,
    /// FE viscosity coefficient, used as an opaque scalar
    pub gamma_v: f64,
    /// ME interface thickness (m)
    pub h_int: f64,
}

impl MaterialParams {
    /// Reference material with the PMA-FM corner used for the gate reports
    /// (Ms = 0.3 MA/m, Ku = 0.5 MJ/m³, A = 10 pJ/m, α = 0.01).
    pub fn reference(c: &PhysicalConstants) -> Self {
        Self {
            ms_pma: 0.3e6,
            ku_pma: 0.5e6,
            a_ex: 10e-12,
            alpha: 0.01,
            ms_ima: 1e6,
            d_dmi: 0.8e-3,
            theta_she: 0.5,
            beta_stt: 0.4,
            p_pma: 0.5,
            rho_shm: 1.06e-7,
            eps_fe: 164.0,
            kappa_me: 0.2 / c.c_light,
            kappa_ime: 1.4 / c.c_light,
            gamma_v: 5.47e-5,
            h_int: 1.5e-9,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = [
            ("ms_pma", self.ms_pma),
            ("ku_pma", self.ku_pma),
            ("a_ex", self.a_ex),
            ("ms_ima", self.ms_ima),
            ("rho_shm", self.rho_shm),
            ("eps_fe", self.eps_fe),
            ("gamma_v", self.gamma_v),
            ("h_int", self.h_int),
        ];
        for (name, v) in pos {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidMaterial(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidMaterial(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        for (name, v) in [("theta_she", self.theta_she), ("p_pma", self.p_pma)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidMaterial(format!("{name} must lie in [0, 1], got {v}")));
            }
        }
        if self.d_dmi < 0.0 || self.beta_stt < 0.0 || self.kappa_me < 0.0 || self.kappa_ime < 0.0 {
            return Err(Error::InvalidMaterial("d_dmi, beta_stt and the ME coefficients are magnitudes".into()));
        }
        Ok(())
    }
}

impl Default for MaterialParams {
    fn default() -> Self {
        Self::reference(&PhysicalConstants::default())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TransistorParams {
    /// On-resistance (Ω)
    pub r_on: f64,
    /// Gate capacitance (F)
    pub c_g: f64,
    /// Threshold voltage (V)
    pub v_th: f64,
    /// Leakage energy per gate evaluation (J). Calibration input.
    pub leak_energy_per_gate: f64,
    /// Nominal supply (V)
    pub v_dd: f64,
}

impl Default for TransistorParams {
    fn default() -> Self {
        TechNode::N15.transistor()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DeviceGeometry {
    /// Feature size F (m)
    pub f_feat: f64,
    /// PMA-FM thickness (m)
    pub h_pma: f64,
    /// IMA-FM thickness (m)
    pub h_ima: f64,
    /// Input FE thickness (m)
    pub h_fe_in: f64,
    /// Output FE thickness (m)
    pub h_fe_out: f64,
    /// Input FE footprint (m²)
    pub fe_in_area: f64,
    /// Distance of the nucleated wall from the input end (m)
    pub nucleation_offset: f64,
    /// Wall travel distance to the output (m)
    pub propagation_distance: f64,
    /// SHM current-path length (m)
    pub l_shm: f64,
    /// SHM width (m)
    pub w_shm: f64,
    /// SHM thickness (m)
    pub h_shm: f64,
}

/// Gate flavours. MAJ-K carries its input count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GateKind {
    Inv,
    Maj3,
    #[serde(rename = "MAJ")]
    MajK(u32),
}

impl GateKind {
    pub fn k_inputs(self) -> u32 {
        match self {
            GateKind::Inv => 1,
            GateKind::Maj3 => 3,
            GateKind::MajK(k) => k,
        }
    }

    /// Wall travel distance in units of F.
    pub fn distance_in_f(self) -> f64 {
        match self {
            GateKind::Inv => 2.0,
            _ => 4.0,
        }
    }

    pub fn label(self) -> String {
        match self {
            GateKind::Inv => "INV".into(),
            GateKind::Maj3 => "MAJ3".into(),
            GateKind::MajK(k) => format!("MAJ{k}"),
        }
    }
}

impl std::str::FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let up = s.trim().to_ascii_uppercase();
        match up.as_str() {
            "INV" => Ok(GateKind::Inv),
            "MAJ3" => Ok(GateKind::Maj3),
            _ => match up.strip_prefix("MAJ").and_then(|k| k.parse::<u32>().ok()) {
                Some(k) if k >= 1 && k % 2 == 1 => Ok(GateKind::MajK(k)),
                _ => Err(Error::InvalidArgument(format!("unknown gate kind `{s}`"))),
            },
        }
    }
}

impl DeviceGeometry {
    /// Geometry for feature size `f` with the default thicknesses
    /// (5 nm FE, 1 nm PMA-FM, 1 nm IMA-FM, 3 nm SHM).
    pub fn for_feature(f: f64, gate: GateKind) -> Self {
        Self {
            f_feat: f,
            h_pma: 1e-9,
            h_ima: 1e-9,
            h_fe_in: 5e-9,
            h_fe_out: 5e-9,
            fe_in_area: 2.0 * f * f,
            nucleation_offset: 2.0 * f,
            propagation_distance: gate.distance_in_f() * f,
            l_shm: 6.0 * f,
            w_shm: f,
            h_shm: 3e-9,
        }
    }

    /// Width of the PMA-FM strip, 1F.
    pub fn w_pma(&self) -> f64 {
        self.f_feat
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            ("f_feat", self.f_feat),
            ("h_pma", self.h_pma),
            ("h_fe_in", self.h_fe_in),
            ("h_fe_out", self.h_fe_out),
            ("fe_in_area", self.fe_in_area),
            ("propagation_distance", self.propagation_distance),
            ("l_shm", self.l_shm),
            ("w_shm", self.w_shm),
            ("h_shm", self.h_shm),
        ];
        for (name, v) in all {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidGeometry(format!("{name} must be positive, got {v}")));
            }
        }
        if self.h_ima < 0.0 || self.nucleation_offset < 0.0 {
            return Err(Error::InvalidGeometry("h_ima and nucleation_offset must be non-negative".into()));
        }
        Ok(())
    }
}

impl Default for DeviceGeometry {
    fn default() -> Self {
        Self::for_feature(15e-9, GateKind::Maj3)
    }
}

/// Supported technology presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TechNode {
    #[serde(rename = "15nm")]
    N15,
    #[serde(rename = "7nm")]
    N7,
}

impl TechNode {
    pub fn feature(self) -> f64 {
        match self {
            TechNode::N15 => 15e-9,
            TechNode::N7 => 7e-9,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            TechNode::N15 => "15nm",
            TechNode::N7 => "7nm",
        }
    }

    pub fn transistor(self) -> TransistorParams {
        // leakage: the 110 mV benchmark-row value for the node
        let (r_on, v_dd, leak) = match self {
            TechNode::N15 => (3480.0, 0.85, 16.3e-18),
            TechNode::N7 => (4109.0, 0.7, 13.7e-18),
        };
        TransistorParams { r_on, c_g: 0.1e-15, v_th: 0.2, leak_energy_per_gate: leak, v_dd }
    }
}

impl std::str::FromStr for TechNode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "15nm" | "15" => Ok(TechNode::N15),
            "7nm" | "7" => Ok(TechNode::N7),
            other => Err(Error::UnsupportedPreset(other.to_string())),
        }
    }
}

/// Reference material, transistor and geometry records for a node, MAJ3 geometry.
pub fn preset_technology(node: &str) -> Result<(MaterialParams, TransistorParams, DeviceGeometry)> {
    let node: TechNode = node.parse()?;
    Ok((
        MaterialParams::default(),
        node.transistor(),
        DeviceGeometry::for_feature(node.feature(), GateKind::Maj3),
    ))
}

/// MAJ3 layout area, 29F × 16F.
pub fn maj3_area(f_feat: f64) -> Result<f64> {
    if !(f_feat > 0.0 && f_feat.is_finite()) {
        return Err(Error::InvalidArgument(format!("feature size must be positive, got {f_feat}")));
    }
    Ok(29.0 * f_feat * 16.0 * f_feat)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn area_examples() {
        assert!((maj3_area(15e-9).unwrap() - 1.044e-13).abs() < 1e-25);
        assert_eq!(maj3_area(1.0).unwrap(), 464.0);
        assert!(maj3_area(0.0).is_err());
        assert!(maj3_area(-1.0).is_err());
    }

    #[test]
    fn presets() {
        let (m, t, g) = preset_technology("15nm").unwrap();
        assert_eq!(t.r_on, 3480.0);
        assert_eq!(m.kappa_me, 0.2 / PhysicalConstants::CODATA.c_light);
        assert_eq!(g.nucleation_offset, 30e-9);
        let (_, t7, g7) = preset_technology("7nm").unwrap();
        assert_eq!(t7.r_on, 4109.0);
        assert_eq!(g7.f_feat, 7e-9);
        assert!(matches!(preset_technology("22nm"), Err(Error::UnsupportedPreset(_))));
    }

    #[test]
    fn rounded_constants_match_defaults() {
        let c = PhysicalConstants::ROUNDED;
        assert_eq!((c.eps0, c.mu0, c.gamma_g, c.c_light), (8.85e-12, 1.25e-6, 1.76e11, 3e8));
        assert_eq!((c.e_charge, c.mu_b), (1.60e-19, 9.274e-24));
        let m = MaterialParams::reference(&c);
        assert_eq!(m.kappa_me, 0.2 / 3e8);
        assert_eq!(m.kappa_ime, 1.4 / 3e8);
    }

    #[test]
    fn constants_positive() {
        for c in [PhysicalConstants::CODATA, PhysicalConstants::ROUNDED] {
            for v in [c.eps0, c.mu0, c.e_charge, c.gamma_g, c.hbar, c.mu_b, c.c_light] {
                assert!(v > 0.0);
            }
        }
    }

    #[test]
    fn gate_kind_parse() {
        assert_eq!("inv".parse::<GateKind>().unwrap(), GateKind::Inv);
        assert_eq!("MAJ5".parse::<GateKind>().unwrap(), GateKind::MajK(5));
        assert!("MAJ4".parse::<GateKind>().is_err());
    }

    #[test]
    fn material_validation() {
        let mut m = MaterialParams::default();
        assert!(m.validate().is_ok());
        m.alpha = 1.0;
        assert!(m.validate().is_err());
    }
}
