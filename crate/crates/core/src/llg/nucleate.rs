// SPDX-License-Identifier: Apache-2.0
//! Voltage-driven nucleation: FE_in polarization → ME field → LLG on the
//! input window, with a persistent sign-flip detector on a 1F strip.

use serde::{Deserialize, Serialize};

use super::grid::{GridSpec, MagnetizationGrid};
use super::solver::{integrate, relax};
use crate::error::{Error, Result};
use crate::lkh::{lkh_advance, me_field, voltage_to_field, FeState, LandauCoefficients};
use crate::units::{DeviceGeometry, MaterialParams, PhysicalConstants};
use crate::vec3::{self, Vec3};

/// Angle between a ⟨111⟩ polar axis and the [001] film normal (deg).
pub const POLAR_111_DEG: f64 = 54.735_610_317_245_35;

/// FE_in model parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FerroParams {
    /// Remnant polarization (C/m²)
    pub p_remnant: f64,
    /// Coercive field (V/m). When absent the Landau curvature is tied to
    /// the FE permittivity instead.
    pub e_coercive: Option<f64>,
    /// Angle of the polar axis from the film normal (deg), tilted towards +x
    pub polar_tilt_deg: f64,
    /// Unit-convention factor applied to the ME field
    pub me_scale: f64,
    /// LKh step (s)
    pub dt: f64,
    /// Initial polarization along the polar axis, as a fraction of P_r
    pub p_initial: f64,
}

impl Default for FerroParams {
    fn default() -> Self {
        Self {
            p_remnant: 0.022,
            e_coercive: Some(1.27e7),
            polar_tilt_deg: POLAR_111_DEG,
            me_scale: 1.0,
            dt: 0.1e-12,
            p_initial: 0.0,
        }
    }
}

impl FerroParams {
    pub fn coefficients(&self, params: &MaterialParams, consts: &PhysicalConstants) -> Result<LandauCoefficients> {
        match self.e_coercive {
            Some(ec) => LandauCoefficients::calibrate(self.p_remnant, ec),
            None => LandauCoefficients::from_permittivity(self.p_remnant, params.eps_fe, consts.eps0),
        }
    }

    /// Polar axis; a positive voltage drives P along it.
    pub fn axis(&self) -> Vec3 {
        let t = self.polar_tilt_deg.to_radians();
        [t.sin(), 0.0, -t.cos()]
    }
}

/// Where the detection strip sits relative to the nucleation point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StripRule {
    /// Centred on the nucleation point.
    Centered,
    /// The strip that ends at the nucleation point.
    #[default]
    Trailing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LlgSettings {
    pub grid: GridSpec,
    /// Default step (s); reduced automatically below the stability bound
    pub dt: f64,
    /// Zero-field relaxation before driving (s)
    pub relax_time: f64,
    /// Nucleation time horizon (s)
    pub horizon: f64,
    /// Detector sampling interval (s)
    pub sample_every: f64,
    /// Consecutive flipped samples required
    pub persist: usize,
    pub strip: StripRule,
    /// Strip width in units of F
    pub strip_width_f: f64,
    /// Stop integrating once nucleation is confirmed
    pub stop_on_nucleation: bool,
}

impl Default for LlgSettings {
    fn default() -> Self {
        Self {
            grid: GridSpec::default(),
            dt: 50e-15,
            relax_time: 200e-12,
            horizon: 200e-12,
            sample_every: 1e-12,
            persist: 3,
            strip: StripRule::Trailing,
            strip_width_f: 1.0,
            stop_on_nucleation: true,
        }
    }
}

/// The three input structures compared for the composite benefit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputCase {
    /// IMA-FM on top, field over 2F × 1F
    Composite,
    /// No IMA-FM, field over 2F × 1F
    #[serde(rename = "bare-2f", alias = "bare2f")]
    Bare2F,
    /// No IMA-FM, compact 1F × 1F input
    #[serde(rename = "bare-1f", alias = "bare1f")]
    Bare1F,
}

impl InputCase {
    pub fn window_f(self) -> f64 {
        match self {
            InputCase::Composite | InputCase::Bare2F => 2.0,
            InputCase::Bare1F => 1.0,
        }
    }

    pub fn with_ima(self) -> bool {
        self == InputCase::Composite
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LlgRunResult {
    /// Nucleation delay (s)
    pub t_nucleate: Option<f64>,
    pub nucleated: bool,
    pub final_grid: MagnetizationGrid,
    /// (time, mean m_z over the strip)
    pub trace: Vec<(f64, f64)>,
}

/// Polarization history of FE_in under a voltage step at t = 0, sampled
/// uniformly and interpolated linearly.
#[derive(Debug, Clone)]
pub struct FeDrive {
    step: f64,
    fields: Vec<Vec3>,
}

impl FeDrive {
    pub fn new(
        v_fe: f64,
        params: &MaterialParams,
        geometry: &DeviceGeometry,
        consts: &PhysicalConstants,
        ferro: &FerroParams,
        fe_area: f64,
        t_end: f64,
    ) -> Result<Self> {
        let coeffs = ferro.coefficients(params, consts)?;
        let e = voltage_to_field(v_fe, geometry.h_fe_in)?;
        let axis = ferro.axis();
        let e_vec = [0.0, 0.0, -e];
        let volume = fe_area * geometry.h_fe_in;
        let step = ferro.dt.min(0.1e-12);
        let n = (t_end / step).ceil() as usize + 2;
        let mut state = FeState { p_vec: vec3::scale(axis, ferro.p_initial * ferro.p_remnant), t_now: 0.0 };
        let mut fields = Vec::with_capacity(n);
        let field =
            |p: Vec3| me_field(p, params.kappa_me, params.h_int, geometry.h_fe_in, consts.eps0, ferro.me_scale);
        fields.push(field(state.p_vec)?);
        for k in 1..n {
            state = lkh_advance(state, e_vec, &coeffs, params.gamma_v, volume, Some(axis), step / 4.0, k as f64 * step)?;
            fields.push(field(state.p_vec)?);
        }
        Ok(Self { step, fields })
    }

    /// ME field of the undriven FE_in in its initial state (T).
    pub fn remnant_field(
        params: &MaterialParams,
        geometry: &DeviceGeometry,
        consts: &PhysicalConstants,
        ferro: &FerroParams,
    ) -> Result<Vec3> {
        let p = vec3::scale(ferro.axis(), ferro.p_initial * ferro.p_remnant);
        me_field(p, params.kappa_me, params.h_int, geometry.h_fe_in, consts.eps0, ferro.me_scale)
    }

    /// ME field at time `t` (T).
    pub fn at(&self, t: f64) -> Vec3 {
        if t <= 0.0 {
            return self.fields[0];
        }
        let x = t / self.step;
        let k = x.floor() as usize;
        if k + 1 >= self.fields.len() {
            return *self.fields.last().unwrap();
        }
        let w = x - k as f64;
        vec3::add(vec3::scale(self.fields[k], 1.0 - w), vec3::scale(self.fields[k + 1], w))
    }
}

/// Build the grid for `case` and relax it at zero field for
/// `settings.relax_time`.
pub fn prepare_grid(
    params: &MaterialParams,
    geometry: &DeviceGeometry,
    consts: &PhysicalConstants,
    settings: &LlgSettings,
    case: InputCase,
) -> Result<MagnetizationGrid> {
    let mut grid = MagnetizationGrid::build(params, geometry, consts, &settings.grid, case.with_ima())?;
    relax(&mut grid, settings.relax_time, settings.dt)?;
    Ok(grid)
}

fn window_mask(grid: &MagnetizationGrid, window: f64) -> Vec<bool> {
    (0..grid.len()).map(|i| grid.x_center(i % grid.nx) < window).collect()
}

fn strip_bounds(settings: &LlgSettings, f: f64, window_f: f64) -> (f64, f64) {
    let w = settings.strip_width_f * f;
    let edge = window_f * f;
    match settings.strip {
        StripRule::Centered => (edge - 0.5 * w, edge + 0.5 * w),
        StripRule::Trailing => (edge - w, edge),
    }
}

/// Drive the relaxed `grid` with `v_fe` over the input window of `case`
/// and watch for a persistent sign flip of the strip-averaged m_z.
#[allow(clippy::too_many_arguments)]
pub fn nucleate(
    grid: &MagnetizationGrid,
    v_fe: f64,
    params: &MaterialParams,
    geometry: &DeviceGeometry,
    consts: &PhysicalConstants,
    ferro: &FerroParams,
    settings: &LlgSettings,
    case: InputCase,
) -> Result<LlgRunResult> {
    if !(settings.horizon > 0.0 && settings.sample_every > 0.0) {
        return Err(Error::InvalidArgument("horizon and sampling interval must be positive".into()));
    }
    let f = geometry.f_feat;
    let window = case.window_f() * f;
    let fe_area = case.window_f() * f * f;
    let drive = FeDrive::new(v_fe, params, geometry, consts, ferro, fe_area, settings.horizon)?;
    let mask = window_mask(grid, window);
    let (x0, x1) = strip_bounds(settings, f, case.window_f());

    let mut g = grid.clone();
    let m0 = g.mean_mz(x0, x1);
    // reference orientation: the undriven far end of the strip
    let far = g.mean_mz(g.x_center(g.nx - 1) - f, f64::INFINITY);
    let sign0 = if far >= 0.0 { 1.0 } else { -1.0 };
    let mut trace = vec![(0.0, m0)];
    let mut next_sample = settings.sample_every;
    let mut run = 0usize;
    let mut t_cross = None;
    let mut confirmed = None;
    let tol = 1e-6 * settings.sample_every;
    let field_at = |t: f64| drive.at(t);
    integrate(&mut g, &field_at, Some(&mask), 0.0, settings.horizon, settings.dt, &mut |t, gr| {
        if t + tol < next_sample {
            return true;
        }
        next_sample += settings.sample_every;
        let mz = gr.mean_mz(x0, x1);
        let (tp, mp) = *trace.last().unwrap();
        trace.push((t, mz));
        if mz * sign0 < 0.0 {
            if run == 0 {
                // linear interpolation of the zero crossing
                t_cross = Some(if mp != mz { tp + (t - tp) * mp / (mp - mz) } else { t });
            }
            run += 1;
            if run >= settings.persist && confirmed.is_none() {
                confirmed = t_cross;
                if settings.stop_on_nucleation {
                    return false;
                }
            }
        } else {
            run = 0;
        }
        true
    })?;
    let t_nucleate = confirmed;
    Ok(LlgRunResult { t_nucleate, nucleated: t_nucleate.is_some(), final_grid: g, trace })
}

/// Relax and drive in one call.
#[allow(clippy::too_many_arguments)]
pub fn nucleate_case(
    v_fe: f64,
    params: &MaterialParams,
    geometry: &DeviceGeometry,
    consts: &PhysicalConstants,
    ferro: &FerroParams,
    settings: &LlgSettings,
    case: InputCase,
) -> Result<LlgRunResult> {
    let grid = prepare_grid(params, geometry, consts, settings, case)?;
    nucleate(&grid, v_fe, params, geometry, consts, ferro, settings, case)
}

/// t_nucleate for each IMA-FM thickness (composite input). A zero
/// thickness builds the bare strip with the same 2F window.
#[allow(clippy::too_many_arguments)]
pub fn ima_thickness_sweep(
    thicknesses: &[f64],
    params: &MaterialParams,
    geometry: &DeviceGeometry,
    consts: &PhysicalConstants,
    ferro: &FerroParams,
    settings: &LlgSettings,
    v_fe: f64,
) -> Result<Vec<(f64, Option<f64>)>> {
    thicknesses
        .iter()
        .map(|&h| {
            if h < 0.0 {
                return Err(Error::InvalidArgument(format!("IMA thickness must be non-negative, got {h}")));
            }
            let geo = DeviceGeometry { h_ima: h, ..*geometry };
            let case = if h > 0.0 { InputCase::Composite } else { InputCase::Bare2F };
            let r = nucleate_case(v_fe, params, &geo, consts, ferro, settings, case)?;
            Ok((h, r.t_nucleate))
        })
        .collect()
}

/// Smallest voltage in `[lo, hi]` that nucleates within the horizon,
/// assuming success is monotone in V. Returns `None` when `hi` fails.
#[allow(clippy::too_many_arguments)]
pub fn threshold_voltage(
    params: &MaterialParams,
    geometry: &DeviceGeometry,
    consts: &PhysicalConstants,
    ferro: &FerroParams,
    settings: &LlgSettings,
    case: InputCase,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<Option<f64>> {
    let grid = prepare_grid(params, geometry, consts, settings, case)?;
    let ok = |v: f64| -> Result<bool> { Ok(nucleate(&grid, v, params, geometry, consts, ferro, settings, case)?.nucleated) };
    if !ok(hi)? {
        return Ok(None);
    }
    if ok(lo)? {
        return Ok(Some(lo));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if ok(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}
