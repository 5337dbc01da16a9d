// SPDX-License-Identifier: Apache-2.0
//! One-dimensional (Q, φ) domain-wall model driven by spin-Hall torque,
//! DMI and spin-transfer torque.
//!
//! The fields enter the equations of motion in A/m with γ0 = γ·μ0:
//!
//! ```text
//! (1+α²) dQ/dt = −γ0 Δ (H_K/2) sin 2φ + (1+α²β) u + γ0 Δ (π/2)[α H_SHE cos φ + H_DMI sin φ]
//! (1+α²) dφ/dt = −γ0 α (H_K/2) sin 2φ + (β−α) u/Δ + γ0 (π/2)[H_SHE cos φ + α H_DMI sin φ]
//! ```
//!
//! `u = μ_B·P·Jc/(e·Ms)` is the spin-drift velocity. Δ solves the implicit
//! width relation at the current φ and is re-solved on every evaluation.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{DeviceGeometry, MaterialParams, PhysicalConstants};

/// Upper end of the width bracket (m).
const WIDTH_BRACKET: f64 = 1e-6;

/// Which anisotropy field drives the sin 2φ terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HkModel {
    /// Wall (Bloch–Néel) shape anisotropy Ms·(h/(h+Δ) − h/(h+w)), the same
    /// bracket that appears in the width relation.
    #[default]
    Wall,
    /// Uniaxial 2Ku/(μ0·Ms).
    Uniaxial,
}

/// Knobs of the wall model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DwConfig {
    pub hk_model: HkModel,
    /// Sign applied to D
    pub dmi_sign: f64,
    /// Sign applied to θ_SHE
    pub she_sign: f64,
    /// Multiplier on the spin-drift velocity u; 0 switches STT off
    pub stt_scale: f64,
    /// Step (s)
    pub dt: f64,
    /// Zero-current phase relaxation before the drive (s)
    pub phase_relax: f64,
    /// Starting phase of the relaxation (rad)
    pub phase_start: f64,
    /// Give up after this long (s)
    pub horizon: f64,
    /// Keep every n-th step in the trace; 0 keeps none
    pub trace_every: usize,
}

impl Default for DwConfig {
    fn default() -> Self {
        Self {
            hk_model: HkModel::Wall,
            dmi_sign: 1.0,
            she_sign: 1.0,
            stt_scale: 1.0,
            dt: 0.1e-12,
            phase_relax: 1e-9,
            phase_start: FRAC_PI_2 + 0.3,
            horizon: 20e-9,
            trace_every: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DwState {
    /// Wall position (m)
    pub q_pos: f64,
    /// Wall phase (rad)
    pub phi: f64,
    /// Wall width (m)
    pub delta: f64,
    pub t_now: f64,
}

/// Drive terms for one (Jc, Δ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveFields {
    /// 2Ku/Ms, the printed label value (T-equivalent)
    pub h_k: f64,
    /// Spin-Hall effective field (A/m)
    pub h_she: f64,
    /// DMI effective field (A/m)
    pub h_dmi: f64,
    /// Spin-drift velocity (m/s)
    pub b_stt: f64,
}

fn width_map(phi: f64, params: &MaterialParams, h: f64, w: f64, mu0: f64, d: f64) -> f64 {
    let d0 = (params.a_ex / params.ku_pma).sqrt();
    let s = phi.sin();
    let denom = 1.0 + mu0 * params.ms_pma * params.ms_pma / params.ku_pma * (h / (h + d) - h / (h + w)) * s * s;
    if denom > 0.0 {
        d0 / denom.sqrt()
    } else {
        f64::INFINITY
    }
}

fn check_width_inputs(params: &MaterialParams, geometry: &DeviceGeometry) -> Result<()> {
    if !(params.a_ex > 0.0 && params.ku_pma > 0.0 && params.ms_pma > 0.0) {
        return Err(Error::InvalidMaterial("A, Ku and Ms must be positive".into()));
    }
    if !(geometry.h_pma > 0.0 && geometry.w_pma() > 0.0) {
        return Err(Error::InvalidGeometry("PMA-FM thickness and width must be positive".into()));
    }
    Ok(())
}

/// Wall width Δ at phase `phi` (m): damped fixed-point iteration, falling
/// back to bisection when the iteration stalls.
pub fn dw_width(phi: f64, params: &MaterialParams, geometry: &DeviceGeometry, consts: &PhysicalConstants) -> Result<f64> {
    dw_width_seeded(phi, params, geometry, consts, None)
}

/// [`dw_width`] starting the iteration from `seed`.
pub fn dw_width_seeded(
    phi: f64,
    params: &MaterialParams,
    geometry: &DeviceGeometry,
    consts: &PhysicalConstants,
    seed: Option<f64>,
) -> Result<f64> {
    match dw_width_fixed_point(phi, params, geometry, consts, seed) {
        Ok(d) => Ok(d),
        Err(Error::WidthSolveFailure(_)) => dw_width_bisection(phi, params, geometry, consts),
        Err(e) => Err(e),
    }
}

/// Damped fixed-point iteration Δ ← (Δ + g(Δ))/2 alone, without the
/// bisection fallback.
pub fn dw_width_fixed_point(
    phi: f64,
    params: &MaterialParams,
    geometry: &DeviceGeometry,
    consts: &PhysicalConstants,
    seed: Option<f64>,
) -> Result<f64> {
    check_width_inputs(params, geometry)?;
    let (h, w, mu0) = (geometry.h_pma, geometry.w_pma(), consts.mu0);
    let s = phi.sin();
    if s == 0.0 {
        return Ok((params.a_ex / params.ku_pma).sqrt());
    }
    let mut d = seed.filter(|x| *x > 0.0 && x.is_finite()).unwrap_or_else(|| (params.a_ex / params.ku_pma).sqrt());
    for _ in 0..200 {
        let g = width_map(phi, params, h, w, mu0, d);
        if !g.is_finite() || g > WIDTH_BRACKET {
            break;
        }
        let next = 0.5 * (d + g);
        if (next - d).abs() <= 1e-14 * next && (g - next).abs() <= 1e-12 * next {
            return Ok(g);
        }
        d = next;
    }
    Err(Error::WidthSolveFailure(format!("fixed-point iteration did not settle at phi = {phi}")))
}

/// Δ by bisection on the residual Δ − g(Δ) over (0, 1 µm).
pub fn dw_width_bisection(phi: f64, params: &MaterialParams, geometry: &DeviceGeometry, consts: &PhysicalConstants) -> Result<f64> {
    check_width_inputs(params, geometry)?;
    let (h, w, mu0) = (geometry.h_pma, geometry.w_pma(), consts.mu0);
    let r = |d: f64| d - width_map(phi, params, h, w, mu0, d);
    let (mut lo, mut hi) = (0.0f64, WIDTH_BRACKET);
    if !(r(hi) > 0.0) {
        return Err(Error::WidthSolveFailure(format!("no width root below {WIDTH_BRACKET} m at phi = {phi}")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if r(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Drive terms for current density `j_c` (A/m²) and width `delta`.
pub fn drive_fields(
    params: &MaterialParams,
    geometry: &DeviceGeometry,
    consts: &PhysicalConstants,
    j_c: f64,
    delta: f64,
) -> Result<DriveFields> {
    let ms = params.ms_pma;
    if !(ms > 0.0) {
        return Err(Error::InvalidMaterial(format!("Ms must be positive, got {ms}")));
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument(format!("wall width must be positive, got {delta}")));
    }
    let (mu0, e) = (consts.mu0, consts.e_charge);
    Ok(DriveFields {
        h_k: 2.0 * params.ku_pma / ms,
        // per unit thickness of the magnet so the result is a field
        h_she: consts.hbar * params.theta_she * j_c / (2.0 * mu0 * e * ms * geometry.h_pma),
        h_dmi: params.d_dmi / (mu0 * ms * delta),
        b_stt: consts.mu_b * params.p_pma * j_c / (e * ms),
    })
}

/// Everything the right-hand side needs, evaluated once per run.
struct Model {
    params: MaterialParams,
    geometry: DeviceGeometry,
    consts: PhysicalConstants,
    cfg: DwConfig,
    h_she: f64,
    u: f64,
}

impl Model {
    fn new(params: &MaterialParams, geometry: &DeviceGeometry, consts: &PhysicalConstants, cfg: &DwConfig, j_c: f64) -> Result<Self> {
        let seed = (params.a_ex / params.ku_pma).sqrt();
        let f = drive_fields(params, geometry, consts, j_c, seed)?;
        Ok(Self {
            params: *params,
            geometry: *geometry,
            consts: *consts,
            cfg: *cfg,
            h_she: cfg.she_sign * f.h_she,
            u: cfg.stt_scale * f.b_stt,
        })
    }

    /// (dQ/dt, dφ/dt, Δ) at phase `phi`.
    fn rhs(&self, phi: f64, seed: f64) -> Result<(f64, f64, f64)> {
        let p = &self.params;
        let d = dw_width_seeded(phi, p, &self.geometry, &self.consts, Some(seed))?;
        let mu0 = self.consts.mu0;
        let g0 = self.consts.gamma_g * mu0;
        let a = p.alpha;
        let ms = p.ms_pma;
        let hk = match self.cfg.hk_model {
            HkModel::Wall => {
                let (h, w) = (self.geometry.h_pma, self.geometry.w_pma());
                ms * (h / (h + d) - h / (h + w))
            }
            HkModel::Uniaxial => 2.0 * p.ku_pma / (mu0 * ms),
        };
        let hd = self.cfg.dmi_sign * p.d_dmi / (mu0 * ms * d);
        let hs = self.h_she;
        let u = self.u;
        let (s2, c, s) = ((2.0 * phi).sin(), phi.cos(), phi.sin());
        let k = 1.0 / (1.0 + a * a);
        let dq = k * (-g0 * d * 0.5 * hk * s2 + (1.0 + a * a * p.beta_stt) * u + g0 * d * FRAC_PI_2 * (a * hs * c + hd * s));
        let dphi = k * (-g0 * a * 0.5 * hk * s2 + (p.beta_stt - a) * u / d + g0 * FRAC_PI_2 * (hs * c + a * hd * s));
        Ok((dq, dphi, d))
    }

    fn step(&self, st: &DwState, dt: f64) -> Result<DwState> {
        let seed = st.delta;
        let (q1, p1, _) = self.rhs(st.phi, seed)?;
        let (q2, p2, _) = self.rhs(st.phi + 0.5 * dt * p1, seed)?;
        let (q3, p3, _) = self.rhs(st.phi + 0.5 * dt * p2, seed)?;
        let (q4, p4, _) = self.rhs(st.phi + dt * p3, seed)?;
        let q_pos = st.q_pos + dt / 6.0 * (q1 + 2.0 * q2 + 2.0 * q3 + q4);
        let phi = st.phi + dt / 6.0 * (p1 + 2.0 * p2 + 2.0 * p3 + p4);
        if !(q_pos.is_finite() && phi.is_finite()) {
            return Err(Error::NumericFailure("non-finite wall state".into()));
        }
        let delta = dw_width_seeded(phi, &self.params, &self.geometry, &self.consts, Some(seed))?;
        Ok(DwState { q_pos, phi, delta, t_now: st.t_now + dt })
    }
}

/// Instantaneous (dQ/dt, dφ/dt) for `state` under `j_c`.
pub fn dw_rates(
    state: &DwState,
    params: &MaterialParams,
    geometry: &DeviceGeometry,
    consts: &PhysicalConstants,
    cfg: &DwConfig,
    j_c: f64,
) -> Result<(f64, f64)> {
    let m = Model::new(params, geometry, consts, cfg, j_c)?;
    let (dq, dphi, _) = m.rhs(state.phi, state.delta)?;
    Ok((dq, dphi))
}

/// One RK4 step of the wall equations.
pub fn dw_step(
    state: &DwState,
    params: &MaterialParams,
    geometry: &DeviceGeometry,
    consts: &PhysicalConstants,
    cfg: &DwConfig,
    j_c: f64,
    dt: f64,
) -> Result<DwState> {
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
    }
    Model::new(params, geometry, consts, cfg, j_c)?.step(state, dt)
}

/// Zero-current equilibrium phase: relax from `cfg.phase_start` for
/// `cfg.phase_relax`.
pub fn equilibrium_phase(params: &MaterialParams, geometry: &DeviceGeometry, consts: &PhysicalConstants, cfg: &DwConfig) -> Result<f64> {
    let m = Model::new(params, geometry, consts, cfg, 0.0)?;
    let phi = cfg.phase_start;
    let mut st = DwState { q_pos: 0.0, phi, delta: dw_width(phi, params, geometry, consts)?, t_now: 0.0 };
    let n = (cfg.phase_relax / cfg.dt).round() as usize;
    for _ in 0..n {
        st = m.step(&st, cfg.dt)?;
    }
    Ok(st.phi)
}

/// Trace row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DwSample {
    pub t: f64,
    pub q: f64,
    pub phi: f64,
    pub delta: f64,
    pub v_inst: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Propagation {
    pub t_propagate: f64,
    pub v_avg: f64,
    pub final_state: DwState,
    pub trace: Vec<DwSample>,
}

/// Drive the wall from Q = 0 at its equilibrium phase until it has moved
/// `distance`; the crossing time is interpolated within the last step.
pub fn propagate(
    distance: f64,
    params: &MaterialParams,
    geometry: &DeviceGeometry,
    consts: &PhysicalConstants,
    cfg: &DwConfig,
    j_c: f64,
) -> Result<Propagation> {
    if !(distance > 0.0) {
        return Err(Error::InvalidArgument(format!("distance must be positive, got {distance}")));
    }
    if !(cfg.dt > 0.0 && cfg.horizon > 0.0) {
        return Err(Error::InvalidArgument("dt and horizon must be positive".into()));
    }
    let phi0 = equilibrium_phase(params, geometry, consts, cfg)?;
    let m = Model::new(params, geometry, consts, cfg, j_c)?;
    let mut st = DwState { q_pos: 0.0, phi: phi0, delta: dw_width(phi0, params, geometry, consts)?, t_now: 0.0 };
    let mut trace = Vec::new();
    let mut n = 0usize;
    while st.t_now < cfg.horizon {
        let next = m.step(&st, cfg.dt)?;
        n += 1;
        if cfg.trace_every > 0 && n.is_multiple_of(cfg.trace_every) {
            trace.push(DwSample {
                t: next.t_now,
                q: next.q_pos,
                phi: next.phi,
                delta: next.delta,
                v_inst: (next.q_pos - st.q_pos) / cfg.dt,
            });
        }
        if next.q_pos >= distance {
            let frac = (distance - st.q_pos) / (next.q_pos - st.q_pos);
            let t = st.t_now + frac * cfg.dt;
            return Ok(Propagation { t_propagate: t, v_avg: distance / t, final_state: next, trace });
        }
        st = next;
    }
    Err(Error::PropagationStall { reached: st.q_pos, target: distance, horizon: cfg.horizon })
}

/// Mean velocity over `[settle, settle + window]` after switching on `j_c`
/// from the equilibrium phase. Works for either current sign.
pub fn mean_velocity(
    params: &MaterialParams,
    geometry: &DeviceGeometry,
    consts: &PhysicalConstants,
    cfg: &DwConfig,
    j_c: f64,
    settle: f64,
    window: f64,
) -> Result<f64> {
    let phi0 = equilibrium_phase(params, geometry, consts, cfg)?;
    let m = Model::new(params, geometry, consts, cfg, j_c)?;
    let mut st = DwState { q_pos: 0.0, phi: phi0, delta: dw_width(phi0, params, geometry, consts)?, t_now: 0.0 };
    let n_settle = (settle / cfg.dt).round() as usize;
    let n_win = ((window / cfg.dt).round() as usize).max(1);
    for _ in 0..n_settle {
        st = m.step(&st, cfg.dt)?;
    }
    let q0 = st.q_pos;
    for _ in 0..n_win {
        st = m.step(&st, cfg.dt)?;
    }
    Ok((st.q_pos - q0) / (n_win as f64 * cfg.dt))
}

/// (Jc, v_avg) over an ascending list of positive current densities.
pub fn velocity_vs_jc(
    jc_list: &[f64],
    distance: f64,
    params: &MaterialParams,
    geometry: &DeviceGeometry,
    consts: &PhysicalConstants,
    cfg: &DwConfig,
) -> Result<Vec<(f64, f64)>> {
    if jc_list.iter().any(|j| !(*j > 0.0)) || jc_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("current densities must be positive and ascending".into()));
    }
    jc_list
        .iter()
        .map(|&j| Ok((j, propagate(distance, params, geometry, consts, cfg, j)?.v_avg)))
        .collect()
}

/// Wrap a phase into (−π, π].
pub fn wrap_phase(phi: f64) -> f64 {
    let mut p = phi.rem_euclid(2.0 * PI);
    if p > PI {
        p -= 2.0 * PI;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (MaterialParams, DeviceGeometry, PhysicalConstants) {
        (MaterialParams::default(), DeviceGeometry::default(), PhysicalConstants::default())
    }

    #[test]
    fn width_at_zero_phase_is_bloch_parameter() {
        let (mut p, g, c) = setup();
        p.ku_pma = 0.6e6;
        let d = dw_width(0.0, &p, &g, &c).unwrap();
        assert_eq!(d, (10e-12f64 / 0.6e6).sqrt());
        assert!((d - 4.082e-9).abs() < 1e-12);
    }

    #[test]
    fn width_solvers_agree_at_quarter_turn() {
        let (p, g, c) = setup();
        let a = dw_width(FRAC_PI_2, &p, &g, &c).unwrap();
        let b = dw_width_bisection(FRAC_PI_2, &p, &g, &c).unwrap();
        assert!(((a - b) / b).abs() < 1e-12, "{a} {b}");
    }

    #[test]
    fn drive_field_examples() {
        let (mut p, g, c) = setup();
        p.ku_pma = 1e6;
        p.ms_pma = 0.3e6;
        let f = drive_fields(&p, &g, &c, 0.0, 4e-9).unwrap();
        assert!((f.h_k - 6.67).abs() < 5e-3);
        assert_eq!((f.h_she, f.b_stt), (0.0, 0.0));
        let f1 = drive_fields(&p, &g, &c, 1e11, 4e-9).unwrap();
        let f2 = drive_fields(&p, &g, &c, 2e11, 4e-9).unwrap();
        assert_eq!(f2.h_she, 2.0 * f1.h_she);
        assert_eq!(f2.b_stt, 2.0 * f1.b_stt);
        assert_eq!(f2.h_dmi, f1.h_dmi);
        p.ms_pma = 0.0;
        assert!(matches!(drive_fields(&p, &g, &c, 1e11, 4e-9), Err(Error::InvalidMaterial(_))));
    }

    #[test]
    fn zero_drive_rest_states() {
        let (p, g, c) = setup();
        let cfg = DwConfig { hk_model: HkModel::Uniaxial, ..DwConfig::default() };
        let mut p0 = p;
        p0.d_dmi = 0.0;
        let st = DwState { q_pos: 0.0, phi: 0.0, delta: dw_width(0.0, &p0, &g, &c).unwrap(), t_now: 0.0 };
        let (dq, dphi) = dw_rates(&st, &p0, &g, &c, &cfg, 0.0).unwrap();
        assert_eq!((dq, dphi), (0.0, 0.0));

        let phi = PI / 4.0;
        let st = DwState { phi, delta: dw_width(phi, &p0, &g, &c).unwrap(), ..st };
        let (_, dphi) = dw_rates(&st, &p0, &g, &c, &cfg, 0.0).unwrap();
        let hk = 2.0 * p0.ku_pma / (c.mu0 * p0.ms_pma);
        let expect = -c.gamma_g * c.mu0 * p0.alpha * 0.5 * hk / (1.0 + p0.alpha * p0.alpha);
        assert!(dphi < 0.0);
        assert!(((dphi - expect) / expect).abs() < 1e-12);
    }

    #[test]
    fn wrap_phase_range() {
        for x in [-7.0, -PI, 0.0, 3.0, PI, 10.0] {
            let w = wrap_phase(x);
            assert!(w > -PI - 1e-12 && w <= PI + 1e-12);
            assert!(((x - w) / (2.0 * PI)).fract().abs() < 1e-9 || ((x - w) / (2.0 * PI)).fract().abs() > 1.0 - 1e-9);
        }
    }
}
