// SPDX-License-Identifier: Apache-2.0
//! Ferroelectric polarization dynamics (Landau–Khalatnikov) and the
//! magnetoelectric field it produces.
//!
//! The free-energy density is the symmetric double well
//! `f(P) = a2·|P|² + a4·|P|⁴ − E·P`, so with `F_T = a_FE·f` the LKh
//! equation reduces to `γ_v ∂P/∂t = −∂f/∂P` for a uniform capacitor.
//! The polarization may be confined to a polar axis tilted away from the
//! film normal, in which case only the projection of the applied field on
//! that axis drives it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vec3::{self, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandauCoefficients {
    /// Quadratic coefficient (V·m/C), negative
    pub a2: f64,
    /// Quartic coefficient (V·m⁵/C³), positive
    pub a4: f64,
    /// Remnant polarization (C/m²)
    pub p_remnant: f64,
    /// Coercive field (V/m)
    pub e_coercive: f64,
}

impl LandauCoefficients {
    /// Double-well coefficients whose minimum sits at `p_remnant` and whose
    /// spinodal field equals `e_coercive`.
    ///
    /// ```
    /// # use comet_core::lkh::LandauCoefficients;
    /// let c = LandauCoefficients::calibrate(0.1, 1e7).unwrap();
    /// let slope_zero = |p: f64| 2.0 * c.a2 * p + 4.0 * c.a4 * p.powi(3);
    /// assert!(slope_zero(0.1).abs() < 1e-6);
    /// ```
    pub fn calibrate(p_remnant: f64, e_coercive: f64) -> Result<Self> {
        if !(p_remnant > 0.0 && e_coercive > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "remnant polarization and coercive field must be positive, got {p_remnant}, {e_coercive}"
            )));
        }
        let a2 = -3.0 * 3f64.sqrt() * e_coercive / (4.0 * p_remnant);
        let a4 = -a2 / (2.0 * p_remnant * p_remnant);
        Ok(Self { a2, a4, p_remnant, e_coercive })
    }

    /// Coefficients whose small-signal permittivity at the well bottom is
    /// `eps_r` for the given remnant polarization. The coercive field follows.
    pub fn from_permittivity(p_remnant: f64, eps_r: f64, eps0: f64) -> Result<Self> {
        if !(eps_r > 1.0) {
            return Err(Error::InvalidArgument(format!("relative permittivity must exceed 1, got {eps_r}")));
        }
        // f''(P_r) = -4·a2 = 1/(ε0·χ)
        let a2 = -1.0 / (4.0 * eps0 * (eps_r - 1.0));
        let e_coercive = -4.0 * a2 * p_remnant / (3.0 * 3f64.sqrt());
        Self::calibrate(p_remnant, e_coercive)
    }

    /// Free-energy density without the field term (J/m³).
    pub fn landau_energy(&self, p: Vec3) -> f64 {
        let p2 = vec3::dot(p, p);
        self.a2 * p2 + self.a4 * p2 * p2
    }

    /// Total free-energy density including −E·P.
    pub fn free_energy(&self, p: Vec3, e: Vec3) -> f64 {
        self.landau_energy(p) - vec3::dot(e, p)
    }

    /// ∂f/∂P.
    pub fn gradient(&self, p: Vec3, e: Vec3) -> Vec3 {
        let p2 = vec3::dot(p, p);
        let k = 2.0 * self.a2 + 4.0 * self.a4 * p2;
        vec3::sub(vec3::scale(p, k), e)
    }

    /// Polarization bound used for the state invariant: the largest |P|
    /// reachable from the wells under field magnitude `e_max`.
    pub fn p_saturation(&self, e_max: f64) -> f64 {
        // Largest root of 2·a2·P + 4·a4·P³ = e_max, found by Newton from above.
        let mut p = self.p_remnant.max((e_max.abs() / (4.0 * self.a4)).cbrt()) * 2.0;
        for _ in 0..100 {
            let g = 2.0 * self.a2 * p + 4.0 * self.a4 * p.powi(3) - e_max.abs();
            let dg = 2.0 * self.a2 + 12.0 * self.a4 * p * p;
            let next = p - g / dg;
            if (next - p).abs() <= 1e-15 * p.abs() {
                return next;
            }
            p = next;
        }
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeState {
    /// Polarization (C/m²)
    pub p_vec: Vec3,
    /// Time (s)
    pub t_now: f64,
}

/// Largest stable explicit RK4 step for relaxation rate `λ` is 2.785/λ; we
/// keep a margin below that.
fn stability_bound(coeffs: &LandauCoefficients, p: Vec3, e: Vec3, gamma_v: f64) -> f64 {
    let p2 = vec3::dot(p, p).max(coeffs.p_remnant * coeffs.p_remnant);
    let pe = coeffs.p_saturation(vec3::norm(e));
    let curvature = (2.0 * coeffs.a2).abs() + 12.0 * coeffs.a4 * p2.max(pe * pe);
    2.5 * gamma_v / curvature
}

fn rate(coeffs: &LandauCoefficients, p: Vec3, e: Vec3, axis: Option<Vec3>, gamma_v: f64) -> Vec3 {
    let g = coeffs.gradient(p, e);
    let g = match axis {
        Some(u) => vec3::scale(u, vec3::dot(g, u)),
        None => g,
    };
    vec3::scale(g, -1.0 / gamma_v)
}

/// One RK4 step of the LKh equation.
///
/// `fe_volume` enters as `F_T = fe_volume·f`, so it cancels against the
/// `1/a_FE` prefactor; it is still validated since a degenerate capacitor
/// has no free energy to descend. `axis`, when given, must be a unit vector
/// and confines P to that line.
pub fn lkh_step(
    state: FeState,
    e_applied: Vec3,
    coeffs: &LandauCoefficients,
    gamma_v: f64,
    fe_volume: f64,
    axis: Option<Vec3>,
    dt: f64,
) -> Result<FeState> {
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
    }
    if !(fe_volume > 0.0) {
        return Err(Error::InvalidGeometry(format!("FE volume must be positive, got {fe_volume}")));
    }
    let bound = stability_bound(coeffs, state.p_vec, e_applied, gamma_v);
    if dt > bound {
        return Err(Error::TimestepTooLarge { dt, bound });
    }
    let p = state.p_vec;
    let f = |x: Vec3| rate(coeffs, x, e_applied, axis, gamma_v);
    let k1 = f(p);
    let k2 = f(vec3::axpy(p, 0.5 * dt, k1));
    let k3 = f(vec3::axpy(p, 0.5 * dt, k2));
    let k4 = f(vec3::axpy(p, dt, k3));
    let inc = vec3::add(vec3::add(k1, k4), vec3::scale(vec3::add(k2, k3), 2.0));
    let next = vec3::axpy(p, dt / 6.0, inc);
    if !vec3::is_finite(next) {
        return Err(Error::NumericFailure("non-finite polarization".into()));
    }
    Ok(FeState { p_vec: next, t_now: state.t_now + dt })
}

/// Integrate to `t_end` with steps no larger than `dt`, halving on a
/// stability rejection.
#[allow(clippy::too_many_arguments)]
pub fn lkh_advance(
    mut state: FeState,
    e_applied: Vec3,
    coeffs: &LandauCoefficients,
    gamma_v: f64,
    fe_volume: f64,
    axis: Option<Vec3>,
    dt: f64,
    t_end: f64,
) -> Result<FeState> {
    let mut h = dt;
    while state.t_now < t_end {
        let step = h.min(t_end - state.t_now);
        if step <= t_end * 1e-15 {
            break;
        }
        match lkh_step(state, e_applied, coeffs, gamma_v, fe_volume, axis, step) {
            Ok(s) => state = s,
            Err(Error::TimestepTooLarge { .. }) => {
                h *= 0.5;
                if h < 1e-24 {
                    return Err(Error::NumericFailure("LKh step underflow".into()));
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(state)
}

/// Magnetoelectric field `(κ_ME/ε0)·(h_int/h_FE)·P`.
///
/// Dimensionally `κ[s/m]·P/ε0` is V·s/m², so the result is a flux density
/// in tesla; the LLG solver works in those units. `scale` is the unit
/// convention factor, 1 by default.
pub fn me_field(p_vec: Vec3, kappa_me: f64, h_int: f64, h_fe_in: f64, eps0: f64, scale: f64) -> Result<Vec3> {
    if !(h_fe_in > 0.0) {
        return Err(Error::InvalidGeometry(format!("FE thickness must be positive, got {h_fe_in}")));
    }
    Ok(vec3::scale(p_vec, scale * kappa_me / eps0 * h_int / h_fe_in))
}

/// Field across the FE capacitor, `V/h`.
pub fn voltage_to_field(v_fe: f64, h_fe_in: f64) -> Result<f64> {
    if !(h_fe_in > 0.0) {
        return Err(Error::InvalidGeometry(format!("FE thickness must be positive, got {h_fe_in}")));
    }
    Ok(v_fe / h_fe_in)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs() -> LandauCoefficients {
        LandauCoefficients::calibrate(0.2, 1e7).unwrap()
    }

    #[test]
    fn calibration_hits_targets() {
        let c = coeffs();
        assert!(c.a2 < 0.0 && c.a4 > 0.0);
        // well minimum
        let g = c.gradient([0.0, 0.0, 0.2], [0.0; 3]);
        assert!(g[2].abs() < 1e-9 * c.a2.abs() * 0.2);
        // spinodal field at P_r/√3
        let ps = 0.2 / 3f64.sqrt();
        let e = -(2.0 * c.a2 * ps + 4.0 * c.a4 * ps.powi(3));
        assert!((e - 1e7).abs() < 1e-6 * 1e7);
    }

    #[test]
    fn permittivity_calibration() {
        let eps0 = 8.854e-12;
        let c = LandauCoefficients::from_permittivity(0.05, 164.0, eps0).unwrap();
        let pr = c.p_remnant;
        let curv = 2.0 * c.a2 + 12.0 * c.a4 * pr * pr;
        assert!((1.0 / (eps0 * curv) - 163.0).abs() < 1e-9);
    }

    #[test]
    fn fixed_points() {
        let c = coeffs();
        let s = FeState { p_vec: [0.0, 0.0, 0.2], t_now: 0.0 };
        let n = lkh_step(s, [0.0; 3], &c, 5.47e-5, 1e-24, None, 1e-14).unwrap();
        assert!((n.p_vec[2] - 0.2).abs() < 1e-12);
        let z = FeState { p_vec: [0.0; 3], t_now: 0.0 };
        let n = lkh_step(z, [0.0; 3], &c, 5.47e-5, 1e-24, None, 1e-14).unwrap();
        assert_eq!(n.p_vec, [0.0; 3]);
    }

    #[test]
    fn oversized_step_rejected() {
        let c = coeffs();
        let s = FeState { p_vec: [0.0, 0.0, 0.1], t_now: 0.0 };
        assert!(matches!(
            lkh_step(s, [0.0; 3], &c, 5.47e-5, 1e-24, None, 1e-9),
            Err(Error::TimestepTooLarge { .. })
        ));
    }

    #[test]
    fn me_field_examples() {
        let eps0 = 8.85e-12;
        let k = 0.2 / 3e8;
        let h = me_field([0.0, 0.0, 0.5], k, 1.5e-9, 5e-9, eps0, 1.0).unwrap();
        let expect = 0.2 / (3e8 * 8.85e-12) * 0.3 * 0.5;
        assert!((h[2] - expect).abs() < 1e-12 * expect);
        assert_eq!(me_field([0.0; 3], k, 1.5e-9, 5e-9, eps0, 1.0).unwrap(), [0.0; 3]);
        assert!(me_field([0.0; 3], k, 1.5e-9, 0.0, eps0, 1.0).is_err());
    }

    #[test]
    fn voltage_examples() {
        assert!((voltage_to_field(0.110, 5e-9).unwrap() - 2.2e7).abs() < 1e-3);
        assert_eq!(voltage_to_field(0.0, 5e-9).unwrap(), 0.0);
        assert!((voltage_to_field(-0.150, 5e-9).unwrap() + 3.0e7).abs() < 1e-3);
        assert!(voltage_to_field(0.1, 0.0).is_err());
    }
}
