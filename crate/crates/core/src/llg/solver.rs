// SPDX-License-Identifier: Apache-2.0
//! Explicit RK4 integration of the LLG equation with per-step
//! renormalization.

use super::field::{self, Zeeman};
use super::grid::MagnetizationGrid;
use crate::error::{Error, Result};
use crate::vec3::{self, Vec3};

/// Imaginary-axis stability limit of classical RK4 is 2√2; keep a margin.
const RK4_LIMIT: f64 = 2.5;

/// Largest stable step for `grid` under a Zeeman field of magnitude
/// `zeeman_mag` (T).
pub fn stability_bound(grid: &MagnetizationGrid, zeeman_mag: f64) -> f64 {
    let w = grid.gamma * field::max_field_scale(grid, zeeman_mag) * (1.0 + grid.alpha) / (1.0 + grid.alpha * grid.alpha);
    RK4_LIMIT / w
}

/// Scratch buffers for repeated steps on one grid.
#[derive(Debug, Clone)]
pub struct Stepper {
    b: Vec<Vec3>,
    k: [Vec<Vec3>; 4],
    tmp: Vec<Vec3>,
}

/// Result of one accepted step.
#[derive(Debug, Clone, Copy)]
pub struct StepInfo {
    pub dt: f64,
    /// Largest |(|m|−1)| before renormalization.
    pub norm_drift: f64,
}

fn rhs(grid: &MagnetizationGrid, m: &[Vec3], zee: &Zeeman<'_>, b: &mut [Vec3], out: &mut [Vec3]) {
    field::fill_fields(grid, m, zee, b);
    let a = grid.alpha;
    let pre = -grid.gamma / (1.0 + a * a);
    for ((o, &mi), &bi) in out.iter_mut().zip(m).zip(b.iter()) {
        let mxb = vec3::cross(mi, bi);
        let mmxb = vec3::cross(mi, mxb);
        *o = vec3::scale(vec3::axpy(mxb, a, mmxb), pre);
    }
}

impl Stepper {
    pub fn new(grid: &MagnetizationGrid) -> Self {
        let n = grid.len();
        Self { b: vec![[0.0; 3]; n], k: std::array::from_fn(|_| vec![[0.0; 3]; n]), tmp: vec![[0.0; 3]; n] }
    }

    /// Advance `grid` from `t` by `dt` under `field_at(t)` applied on
    /// `mask`. The grid is left untouched on error.
    pub fn step(
        &mut self,
        grid: &mut MagnetizationGrid,
        field_at: &dyn Fn(f64) -> Vec3,
        mask: Option<&[bool]>,
        t: f64,
        dt: f64,
        max_drift: f64,
    ) -> Result<StepInfo> {
        if !(dt > 0.0) {
            return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
        }
        let f0 = field_at(t);
        let fh = field_at(t + 0.5 * dt);
        let f1 = field_at(t + dt);
        let bmax = vec3::norm(f0).max(vec3::norm(fh)).max(vec3::norm(f1));
        if !bmax.is_finite() {
            return Err(Error::NumericFailure("non-finite Zeeman field".into()));
        }
        let bound = stability_bound(grid, bmax);
        if dt > bound {
            return Err(Error::TimestepTooLarge { dt, bound });
        }
        let n = grid.len();
        let m0 = &grid.cells;
        let [k1, k2, k3, k4] = &mut self.k;

        rhs(grid, m0, &Zeeman { field: f0, mask }, &mut self.b, k1);
        for i in 0..n {
            self.tmp[i] = vec3::axpy(m0[i], 0.5 * dt, k1[i]);
        }
        rhs(grid, &self.tmp, &Zeeman { field: fh, mask }, &mut self.b, k2);
        for i in 0..n {
            self.tmp[i] = vec3::axpy(m0[i], 0.5 * dt, k2[i]);
        }
        rhs(grid, &self.tmp, &Zeeman { field: fh, mask }, &mut self.b, k3);
        for i in 0..n {
            self.tmp[i] = vec3::axpy(m0[i], dt, k3[i]);
        }
        rhs(grid, &self.tmp, &Zeeman { field: f1, mask }, &mut self.b, k4);

        let mut drift = 0.0f64;
        for i in 0..n {
            let inc = vec3::add(vec3::add(k1[i], k4[i]), vec3::scale(vec3::add(k2[i], k3[i]), 2.0));
            let next = vec3::axpy(m0[i], dt / 6.0, inc);
            if !vec3::is_finite(next) {
                return Err(Error::NumericFailure(format!("non-finite magnetization at cell {i}")));
            }
            drift = drift.max((vec3::norm(next) - 1.0).abs());
            self.tmp[i] = next;
        }
        if drift > max_drift {
            return Err(Error::TimestepTooLarge { dt, bound: dt * 0.5 });
        }
        for (c, &v) in grid.cells.iter_mut().zip(&self.tmp) {
            *c = vec3::normalize(v);
        }
        Ok(StepInfo { dt, norm_drift: drift })
    }
}

/// One LLG step with a fresh scratch buffer; see [`Stepper::step`].
pub fn llg_step(
    grid: &mut MagnetizationGrid,
    field_at: &dyn Fn(f64) -> Vec3,
    mask: Option<&[bool]>,
    t: f64,
    dt: f64,
) -> Result<StepInfo> {
    Stepper::new(grid).step(grid, field_at, mask, t, dt, 1e-3)
}

/// Integrate from `t0` to `t1`, using steps of at most `dt` and halving on
/// rejection. `on_step` sees the grid after every accepted step.
pub fn integrate(
    grid: &mut MagnetizationGrid,
    field_at: &dyn Fn(f64) -> Vec3,
    mask: Option<&[bool]>,
    t0: f64,
    t1: f64,
    dt: f64,
    on_step: &mut dyn FnMut(f64, &MagnetizationGrid) -> bool,
) -> Result<f64> {
    let mut stepper = Stepper::new(grid);
    let mut t = t0;
    let mut h = dt;
    let eps = 1e-9 * dt;
    while t < t1 - eps {
        let step = h.min(t1 - t);
        match stepper.step(grid, field_at, mask, t, step, 1e-3) {
            Ok(info) => {
                t += info.dt;
                if !on_step(t, grid) {
                    break;
                }
            }
            Err(Error::TimestepTooLarge { bound, .. }) => {
                h = (0.5 * h).min(0.95 * bound);
                if h < 1e-20 {
                    return Err(Error::NumericFailure("LLG step underflow".into()));
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(t)
}

/// Zero-field relaxation for `duration`.
pub fn relax(grid: &mut MagnetizationGrid, duration: f64, dt: f64) -> Result<()> {
    if duration <= 0.0 {
        return Ok(());
    }
    integrate(grid, &|_| [0.0; 3], None, 0.0, duration, dt, &mut |_, _| true)?;
    Ok(())
}
