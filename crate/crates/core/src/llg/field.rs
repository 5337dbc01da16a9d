// SPDX-License-Identifier: Apache-2.0
//! Effective field and micromagnetic energy, both in flux-density units.
//!
//! Per cell the energy per area is
//! `−Ku·h·(m·ê)² + Σ q_k m_k² + ½μ0·Ms²·h·m_z² − M_z·m·B`
//! and each bond adds `A·h·(w/Δ)·|m_i − m_j|²`. The field is
//! `B = −(1/M·dx·dy) ∂E/∂m`, which for a plain PMA cell is
//! `(2Ku/Ms)(m·ê)ê − μ0·Ms·m_z ẑ + (2A/Ms)∇²m + B_zeeman`.

use super::grid::MagnetizationGrid;
use crate::error::{Error, Result};
use crate::vec3::{self, Vec3};

/// Zeeman drive: a uniform field over the cells with `mask[i] == true`.
#[derive(Debug, Clone, Copy)]
pub struct Zeeman<'a> {
    pub field: Vec3,
    pub mask: Option<&'a [bool]>,
}

impl<'a> Zeeman<'a> {
    pub fn none() -> Self {
        Self { field: [0.0; 3], mask: None }
    }

    pub fn uniform(field: Vec3) -> Self {
        Self { field, mask: None }
    }

    #[inline]
    fn at(&self, i: usize) -> Vec3 {
        match self.mask {
            Some(m) if !m[i] => [0.0; 3],
            _ => self.field,
        }
    }
}

#[inline]
fn local_field(g: &MagnetizationGrid, m: &[Vec3], i: usize, zee: &Zeeman<'_>) -> Vec3 {
    let mi = m[i];
    let mom = g.moment[i];
    let hp = g.h_pma;
    let e = g.easy_axis_map[i];
    let ku = 2.0 * g.ku_map[i] * hp / mom * vec3::dot(mi, e);
    let mut b = vec3::scale(e, ku);
    let q = g.shape_q[i];
    b = vec3::sub(b, [2.0 * q[0] * mi[0] / mom, 2.0 * q[1] * mi[1] / mom, 2.0 * q[2] * mi[2] / mom]);
    if g.local_demag {
        let ms = g.ms_map[i];
        b[2] -= g.mu0 * ms * ms * hp * mi[2] / mom;
    }
    let bz = zee.at(i);
    let w = g.zeeman_moment[i] / mom;
    if w == 1.0 {
        b = vec3::add(b, bz);
    } else {
        b = vec3::axpy(b, w, bz);
    }

    // exchange, Neumann boundaries: missing neighbours contribute nothing
    let nx = g.nx;
    let (ix, iy) = (i % nx, i / nx);
    let cx = 2.0 / (mom * g.dx * g.dx);
    let cy = 2.0 / (mom * g.dy * g.dy);
    if ix > 0 {
        let s = g.bond_x[(ix - 1) + (nx - 1) * iy] * cx;
        b = vec3::axpy(b, s, vec3::sub(m[i - 1], mi));
    }
    if ix + 1 < nx {
        let s = g.bond_x[ix + (nx - 1) * iy] * cx;
        b = vec3::axpy(b, s, vec3::sub(m[i + 1], mi));
    }
    if iy > 0 {
        let s = g.bond_y[ix + nx * (iy - 1)] * cy;
        b = vec3::axpy(b, s, vec3::sub(m[i - nx], mi));
    }
    if iy + 1 < g.ny {
        let s = g.bond_y[ix + nx * iy] * cy;
        b = vec3::axpy(b, s, vec3::sub(m[i + nx], mi));
    }
    b
}

/// Effective field at one cell for the grid's current state (T).
pub fn effective_field(grid: &MagnetizationGrid, cell: usize, zeeman: &Zeeman<'_>) -> Result<Vec3> {
    if cell >= grid.len() {
        return Err(Error::InvalidArgument(format!("cell {cell} out of bounds ({} cells)", grid.len())));
    }
    Ok(local_field(grid, &grid.cells, cell, zeeman))
}

/// Effective field for every cell of state `m` into `out`.
pub(crate) fn fill_fields(grid: &MagnetizationGrid, m: &[Vec3], zeeman: &Zeeman<'_>, out: &mut [Vec3]) {
    for (i, o) in out.iter_mut().enumerate() {
        *o = local_field(grid, m, i, zeeman);
    }
}

/// Total micromagnetic energy (J): anisotropy + shape + local demag +
/// Zeeman + exchange.
pub fn total_energy(grid: &MagnetizationGrid, zeeman: &Zeeman<'_>) -> f64 {
    energy_of(grid, &grid.cells, zeeman)
}

pub(crate) fn energy_of(g: &MagnetizationGrid, m: &[Vec3], zeeman: &Zeeman<'_>) -> f64 {
    let area = g.dx * g.dy;
    let hp = g.h_pma;
    let mut cell_terms = 0.0;
    for (i, &mi) in m.iter().enumerate() {
        let me = vec3::dot(mi, g.easy_axis_map[i]);
        let q = g.shape_q[i];
        let mut e = -g.ku_map[i] * hp * me * me + q[0] * mi[0] * mi[0] + q[1] * mi[1] * mi[1] + q[2] * mi[2] * mi[2];
        if g.local_demag {
            let ms = g.ms_map[i];
            e += 0.5 * g.mu0 * ms * ms * hp * mi[2] * mi[2];
        }
        e -= g.zeeman_moment[i] * vec3::dot(mi, zeeman.at(i));
        cell_terms += e;
    }
    let mut bonds = 0.0;
    let nx = g.nx;
    for iy in 0..g.ny {
        for ix in 0..nx - 1 {
            let i = ix + nx * iy;
            let d = vec3::sub(m[i + 1], m[i]);
            bonds += g.bond_x[ix + (nx - 1) * iy] * (g.dy / g.dx) * vec3::dot(d, d);
        }
        if iy + 1 < g.ny {
            for ix in 0..nx {
                let i = ix + nx * iy;
                let d = vec3::sub(m[i + nx], m[i]);
                bonds += g.bond_y[ix + nx * iy] * (g.dx / g.dy) * vec3::dot(d, d);
            }
        }
    }
    cell_terms * area + bonds
}

/// Largest field-like rate in the grid, used for the explicit stability
/// bound: anisotropy stiffness + twice the exchange stencil weight + the
/// Zeeman magnitude.
pub(crate) fn max_field_scale(g: &MagnetizationGrid, zeeman_mag: f64) -> f64 {
    let nx = g.nx;
    let mut worst = 0.0f64;
    for i in 0..g.len() {
        let mom = g.moment[i];
        let hp = g.h_pma;
        let q = g.shape_q[i];
        let mut s = 2.0 * g.ku_map[i].abs() * hp / mom + 2.0 * q.iter().fold(0.0f64, |a, b| a.max(b.abs())) / mom;
        if g.local_demag {
            s += g.mu0 * g.ms_map[i] * g.ms_map[i] * hp / mom;
        }
        let (ix, iy) = (i % nx, i / nx);
        let mut ex = 0.0;
        if ix > 0 {
            ex += g.bond_x[(ix - 1) + (nx - 1) * iy] / (g.dx * g.dx);
        }
        if ix + 1 < nx {
            ex += g.bond_x[ix + (nx - 1) * iy] / (g.dx * g.dx);
        }
        if iy > 0 {
            ex += g.bond_y[ix + nx * (iy - 1)] / (g.dy * g.dy);
        }
        if iy + 1 < g.ny {
            ex += g.bond_y[ix + nx * iy] / (g.dy * g.dy);
        }
        s += 2.0 * 2.0 * ex / mom;
        s += zeeman_mag * g.zeeman_moment[i] / mom;
        worst = worst.max(s);
    }
    worst
}
