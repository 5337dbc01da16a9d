// SPDX-License-Identifier: Apache-2.0
use serde::{Deserialize, Serialize};

use super::demag::prism_factors;
use crate::error::{Error, Result};
use crate::units::{DeviceGeometry, MaterialParams, PhysicalConstants};
use crate::vec3::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Layer {
    Pma,
    PmaUnderIma,
}

/// How the IMA-FM on top of the input end enters the single-layer grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ImaCoupling {
    /// The rigidly coupled IMA contributes its shape-anisotropy energy to
    /// the cells beneath it; the ME field acts on the PMA moment only.
    #[default]
    Anisotropy,
    /// Cells beneath the IMA are one lumped bilayer: moment, exchange
    /// stiffness and Zeeman energy include the IMA film.
    Rigid,
}

/// Grid layout and composite-treatment knobs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSpec {
    /// Cell edge (m)
    pub cell: f64,
    /// Strip length in units of F
    pub length_f: f64,
    /// Strip width in units of F
    pub width_f: f64,
    /// Length of the IMA-FM footprint from the input end, in units of F
    pub ima_length_f: f64,
    pub coupling: ImaCoupling,
    /// Demagnetizing factors of the IMA-FM; computed from its footprint
    /// when absent.
    pub ima_demag: Option<Vec3>,
    /// Include the local thin-film demag term.
    pub local_demag: bool,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            cell: 1e-9,
            length_f: 6.0,
            width_f: 1.0,
            ima_length_f: 2.0,
            coupling: ImaCoupling::Anisotropy,
            ima_demag: None,
            local_demag: true,
        }
    }
}

/// Discretized magnetization of the PMA-FM strip, with the per-cell
/// material maps and the per-area coefficients the field evaluation uses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MagnetizationGrid {
    pub nx: usize,
    pub ny: usize,
    /// Cell size (m)
    pub dx: f64,
    pub dy: f64,
    /// Unit vectors, x-fastest: index = ix + nx·iy
    pub cells: Vec<Vec3>,
    pub layer_map: Vec<Layer>,
    /// PMA-FM saturation magnetization per cell (A/m)
    pub ms_map: Vec<f64>,
    /// PMA-FM uniaxial anisotropy per cell (J/m³)
    pub ku_map: Vec<f64>,
    /// Axis of `ku_map`
    pub easy_axis_map: Vec<Vec3>,
    /// Dominant in-plane axis of the composite treatment (zero for plain
    /// PMA cells)
    pub ima_axis_map: Vec<Vec3>,
    /// PMA-FM thickness (m)
    pub h_pma: f64,
    /// Moment per area used to normalize the effective field (A)
    pub moment: Vec<f64>,
    /// Moment per area the Zeeman field couples to (A)
    pub zeeman_moment: Vec<f64>,
    /// Extra quadratic energy per area, E = Σ_k q_k·m_k² (J/m²)
    pub shape_q: Vec<Vec3>,
    /// A·h for the bond between cell i and i+1 along x (J), len (nx−1)·ny
    pub bond_x: Vec<f64>,
    /// A·h for the bond between cell i and i+nx along y (J), len nx·(ny−1)
    pub bond_y: Vec<f64>,
    pub local_demag: bool,
    pub mu0: f64,
    pub gamma: f64,
    pub alpha: f64,
}

impl MagnetizationGrid {
    /// Build the strip for `params`/`geometry`. With `with_ima` the cells
    /// within `ima_length_f·F` of the input end sit under the IMA-FM and
    /// start along its long axis; every other cell starts along +z.
    pub fn build(
        params: &MaterialParams,
        geometry: &DeviceGeometry,
        consts: &PhysicalConstants,
        spec: &GridSpec,
        with_ima: bool,
    ) -> Result<Self> {
        params.validate()?;
        geometry.validate()?;
        if !(spec.cell > 0.0) {
            return Err(Error::InvalidArgument("cell size must be positive".into()));
        }
        let f = geometry.f_feat;
        let nx = (spec.length_f * f / spec.cell).round() as usize;
        let ny = (spec.width_f * f / spec.cell).round() as usize;
        if nx < 2 || ny < 1 {
            return Err(Error::InvalidGeometry(format!("grid {nx}×{ny} too small")));
        }
        let dx = spec.length_f * f / nx as f64;
        let dy = spec.width_f * f / ny as f64;
        let n = nx * ny;
        let hp = geometry.h_pma;
        let hi = geometry.h_ima;
        let ms = params.ms_pma;
        let msi = params.ms_ima;
        let under = |ix: usize| with_ima && hi > 0.0 && ((ix as f64 + 0.5) * dx) < spec.ima_length_f * f;
        let nd = spec
            .ima_demag
            .unwrap_or_else(|| prism_factors(spec.ima_length_f * f, spec.width_f * f, hi.max(1e-12)));
        let shape_ima: Vec3 = [0, 1, 2].map(|k| 0.5 * consts.mu0 * msi * msi * hi * nd[k]);

        let mut grid = Self {
            nx,
            ny,
            dx,
            dy,
            cells: vec![[0.0, 0.0, 1.0]; n],
            layer_map: vec![Layer::Pma; n],
            ms_map: vec![ms; n],
            ku_map: vec![params.ku_pma; n],
            easy_axis_map: vec![[0.0, 0.0, 1.0]; n],
            ima_axis_map: vec![[0.0; 3]; n],
            h_pma: hp,
            moment: vec![ms * hp; n],
            zeeman_moment: vec![ms * hp; n],
            shape_q: vec![[0.0; 3]; n],
            bond_x: vec![params.a_ex * hp; (nx - 1) * ny],
            bond_y: vec![params.a_ex * hp; nx * ny.saturating_sub(1)],
            local_demag: spec.local_demag,
            mu0: consts.mu0,
            gamma: consts.gamma_g,
            alpha: params.alpha,
        };
        for iy in 0..ny {
            for ix in 0..nx {
                if !under(ix) {
                    continue;
                }
                let i = ix + nx * iy;
                grid.layer_map[i] = Layer::PmaUnderIma;
                grid.ima_axis_map[i] = [1.0, 0.0, 0.0];
                grid.cells[i] = [1.0, 0.0, 0.0];
                grid.shape_q[i] = shape_ima;
                if spec.coupling == ImaCoupling::Rigid {
                    grid.moment[i] = ms * hp + msi * hi;
                    grid.zeeman_moment[i] = grid.moment[i];
                }
            }
        }
        if spec.coupling == ImaCoupling::Rigid {
            // bonds fully inside the bilayer carry the IMA stiffness too
            for iy in 0..ny {
                for ix in 0..nx - 1 {
                    if under(ix) && under(ix + 1) {
                        grid.bond_x[ix + (nx - 1) * iy] = params.a_ex * (hp + hi);
                    }
                }
                if iy + 1 < ny {
                    for ix in 0..nx {
                        if under(ix) {
                            grid.bond_y[ix + nx * iy] = params.a_ex * (hp + hi);
                        }
                    }
                }
            }
        }
        Ok(grid)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    #[inline]
    pub fn index(&self, ix: usize, iy: usize) -> usize {
        ix + self.nx * iy
    }

    /// x coordinate of the centre of column `ix` (m).
    #[inline]
    pub fn x_center(&self, ix: usize) -> f64 {
        (ix as f64 + 0.5) * self.dx
    }

    /// Mean m_z over columns with centres in `[x0, x1)`.
    pub fn mean_mz(&self, x0: f64, x1: f64) -> f64 {
        let mut sum = 0.0;
        let mut count = 0usize;
        for ix in 0..self.nx {
            let x = self.x_center(ix);
            if x >= x0 && x < x1 {
                for iy in 0..self.ny {
                    sum += self.cells[self.index(ix, iy)][2];
                    count += 1;
                }
            }
        }
        if count == 0 {
            f64::NAN
        } else {
            sum / count as f64
        }
    }

    /// Mean polar angle from +z of the cells beneath the IMA (rad).
    pub fn composite_tilt(&self) -> Option<f64> {
        let v: Vec<f64> = self
            .cells
            .iter()
            .zip(&self.layer_map)
            .filter(|(_, l)| **l == Layer::PmaUnderIma)
            .map(|(m, _)| m[2].clamp(-1.0, 1.0).acos())
            .collect();
        (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
    }

    /// Snapshot rows (x, y, mx, my, mz) at cell centres.
    pub fn snapshot_csv(&self) -> String {
        let mut out = String::from("x,y,mx,my,mz\n");
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                let m = self.cells[self.index(ix, iy)];
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    self.x_center(ix),
                    (iy as f64 + 0.5) * self.dy,
                    m[0],
                    m[1],
                    m[2]
                ));
            }
        }
        out
    }
}
