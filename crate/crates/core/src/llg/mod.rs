// SPDX-License-Identifier: Apache-2.0
//! Finite-difference LLG solver for the input end of the PMA-FM strip.
//!
//! The strip is one cell thick. Cells under the IMA-FM carry that film's
//! shape anisotropy (see [`ImaCoupling`]); demagnetization is the local
//! thin-film term only.

pub mod demag;
mod field;
mod grid;
mod nucleate;
mod solver;

pub use field::{effective_field, total_energy, Zeeman};
pub use grid::{GridSpec, ImaCoupling, Layer, MagnetizationGrid};
pub use nucleate::{
    ima_thickness_sweep, nucleate, nucleate_case, prepare_grid, threshold_voltage, FeDrive, FerroParams, InputCase,
    LlgRunResult, LlgSettings, StripRule,
};
pub use solver::{integrate, llg_step, relax, stability_bound, StepInfo, Stepper};
