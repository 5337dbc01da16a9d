// SPDX-License-Identifier: Apache-2.0
// `!(x > 0.0)` is used on purpose: NaN must fail validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod dse;
pub mod dw;
pub mod calibration;
pub mod config;
pub mod error;
pub mod io;
pub mod lkh;
pub mod llg;
pub mod perf;
pub mod units;
pub mod vec3;

pub use error::{Error, Result};

// guide chapters, compiled and run as doctests
#[doc = include_str!("../../../book/src/overview.md")]
mod guide_overview {}
#[doc = include_str!("../../../book/src/config.md")]
mod guide_config {}
#[doc = include_str!("../../../book/src/ferro.md")]
mod guide_ferro {}
#[doc = include_str!("../../../book/src/nucleation.md")]
mod guide_nucleation {}
#[doc = include_str!("../../../book/src/walls.md")]
mod guide_walls {}
#[doc = include_str!("../../../book/src/gate.md")]
mod guide_gate {}
#[doc = include_str!("../../../book/src/sweeps.md")]
mod guide_sweeps {}
