// SPDX-License-Identifier: Apache-2.0
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("invalid material: {0}")]
    InvalidMaterial(String),
    #[error("unsupported preset `{0}` (expected 15nm or 7nm)")]
    UnsupportedPreset(String),
    #[error("timestep {dt:e} s exceeds the stability bound {bound:e} s")]
    TimestepTooLarge { dt: f64, bound: f64 },
    #[error("numeric failure: {0}")]
    NumericFailure(String),
    #[error("domain-wall width has no root in (0, 1 µm): {0}")]
    WidthSolveFailure(String),
    #[error("wall stalled at {reached:e} m of {target:e} m within {horizon:e} s")]
    PropagationStall { reached: f64, target: f64, horizon: f64 },
    #[error("config error: {0}")]
    Config(String),
    #[error("unknown config key `{key}`{}", hint.as_ref().map(|h| format!(" (did you mean `{h}`?)")).unwrap_or_default())]
    UnknownKey { key: String, hint: Option<String> },
    #[error("unit mismatch for `{key}`: {msg}")]
    UnitMismatch { key: String, msg: String },
    #[error("incomplete sweep: {0}")]
    IncompleteSweep(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by user input (config, arguments).
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config(_)
                | Error::UnknownKey { .. }
                | Error::UnitMismatch { .. }
                | Error::UnsupportedPreset(_)
                | Error::InvalidArgument(_)
                | Error::InvalidGeometry(_)
                | Error::InvalidMaterial(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
