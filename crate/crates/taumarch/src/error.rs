//! Error type shared across the crate.

use core::fmt;

/// Errors reported by solver operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two grid quantities have incompatible lengths.
    LengthMismatch { expected: usize, found: usize },
    /// Two grid vectors carry different mesh widths.
    MeshWidthMismatch { expected: f64, found: f64 },
    /// A constructor was handed a NaN, an infinity, or an out-of-range value.
    InvalidValue(&'static str),
    /// Elimination hit a pivot too small to divide by; the system is
    /// singular (or far from diagonally dominant).
    SingularPivot { index: usize },
    /// The marching state stopped being finite at the given step.
    Diverged { step: usize, time: f64 },
    /// A configuration parameter violates its documented range.
    InvalidConfig(&'static str),
    /// The probe location does not coincide with an interior grid node.
    ProbeOffGrid { x: f64, h: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
            Self::MeshWidthMismatch { expected, found } => {
                write!(f, "mesh width mismatch: expected {expected}, found {found}")
            }
            Self::InvalidValue(what) => write!(f, "invalid value: {what}"),
            Self::SingularPivot { index } => {
                write!(f, "singular system: negligible pivot at row {index}")
            }
            Self::Diverged { step, time } => {
                write!(
                    f,
                    "solution diverged (non-finite state) at step {step}, t = {time}"
                )
            }
            Self::InvalidConfig(what) => write!(f, "invalid configuration: {what}"),
            Self::ProbeOffGrid { x, h } => {
                write!(
                    f,
                    "probe location {x} is not an interior node of the grid with spacing {h}"
                )
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
