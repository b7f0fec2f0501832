//! Backward-Euler time marching for linear evolution problems
//! `du/dt + A(t) u = f(t)` with a-priori time-step selection.
//!
//! The solution is advanced by the fully implicit scheme, which is
//! unconditionally stable for a non-negative operator. The step size is not
//! chosen by a solve-then-reject loop: explicit formulas built from the two
//! latest time levels measure how fast the operator, the right-hand side,
//! and the solution itself are changing, and the next step follows directly,
//! bounded by a growth cap and a floor.
//!
//! Modules:
//!
//! - [`linalg`] — grid vectors with the mesh-weighted inner product and a
//!   direct tridiagonal solver;
//! - [`problem`] — the [`EvolutionProblem`] contract the stepper and the
//!   controller talk to;
//! - [`heat1d`] — a finite-difference 1D parabolic problem with a
//!   time-dependent reaction coefficient, plus three reference initial
//!   profiles of varying roughness;
//! - [`controller`] — the step-selection law and its diagnostics;
//! - [`stepper`] — the marching drivers and run histories.
//!
//! The crate is `no_std` (with `alloc`); all I/O, file formats, and the
//! experiment command line live in the companion `taumarch-cli` crate.
//!
//! ```
//! use taumarch::{ControllerConfig, ControllerVariant, InitialCondition};
//!
//! let problem = InitialCondition::Sine.problem(100).unwrap();
//! let cfg = ControllerConfig::new(0.1, 1.5, 1e-6, 1e-6, ControllerVariant::ForwardBackward)
//!     .unwrap();
//! let history = taumarch::stepper::run(&problem, &cfg, 0.5).unwrap();
//! assert!((history.final_time() - 0.1).abs() < 1e-12);
//! assert!(history.total_steps() > 100);
//! ```

#![no_std]

extern crate alloc;

pub mod controller;
pub mod error;
pub mod heat1d;
pub mod linalg;
pub mod problem;
pub mod stepper;

pub use controller::{ControllerConfig, ControllerVariant, StepDiagnostics};
pub use error::{Error, Result};
pub use heat1d::{Heat1DProblem, InitialCondition};
pub use linalg::{GridVector, TriDiagSystem};
pub use problem::EvolutionProblem;
pub use stepper::{RunHistory, StepRecord};
