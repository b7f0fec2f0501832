//! Contract for the linear evolution problem du/dt + A(t) u = f(t).
//!
//! The stepper and the step controller talk to the problem only through this
//! trait, so they are independent of the spatial discretization.

use crate::error::Result;
use crate::linalg::{GridVector, TriDiagSystem};

/// A time-dependent linear evolution problem on a grid.
///
/// Implementations must keep the operator non-negative in the grid inner
/// product, `(A(t) u, u) >= 0`; the unconditional stability of the implicit
/// scheme and the solution-norm bound maintained by the stepper both rest on
/// that property.
///
/// Evaluation times may transiently exceed [`horizon`](Self::horizon): the
/// step controller looks ahead of the current time, and near the end of the
/// interval the look-ahead point can land past it. Coefficients must be
/// evaluated by their defining formulas there, not clamped.
pub trait EvolutionProblem {
    /// Action of the operator `A(t)` on interior-node values.
    fn apply_operator(&self, t: f64, u: &GridVector) -> Result<GridVector>;

    /// Grid values of the right-hand side `f(t)`.
    fn source(&self, t: f64) -> GridVector;

    /// Matrix of `I + tau * A(t)`, the system solved by one implicit step.
    ///
    /// Must agree with [`apply_operator`](Self::apply_operator):
    /// applying the returned matrix to `u` has to equal
    /// `u + tau * A(t) u` up to roundoff.
    fn implicit_system(&self, t: f64, tau: f64) -> TriDiagSystem;

    /// Initial state `u(0)`.
    fn initial_state(&self) -> GridVector;

    /// End of the integration interval, `T > 0`.
    fn horizon(&self) -> f64;
}

/// Defect of the implicit relation at time `t` with step `tau`:
/// `(y_new - y_old)/tau + A(t) y_new - f(t)`.
///
/// An exact implicit step drives this to roundoff level; tests use it to
/// confirm each solve.
pub fn residual<P: EvolutionProblem + ?Sized>(
    problem: &P,
    t: f64,
    tau: f64,
    y_new: &GridVector,
    y_old: &GridVector,
) -> Result<GridVector> {
    let rate = y_new.sub(y_old)?.scaled(1.0 / tau);
    let transported = rate.add_scaled(1.0, &problem.apply_operator(t, y_new)?)?;
    transported.sub(&problem.source(t))
}
