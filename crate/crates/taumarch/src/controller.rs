//! A-priori time-step selection.
//!
//! The next step is computed by explicit formulas from the two latest time
//! levels: three non-negative terms measure how much the operator, the
//! source, and the solution itself are moving, and their sum is compared
//! against the prescribed error level. There is no solve-then-reject loop;
//! the proposed step is always taken.

use crate::error::{Error, Result};
use crate::linalg::GridVector;
use crate::problem::EvolutionProblem;

/// Which diagnostic derivation backs the correcting coefficient. Both lead
/// to the same formula up to a constant factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ControllerVariant {
    /// Explicit step forward, implicit step back, compare with the starting
    /// level.
    ForwardBackward,
    /// One explicit step against two half steps; scales the correcting
    /// coefficient by exactly 4.
    StepDoubling,
}

/// Parameters of the step controller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControllerConfig {
    /// Prescribed error level per unit time.
    pub delta: f64,
    /// Maximum growth factor between consecutive steps; must exceed 1. Also
    /// sets the look-ahead distance for the shifted evaluations.
    pub gamma: f64,
    /// Smallest admissible step.
    pub tau_min: f64,
    /// Prescribed first step (the controller needs two levels to engage).
    pub tau_first: f64,
    pub variant: ControllerVariant,
}

impl ControllerConfig {
    pub fn new(
        delta: f64,
        gamma: f64,
        tau_min: f64,
        tau_first: f64,
        variant: ControllerVariant,
    ) -> Result<Self> {
        let cfg = Self {
            delta,
            gamma,
            tau_min,
            tau_first,
            variant,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::InvalidConfig("delta must be positive and finite"));
        }
        if !(self.gamma > 1.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidConfig("gamma must exceed 1"));
        }
        if !(self.tau_min > 0.0 && self.tau_min.is_finite()) {
            return Err(Error::InvalidConfig("tau0 must be positive and finite"));
        }
        if !(self.tau_first >= self.tau_min && self.tau_first.is_finite()) {
            return Err(Error::InvalidConfig("tau1 must be at least tau0"));
        }
        Ok(())
    }
}

/// Outcome of one step proposal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepDiagnostics {
    /// Operator drift over the look-ahead window, scaled by 1/gamma.
    pub s1: f64,
    /// Source drift over the look-ahead window, scaled by 1/gamma.
    pub s2: f64,
    /// Operator response to the latest solution increment.
    pub s3: f64,
    /// Correcting coefficient delta / (s1 + s2 + s3); infinite when the sum
    /// vanishes, in which case the growth cap decides alone.
    pub gamma_corr: f64,
    /// The selected next step.
    pub tau_next: f64,
}

/// The three correcting terms at the current level `t` reached by step
/// `tau_prev`, with the look-ahead point `t + gamma * tau_prev`:
///
/// - `s1 = (1/gamma) * ||(A(t~) - A(t)) y||`
/// - `s2 = (1/gamma) * ||f(t~) - f(t)||`
/// - `s3 = ||A(t~) (y - y_prev)||`
///
/// Computed matrix-free from three operator applications.
pub fn correcting_terms<P: EvolutionProblem + ?Sized>(
    problem: &P,
    t: f64,
    tau_prev: f64,
    y_curr: &GridVector,
    y_prev: &GridVector,
    cfg: &ControllerConfig,
) -> Result<(f64, f64, f64)> {
    let t_ahead = t + cfg.gamma * tau_prev;

    let drift = problem
        .apply_operator(t_ahead, y_curr)?
        .sub(&problem.apply_operator(t, y_curr)?)?;
    let s1 = drift.norm() / cfg.gamma;

    let s2 = problem.source(t_ahead).sub(&problem.source(t))?.norm() / cfg.gamma;

    let increment = y_curr.sub(y_prev)?;
    let s3 = problem.apply_operator(t_ahead, &increment)?.norm();

    Ok((s1, s2, s3))
}

/// Select the next step from the correcting terms:
/// `tau_next = max(tau_min, min(gamma, gamma_corr) * tau_prev)`.
///
/// The step-doubling variant multiplies the correcting coefficient by
/// exactly 4 and changes nothing else.
pub fn propose_step(
    s1: f64,
    s2: f64,
    s3: f64,
    tau_prev: f64,
    cfg: &ControllerConfig,
) -> StepDiagnostics {
    debug_assert!(tau_prev >= cfg.tau_min);

    // The terms are norms, hence non-negative. A NaN (from a misbehaving
    // problem) makes the comparison below false and falls back to the growth
    // cap, leaving divergence detection to the stepper.
    let sum = s1 + s2 + s3;
    let base = if sum > 0.0 {
        cfg.delta / sum
    } else {
        f64::INFINITY
    };
    let gamma_corr = match cfg.variant {
        ControllerVariant::ForwardBackward => base,
        ControllerVariant::StepDoubling => 4.0 * base,
    };
    let factor = if gamma_corr < cfg.gamma {
        gamma_corr
    } else {
        cfg.gamma
    };
    let tau_next = (factor * tau_prev).max(cfg.tau_min);

    StepDiagnostics {
        s1,
        s2,
        s3,
        gamma_corr,
        tau_next,
    }
}

/// Diagnostic behind the forward/backward derivation: take one explicit
/// step from `y` at `t` to `t_next` of size `tau`, run the implicit relation
/// backwards by explicit evaluation, and return the difference from `y`.
///
/// Algebraically this equals
/// `tau (A(t_next) - A(t)) y - tau (f(t_next) - f(t)) + tau^2 A(t_next) (f(t) - A(t) y)`,
/// which tests verify to roundoff.
pub fn forward_backward_gap<P: EvolutionProblem + ?Sized>(
    problem: &P,
    t: f64,
    t_next: f64,
    tau: f64,
    y: &GridVector,
) -> Result<GridVector> {
    // Explicit step forward: v_next = y - tau (A(t) y - f(t)).
    let slope = problem.apply_operator(t, y)?.sub(&problem.source(t))?;
    let v_next = y.add_scaled(-tau, &slope)?;

    // Implicit relation rearranged for the previous level:
    // v = v_next + tau (A(t_next) v_next - f(t_next)).
    let back_slope = problem
        .apply_operator(t_next, &v_next)?
        .sub(&problem.source(t_next))?;
    let v = v_next.add_scaled(tau, &back_slope)?;

    v.sub(y)
}

/// Diagnostic behind the step-doubling derivation: compare one explicit
/// step of size `tau` with two explicit steps of size `tau/2` (coefficients
/// evaluated at `t` and `t + tau/2`), returning the difference.
///
/// Algebraically this equals
/// `(tau/2) (A(t+tau/2) - A(t)) y - (tau/2) (f(t+tau/2) - f(t))
///  + (tau^2/4) A(t+tau/2) (f(t) - A(t) y)`.
pub fn step_doubling_gap<P: EvolutionProblem + ?Sized>(
    problem: &P,
    t: f64,
    tau: f64,
    y: &GridVector,
) -> Result<GridVector> {
    let slope = problem.apply_operator(t, y)?.sub(&problem.source(t))?;

    // Whole step.
    let v_next = y.add_scaled(-tau, &slope)?;

    // Two half steps; the second evaluates the coefficients at the midpoint.
    let half = 0.5 * tau;
    let w_mid = y.add_scaled(-half, &slope)?;
    let t_mid = t + half;
    let mid_slope = problem
        .apply_operator(t_mid, &w_mid)?
        .sub(&problem.source(t_mid))?;
    let w_next = w_mid.add_scaled(-half, &mid_slope)?;

    v_next.sub(&w_next)
}
