//! Implicit time marching from t = 0 to the horizon, with the controller
//! choosing every step after the first.

use alloc::vec::Vec;

use crate::controller::{correcting_terms, propose_step, ControllerConfig};
use crate::error::{Error, Result};
use crate::linalg::GridVector;
use crate::problem::EvolutionProblem;

/// Slack for the solution-norm bound check; one implicit solve on a
/// diagonally dominant system loses far less than this.
const STABILITY_RTOL: f64 = 1e-10;

/// One accepted step. The correcting terms and coefficient are the ones
/// that produced this step's size (evaluated at the previous level); the
/// first step is prescribed by configuration, so its diagnostics are NaN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    /// Step counter, starting at 1.
    pub n: usize,
    /// Time reached by this step.
    pub t: f64,
    /// Size of this step.
    pub tau: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub gamma_corr: f64,
    /// Solution value at the probe node after this step.
    pub probe: f64,
}

/// Complete record of one marching run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunHistory {
    /// Probe location (an interior grid node).
    pub probe_x: f64,
    /// Initial value at the probe node, the t = 0 point of the probe curve.
    pub initial_probe: f64,
    /// One record per accepted step, in order.
    pub records: Vec<StepRecord>,
}

impl RunHistory {
    /// Number of accepted steps.
    pub fn total_steps(&self) -> usize {
        self.records.len()
    }

    pub fn final_time(&self) -> f64 {
        self.records.last().map_or(0.0, |r| r.t)
    }

    /// The probe curve (t, u(probe_x)) including the initial point.
    pub fn probe_series(&self) -> Vec<(f64, f64)> {
        let mut series = Vec::with_capacity(self.records.len() + 1);
        series.push((0.0, self.initial_probe));
        series.extend(self.records.iter().map(|r| (r.t, r.probe)));
        series
    }
}

/// One implicit step to time `t_next` of size `tau`: solves
/// `(I + tau A(t_next)) y_next = y + tau f(t_next)`.
pub fn implicit_step<P: EvolutionProblem + ?Sized>(
    problem: &P,
    t_next: f64,
    tau: f64,
    y: &GridVector,
) -> Result<GridVector> {
    let rhs = y.add_scaled(tau, &problem.source(t_next))?;
    problem.implicit_system(t_next, tau).solve(&rhs)
}

/// Locate the interior node index matching `probe_x`, or fail: probing is
/// exact, never interpolated.
fn probe_index(state: &GridVector, probe_x: f64) -> Result<usize> {
    let h = state.mesh_width();
    let position = probe_x / h;
    let i = libm::round(position);
    if (position - i).abs() > 1e-9 || i < 1.0 || i > state.len() as f64 {
        return Err(Error::ProbeOffGrid { x: probe_x, h });
    }
    Ok(i as usize - 1)
}

/// Bookkeeping shared by the adaptive and uniform drivers.
struct March<'p, P: ?Sized> {
    problem: &'p P,
    horizon: f64,
    probe: usize,
    /// Running bound on the solution norm: ||u0|| plus the accumulated
    /// tau * ||f|| contributions. A non-negative operator keeps every level
    /// under it.
    norm_budget: f64,
    records: Vec<StepRecord>,
}

impl<'p, P: EvolutionProblem + ?Sized> March<'p, P> {
    fn new(problem: &'p P, u0: &GridVector, probe_x: f64) -> Result<Self> {
        let horizon = problem.horizon();
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::InvalidConfig(
                "problem horizon must be positive and finite",
            ));
        }
        Ok(Self {
            problem,
            horizon,
            probe: probe_index(u0, probe_x)?,
            norm_budget: u0.norm(),
            records: Vec::new(),
        })
    }

    /// Advance one step, record it, and enforce the divergence guard and
    /// the solution-norm bound.
    fn advance(
        &mut self,
        y: &GridVector,
        t_next: f64,
        tau: f64,
        terms: (f64, f64, f64),
        gamma_corr: f64,
    ) -> Result<GridVector> {
        let source = self.problem.source(t_next);
        let rhs = y.add_scaled(tau, &source)?;
        let y_next = self.problem.implicit_system(t_next, tau).solve(&rhs)?;

        let n = self.records.len() + 1;
        if !y_next.is_finite() {
            return Err(Error::Diverged {
                step: n,
                time: t_next,
            });
        }

        self.norm_budget += tau * source.norm();
        let norm = y_next.norm();
        assert!(
            norm <= self.norm_budget * (1.0 + STABILITY_RTOL) + 1e-12,
            "solution norm {norm} exceeds the stability bound {} at step {n}; \
             the problem operator must be non-negative",
            self.norm_budget,
        );

        self.records.push(StepRecord {
            n,
            t: t_next,
            tau,
            s1: terms.0,
            s2: terms.1,
            s3: terms.2,
            gamma_corr,
            probe: y_next[self.probe],
        });
        Ok(y_next)
    }
}

/// March with the a-priori step controller. The first step is
/// `cfg.tau_first`; each later step comes from the correcting terms at the
/// latest two levels. The final step is truncated to land exactly on the
/// horizon (exempt from the floor).
pub fn run<P: EvolutionProblem + ?Sized>(
    problem: &P,
    cfg: &ControllerConfig,
    probe_x: f64,
) -> Result<RunHistory> {
    cfg.validate()?;
    let u0 = problem.initial_state();
    let mut march = March::new(problem, &u0, probe_x)?;
    let initial_probe = u0[march.probe];
    let nan = f64::NAN;

    // Prescribed first step (truncated if it already overshoots).
    let (tau_first, t_first) = if cfg.tau_first >= march.horizon {
        (march.horizon, march.horizon)
    } else {
        (cfg.tau_first, cfg.tau_first)
    };
    let mut y = march.advance(&u0, t_first, tau_first, (nan, nan, nan), nan)?;
    let mut y_prev = u0;
    let mut t = t_first;
    let mut tau_prev = tau_first;

    while t < march.horizon {
        let (s1, s2, s3) = correcting_terms(problem, t, tau_prev, &y, &y_prev, cfg)?;
        let diag = propose_step(s1, s2, s3, tau_prev, cfg);

        let remaining = march.horizon - t;
        let (tau, t_next) = if diag.tau_next >= remaining {
            (remaining, march.horizon)
        } else {
            (diag.tau_next, t + diag.tau_next)
        };
        if t_next <= t {
            return Err(Error::InvalidConfig(
                "time step too small to advance the clock",
            ));
        }

        let y_next = march.advance(&y, t_next, tau, (s1, s2, s3), diag.gamma_corr)?;
        y_prev = core::mem::replace(&mut y, y_next);
        t = t_next;
        tau_prev = tau;
    }

    Ok(RunHistory {
        probe_x,
        initial_probe,
        records: march.records,
    })
}

/// Fixed-step comparison marching; the last step is truncated (or
/// stretched within one part in 10^9) to land exactly on the horizon.
pub fn run_uniform<P: EvolutionProblem + ?Sized>(
    problem: &P,
    tau: f64,
    probe_x: f64,
) -> Result<RunHistory> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidConfig(
            "uniform step must be positive and finite",
        ));
    }
    let u0 = problem.initial_state();
    let mut march = March::new(problem, &u0, probe_x)?;
    let initial_probe = u0[march.probe];
    let nan = f64::NAN;

    let mut y = u0;
    let mut t = 0.0;
    while t < march.horizon {
        let remaining = march.horizon - t;
        // Snap to the horizon when one nominal step (almost) covers the
        // remainder, so cumulative roundoff cannot manufacture a final
        // micro-step.
        let (step, t_next) = if remaining <= tau * (1.0 + 1e-9) {
            (remaining, march.horizon)
        } else {
            (tau, t + tau)
        };
        if t_next <= t {
            return Err(Error::InvalidConfig(
                "time step too small to advance the clock",
            ));
        }
        y = march.advance(&y, t_next, step, (nan, nan, nan), nan)?;
        t = t_next;
    }

    Ok(RunHistory {
        probe_x,
        initial_probe,
        records: march.records,
    })
}
