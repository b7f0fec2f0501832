//! Experiment definitions and drivers: single adaptive or uniform runs and
//! the delta sweep with its convergence table.

use std::path::PathBuf;
use std::time::Instant;

use taumarch::stepper::{run, run_uniform, RunHistory};
use taumarch::{ControllerConfig, ControllerVariant, InitialCondition};

use crate::output;
use crate::AppError;

#[derive(Debug, Clone, PartialEq)]
pub enum Mode {
    Adaptive,
    Uniform { tau: f64 },
    DeltaSweep { deltas: Vec<f64> },
}

/// Everything one invocation needs: problem, controller, mode, and where
/// the files go.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub preset: Option<String>,
    pub ic: InitialCondition,
    pub cells: usize,
    pub delta: f64,
    pub gamma: f64,
    pub tau_min: f64,
    pub tau_first: f64,
    pub variant: ControllerVariant,
    pub probe_x: f64,
    pub mode: Mode,
    pub output_dir: PathBuf,
}

impl Default for ExperimentSpec {
    /// The canonical smooth-profile experiment (same as the fig1 preset).
    fn default() -> Self {
        Self {
            preset: None,
            ic: InitialCondition::Sine,
            cells: 100,
            delta: 0.1,
            gamma: 1.5,
            tau_min: 1e-6,
            tau_first: 1e-6,
            variant: ControllerVariant::ForwardBackward,
            probe_x: 0.5,
            mode: Mode::Adaptive,
            output_dir: PathBuf::from("."),
        }
    }
}

impl ExperimentSpec {
    /// Overwrite the experiment axes a named preset pins down. Flags given
    /// after `--preset` still override individual values.
    pub fn apply_preset(&mut self, name: &str) -> Result<(), AppError> {
        let base = Self::default();
        *self = Self {
            preset: Some(name.to_string()),
            output_dir: std::mem::take(&mut self.output_dir),
            ..base
        };
        match name {
            "fig1" | "fig2" => {}
            "fig3" => {
                self.mode = Mode::DeltaSweep {
                    deltas: vec![0.1, 0.01, 0.001, 0.0001],
                };
            }
            "fig4" | "fig5" => self.ic = InitialCondition::Hat,
            "fig6" => self.ic = InitialCondition::Constant,
            other => {
                return Err(AppError::Usage(format!(
                    "unknown preset '{other}' (expected fig1..fig6)"
                )))
            }
        }
        Ok(())
    }

    pub fn controller_config(&self) -> Result<ControllerConfig, AppError> {
        Ok(ControllerConfig::new(
            self.delta,
            self.gamma,
            self.tau_min,
            self.tau_first,
            self.variant,
        )?)
    }

    pub fn validate(&self) -> Result<(), AppError> {
        self.controller_config()?;
        if self.cells < 2 {
            return Err(AppError::Usage("--M must be at least 2".into()));
        }
        match &self.mode {
            Mode::Uniform { tau } if !(*tau > 0.0 && tau.is_finite()) => {
                Err(AppError::Usage("--uniform-tau must be positive".into()))
            }
            Mode::DeltaSweep { deltas } => {
                if !deltas.windows(2).all(|w| w[0] > w[1]) {
                    return Err(AppError::Usage(
                        "--delta sweep values must be strictly descending".into(),
                    ));
                }
                if !deltas.iter().all(|d| *d > 0.0 && d.is_finite()) {
                    return Err(AppError::Usage("--delta values must be positive".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn ic_name(&self) -> &'static str {
        match self.ic {
            InitialCondition::Sine => "sine",
            InitialCondition::Hat => "hat",
            InitialCondition::Constant => "const",
        }
    }

    pub fn variant_name(&self) -> &'static str {
        match self.variant {
            ControllerVariant::ForwardBackward => "fb",
            ControllerVariant::StepDoubling => "doubling",
        }
    }

    pub fn mode_name(&self) -> &'static str {
        match self.mode {
            Mode::Adaptive => "adaptive",
            Mode::Uniform { .. } => "uniform",
            Mode::DeltaSweep { .. } => "delta_sweep",
        }
    }
}

/// One row of the sweep's convergence table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub delta: f64,
    pub total_steps: usize,
    pub max_deviation: f64,
}

/// What an invocation produced, for the summary file and the console line.
#[derive(Debug, Clone)]
pub struct Summary {
    pub total_steps: Option<usize>,
    pub final_time: Option<f64>,
    pub runs: Vec<SweepRow>,
    pub wall_time: f64,
}

impl Summary {
    pub fn one_line(&self, spec: &ExperimentSpec) -> String {
        let label = spec
            .preset
            .clone()
            .unwrap_or_else(|| spec.ic_name().to_string());
        match self.total_steps {
            Some(n) => format!(
                "{label}: {n} steps in {:.3} s -> {}",
                self.wall_time,
                spec.output_dir.display()
            ),
            None => format!(
                "{label}: swept {} error levels in {:.3} s -> {}",
                self.runs.len(),
                self.wall_time,
                spec.output_dir.display()
            ),
        }
    }
}

/// Linear interpolation of a probe curve at time `t`; the curves always
/// start at t = 0 and end at the horizon, so queries never extrapolate.
pub fn interpolate(series: &[(f64, f64)], t: f64) -> f64 {
    let idx = series.partition_point(|&(ti, _)| ti < t);
    if idx == 0 {
        return series[0].1;
    }
    if idx >= series.len() {
        return series[series.len() - 1].1;
    }
    let (t0, v0) = series[idx - 1];
    let (t1, v1) = series[idx];
    v0 + (v1 - v0) * (t - t0) / (t1 - t0)
}

/// Largest pointwise distance from `reference`, with `series` interpolated
/// onto the reference times.
pub fn max_probe_deviation(series: &[(f64, f64)], reference: &[(f64, f64)]) -> f64 {
    let mut max = 0.0_f64;
    for &(t, value) in reference {
        max = max.max((interpolate(series, t) - value).abs());
    }
    max
}

/// Run the sweep: one adaptive history per error level, deviations taken
/// against the final (smallest-delta) run.
pub fn sweep_histories(
    spec: &ExperimentSpec,
    deltas: &[f64],
) -> Result<(Vec<RunHistory>, Vec<SweepRow>), AppError> {
    let problem = spec.ic.problem(spec.cells)?;
    let mut histories = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let cfg = ControllerConfig::new(
            delta,
            spec.gamma,
            spec.tau_min,
            spec.tau_first,
            spec.variant,
        )?;
        histories.push(run(&problem, &cfg, spec.probe_x)?);
    }

    let reference = histories
        .last()
        .expect("sweep list is validated non-empty")
        .probe_series();
    let rows = deltas
        .iter()
        .zip(&histories)
        .map(|(&delta, history)| SweepRow {
            delta,
            total_steps: history.total_steps(),
            max_deviation: max_probe_deviation(&history.probe_series(), &reference),
        })
        .collect();
    Ok((histories, rows))
}

/// Execute the experiment and write its files.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Summary, AppError> {
    spec.validate()?;
    let started = Instant::now();

    std::fs::create_dir_all(&spec.output_dir)?;

    let summary = match &spec.mode {
        Mode::Adaptive => {
            let problem = spec.ic.problem(spec.cells)?;
            let cfg = spec.controller_config()?;
            let history = run(&problem, &cfg, spec.probe_x)?;
            output::write_steps_csv(&spec.output_dir.join("steps.csv"), &history)?;
            output::write_probe_csv(&spec.output_dir.join("probe.csv"), &history)?;
            Summary {
                total_steps: Some(history.total_steps()),
                final_time: Some(history.final_time()),
                runs: Vec::new(),
                wall_time: 0.0,
            }
        }
        Mode::Uniform { tau } => {
            let problem = spec.ic.problem(spec.cells)?;
            let history = run_uniform(&problem, *tau, spec.probe_x)?;
            output::write_steps_csv(&spec.output_dir.join("steps.csv"), &history)?;
            output::write_probe_csv(&spec.output_dir.join("probe.csv"), &history)?;
            Summary {
                total_steps: Some(history.total_steps()),
                final_time: Some(history.final_time()),
                runs: Vec::new(),
                wall_time: 0.0,
            }
        }
        Mode::DeltaSweep { deltas } => {
            let (histories, rows) = sweep_histories(spec, deltas)?;
            for (history, row) in histories.iter().zip(&rows) {
                let name = format!("probe_delta_{}.csv", row.delta);
                output::write_probe_csv(&spec.output_dir.join(name), history)?;
            }
            output::write_convergence_csv(&spec.output_dir.join("convergence.csv"), &rows)?;
            Summary {
                total_steps: None,
                final_time: None,
                runs: rows,
                wall_time: 0.0,
            }
        }
    };

    let summary = Summary {
        wall_time: started.elapsed().as_secs_f64(),
        ..summary
    };
    output::write_summary(&spec.output_dir.join("summary.json"), spec, &summary)?;
    Ok(summary)
}
