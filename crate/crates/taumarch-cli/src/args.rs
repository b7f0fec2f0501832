//! Flag parsing. Deliberately hand-rolled: the exit-code contract wants a
//! single-line diagnostic on stderr for any bad invocation, and the flag
//! set is small.

use std::path::PathBuf;

use taumarch::{ControllerVariant, InitialCondition};

use crate::experiment::{ExperimentSpec, Mode};
use crate::AppError;

pub const USAGE: &str = "\
taumarch - implicit time marching with a-priori step selection

USAGE:
    taumarch [OPTIONS]

OPTIONS:
    --preset NAME      named experiment: fig1/fig2 (sine profile),
                       fig3 (delta sweep on the sine profile),
                       fig4/fig5 (hat profile), fig6 (constant profile)
    --ic KIND          initial profile: sine | hat | const
    --delta LIST       error level; a comma-separated descending list
                       switches to a sweep with the last entry as the
                       reference run
    --gamma F          step growth cap, must exceed 1
    --tau0 F           minimum time step
    --tau1 F           first time step (at least tau0)
    --M N              number of mesh cells (N >= 2)
    --variant KIND     step rule: fb (forward/backward) | doubling
    --uniform-tau F    fixed-step run with the given step instead of the
                       adaptive controller
    --probe-x F        probe location; must be an interior grid node
    --out DIR          output directory (created if missing)
    -h, --help         print this help

Defaults match the fig1 preset: sine profile, delta 0.1, gamma 1.5,
tau0 = tau1 = 1e-6, M = 100, probe at 0.5, output to the current
directory.

OUTPUT FILES:
    steps.csv                n,t_n,tau_n,s1,s2,s3,gamma_corr
    probe.csv                t_n,u_probe
    summary.json             run parameters, step count, wall time
    probe_delta_<d>.csv      per-delta probe curves (sweep mode)
    convergence.csv          delta,total_steps,max_deviation (sweep mode)

EXIT CODES:
    0  success    1  invalid arguments    2  solver failure    3  I/O failure
";

pub enum Invocation {
    Help,
    Run(ExperimentSpec),
}

fn parse_f64(flag: &str, value: &str) -> Result<f64, AppError> {
    value
        .parse::<f64>()
        .map_err(|_| AppError::Usage(format!("{flag} expects a number, got '{value}'")))
}

fn parse_delta_list(value: &str) -> Result<Vec<f64>, AppError> {
    let deltas: Result<Vec<f64>, AppError> = value
        .split(',')
        .map(|part| parse_f64("--delta", part.trim()))
        .collect();
    let deltas = deltas?;
    if deltas.is_empty() {
        return Err(AppError::Usage("--delta expects at least one value".into()));
    }
    Ok(deltas)
}

pub fn parse(argv: &[String]) -> Result<Invocation, AppError> {
    let mut spec = ExperimentSpec::default();
    let mut deltas: Option<Vec<f64>> = None;
    let mut uniform_tau: Option<f64> = None;

    let mut iter = argv.iter();
    let next_value =
        |flag: &str, iter: &mut std::slice::Iter<String>| -> Result<String, AppError> {
            iter.next()
                .cloned()
                .ok_or_else(|| AppError::Usage(format!("{flag} expects a value")))
        };

    while let Some(arg) = iter.next() {
        match arg.as_str() {
            "-h" | "--help" => return Ok(Invocation::Help),
            "--preset" => {
                let name = next_value("--preset", &mut iter)?;
                spec.apply_preset(&name)?;
            }
            "--ic" => {
                let kind = next_value("--ic", &mut iter)?;
                spec.ic = match kind.as_str() {
                    "sine" => InitialCondition::Sine,
                    "hat" => InitialCondition::Hat,
                    "const" => InitialCondition::Constant,
                    other => {
                        return Err(AppError::Usage(format!(
                            "--ic expects sine, hat or const, got '{other}'"
                        )))
                    }
                };
            }
            "--delta" => {
                let list = parse_delta_list(&next_value("--delta", &mut iter)?)?;
                deltas = Some(list);
            }
            "--gamma" => spec.gamma = parse_f64("--gamma", &next_value("--gamma", &mut iter)?)?,
            "--tau0" => spec.tau_min = parse_f64("--tau0", &next_value("--tau0", &mut iter)?)?,
            "--tau1" => spec.tau_first = parse_f64("--tau1", &next_value("--tau1", &mut iter)?)?,
            "--M" => {
                let value = next_value("--M", &mut iter)?;
                spec.cells = value.parse::<usize>().map_err(|_| {
                    AppError::Usage(format!("--M expects an integer, got '{value}'"))
                })?;
            }
            "--variant" => {
                let kind = next_value("--variant", &mut iter)?;
                spec.variant = match kind.as_str() {
                    "fb" => ControllerVariant::ForwardBackward,
                    "doubling" => ControllerVariant::StepDoubling,
                    other => {
                        return Err(AppError::Usage(format!(
                            "--variant expects fb or doubling, got '{other}'"
                        )))
                    }
                };
            }
            "--uniform-tau" => {
                uniform_tau = Some(parse_f64(
                    "--uniform-tau",
                    &next_value("--uniform-tau", &mut iter)?,
                )?)
            }
            "--probe-x" => {
                spec.probe_x = parse_f64("--probe-x", &next_value("--probe-x", &mut iter)?)?
            }
            "--out" => spec.output_dir = PathBuf::from(next_value("--out", &mut iter)?),
            other => {
                return Err(AppError::Usage(format!(
                    "unknown flag '{other}' (try --help)"
                )))
            }
        }
    }

    // Explicit flags override whatever the preset chose.
    match (uniform_tau, deltas) {
        (Some(_), Some(list)) if list.len() > 1 => {
            return Err(AppError::Usage(
                "--uniform-tau cannot be combined with a --delta sweep".into(),
            ))
        }
        (Some(tau), list) => {
            if let Some(list) = list {
                spec.delta = list[0];
            }
            spec.mode = Mode::Uniform { tau };
        }
        (None, Some(list)) => {
            if list.len() == 1 {
                spec.delta = list[0];
                spec.mode = Mode::Adaptive;
            } else {
                spec.delta = list[0];
                spec.mode = Mode::DeltaSweep { deltas: list };
            }
        }
        (None, None) => {}
    }

    spec.validate()?;
    Ok(Invocation::Run(spec))
}
