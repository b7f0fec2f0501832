//! Finite-difference discretization of the one-dimensional parabolic
//! equation u_t - u_xx + p(t) u = f(t) on (0, 1) with homogeneous Dirichlet
//! boundaries, plus the reference test problem driven by the bundled
//! experiments.
//!
//! The grid is uniform with `cells` mesh cells, so there are `cells - 1`
//! interior unknowns and the boundary values are identically zero.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{GridVector, TriDiagSystem};
use crate::problem::EvolutionProblem;

/// Reaction coefficient of the reference problem: ramps as `100 t` up to
/// t = 0.075 (inclusive), then switches off. Past the nominal end of the
/// interval the switched-off branch keeps applying, so look-ahead
/// evaluations beyond it are well defined.
pub fn reaction_coefficient(t: f64) -> f64 {
    if t <= 0.075 {
        100.0 * t
    } else {
        0.0
    }
}

/// Source amplitude of the reference problem: zero up to t = 0.05
/// (inclusive), then `10 exp(-(t - 0.05))`. The exponential branch extends
/// past the nominal end of the interval for the same reason as above.
pub fn source_amplitude(t: f64) -> f64 {
    if t <= 0.05 {
        0.0
    } else {
        10.0 * libm::exp(-(t - 0.05))
    }
}

/// The three initial profiles of the reference problem. They share the
/// coefficients above and differ only in smoothness: `Sine` is a smooth
/// eigenmode, `Hat` has a kink, and `Constant` violates the boundary
/// condition outright (the hardest case for the initial transient).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialCondition {
    Sine,
    Hat,
    Constant,
}

fn sine_profile(x: f64) -> f64 {
    libm::sin(core::f64::consts::PI * x)
}

fn hat_profile(x: f64) -> f64 {
    if x <= 0.5 {
        2.0 * x
    } else {
        1.0 - 2.0 * (x - 0.5)
    }
}

fn constant_profile(_x: f64) -> f64 {
    1.0
}

impl InitialCondition {
    /// The initial profile as a function of x in (0, 1).
    pub fn profile(self) -> fn(f64) -> f64 {
        match self {
            Self::Sine => sine_profile,
            Self::Hat => hat_profile,
            Self::Constant => constant_profile,
        }
    }

    /// Bundle this profile with the reference coefficients on a grid with
    /// `cells` mesh cells and horizon T = 0.1.
    pub fn problem(self, cells: usize) -> Result<Heat1DProblem> {
        Heat1DProblem::new(
            cells,
            reaction_coefficient,
            source_amplitude,
            self.profile(),
            0.1,
        )
    }
}

/// Spatially discretized 1D parabolic problem with a time-dependent
/// reaction coefficient and a spatially constant source.
#[derive(Debug, Clone)]
pub struct Heat1DProblem {
    cells: usize,
    h: f64,
    reaction: fn(f64) -> f64,
    source_amplitude: fn(f64) -> f64,
    initial: fn(f64) -> f64,
    horizon: f64,
}

impl Heat1DProblem {
    /// A grid with `cells` mesh cells on (0, 1), so `h = 1/cells` and
    /// `cells - 1` interior unknowns. Needs `cells >= 2` and a positive
    /// horizon.
    pub fn new(
        cells: usize,
        reaction: fn(f64) -> f64,
        source_amplitude: fn(f64) -> f64,
        initial: fn(f64) -> f64,
        horizon: f64,
    ) -> Result<Self> {
        if cells < 2 {
            return Err(Error::InvalidConfig("grid needs at least 2 mesh cells"));
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::InvalidConfig("horizon must be positive and finite"));
        }
        Ok(Self {
            cells,
            h: 1.0 / cells as f64,
            reaction,
            source_amplitude,
            initial,
            horizon,
        })
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn mesh_width(&self) -> f64 {
        self.h
    }

    fn interior(&self) -> usize {
        self.cells - 1
    }
}

impl EvolutionProblem for Heat1DProblem {
    /// Second-difference stencil plus reaction:
    /// `(A u)(x) = -(u(x+h) - 2 u(x) + u(x-h)) / h^2 + p(t) u(x)`,
    /// with out-of-range neighbours treated as zero.
    fn apply_operator(&self, t: f64, u: &GridVector) -> Result<GridVector> {
        let n = self.interior();
        if u.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: u.len(),
            });
        }
        let p = (self.reaction)(t);
        let inv_h2 = 1.0 / (self.h * self.h);
        let x = u.values();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let left = if i > 0 { x[i - 1] } else { 0.0 };
            let right = if i + 1 < n { x[i + 1] } else { 0.0 };
            out.push(-(right - 2.0 * x[i] + left) * inv_h2 + p * x[i]);
        }
        Ok(GridVector::from_computed(out, self.h))
    }

    fn source(&self, t: f64) -> GridVector {
        let amplitude = (self.source_amplitude)(t);
        GridVector::constant(amplitude, self.interior(), self.h)
            .expect("interior size and mesh width are valid by construction")
    }

    fn implicit_system(&self, t: f64, tau: f64) -> TriDiagSystem {
        let n = self.interior();
        let p = (self.reaction)(t);
        let inv_h2 = 1.0 / (self.h * self.h);
        let diag_value = 1.0 + tau * (2.0 * inv_h2 + p);
        let off_value = -tau * inv_h2;
        TriDiagSystem::new(
            alloc::vec![off_value; n - 1],
            alloc::vec![diag_value; n],
            alloc::vec![off_value; n - 1],
        )
        .expect("band lengths are consistent by construction")
    }

    fn initial_state(&self) -> GridVector {
        let values = (1..self.cells)
            .map(|i| (self.initial)(i as f64 * self.h))
            .collect();
        GridVector::new(values, self.h).expect("initial profile must be finite on the grid")
    }

    fn horizon(&self) -> f64 {
        self.horizon
    }
}

/// Eigenvalue of the discrete Dirichlet second-difference operator for the
/// mode sin(k pi x): `4/h^2 * sin^2(k pi h / 2)`.
pub fn laplacian_eigenvalue(cells: usize, k: usize) -> f64 {
    let h = 1.0 / cells as f64;
    let s = libm::sin(0.5 * core::f64::consts::PI * k as f64 * h);
    4.0 / (h * h) * s * s
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn reaction_branches() {
        assert_eq!(reaction_coefficient(0.05), 5.0);
        // the boundary point belongs to the ramp branch
        assert_eq!(reaction_coefficient(0.075), 7.5);
        assert_eq!(reaction_coefficient(0.08), 0.0);
        // extension past the nominal horizon keeps the switched-off branch
        assert_eq!(reaction_coefficient(0.11), 0.0);
    }

    #[test]
    fn source_branches() {
        assert_eq!(source_amplitude(0.04), 0.0);
        // the boundary point belongs to the quiet branch
        assert_eq!(source_amplitude(0.05), 0.0);
        let expected = 10.0 * libm::exp(-0.01);
        assert!((source_amplitude(0.06) - expected).abs() < 1e-14);
        assert!((source_amplitude(0.06) - 9.90050).abs() < 1e-5);
        // extension past the nominal horizon keeps the exponential branch
        let extended = 10.0 * libm::exp(-0.06);
        assert!((source_amplitude(0.11) - extended).abs() < 1e-14);
    }

    #[test]
    fn sine_mode_is_an_eigenvector() {
        let problem = Heat1DProblem::new(4, |_| 0.0, |_| 0.0, sine_profile, 1.0).unwrap();
        let u = problem.initial_state();
        let au = problem.apply_operator(0.0, &u).unwrap();
        let lambda = laplacian_eigenvalue(4, 1);
        assert!((lambda - 9.37258).abs() < 1e-5);
        for i in 0..u.len() {
            assert!((au[i] - lambda * u[i]).abs() < 1e-12 * lambda);
        }
    }

    #[test]
    fn operator_annihilates_zero() {
        let problem = InitialCondition::Sine.problem(8).unwrap();
        let zero = GridVector::zeros(7, problem.mesh_width()).unwrap();
        let az = problem.apply_operator(0.03, &zero).unwrap();
        assert!(az.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn stencil_on_ones_with_reaction() {
        // cells = 4, h = 1/4: interior ones, p = 2. The middle node sees a
        // flat neighbourhood, the edge nodes see the zero boundary.
        let problem = Heat1DProblem::new(4, |_| 2.0, |_| 0.0, constant_profile, 1.0).unwrap();
        let u = problem.initial_state();
        let au = problem.apply_operator(0.7, &u).unwrap();
        assert_eq!(au.values(), &[18.0, 2.0, 18.0]);

        let dense = dense_ref::laplacian_with_reaction(4, 2.0);
        let au_ref = dense_ref::matvec(&dense, u.values());
        assert_eq!(au.values(), au_ref.as_slice());
    }

    #[test]
    fn initial_states_sample_the_profiles() {
        let sine = InitialCondition::Sine.problem(4).unwrap().initial_state();
        assert!((sine[0] - libm::sin(PI / 4.0)).abs() < 1e-15);
        assert!((sine[1] - 1.0).abs() < 1e-15);
        assert!((sine[2] - libm::sin(3.0 * PI / 4.0)).abs() < 1e-15);

        let hat = InitialCondition::Hat.problem(4).unwrap().initial_state();
        assert_eq!(hat.values(), &[0.5, 1.0, 0.5]);

        let ones = InitialCondition::Constant
            .problem(10)
            .unwrap()
            .initial_state();
        assert!(ones.values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn operator_rejects_wrong_length() {
        let problem = InitialCondition::Sine.problem(8).unwrap();
        let wrong = GridVector::zeros(3, problem.mesh_width()).unwrap();
        assert!(matches!(
            problem.apply_operator(0.0, &wrong),
            Err(Error::LengthMismatch {
                expected: 7,
                found: 3
            })
        ));
    }

    #[test]
    fn reaction_stays_nonnegative_over_extended_interval() {
        // sampled check, including the look-ahead region past the horizon
        for i in 0..=2000 {
            let t = i as f64 * (0.15 / 2000.0);
            assert!(reaction_coefficient(t) >= 0.0);
        }
    }
}
