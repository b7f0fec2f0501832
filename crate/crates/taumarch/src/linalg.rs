//! Grid vectors with the mesh-weighted inner product, and a direct
//! tridiagonal solver (Thomas algorithm).
//!
//! Values live on the interior nodes of a uniform grid; boundary values are
//! identically zero and never stored, so an out-of-range neighbour simply
//! contributes nothing.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Index;

use crate::error::{Error, Result};

/// Relative pivot tolerance for singularity detection. The systems solved
/// here are diagonally dominant by construction, so this only guards
/// programmer error.
const PIVOT_RTOL: f64 = 1e-14;

/// Values of a grid function on the interior nodes, together with the mesh
/// width `h` that weights the inner product.
#[derive(Debug, Clone, PartialEq)]
pub struct GridVector {
    values: Vec<f64>,
    h: f64,
}

impl GridVector {
    /// Wrap interior-node values. Fails on an empty vector, non-finite
    /// entries, or a non-positive mesh width.
    pub fn new(values: Vec<f64>, h: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidValue("grid vector must not be empty"));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidValue("grid vector entries must be finite"));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidValue(
                "mesh width must be positive and finite",
            ));
        }
        Ok(Self { values, h })
    }

    /// Vector with every interior value equal to `value`.
    pub fn constant(value: f64, len: usize, h: f64) -> Result<Self> {
        Self::new(vec![value; len], h)
    }

    pub fn zeros(len: usize, h: f64) -> Result<Self> {
        Self::constant(0.0, len, h)
    }

    /// Internal constructor for values produced by arithmetic on already
    /// validated inputs.
    pub(crate) fn from_computed(values: Vec<f64>, h: f64) -> Self {
        debug_assert!(!values.is_empty());
        Self { values, h }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // non-empty by construction
    }

    pub fn mesh_width(&self) -> f64 {
        self.h
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        if self.h != other.h {
            return Err(Error::MeshWidthMismatch {
                expected: self.h,
                found: other.h,
            });
        }
        Ok(())
    }

    /// Mesh-weighted inner product: sum of u(x) v(x) h over interior nodes.
    pub fn inner_product(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(u, v)| u * v)
            .sum::<f64>()
            * self.h)
    }

    /// Mesh-weighted norm, `sqrt((u, u))`.
    pub fn norm(&self) -> f64 {
        let sq = self
            .inner_product(self)
            .expect("a vector is always compatible with itself");
        libm::sqrt(sq)
    }

    /// `self - other`.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self::from_computed(values, self.h))
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, factor: f64, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + factor * b)
            .collect();
        Ok(Self::from_computed(values, self.h))
    }

    /// `factor * self`.
    pub fn scaled(&self, factor: f64) -> Self {
        let values = self.values.iter().map(|a| factor * a).collect();
        Self::from_computed(values, self.h)
    }
}

impl Index<usize> for GridVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

/// Tridiagonal matrix stored as three bands. `lower` and `upper` have one
/// entry less than `diag`; a system of size 1 has empty off-diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct TriDiagSystem {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
}

impl TriDiagSystem {
    pub fn new(lower: Vec<f64>, diag: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidValue("system must have size at least 1"));
        }
        if lower.len() + 1 != diag.len() {
            return Err(Error::LengthMismatch {
                expected: diag.len() - 1,
                found: lower.len(),
            });
        }
        if upper.len() + 1 != diag.len() {
            return Err(Error::LengthMismatch {
                expected: diag.len() - 1,
                found: upper.len(),
            });
        }
        let finite = |band: &[f64]| band.iter().all(|v| v.is_finite());
        if !(finite(&lower) && finite(&diag) && finite(&upper)) {
            return Err(Error::InvalidValue("matrix entries must be finite"));
        }
        Ok(Self { lower, diag, upper })
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Matrix-vector product; the result inherits the mesh width of `u`.
    pub fn apply(&self, u: &GridVector) -> Result<GridVector> {
        let n = self.size();
        if u.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: u.len(),
            });
        }
        let x = u.values();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut v = self.diag[i] * x[i];
            if i > 0 {
                v += self.lower[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                v += self.upper[i] * x[i + 1];
            }
            out.push(v);
        }
        Ok(GridVector::from_computed(out, u.mesh_width()))
    }

    /// Solve `self * x = rhs` by forward elimination and back substitution.
    ///
    /// Reports a singular system when a pivot falls below `PIVOT_RTOL`
    /// times the largest diagonal entry, naming the offending row.
    pub fn solve(&self, rhs: &GridVector) -> Result<GridVector> {
        let n = self.size();
        if rhs.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: rhs.len(),
            });
        }
        let max_diag = self.diag.iter().fold(0.0_f64, |m, d| m.max(d.abs()));
        let tol = PIVOT_RTOL * max_diag;

        // Forward sweep: c_prime holds the scaled upper band, x the scaled
        // right-hand side (and ultimately the solution).
        let b = rhs.values();
        let mut c_prime = vec![0.0; n.saturating_sub(1)];
        let mut x = vec![0.0; n];

        let mut pivot = self.diag[0];
        if pivot.abs() <= tol {
            return Err(Error::SingularPivot { index: 0 });
        }
        if n > 1 {
            c_prime[0] = self.upper[0] / pivot;
        }
        x[0] = b[0] / pivot;

        for i in 1..n {
            pivot = self.diag[i] - self.lower[i - 1] * c_prime[i - 1];
            if pivot.abs() <= tol {
                return Err(Error::SingularPivot { index: i });
            }
            if i + 1 < n {
                c_prime[i] = self.upper[i] / pivot;
            }
            x[i] = (b[i] - self.lower[i - 1] * x[i - 1]) / pivot;
        }

        for i in (0..n - 1).rev() {
            x[i] -= c_prime[i] * x[i + 1];
        }
        Ok(GridVector::from_computed(x, rhs.mesh_width()))
    }
}
