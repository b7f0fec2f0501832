//! Dense reference computations for tests.
//!
//! Everything here is deliberately naive: dense storage, textbook Gaussian
//! elimination with partial pivoting, direct stencil assembly. The point is to
//! provide an independent route against which the banded production code can
//! be checked, so nothing in this crate may call into it.

/// Multiply a dense matrix (row-major, square) by a vector.
pub fn matvec(matrix: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    assert_eq!(matrix.len(), v.len(), "matrix and vector sizes differ");
    matrix
        .iter()
        .map(|row| {
            assert_eq!(row.len(), v.len(), "matrix is not square");
            row.iter().zip(v).map(|(a, x)| a * x).sum()
        })
        .collect()
}

/// Solve a dense linear system by Gaussian elimination with partial pivoting.
///
/// Panics on a (numerically) singular matrix; this is test support code, so a
/// loud failure is the right behaviour.
pub fn solve_dense(matrix: &[Vec<f64>], rhs: &[f64]) -> Vec<f64> {
    let n = rhs.len();
    assert_eq!(matrix.len(), n, "matrix and rhs sizes differ");
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    let mut b: Vec<f64> = rhs.to_vec();

    for col in 0..n {
        // Partial pivoting: bring the largest remaining entry to the diagonal.
        let pivot_row = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot_row][col].abs() < 1e-300 {
            panic!("singular matrix in dense elimination at column {col}");
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);

        let (pivot_block, rest) = a.split_at_mut(col + 1);
        let pivot_row = &pivot_block[col];
        let (b_done, b_rest) = b.split_at_mut(col + 1);
        let b_pivot = b_done[col];
        for (row, b_row) in rest.iter_mut().zip(b_rest.iter_mut()) {
            let factor = row[col] / pivot_row[col];
            if factor == 0.0 {
                continue;
            }
            for (entry, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *entry -= factor * p;
            }
            *b_row -= factor * b_pivot;
        }
    }

    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut sum = b[row];
        for k in row + 1..n {
            sum -= a[row][k] * x[k];
        }
        x[row] = sum / a[row][row];
    }
    x
}

/// Expand three tridiagonal bands into a dense matrix.
///
/// `lower` and `upper` have length `diag.len() - 1`.
pub fn tridiag_to_dense(lower: &[f64], diag: &[f64], upper: &[f64]) -> Vec<Vec<f64>> {
    let n = diag.len();
    assert_eq!(lower.len() + 1, n);
    assert_eq!(upper.len() + 1, n);
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        m[i][i] = diag[i];
        if i + 1 < n {
            m[i][i + 1] = upper[i];
            m[i + 1][i] = lower[i];
        }
    }
    m
}

/// Dense matrix of the 1D operator -u'' + p*u on a uniform Dirichlet grid
/// with `cells` mesh cells (so `cells - 1` interior unknowns, h = 1/cells).
///
/// Assembled entry by entry from the second-difference stencil; boundary
/// neighbours are dropped, which is the matrix form of extending by zero.
pub fn laplacian_with_reaction(cells: usize, reaction: f64) -> Vec<Vec<f64>> {
    assert!(cells >= 2);
    let n = cells - 1;
    let h = 1.0 / cells as f64;
    let inv_h2 = 1.0 / (h * h);
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        m[i][i] = 2.0 * inv_h2 + reaction;
        if i > 0 {
            m[i][i - 1] = -inv_h2;
        }
        if i + 1 < n {
            m[i][i + 1] = -inv_h2;
        }
    }
    m
}

/// Dense matrix of I + tau * (the operator above).
pub fn implicit_dense(cells: usize, reaction: f64, tau: f64) -> Vec<Vec<f64>> {
    let mut m = laplacian_with_reaction(cells, reaction);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0 + tau * row[i];
        for (j, entry) in row.iter_mut().enumerate() {
            if j != i {
                *entry *= tau;
            }
        }
    }
    m
}

/// Weighted Euclidean norm sqrt(sum u_i^2 * h) used on interior grid values.
pub fn grid_norm(values: &[f64], h: f64) -> f64 {
    (values.iter().map(|v| v * v).sum::<f64>() * h).sqrt()
}

/// SplitMix64: tiny deterministic generator for reproducible random checks.
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in [lo, hi).
    pub fn next_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_known_2x2() {
        // [4 1; 1 3] x = [1; 2]  =>  x = (1/11, 7/11)
        let m = vec![vec![4.0, 1.0], vec![1.0, 3.0]];
        let x = solve_dense(&m, &[1.0, 2.0]);
        assert!((x[0] - 1.0 / 11.0).abs() < 1e-14);
        assert!((x[1] - 7.0 / 11.0).abs() < 1e-14);
    }

    #[test]
    fn elimination_needs_pivoting() {
        // Zero leading entry forces a row swap.
        let m = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        let x = solve_dense(&m, &[3.0, 5.0]);
        assert_eq!(x, vec![5.0, 3.0]);
    }

    #[test]
    fn residual_on_random_system() {
        let mut rng = SplitMix64::new(7);
        let n = 40;
        let m: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            n as f64 + rng.next_f64()
                        } else {
                            rng.next_range(-1.0, 1.0)
                        }
                    })
                    .collect()
            })
            .collect();
        let b: Vec<f64> = (0..n).map(|_| rng.next_range(-1.0, 1.0)).collect();
        let x = solve_dense(&m, &b);
        let r = matvec(&m, &x);
        for (ri, bi) in r.iter().zip(&b) {
            assert!((ri - bi).abs() < 1e-11);
        }
    }

    #[test]
    fn stencil_matrix_matches_hand_computation() {
        // cells = 4, h = 1/4: diagonal 2/h^2 + p = 32 + p, off-diagonal -16.
        let m = laplacian_with_reaction(4, 2.0);
        assert_eq!(m.len(), 3);
        assert_eq!(m[1], vec![-16.0, 34.0, -16.0]);
        assert_eq!(m[0], vec![34.0, -16.0, 0.0]);
    }

    #[test]
    fn splitmix_is_deterministic() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..10 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let x = SplitMix64::new(1).next_f64();
        assert!((0.0..1.0).contains(&x));
    }
}
