//! Dense square matrices and a cyclic Jacobi eigensolver for the symmetric case.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use num_traits::Float;

use crate::error::{Error, Result};

/// Symmetry tolerance accepted by [`eigen_sym`].
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Off-diagonal convergence threshold, relative to the Frobenius norm of the input.
pub const JACOBI_REL_TOL: f64 = 1e-12;
/// Maximum number of cyclic sweeps before [`Error::NoConvergence`].
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Components smaller than this are skipped when fixing eigenvector signs.
pub const SIGN_EPS: f64 = 1e-9;

/// Row-major dense `n x n` matrix.
#[derive(Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds a matrix from rows; every row must have `rows.len()` entries.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.n);
        (0..self.n).map(|i| dot(self.row(i), x)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn norm_frobenius(&self) -> f64 {
        Float::sqrt(self.data.iter().map(|v| v * v).sum::<f64>())
    }

    /// Returns the worst asymmetric pair if it exceeds `tol`.
    pub fn check_symmetric(&self, tol: f64) -> Result<()> {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let gap = (self[(i, j)] - self[(j, i)]).abs();
                if gap > tol || gap.is_nan() {
                    return Err(Error::NotSymmetric { i, j, gap });
                }
            }
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for i in 0..self.n {
            list.entry(&self.row(i));
        }
        list.finish()
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    Float::sqrt(dot(a, a))
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Eigen-decomposition of a symmetric matrix, eigenvalues ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSummary {
    pub eigenvalues: Vec<f64>,
    /// Column `j` is the unit eigenvector for `eigenvalues[j]`.
    pub eigenvectors: SquareMatrix,
    pub source_n: usize,
}

impl SpectralSummary {
    pub fn vector(&self, j: usize) -> Vec<f64> {
        self.eigenvectors.column(j)
    }

    /// Number of eigenvalues with magnitude below `tol`.
    pub fn zero_count(&self, tol: f64) -> usize {
        self.eigenvalues.iter().filter(|v| v.abs() < tol).count()
    }

    /// `max_j ||M v_j - lambda_j v_j||_inf` against the original matrix.
    pub fn max_residual(&self, m: &SquareMatrix) -> f64 {
        (0..self.source_n)
            .map(|j| {
                let v = self.vector(j);
                let mv = m.mul_vec(&v);
                mv.iter()
                    .zip(&v)
                    .map(|(a, b)| (a - self.eigenvalues[j] * b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }
}

/// Full spectrum of a symmetric matrix via cyclic Jacobi rotations.
///
/// Converges once every off-diagonal entry is below `1e-12 * ||m||_F`.
/// Each eigenvector is sign-normalised so that its first component larger
/// than `1e-9` in magnitude is positive.
pub fn eigen_sym(m: &SquareMatrix) -> Result<SpectralSummary> {
    m.check_symmetric(SYMMETRY_TOL)?;
    let n = m.dim();
    let mut a = m.clone();
    let mut v = SquareMatrix::identity(n);
    let threshold = JACOBI_REL_TOL * m.norm_frobenius();

    let mut converged = false;
    for _ in 0..=JACOBI_MAX_SWEEPS {
        if max_off_diagonal(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]).then(i.cmp(&j)));

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = SquareMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvalues.push(a[(src, src)]);
        let sign = (0..n)
            .map(|k| v[(k, src)])
            .find(|c| c.abs() > SIGN_EPS)
            .map_or(1.0, |c| if c < 0.0 { -1.0 } else { 1.0 });
        for k in 0..n {
            eigenvectors[(k, dst)] = sign * v[(k, src)];
        }
    }

    Ok(SpectralSummary {
        eigenvalues,
        eigenvectors,
        source_n: n,
    })
}

fn max_off_diagonal(a: &SquareMatrix) -> f64 {
    let n = a.dim();
    let mut worst = 0.0f64;
    for p in 0..n {
        for q in (p + 1)..n {
            worst = worst.max(a[(p, q)].abs());
        }
    }
    worst
}

fn rotate(a: &mut SquareMatrix, v: &mut SquareMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq == 0.0 {
        return;
    }
    let n = a.dim();
    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + Float::sqrt(theta * theta + 1.0));
    // theta overflows to inf for tiny apq; t is then 0 and the rotation is the identity
    let t = if t.is_finite() { t } else { 0.0 };
    let c = 1.0 / Float::sqrt(t * t + 1.0);
    let s = t * c;

    a[(p, p)] -= t * apq;
    a[(q, q)] += t * apq;
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        let new_kp = c * akp - s * akq;
        let new_kq = s * akp + c * akq;
        a[(k, p)] = new_kp;
        a[(p, k)] = new_kp;
        a[(k, q)] = new_kq;
        a[(q, k)] = new_kq;
    }
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn two_node_laplacian() {
        let m = SquareMatrix::from_rows(&[[2.0, -2.0], [-2.0, 2.0]]).unwrap();
        let s = eigen_sym(&m).unwrap();
        assert_close(s.eigenvalues[0], 0.0, 1e-12);
        assert_close(s.eigenvalues[1], 4.0, 1e-12);
    }

    #[test]
    fn three_node_path_component() {
        let m = SquareMatrix::from_rows(&[[2.0, -2.0, 0.0], [-2.0, 5.0, -3.0], [0.0, -3.0, 3.0]]).unwrap();
        let s = eigen_sym(&m).unwrap();
        // characteristic polynomial: lambda (lambda^2 - 10 lambda + 18)
        assert_close(s.eigenvalues[1], 5.0 - 7.0f64.sqrt(), 1e-12);
        assert!((s.eigenvalues[1] - 2.35).abs() < 0.01);
    }

    #[test]
    fn identity_spectrum() {
        let s = eigen_sym(&SquareMatrix::identity(3)).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn zero_matrix_and_empty() {
        let s = eigen_sym(&SquareMatrix::zeros(3)).unwrap();
        assert_eq!(s.eigenvalues, vec![0.0; 3]);
        let s = eigen_sym(&SquareMatrix::zeros(0)).unwrap();
        assert!(s.eigenvalues.is_empty());
    }

    #[test]
    fn rejects_asymmetric() {
        let m = SquareMatrix::from_rows(&[[1.0, 2.0], [0.0, 1.0]]).unwrap();
        assert!(matches!(eigen_sym(&m), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn sign_convention_first_nonzero_positive() {
        let m = SquareMatrix::from_rows(&[[2.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 2.0]]).unwrap();
        let s = eigen_sym(&m).unwrap();
        for j in 0..3 {
            let v = s.vector(j);
            let first = v.iter().find(|c| c.abs() > SIGN_EPS).unwrap();
            assert!(*first > 0.0);
        }
    }

    #[test]
    fn rejects_non_square_rows() {
        assert!(SquareMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]).is_err());
    }
}
