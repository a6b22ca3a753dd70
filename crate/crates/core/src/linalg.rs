//! Dense real linear algebra on top of `nalgebra`: the standard symplectic
//! structure, the matrix exponential and a few spectral helpers.

use alloc::vec::Vec;

use libm::{ceil, log2, pow};
use nalgebra::DMatrix;
use thiserror::Error;

pub type Matrix = DMatrix<f64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("expected a square matrix of even size, got {rows}x{cols}")]
    NotEvenSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
}

/// `J₀ = [[0, -I], [I, 0]]` of size `2n`.
pub fn j0(n: usize) -> Matrix {
    let mut j = Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = -1.0;
        j[(n + i, i)] = 1.0;
    }
    j
}

/// `ω₀(x, y) = (J₀x)ᵀ y`.
pub fn omega0(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() / 2;
    (0..n).map(|i| -x[n + i] * y[i] + x[i] * y[n + i]).sum()
}

/// Half the size of a `2n x 2n` matrix.
pub fn half_dim(m: &Matrix) -> Result<usize, LinalgError> {
    if m.nrows() != m.ncols() || !m.nrows().is_multiple_of(2) || m.nrows() == 0 {
        return Err(LinalgError::NotEvenSquare { rows: m.nrows(), cols: m.ncols() });
    }
    Ok(m.nrows() / 2)
}

pub fn max_abs(m: &Matrix) -> f64 {
    m.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

/// `‖MᵀJ₀M - J₀‖_max ≤ tol`.
pub fn is_symplectic(m: &Matrix, tol: f64) -> Result<bool, LinalgError> {
    Ok(symplectic_defect(m)? <= tol)
}

pub fn symplectic_defect(m: &Matrix) -> Result<f64, LinalgError> {
    let j = j0(half_dim(m)?);
    Ok(max_abs(&(m.transpose() * &j * m - &j)))
}

/// `J₀X + XᵀJ₀`; zero iff `X` generates symplectic matrices.
pub fn hamiltonian_defect(x: &Matrix) -> Result<f64, LinalgError> {
    let j = j0(half_dim(x)?);
    Ok(max_abs(&(&j * x + x.transpose() * &j)))
}

fn norm_one(m: &Matrix) -> f64 {
    (0..m.ncols()).map(|j| m.column(j).iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Scaling and squaring with a degree-18 Taylor polynomial; the scaled
/// argument has 1-norm at most ½.
pub fn expm(a: &Matrix) -> Matrix {
    let size = a.nrows();
    let norm = norm_one(a);
    let squarings = if norm > 0.5 { ceil(log2(norm / 0.5)) as i32 } else { 0 };
    let scaled = a / pow(2.0, squarings as f64);
    let mut term = Matrix::identity(size, size);
    let mut sum = term.clone();
    for k in 1..=18 {
        term = &term * &scaled / k as f64;
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// `(exp(A), D exp(A)[E])` from the block identity
/// `exp([[A, E], [0, A]]) = [[exp A, D exp(A)[E]], [0, exp A]]`.
pub fn expm_with_derivative(a: &Matrix, e: &Matrix) -> (Matrix, Matrix) {
    let m = a.nrows();
    let mut block = Matrix::zeros(2 * m, 2 * m);
    block.view_mut((0, 0), (m, m)).copy_from(a);
    block.view_mut((0, m), (m, m)).copy_from(e);
    block.view_mut((m, m), (m, m)).copy_from(a);
    let big = expm(&block);
    (big.view((0, 0), (m, m)).into_owned(), big.view((0, m), (m, m)).into_owned())
}

pub fn symmetric_defect(m: &Matrix) -> f64 {
    max_abs(&(m - m.transpose()))
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: &Matrix) -> Vec<f64> {
    let sym = (m + m.transpose()) * 0.5;
    let mut ev: Vec<f64> = sym.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// `(positive, negative, near-zero)` eigenvalue counts; `|λ| ≤ zero_tol` is zero.
pub fn inertia(m: &Matrix, zero_tol: f64) -> (usize, usize, usize) {
    let ev = symmetric_eigenvalues(m);
    let pos = ev.iter().filter(|&&x| x > zero_tol).count();
    let neg = ev.iter().filter(|&&x| x < -zero_tol).count();
    (pos, neg, ev.len() - pos - neg)
}

fn singular_values(m: &Matrix) -> Vec<f64> {
    m.clone().svd(false, false).singular_values.iter().copied().collect()
}

pub fn spectral_norm(m: &Matrix) -> f64 {
    singular_values(m).into_iter().fold(0.0, f64::max)
}

pub fn smallest_singular_value(m: &Matrix) -> f64 {
    singular_values(m).into_iter().fold(f64::INFINITY, f64::min)
}

/// Orthonormal basis (as columns) of the right singular vectors whose
/// singular value is at most `threshold`.
pub fn kernel_basis(m: &Matrix, threshold: f64) -> Matrix {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let picked: Vec<usize> = (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] <= threshold).collect();
    let mut basis = Matrix::zeros(m.ncols(), picked.len());
    for (c, &i) in picked.iter().enumerate() {
        for r in 0..m.ncols() {
            basis[(r, c)] = v_t[(i, r)];
        }
    }
    basis
}

/// Eigen-decomposition `M = Q diag(λ) Qᵀ` applied to `λ ↦ f(λ)`.
pub fn symmetric_function<F: Fn(f64) -> f64>(m: &Matrix, f: F) -> Matrix {
    let sym = (m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let q = &eig.eigenvectors;
    let d = Matrix::from_diagonal(&eig.eigenvalues.map(f));
    q * d * q.transpose()
}
