//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use flatloop_core::homology::{ChainComplex, Coefficients, IntMatrix};
use flatloop_core::linalg::Matrix;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-bound..=bound)))
}

fn to_rows(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).clone()).collect()).collect()
}

/// Fraction-free (Bareiss) determinant.
pub fn det_bareiss(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut a = to_rows(m);
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    &a[n - 1][n - 1] * sign
}

/// Rank over the rationals by fraction-free elimination.
pub fn rank_over_q(m: &IntMatrix) -> usize {
    let mut a = to_rows(m);
    let (rows, cols) = (m.rows(), m.cols());
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..rows {
            if a[r][col].is_zero() {
                continue;
            }
            let (f, g) = (a[rank][col].clone(), a[r][col].clone());
            for c in col..cols {
                a[r][c] = &a[r][c] * &f - &a[rank][c] * &g;
            }
        }
        rank += 1;
    }
    rank
}

/// A random unimodular matrix and its inverse, built from elementary moves.
pub fn random_unimodular<R: Rng>(rng: &mut R, size: usize, moves: usize) -> (IntMatrix, IntMatrix) {
    let mut w = IntMatrix::identity(size);
    let mut inv = IntMatrix::identity(size);
    if size < 2 {
        return (w, inv);
    }
    for _ in 0..moves {
        let i = rng.gen_range(0..size);
        let mut j = rng.gen_range(0..size - 1);
        if j >= i {
            j += 1;
        }
        let f: i64 = if rng.gen_bool(0.5) { 1 } else { -1 } * rng.gen_range(1..=2);
        // W ← W E with E = I + f e_j e_iᵀ (adds f·col j to col i); E^{-1} = I - f e_j e_iᵀ
        let mut e = IntMatrix::identity(size);
        e.set(j, i, BigInt::from(f));
        let mut e_inv = IntMatrix::identity(size);
        e_inv.set(j, i, BigInt::from(-f));
        w = w.mul(&e);
        inv = e_inv.mul(&inv);
    }
    (w, inv)
}

/// A random three-term complex `C_2 → C_1 → C_0` with prescribed invariant
/// factors, hidden behind random unimodular changes of basis.
pub struct PlantedComplex {
    pub complex: ChainComplex,
    /// `(free rank, torsion)` expected in degrees 0, 1, 2.
    pub expected: [(usize, Vec<u64>); 3],
}

fn divisor_chain<R: Rng>(rng: &mut R, len: usize) -> Vec<i64> {
    let mut chain = Vec::with_capacity(len);
    let mut d = 1i64;
    for _ in 0..len {
        d *= [1, 1, 2, 3][rng.gen_range(0..4)];
        chain.push(d);
    }
    chain
}

pub fn planted_complex<R: Rng>(rng: &mut R) -> PlantedComplex {
    let r0 = rng.gen_range(1..=4);
    let r1 = rng.gen_range(1..=5);
    let r2 = rng.gen_range(1..=4);
    let a = rng.gen_range(0..=r0.min(r1));
    let b = rng.gen_range(0..=(r1 - a).min(r2));
    let d1 = divisor_chain(rng, a);
    let d2 = divisor_chain(rng, b);

    let mut std1 = IntMatrix::zeros(r0, r1);
    for (i, &d) in d1.iter().enumerate() {
        std1.set(i, i, BigInt::from(d));
    }
    let mut std2 = IntMatrix::zeros(r1, r2);
    for (i, &d) in d2.iter().enumerate() {
        std2.set(a + i, i, BigInt::from(d));
    }
    let (u0, _) = random_unimodular(rng, r0, 12);
    let (w, w_inv) = random_unimodular(rng, r1, 12);
    let (v2, _) = random_unimodular(rng, r2, 12);
    let b1 = u0.mul(&std1).mul(&w_inv);
    let b2 = w.mul(&std2).mul(&v2);
    let complex = ChainComplex::new(
        Coefficients::Integers,
        0,
        vec![r0, r1, r2],
        vec![IntMatrix::zeros(0, r0), b1, b2],
    )
    .unwrap();
    let torsion = |c: &[i64]| c.iter().filter(|&&d| d > 1).map(|&d| d as u64).collect::<Vec<_>>();
    PlantedComplex {
        complex,
        expected: [(r0 - a, torsion(&d1)), (r1 - a - b, torsion(&d2)), (r2 - b, Vec::new())],
    }
}

pub fn is_unimodular(m: &IntMatrix) -> bool {
    det_bareiss(m).abs() == BigInt::from(1)
}

/// Sorted eigenvalues of the periodic 3-point operator
/// `-(x_{j+1} - 2x_j + x_{j-1})/h² - c_j x_j`, `h = 1/N`.
pub fn periodic_fd_eigenvalues(n_points: usize, potential: impl Fn(f64) -> f64) -> Vec<f64> {
    let h = 1.0 / n_points as f64;
    let mut a = DMatrix::<f64>::zeros(n_points, n_points);
    for j in 0..n_points {
        a[(j, j)] = 2.0 / (h * h) - potential(j as f64 * h);
        a[(j, (j + 1) % n_points)] -= 1.0 / (h * h);
        a[(j, (j + n_points - 1) % n_points)] -= 1.0 / (h * h);
    }
    let mut ev: Vec<f64> = a.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Groups sorted values into `(value, multiplicity)` clusters of relative width `tol`.
pub fn cluster(values: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    for &v in values {
        match out.last_mut() {
            Some((c, m)) if (v - *c).abs() <= tol * c.abs().max(1.0) => *m += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}

/// Symmetric `size x size` matrix `Q diag(λ) Qᵀ` with random orthogonal `Q`
/// and `|λ| ∈ [0.1, max_abs]`, random signs.
pub fn random_symmetric<R: Rng>(rng: &mut R, size: usize, max_abs: f64) -> Matrix {
    let g = DMatrix::<f64>::from_fn(size, size, |_, _| rng.gen_range(-1.0..1.0));
    let q = g.qr().q();
    let lambda = nalgebra::DVector::from_fn(size, |_, _| {
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        sign * rng.gen_range(0.1..max_abs)
    });
    &q * DMatrix::from_diagonal(&lambda) * q.transpose()
}

/// RK4 solution of `Ẏ = X Y`, `Y(0) = I` at `t = 1`.
pub fn rk4_linear(x: &Matrix, steps: usize) -> Matrix {
    let n = x.nrows();
    let h = 1.0 / steps as f64;
    let mut y = Matrix::identity(n, n);
    for _ in 0..steps {
        let k1 = x * &y;
        let k2 = x * (&y + &k1 * (0.5 * h));
        let k3 = x * (&y + &k2 * (0.5 * h));
        let k4 = x * (&y + &k3 * h);
        y += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    }
    y
}
