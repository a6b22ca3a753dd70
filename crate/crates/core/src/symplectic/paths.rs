//! Paths `[0, 1] → Sp(2n, R)` with derivative access.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{atan, cos, exp, log, sin};

use super::SymplecticError;
use crate::linalg::{expm, expm_with_derivative, hamiltonian_defect, j0, symmetric_function, Matrix};
use crate::FOUR_PI_SQ;

/// Generators may miss the Lie algebra `sp(2n)` by at most this (max-norm).
pub const GENERATOR_TOLERANCE: f64 = 1e-9;

pub trait SymplecticPath {
    /// Size `2n` of the matrices.
    fn dim(&self) -> usize;
    fn eval(&self, t: f64) -> Matrix;
    fn derivative(&self, t: f64) -> Matrix;
    fn kind(&self) -> &'static str;
}

impl<P: SymplecticPath + ?Sized> SymplecticPath for Box<P> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, t: f64) -> Matrix {
        (**self).eval(t)
    }
    fn derivative(&self, t: f64) -> Matrix {
        (**self).derivative(t)
    }
    fn kind(&self) -> &'static str {
        (**self).kind()
    }
}

impl<P: SymplecticPath + ?Sized> SymplecticPath for &P {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, t: f64) -> Matrix {
        (**self).eval(t)
    }
    fn derivative(&self, t: f64) -> Matrix {
        (**self).derivative(t)
    }
    fn kind(&self) -> &'static str {
        (**self).kind()
    }
}

/// `c = 1/(2π)²`, the shear rate of the free linearized flow.
pub const SHEAR_RATE: f64 = 1.0 / FOUR_PI_SQ;

/// The linearized free flow `A(t) = [[I, t/(2π)² I], [0, I]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShearPath {
    pub n: usize,
}

impl SymplecticPath for ShearPath {
    fn dim(&self) -> usize {
        2 * self.n
    }
    fn eval(&self, t: f64) -> Matrix {
        let n = self.n;
        let mut m = Matrix::identity(2 * n, 2 * n);
        for i in 0..n {
            m[(i, n + i)] = SHEAR_RATE * t;
        }
        m
    }
    fn derivative(&self, _t: f64) -> Matrix {
        let n = self.n;
        let mut m = Matrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            m[(i, n + i)] = SHEAR_RATE;
        }
        m
    }
    fn kind(&self) -> &'static str {
        "shear"
    }
}

/// `e^{2πit}` acting on `z = v + iu`, i.e. `exp(-2πt J₀)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationPath {
    pub n: usize,
}

impl SymplecticPath for RotationPath {
    fn dim(&self) -> usize {
        2 * self.n
    }
    fn eval(&self, t: f64) -> Matrix {
        let a = 2.0 * PI * t;
        Matrix::identity(2 * self.n, 2 * self.n) * cos(a) - j0(self.n) * sin(a)
    }
    fn derivative(&self, t: f64) -> Matrix {
        let a = 2.0 * PI * t;
        (Matrix::identity(2 * self.n, 2 * self.n) * sin(a) + j0(self.n) * cos(a)) * (-2.0 * PI)
    }
    fn kind(&self) -> &'static str {
        "rotation"
    }
}

/// `Ψ(t) = exp(tX)` for a generator `X ∈ sp(2n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentialPath {
    generator: Matrix,
}

impl ExponentialPath {
    pub fn new(generator: Matrix) -> Result<Self, SymplecticError> {
        let defect = hamiltonian_defect(&generator)?;
        if defect > GENERATOR_TOLERANCE {
            return Err(SymplecticError::NotHamiltonian(defect));
        }
        Ok(Self { generator })
    }

    /// `exp(-tJS)`.
    pub fn from_quadratic(s: &Matrix, j: &Matrix) -> Result<Self, SymplecticError> {
        if s.shape() != j.shape() {
            return Err(SymplecticError::ShapeMismatch);
        }
        Self::new(-(j * s))
    }

    /// `exp(-tJ₀S)`.
    pub fn standard(s: &Matrix) -> Result<Self, SymplecticError> {
        let n = crate::linalg::half_dim(s)?;
        Self::from_quadratic(s, &j0(n))
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }
}

impl SymplecticPath for ExponentialPath {
    fn dim(&self) -> usize {
        self.generator.nrows()
    }
    fn eval(&self, t: f64) -> Matrix {
        expm(&(&self.generator * t))
    }
    fn derivative(&self, t: f64) -> Matrix {
        &self.generator * self.eval(t)
    }
    fn kind(&self) -> &'static str {
        "exponential"
    }
}

/// Samples on an increasing grid; piecewise-linear values, derivative by
/// differences of neighbouring samples.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPath {
    grid: Vec<f64>,
    samples: Vec<Matrix>,
}

impl SampledPath {
    pub fn new(grid: Vec<f64>, samples: Vec<Matrix>, tol: f64) -> Result<Self, SymplecticError> {
        if grid.len() != samples.len() || grid.len() < 2 {
            return Err(SymplecticError::ShapeMismatch);
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) || grid[0] != 0.0 || grid[grid.len() - 1] != 1.0 {
            return Err(SymplecticError::BadGrid);
        }
        let size = samples[0].nrows();
        for m in &samples {
            if m.shape() != (size, size) {
                return Err(SymplecticError::ShapeMismatch);
            }
            let defect = crate::linalg::symplectic_defect(m)?;
            if defect > tol {
                return Err(SymplecticError::NotSymplectic(defect));
            }
        }
        Ok(Self { grid, samples })
    }

    /// Samples `path` at `count + 1` uniform points.
    pub fn from_path<P: SymplecticPath + ?Sized>(path: &P, count: usize) -> Self {
        let grid: Vec<f64> = (0..=count).map(|i| i as f64 / count as f64).collect();
        let samples = grid.iter().map(|&t| path.eval(t)).collect();
        Self { grid, samples }
    }

    fn segment(&self, t: f64) -> usize {
        let last = self.grid.len() - 2;
        self.grid.partition_point(|&g| g <= t).saturating_sub(1).min(last)
    }

    fn node_derivative(&self, i: usize) -> Matrix {
        let last = self.grid.len() - 1;
        let (a, b) = if i == 0 { (0, 1) } else if i == last { (last - 1, last) } else { (i - 1, i + 1) };
        (&self.samples[b] - &self.samples[a]) / (self.grid[b] - self.grid[a])
    }
}

impl SymplecticPath for SampledPath {
    fn dim(&self) -> usize {
        self.samples[0].nrows()
    }
    fn eval(&self, t: f64) -> Matrix {
        let i = self.segment(t);
        let w = (t - self.grid[i]) / (self.grid[i + 1] - self.grid[i]);
        &self.samples[i] * (1.0 - w) + &self.samples[i + 1] * w
    }
    fn derivative(&self, t: f64) -> Matrix {
        let i = self.segment(t);
        let w = (t - self.grid[i]) / (self.grid[i + 1] - self.grid[i]);
        self.node_derivative(i) * (1.0 - w) + self.node_derivative(i + 1) * w
    }
    fn kind(&self) -> &'static str {
        "sampled"
    }
}

/// Orthogonal factor `R(t)` of the polar decomposition `a(t) = P(t) R(t)`
/// of the shear: rotation by `-atan(ct/2)` in each `(u_j, v_j)` plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShearPolarRotation {
    pub n: usize,
}

impl ShearPolarRotation {
    fn angle(t: f64) -> (f64, f64) {
        let x = SHEAR_RATE * t / 2.0;
        (-atan(x), -(SHEAR_RATE / 2.0) / (1.0 + x * x))
    }
}

impl SymplecticPath for ShearPolarRotation {
    fn dim(&self) -> usize {
        2 * self.n
    }
    fn eval(&self, t: f64) -> Matrix {
        let (phi, _) = Self::angle(t);
        Matrix::identity(2 * self.n, 2 * self.n) * cos(phi) + j0(self.n) * sin(phi)
    }
    fn derivative(&self, t: f64) -> Matrix {
        let (phi, dphi) = Self::angle(t);
        (Matrix::identity(2 * self.n, 2 * self.n) * -sin(phi) + j0(self.n) * cos(phi)) * dphi
    }
    fn kind(&self) -> &'static str {
        "polar-rotation"
    }
}

/// Connector `B(s) = P(1)^s R(1)` from `R(1)` to `a(1) = P(1) R(1)`; it stays
/// off the Maslov cycle except at `s = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarConnector {
    rotation_end: Matrix,
    /// `log P(1) = ½ log(a aᵀ)`.
    log_positive: Matrix,
}

impl PolarConnector {
    pub fn new(n: usize) -> Self {
        let a = ShearPath { n }.eval(1.0);
        let aat = &a * a.transpose();
        Self { rotation_end: ShearPolarRotation { n }.eval(1.0), log_positive: symmetric_function(&aat, |l| 0.5 * log(l)) }
    }

    fn positive_power(&self, s: f64) -> Matrix {
        // P^s = exp(s log P); log P is symmetric
        symmetric_function(&self.log_positive, |l| exp(s * l))
    }
}

impl SymplecticPath for PolarConnector {
    fn dim(&self) -> usize {
        self.rotation_end.nrows()
    }
    fn eval(&self, s: f64) -> Matrix {
        self.positive_power(s) * &self.rotation_end
    }
    fn derivative(&self, s: f64) -> Matrix {
        &self.log_positive * self.eval(s)
    }
    fn kind(&self) -> &'static str {
        "polar-connector"
    }
}

/// `ã(t) = exp(Z(t))`, `Z(t) = t [[0, cI], [ε(1-t) I, 0]]`: the shear pushed
/// off the Maslov cycle on `(0, 1)` with the same endpoints `I` and `a(1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OffCyclePath {
    pub n: usize,
    pub epsilon: f64,
}

impl OffCyclePath {
    pub fn new(n: usize) -> Self {
        Self { n, epsilon: SHEAR_RATE }
    }

    fn generator(&self, t: f64) -> (Matrix, Matrix) {
        let n = self.n;
        let mut z = Matrix::zeros(2 * n, 2 * n);
        let mut dz = Matrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            z[(i, n + i)] = SHEAR_RATE * t;
            z[(n + i, i)] = self.epsilon * t * (1.0 - t);
            dz[(i, n + i)] = SHEAR_RATE;
            dz[(n + i, i)] = self.epsilon * (1.0 - 2.0 * t);
        }
        (z, dz)
    }
}

impl SymplecticPath for OffCyclePath {
    fn dim(&self) -> usize {
        2 * self.n
    }
    fn eval(&self, t: f64) -> Matrix {
        expm(&self.generator(t).0)
    }
    fn derivative(&self, t: f64) -> Matrix {
        let (z, dz) = self.generator(t);
        expm_with_derivative(&z, &dz).1
    }
    fn kind(&self) -> &'static str {
        "off-cycle"
    }
}

/// `t ↦ Ψ(f(t))` for a map `f` of `[0, 1]` fixing both endpoints; `map`
/// returns `(f(t), f'(t))`.
#[derive(Debug, Clone, Copy)]
pub struct Reparametrized<P> {
    pub inner: P,
    pub map: fn(f64) -> (f64, f64),
}

impl<P> Reparametrized<P> {
    pub fn squared(inner: P) -> Self {
        Self { inner, map: |t| (t * t, 2.0 * t) }
    }
}

impl<P: SymplecticPath> SymplecticPath for Reparametrized<P> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn eval(&self, t: f64) -> Matrix {
        self.inner.eval((self.map)(t).0)
    }
    fn derivative(&self, t: f64) -> Matrix {
        let (s, ds) = (self.map)(t);
        self.inner.derivative(s) * ds
    }
    fn kind(&self) -> &'static str {
        "reparametrized"
    }
}

/// A path constant in `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantPath(pub Matrix);

impl SymplecticPath for ConstantPath {
    fn dim(&self) -> usize {
        self.0.nrows()
    }
    fn eval(&self, _t: f64) -> Matrix {
        self.0.clone()
    }
    fn derivative(&self, _t: f64) -> Matrix {
        Matrix::zeros(self.0.nrows(), self.0.ncols())
    }
    fn kind(&self) -> &'static str {
        "constant"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, symplectic_defect};

    fn check_path<P: SymplecticPath>(p: &P) {
        for i in 0..=64 {
            let t = i as f64 / 64.0;
            assert!(symplectic_defect(&p.eval(t)).unwrap() < 1e-8, "{} at {t}", p.kind());
            if (0.01..0.99).contains(&t) {
                let h = 1e-6;
                let fd = (p.eval(t + h) - p.eval(t - h)) / (2.0 * h);
                assert!(max_abs(&(fd - p.derivative(t))) < 1e-6, "{} derivative at {t}", p.kind());
            }
        }
    }

    #[test]
    fn analytic_paths_are_symplectic_with_correct_derivatives() {
        check_path(&ShearPath { n: 2 });
        check_path(&RotationPath { n: 1 });
        check_path(&ShearPolarRotation { n: 2 });
        check_path(&PolarConnector::new(1));
        check_path(&OffCyclePath::new(1));
        let s = Matrix::from_row_slice(2, 2, &[1.0, 0.3, 0.3, -2.0]);
        check_path(&ExponentialPath::standard(&s).unwrap());
        check_path(&Reparametrized::squared(RotationPath { n: 1 }));
    }

    #[test]
    fn polar_pieces_fit_together() {
        for n in 1..=2 {
            let a = ShearPath { n }.eval(1.0);
            let b = PolarConnector::new(n);
            let r = ShearPolarRotation { n };
            assert!(max_abs(&(b.eval(0.0) - r.eval(1.0))) < 1e-14);
            assert!(max_abs(&(b.eval(1.0) - &a)) < 1e-12);
            assert!(max_abs(&(OffCyclePath::new(n).eval(1.0) - &a)) < 1e-14);
            // R(t) is orthogonal and P = a Rᵀ is symmetric positive
            let p = &a * r.eval(1.0).transpose();
            assert!(max_abs(&(&p - p.transpose())) < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_generators() {
        let s = Matrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0]);
        assert!(matches!(ExponentialPath::new(s), Err(SymplecticError::NotHamiltonian(_))));
    }

    #[test]
    fn sampled_path_interpolates() {
        let rot = RotationPath { n: 1 };
        let sp = SampledPath::from_path(&rot, 2000);
        assert!(max_abs(&(sp.eval(0.3) - rot.eval(0.3))) < 1e-5);
        assert!(max_abs(&(sp.derivative(0.3) - rot.derivative(0.3))) < 1e-3);
        let bad = SampledPath::new(alloc::vec![0.0, 1.0], alloc::vec![Matrix::identity(2, 2), Matrix::identity(2, 2) * 2.0], 1e-9);
        assert!(matches!(bad, Err(SymplecticError::NotSymplectic(_))));
    }
}
