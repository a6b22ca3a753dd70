//! Symplectic paths, crossing forms and Conley–Zehnder indices.
//!
//! Conventions: `J₀ = [[0, -I], [I, 0]]`, `ω₀(x, y) = (J₀x)ᵀ y`, and the
//! crossing form of `Ψ` at `t` is `Q(ξ) = ω₀(ξ, Ψ'(t) ξ)` on `ker(Ψ(t) - I)`.
//! With these signs `exp(-tJ₀S)` for small nondegenerate `S` has index
//! `ν(S) - n` and the rotation `e^{2πit}` crosses the identity with
//! signature `-2n`.

mod paths;

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::ops::{Add, Mul, Neg};

use thiserror::Error;

pub use paths::{
    ConstantPath, ExponentialPath, OffCyclePath, PolarConnector, Reparametrized, RotationPath, SampledPath, ShearPath,
    ShearPolarRotation, SymplecticPath, GENERATOR_TOLERANCE, SHEAR_RATE,
};

use crate::geodesics::Branch;
use crate::hamiltonian::Hamiltonian;
use crate::linalg::{
    half_dim, inertia, j0, kernel_basis, smallest_singular_value, spectral_norm, symmetric_defect,
    symmetric_eigenvalues, LinalgError, Matrix,
};
use crate::FOUR_PI_SQ;

pub const DEFAULT_GRID: usize = 256;
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

/// Relative size below which a crossing-form eigenvalue counts as zero.
pub const FORM_DEGENERACY: f64 = 1e-6;

/// Step of the one-sided secant used where `Ψ'(t)` vanishes.
pub const STATIONARY_STEP: f64 = 1e-3;

const REFINE_WIDTH: f64 = 1e-12;
const MERGE_DISTANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymplecticError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("generator is not in sp(2n): defect {0:e}")]
    NotHamiltonian(f64),
    #[error("sample is not symplectic: defect {0:e}")]
    NotSymplectic(f64),
    #[error("matrix shapes do not match")]
    ShapeMismatch,
    #[error("sample grid must increase from 0 to 1")]
    BadGrid,
    #[error("path stays on the Maslov cycle over [{start}, {end}]")]
    DegenerateSpan { start: f64, end: f64 },
    #[error("crossing at t = {t} has a degenerate crossing form")]
    NonRegular { t: f64 },
    #[error("‖S‖ = {norm} is not below 2π")]
    NormBound { norm: f64 },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("dimension must be at least 1")]
    ZeroDimension,
}

/// An element of `½Z`, stored as its double.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInteger {
    twice: i64,
}

impl HalfInteger {
    pub const ZERO: Self = Self { twice: 0 };

    pub fn from_twice(twice: i64) -> Self {
        Self { twice }
    }

    pub fn from_int(value: i64) -> Self {
        Self { twice: 2 * value }
    }

    /// Numerator over the fixed denominator 2.
    pub fn twice(self) -> i64 {
        self.twice
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    pub fn to_integer(self) -> Option<i64> {
        self.is_integer().then_some(self.twice / 2)
    }

    pub fn to_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }
}

impl Add for HalfInteger {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self { twice: self.twice + rhs.twice }
    }
}

impl Neg for HalfInteger {
    type Output = Self;
    fn neg(self) -> Self {
        Self { twice: -self.twice }
    }
}

impl Mul<i64> for HalfInteger {
    type Output = Self;
    fn mul(self, rhs: i64) -> Self {
        Self { twice: self.twice * rhs }
    }
}

impl core::iter::Sum for HalfInteger {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, Add::add)
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_integer() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "{}/2", self.twice),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Crossing {
    pub t: f64,
    /// Orthonormal columns spanning `ker(Ψ(t) - I)`.
    pub kernel_basis: Matrix,
    pub form_signature: i64,
    pub regular: bool,
    pub boundary: bool,
}

impl Crossing {
    pub fn kernel_dim(&self) -> usize {
        self.kernel_basis.ncols()
    }

    /// Twice the contribution to the index: boundary crossings count half.
    pub fn weighted_twice(&self) -> i64 {
        if self.boundary {
            self.form_signature
        } else {
            2 * self.form_signature
        }
    }
}

/// Result of scanning a path against the Maslov cycle.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CrossingScan {
    pub crossings: Vec<Crossing>,
    /// Parameter intervals on which `Ψ(t) - I` stays singular.
    pub degenerate_spans: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexMethod {
    CrossingSum,
    HomotopyDecomposition,
    SzFormula,
}

impl IndexMethod {
    pub fn name(self) -> &'static str {
        match self {
            IndexMethod::CrossingSum => "crossing-sum",
            IndexMethod::HomotopyDecomposition => "homotopy-decomposition",
            IndexMethod::SzFormula => "sz-formula",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexResult {
    pub value: HalfInteger,
    pub method: IndexMethod,
    pub crossings: Vec<Crossing>,
}

/// `(σ_min(Ψ(t) - I), zero threshold)` at `t`.
fn cycle_distance<P: SymplecticPath + ?Sized>(path: &P, t: f64, tol: f64) -> (f64, f64, Matrix) {
    let psi = path.eval(t);
    let threshold = tol * spectral_norm(&psi).max(1.0);
    let size = psi.nrows();
    let shifted = psi - Matrix::identity(size, size);
    (smallest_singular_value(&shifted), threshold, shifted)
}

fn golden_section<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let r = (libm::sqrt(5.0) - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > REFINE_WIDTH {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Scans `t ∈ [0, 1]` on `grid` intervals for parameters where `Ψ(t) - I` is
/// singular, refines isolated zeros and evaluates the crossing form there.
pub fn detect_crossings<P: SymplecticPath + ?Sized>(path: &P, grid: usize, tol: f64) -> CrossingScan {
    let grid = grid.max(2);
    let times: Vec<f64> = (0..=grid).map(|i| i as f64 / grid as f64).collect();
    let samples: Vec<(f64, f64)> = times
        .iter()
        .map(|&t| {
            let (s, th, _) = cycle_distance(path, t, tol);
            (s, th)
        })
        .collect();
    let zero: Vec<bool> = samples.iter().map(|(s, th)| s <= th).collect();

    let mut scan = CrossingScan::default();
    let mut candidates: Vec<f64> = Vec::new();
    let sigma = |t: f64| cycle_distance(path, t, tol).0;
    let bracket = |i: usize| (times[i.saturating_sub(1)], times[(i + 1).min(grid)]);

    let mut i = 0;
    while i <= grid {
        if zero[i] {
            let start = i;
            while i < grid && zero[i + 1] {
                i += 1;
            }
            if i - start >= 2 {
                scan.degenerate_spans.push((times[start], times[i]));
            } else {
                let best = (start..=i).min_by(|&a, &b| samples[a].0.total_cmp(&samples[b].0)).unwrap();
                if best == 0 || best == grid || samples[best].0 == 0.0 {
                    candidates.push(times[best]);
                } else {
                    let (a, b) = bracket(best);
                    candidates.push(golden_section(sigma, a, b));
                }
            }
        } else {
            let left = i == 0 || samples[i].0 <= samples[i - 1].0;
            let right = i == grid || samples[i].0 <= samples[i + 1].0;
            let near_zero = (i > 0 && zero[i - 1]) || (i < grid && zero[i + 1]);
            if left && right && !near_zero {
                let (a, b) = bracket(i);
                let t = golden_section(sigma, a, b);
                let snapped = if t < MERGE_DISTANCE {
                    0.0
                } else if 1.0 - t < MERGE_DISTANCE {
                    1.0
                } else {
                    t
                };
                let (s, th, _) = cycle_distance(path, snapped, tol);
                if s <= th {
                    candidates.push(snapped);
                }
            }
        }
        i += 1;
    }

    candidates.sort_by(f64::total_cmp);
    candidates.dedup_by(|a, b| (*a - *b).abs() < MERGE_DISTANCE);
    for t in candidates {
        if scan.degenerate_spans.iter().any(|&(a, b)| t >= a && t <= b) {
            continue;
        }
        let (_, threshold, shifted) = cycle_distance(path, t, tol);
        let kernel = kernel_basis(&shifted, threshold);
        if kernel.ncols() == 0 {
            continue;
        }
        let (signature, regular) = crossing_form(path, t, &kernel);
        scan.crossings.push(Crossing {
            t,
            kernel_basis: kernel,
            form_signature: signature,
            regular,
            boundary: t == 0.0 || t == 1.0,
        });
    }
    scan
}

/// Signature of `Q(ξ) = ω₀(ξ, Ψ'(t)ξ)` on the span of `kernel`, and whether
/// `Q` is nondegenerate there.
///
/// Where `Ψ'(t)` vanishes the one-sided secant over [`STATIONARY_STEP`]
/// replaces it.
pub fn crossing_form<P: SymplecticPath + ?Sized>(path: &P, t: f64, kernel: &Matrix) -> (i64, bool) {
    let psi = path.eval(t);
    let scale = spectral_norm(&psi).max(1.0);
    let mut d = path.derivative(t);
    let mut size = spectral_norm(&d);
    if size < 1e-12 * scale {
        let h = STATIONARY_STEP;
        d = if t + h <= 1.0 { (path.eval(t + h) - &psi) / h } else { (&psi - path.eval(t - h)) / h };
        size = spectral_norm(&d);
    }
    if size < 1e-14 * scale {
        return (0, false);
    }
    let n = psi.nrows() / 2;
    let q = (j0(n) * kernel).transpose() * (d / size) * kernel;
    let q = (&q + q.transpose()) * 0.5;
    let ev = symmetric_eigenvalues(&q);
    let regular = ev.iter().all(|x| x.abs() > FORM_DEGENERACY);
    let signature = ev.iter().filter(|&&x| x > FORM_DEGENERACY).count() as i64
        - ev.iter().filter(|&&x| x < -FORM_DEGENERACY).count() as i64;
    (signature, regular)
}

/// Robbin–Salamon index as the half-weighted crossing sum.
pub fn rs_index<P: SymplecticPath + ?Sized>(path: &P, grid: usize, tol: f64) -> Result<IndexResult, SymplecticError> {
    let scan = detect_crossings(path, grid, tol);
    if let Some(&(start, end)) = scan.degenerate_spans.first() {
        return Err(SymplecticError::DegenerateSpan { start, end });
    }
    if let Some(c) = scan.crossings.iter().find(|c| !c.regular) {
        return Err(SymplecticError::NonRegular { t: c.t });
    }
    let value = HalfInteger::from_twice(scan.crossings.iter().map(Crossing::weighted_twice).sum());
    Ok(IndexResult { value, method: IndexMethod::CrossingSum, crossings: scan.crossings })
}

/// Generalized index of the shear `A(t)` on `R^{2n}`.
///
/// The `2 x 2` block is homotoped (endpoints fixed) to its polar rotation
/// `R(t)` followed by the connector `B(s) = P(1)^s R(1)`; the block index is
/// the sum of the two crossing sums, and the product property multiplies it
/// by `n`.
pub fn generalized_cz_shear(n: usize) -> Result<IndexResult, SymplecticError> {
    if n == 0 {
        return Err(SymplecticError::ZeroDimension);
    }
    let rotation = rs_index(&ShearPolarRotation { n: 1 }, DEFAULT_GRID, DEFAULT_TOLERANCE)?;
    let connector = rs_index(&PolarConnector::new(1), DEFAULT_GRID, DEFAULT_TOLERANCE)?;
    let block = rotation.value + connector.value;
    let mut crossings = rotation.crossings;
    crossings.extend(connector.crossings);
    Ok(IndexResult { value: block * n as i64, method: IndexMethod::HomotopyDecomposition, crossings })
}

/// `ν(S) - n`, the number of negative eigenvalues of `S` minus `n`, valid for
/// `‖S‖ < 2π`.
pub fn cz_from_quadratic(s: &Matrix) -> Result<i64, SymplecticError> {
    let n = half_dim(s)?;
    if symmetric_defect(s) > 1e-12 {
        return Err(SymplecticError::NotSymmetric);
    }
    let norm = spectral_norm(s);
    if norm >= 2.0 * PI {
        return Err(SymplecticError::NormBound { norm });
    }
    let (_, negative, _) = inertia(s, 1e-12);
    Ok(negative as i64 - n as i64)
}

/// `μ + dim/2`.
pub fn grading_shift(mu: HalfInteger, crit_dim: i64) -> HalfInteger {
    mu + HalfInteger::from_twice(crit_dim)
}

/// `X_H = (∂H/∂v, -∂H/∂u)`, solving `dH = Ω(X_H, ·)` for `Ω = du ∧ dv`.
pub fn hamiltonian_vector_field<H: Hamiltonian + ?Sized>(h: &H, t: f64, u: &[f64], v: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut du = alloc::vec![0.0; u.len()];
    let mut dv = alloc::vec![0.0; v.len()];
    h.gradient(t, u, v, &mut du, &mut dv);
    let s = du.into_iter().map(|x| -x).collect();
    (dv, s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinearizedSpec {
    /// Free flow on `T*T^n`.
    Free { n: usize },
    /// Pendulum flow linearized at `x^∓`.
    Perturbed(Branch),
}

/// `(S^∓, J)`: `S^∓ = diag(±1, 1)`, `J = [[0, -1/4π²], [4π², 0]]`.
pub fn perturbed_quadratic(branch: Branch) -> (Matrix, Matrix) {
    let first = match branch {
        Branch::Minus => 1.0,
        Branch::Plus => -1.0,
    };
    let s = Matrix::from_row_slice(2, 2, &[first, 0.0, 0.0, 1.0]);
    let j = Matrix::from_row_slice(2, 2, &[0.0, -1.0 / FOUR_PI_SQ, FOUR_PI_SQ, 0.0]);
    (s, j)
}

/// Linearized time-`t` flow along the chosen orbit.
pub fn linearized_flow(orbit: LinearizedSpec) -> Result<Box<dyn SymplecticPath + Send + Sync>, SymplecticError> {
    match orbit {
        LinearizedSpec::Free { n: 0 } => Err(SymplecticError::ZeroDimension),
        LinearizedSpec::Free { n } => Ok(Box::new(ShearPath { n })),
        LinearizedSpec::Perturbed(branch) => {
            let (s, j) = perturbed_quadratic(branch);
            Ok(Box::new(ExponentialPath::from_quadratic(&s, &j)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{FreeHamiltonian, PendulumHamiltonian};
    use crate::linalg::{max_abs, symplectic_defect};
    use crate::torus::FlatTorus;

    fn rs(path: &dyn SymplecticPath) -> IndexResult {
        rs_index(path, DEFAULT_GRID, DEFAULT_TOLERANCE).unwrap()
    }

    #[test]
    fn half_integer_arithmetic() {
        let h = HalfInteger::from_twice(-1);
        assert_eq!(alloc::format!("{h}"), "-1/2");
        assert_eq!(h * 2, HalfInteger::from_int(-1));
        assert_eq!(alloc::format!("{}", h * 2), "-1");
        assert_eq!(grading_shift(HalfInteger::from_twice(-3), 3), HalfInteger::ZERO);
        assert_eq!(grading_shift(HalfInteger::from_int(-1), 0), HalfInteger::from_int(-1));
        assert_eq!(grading_shift(HalfInteger::ZERO, 0), HalfInteger::ZERO);
    }

    #[test]
    fn rotation_crosses_at_both_ends() {
        let scan = detect_crossings(&RotationPath { n: 1 }, DEFAULT_GRID, DEFAULT_TOLERANCE);
        assert!(scan.degenerate_spans.is_empty());
        let ts: Vec<f64> = scan.crossings.iter().map(|c| c.t).collect();
        assert_eq!(ts, [0.0, 1.0]);
        for c in &scan.crossings {
            assert_eq!(c.kernel_dim(), 2);
            assert_eq!(c.form_signature, -2);
            assert!(c.regular && c.boundary);
        }
    }

    #[test]
    fn shear_is_degenerate_everywhere() {
        let scan = detect_crossings(&ShearPath { n: 1 }, 64, DEFAULT_TOLERANCE);
        assert_eq!(scan.degenerate_spans, [(0.0, 1.0)]);
        assert!(matches!(
            rs_index(&ShearPath { n: 1 }, 64, DEFAULT_TOLERANCE),
            Err(SymplecticError::DegenerateSpan { .. })
        ));
    }

    #[test]
    fn constant_identity_is_non_regular() {
        let id = ConstantPath(Matrix::identity(2, 2));
        let (sig, regular) = crossing_form(&id, 0.5, &Matrix::identity(2, 2));
        assert_eq!(sig, 0);
        assert!(!regular);
    }

    #[test]
    fn perturbed_indices() {
        let minus = linearized_flow(LinearizedSpec::Perturbed(Branch::Minus)).unwrap();
        let plus = linearized_flow(LinearizedSpec::Perturbed(Branch::Plus)).unwrap();
        assert_eq!(rs(&*minus).value, HalfInteger::from_int(-1));
        let p = rs(&*plus);
        assert_eq!(p.value, HalfInteger::ZERO);
        assert!(p.crossings.iter().all(|c| c.t == 0.0));
        assert_eq!(cz_from_quadratic(&perturbed_quadratic(Branch::Minus).0).unwrap(), -1);
        assert_eq!(cz_from_quadratic(&perturbed_quadratic(Branch::Plus).0).unwrap(), 0);
        let both_negative = Matrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, -1.0]);
        assert_eq!(cz_from_quadratic(&both_negative).unwrap(), 1);
        assert_eq!(rs(&ExponentialPath::standard(&both_negative).unwrap()).value, HalfInteger::from_int(1));
        let big = Matrix::identity(2, 2) * 7.0;
        assert!(matches!(cz_from_quadratic(&big), Err(SymplecticError::NormBound { .. })));
    }

    #[test]
    fn shear_index_both_ways() {
        let r = rs(&ShearPolarRotation { n: 1 });
        assert_eq!(r.crossings.len(), 1);
        assert_eq!(r.crossings[0].form_signature, -2);
        let b = rs(&PolarConnector::new(1));
        assert_eq!(b.crossings.len(), 1);
        assert_eq!((b.crossings[0].t, b.crossings[0].form_signature), (1.0, 1));

        let other = rs(&OffCyclePath::new(1));
        let sigs: Vec<(f64, i64)> = other.crossings.iter().map(|c| (c.t, c.form_signature)).collect();
        assert_eq!(sigs, [(0.0, 0), (1.0, -1)]);
        assert_eq!(other.value, HalfInteger::from_twice(-1));

        for n in 1..=3 {
            let g = generalized_cz_shear(n).unwrap();
            assert_eq!(g.value, HalfInteger::from_twice(-(n as i64)));
            assert_eq!(g.method, IndexMethod::HomotopyDecomposition);
            // the n-block paths agree with the product rule
            let direct = rs(&ShearPolarRotation { n }).value + rs(&PolarConnector::new(n)).value;
            assert_eq!(direct, g.value);
            assert_eq!(rs(&OffCyclePath::new(n)).value, g.value);
        }
    }

    #[test]
    fn linearized_free_flow() {
        let a = linearized_flow(LinearizedSpec::Free { n: 1 }).unwrap();
        let expected = Matrix::from_row_slice(2, 2, &[1.0, 1.0 / FOUR_PI_SQ, 0.0, 1.0]);
        assert!(max_abs(&(a.eval(1.0) - expected)) < 1e-15);
        let plus = linearized_flow(LinearizedSpec::Perturbed(Branch::Plus)).unwrap();
        assert!(max_abs(&(plus.eval(0.0) - Matrix::identity(2, 2))) < 1e-15);
        let minus = linearized_flow(LinearizedSpec::Perturbed(Branch::Minus)).unwrap();
        assert!(symplectic_defect(&minus.eval(1.0)).unwrap() < 1e-9);
    }

    #[test]
    fn vector_fields() {
        let free = FreeHamiltonian::new(FlatTorus::new(1).unwrap());
        let (r, s) = hamiltonian_vector_field(&free, 0.0, &[0.2], &[FOUR_PI_SQ * 3.0]);
        assert!((r[0] - 3.0).abs() < 1e-12 && s[0] == 0.0);
        let (r, s) = hamiltonian_vector_field(&free, 0.0, &[0.2], &[0.0]);
        assert_eq!((r[0], s[0]), (0.0, 0.0));
        let pend = PendulumHamiltonian::new(1, 0.1);
        let (t, u, v) = (0.3, 0.55, 2.0);
        let (r, s) = hamiltonian_vector_field(&pend, t, &[u], &[v]);
        assert!((r[0] - v / FOUR_PI_SQ).abs() < 1e-15);
        let expected = -2.0 * PI * libm::sin(2.0 * PI * (u - t - 0.1));
        assert!((s[0] - expected).abs() < 1e-12);
    }

    #[test]
    fn stationary_reparametrization_keeps_the_index() {
        let s = Matrix::from_row_slice(2, 2, &[1.0, 0.4, 0.4, -0.5]);
        let p = ExponentialPath::standard(&s).unwrap();
        let q = Reparametrized::squared(p.clone());
        assert_eq!(rs(&p).value, rs(&q).value);
    }
}
