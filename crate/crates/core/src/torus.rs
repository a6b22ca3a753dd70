//! Flat-torus geometry, sampled loops and the loop-space functionals.
//!
//! Loops are stored as lifts `u: R → R^n` sampled on the uniform grid
//! `t_i = i / N`, together with the winding vector `k` such that
//! `u(t + 1) = u(t) + k`. Derivatives use the fourth-order centered stencil
//! (exact on affine lifts), integrals the periodic trapezoid rule.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use libm::{cos, round, sqrt};
use thiserror::Error;

use crate::hamiltonian::Hamiltonian;
use crate::FOUR_PI_SQ;

/// Smallest accepted number of samples per loop.
pub const MIN_SAMPLES: usize = 4;

/// Tolerance for recognising an integer gap in a closed lift.
pub const LIFT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TorusError {
    #[error("torus dimension must be at least 1")]
    ZeroDimension,
    #[error("a loop needs at least {MIN_SAMPLES} samples, got {0}")]
    TooFewSamples(usize),
    #[error("expected vectors of length {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("malformed lift: {0}")]
    MalformedLift(&'static str),
    #[error("recorded winding {recorded:?} disagrees with the samples ({computed:?})")]
    WindingMismatch { recorded: Vec<i64>, computed: Vec<i64> },
    #[error("loops have different sample counts ({0} vs {1})")]
    SampleCountMismatch(usize, usize),
    #[error("operation supports dimension 1 only, got {0}")]
    UnsupportedDimension(usize),
}

/// The flat torus `R^n / Z^n` with metric `(2π)² δ_jk du^j ⊗ du^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlatTorus {
    dim: usize,
}

impl FlatTorus {
    pub fn new(dim: usize) -> Result<Self, TorusError> {
        if dim == 0 {
            return Err(TorusError::ZeroDimension);
        }
        Ok(Self { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The constant metric coefficient `(2π)²`.
    pub fn metric_scale(&self) -> f64 {
        FOUR_PI_SQ
    }

    /// `g(x, x)` for a tangent vector in angle coordinates.
    pub fn norm_sq(&self, x: &[f64]) -> f64 {
        FOUR_PI_SQ * x.iter().map(|c| c * c).sum::<f64>()
    }

    /// Riemannian volume `(2π)^n`.
    pub fn volume(&self) -> f64 {
        libm::pow(2.0 * PI, self.dim as f64)
    }
}

/// Integer vector `k ∈ Z^n`: a free homotopy class of loops.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeVector(Vec<i64>);

impl LatticeVector {
    pub fn new(entries: Vec<i64>) -> Self {
        Self(entries)
    }

    pub fn zero(dim: usize) -> Self {
        Self(alloc::vec![0; dim])
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// `|k|²`, computed exactly.
    pub fn norm_sq(&self) -> i64 {
        self.0.iter().map(|c| c * c).sum()
    }
}

impl From<Vec<i64>> for LatticeVector {
    fn from(entries: Vec<i64>) -> Self {
        Self(entries)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// A loop in `T^n` sampled at `t_i = i/N`, stored as a continuous lift.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopSample {
    torus: FlatTorus,
    /// Row-major `N × n` lift samples.
    samples: Vec<f64>,
    winding: LatticeVector,
}

impl LoopSample {
    /// Builds a loop from row-major lift samples and its winding vector.
    pub fn new(torus: FlatTorus, samples: Vec<f64>, winding: LatticeVector) -> Result<Self, TorusError> {
        let n = torus.dim();
        if winding.len() != n {
            return Err(TorusError::DimensionMismatch { expected: n, found: winding.len() });
        }
        if !samples.len().is_multiple_of(n) {
            return Err(TorusError::MalformedLift("sample buffer is not a whole number of points"));
        }
        let count = samples.len() / n;
        if count < MIN_SAMPLES {
            return Err(TorusError::TooFewSamples(count));
        }
        if samples.iter().any(|x| !x.is_finite()) {
            return Err(TorusError::MalformedLift("non-finite sample"));
        }
        let sample = Self { torus, samples, winding };
        // successive lifted samples (including the closing one) must stay within half a turn
        for i in 0..count {
            for j in 0..n {
                let d = sample.lifted(i as isize + 1, j) - sample.lifted(i as isize, j);
                if d.abs() >= 0.5 {
                    return Err(TorusError::MalformedLift("successive samples jump by half a turn or more"));
                }
            }
        }
        Ok(sample)
    }

    /// Builds a loop from a lift that includes the closing sample `u_N`.
    ///
    /// The winding is read off as `u_N - u_0`, which must be integral.
    pub fn from_closed_lift(torus: FlatTorus, mut samples: Vec<f64>) -> Result<Self, TorusError> {
        let n = torus.dim();
        if !samples.len().is_multiple_of(n) || samples.len() < n * (MIN_SAMPLES + 1) {
            return Err(TorusError::TooFewSamples(samples.len() / n.max(1)));
        }
        let count = samples.len() / n - 1;
        let mut winding = Vec::with_capacity(n);
        for j in 0..n {
            let gap = samples[count * n + j] - samples[j];
            let k = round(gap);
            if (gap - k).abs() > LIFT_TOLERANCE {
                return Err(TorusError::MalformedLift("closing gap u_N - u_0 is not an integer"));
            }
            winding.push(k as i64);
        }
        samples.truncate(count * n);
        Self::new(torus, samples, LatticeVector(winding))
    }

    /// Samples `f(t)` on the uniform grid; `f` writes the lift value at `t`.
    pub fn from_fn<F>(torus: FlatTorus, count: usize, winding: LatticeVector, mut f: F) -> Result<Self, TorusError>
    where
        F: FnMut(f64, &mut [f64]),
    {
        let n = torus.dim();
        let mut samples = alloc::vec![0.0; count * n];
        for i in 0..count {
            let t = i as f64 / count as f64;
            f(t, &mut samples[i * n..(i + 1) * n]);
        }
        Self::new(torus, samples, winding)
    }

    /// The closed geodesic `γ_{k,q}(t) = kt + q`.
    pub fn geodesic(torus: FlatTorus, k: &LatticeVector, q: &[f64], count: usize) -> Result<Self, TorusError> {
        let n = torus.dim();
        if q.len() != n {
            return Err(TorusError::DimensionMismatch { expected: n, found: q.len() });
        }
        let kk: Vec<f64> = k.entries().iter().map(|&c| c as f64).collect();
        if kk.len() != n {
            return Err(TorusError::DimensionMismatch { expected: n, found: kk.len() });
        }
        Self::from_fn(torus, count, k.clone(), |t, out| {
            for j in 0..n {
                out[j] = kk[j] * t + q[j];
            }
        })
    }

    pub fn torus(&self) -> FlatTorus {
        self.torus
    }

    pub fn dim(&self) -> usize {
        self.torus.dim()
    }

    pub fn len(&self) -> usize {
        self.samples.len() / self.torus.dim()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn winding(&self) -> &LatticeVector {
        &self.winding
    }

    pub fn step(&self) -> f64 {
        1.0 / self.len() as f64
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 / self.len() as f64
    }

    pub fn point(&self, i: usize) -> &[f64] {
        let n = self.torus.dim();
        &self.samples[i * n..(i + 1) * n]
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Lift value at any integer index, extended by `u_{i+N} = u_i + k`.
    pub fn lifted(&self, i: isize, j: usize) -> f64 {
        let count = self.len() as isize;
        let wraps = i.div_euclid(count);
        let base = i.rem_euclid(count) as usize;
        self.samples[base * self.torus.dim() + j] + wraps as f64 * self.winding.0[j] as f64
    }

    /// Fourth-order centered derivative of coordinate `j` at sample `i`.
    pub fn derivative(&self, i: usize, j: usize) -> f64 {
        let i = i as isize;
        let h = self.step();
        (8.0 * (self.lifted(i + 1, j) - self.lifted(i - 1, j)) - (self.lifted(i + 2, j) - self.lifted(i - 2, j)))
            / (12.0 * h)
    }

    /// Three-point second difference divided by `h²`.
    pub fn second_derivative(&self, i: usize, j: usize) -> f64 {
        let i = i as isize;
        let h = self.step();
        // grouped so that affine lifts cancel exactly in the inner difference
        ((self.lifted(i + 1, j) - self.lifted(i, j)) - (self.lifted(i, j) - self.lifted(i - 1, j))) / (h * h)
    }

    /// The same loop started `shift` samples later.
    pub fn rotated(&self, shift: usize) -> Self {
        let count = self.len();
        let n = self.dim();
        let mut samples = alloc::vec![0.0; count * n];
        for i in 0..count {
            for j in 0..n {
                samples[i * n + j] = self.lifted((i + shift) as isize, j);
            }
        }
        Self { torus: self.torus, samples, winding: self.winding.clone() }
    }
}

/// A loop in `T*T^n`: a lifted base loop plus plain periodic covectors.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseLoopSample {
    base: LoopSample,
    covectors: Vec<f64>,
}

impl PhaseLoopSample {
    pub fn new(base: LoopSample, covectors: Vec<f64>) -> Result<Self, TorusError> {
        if covectors.len() != base.samples.len() {
            return Err(TorusError::DimensionMismatch { expected: base.samples.len(), found: covectors.len() });
        }
        Ok(Self { base, covectors })
    }

    /// The Hamiltonian orbit `x_{u0,k}(t) = (kt + u0, (2π)² k)`.
    pub fn free_orbit(torus: FlatTorus, k: &LatticeVector, u0: &[f64], count: usize) -> Result<Self, TorusError> {
        let base = LoopSample::geodesic(torus, k, u0, count)?;
        let v: Vec<f64> = k.entries().iter().map(|&c| FOUR_PI_SQ * c as f64).collect();
        let covectors = (0..count).flat_map(|_| v.iter().copied()).collect();
        Self::new(base, covectors)
    }

    pub fn base(&self) -> &LoopSample {
        &self.base
    }

    pub fn covector(&self, i: usize) -> &[f64] {
        let n = self.base.dim();
        &self.covectors[i * n..(i + 1) * n]
    }

    pub fn rotated(&self, shift: usize) -> Self {
        let count = self.base.len();
        let n = self.base.dim();
        let mut covectors = alloc::vec![0.0; count * n];
        for i in 0..count {
            let src = (i + shift) % count;
            covectors[i * n..(i + 1) * n].copy_from_slice(&self.covectors[src * n..(src + 1) * n]);
        }
        Self { base: self.base.rotated(shift), covectors }
    }
}

/// The time-dependent pendulum potential `V(t, u) = -cos 2π(u - kt - q0)` on `S¹`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PendulumPotentialSpec {
    pub k: i64,
    pub q0: f64,
}

impl PendulumPotentialSpec {
    pub fn new(k: i64, q0: f64) -> Self {
        Self { k, q0 }
    }

    fn phase(&self, t: f64, u: f64) -> f64 {
        2.0 * PI * (u - self.k as f64 * t - self.q0)
    }

    pub fn value(&self, t: f64, u: f64) -> f64 {
        -cos(self.phase(t, u))
    }

    /// `∂V/∂u = 2π sin 2π(u - kt - q0)`.
    pub fn du(&self, t: f64, u: f64) -> f64 {
        2.0 * PI * libm::sin(self.phase(t, u))
    }

    /// `∂²V/∂u² = 4π² cos 2π(u - kt - q0)`.
    pub fn du2(&self, t: f64, u: f64) -> f64 {
        FOUR_PI_SQ * cos(self.phase(t, u))
    }

    /// Metric gradient `∇V = (2π)^{-2} ∂V/∂u = (1/2π) sin 2π(u - kt - q0)`.
    pub fn gradient(&self, t: f64, u: f64) -> f64 {
        self.du(t, u) / FOUR_PI_SQ
    }
}

/// Wraps `x` to the representative in `[-1/2, 1/2)`.
fn wrap_half(x: f64) -> f64 {
    x - libm::floor(x + 0.5)
}

/// Winding vector recomputed from the torus points of the samples.
///
/// The samples are read modulo `Z^n`, successive increments unwrapped to the
/// nearest representative and summed around the loop. The result must agree
/// with the recorded winding of the lift.
pub fn winding_vector(lp: &LoopSample) -> Result<LatticeVector, TorusError> {
    let n = lp.dim();
    let mut computed = Vec::with_capacity(n);
    for j in 0..n {
        let turns = lift_total(lp, j);
        let k = round(turns);
        if (turns - k).abs() > LIFT_TOLERANCE {
            return Err(TorusError::MalformedLift("lift increments do not close up to an integer"));
        }
        computed.push(k as i64);
    }
    let computed = LatticeVector(computed);
    if computed != lp.winding {
        return Err(TorusError::WindingMismatch { recorded: lp.winding.0.clone(), computed: computed.0 });
    }
    Ok(computed)
}

/// Sum of torus increments (each reduced to `[-1/2, 1/2)`) around the loop.
fn lift_total(lp: &LoopSample, j: usize) -> f64 {
    let count = lp.len();
    let n = lp.dim();
    let mut total = 0.0;
    for i in 0..count {
        let here = lp.samples[i * n + j];
        let next = lp.samples[((i + 1) % count) * n + j];
        total += wrap_half(next - here);
    }
    total
}

/// Discrete energy `½ ∫ g(γ̇, γ̇) dt`.
pub fn energy(lp: &LoopSample) -> f64 {
    let count = lp.len();
    let n = lp.dim();
    let mut acc = 0.0;
    for i in 0..count {
        for j in 0..n {
            let d = lp.derivative(i, j);
            acc += d * d;
        }
    }
    0.5 * FOUR_PI_SQ * acc * lp.step()
}

/// Discrete perturbed energy `∫ ½|γ̇|² - V(t, γ) dt` on `S¹`.
pub fn perturbed_energy(lp: &LoopSample, pot: &PendulumPotentialSpec) -> Result<f64, TorusError> {
    if lp.dim() != 1 {
        return Err(TorusError::UnsupportedDimension(lp.dim()));
    }
    let potential: f64 = (0..lp.len()).map(|i| pot.value(lp.time(i), lp.point(i)[0])).sum();
    Ok(energy(lp) - potential * lp.step())
}

/// Discrete symplectic action `∫ v_j du^j - ∫ H(t, u, v) dt`.
pub fn symplectic_action<H: Hamiltonian + ?Sized>(z: &PhaseLoopSample, hamiltonian: &H) -> f64 {
    let base = z.base();
    let n = base.dim();
    let mut liouville = 0.0;
    let mut ham = 0.0;
    for i in 0..base.len() {
        let v = z.covector(i);
        for j in 0..n {
            liouville += v[j] * base.derivative(i, j);
        }
        ham += hamiltonian.value(base.time(i), base.point(i), v);
    }
    (liouville - ham) * base.step()
}

/// `H¹` distance of two loops through the embedding `T^n ⊂ C^n`.
///
/// Discretizes
/// `2∫(n - Σ cos 2π(γ^j - γ̃^j)) + (2π)² ∫ Σ ((γ̇^j)² + (γ̃̇^j)² - 2 γ̇^j γ̃̇^j cos 2π(γ^j - γ̃^j))`
/// and returns its square root.
pub fn h1_distance(a: &LoopSample, b: &LoopSample) -> Result<f64, TorusError> {
    if a.dim() != b.dim() {
        return Err(TorusError::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    if a.len() != b.len() {
        return Err(TorusError::SampleCountMismatch(a.len(), b.len()));
    }
    let n = a.dim();
    let mut position = 0.0;
    let mut velocity = 0.0;
    for i in 0..a.len() {
        for j in 0..n {
            let c = cos(2.0 * PI * (a.point(i)[j] - b.point(i)[j]));
            let (da, db) = (a.derivative(i, j), b.derivative(i, j));
            position += 1.0 - c;
            velocity += da * da + db * db - 2.0 * da * db * c;
        }
    }
    let sq = (2.0 * position + FOUR_PI_SQ * velocity) * a.step();
    Ok(sqrt(sq.max(0.0)))
}
