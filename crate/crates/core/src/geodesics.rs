//! Critical sets of the energy functional and their second variation.
//!
//! On the flat torus the closed geodesics are the affine loops
//! `γ_{k,q}(t) = kt + q`; for fixed `k` they form a critical torus `G^k` of
//! energy `2π²|k|²`, Morse index 0 and nullity `n`. The pendulum potential
//! on `S¹` splits `G^k` into the pair `γ^- = kt + q0`, `γ^+ = kt + q0 + ½`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{floor, sin, sqrt};
use thiserror::Error;

use crate::torus::{FlatTorus, LatticeVector, LoopSample, PendulumPotentialSpec, TorusError};
use crate::{FOUR_PI_SQ, TWO_PI_SQ};

/// Relative slack on the action bound, absorbing roundoff in `a = 2π²|k|²`.
pub const ACTION_BOUND_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeodesicError {
    #[error("the perturbation needs a nonconstant geodesic (k != 0)")]
    ZeroWinding,
    #[error(transparent)]
    Torus(#[from] TorusError),
}

/// Critical component `G^k ≅ T^n` of the energy functional.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicComponent {
    pub k: LatticeVector,
    pub energy_value: f64,
    pub dim_component: usize,
    pub morse_index: usize,
    pub nullity: usize,
}

impl GeodesicComponent {
    pub fn new(k: LatticeVector) -> Self {
        let n = k.len();
        Self { energy_value: TWO_PI_SQ * k.norm_sq() as f64, dim_component: n, morse_index: 0, nullity: n, k }
    }
}

/// Every `G^l` with `2π²|l|² ≤ a`, in lexicographic order of `l`.
pub fn enumerate_components(torus: FlatTorus, action_bound: f64) -> Vec<GeodesicComponent> {
    if !(action_bound >= 0.0) {
        return Vec::new();
    }
    let radius_sq = action_bound / TWO_PI_SQ * (1.0 + ACTION_BOUND_SLACK);
    lattice_ball(torus.dim(), radius_sq).into_iter().map(GeodesicComponent::new).collect()
}

/// Lattice points `l ∈ Z^n` with `|l|² ≤ radius_sq`, lexicographically sorted.
pub fn lattice_ball(dim: usize, radius_sq: f64) -> Vec<LatticeVector> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(dim);
    fill_ball(dim, radius_sq, &mut current, &mut out);
    out
}

fn fill_ball(dim: usize, budget: f64, current: &mut Vec<i64>, out: &mut Vec<LatticeVector>) {
    if current.len() == dim {
        out.push(LatticeVector::new(current.clone()));
        return;
    }
    let reach = floor(sqrt(budget.max(0.0))) as i64;
    for c in -reach..=reach {
        let rest = budget - (c * c) as f64;
        if rest < 0.0 {
            continue;
        }
        current.push(c);
        fill_ball(dim, rest, current, out);
        current.pop();
    }
}

/// Max-norm of `d²γ/dt²` by the centered second difference.
pub fn geodesic_residual(lp: &LoopSample) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..lp.len() {
        for j in 0..lp.dim() {
            worst = worst.max(lp.second_derivative(i, j).abs());
        }
    }
    worst
}

/// Eigenvalues with multiplicities, plus the index bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<(f64, usize)>,
    pub kernel_dim: usize,
    pub negative_count: usize,
}

impl SpectrumReport {
    fn from_sorted(eigenvalues: Vec<(f64, usize)>) -> Self {
        let negative_count = eigenvalues.iter().filter(|(v, _)| *v < 0.0).map(|(_, m)| m).sum();
        let kernel_dim = eigenvalues.iter().filter(|(v, _)| *v == 0.0).map(|(_, m)| m).sum();
        Self { eigenvalues, kernel_dim, negative_count }
    }
}

/// Fourier spectrum of the Jacobi operator `-d²/dt²` on `R^n`-valued loops.
///
/// Mode `l` contributes `4π²l²` with multiplicity `n` (for `l = 0`) or `2n`.
pub fn jacobi_spectrum(torus: FlatTorus, mode_cutoff: usize) -> SpectrumReport {
    let n = torus.dim();
    let eigenvalues = (0..=mode_cutoff)
        .map(|l| {
            let mult = if l == 0 { n } else { 2 * n };
            (FOUR_PI_SQ * (l * l) as f64, mult)
        })
        .collect();
    SpectrumReport::from_sorted(eigenvalues)
}

/// Which member of the perturbed critical pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `γ^-(t) = kt + q0`, the maximum of the potential term; Morse index 1.
    Minus,
    /// `γ^+(t) = kt + q0 + ½`; Morse index 0.
    Plus,
}

impl Branch {
    pub fn offset(self) -> f64 {
        match self {
            Branch::Minus => 0.0,
            Branch::Plus => 0.5,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Branch::Minus => "-",
            Branch::Plus => "+",
        }
    }

    /// Sign `s` in `L_V ξ = -ξ̈ - s ξ`.
    fn potential_sign(self) -> f64 {
        match self {
            Branch::Minus => 1.0,
            Branch::Plus => -1.0,
        }
    }
}

/// Spectrum of `L_V^∓ ξ = -ξ̈ ∓ ξ`: eigenvalues `4π²l² ∓ 1`.
pub fn perturbed_jacobi_spectrum(branch: Branch, mode_cutoff: usize) -> SpectrumReport {
    let shift = branch.potential_sign();
    let eigenvalues = (0..=mode_cutoff)
        .map(|l| (FOUR_PI_SQ * (l * l) as f64 - shift, if l == 0 { 1 } else { 2 }))
        .collect();
    SpectrumReport::from_sorted(eigenvalues)
}

/// The two critical points of the perturbed energy in `Λ_k S¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbedCriticalPair {
    pub potential: PendulumPotentialSpec,
    pub gamma_minus: LoopSample,
    pub gamma_plus: LoopSample,
    /// Morse indices of `(γ^-, γ^+)`.
    pub indices: (usize, usize),
    /// Perturbed actions of `(γ^-, γ^+)`.
    pub actions: (f64, f64),
}

impl PerturbedCriticalPair {
    pub fn loop_for(&self, branch: Branch) -> &LoopSample {
        match branch {
            Branch::Minus => &self.gamma_minus,
            Branch::Plus => &self.gamma_plus,
        }
    }
}

/// `γ^- = kt + q0` and `γ^+ = kt + q0 + ½` sampled with `count` points.
pub fn perturbed_critical_points(k: i64, q0: f64, count: usize) -> Result<PerturbedCriticalPair, GeodesicError> {
    if k == 0 {
        return Err(GeodesicError::ZeroWinding);
    }
    let circle = FlatTorus::new(1)?;
    let winding = LatticeVector::new(alloc::vec![k]);
    let gamma_minus = LoopSample::geodesic(circle, &winding, &[q0 + Branch::Minus.offset()], count)?;
    let gamma_plus = LoopSample::geodesic(circle, &winding, &[q0 + Branch::Plus.offset()], count)?;
    let kinetic = TWO_PI_SQ * (k * k) as f64;
    let indices = (
        perturbed_jacobi_spectrum(Branch::Minus, 0).negative_count,
        perturbed_jacobi_spectrum(Branch::Plus, 0).negative_count,
    );
    Ok(PerturbedCriticalPair {
        potential: PendulumPotentialSpec::new(k, q0),
        gamma_minus,
        gamma_plus,
        indices,
        actions: (kinetic + 1.0, kinetic - 1.0),
    })
}

/// Max-norm of `-γ̈(t) - (1/2π) sin 2π(γ(t) - kt - q0)` on the samples.
pub fn perturbed_residual(lp: &LoopSample, pot: &PendulumPotentialSpec) -> Result<f64, GeodesicError> {
    if lp.dim() != 1 {
        return Err(TorusError::UnsupportedDimension(lp.dim()).into());
    }
    let mut worst = 0.0f64;
    for i in 0..lp.len() {
        let t = lp.time(i);
        let u = lp.point(i)[0];
        let r = -lp.second_derivative(i, 0) - sin(2.0 * PI * (u - pot.k as f64 * t - pot.q0)) / (2.0 * PI);
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::energy;

    #[test]
    fn component_counts() {
        let c1 = FlatTorus::new(1).unwrap();
        let c2 = FlatTorus::new(2).unwrap();
        let ks: Vec<_> = enumerate_components(c1, TWO_PI_SQ).into_iter().map(|c| c.k.entries()[0]).collect();
        assert_eq!(ks, [-1, 0, 1]);
        let ks: Vec<_> = enumerate_components(c2, TWO_PI_SQ).into_iter().map(|c| c.k.entries().to_vec()).collect();
        assert_eq!(ks, [[-1, 0], [0, -1], [0, 0], [0, 1], [1, 0]]);
        for n in 1..=3 {
            let t = FlatTorus::new(n).unwrap();
            let only = enumerate_components(t, 0.0);
            assert_eq!(only.len(), 1);
            assert!(only[0].k.is_zero());
            assert!(enumerate_components(t, -1.0).is_empty());
        }
    }

    #[test]
    fn counts_match_box_brute_force() {
        for n in 1..=3usize {
            let t = FlatTorus::new(n).unwrap();
            for a in [0.0, 5.0, TWO_PI_SQ, 3.0 * TWO_PI_SQ, 40.0, 9.0 * TWO_PI_SQ] {
                let reach = libm::ceil(sqrt(a / TWO_PI_SQ)) as i64;
                let side = (2 * reach + 1) as usize;
                let mut count = 0;
                for idx in 0..side.pow(n as u32) {
                    let mut rest = idx;
                    let mut norm = 0i64;
                    for _ in 0..n {
                        let c = (rest % side) as i64 - reach;
                        rest /= side;
                        norm += c * c;
                    }
                    if TWO_PI_SQ * norm as f64 <= a * (1.0 + ACTION_BOUND_SLACK) {
                        count += 1;
                    }
                }
                assert_eq!(enumerate_components(t, a).len(), count, "n={n} a={a}");
            }
        }
    }

    #[test]
    fn sampled_representatives_have_component_energy() {
        let t = FlatTorus::new(3).unwrap();
        for c in enumerate_components(t, 3.0 * TWO_PI_SQ) {
            let lp = LoopSample::geodesic(t, &c.k, &[0.1, 0.2, 0.3], 16).unwrap();
            assert!((energy(&lp) - c.energy_value).abs() < 1e-9 * c.energy_value.max(1.0));
            assert_eq!(c.nullity, 3);
            assert_eq!(c.morse_index, 0);
        }
    }

    #[test]
    fn residual_examples() {
        let circle = FlatTorus::new(1).unwrap();
        let g = LoopSample::geodesic(circle, &LatticeVector::new(alloc::vec![3]), &[0.25], 64).unwrap();
        assert!(geodesic_residual(&g) < 1e-9);
        let wobble = LoopSample::from_fn(circle, 2048, LatticeVector::new(alloc::vec![1]), |s, u| {
            u[0] = s + 0.1 * sin(2.0 * PI * s)
        })
        .unwrap();
        assert!((geodesic_residual(&wobble) - 0.1 * FOUR_PI_SQ).abs() < 1e-4);
    }

    #[test]
    fn jacobi_spectra() {
        let s = jacobi_spectrum(FlatTorus::new(1).unwrap(), 2);
        assert_eq!(s.eigenvalues, [(0.0, 1), (FOUR_PI_SQ, 2), (4.0 * FOUR_PI_SQ, 2)]);
        for n in 1..=4 {
            let s = jacobi_spectrum(FlatTorus::new(n).unwrap(), 3);
            assert_eq!(s.kernel_dim, n);
            assert_eq!(s.negative_count, 0);
        }
        let minus = perturbed_jacobi_spectrum(Branch::Minus, 1);
        assert_eq!(minus.eigenvalues, [(-1.0, 1), (FOUR_PI_SQ - 1.0, 2)]);
        assert_eq!(minus.negative_count, 1);
        assert_eq!(minus.kernel_dim, 0);
        let plus = perturbed_jacobi_spectrum(Branch::Plus, 0);
        assert_eq!(plus.eigenvalues, [(1.0, 1)]);
        assert_eq!(plus.negative_count, 0);
        assert_eq!(plus.kernel_dim, 0);
    }

    #[test]
    fn perturbed_pair() {
        assert_eq!(perturbed_critical_points(0, 0.0, 64).unwrap_err(), GeodesicError::ZeroWinding);
        let pair = perturbed_critical_points(1, 0.0, 64).unwrap();
        assert_eq!(pair.indices, (1, 0));
        assert_eq!(pair.actions, (TWO_PI_SQ + 1.0, TWO_PI_SQ - 1.0));

        let pair = perturbed_critical_points(3, 0.2, 256).unwrap();
        assert!((pair.gamma_plus.point(0)[0] - 0.7).abs() < 1e-15);
        assert!((pair.gamma_plus.point(128)[0] - (1.5 + 0.7)).abs() < 1e-12);
        for branch in [Branch::Minus, Branch::Plus] {
            assert!(perturbed_residual(pair.loop_for(branch), &pair.potential).unwrap() < 1e-9);
        }
        let quarter = LoopSample::geodesic(FlatTorus::new(1).unwrap(), &LatticeVector::new(alloc::vec![3]), &[0.45], 256)
            .unwrap();
        let r = perturbed_residual(&quarter, &pair.potential).unwrap();
        assert!((r - 1.0 / (2.0 * PI)).abs() < 1e-9);
    }
}
