//! The parabolic flow `∂_s w = ∂_t² w + ∇V(t, w)` on loops of winding `k`,
//! `∇V = (1/2π) sin 2π(w - kt - q0)`.
//!
//! Method of lines with the periodic 3-point Laplacian in `t`. Each step is
//! a Strang splitting: half a reaction step (pointwise RK4), a Crank–Nicolson
//! diffusion step on the periodic part `w - kt`, and another half reaction
//! step.

use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{round, sin};

use super::chi::chi_closed_form;
use super::FlowError;
use crate::torus::{perturbed_energy, FlatTorus, LatticeVector, LoopSample, PendulumPotentialSpec};

/// Real-axis extent of the RK4 stability region.
pub const REACTION_STABILITY: f64 = 2.785;
const SAFETY: f64 = 0.5;

/// State on the cylinder `[0, s_max] x R/Z`.
#[derive(Debug, Clone, PartialEq)]
pub struct CylinderGrid {
    pub k: i64,
    pub q0: f64,
    pub s_grid: Vec<f64>,
    pub t_grid: Vec<f64>,
    /// `w[i][j] = w(s_i, t_j)`, lifted.
    pub w: Vec<Vec<f64>>,
    /// `max_t dist(w(s_max, t), γ^+(t) + Z)`.
    pub residual: f64,
}

impl CylinderGrid {
    fn offset(&self, i: usize, j: usize) -> f64 {
        self.w[i][j] - self.k as f64 * self.t_grid[j] - self.q0
    }

    /// `max_{s,t} |w - kt - q0 - χ(s)|` against the exact ODE solution.
    pub fn ansatz_coherence(&self, chi0: f64) -> f64 {
        let mut worst = 0.0f64;
        for (i, &s) in self.s_grid.iter().enumerate() {
            let chi = chi_closed_form(chi0, s);
            for j in 0..self.t_grid.len() {
                worst = worst.max((self.offset(i, j) - chi).abs());
            }
        }
        worst
    }

    /// Distance of each slice to `γ^+` modulo integer translates.
    pub fn distance_to_plus(&self, i: usize) -> f64 {
        (0..self.t_grid.len())
            .map(|j| {
                let x = self.offset(i, j) - 0.5;
                (x - round(x)).abs()
            })
            .fold(0.0, f64::max)
    }

    /// `s ↦ I_V(w(s, ·))` on the recorded slices.
    pub fn energies(&self) -> Result<Vec<f64>, FlowError> {
        let circle = FlatTorus::new(1)?;
        let pot = PendulumPotentialSpec::new(self.k, self.q0);
        self.w
            .iter()
            .map(|row| {
                let lp = LoopSample::new(circle, row.clone(), LatticeVector::new(alloc::vec![self.k]))?;
                Ok(perturbed_energy(&lp, &pot)?)
            })
            .collect()
    }

    /// Largest per-step energy increase (`≤ 0` for a monotone flow).
    pub fn max_energy_increase(&self) -> Result<f64, FlowError> {
        let e = self.energies()?;
        Ok(e.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max))
    }
}

/// `kt + q0 + χ0 + amplitude · sin 2πt` sampled at `count` points.
pub fn ansatz_loop(k: i64, q0: f64, chi0: f64, amplitude: f64, count: usize) -> Result<LoopSample, FlowError> {
    let circle = FlatTorus::new(1)?;
    let lp = LoopSample::from_fn(circle, count, LatticeVector::new(alloc::vec![k]), |t, out| {
        out[0] = k as f64 * t + q0 + chi0 + amplitude * sin(2.0 * PI * t);
    })?;
    Ok(lp)
}

fn reaction(w: f64, phase: f64) -> f64 {
    sin(2.0 * PI * (w - phase)) / (2.0 * PI)
}

fn reaction_step(w: &mut [f64], phases: &[f64], h: f64) {
    for (x, &p) in w.iter_mut().zip(phases) {
        let k1 = reaction(*x, p);
        let k2 = reaction(*x + 0.5 * h * k1, p);
        let k3 = reaction(*x + 0.5 * h * k2, p);
        let k4 = reaction(*x + h * k3, p);
        *x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
}

/// Solves `a x_{i-1} + b x_i + a x_{i+1} = r_i` with periodic wrap-around
/// (Sherman–Morrison on the cyclic Thomas algorithm).
fn solve_cyclic(a: f64, b: f64, rhs: &[f64]) -> Vec<f64> {
    let n = rhs.len();
    let gamma = -b;
    let mut diag = alloc::vec![b; n];
    diag[0] = b - gamma;
    diag[n - 1] = b - a * a / gamma;
    let x = solve_tridiagonal(a, &diag, rhs);
    let mut u = alloc::vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = a;
    let z = solve_tridiagonal(a, &diag, &u);
    let factor = (x[0] + a * x[n - 1] / gamma) / (1.0 + z[0] + a * z[n - 1] / gamma);
    x.iter().zip(&z).map(|(xi, zi)| xi - factor * zi).collect()
}

fn solve_tridiagonal(a: f64, diag: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = rhs.len();
    let mut c = alloc::vec![0.0; n];
    let mut d = alloc::vec![0.0; n];
    c[0] = a / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - a * c[i - 1];
        c[i] = a / m;
        d[i] = (rhs[i] - a * d[i - 1]) / m;
    }
    let mut x = alloc::vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

/// Integrates from `w0` (winding `k`) up to `s_max` with step `s_step`,
/// recording every step.
pub fn solve_cylinder(k: i64, q0: f64, w0: &LoopSample, s_max: f64, s_step: f64) -> Result<CylinderGrid, FlowError> {
    if k == 0 {
        return Err(FlowError::ZeroWinding);
    }
    if w0.dim() != 1 || w0.winding().entries() != [k] {
        return Err(FlowError::WindingMismatch { expected: k, found: w0.winding().entries().to_vec() });
    }
    let bound = SAFETY * REACTION_STABILITY;
    if !(s_step > 0.0 && s_step <= bound) {
        return Err(FlowError::StepTooLarge { step: s_step, bound });
    }
    if !(s_max > 0.0) {
        return Err(FlowError::EmptyRange(0.0, s_max));
    }
    let n = w0.len();
    let dt = w0.step();
    let t_grid: Vec<f64> = (0..n).map(|j| w0.time(j)).collect();
    let drift: Vec<f64> = t_grid.iter().map(|&t| k as f64 * t).collect();
    let phases: Vec<f64> = drift.iter().map(|d| d + q0).collect();
    let steps = libm::ceil(s_max / s_step - 1e-9) as usize;
    let h = s_max / steps as f64;
    let r = h / (dt * dt);

    let mut w: Vec<f64> = w0.samples().to_vec();
    let mut rows = Vec::with_capacity(steps + 1);
    let mut s_grid = Vec::with_capacity(steps + 1);
    rows.push(w.clone());
    s_grid.push(0.0);
    for step in 1..=steps {
        reaction_step(&mut w, &phases, 0.5 * h);
        // Crank–Nicolson on the periodic part
        let periodic: Vec<f64> = w.iter().zip(&drift).map(|(x, d)| x - d).collect();
        let rhs: Vec<f64> = (0..n)
            .map(|j| {
                let lap = periodic[(j + n - 1) % n] - 2.0 * periodic[j] + periodic[(j + 1) % n];
                periodic[j] + 0.5 * r * lap
            })
            .collect();
        let next = solve_cyclic(-0.5 * r, 1.0 + r, &rhs);
        for j in 0..n {
            w[j] = next[j] + drift[j];
        }
        reaction_step(&mut w, &phases, 0.5 * h);
        let s = step as f64 * h;
        if w.iter().any(|x| !x.is_finite()) {
            return Err(FlowError::Instability { s, s_step: h, t_step: dt });
        }
        rows.push(w.clone());
        s_grid.push(s);
    }
    let mut grid = CylinderGrid { k, q0, s_grid, t_grid, w: rows, residual: 0.0 };
    grid.residual = grid.distance_to_plus(grid.w.len() - 1);
    Ok(grid)
}
