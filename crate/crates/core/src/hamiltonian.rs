//! Hamiltonians on `T*T^n` in the coordinates `(u, v)`.

use core::f64::consts::PI;

use libm::{cos, sin};

use crate::torus::FlatTorus;
use crate::FOUR_PI_SQ;

/// Step of the central-difference gradient used when no analytic one exists.
pub const GRADIENT_STEP: f64 = 1e-6;

/// A (possibly time-dependent) Hamiltonian `H(t, u, v)`.
pub trait Hamiltonian {
    fn value(&self, t: f64, u: &[f64], v: &[f64]) -> f64;

    /// Writes `∂H/∂u` and `∂H/∂v`. The default uses central differences.
    fn gradient(&self, t: f64, u: &[f64], v: &[f64], du: &mut [f64], dv: &mut [f64]) {
        central_gradient(|uu, vv| self.value(t, uu, vv), u, v, du, dv);
    }
}

impl<F> Hamiltonian for F
where
    F: Fn(f64, &[f64], &[f64]) -> f64,
{
    fn value(&self, t: f64, u: &[f64], v: &[f64]) -> f64 {
        self(t, u, v)
    }
}

fn central_gradient<F>(f: F, u: &[f64], v: &[f64], du: &mut [f64], dv: &mut [f64])
where
    F: Fn(&[f64], &[f64]) -> f64,
{
    let h = GRADIENT_STEP;
    let mut uu = alloc::vec::Vec::from(u);
    let mut vv = alloc::vec::Vec::from(v);
    for j in 0..u.len() {
        let c = uu[j];
        uu[j] = c + h;
        let fp = f(&uu, &vv);
        uu[j] = c - h;
        let fm = f(&uu, &vv);
        uu[j] = c;
        du[j] = (fp - fm) / (2.0 * h);
    }
    for j in 0..v.len() {
        let c = vv[j];
        vv[j] = c + h;
        let fp = f(&uu, &vv);
        vv[j] = c - h;
        let fm = f(&uu, &vv);
        vv[j] = c;
        dv[j] = (fp - fm) / (2.0 * h);
    }
}

/// Free Hamiltonian `H(u, v) = ½|v|²_g = |v|² / (2 (2π)²)`.
#[derive(Debug, Clone, Copy)]
pub struct FreeHamiltonian {
    torus: FlatTorus,
}

impl FreeHamiltonian {
    pub fn new(torus: FlatTorus) -> Self {
        Self { torus }
    }

    pub fn torus(&self) -> FlatTorus {
        self.torus
    }
}

impl Hamiltonian for FreeHamiltonian {
    fn value(&self, _t: f64, _u: &[f64], v: &[f64]) -> f64 {
        0.5 * v.iter().map(|c| c * c).sum::<f64>() / FOUR_PI_SQ
    }

    fn gradient(&self, _t: f64, _u: &[f64], v: &[f64], du: &mut [f64], dv: &mut [f64]) {
        du.fill(0.0);
        for (d, c) in dv.iter_mut().zip(v) {
            *d = c / FOUR_PI_SQ;
        }
    }
}

/// `H(t, u, v) = ½ (v / 2π)² - cos 2π(u - kt - u0)` on `T*S¹`.
#[derive(Debug, Clone, Copy)]
pub struct PendulumHamiltonian {
    pub k: i64,
    pub u0: f64,
}

impl PendulumHamiltonian {
    pub fn new(k: i64, u0: f64) -> Self {
        Self { k, u0 }
    }

    fn phase(&self, t: f64, u: f64) -> f64 {
        2.0 * PI * (u - self.k as f64 * t - self.u0)
    }
}

impl Hamiltonian for PendulumHamiltonian {
    fn value(&self, t: f64, u: &[f64], v: &[f64]) -> f64 {
        0.5 * v[0] * v[0] / FOUR_PI_SQ - cos(self.phase(t, u[0]))
    }

    fn gradient(&self, t: f64, u: &[f64], v: &[f64], du: &mut [f64], dv: &mut [f64]) {
        du[0] = 2.0 * PI * sin(self.phase(t, u[0]));
        dv[0] = v[0] / FOUR_PI_SQ;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_gradients_match_central_differences() {
        let h = PendulumHamiltonian::new(2, 0.15);
        let (u, v) = ([0.37], [3.1]);
        let (mut du, mut dv) = ([0.0], [0.0]);
        h.gradient(0.4, &u, &v, &mut du, &mut dv);
        let (mut du2, mut dv2) = ([0.0], [0.0]);
        central_gradient(|uu, vv| h.value(0.4, uu, vv), &u, &v, &mut du2, &mut dv2);
        assert!((du[0] - du2[0]).abs() < 1e-6);
        assert!((dv[0] - dv2[0]).abs() < 1e-8);
    }

    #[test]
    fn closures_are_hamiltonians() {
        let quad = |_t: f64, u: &[f64], v: &[f64]| u[0] * u[0] + 3.0 * v[0];
        let (mut du, mut dv) = ([0.0], [0.0]);
        quad.gradient(0.0, &[0.5], &[1.0], &mut du, &mut dv);
        assert!((du[0] - 1.0).abs() < 1e-8);
        assert!((dv[0] - 3.0).abs() < 1e-8);
    }
}
