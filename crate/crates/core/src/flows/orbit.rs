use alloc::vec::Vec;

use libm::round;

use super::FlowError;
use crate::hamiltonian::Hamiltonian;

pub const MIN_ORBIT_STEPS: usize = 100;

/// A solution of `u̇ = ∂H/∂v`, `v̇ = -∂H/∂u` on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianOrbit {
    pub dim: usize,
    pub times: Vec<f64>,
    /// Lifted positions, row-major per time.
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub period: f64,
    /// `max(|Δu - round(Δu)|, |Δv|)` over components.
    pub closure_defect: f64,
    /// `max_t |H(t, x(t)) - H(0, x0)| / |H(0, x0)|` (absolute if `H(0, x0) = 0`).
    pub energy_drift: f64,
}

impl HamiltonianOrbit {
    pub fn position(&self, i: usize) -> &[f64] {
        &self.u[i * self.dim..(i + 1) * self.dim]
    }

    pub fn momentum(&self, i: usize) -> &[f64] {
        &self.v[i * self.dim..(i + 1) * self.dim]
    }

    pub fn final_position(&self) -> &[f64] {
        self.position(self.times.len() - 1)
    }
}

fn field<H: Hamiltonian + ?Sized>(h: &H, t: f64, x: &[f64], out: &mut [f64]) {
    let n = x.len() / 2;
    let (u, v) = x.split_at(n);
    let mut gu = alloc::vec![0.0; n];
    let mut gv = alloc::vec![0.0; n];
    h.gradient(t, u, v, &mut gu, &mut gv);
    out[..n].copy_from_slice(&gv);
    for (d, g) in out[n..].iter_mut().zip(&gu) {
        *d = -g;
    }
}

/// Classical RK4 over one period.
pub fn integrate_orbit<H: Hamiltonian + ?Sized>(
    h: &H,
    u0: &[f64],
    v0: &[f64],
    steps: usize,
) -> Result<HamiltonianOrbit, FlowError> {
    if steps < MIN_ORBIT_STEPS {
        return Err(FlowError::TooFewSteps { min: MIN_ORBIT_STEPS, found: steps });
    }
    let n = u0.len();
    let dt = 1.0 / steps as f64;
    let mut x: Vec<f64> = u0.iter().chain(v0).copied().collect();
    let mut times = Vec::with_capacity(steps + 1);
    let mut us = Vec::with_capacity((steps + 1) * n);
    let mut vs = Vec::with_capacity((steps + 1) * n);
    let h0 = h.value(0.0, u0, v0);
    let mut drift = 0.0f64;
    let (mut k1, mut k2, mut k3, mut k4) = (alloc::vec![0.0; 2 * n], alloc::vec![0.0; 2 * n], alloc::vec![0.0; 2 * n], alloc::vec![0.0; 2 * n]);
    let mut tmp = alloc::vec![0.0; 2 * n];
    for i in 0..=steps {
        let t = i as f64 * dt;
        if x.iter().any(|c| !c.is_finite()) {
            return Err(FlowError::NonFinite(t));
        }
        times.push(t);
        us.extend_from_slice(&x[..n]);
        vs.extend_from_slice(&x[n..]);
        let e = h.value(t, &x[..n], &x[n..]);
        drift = drift.max(if h0 != 0.0 { ((e - h0) / h0).abs() } else { (e - h0).abs() });
        if i == steps {
            break;
        }
        field(h, t, &x, &mut k1);
        for j in 0..2 * n {
            tmp[j] = x[j] + 0.5 * dt * k1[j];
        }
        field(h, t + 0.5 * dt, &tmp, &mut k2);
        for j in 0..2 * n {
            tmp[j] = x[j] + 0.5 * dt * k2[j];
        }
        field(h, t + 0.5 * dt, &tmp, &mut k3);
        for j in 0..2 * n {
            tmp[j] = x[j] + dt * k3[j];
        }
        field(h, t + dt, &tmp, &mut k4);
        for j in 0..2 * n {
            x[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
    }
    let mut defect = 0.0f64;
    for j in 0..n {
        let du = x[j] - u0[j];
        defect = defect.max((du - round(du)).abs()).max((x[n + j] - v0[j]).abs());
    }
    Ok(HamiltonianOrbit { dim: n, times, u: us, v: vs, period: 1.0, closure_defect: defect, energy_drift: drift })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{FreeHamiltonian, PendulumHamiltonian};
    use crate::torus::FlatTorus;
    use crate::FOUR_PI_SQ;

    #[test]
    fn free_orbits_close_exactly_for_lattice_momenta() {
        let h = FreeHamiltonian::new(FlatTorus::new(1).unwrap());
        let o = integrate_orbit(&h, &[0.3], &[FOUR_PI_SQ * 2.0], 1000).unwrap();
        assert!(o.closure_defect < 1e-10);
        assert!((o.final_position()[0] - 2.3).abs() < 1e-10);
        assert!(o.energy_drift < 1e-9);
        let o = integrate_orbit(&h, &[0.0], &[FOUR_PI_SQ * 1.5], 1000).unwrap();
        assert!((o.closure_defect - 0.5).abs() < 1e-9);
    }

    #[test]
    fn pendulum_critical_orbits() {
        let h = PendulumHamiltonian::new(1, 0.2);
        for offset in [0.0, 0.5] {
            let o = integrate_orbit(&h, &[0.2 + offset], &[FOUR_PI_SQ], 1000).unwrap();
            assert!(o.closure_defect < 1e-8);
        }
        assert!(matches!(integrate_orbit(&h, &[0.0], &[0.0], 10), Err(FlowError::TooFewSteps { .. })));
    }
}
