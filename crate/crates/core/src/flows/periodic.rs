//! Shooting search for 1-periodic solutions of `ÿ = -(1/2π) sin 2πy`, the
//! equation of the deviation `y = γ - kt - q0` of a critical point of the
//! perturbed energy. Only `y ≡ 0` and `y ≡ ½` (mod 1) are expected.

use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{floor, sin};

const SHOOT_STEPS: usize = 200;
const NEWTON_ITERATIONS: usize = 40;
const NEWTON_TOLERANCE: f64 = 1e-11;
const FD_STEP: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicSolution {
    /// `y(0)` reduced to `[0, 1)`.
    pub y0: f64,
    pub p0: f64,
    /// `max_t |y(t) - y(0)|` along the solution.
    pub amplitude: f64,
}

fn rhs(y: f64) -> f64 {
    -sin(2.0 * PI * y) / (2.0 * PI)
}

/// Time-1 map, plus the oscillation amplitude when `track` is set.
fn shoot(y0: f64, p0: f64, track: bool) -> (f64, f64, f64) {
    let h = 1.0 / SHOOT_STEPS as f64;
    let (mut y, mut p) = (y0, p0);
    let mut amplitude = 0.0f64;
    for _ in 0..SHOOT_STEPS {
        let (k1y, k1p) = (p, rhs(y));
        let (k2y, k2p) = (p + 0.5 * h * k1p, rhs(y + 0.5 * h * k1y));
        let (k3y, k3p) = (p + 0.5 * h * k2p, rhs(y + 0.5 * h * k2y));
        let (k4y, k4p) = (p + h * k3p, rhs(y + h * k3y));
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        if track {
            amplitude = amplitude.max((y - y0).abs());
        }
    }
    (y, p, amplitude)
}

fn residual(y0: f64, p0: f64) -> (f64, f64) {
    let (y, p, _) = shoot(y0, p0, false);
    (y - y0, p - p0)
}

fn newton(mut y0: f64, mut p0: f64) -> Option<(f64, f64)> {
    for _ in 0..NEWTON_ITERATIONS {
        let (f1, f2) = residual(y0, p0);
        if f1.abs().max(f2.abs()) < NEWTON_TOLERANCE {
            return Some((y0, p0));
        }
        let (a1, a2) = residual(y0 + FD_STEP, p0);
        let (b1, b2) = residual(y0, p0 + FD_STEP);
        let j = [(a1 - f1) / FD_STEP, (b1 - f1) / FD_STEP, (a2 - f2) / FD_STEP, (b2 - f2) / FD_STEP];
        let det = j[0] * j[3] - j[1] * j[2];
        if det.abs() < 1e-14 {
            return None;
        }
        let dy = (j[3] * f1 - j[1] * f2) / det;
        let dp = (-j[2] * f1 + j[0] * f2) / det;
        y0 -= dy;
        p0 -= dp;
        if !(y0.is_finite() && p0.is_finite()) || p0.abs() > 100.0 {
            return None;
        }
    }
    None
}

/// Multi-start Newton shooting from a `grid x grid` array of initial data
/// `(y0, p0) ∈ [0, 1) x [-2, 2]`; returns the distinct solutions found.
pub fn find_periodic_solutions(grid: usize) -> Vec<PeriodicSolution> {
    let mut found: Vec<PeriodicSolution> = Vec::new();
    for a in 0..grid {
        for b in 0..grid {
            let y0 = (a as f64 + 0.5) / grid as f64;
            let p0 = -2.0 + 4.0 * (b as f64 + 0.5) / grid as f64;
            let Some((y, p)) = newton(y0, p0) else {
                continue;
            };
            let reduced = y - floor(y);
            let reduced = if reduced > 1.0 - 1e-8 { 0.0 } else { reduced };
            let duplicate = found.iter().any(|s| {
                let d = (s.y0 - reduced).abs();
                d.min(1.0 - d) < 1e-6 && (s.p0 - p).abs() < 1e-6
            });
            if !duplicate {
                let (_, _, amplitude) = shoot(y, p, true);
                found.push(PeriodicSolution { y0: reduced, p0: p, amplitude });
            }
        }
    }
    found.sort_by(|a, b| a.y0.total_cmp(&b.y0));
    found
}
