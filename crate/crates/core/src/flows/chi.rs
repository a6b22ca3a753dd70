//! `χ'(s) = (1/2π) sin 2πχ(s)`, the reduction of the parabolic flow to the
//! ansatz `w(s, t) = kt + q0 + χ(s)`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{atan2, cos, exp, sin};

use super::FlowError;

/// Distance to a stationary value below which an end state is classified.
pub const LIMIT_TOLERANCE: f64 = 1e-4;
pub const MAX_WINDOW_DOUBLINGS: usize = 4;

pub fn chi_rhs(chi: f64) -> f64 {
    sin(2.0 * PI * chi) / (2.0 * PI)
}

/// Exact solution with `χ(0) = χ0 ∈ [0, 1)`: `tan πχ(s) = tan(πχ0) e^s`, on
/// the branch continuous through `χ0`.
pub fn chi_closed_form(chi0: f64, s: f64) -> f64 {
    atan2(sin(PI * chi0) * exp(s), cos(PI * chi0)) / PI
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StationaryPoint {
    Zero,
    Half,
    One,
}

impl StationaryPoint {
    pub fn value(self) -> f64 {
        match self {
            StationaryPoint::Zero => 0.0,
            StationaryPoint::Half => 0.5,
            StationaryPoint::One => 1.0,
        }
    }

    fn classify(chi: f64) -> Option<Self> {
        [StationaryPoint::Zero, StationaryPoint::Half, StationaryPoint::One]
            .into_iter()
            .find(|p| (chi - p.value()).abs() < LIMIT_TOLERANCE)
    }

    /// `0` and `1` both correspond to `γ^-`.
    pub fn is_minus(self) -> bool {
        self != StationaryPoint::Half
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowTrajectory {
    pub chi0: f64,
    pub s_grid: Vec<f64>,
    pub chi: Vec<f64>,
    /// `(s → -∞, s → +∞)` classification at the window ends.
    pub limits: (Option<StationaryPoint>, Option<StationaryPoint>),
}

impl FlowTrajectory {
    /// Max deviation from [`chi_closed_form`] over the grid.
    pub fn closed_form_error(&self) -> f64 {
        self.s_grid
            .iter()
            .zip(&self.chi)
            .map(|(&s, &c)| (c - chi_closed_form(self.chi0, s)).abs())
            .fold(0.0, f64::max)
    }

    /// `+1` strictly increasing, `-1` strictly decreasing, `0` constant, `None` otherwise.
    pub fn monotonicity(&self) -> Option<i8> {
        let diffs: Vec<f64> = self.chi.windows(2).map(|w| w[1] - w[0]).collect();
        if diffs.iter().all(|&d| d == 0.0) {
            Some(0)
        } else if diffs.iter().all(|&d| d > 0.0) {
            Some(1)
        } else if diffs.iter().all(|&d| d < 0.0) {
            Some(-1)
        } else {
            None
        }
    }
}

fn rk4_step(chi: f64, h: f64) -> f64 {
    let k1 = chi_rhs(chi);
    let k2 = chi_rhs(chi + 0.5 * h * k1);
    let k3 = chi_rhs(chi + 0.5 * h * k2);
    let k4 = chi_rhs(chi + h * k3);
    chi + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

/// Integrates `length` in `count` equal (possibly negative) steps.
fn advance(chi: f64, length: f64, count: usize) -> f64 {
    if length == 0.0 {
        return chi;
    }
    let h = length / count as f64;
    (0..count).fold(chi, |c, _| rk4_step(c, h))
}

fn classify_end(chi: f64, direction: f64, window: f64, step: f64) -> Option<StationaryPoint> {
    let mut chi = chi;
    let mut extra = window;
    for attempt in 0..=MAX_WINDOW_DOUBLINGS {
        if let Some(p) = StationaryPoint::classify(chi) {
            return Some(p);
        }
        if attempt == MAX_WINDOW_DOUBLINGS {
            break;
        }
        let count = libm::ceil(extra / step).max(1.0) as usize;
        chi = advance(chi, direction * extra, count);
        extra *= 2.0;
    }
    None
}

/// RK4 on a uniform grid of `steps` intervals over `[s_min, s_max]`, with
/// `χ(0) = chi0`.
pub fn integrate_chi(chi0: f64, s_min: f64, s_max: f64, steps: usize) -> Result<FlowTrajectory, FlowError> {
    if !(0.0..1.0).contains(&chi0) {
        return Err(FlowError::ChiOutOfRange(chi0));
    }
    if !(s_min < s_max) {
        return Err(FlowError::EmptyRange(s_min, s_max));
    }
    if steps == 0 {
        return Err(FlowError::TooFewSteps { min: 1, found: 0 });
    }
    let h = (s_max - s_min) / steps as f64;
    let lead = libm::ceil(s_min.abs() / h).max(1.0) as usize;
    let mut chi = advance(chi0, s_min, lead);
    let mut s_grid = Vec::with_capacity(steps + 1);
    let mut values = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        s_grid.push(s_min + i as f64 * h);
        values.push(chi);
        if i < steps {
            chi = rk4_step(chi, h);
        }
    }
    let window = s_max - s_min;
    let limits = (classify_end(values[0], -1.0, window, h), classify_end(values[steps], 1.0, window, h));
    Ok(FlowTrajectory { chi0, s_grid, chi: values, limits })
}

/// Connecting orbits between `γ^-` and `γ^+` modulo the `s`-shift.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectingOrbits {
    pub count: u64,
    pub parity: u64,
    pub trajectories: Vec<FlowTrajectory>,
}

impl ConnectingOrbits {
    pub fn as_pair(&self) -> (u64, u64) {
        (self.count, self.parity)
    }
}

/// Shoots from the transversals `χ(0) = ¼` and `χ(0) = ¾` and counts the
/// trajectories running from `γ^-` (`χ → 0` or `1`) to `γ^+` (`χ → ½`).
///
/// The reduced equation does not involve `k` or `q0`; they only enter the
/// precondition `k ≠ 0`.
pub fn count_connecting_orbits(k: i64, _q0: f64) -> Result<ConnectingOrbits, FlowError> {
    if k == 0 {
        return Err(FlowError::ZeroWinding);
    }
    let mut trajectories = Vec::new();
    let mut count = 0;
    for chi0 in [0.25, 0.75] {
        let traj = integrate_chi(chi0, -20.0, 20.0, 4000)?;
        if let (Some(back), Some(StationaryPoint::Half)) = traj.limits {
            if back.is_minus() {
                count += 1;
            }
        }
        trajectories.push(traj);
    }
    Ok(ConnectingOrbits { count, parity: count % 2, trajectories })
}
