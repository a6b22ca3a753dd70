//! Numerical dynamics: Hamiltonian orbits, the connecting-orbit ODE, the
//! parabolic flow on the loop cylinder and a shooting probe for periodic
//! solutions of the perturbed problem.

mod chi;
mod cylinder;
mod orbit;
mod periodic;

use thiserror::Error;

pub use chi::{
    chi_closed_form, chi_rhs, count_connecting_orbits, integrate_chi, ConnectingOrbits, FlowTrajectory, StationaryPoint,
    LIMIT_TOLERANCE, MAX_WINDOW_DOUBLINGS,
};
pub use cylinder::{ansatz_loop, solve_cylinder, CylinderGrid, REACTION_STABILITY};
pub use orbit::{integrate_orbit, HamiltonianOrbit};
pub use periodic::{find_periodic_solutions, PeriodicSolution};

use crate::torus::TorusError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("need at least {min} steps, got {found}")]
    TooFewSteps { min: usize, found: usize },
    #[error("initial value {0} is outside [0, 1)")]
    ChiOutOfRange(f64),
    #[error("empty parameter range [{0}, {1}]")]
    EmptyRange(f64, f64),
    #[error("the flow needs a nonzero winding")]
    ZeroWinding,
    #[error("step {step} exceeds the stability bound {bound}")]
    StepTooLarge { step: f64, bound: f64 },
    #[error("solution blew up at s = {s} (s_step = {s_step}, t_step = {t_step})")]
    Instability { s: f64, s_step: f64, t_step: f64 },
    #[error("non-finite state at t = {0}")]
    NonFinite(f64),
    #[error("initial loop has winding {found:?}, expected [{expected}]")]
    WindingMismatch { expected: i64, found: alloc::vec::Vec<i64> },
    #[error(transparent)]
    Torus(#[from] TorusError),
}
