//! Loop-space Morse and Floer computations on flat tori.
//!
//! The crate covers the concrete objects attached to the energy functional on
//! the free loop space of the flat torus `T^n = R^n / Z^n` (metric `(2π)² δ`)
//! and to the symplectic action on its cotangent bundle:
//!
//! - [`torus`]: loop discretization and the energy, perturbed energy,
//!   symplectic action and `H¹` distance functionals.
//! - [`geodesics`]: closed-form critical sets, Jacobi spectra and the
//!   pendulum-perturbed critical pair.
//! - [`homology`]: exact integer chain complexes, Smith normal form and the
//!   Bott-type Morse / Floer tables.
//! - [`symplectic`]: symplectic paths, crossing forms and Conley–Zehnder
//!   indices (generalized and nondegenerate).
//! - [`flows`]: Hamiltonian orbits, the connecting-orbit ODE and the
//!   parabolic flow on the loop cylinder.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod flows;
pub mod geodesics;
pub mod hamiltonian;
pub mod homology;
pub mod linalg;
pub mod symplectic;
pub mod torus;

pub use geodesics::{Branch, GeodesicComponent, SpectrumReport};
pub use hamiltonian::{FreeHamiltonian, Hamiltonian, PendulumHamiltonian};
pub use homology::{ChainComplex, HomologyGroup, HomologyTable, IntMatrix};
pub use symplectic::{HalfInteger, IndexResult, SymplecticPath};
pub use torus::{FlatTorus, LatticeVector, LoopSample, PendulumPotentialSpec, PhaseLoopSample};

/// `4π²`, the constant coefficient of the flat metric in angle coordinates.
pub const FOUR_PI_SQ: f64 = 4.0 * core::f64::consts::PI * core::f64::consts::PI;

/// `2π²`; the energy of a closed geodesic of winding `k` is `2π²|k|²`.
pub const TWO_PI_SQ: f64 = 2.0 * core::f64::consts::PI * core::f64::consts::PI;
