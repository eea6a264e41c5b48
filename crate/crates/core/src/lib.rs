//! Numerical laboratory for one-dimensional quantum models whose ground
//! levels may or may not respect a symmetry of the Hamiltonian.
//!
//! The crate builds finite-difference Hamiltonians on uniform grids
//! ([`lattice`]), solves the symmetric tridiagonal eigenproblem with Sturm
//! bisection and inverse iteration ([`eigen`]), carries a zoo of concrete
//! potentials with their analytic oracles ([`models`]), provides symmetry
//! operators and ground-level breakdown verdicts ([`symmetry`]), solves the
//! transcendental quantization conditions of the finite square double well
//! ([`quantize`]), and implements a two-channel oscillator model with a
//! broken internal symmetry ([`spinor`]).
//!
//! ```
//! use ssb_core::eigen::eigensolve;
//! use ssb_core::lattice::{assemble_hamiltonian, build_grid};
//!
//! // harmonic oscillator, hbar = m = omega = 1
//! let grid = build_grid(-8.0, 8.0, 801).unwrap();
//! let v: Vec<f64> = grid.samples().iter().map(|&x| 0.5 * x * x).collect();
//! let op = assemble_hamiltonian(&grid, &v, 1.0, 1.0).unwrap();
//! let spectrum = eigensolve(&op, 3, &grid).unwrap();
//! for (k, &e) in spectrum.levels().iter().enumerate() {
//!     assert!((e - (k as f64 + 0.5)).abs() < 1e-3);
//! }
//! ```

pub mod eigen;
pub mod error;
pub mod lattice;
pub mod models;
pub mod quantize;
pub mod spinor;
pub mod symmetry;

pub use error::{Error, Result};
