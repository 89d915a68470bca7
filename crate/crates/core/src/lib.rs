//! Exact Barnes Wall lattice magic monotones.
//!
//! The crate computes the Barnes Wall norm `N(ψ)` (the squared length of the shortest
//! `BW_n` lattice vector proportional to `ψ`) exactly over `Q(i)`, certifies upper bounds
//! on its approximate variant `N_δ`, enumerates stabilizer states, runs brute-force
//! stabilizer rank and fidelity oracles, and implements fidelity amplification of
//! approximate stabilizer decompositions of `|H⟩^⊗n`.
//!
//! Conventions shared by every module:
//! - amplitude index `x = x₁x₂…x_n` is big-endian, qubit 0 is the most significant bit;
//! - exact amplitudes live in [`ExactScalar`] (`Q(ζ16)`), lattice work stays in `Q(i)`.

pub mod amplify;
pub mod bwlattice;
pub mod cliffstab;
pub mod error;
pub mod gint;
pub mod io;
pub mod rankoracle;
pub mod statevec;
pub mod verify;

pub use error::{Error, Result};
pub use gint::{ExactScalar, GaussianInt, Unit};
pub use statevec::{Decomposition, ExactState, FloatState};
