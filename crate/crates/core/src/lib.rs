//! Invariant theory of horizontally regular curves in the Heisenberg groups `H_n`.
//!
//! The crate computes p-curvatures and contact normality of sampled curves,
//! classifies curves by order (Wronskian rank tests), reduces degenerate
//! curves into lower Heisenberg groups by an explicit rigid motion, and
//! reconstructs curves from prescribed invariants by integrating the frame
//! ODE on the rigid-motion group `PSH(n)`.

pub mod classify;
pub mod curve;
pub mod error;
pub mod frames;
pub mod geodesics;
pub mod heis;
pub mod io;
pub mod numerics;
pub mod synth;

pub use error::{Error, Result};
pub use heis::{HPoint, Symmetry, TangentVector};
