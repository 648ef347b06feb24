//! Homogeneous CR submanifolds of complex hyperbolic space `CH^n` arising as
//! orbits of subgroups of the solvable Iwasawa group `AN`.
//!
//! The Lie algebra `a + n = RB + g_alpha + RZ` is modelled on `R^{2n}` with the
//! flat layout `[a, Re v_1, Im v_1, ..., z]`, the Euclidean inner product and
//! the complex structure `J(aB + v + zZ) = -zB + iv + aZ`.

pub mod classification;
pub mod congruence;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod lie;
pub mod sample;
pub mod subspace;
pub mod tol;
pub mod verify;

pub use error::{Error, Result};
