//! Dense 64-bit matrix arithmetic, seeded sampling, Adam, and a
//! finite-difference gradient checker.
//!
//! Everything downstream (layers, perturbations, attack scores) runs on
//! these few primitives. All reductions use a fixed iteration order so a
//! given seed reproduces bit-identical results.

mod adam;
mod gradcheck;
mod matrix;
mod rng;

pub use adam::{adam_step, AdamState};
pub use gradcheck::{grad_check, grad_check_with_floor};
pub use matrix::Matrix;
pub use rng::{derive_seed, Rng};
