//! Multi-qubit entanglement witnesses built from static structure factors.
//!
//! The witness `W(k) = 1 - Sigma(k)` combines nearest-to-farthest two-point
//! Pauli correlations weighted by `cos(k (r_j - r_i))`. Product states always
//! give `<W(k)> >= 0`, so a negative expectation certifies entanglement.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;

pub mod bisep;
pub mod correl;
pub mod noise;
pub mod pauli;
pub mod qstate;
pub mod sampling;
pub mod witness;

pub use num_complex::Complex64 as C64;
pub use num_rational::Ratio;

pub use error::{Error, Result};
pub use pauli::PauliAxis;
pub use qstate::{BlochVector, Branch, DensityMatrix, QubitState, StateVector};
pub use witness::WitnessSpec;
