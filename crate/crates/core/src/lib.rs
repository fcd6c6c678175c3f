//! Numerical constructions for displacement operators U(z) = exp(z a† - z̄ a)
//! and their phase-extended variant U(z, t) = exp(z a† - z̄ a + i t N) on
//! truncated Fock spaces, together with the closed-form identities they
//! satisfy: disentangled orderings, exchange phases, matrix elements,
//! resolution-of-unity quadratures, regularized traces, and the su(1,1)
//! squeeze family built from the same ladder.
//!
//! Every closed form has a brute-force counterpart (matrix exponentials on a
//! finite truncation), and the crate is organized so the two routes stay
//! independent: `matrix` and `oscillator` provide the brute-force side,
//! `kernels`, `coherent` and `extended` the closed forms, `phase_space` the
//! quadrature realizations that tie them together.

pub mod coherent;
mod compensated;
pub mod error;
pub mod extended;
pub mod exec;
pub mod kernels;
pub mod matrix;
pub mod oscillator;
pub mod phase_space;

pub use error::{Error, Result};
pub use matrix::{CMatrix, CVector, TruncationConfig};
pub use num_complex::Complex64;
