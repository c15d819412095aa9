//! Exact simulation and verification of IQP circuits for the 2-Forrelation problem.
//!
//! The crate is organised bottom-up:
//!
//! - [`cube`]: Boolean-cube primitives (Hamming weight, GF(2) inner product, the
//!   normalised Walsh–Hadamard transform, the quadratic form `Q` and the σ tables).
//! - [`forrelation`]: Φ, Φ_odd, Φ_even, function tables, padding and samplers.
//! - [`iqp`]: exact output distributions of `H^⊗m · D · H^⊗m` circuits, plus a small
//!   gate-level reference engine for the two standard BQP forrelation circuits.
//! - [`circuits`]: the single-query constructions, their randomised combination and
//!   the two-run absolute-value procedure.
//! - [`growth`]: acceptance probabilities as multilinear polynomials in the oracle
//!   bits, restrictions, query composition and the `√min{|F|, 2ⁿ}` audit.
//!
//! With the default `parallel` feature, transforms and batch loops run on rayon.
//! Every parallel path produces bit-identical results to the sequential one.

pub mod circuits;
pub mod cube;
mod error;
pub mod forrelation;
pub mod growth;
pub mod iqp;
pub mod par;
pub mod rng;

pub use error::{Error, Result};
