//! Finite-dimensional Hopf algebras over finite fields.

pub use finhopf_core as core;

pub mod check;
pub mod hopf;
pub mod nichols;
pub mod lie;
pub mod extension;
pub mod twist;
pub mod cohomology;
pub mod scenario;
