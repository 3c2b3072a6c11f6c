//! Finite element solver for one-way coupled thermo-elasticity in transversely isotropic,
//! strain-limiting solids.
//!
//! The temperature is found first from steady heat conduction. Its gradient then drives
//! the nonlinear momentum balance `−∇·σ(ε(u)) = −α∇θ` with
//! `σ(ε) = 𝔼[ε] / (1 − (b‖𝔼^{1/2}[ε]‖)^a)^{1/a}`, solved by Picard iteration on Q1/Q2
//! quadrilaterals of an edge-cracked unit square.

// `!(x < y)` is used on purpose so that NaN lands on the failure branch.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod assembly;
pub mod config;
pub mod constitutive;
pub mod error;
pub mod fe;
pub mod mesh;
pub mod postprocess;
pub mod quadrature;
pub mod runner;
pub mod solver;
pub mod sparse;
pub mod tensor;

pub use error::{ConfigError, Error, Result};
