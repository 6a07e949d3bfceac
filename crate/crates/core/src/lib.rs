//! Hessian discretisations for fourth-order semilinear elliptic problems.
//!
//! The crate builds structured meshes of the unit square and the L-shaped
//! domain, realises the Morley, Adini and gradient-recovery (GR) Hessian
//! discretisations as per-cell evaluation tables, assembles the residual and
//! Jacobian of the resulting scheme for the stream-function Navier--Stokes
//! (one unknown) and von Kármán (two unknowns) problems, and solves it with
//! Newton's method on top of a sparse LU factorisation.
//!
//! Everything here is pure computation: no IO, no threads. Cell-parallel
//! assembly is expressed through the [`exec::CellExecutor`] trait so that a
//! std companion can plug in a thread pool while this crate stays `no_std`.
#![no_std]
#![deny(rust_2018_idioms)]
#![warn(missing_debug_implementations)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod assembly;
pub mod dense;
pub mod discretisation;
mod error;
pub mod exec;
pub mod jet;
pub mod math;
pub mod mesh;
pub mod problems;
pub mod quadrature;
pub mod solver;
pub mod sparse;
pub mod study;
pub mod tensor;

pub use error::{Error, Result};
