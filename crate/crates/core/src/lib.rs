//! Radial finite-difference laboratory for the damped wave equation
//! `u_tt - Δu + u_t = |u|^p` outside the unit disk in the plane.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod data;
pub mod error;
pub mod grid;
pub mod harness;
pub mod heat;
pub mod inequalities;
pub mod quad;
pub mod semilinear;
mod tridiag;
pub mod wave;
pub mod weight;

pub use error::{Error, Result};
pub use grid::{apply_laplacian, grad_norm_sq, integrate, norm, GridMeta, Measure, RadialField, RadialGrid};
