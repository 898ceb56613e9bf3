//! Spectral Galerkin solvers for the time-fractional Fokker-Planck equation
//! with time-dependent drift, plus instruments that check the a priori
//! estimates and regularity rates on computed solutions.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod estimates;
pub mod frac_core;
pub mod solver;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
