//! Sine eigenbasis on an interval, spectral norms and the drift operator.

mod basis;
mod forcing;

pub use basis::{sobolev_norms, SobolevNorms, SpectralBasis, SpectralField};
pub use forcing::{ForcingField, ForcingModel, ForcingNorms, Profile};
