//! Time stepping for the Galerkin system.

mod direct;
mod problem;
mod residual;
mod trajectory;
mod vie;

pub use direct::solve_direct;
pub use problem::{assemble_b, assemble_g, PowerTerm, ProblemSpec, Source, SourceTerm};
pub(crate) use problem::Operator;
pub use residual::mild_residual;
pub use trajectory::{differentiate_trajectory, fmt17, Derivatives, Scheme, Trajectory};
pub use vie::{solve_vie, solve_vie_with, RateQuadrature};
pub(crate) use vie::{march, RateKernel};
