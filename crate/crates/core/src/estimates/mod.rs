//! Explicit constants of the a priori bounds and checks of each inequality
//! against computed trajectories.

mod checks;
mod constants;
mod report;

pub use checks::{check_classical_estimates, check_mild_estimates};
pub(crate) use checks::running_integral;
pub use constants::{
    compute_classical_constants, compute_constants, constants_from, scan_constants, ClassicalConstants, Constant,
    ConstantInputs, ConstantScan, ConstantSet, ScanRow, DEFAULT_ALPHA_GRID,
};
pub use report::{EstimateReport, EstimateRow, DEFAULT_SLACK};
