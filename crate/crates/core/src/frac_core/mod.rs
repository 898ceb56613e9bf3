//! Fractional calculus on graded time meshes.

mod mesh;
mod mittag_leffler;
mod ops;
mod quadrature;

pub use mesh::{DiscreteFn, FracOrder, TimeMesh};
pub use mittag_leffler::{mittag_leffler, SERIES_RADIUS};
pub use ops::{
    frac_integral, frac_integral_states, gronwall_bound, hat_moments, l1_weights, omega, rho_alpha,
    rl_derivative, rl_derivative_regular, weighted_norm_l2alpha,
};
pub(crate) use ops::{omega_unchecked, rho_alpha_raw};
pub use quadrature::{adaptive_integrate, panel_moments, panel_moments_step, GaussLegendre};
