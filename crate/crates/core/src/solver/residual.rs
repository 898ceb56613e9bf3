//! Residual of the integrated equation
//! `u + B J^a u - int_0^t B' J^a u - G` at panel midpoints.

use nalgebra::DVector;
use rayon::prelude::*;
use statrs::function::gamma::gamma;

use super::problem::ProblemSpec;
use super::trajectory::Trajectory;
use super::vie::{weighted, RateKernel, RateQuadrature};
use crate::error::Result;

/// Discrete `L^2(0,T; L^2)` norm of the mild residual, one sample per panel.
pub fn mild_residual(problem: &ProblemSpec, traj: &Trajectory) -> Result<f64> {
    let op = problem.operator();
    let alpha = problem.alpha.value();
    let mesh = &traj.mesh;
    let states = &traj.states;
    let dim = problem.modes();
    let rate = if op.poly().is_some() {
        RateQuadrature::Exact
    } else {
        RateQuadrature::Gauss
    };
    let kernel = RateKernel::new(&op, alpha, rate, true)?;

    // carries of the memory integral at the nodes, only needed by the Gauss kernel
    let mut carries = vec![DVector::zeros(dim)];
    if kernel.needs_carry() {
        let mut buf = Vec::new();
        for n in 1..mesh.len() {
            let (m, r) = kernel
                .split(&op, mesh, states, n, mesh.t(n), &carries[n - 1], &mut buf)
                .expect("gauss kernel");
            carries.push(r + m * &states[n]);
        }
    }
    let mut g_nodes = Vec::with_capacity(mesh.len());
    let mut acc = problem.u0.clone();
    g_nodes.push(acc.clone());
    for j in 0..mesh.intervals() {
        acc += problem.source.integral(mesh.t(j), mesh.t(j + 1), dim);
        g_nodes.push(acc.clone());
    }

    let ga = 1.0 / gamma(alpha);
    let total: f64 = (1..mesh.len())
        .into_par_iter()
        .map(|n| {
            let mut buf = Vec::new();
            let (lo, hi) = (mesh.t(n - 1), mesh.t(n));
            let tau = 0.5 * (lo + hi);
            let u = (&states[n - 1] + &states[n]) * 0.5;
            let (hist, diag) = weighted(mesh, states, n, tau, alpha, ga, &mut buf);
            let ju = hist + &states[n] * diag;
            let mut r = u + op.b(tau) * ju - &g_nodes[n - 1] - problem.source.integral(lo, tau, dim);
            let carry = carries.get(n - 1).cloned().unwrap_or_else(|| DVector::zeros(dim));
            if let Some((m, v)) = kernel.split(&op, mesh, states, n, tau, &carry, &mut buf) {
                r -= v + m * &states[n];
            }
            (hi - lo) * r.norm_squared()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum();
    Ok(total.sqrt())
}
