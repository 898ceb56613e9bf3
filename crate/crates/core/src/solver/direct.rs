//! Backward-difference/L1 stepping for `u' + B(t) d^(1-a) u = g` with the
//! split `u = u0 + v`.

use std::sync::Arc;

use nalgebra::DVector;
use statrs::function::gamma::gamma;

use super::problem::{assemble_g, ProblemSpec};
use super::trajectory::{Scheme, Trajectory};
use super::vie::solve_step;
use crate::error::Result;
use crate::frac_core::{l1_weights, TimeMesh};

pub fn solve_direct(problem: &ProblemSpec, mesh: &Arc<TimeMesh>) -> Result<Trajectory> {
    let op = problem.operator();
    let a = problem.alpha.value();
    let g = assemble_g(problem, mesh);
    let u0 = &problem.u0;
    let dim = problem.modes();
    let frozen = op.is_time_independent().then(|| op.b(0.0));
    let ga1 = gamma(a + 1.0);

    let mut states: Vec<DVector<f64>> = Vec::with_capacity(mesh.len());
    // difference quotients (u_{j+1} - u_j) / h_j
    let mut slopes: Vec<DVector<f64>> = Vec::with_capacity(mesh.intervals());
    states.push(u0.clone());
    let mut c = Vec::new();
    for n in 1..mesh.len() {
        let (t0, t1) = (mesh.t(n - 1), mesh.t(n));
        let h = t1 - t0;
        let b = frozen.clone().unwrap_or_else(|| op.b(t1));
        l1_weights(mesh, n, a, &mut c);
        let mut hist = DVector::zeros(dim);
        for (cj, s) in c.iter().zip(&slopes) {
            hist.axpy(*cj, s, 1.0);
        }
        // omega_a averaged over the panel
        let singular = (t1.powf(a) - t0.powf(a)) / (ga1 * h);
        hist.axpy(singular, u0, 1.0);
        let cn = c[n - 1];
        let prev = &states[n - 1];
        let mut m = &b * cn;
        for i in 0..dim {
            m[(i, i)] += 1.0;
        }
        let r = prev + &b * (prev * cn - hist * h) + (&g[n] - &g[n - 1]);
        let u = solve_step(m, r, n)?;
        slopes.push((&u - prev) / h);
        states.push(u);
    }
    Ok(Trajectory::new(mesh.clone(), states, Scheme::Direct))
}
