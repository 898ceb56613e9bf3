use std::f64::consts::PI;

use nalgebra::DVector;
use rayon::prelude::*;
use statrs::function::gamma::gamma;

use super::mesh::{DiscreteFn, FracOrder, TimeMesh};
use super::mittag_leffler::mittag_leffler;
use super::quadrature::{panel_moments, panel_moments_step};
use crate::error::{domain, Result};

/// Kernel `omega_beta(t) = t^(beta-1) / Gamma(beta)`.
pub fn omega(beta: f64, t: f64) -> Result<f64> {
    if !(beta > 0.0) {
        return domain(format!("kernel order must be positive, got {beta}"));
    }
    if !(t >= 0.0) {
        return domain(format!("kernel argument must be non-negative, got {t}"));
    }
    if t == 0.0 && beta < 1.0 {
        return domain(format!("omega_{beta} is singular at t = 0"));
    }
    Ok(omega_unchecked(beta, t))
}

#[inline]
pub(crate) fn omega_unchecked(beta: f64, t: f64) -> f64 {
    if beta == 1.0 {
        1.0
    } else {
        t.powf(beta - 1.0) / gamma(beta)
    }
}

/// Product-integration weights for a piecewise-linear function on nodes
/// `0..=n` against the kernel `(t - s)^(gamma-1)`, with `t` in
/// `(t_{n-1}, t_n]`. Not normalised by `Gamma`.
///
/// `sum_j out[j] * u_j = int_0^t (t - s)^(gamma-1) u(s) ds` exactly.
pub fn hat_moments(mesh: &TimeMesh, n: usize, t: f64, gamma_: f64, out: &mut Vec<f64>) {
    out.clear();
    out.resize(n + 1, 0.0);
    let nodes = mesh.nodes();
    for j in 0..n {
        let h = nodes[j + 1] - nodes[j];
        let b = t - nodes[j];
        if b <= 0.0 {
            continue;
        }
        let (m0, m1) = if t >= nodes[j + 1] {
            panel_moments_step(gamma_, t - nodes[j + 1], h)
        } else {
            panel_moments(gamma_, 0.0, b)
        };
        out[j] += m0 - m1 / h;
        out[j + 1] += m1 / h;
    }
}

/// Weights `c_j = int_{t_j}^{t_{j+1}} omega_alpha(t_n - s) ds`, `j < n`.
pub fn l1_weights(mesh: &TimeMesh, n: usize, alpha: f64, out: &mut Vec<f64>) {
    out.clear();
    let nodes = mesh.nodes();
    let t = nodes[n];
    let g = gamma(alpha);
    out.extend((0..n).map(|j| {
        let (m0, _) = panel_moments_step(alpha, t - nodes[j + 1], nodes[j + 1] - nodes[j]);
        m0 / g
    }));
}

/// Riemann-Liouville integral `J^beta f` at every node by piecewise-linear
/// product integration. Node 0 is zero.
pub fn frac_integral(beta: f64, f: &DiscreteFn) -> Result<DiscreteFn> {
    if !(beta > 0.0) {
        return domain(format!("integral order must be positive, got {beta}"));
    }
    let values = integrate_rows(beta, &f.mesh, |w| {
        w.iter().zip(&f.values).map(|(w, v)| w * v).sum()
    });
    DiscreteFn::new(f.mesh.clone(), values)
}

/// `J^beta` applied coefficient-wise to a sequence of state vectors.
pub fn frac_integral_states(beta: f64, mesh: &TimeMesh, states: &[DVector<f64>]) -> Result<Vec<DVector<f64>>> {
    if !(beta > 0.0) {
        return domain(format!("integral order must be positive, got {beta}"));
    }
    check_len(mesh, states.len())?;
    let dim = states[0].len();
    Ok(integrate_rows(beta, mesh, |w| {
        let mut acc = DVector::zeros(dim);
        for (wj, s) in w.iter().zip(states) {
            acc.axpy(*wj, s, 1.0);
        }
        acc
    }))
}

fn integrate_rows<T: Send>(beta: f64, mesh: &TimeMesh, row: impl Fn(&[f64]) -> T + Sync) -> Vec<T> {
    let g = gamma(beta);
    (0..mesh.len())
        .into_par_iter()
        .map_init(Vec::new, |buf, n| {
            if n == 0 {
                return row(&[0.0]);
            }
            hat_moments(mesh, n, mesh.t(n), beta, buf);
            for w in buf.iter_mut() {
                *w /= g;
            }
            row(buf)
        })
        .collect()
}

fn check_len(mesh: &TimeMesh, len: usize) -> Result<()> {
    if len != mesh.len() {
        return domain(format!("expected {} samples, got {len}", mesh.len()));
    }
    Ok(())
}

/// Riemann-Liouville derivative `d/dt J^alpha f` at the nodes, with the
/// initial value split off: `f0 omega_alpha(t) + J^alpha (f - f0)'`.
///
/// Node 0 carries `+inf` when `f0 != 0` (the `t^(alpha-1)` singularity).
pub fn rl_derivative(alpha: FracOrder, f: &DiscreteFn, f0: f64) -> DiscreteFn {
    let a = alpha.value();
    let mesh = &f.mesh;
    let values = derivative_rows(a, mesh, |n, c| {
        if n == 0 {
            return if f0 == 0.0 { 0.0 } else { f64::INFINITY };
        }
        let mut acc = f0 * omega_unchecked(a, mesh.t(n));
        for (j, cj) in c.iter().enumerate() {
            acc += cj * (f.values[j + 1] - f.values[j]) / mesh.step(j);
        }
        acc
    });
    DiscreteFn {
        mesh: mesh.clone(),
        values,
    }
}

/// Vector version of [`rl_derivative`] for states `u = u0 + v`; returns the
/// regular part `J^alpha v'` only (`v(0) = 0`), the singular term
/// `u0 omega_alpha(t)` is left to the caller.
pub fn rl_derivative_regular(alpha: f64, mesh: &TimeMesh, states: &[DVector<f64>]) -> Result<Vec<DVector<f64>>> {
    check_len(mesh, states.len())?;
    let dim = states[0].len();
    Ok(derivative_rows(alpha, mesh, |_, c| {
        let mut acc = DVector::zeros(dim);
        for (j, cj) in c.iter().enumerate() {
            let h = mesh.step(j);
            acc.axpy(cj / h, &states[j + 1], 1.0);
            acc.axpy(-cj / h, &states[j], 1.0);
        }
        acc
    }))
}

fn derivative_rows<T: Send>(alpha: f64, mesh: &TimeMesh, row: impl Fn(usize, &[f64]) -> T + Sync) -> Vec<T> {
    (0..mesh.len())
        .into_par_iter()
        .map_init(Vec::new, |buf, n| {
            l1_weights(mesh, n, alpha, buf);
            row(n, buf)
        })
        .collect()
}

/// Fractional Gronwall bound `a E_beta(b t^beta)` for constant `a`, `b`.
pub fn gronwall_bound(beta: f64, a: f64, b: f64, t: f64) -> Result<f64> {
    if !(beta > 0.0) || a < 0.0 || b < 0.0 || t < 0.0 {
        return domain("Gronwall bound needs beta > 0 and non-negative a, b, t");
    }
    Ok(a * mittag_leffler(beta, b * t.powf(beta))?)
}

/// Coercivity constant `rho_alpha` of the Riemann-Liouville derivative.
pub fn rho_alpha(alpha: FracOrder) -> f64 {
    rho_alpha_raw(alpha.value())
}

pub(crate) fn rho_alpha_raw(a: f64) -> f64 {
    PI.powf(1.0 - a) * (1.0 - a).powf(1.0 - a) / (2.0 - a).powf(2.0 - a) * (0.5 * PI * a).sin()
}

/// Weighted norm `max_n sqrt(J^order(|v|^2)(t_n))` from samples of `|v|^2`.
/// `order = 1` reduces to the plain `L^2(0, T)` norm.
pub fn weighted_norm_l2alpha(order: f64, normsq: &DiscreteFn) -> Result<f64> {
    if !(order > 0.0 && order <= 1.0) {
        return domain(format!("weight order must lie in (0, 1], got {order}"));
    }
    if let Some(v) = normsq.values.iter().find(|v| !(**v >= 0.0)) {
        return domain(format!("squared norms must be non-negative, got {v}"));
    }
    let j = frac_integral(order, normsq)?;
    Ok(j.values.iter().fold(0.0f64, |m, v| m.max(*v)).sqrt())
}
