use nalgebra::DVector;

use crate::error::{domain, Result};
use crate::frac_core::{frac_integral_states, omega_unchecked, rl_derivative_regular, TimeMesh};
use crate::solver::{differentiate_trajectory, march, ProblemSpec, RateKernel, Trajectory};

#[derive(Debug, Clone)]
pub struct ZReport {
    /// `z` solved from `z + B J^a z = t g - a B J^a u`.
    pub solved: Vec<DVector<f64>>,
    /// `G_bar = g + t g' - a (B' J^a u + B d^(1-a) u)` at nodes `1..=N`.
    pub gbar: Vec<DVector<f64>>,
    /// Max-node `L^2` distance between the solved `z` and `t u'`.
    pub residual: f64,
    /// Relative defect of `z' + B d^(1-a) z + B' J^a z = G_bar` on `[T/10, T]`.
    pub differential_residual: f64,
    /// Relative defect of `t d^(2-a) u = d^(1-a) z + (a-1) d^(1-a) u` on `[T/100, T]`.
    pub identity_residual: f64,
}

/// `d^(1-a) u` at nodes `1..=N`, with `u(0)` split off analytically.
fn rl_full(alpha: f64, mesh: &TimeMesh, states: &[DVector<f64>]) -> Result<Vec<DVector<f64>>> {
    let u0 = &states[0];
    let inc: Vec<_> = states.iter().map(|u| u - u0).collect();
    let reg = rl_derivative_regular(alpha, mesh, &inc)?;
    Ok(reg
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(n, r)| r + u0 * omega_unchecked(alpha, mesh.t(n)))
        .collect())
}

/// Three-point derivative of samples on nodes `first..=N`.
fn node_derivative(mesh: &TimeMesh, first: usize, v: &[DVector<f64>]) -> Vec<DVector<f64>> {
    let t = &mesh.nodes()[first..];
    let last = v.len() - 1;
    (0..v.len())
        .map(|i| {
            if i == 0 {
                (&v[1] - &v[0]) / (t[1] - t[0])
            } else if i == last {
                (&v[last] - &v[last - 1]) / (t[last] - t[last - 1])
            } else {
                let (h1, h2) = (t[i] - t[i - 1], t[i + 1] - t[i]);
                &v[i - 1] * (-h2 / (h1 * (h1 + h2)))
                    + &v[i] * ((h2 - h1) / (h1 * h2))
                    + &v[i + 1] * (h1 / (h2 * (h1 + h2)))
            }
        })
        .collect()
}

fn relative_defect<'a>(
    pairs: impl Iterator<Item = (DVector<f64>, DVector<f64>)> + 'a,
) -> f64 {
    let (mut num, mut den) = (0.0f64, 0.0f64);
    for (a, b) in pairs {
        num = num.max((&a - &b).norm());
        den = den.max(a.norm()).max(b.norm());
    }
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Discrete check of `t d^(2-a) u = d^(1-a) z + (a-1) d^(1-a) u` with
/// `z = t u'`, over nodes with `t >= T/100`.
pub fn uz_identity_residual(alpha: f64, traj: &Trajectory) -> Result<f64> {
    let mesh = &traj.mesh;
    if mesh.intervals() < 16 {
        return domain("identity check needs at least 16 intervals");
    }
    let d = rl_full(alpha, mesh, &traj.states)?;
    let dd = node_derivative(mesh, 1, &d);
    let z = differentiate_trajectory(traj, 1)?.z;
    let dz = rl_derivative_regular(alpha, mesh, &z)?;
    let lo = 0.01 * mesh.horizon();
    Ok(relative_defect((1..mesh.len()).filter(|&n| mesh.t(n) >= lo).map(|n| {
        let lhs = &dd[n - 1] * mesh.t(n);
        let rhs = &dz[n] + &d[n - 1] * (alpha - 1.0);
        (lhs, rhs)
    })))
}

/// Solves the equation for `z = t u'` and compares with the differentiated
/// trajectory.
pub fn z_consistency_check(problem: &ProblemSpec, traj: &Trajectory) -> Result<ZReport> {
    let a = problem.alpha.value();
    let mesh = &traj.mesh;
    let dim = problem.modes();
    let op = problem.operator();
    let t = mesh.nodes();

    let ju = frac_integral_states(a, mesh, &traj.states)?;
    let mut rhs = vec![DVector::zeros(dim)];
    for n in 1..mesh.len() {
        rhs.push(problem.source.eval(t[n], dim) * t[n] - op.b(t[n]) * &ju[n] * a);
    }
    let solved = march(&op, a, mesh, &rhs, &RateKernel::Off)?;
    let zd = differentiate_trajectory(traj, 1)?.z;
    let residual = solved
        .iter()
        .zip(&zd)
        .map(|(s, d)| (s - d).norm())
        .fold(0.0, f64::max);

    let du = rl_full(a, mesh, &traj.states)?;
    let gbar: Vec<DVector<f64>> = (1..mesh.len())
        .map(|n| {
            let tn = t[n];
            problem.source.eval(tn, dim) + problem.source.rate(tn, dim) * tn
                - (op.b_rate(tn) * &ju[n] + op.b(tn) * &du[n - 1]) * a
        })
        .collect();

    let dz = node_derivative(mesh, 0, &solved);
    let rz = rl_derivative_regular(a, mesh, &solved)?;
    let jz = frac_integral_states(a, mesh, &solved)?;
    let lo = 0.1 * mesh.horizon();
    let differential_residual = relative_defect((1..mesh.len()).filter(|&n| t[n] >= lo).map(|n| {
        let lhs = &dz[n] + op.b(t[n]) * &rz[n] + op.b_rate(t[n]) * &jz[n];
        (lhs, gbar[n - 1].clone())
    }));
    let identity_residual = uz_identity_residual(a, traj)?;
    Ok(ZReport {
        solved,
        gbar,
        residual,
        differential_residual,
        identity_residual,
    })
}

/// `int_0^T s^(2q) ||f^(q)(s)||^2 ds` for `f = g - A(t) d^(1-a) u`, `q` in
/// `{0, 1}`. The first panel assumes the `s^(2a-2)` behaviour of the layer.
pub fn f_bound(problem: &ProblemSpec, traj: &Trajectory, q: usize) -> Result<f64> {
    if q > 1 {
        return domain(format!("f-bound supports q = 0 or 1, got {q}"));
    }
    let a = problem.alpha.value();
    if !problem.alpha.classical_regime() {
        return domain(format!("f-bound assumes 1/2 < alpha < 1, got alpha = {a}"));
    }
    let mesh = &traj.mesh;
    let dim = problem.modes();
    let op = problem.operator();
    let t = mesh.nodes();
    let du = rl_full(a, mesh, &traj.states)?;
    let f: Vec<DVector<f64>> = (1..mesh.len())
        .map(|n| {
            let mut adv = op.b(t[n]);
            for (i, l) in problem.basis.lambda().iter().enumerate() {
                adv[(i, i)] -= problem.kappa * l;
            }
            problem.source.eval(t[n], dim) - adv * &du[n - 1]
        })
        .collect();
    let vals: Vec<f64> = if q == 0 {
        f.iter().map(|v| v.norm_squared()).collect()
    } else {
        node_derivative(mesh, 1, &f)
            .iter()
            .zip(&t[1..])
            .map(|(v, s)| s * s * v.norm_squared())
            .collect()
    };
    let mut acc = t[1] * vals[0] / (2.0 * a - 1.0);
    for j in 1..mesh.intervals() {
        acc += 0.5 * mesh.step(j) * (vals[j - 1] + vals[j]);
    }
    Ok(acc)
}
