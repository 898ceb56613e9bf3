//! Piecewise-linear collocation for
//! `u(t) + B(t) J^a u(t) - int_0^t B'(s) J^a u(s) ds = G(t)`.

use nalgebra::{DMatrix, DVector};
use statrs::function::gamma::gamma;

use super::problem::{assemble_g, Operator, ProblemSpec};
use super::trajectory::{Scheme, Trajectory};
use crate::error::{Error, Result};
use crate::frac_core::{hat_moments, GaussLegendre, TimeMesh};

/// Treatment of the inner `B'` integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateQuadrature {
    /// Exact power-rule kernels; needs a forcing polynomial in time.
    Exact,
    /// Three-point Gauss rule per panel.
    Gauss,
}

pub fn solve_vie(problem: &ProblemSpec, mesh: &std::sync::Arc<TimeMesh>) -> Result<Trajectory> {
    let rate = if problem.forcing.time_polynomial_profiles().is_some() {
        RateQuadrature::Exact
    } else {
        RateQuadrature::Gauss
    };
    solve_vie_with(problem, mesh, rate)
}

pub fn solve_vie_with(
    problem: &ProblemSpec,
    mesh: &std::sync::Arc<TimeMesh>,
    rate: RateQuadrature,
) -> Result<Trajectory> {
    let op = problem.operator();
    let rhs = assemble_g(problem, mesh);
    let kernel = RateKernel::new(&op, problem.alpha.value(), rate, true)?;
    let states = march(&op, problem.alpha.value(), mesh, &rhs, &kernel)?;
    Ok(Trajectory::new(mesh.clone(), states, Scheme::Vie))
}

/// The memory term `int_0^t B'(s) J^a u(s) ds` as a linear function of the
/// newest node value.
pub(crate) enum RateKernel {
    Off,
    /// `sum_e R_e(t) int_0^t (t-s)^(e+a) u(s) ds`, `R_e(t) = sum_i c[i][e] t^(i-1-e) A_i`
    Exact {
        alpha: f64,
        parts: Vec<DMatrix<f64>>,
        coef: Vec<Vec<f64>>,
    },
    Gauss {
        alpha: f64,
        rule: GaussLegendre,
    },
}

impl RateKernel {
    pub fn new(op: &Operator, alpha: f64, rate: RateQuadrature, include: bool) -> Result<Self> {
        if !include || op.is_time_independent() {
            return Ok(RateKernel::Off);
        }
        match rate {
            RateQuadrature::Exact => {
                let parts = op.poly().ok_or_else(|| {
                    Error::Domain("exact rate kernels need a forcing polynomial in time".into())
                })?;
                let degree = parts.len() - 1;
                Ok(RateKernel::Exact {
                    alpha,
                    parts: parts.to_vec(),
                    coef: rate_coefficients(alpha, degree),
                })
            }
            RateQuadrature::Gauss => Ok(RateKernel::Gauss {
                alpha,
                rule: GaussLegendre::new(3),
            }),
        }
    }

    /// Returns `(M, r)` with `int_0^t B' J^a u = r + M u_n` for `t` in
    /// `(t_{n-1}, t_n]`. `carry` is the integral up to `t_{n-1}`.
    pub fn split(
        &self,
        op: &Operator,
        mesh: &TimeMesh,
        states: &[DVector<f64>],
        n: usize,
        t: f64,
        carry: &DVector<f64>,
        buf: &mut Vec<f64>,
    ) -> Option<(DMatrix<f64>, DVector<f64>)> {
        let dim = carry.len();
        match self {
            RateKernel::Off => None,
            RateKernel::Exact { alpha, parts, coef } => {
                let mut mat = DMatrix::zeros(dim, dim);
                let mut vec = DVector::zeros(dim);
                for e in 0..parts.len() - 1 {
                    let mut r = DMatrix::zeros(dim, dim);
                    for (i, a) in parts.iter().enumerate().skip(e + 1) {
                        let c = coef[i][e];
                        if c != 0.0 {
                            r += a * (c * t.powi((i - 1 - e) as i32));
                        }
                    }
                    let (hist, diag) = weighted(mesh, states, n, t, e as f64 + alpha + 1.0, 1.0, buf);
                    mat += &r * diag;
                    vec += r * hist;
                }
                Some((mat, vec))
            }
            RateKernel::Gauss { alpha, rule } => {
                let g = 1.0 / gamma(*alpha);
                let mut mat = DMatrix::zeros(dim, dim);
                let mut vec = carry.clone();
                for (tau, w) in rule.on(mesh.t(n - 1), t) {
                    let rate = op.b_rate(tau) * w;
                    let (hist, diag) = weighted(mesh, states, n, tau, *alpha, g, buf);
                    mat += &rate * diag;
                    vec += rate * hist;
                }
                Some((mat, vec))
            }
        }
    }

    pub fn needs_carry(&self) -> bool {
        matches!(self, RateKernel::Gauss { .. })
    }
}

/// `c[i][e]`: coefficient of `t^(i-1-e) (t-s)^(e+a)` in
/// `i int_s^t tau^(i-1) omega_a(tau - s) d tau`.
fn rate_coefficients(alpha: f64, degree: usize) -> Vec<Vec<f64>> {
    let ga = gamma(alpha);
    let mut out = vec![vec![0.0; degree.max(1)]; degree + 1];
    for (i, row) in out.iter_mut().enumerate().skip(1) {
        let p = i - 1;
        for l in 0..=p {
            for r in 0..=(p - l) {
                let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
                row[l + r] += i as f64 * sign * binom(p, l) * binom(p - l, r) / ((l as f64 + alpha) * ga);
            }
        }
    }
    out
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// History sum `sum_{j<n} w_j u_j` and the weight of `u_n` for the kernel
/// `scale (t - s)^(gamma-1)` with `t` in `(t_{n-1}, t_n]`.
pub(crate) fn weighted(
    mesh: &TimeMesh,
    states: &[DVector<f64>],
    n: usize,
    t: f64,
    gamma_: f64,
    scale: f64,
    buf: &mut Vec<f64>,
) -> (DVector<f64>, f64) {
    hat_moments(mesh, n, t, gamma_, buf);
    let mut acc = DVector::zeros(states[0].len());
    for (w, u) in buf.iter().zip(&states[..n]) {
        acc.axpy(w * scale, u, 1.0);
    }
    (acc, buf[n] * scale)
}

pub(crate) fn march(
    op: &Operator,
    alpha: f64,
    mesh: &TimeMesh,
    rhs: &[DVector<f64>],
    kernel: &RateKernel,
) -> Result<Vec<DVector<f64>>> {
    let dim = rhs[0].len();
    let ga = 1.0 / gamma(alpha);
    let mut states = Vec::with_capacity(mesh.len());
    states.push(rhs[0].clone());
    let mut carry = DVector::zeros(dim);
    let mut buf = Vec::new();
    let frozen = op.is_time_independent().then(|| op.b(0.0));
    for n in 1..mesh.len() {
        let t = mesh.t(n);
        let b = frozen.clone().unwrap_or_else(|| op.b(t));
        let (hist, diag) = weighted(mesh, &states, n, t, alpha, ga, &mut buf);
        let mut m = &b * diag;
        let mut r = &rhs[n] - &b * hist;
        let split = kernel.split(op, mesh, &states, n, t, &carry, &mut buf);
        if let Some((km, kr)) = &split {
            m -= km;
            r += kr;
        }
        for i in 0..dim {
            m[(i, i)] += 1.0;
        }
        let u = solve_step(m, r, n)?;
        if kernel.needs_carry() {
            let (km, kr) = split.expect("gauss kernel");
            carry = kr + km * &u;
        }
        states.push(u);
    }
    Ok(states)
}

/// Dense LU solve, refusing numerically singular systems.
pub(crate) fn solve_step(m: DMatrix<f64>, r: DVector<f64>, node: usize) -> Result<DVector<f64>> {
    let lu = m.lu();
    let u = lu.u();
    let diag = u.diagonal();
    let hi = diag.amax();
    let lo = diag.iter().fold(f64::INFINITY, |a, d| a.min(d.abs()));
    let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    if !(condition < 1e14) {
        return Err(Error::SingularStep { node, condition });
    }
    lu.solve(&r).ok_or(Error::SingularStep { node, condition })
}
