use std::sync::Arc;

use nalgebra::DVector;
use statrs::function::gamma::gamma;

use crate::error::{domain, Result};
use crate::frac_core::mittag_leffler;
use crate::solver::{solve_direct, solve_vie, Operator, ProblemSpec, Scheme, Source, SourceTerm, Trajectory};

/// `E_a(-kappa lambda t^a)`: the exact mode of the unforced problem.
pub fn mode_oracle(alpha: f64, kappa: f64, lambda: f64, t: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return domain(format!("eigenvalue must be positive, got {lambda}"));
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    mittag_leffler(alpha, -kappa * lambda * t.powf(alpha))
}

/// One separable term `c t^sigma w_k` (1-based `k`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerMode {
    pub sigma: f64,
    pub mode: usize,
    pub scale: f64,
}

impl PowerMode {
    pub fn new(sigma: f64, mode: usize) -> Self {
        Self {
            sigma,
            mode,
            scale: 1.0,
        }
    }
}

/// Manufactured solution `u(t) = sum c t^sigma w_k`, vanishing at `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Manufactured {
    pub terms: Vec<PowerMode>,
}

impl Manufactured {
    pub fn new(terms: Vec<PowerMode>) -> Self {
        Self { terms }
    }

    pub fn single(sigma: f64, mode: usize) -> Self {
        Self::new(vec![PowerMode::new(sigma, mode)])
    }

    pub fn exact(&self, t: f64, dim: usize) -> DVector<f64> {
        let mut u = DVector::zeros(dim);
        for p in &self.terms {
            u[p.mode - 1] += p.scale * t.powf(p.sigma);
        }
        u
    }

    /// The problem with `u0 = 0` and the source that makes `self` exact.
    pub fn problem(&self, base: &ProblemSpec) -> Result<ProblemSpec> {
        let source = manufactured_source(self, base)?;
        base.with_data(DVector::zeros(base.modes()), source)
    }
}

struct ManufacturedSource {
    op: Operator,
    alpha: f64,
    terms: Vec<PowerMode>,
    dim: usize,
}

impl ManufacturedSource {
    /// `(u', d^(1-a) u)` and their time derivatives.
    fn parts(&self, t: f64, rate: bool) -> [DVector<f64>; 2] {
        let a = self.alpha;
        let mut du = DVector::zeros(self.dim);
        let mut frac = DVector::zeros(self.dim);
        for p in &self.terms {
            let s = p.sigma;
            let k = p.mode - 1;
            let c = p.scale * gamma(s + 1.0) / gamma(s + a);
            if rate {
                du[k] += p.scale * s * (s - 1.0) * pow(t, s - 2.0);
                frac[k] += c * (s + a - 1.0) * pow(t, s + a - 2.0);
            } else {
                du[k] += p.scale * s * pow(t, s - 1.0);
                frac[k] += c * pow(t, s + a - 1.0);
            }
        }
        [du, frac]
    }

    fn frac_value(&self, t: f64) -> DVector<f64> {
        self.parts(t, false)[1].clone()
    }
}

fn pow(t: f64, p: f64) -> f64 {
    if p == 0.0 {
        1.0
    } else {
        t.powf(p)
    }
}

impl SourceTerm for ManufacturedSource {
    fn eval(&self, t: f64) -> DVector<f64> {
        let [du, frac] = self.parts(t, false);
        du + self.op.b(t) * frac
    }

    fn rate(&self, t: f64) -> DVector<f64> {
        let [ddu, dfrac] = self.parts(t, true);
        ddu + self.op.b(t) * dfrac + self.op.b_rate(t) * self.frac_value(t)
    }
}

/// `g = u' + B(t) d^(1-a) u` for a manufactured `u`.
pub fn manufactured_source(u: &Manufactured, problem: &ProblemSpec) -> Result<Source> {
    let alpha = problem.alpha.value();
    if u.terms.is_empty() {
        return Ok(Source::Zero);
    }
    for p in &u.terms {
        if p.sigma < alpha {
            return domain(format!(
                "manufactured exponent {} is below alpha = {alpha}; the solution is not regular enough",
                p.sigma
            ));
        }
        if p.mode == 0 || p.mode > problem.modes() {
            return domain(format!("mode {} outside 1..={}", p.mode, problem.modes()));
        }
    }
    Ok(Source::Custom(Arc::new(ManufacturedSource {
        op: problem.operator(),
        alpha,
        terms: u.terms.clone(),
        dim: problem.modes(),
    })))
}

/// Max-node `L^2` error of a trajectory against `exact`.
pub fn max_node_error(traj: &Trajectory, exact: impl Fn(f64) -> DVector<f64>) -> f64 {
    traj.mesh
        .nodes()
        .iter()
        .zip(&traj.states)
        .map(|(&t, u)| (u - exact(t)).norm())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub intervals: usize,
    pub error: f64,
    /// `log2(e_prev / e)`, absent on the first row.
    pub order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub scheme: Scheme,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    /// Order between the two finest levels.
    pub fn finest_order(&self) -> Option<f64> {
        self.rows.last().and_then(|r| r.order)
    }

    pub fn monotone(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].error < w[0].error)
    }
}

/// Errors against `exact` on default graded meshes with the given interval
/// counts, doubling between entries.
pub fn convergence_study(
    problem: &ProblemSpec,
    exact: &(dyn Fn(f64) -> DVector<f64> + Sync),
    intervals: &[usize],
    scheme: Scheme,
) -> Result<ConvergenceTable> {
    if intervals.len() < 3 || intervals.windows(2).any(|w| w[1] <= w[0]) {
        return domain("convergence study needs at least three increasing mesh sizes");
    }
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(intervals.len());
    for &n in intervals {
        let mesh = problem.default_mesh(n)?;
        let traj = match scheme {
            Scheme::Vie => solve_vie(problem, &mesh)?,
            Scheme::Direct => solve_direct(problem, &mesh)?,
        };
        let error = max_node_error(&traj, exact);
        let order = rows.last().map(|prev| {
            (prev.error / error).ln() / (n as f64 / prev.intervals as f64).ln()
        });
        rows.push(ConvergenceRow {
            intervals: n,
            error,
            order,
        });
    }
    Ok(ConvergenceTable { scheme, rows })
}
