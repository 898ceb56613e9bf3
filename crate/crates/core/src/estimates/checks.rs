use std::f64::consts::PI;

use nalgebra::DVector;
use statrs::function::gamma::gamma;

use super::constants::ConstantSet;
use super::report::{EstimateReport, RowBuilder};
use crate::error::{domain, Result};
use crate::frac_core::{
    frac_integral, frac_integral_states, mittag_leffler, panel_moments_step, rl_derivative_regular, DiscreteFn,
    GaussLegendre, TimeMesh,
};
use crate::solver::{assemble_g, ProblemSpec, Trajectory};
use crate::spectral::{sobolev_norms, SpectralBasis};

/// Squared spectral norms of a coefficient vector.
#[derive(Debug, Clone, Copy, Default)]
struct Sq {
    pub l2: f64,
    pub semi: f64,
    pub lap: f64,
}

impl Sq {
    pub fn of(basis: &SpectralBasis, d: &DVector<f64>) -> Self {
        let n = sobolev_norms(basis, d);
        Self {
            l2: n.l2 * n.l2,
            semi: n.h1_semi * n.h1_semi,
            lap: n.laplacian * n.laplacian,
        }
    }

    pub fn h1(&self) -> f64 {
        self.l2 + self.semi
    }

    pub fn h2(&self) -> f64 {
        self.l2 + self.semi + self.lap
    }
}

/// Running trapezoid integral of node samples.
pub(crate) fn running_integral(mesh: &TimeMesh, f: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(f.len());
    let mut acc = 0.0;
    out.push(0.0);
    for j in 0..mesh.intervals() {
        acc += 0.5 * mesh.step(j) * (f[j] + f[j + 1]);
        out.push(acc);
    }
    out
}

/// Running `int_0^t ||g_m||^2` by a four-point Gauss rule per panel.
fn running_source_energy(problem: &ProblemSpec, mesh: &TimeMesh) -> Vec<f64> {
    let m = problem.modes();
    let rule = GaussLegendre::new(4);
    let mut out = Vec::with_capacity(mesh.len());
    let mut acc = 0.0;
    out.push(0.0);
    for j in 0..mesh.intervals() {
        if !problem.source.is_zero() {
            acc += rule
                .on(mesh.t(j), mesh.t(j + 1))
                .map(|(t, w)| w * problem.source.eval(t, m).norm_squared())
                .sum::<f64>();
        }
        out.push(acc);
    }
    out
}

/// `c * x` with `inf * 0 = 0`, so an overflowed constant still bounds zero data.
fn scale(c: f64, x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        c * x
    }
}

fn sq(basis: &SpectralBasis, states: &[DVector<f64>]) -> Vec<Sq> {
    states.iter().map(|d| Sq::of(basis, d)).collect()
}

fn j_alpha(order: f64, mesh: &std::sync::Arc<TimeMesh>, f: Vec<f64>) -> Result<Vec<f64>> {
    Ok(frac_integral(order, &DiscreteFn::new(mesh.clone(), f)?)?.values)
}

/// Energy bounds for the mild solution: rows `L5.1a` to `T5.3`.
pub fn check_mild_estimates(
    problem: &ProblemSpec,
    traj: &Trajectory,
    constants: &ConstantSet,
    slack: f64,
) -> Result<EstimateReport> {
    let mesh = &traj.mesh;
    let basis = &problem.basis;
    let a = problem.alpha.value();
    let kap = problem.kappa;
    let cos = (0.5 * a * PI).cos();
    let t = mesh.nodes();

    let g = assemble_g(problem, mesh);
    let g_energy = running_integral(mesh, &g.iter().map(|v| v.norm_squared()).collect::<Vec<_>>());
    let u = sq(basis, &traj.states);
    let jh = sq(basis, &frac_integral_states(0.5 * a, mesh, &traj.states)?);
    let ja = sq(basis, &frac_integral_states(a, mesh, &traj.states)?);
    let j1 = sq(basis, &frac_integral_states(1.0, mesh, &traj.states)?);

    let int = |f: &dyn Fn(&Sq) -> f64, s: &[Sq]| running_integral(mesh, &s.iter().map(f).collect::<Vec<_>>());
    let jh_l2 = int(&|s| s.l2, &jh);
    let jh_semi = int(&|s| s.semi, &jh);
    let ja_h1 = int(&|s| s.h1(), &ja);
    let ja_lap = int(&|s| s.lap, &ja);
    let ja_h2 = int(&|s| s.h2(), &ja);
    let u_l2 = int(&|s| s.l2, &u);

    let (c1, c3, c4, c5) = (constants.c1.value, constants.c3.value, constants.c4.value, constants.c5.value);
    let c53 = c4 + c4 * constants.cr / kap;
    let mut rows = [
        RowBuilder::new("L5.1a", a, slack),
        RowBuilder::new("L5.1b", a, slack),
        RowBuilder::new("L5.2a", a, slack),
        RowBuilder::new("L5.2b", a, slack),
        RowBuilder::new("T5.3", a, slack).note("printed constant C4 + C4 C_R / kappa"),
    ];
    for n in 0..mesh.len() {
        let ge = g_energy[n];
        rows[0].push(t[n], cos * jh_l2[n] + kap * ja_h1[n], scale(c1, ge));
        rows[1].push(t[n], u_l2[n], scale(c3, ge));
        rows[2].push(t[n], cos * jh_semi[n] + kap * ja_lap[n], scale(c4, ge));
        rows[3].push(t[n], j1[n].h1(), scale(c5, ge));
        rows[4].push(t[n], u_l2[n] + ja_h2[n], scale(c53, ge));
    }
    Ok(EstimateReport {
        rows: rows.into_iter().map(RowBuilder::finish).collect(),
        intervals: mesh.intervals(),
        grading: mesh.grading(),
        scheme: traj.scheme.name().to_string(),
    })
}

/// `int_0^t omega_a(s) phi(s) ds` for piecewise-linear `phi`, running.
fn running_weighted_by_omega(mesh: &TimeMesh, a: f64, phi: &[f64]) -> Vec<f64> {
    let g = gamma(a);
    let mut out = Vec::with_capacity(phi.len());
    let mut acc = 0.0;
    out.push(0.0);
    for j in 0..mesh.intervals() {
        let (lo, hi) = (mesh.t(j), mesh.t(j + 1));
        let h = hi - lo;
        // m1 = int s^(a-1) (hi - s) ds weights phi_j, the rest phi_{j+1}
        let (m0, m1) = panel_moments_step(a, lo, h);
        acc += (phi[j] * m1 / h + phi[j + 1] * (m0 - m1 / h)) / g;
        out.push(acc);
    }
    out
}

/// Bounds for the classical solution (`alpha > 1/2`): rows `L6.2` to `T6.7v`.
pub fn check_classical_estimates(
    problem: &ProblemSpec,
    traj: &Trajectory,
    constants: &ConstantSet,
    slack: f64,
) -> Result<EstimateReport> {
    if !problem.alpha.classical_regime() {
        return domain(format!(
            "classical estimates assume 1/2 < alpha < 1, got alpha = {}",
            problem.alpha.value()
        ));
    }
    let k = constants.classical()?;
    let mesh = &traj.mesh;
    let basis = &problem.basis;
    let a = problem.alpha.value();
    let kap = problem.kappa;
    let t = mesh.nodes();
    let cr = constants.cr;
    let rho = constants.rho;
    let ga = gamma(a);

    let u0 = &problem.u0;
    let u0n = Sq::of(basis, u0);
    let u0_h2 = u0n.h2();
    let g_run = running_source_energy(problem, mesh);
    let g_all = *g_run.last().expect("non-empty");
    let data = u0_h2 + g_all;

    let v = traj.increments();
    let vq = sq(basis, &v);
    let z = rl_derivative_regular(a, mesh, &v)?;
    let zq = sq(basis, &z);

    let z_semi_j = j_alpha(a, mesh, zq.iter().map(|s| s.semi).collect())?;
    let v_l2_j = j_alpha(a, mesh, vq.iter().map(|s| s.l2).collect())?;
    let v_lap_int = running_integral(mesh, &vq.iter().map(|s| s.lap).collect::<Vec<_>>());
    let z_lap_int = running_integral(mesh, &zq.iter().map(|s| s.lap).collect::<Vec<_>>());
    let z_h2_int = running_integral(mesh, &zq.iter().map(|s| s.h2()).collect::<Vec<_>>());
    // int ||v'||^2 of the piecewise-linear interpolant
    let mut vdot = Vec::with_capacity(mesh.len());
    vdot.push(0.0);
    for j in 0..mesh.intervals() {
        let d = &traj.states[j + 1] - &traj.states[j];
        vdot.push(vdot[j] + d.norm_squared() / mesh.step(j));
    }
    // int ||u0 omega_a + z||_{H^2}^2 = ||u0||^2 int omega^2 + 2 int omega <u0, z> + int ||z||^2
    let cross: Vec<f64> = z
        .iter()
        .map(|zn| {
            u0.iter()
                .zip(zn.iter())
                .zip(basis.lambda())
                .map(|((p, q), l)| (1.0 + l + l * l) * p * q)
                .sum()
        })
        .collect();
    let cross_int = running_weighted_by_omega(mesh, a, &cross);

    let c6 = k.c6.value;
    let c7 = k.c7.value;
    let (c8, c9, c10, c11, c12) = (k.c8.value, k.c9.value, k.c10.value, k.c11.value, k.c12.value);
    let b = 2.0 * a - 1.0;

    let mut l62 = RowBuilder::new("L6.2", a, slack);
    l62.push(0.0, u0n.h2().sqrt(), cr * u0n.lap.sqrt());
    let mut rows = vec![
        RowBuilder::new("L6.3a", a, slack),
        RowBuilder::new("L6.3b", a, slack),
        RowBuilder::new("C6.4a", a, slack).note("synthesized C8"),
        RowBuilder::new("C6.4b", a, slack).note("synthesized C9"),
        RowBuilder::new("C6.5a", a, slack).note("synthesized C8"),
        RowBuilder::new("C6.5b", a, slack).note("synthesized C8"),
        RowBuilder::new("L6.6-M3", a, slack),
        RowBuilder::new("L6.6-M7", a, slack),
        RowBuilder::new("L6.6-M6", a, slack),
    ];
    let mut z_max: f64 = 0.0;
    let mut zj_max: f64 = 0.0;
    let mut vj_max: f64 = 0.0;
    let mut v_h1_max: f64 = 0.0;
    let mut u_h1_max: f64 = 0.0;
    for n in 0..mesh.len() {
        let tn = t[n];
        let head = c6 * u0_h2 + g_run[n];
        let e = if tn > 0.0 {
            mittag_leffler(b, c7 * tn.powf(b)).unwrap_or(f64::INFINITY)
        } else {
            1.0
        };
        let w2a = tn.powf(2.0 * a - 1.0) / gamma(2.0 * a);
        rows[0].push(tn, zq[n].l2, scale(e, head));
        rows[1].push(tn, z_semi_j[n], scale((1.0 + scale(c7 * e, w2a)) / kap, head));
        let w = tn.powf(1.0 - a) / gamma(2.0 - a);
        rows[4].push(tn, vq[n].l2, scale(c8, w * w * data));
        if tn > 0.0 {
            let lhs = vq[n].semi + kap * rho * tn.powf(a - 1.0) * v_lap_int[n];
            let rhs = tn.powf(1.0 - a) / (kap * rho) * (scale(c10 + c11, u0_h2) + scale(c10, g_all));
            rows[6].push(tn, lhs, rhs);
        }
        rows[7].push(tn, vdot[n], scale((c10 + c11) * cr * cr, u0_h2) + scale(c10, g_all));
        rows[8].push(tn, z_lap_int[n], (scale(c10 + c11, u0_h2) + scale(c10, g_all)) / (kap * kap));
        z_max = z_max.max(zq[n].l2);
        zj_max = zj_max.max(z_semi_j[n]);
        vj_max = vj_max.max(v_l2_j[n]);
        v_h1_max = v_h1_max.max(vq[n].h1());
        u_h1_max = u_h1_max.max(Sq::of(basis, &traj.states[n]).h1());
    }
    let tt = problem.horizon;
    rows[2].push(tt, z_max, scale(c8, data));
    rows[3].push(tt, zj_max, scale(c9, data));
    rows[5].push(tt, vj_max, scale(c8, tt.powf(2.0 - a) / gamma(2.0 - a) * data));

    let last = mesh.len() - 1;
    let omega_sq = tt.powf(b) / (b * ga * ga);
    let du_h2 = u0_h2 * omega_sq + 2.0 * cross_int[last] + z_h2_int[last];
    let mut t67 = RowBuilder::new("T6.7", a, slack);
    t67.push(tt, u_h1_max + vdot[last] + du_h2, scale(c12, data));
    let mut t67v = RowBuilder::new("T6.7v", a, slack).note("increment form v = u - u0");
    t67v.push(tt, v_h1_max + vdot[last] + z_h2_int[last], scale(c12, data));

    let mut out: Vec<_> = std::iter::once(l62).chain(rows).collect();
    out.push(t67);
    out.push(t67v);
    Ok(EstimateReport {
        rows: out.into_iter().map(RowBuilder::finish).collect(),
        intervals: mesh.intervals(),
        grading: mesh.grading(),
        scheme: traj.scheme.name().to_string(),
    })
}
