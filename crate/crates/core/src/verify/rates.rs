use nalgebra::DVector;

use crate::error::{domain, Result};
use crate::solver::{differentiate_trajectory, ProblemSpec, Trajectory};
use crate::spectral::sobolev_norms;

/// Least-squares power law `value ~ exp(intercept) t^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub exponent: f64,
    pub intercept: f64,
    /// Largest absolute residual in log space.
    pub max_residual: f64,
    pub window: (f64, f64),
    pub samples: usize,
}

/// Fits `log value` against `log t` over samples with `t` in the closed window.
pub fn fit_rate(samples: &[(f64, f64)], window: (f64, f64)) -> Result<RateFit> {
    let (lo, hi) = window;
    if !(lo > 0.0 && hi > lo) {
        return domain(format!("fit window ({lo}, {hi}) must satisfy 0 < lo < hi"));
    }
    let mut pts = Vec::new();
    for &(t, v) in samples.iter().filter(|(t, _)| *t >= lo && *t <= hi) {
        if !(v > 0.0) {
            return domain(format!("nonpositive sample {v} at t = {t}"));
        }
        pts.push((t.ln(), v.ln()));
    }
    if pts.len() < 5 {
        return domain(format!("only {} samples in window ({lo}, {hi}), need 5", pts.len()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let max_residual = pts
        .iter()
        .map(|p| (p.1 - intercept - exponent * p.0).abs())
        .fold(0.0, f64::max);
    Ok(RateFit {
        exponent,
        intercept,
        max_residual,
        window,
        samples: pts.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularityConfig {
    /// Derivative order, at most 2.
    pub q: usize,
    /// Source strength exponent, `||g^(j)(t)|| <= M t^(eta-1-j)`.
    pub eta: Option<f64>,
    pub source_bound: f64,
    pub window: (f64, f64),
}

impl RegularityConfig {
    /// Order `q` with the default window `(1e-3 T, 1e-1 T)`.
    pub fn new(q: usize, horizon: f64) -> Self {
        Self {
            q,
            eta: None,
            source_bound: 0.0,
            window: (1e-3 * horizon, 1e-1 * horizon),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateRow {
    /// `u`, `lap_u` and the derivative order, e.g. `u^(1)`.
    pub quantity: String,
    pub fit: RateFit,
    /// Exponent of `t^q` times the quantity.
    pub weighted_exponent: f64,
    /// Slowest admissible decay of the weighted quantity.
    pub required: f64,
    pub pass: bool,
    /// Informational rows do not affect the overall verdict.
    pub informational: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularityReport {
    pub alpha: f64,
    pub q: usize,
    pub rows: Vec<RateRow>,
}

impl RegularityReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().filter(|r| !r.informational).all(|r| r.pass)
    }
}

/// Tolerance on fitted exponents.
pub const EXPONENT_TOL: f64 = 0.1;

/// Early-time slopes of `||u^(q)||` and `||Lap u^(q)||` against the bounds
/// `t^q ||u^(q)|| <~ t^(1/2)` and `t^q ||Lap u^(q)|| <~ t^(-(a-1/2))`.
pub fn check_regularity_rates(
    problem: &ProblemSpec,
    traj: &Trajectory,
    config: &RegularityConfig,
) -> Result<RegularityReport> {
    let a = problem.alpha.value();
    if !problem.alpha.classical_regime() {
        return domain(format!("regularity rates assume 1/2 < alpha < 1, got alpha = {a}"));
    }
    if config.q > 2 {
        return domain(format!("derivative order {} exceeds 2", config.q));
    }
    let (lo, hi) = config.window;
    if !(lo > 0.0) {
        return domain(format!("fit window ({lo}, {hi}) touches t = 0"));
    }
    if hi > problem.horizon {
        return domain(format!("fit window ({lo}, {hi}) exceeds the horizon {}", problem.horizon));
    }
    let q = config.q;
    let fields: Vec<DVector<f64>> = match q {
        0 => traj.states.clone(),
        _ => {
            let d = differentiate_trajectory(traj, q)?;
            if q == 1 {
                d.first
            } else {
                d.second.expect("second derivative requested")
            }
        }
    };
    let t = traj.mesh.nodes();
    let norms: Vec<_> = fields.iter().map(|d| sobolev_norms(&problem.basis, d)).collect();
    let l2: Vec<_> = t.iter().zip(&norms).map(|(&t, n)| (t, n.l2)).collect();
    let lap: Vec<_> = t.iter().zip(&norms).map(|(&t, n)| (t, n.laplacian)).collect();
    let qf = q as f64;
    let mut rows = Vec::new();
    let mut row = |quantity: String, samples: &[(f64, f64)], required: f64, informational: bool| -> Result<()> {
        let fit = fit_rate(samples, config.window)?;
        let weighted_exponent = qf + fit.exponent;
        rows.push(RateRow {
            quantity,
            fit,
            weighted_exponent,
            required,
            pass: weighted_exponent >= required - EXPONENT_TOL,
            informational,
        });
        Ok(())
    };
    let name = |base: &str| if q == 0 { base.to_string() } else { format!("{base}^({q})") };
    if q == 0 {
        row(name("u"), &l2, 0.0, false)?;
    } else {
        row(name("u"), &l2, 0.5, false)?;
        row(name("lap_u"), &lap, 0.5 - a, false)?;
    }
    if let Some(eta) = config.eta {
        let required = if problem.u0.iter().any(|c| *c != 0.0) { eta.min(a) } else { eta };
        row(format!("{}_eta", name("u")), &l2, required, true)?;
    }
    Ok(RegularityReport { alpha: a, q, rows })
}
