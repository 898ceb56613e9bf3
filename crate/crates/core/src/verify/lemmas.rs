//! Discrete forms of the fractional-calculus inequalities at `t = T`, each
//! returned as `lower <= upper`.

use std::f64::consts::PI;

use nalgebra::DVector;
use statrs::function::gamma::gamma;

use crate::error::{domain, Result};
use crate::estimates::running_integral;
use crate::frac_core::{frac_integral_states, hat_moments, rho_alpha, rl_derivative_regular, FracOrder, TimeMesh};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaPair {
    pub lower: f64,
    pub upper: f64,
}

impl LemmaPair {
    /// Whether `lower <= upper + slack * scale`, `scale = max(|lower|, |upper|)`.
    pub fn holds(&self, slack: f64) -> bool {
        self.lower <= self.upper + slack * self.scale()
    }

    /// Relative deficit `(lower - upper) / scale`, negative when it holds.
    pub fn deficit(&self) -> f64 {
        let s = self.scale();
        if s == 0.0 {
            0.0
        } else {
            (self.lower - self.upper) / s
        }
    }

    fn scale(&self) -> f64 {
        self.lower.abs().max(self.upper.abs())
    }
}

fn integral(mesh: &TimeMesh, f: Vec<f64>) -> f64 {
    *running_integral(mesh, &f).last().expect("non-empty mesh")
}

/// Product-integration weights of `J^beta` at `t = T`.
fn end_weights(beta: f64, mesh: &TimeMesh) -> Vec<f64> {
    let mut w = Vec::new();
    let n = mesh.intervals();
    hat_moments(mesh, n, mesh.t(n), beta, &mut w);
    let g = gamma(beta);
    w.iter_mut().for_each(|x| *x /= g);
    w
}

fn j_at_end(beta: f64, mesh: &TimeMesh, f: Vec<f64>) -> f64 {
    end_weights(beta, mesh).iter().zip(&f).map(|(w, v)| w * v).sum()
}

fn j_states_at_end(beta: f64, mesh: &TimeMesh, v: &[DVector<f64>]) -> DVector<f64> {
    let mut acc = DVector::zeros(v[0].len());
    for (w, x) in end_weights(beta, mesh).iter().zip(v) {
        acc.axpy(*w, x, 1.0);
    }
    acc
}

fn dots(a: &[DVector<f64>], b: &[DVector<f64>]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x.dot(y)).collect()
}

/// `1/2 ||J^a v(T)||^2 <= J^a <J^a v, v>(T)`, for `1/2 < a < 1`.
pub fn positivity_pair(alpha: FracOrder, mesh: &TimeMesh, v: &[DVector<f64>]) -> Result<LemmaPair> {
    if !alpha.classical_regime() {
        return domain(format!("positivity needs 1/2 < alpha < 1, got {}", alpha.value()));
    }
    let a = alpha.value();
    let w = frac_integral_states(a, mesh, v)?;
    Ok(LemmaPair {
        lower: 0.5 * w.last().expect("non-empty").norm_squared(),
        upper: j_at_end(a, mesh, dots(&w, v)),
    })
}

/// `cos(a pi/2) int ||J^(a/2) v||^2 <= int <J^a v, v>`.
pub fn coercivity_pair(alpha: FracOrder, mesh: &TimeMesh, v: &[DVector<f64>]) -> Result<LemmaPair> {
    let a = alpha.value();
    let w = frac_integral_states(a, mesh, v)?;
    let h = frac_integral_states(0.5 * a, mesh, v)?;
    Ok(LemmaPair {
        lower: (0.5 * a * PI).cos() * integral(mesh, h.iter().map(|x| x.norm_squared()).collect()),
        upper: integral(mesh, dots(&w, v)),
    })
}

/// `||J^b phi(T)||^2 <= omega_(b+1)(T) J^b(||phi||^2)(T)`.
pub fn minkowski_pair(beta: f64, mesh: &TimeMesh, phi: &[DVector<f64>]) -> Result<LemmaPair> {
    if !(beta > 0.0) {
        return domain(format!("integral order must be positive, got {beta}"));
    }
    let tt = mesh.horizon();
    Ok(LemmaPair {
        lower: j_states_at_end(beta, mesh, phi).norm_squared(),
        upper: tt.powf(beta) / gamma(beta + 1.0) * j_at_end(beta, mesh, phi.iter().map(|x| x.norm_squared()).collect()),
    })
}

/// `||J^b phi(T)|| <= T^b / Gamma(b+1) sup ||phi||`.
pub fn jbeta_sup_pair(beta: f64, mesh: &TimeMesh, phi: &[DVector<f64>]) -> Result<LemmaPair> {
    if !(beta > 0.0) {
        return domain(format!("integral order must be positive, got {beta}"));
    }
    let sup = phi.iter().map(|x| x.norm()).fold(0.0, f64::max);
    Ok(LemmaPair {
        lower: j_states_at_end(beta, mesh, phi).norm(),
        upper: mesh.horizon().powf(beta) / gamma(beta + 1.0) * sup,
    })
}

/// `||J^b phi(T)|| <= T^(b-1/2) / (Gamma(b) sqrt(2b-1)) ||phi||_(L^2)`, `b > 1/2`.
pub fn jbeta_l2_pair(beta: f64, mesh: &TimeMesh, phi: &[DVector<f64>]) -> Result<LemmaPair> {
    if !(beta > 0.5) {
        return domain(format!("the L^2 bound needs beta > 1/2, got {beta}"));
    }
    let l2 = integral(mesh, phi.iter().map(|x| x.norm_squared()).collect()).sqrt();
    Ok(LemmaPair {
        lower: j_states_at_end(beta, mesh, phi).norm(),
        upper: mesh.horizon().powf(beta - 0.5) / (gamma(beta) * (2.0 * beta - 1.0).sqrt()) * l2,
    })
}

/// `rho_a T^(a-1) int ||v||^2 <= int <d^(1-a) v, v>` for `v(0) = 0`.
pub fn rho_coercivity_pair(alpha: FracOrder, mesh: &TimeMesh, v: &[DVector<f64>]) -> Result<LemmaPair> {
    if v[0].iter().any(|c| *c != 0.0) {
        return domain("rho coercivity needs v(0) = 0");
    }
    let a = alpha.value();
    let d = rl_derivative_regular(a, mesh, v)?;
    Ok(LemmaPair {
        lower: rho_alpha(alpha) * mesh.horizon().powf(a - 1.0) * integral(mesh, v.iter().map(|x| x.norm_squared()).collect()),
        upper: integral(mesh, dots(&d, v)),
    })
}
