use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use nalgebra::DVector;

use crate::error::{domain, Result};
use crate::frac_core::{DiscreteFn, TimeMesh};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Vie,
    Direct,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Vie => "vie",
            Scheme::Direct => "direct",
        }
    }
}

/// Galerkin coefficients `d_m(t_n)` at every node.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub mesh: Arc<TimeMesh>,
    pub states: Vec<DVector<f64>>,
    pub scheme: Scheme,
}

impl Trajectory {
    pub fn new(mesh: Arc<TimeMesh>, states: Vec<DVector<f64>>, scheme: Scheme) -> Self {
        assert_eq!(mesh.len(), states.len(), "one state per node");
        Self { mesh, states, scheme }
    }

    pub fn modes(&self) -> usize {
        self.states[0].len()
    }

    /// `v_m(t_n) = u_m(t_n) - u_{0m}`.
    pub fn increments(&self) -> Vec<DVector<f64>> {
        self.states.iter().map(|u| u - &self.states[0]).collect()
    }

    /// Coefficient `d_k`, 1-based.
    pub fn coefficient(&self, k: usize) -> DiscreteFn {
        DiscreteFn {
            mesh: self.mesh.clone(),
            values: self.states.iter().map(|u| u[k - 1]).collect(),
        }
    }

    /// Piecewise-linear value at `t`.
    pub fn at(&self, t: f64) -> DVector<f64> {
        let j = self.mesh.panel_of(t);
        let (a, b) = (self.mesh.t(j), self.mesh.t(j + 1));
        let s = ((t - a) / (b - a)).clamp(0.0, 1.0);
        &self.states[j] * (1.0 - s) + &self.states[j + 1] * s
    }

    /// Largest node-wise Euclidean distance to another trajectory on the same mesh.
    pub fn max_distance(&self, other: &Trajectory) -> f64 {
        self.states
            .iter()
            .zip(&other.states)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("t");
        for k in 1..=self.modes() {
            let _ = write!(s, ",d_{k}");
        }
        s.push('\n');
        for (t, u) in self.mesh.nodes().iter().zip(&self.states) {
            let _ = write!(s, "{}", fmt17(*t));
            for v in u.iter() {
                let _ = write!(s, ",{}", fmt17(*v));
            }
            s.push('\n');
        }
        s
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

/// Seventeen significant digits.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Difference-quotient derivatives of a trajectory and `z_n = t_n u'(t_n)`.
#[derive(Debug, Clone)]
pub struct Derivatives {
    pub first: Vec<DVector<f64>>,
    pub second: Option<Vec<DVector<f64>>>,
    pub z: Vec<DVector<f64>>,
}

/// Three-point nonuniform differences, centered inside and one-sided at the
/// ends. Order `q = 2` needs at least 16 intervals.
pub fn differentiate_trajectory(traj: &Trajectory, q: usize) -> Result<Derivatives> {
    let mesh = &traj.mesh;
    let n = mesh.intervals();
    if !(1..=2).contains(&q) {
        return domain(format!("derivative order must be 1 or 2, got {q}"));
    }
    if q == 2 && n < 16 {
        return domain(format!("second derivatives need at least 16 intervals, got {n}"));
    }
    let u = &traj.states;
    let t = mesh.nodes();
    let mut first = Vec::with_capacity(n + 1);
    first.push((&u[1] - &u[0]) / (t[1] - t[0]));
    for i in 1..n {
        let (h1, h2) = (t[i] - t[i - 1], t[i + 1] - t[i]);
        let d = &u[i - 1] * (-h2 / (h1 * (h1 + h2)))
            + &u[i] * ((h2 - h1) / (h1 * h2))
            + &u[i + 1] * (h1 / (h2 * (h1 + h2)));
        first.push(d);
    }
    first.push((&u[n] - &u[n - 1]) / (t[n] - t[n - 1]));
    let second = (q == 2).then(|| {
        let curv = |i: usize| {
            let (h1, h2) = (t[i] - t[i - 1], t[i + 1] - t[i]);
            (&u[i - 1] / (h1 * (h1 + h2)) - &u[i] / (h1 * h2) + &u[i + 1] / (h2 * (h1 + h2))) * 2.0
        };
        let mut out = Vec::with_capacity(n + 1);
        out.push(curv(1));
        out.extend((1..n).map(curv));
        out.push(curv(n - 1));
        out
    });
    let z = first.iter().zip(t).map(|(d, t)| d * *t).collect();
    Ok(Derivatives { first, second, z })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn traj(f: impl Fn(f64) -> f64, n: usize) -> Trajectory {
        let mesh = Arc::new(TimeMesh::graded(1.0, n, 2.0).unwrap());
        let states = mesh.nodes().iter().map(|&t| DVector::from_vec(vec![f(t)])).collect();
        Trajectory::new(mesh, states, Scheme::Vie)
    }

    #[test]
    fn constant_has_zero_derivative() {
        let d = differentiate_trajectory(&traj(|_| 3.0, 20), 2).unwrap();
        assert!(d.first.iter().chain(d.second.as_ref().unwrap()).all(|v| v[0].abs() < 1e-9));
    }

    #[test]
    fn quadratic_is_differentiated() {
        let tr = traj(|t| t * t, 64);
        let d = differentiate_trajectory(&tr, 2).unwrap();
        for (i, t) in tr.mesh.nodes().iter().enumerate() {
            let h = if i == 0 { tr.mesh.step(0) } else { tr.mesh.step(i - 1) };
            assert!((d.first[i][0] - 2.0 * t).abs() <= 1.01 * h + 1e-12, "i={i}");
            assert!((d.second.as_ref().unwrap()[i][0] - 2.0).abs() < 1e-8);
            assert!((d.z[i][0] - t * d.first[i][0]).abs() == 0.0);
        }
    }

    #[test]
    fn refuses_second_order_on_coarse_mesh() {
        assert!(differentiate_trajectory(&traj(|t| t, 8), 2).is_err());
        assert!(differentiate_trajectory(&traj(|t| t, 8), 1).is_ok());
        assert!(differentiate_trajectory(&traj(|t| t, 32), 3).is_err());
    }

    #[test]
    fn csv_layout() {
        let tr = traj(|t| t, 2);
        let csv = tr.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "t,d_1");
        assert_eq!(lines.len(), 4);
        let back: f64 = lines[2].split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(back, tr.states[1][0]);
    }
}
