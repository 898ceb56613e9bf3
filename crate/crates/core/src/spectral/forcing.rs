use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use super::basis::SpectralBasis;
use crate::error::{domain, Result};

const NORM_SAMPLES_T: usize = 257;
const NORM_SAMPLES_X: usize = 513;

/// Polynomial in `x`: `a_0 + a_1 x + a_2 x^2 + ...`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Profile(pub Vec<f64>);

impl Profile {
    pub fn constant(c: f64) -> Self {
        Self(vec![c])
    }

    pub fn value(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, a| acc * x + a)
    }

    pub fn slope(&self, x: f64) -> f64 {
        self.0
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (i, a)| acc * x + i as f64 * a)
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(|a| *a == 0.0)
    }
}

/// A drift field `F(t, x)` given by closures.
pub trait ForcingField: Send + Sync {
    /// `(d/dt)^order F` and its `x`-derivative at `(t, x)`, `order <= 2`.
    fn sample(&self, order: usize, t: f64, x: f64) -> (f64, f64);
}

#[derive(Clone)]
enum Kind {
    Zero,
    /// `sum_i t^i c_i(x)`
    TimePolynomial(Vec<Profile>),
    General(Arc<dyn ForcingField>),
}

/// `||F||_inf`, `||F||_{1,inf}`, `||F'||_inf`, `||F'||_{1,inf}` over
/// `[0, T] x [0, L]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ForcingNorms {
    pub sup: f64,
    pub sup_w1: f64,
    pub rate_sup: f64,
    pub rate_sup_w1: f64,
}

#[derive(Clone)]
pub struct ForcingModel {
    kind: Kind,
    norms: ForcingNorms,
}

impl fmt::Debug for ForcingModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.kind {
            Kind::Zero => "zero".to_string(),
            Kind::TimePolynomial(p) => format!("{p:?}"),
            Kind::General(_) => "general".to_string(),
        };
        f.debug_struct("ForcingModel")
            .field("kind", &kind)
            .field("norms", &self.norms)
            .finish()
    }
}

impl ForcingModel {
    pub fn zero() -> Self {
        Self {
            kind: Kind::Zero,
            norms: ForcingNorms::default(),
        }
    }

    pub fn constant(c: f64) -> Self {
        let a = c.abs();
        let kind = if c == 0.0 {
            Kind::Zero
        } else {
            Kind::TimePolynomial(vec![Profile::constant(c)])
        };
        Self {
            kind,
            norms: ForcingNorms {
                sup: a,
                sup_w1: a,
                rate_sup: 0.0,
                rate_sup_w1: 0.0,
            },
        }
    }

    /// `F(t, x) = sum_i t^i c_i(x)` with norms estimated on `[0, T] x [0, L]`.
    pub fn time_polynomial(profiles: Vec<Profile>, length: f64, horizon: f64) -> Result<Self> {
        check_box(length, horizon)?;
        if profiles.iter().any(|p| p.0.iter().any(|a| !a.is_finite())) {
            return domain("forcing coefficients must be finite");
        }
        if profiles.iter().all(Profile::is_zero) {
            return Ok(Self::zero());
        }
        let mut model = Self {
            kind: Kind::TimePolynomial(profiles),
            norms: ForcingNorms::default(),
        };
        model.norms = model.estimate_norms(length, horizon);
        Ok(model)
    }

    pub fn general(field: Arc<dyn ForcingField>, length: f64, horizon: f64) -> Result<Self> {
        check_box(length, horizon)?;
        let mut model = Self {
            kind: Kind::General(field),
            norms: ForcingNorms::default(),
        };
        model.norms = model.estimate_norms(length, horizon);
        Ok(model)
    }

    /// Replace the estimated norms by user-declared ones.
    pub fn with_norms(mut self, norms: ForcingNorms) -> Self {
        self.norms = norms;
        self
    }

    pub fn norms(&self) -> ForcingNorms {
        self.norms
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.kind, Kind::Zero)
    }

    pub fn is_time_independent(&self) -> bool {
        match &self.kind {
            Kind::Zero => true,
            Kind::TimePolynomial(p) => p.iter().skip(1).all(Profile::is_zero),
            Kind::General(_) => false,
        }
    }

    /// Spatial coefficients `c_i` when `F` is polynomial in time.
    pub fn time_polynomial_profiles(&self) -> Option<&[Profile]> {
        match &self.kind {
            Kind::Zero => Some(&[]),
            Kind::TimePolynomial(p) => Some(p),
            Kind::General(_) => None,
        }
    }

    /// `(d/dt)^order F` and its `x`-derivative.
    pub fn sample(&self, order: usize, t: f64, x: f64) -> (f64, f64) {
        match &self.kind {
            Kind::Zero => (0.0, 0.0),
            Kind::TimePolynomial(p) => {
                let mut v = 0.0;
                let mut s = 0.0;
                for (i, c) in p.iter().enumerate().skip(order) {
                    let f = falling(i, order) * t.powi((i - order) as i32);
                    v += f * c.value(x);
                    s += f * c.slope(x);
                }
                (v, s)
            }
            Kind::General(g) => g.sample(order, t, x),
        }
    }

    fn estimate_norms(&self, length: f64, horizon: f64) -> ForcingNorms {
        let mut n = ForcingNorms::default();
        let mut max_fx: f64 = 0.0;
        let mut max_rx: f64 = 0.0;
        for i in 0..NORM_SAMPLES_T {
            let t = horizon * i as f64 / (NORM_SAMPLES_T - 1) as f64;
            for j in 0..NORM_SAMPLES_X {
                let x = length * j as f64 / (NORM_SAMPLES_X - 1) as f64;
                let (f, fx) = self.sample(0, t, x);
                let (r, rx) = self.sample(1, t, x);
                n.sup = n.sup.max(f.abs());
                max_fx = max_fx.max(fx.abs());
                n.rate_sup = n.rate_sup.max(r.abs());
                max_rx = max_rx.max(rx.abs());
            }
        }
        n.sup_w1 = n.sup + max_fx;
        n.rate_sup_w1 = n.rate_sup + max_rx;
        n
    }

    /// Galerkin matrix `A_jk = <(G w_k)', w_j>` with `G = (d/dt)^order F(t)`.
    pub fn advection_matrix(&self, basis: &SpectralBasis, t: f64, order: usize) -> DMatrix<f64> {
        let m = basis.modes();
        if self.is_zero() {
            return DMatrix::zeros(m, m);
        }
        let (a, ax): (Vec<f64>, Vec<f64>) = basis
            .quad_nodes()
            .iter()
            .map(|&x| self.sample(order, t, x))
            .unzip();
        basis.flux_matrix(&a, &ax)
    }

    /// Matrices `A_i` with `A(t) = sum_i t^i A_i` for time-polynomial `F`.
    pub fn time_coefficient_matrices(&self, basis: &SpectralBasis) -> Option<Vec<DMatrix<f64>>> {
        let profiles = self.time_polynomial_profiles()?;
        Some(
            profiles
                .iter()
                .map(|c| {
                    let (a, ax): (Vec<f64>, Vec<f64>) = basis
                        .quad_nodes()
                        .iter()
                        .map(|&x| (c.value(x), c.slope(x)))
                        .unzip();
                    basis.flux_matrix(&a, &ax)
                })
                .collect(),
        )
    }
}

fn falling(i: usize, k: usize) -> f64 {
    (0..k).map(|j| (i - j) as f64).product()
}

fn check_box(length: f64, horizon: f64) -> Result<()> {
    if !(length > 0.0 && horizon > 0.0) {
        return domain("forcing norms need a positive domain length and horizon");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn zero_forcing_gives_zero_matrix() {
        let b = SpectralBasis::new(PI, 4).unwrap();
        assert_eq!(ForcingModel::zero().advection_matrix(&b, 0.3, 0).amax(), 0.0);
    }

    #[test]
    fn constant_forcing_entries() {
        let b = SpectralBasis::new(PI, 4).unwrap();
        let a = ForcingModel::constant(1.0).advection_matrix(&b, 0.0, 0);
        for k in 0..4 {
            assert!(a[(k, k)].abs() < 1e-14);
        }
        // (2/pi) int_0^pi cos(x) sin(2x) dx = 8 / (3 pi)
        assert_relative_eq!(a[(1, 0)], 8.0 / (3.0 * PI), max_relative = 1e-13);
        // rate of a constant field vanishes
        assert_eq!(ForcingModel::constant(1.0).advection_matrix(&b, 0.0, 1).amax(), 0.0);
    }

    #[test]
    fn time_polynomial_derivatives() {
        let f = ForcingModel::time_polynomial(
            vec![Profile(vec![1.0, 2.0]), Profile::constant(0.5), Profile(vec![0.0, 0.0, 3.0])],
            1.0,
            2.0,
        )
        .unwrap();
        let (t, x) = (0.7, 0.3);
        let (v, s) = f.sample(0, t, x);
        assert_relative_eq!(v, 1.0 + 2.0 * x + 0.5 * t + 3.0 * x * x * t * t, max_relative = 1e-14);
        assert_relative_eq!(s, 2.0 + 6.0 * x * t * t, max_relative = 1e-14);
        let (v1, _) = f.sample(1, t, x);
        assert_relative_eq!(v1, 0.5 + 6.0 * x * x * t, max_relative = 1e-14);
        let (v2, s2) = f.sample(2, t, x);
        assert_relative_eq!(v2, 6.0 * x * x, max_relative = 1e-14);
        assert_relative_eq!(s2, 12.0 * x, max_relative = 1e-14);
        assert!(!f.is_time_independent());
    }

    #[test]
    fn estimated_norms_of_linear_profile() {
        // F = (0.3 + 0.2 x / pi)(1 + 0.5 t) on [0,1] x [0,pi]
        let c = 0.2 / PI;
        let f = ForcingModel::time_polynomial(
            vec![Profile(vec![0.3, c]), Profile(vec![0.15, 0.5 * c])],
            PI,
            1.0,
        )
        .unwrap();
        let n = f.norms();
        assert_relative_eq!(n.sup, 0.5 * 1.5, max_relative = 1e-12);
        assert_relative_eq!(n.sup_w1, 0.75 + c * 1.5, max_relative = 1e-12);
        assert_relative_eq!(n.rate_sup, 0.25, max_relative = 1e-12);
        assert_relative_eq!(n.rate_sup_w1, 0.25 + 0.5 * c, max_relative = 1e-12);
    }

    #[test]
    fn coefficient_matrices_sum_to_full_matrix() {
        let b = SpectralBasis::new(2.0, 6).unwrap();
        let f = ForcingModel::time_polynomial(
            vec![Profile(vec![0.1, 0.4]), Profile(vec![-0.2, 0.0, 0.3])],
            2.0,
            1.0,
        )
        .unwrap();
        let parts = f.time_coefficient_matrices(&b).unwrap();
        let t = 0.37;
        let sum = &parts[0] + &parts[1] * t;
        assert!((sum - f.advection_matrix(&b, t, 0)).amax() < 1e-14);
    }
}
