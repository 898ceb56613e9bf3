use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{domain, Result};
use crate::frac_core::GaussLegendre;

const PANEL_POINTS: usize = 8;

/// Dirichlet sine eigenbasis of `-d^2/dx^2` on `(0, L)` with a composite
/// Gauss-Legendre rule fine enough for products of modes up to `2m`.
#[derive(Debug, Clone)]
pub struct SpectralBasis {
    length: f64,
    lambda: Vec<f64>,
    quad_x: Vec<f64>,
    quad_w: Vec<f64>,
    // modes and their x-derivatives sampled at the quadrature nodes, q x m
    values: DMatrix<f64>,
    slopes: DMatrix<f64>,
}

impl SpectralBasis {
    pub fn new(length: f64, modes: usize) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return domain(format!("domain length must be positive, got {length}"));
        }
        if modes == 0 {
            return domain("basis needs at least one mode");
        }
        let lambda = (1..=modes)
            .map(|k| (k as f64 * PI / length).powi(2))
            .collect();
        let panels = (2 * modes).max(8);
        let rule = GaussLegendre::new(PANEL_POINTS);
        let h = length / panels as f64;
        let mut quad_x = Vec::with_capacity(panels * PANEL_POINTS);
        let mut quad_w = Vec::with_capacity(panels * PANEL_POINTS);
        for p in 0..panels {
            for (x, w) in rule.on(p as f64 * h, (p + 1) as f64 * h) {
                quad_x.push(x);
                quad_w.push(w);
            }
        }
        let q = quad_x.len();
        let norm = (2.0 / length).sqrt();
        let values = DMatrix::from_fn(q, modes, |i, k| {
            norm * ((k + 1) as f64 * PI * quad_x[i] / length).sin()
        });
        let slopes = DMatrix::from_fn(q, modes, |i, k| {
            let c = (k + 1) as f64 * PI / length;
            norm * c * (c * quad_x[i]).cos()
        });
        Ok(Self {
            length,
            lambda,
            quad_x,
            quad_w,
            values,
            slopes,
        })
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.length
    }

    #[inline]
    pub fn modes(&self) -> usize {
        self.lambda.len()
    }

    #[inline]
    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn quad_nodes(&self) -> &[f64] {
        &self.quad_x
    }

    pub fn quad_weights(&self) -> &[f64] {
        &self.quad_w
    }

    /// `w_k(x)` for `k = 1..=m`.
    pub fn mode(&self, k: usize, x: f64) -> f64 {
        (2.0 / self.length).sqrt() * (k as f64 * PI * x / self.length).sin()
    }

    /// Poincare constant `C_P = 1/lambda_1` and elliptic constant
    /// `C_R = sqrt(1/lambda_1^2 + 1/lambda_1 + 1)`.
    pub fn domain_constants(&self) -> (f64, f64) {
        let l1 = self.lambda[0];
        (1.0 / l1, (1.0 / (l1 * l1) + 1.0 / l1 + 1.0).sqrt())
    }

    /// `<f, w_k>` for every mode.
    pub fn project_coeffs(&self, f: impl Fn(f64) -> f64) -> DVector<f64> {
        let fw = DVector::from_iterator(
            self.quad_x.len(),
            self.quad_x.iter().zip(&self.quad_w).map(|(&x, &w)| w * f(x)),
        );
        self.values.tr_mul(&fw)
    }

    /// `u(x) = sum_k d_k w_k(x)`.
    pub fn reconstruct(&self, coeffs: &DVector<f64>, x: f64) -> f64 {
        coeffs
            .iter()
            .enumerate()
            .map(|(k, d)| d * self.mode(k + 1, x))
            .sum()
    }

    /// Galerkin matrix `M_jk = <(a w_k)' , w_j>` of `v -> Pi_m (a v)_x`, from
    /// samples of `a` and `a_x` at the quadrature nodes.
    pub(crate) fn flux_matrix(&self, a: &[f64], ax: &[f64]) -> DMatrix<f64> {
        let q = self.quad_x.len();
        let m = self.modes();
        let mut inner = DMatrix::zeros(q, m);
        for i in 0..q {
            let w = self.quad_w[i];
            for k in 0..m {
                inner[(i, k)] = w * (ax[i] * self.values[(i, k)] + a[i] * self.slopes[(i, k)]);
            }
        }
        self.values.tr_mul(&inner)
    }

    /// Gram matrix of the modes under the quadrature rule.
    pub fn gram(&self) -> DMatrix<f64> {
        let mut wv = self.values.clone();
        for (i, mut row) in wv.row_iter_mut().enumerate() {
            row *= self.quad_w[i];
        }
        self.values.tr_mul(&wv)
    }
}

/// Galerkin coefficients `d_k` of a function in `W_m`.
#[derive(Debug, Clone)]
pub struct SpectralField {
    pub basis: Arc<SpectralBasis>,
    pub coeffs: DVector<f64>,
}

/// Spectral norms of a field: `||v||`, `|v|_{H^1}`, `||Delta v||`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SobolevNorms {
    pub l2: f64,
    pub h1_semi: f64,
    pub laplacian: f64,
}

impl SobolevNorms {
    /// Full `H^1` norm `sqrt(||v||^2 + |v|_1^2)`.
    pub fn h1(&self) -> f64 {
        self.l2.hypot(self.h1_semi)
    }

    /// Full `H^2` norm `sqrt(sum (1 + lambda + lambda^2) d^2)`.
    pub fn h2(&self) -> f64 {
        (self.l2 * self.l2 + self.h1_semi * self.h1_semi + self.laplacian * self.laplacian).sqrt()
    }
}

impl SpectralField {
    pub fn new(basis: Arc<SpectralBasis>, coeffs: DVector<f64>) -> Result<Self> {
        if coeffs.len() != basis.modes() {
            return domain(format!(
                "expected {} coefficients, got {}",
                basis.modes(),
                coeffs.len()
            ));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return domain("field coefficients must be finite");
        }
        Ok(Self { basis, coeffs })
    }

    pub fn zero(basis: Arc<SpectralBasis>) -> Self {
        let m = basis.modes();
        Self {
            basis,
            coeffs: DVector::zeros(m),
        }
    }

    /// `Pi_m f` by quadrature.
    pub fn project(basis: Arc<SpectralBasis>, f: impl Fn(f64) -> f64) -> Self {
        let coeffs = basis.project_coeffs(f);
        Self { basis, coeffs }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.basis.reconstruct(&self.coeffs, x)
    }

    pub fn norms(&self) -> SobolevNorms {
        sobolev_norms(&self.basis, &self.coeffs)
    }
}

pub fn sobolev_norms(basis: &SpectralBasis, coeffs: &DVector<f64>) -> SobolevNorms {
    let mut s = [0.0; 3];
    for (d, l) in coeffs.iter().zip(basis.lambda()) {
        let d2 = d * d;
        s[0] += d2;
        s[1] += l * d2;
        s[2] += l * l * d2;
    }
    SobolevNorms {
        l2: s[0].sqrt(),
        h1_semi: s[1].sqrt(),
        laplacian: s[2].sqrt(),
    }
}
