use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{domain, Result};
use crate::frac_core::{FracOrder, GaussLegendre, TimeMesh};
use crate::spectral::{ForcingModel, SpectralBasis};

/// Projected source `g_m(t)` in coefficient space.
pub trait SourceTerm: Send + Sync {
    fn eval(&self, t: f64) -> DVector<f64>;
    /// Time derivative `g_m'(t)`.
    fn rate(&self, t: f64) -> DVector<f64>;
}

/// `c t^p` in coefficient space.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerTerm {
    pub power: f64,
    pub coeffs: DVector<f64>,
}

#[derive(Clone, Default)]
pub enum Source {
    #[default]
    Zero,
    /// `sum_i t^(p_i) c_i`, powers `> -1`.
    Powers(Vec<PowerTerm>),
    Custom(Arc<dyn SourceTerm>),
}

impl std::fmt::Debug for Source {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Source::Zero => write!(f, "Zero"),
            Source::Powers(p) => f.debug_tuple("Powers").field(p).finish(),
            Source::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl Source {
    pub fn powers(terms: Vec<PowerTerm>) -> Result<Self> {
        if let Some(t) = terms.iter().find(|t| !(t.power > -1.0)) {
            return domain(format!("source power {} is not integrable at t = 0", t.power));
        }
        Ok(Source::Powers(terms))
    }

    pub fn eval(&self, t: f64, dim: usize) -> DVector<f64> {
        match self {
            Source::Zero => DVector::zeros(dim),
            Source::Powers(terms) => {
                let mut acc = DVector::zeros(dim);
                for term in terms {
                    acc.axpy(pow(t, term.power), &term.coeffs, 1.0);
                }
                acc
            }
            Source::Custom(s) => s.eval(t),
        }
    }

    pub fn rate(&self, t: f64, dim: usize) -> DVector<f64> {
        match self {
            Source::Zero => DVector::zeros(dim),
            Source::Powers(terms) => {
                let mut acc = DVector::zeros(dim);
                for term in terms.iter().filter(|t| t.power != 0.0) {
                    acc.axpy(term.power * pow(t, term.power - 1.0), &term.coeffs, 1.0);
                }
                acc
            }
            Source::Custom(s) => s.rate(t),
        }
    }

    /// `int_a^b g`: trapezoid, except on a panel whose left end is singular,
    /// where the exact antiderivative (or a Gauss rule) is used.
    pub fn panel_integral(&self, a: f64, b: f64, dim: usize) -> DVector<f64> {
        let ga = self.eval(a, dim);
        if ga.iter().all(|v| v.is_finite()) {
            return (ga + self.eval(b, dim)) * (0.5 * (b - a));
        }
        self.integral(a, b, dim)
    }

    /// `int_a^b g` exactly for powers, by an 8-point Gauss rule otherwise.
    pub fn integral(&self, a: f64, b: f64, dim: usize) -> DVector<f64> {
        match self {
            Source::Zero => DVector::zeros(dim),
            Source::Powers(terms) => {
                let mut acc = DVector::zeros(dim);
                for term in terms {
                    let q = term.power + 1.0;
                    acc.axpy((b.powf(q) - a.powf(q)) / q, &term.coeffs, 1.0);
                }
                acc
            }
            Source::Custom(_) => {
                let rule = GaussLegendre::new(8);
                let mut acc = DVector::zeros(dim);
                for (x, w) in rule.on(a, b) {
                    acc.axpy(w, &self.eval(x, dim), 1.0);
                }
                acc
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Source::Zero => true,
            Source::Powers(t) => t.iter().all(|t| t.coeffs.iter().all(|c| *c == 0.0)),
            Source::Custom(_) => false,
        }
    }
}

fn pow(t: f64, p: f64) -> f64 {
    if p == 0.0 {
        1.0
    } else if t == 0.0 {
        if p > 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        t.powf(p)
    }
}

/// The Galerkin problem: order, diffusivity, basis, horizon, drift, data.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub alpha: FracOrder,
    pub kappa: f64,
    pub basis: Arc<SpectralBasis>,
    pub horizon: f64,
    pub forcing: ForcingModel,
    pub u0: DVector<f64>,
    pub source: Source,
}

impl ProblemSpec {
    pub fn new(
        alpha: FracOrder,
        kappa: f64,
        basis: Arc<SpectralBasis>,
        horizon: f64,
        forcing: ForcingModel,
        u0: DVector<f64>,
        source: Source,
    ) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return domain(format!("diffusivity must be positive, got {kappa}"));
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return domain(format!("horizon must be positive, got {horizon}"));
        }
        if u0.len() != basis.modes() {
            return domain(format!("u0 has {} coefficients, basis has {} modes", u0.len(), basis.modes()));
        }
        if u0.iter().any(|c| !c.is_finite()) {
            return domain("u0 coefficients must be finite");
        }
        if let Source::Powers(terms) = &source {
            if terms.iter().any(|t| t.coeffs.len() != basis.modes()) {
                return domain("source coefficient length does not match the basis");
            }
        }
        Ok(Self {
            alpha,
            kappa,
            basis,
            horizon,
            forcing,
            u0,
            source,
        })
    }

    #[inline]
    pub fn modes(&self) -> usize {
        self.basis.modes()
    }

    pub fn mesh(&self, intervals: usize, grading: f64) -> Result<Arc<TimeMesh>> {
        Ok(Arc::new(TimeMesh::graded(self.horizon, intervals, grading)?))
    }

    /// Mesh with the default grading `2 / alpha`.
    pub fn default_mesh(&self, intervals: usize) -> Result<Arc<TimeMesh>> {
        self.mesh(intervals, self.alpha.default_grading())
    }

    /// Same problem with other initial data and source.
    pub fn with_data(&self, u0: DVector<f64>, source: Source) -> Result<Self> {
        Self::new(
            self.alpha,
            self.kappa,
            self.basis.clone(),
            self.horizon,
            self.forcing.clone(),
            u0,
            source,
        )
    }

    pub(crate) fn operator(&self) -> Operator {
        Operator::new(self)
    }
}

/// `B(t) = kappa Lambda + A(t)` with its time derivative.
#[derive(Clone)]
pub(crate) struct Operator {
    diffusion: DVector<f64>,
    basis: Arc<SpectralBasis>,
    forcing: ForcingModel,
    /// `A_i` with `A(t) = sum_i t^i A_i` when available
    poly: Option<Vec<DMatrix<f64>>>,
}

impl Operator {
    fn new(p: &ProblemSpec) -> Self {
        let diffusion = DVector::from_iterator(p.modes(), p.basis.lambda().iter().map(|l| p.kappa * l));
        Self {
            diffusion,
            basis: p.basis.clone(),
            forcing: p.forcing.clone(),
            poly: p.forcing.time_coefficient_matrices(&p.basis),
        }
    }

    pub fn poly(&self) -> Option<&[DMatrix<f64>]> {
        self.poly.as_deref()
    }

    pub fn is_time_independent(&self) -> bool {
        self.forcing.is_time_independent()
    }

    pub fn b(&self, t: f64) -> DMatrix<f64> {
        let mut b = match &self.poly {
            Some(parts) => {
                let m = self.diffusion.len();
                let mut acc = DMatrix::zeros(m, m);
                let mut tp = 1.0;
                for a in parts {
                    acc += a * tp;
                    tp *= t;
                }
                acc
            }
            None => self.forcing.advection_matrix(&self.basis, t, 0),
        };
        for (i, d) in self.diffusion.iter().enumerate() {
            b[(i, i)] += d;
        }
        b
    }

    /// `B'(t) = A'(t)`.
    pub fn b_rate(&self, t: f64) -> DMatrix<f64> {
        match &self.poly {
            Some(parts) => {
                let m = self.diffusion.len();
                let mut acc = DMatrix::zeros(m, m);
                let mut tp = 1.0;
                for (i, a) in parts.iter().enumerate().skip(1) {
                    acc += a * (i as f64 * tp);
                    tp *= t;
                }
                acc
            }
            None => self.forcing.advection_matrix(&self.basis, t, 1),
        }
    }
}

/// `B(t)` for a problem.
pub fn assemble_b(problem: &ProblemSpec, t: f64) -> DMatrix<f64> {
    problem.operator().b(t)
}

/// `G_m(t_n) = u_{0m} + int_0^{t_n} g_m`, trapezoidal accumulation.
pub fn assemble_g(problem: &ProblemSpec, mesh: &TimeMesh) -> Vec<DVector<f64>> {
    let m = problem.modes();
    let mut out = Vec::with_capacity(mesh.len());
    let mut acc = problem.u0.clone();
    out.push(acc.clone());
    if problem.source.is_zero() {
        out.resize(mesh.len(), acc);
        return out;
    }
    for j in 0..mesh.intervals() {
        acc += problem.source.panel_integral(mesh.t(j), mesh.t(j + 1), m);
        out.push(acc.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Profile;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn problem(forcing: ForcingModel, u0: DVector<f64>, source: Source) -> ProblemSpec {
        let basis = Arc::new(SpectralBasis::new(PI, 2).unwrap());
        ProblemSpec::new(FracOrder::new(0.75).unwrap(), 1.0, basis, 1.0, forcing, u0, source).unwrap()
    }

    #[test]
    fn b_without_forcing_is_diffusion() {
        let p = problem(ForcingModel::zero(), DVector::zeros(2), Source::Zero);
        let b = assemble_b(&p, 0.4);
        assert_eq!(b, DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 4.0])));
        assert_eq!(p.operator().b_rate(0.4).amax(), 0.0);
    }

    #[test]
    fn b_with_unit_forcing() {
        let p = problem(ForcingModel::constant(1.0), DVector::zeros(2), Source::Zero);
        let b = assemble_b(&p, 0.0);
        assert_relative_eq!(b[(0, 0)], 1.0, epsilon = 1e-14);
        assert_relative_eq!(b[(1, 1)], 4.0, epsilon = 1e-14);
        assert_relative_eq!(b[(1, 0)], 8.0 / (3.0 * PI), max_relative = 1e-13);
        assert_eq!(b, assemble_b(&p, 0.9));
    }

    #[test]
    fn polynomial_and_quadrature_paths_agree() {
        let f = ForcingModel::time_polynomial(vec![Profile(vec![0.3, 0.1]), Profile(vec![0.0, 0.2])], PI, 1.0).unwrap();
        let p = problem(f, DVector::zeros(2), Source::Zero);
        let op = p.operator();
        let t = 0.6;
        let direct = p.forcing.advection_matrix(&p.basis, t, 1);
        assert!((op.b_rate(t) - direct).amax() < 1e-13);
    }

    #[test]
    fn g_examples() {
        let mesh = TimeMesh::graded(1.0, 40, 2.0).unwrap();
        let u0 = DVector::from_vec(vec![1.0, -2.0]);
        let p = problem(ForcingModel::zero(), u0.clone(), Source::Zero);
        assert!(assemble_g(&p, &mesh).iter().all(|g| *g == u0));

        let c = DVector::from_vec(vec![0.5, 2.0]);
        let constant = Source::powers(vec![PowerTerm { power: 0.0, coeffs: c.clone() }]).unwrap();
        let p = problem(ForcingModel::zero(), DVector::zeros(2), constant);
        for (g, t) in assemble_g(&p, &mesh).iter().zip(mesh.nodes()) {
            assert!((g - &c * *t).amax() < 1e-14);
        }

        let linear = Source::powers(vec![PowerTerm { power: 1.0, coeffs: c.clone() }]).unwrap();
        let p = problem(ForcingModel::zero(), DVector::zeros(2), linear);
        for (g, t) in assemble_g(&p, &mesh).iter().zip(mesh.nodes()) {
            assert!((g - &c * (0.5 * t * t)).amax() < 1e-13);
        }
    }

    #[test]
    fn singular_source_first_panel_is_exact() {
        let mesh = TimeMesh::graded(1.0, 10, 1.0).unwrap();
        let c = DVector::from_vec(vec![1.0, 0.0]);
        let s = Source::powers(vec![PowerTerm { power: -0.5, coeffs: c }]).unwrap();
        let p = problem(ForcingModel::zero(), DVector::zeros(2), s);
        let g = assemble_g(&p, &mesh);
        assert_relative_eq!(g[1][0], 2.0 * 0.1f64.sqrt(), max_relative = 1e-14);
        assert!(Source::powers(vec![PowerTerm { power: -1.0, coeffs: DVector::zeros(2) }]).is_err());
    }
}
