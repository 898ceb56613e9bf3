use std::sync::Arc;

use crate::error::{domain, Result};

/// Fractional order `alpha` of the time derivative, restricted to `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracOrder {
    alpha: f64,
}

impl FracOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return domain(format!("fractional order must lie in (0, 1), got {alpha}"));
        }
        Ok(Self { alpha })
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.alpha
    }

    /// True when `alpha > 1/2`, the range where classical solutions exist.
    #[inline]
    pub fn classical_regime(self) -> bool {
        self.alpha > 0.5
    }

    /// Default grading exponent `2 / alpha`.
    pub fn default_grading(self) -> f64 {
        2.0 / self.alpha
    }
}

/// Graded time grid `t_n = T (n / N)^r`, `n = 0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeMesh {
    horizon: f64,
    intervals: usize,
    grading: f64,
    nodes: Vec<f64>,
}

impl TimeMesh {
    pub fn graded(horizon: f64, intervals: usize, grading: f64) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return domain(format!("horizon must be positive, got {horizon}"));
        }
        if intervals == 0 {
            return domain("mesh needs at least one interval");
        }
        if !(grading >= 1.0 && grading.is_finite()) {
            return domain(format!("grading exponent must be >= 1, got {grading}"));
        }
        let n = intervals as f64;
        let mut nodes: Vec<f64> = (0..=intervals)
            .map(|i| horizon * (i as f64 / n).powf(grading))
            .collect();
        nodes[intervals] = horizon;
        Ok(Self {
            horizon,
            intervals,
            grading,
            nodes,
        })
    }

    pub fn uniform(horizon: f64, intervals: usize) -> Result<Self> {
        Self::graded(horizon, intervals, 1.0)
    }

    #[inline]
    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    #[inline]
    pub fn intervals(&self) -> usize {
        self.intervals
    }

    #[inline]
    pub fn grading(&self) -> f64 {
        self.grading
    }

    #[inline]
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn t(&self, n: usize) -> f64 {
        self.nodes[n]
    }

    /// Width of panel `[t_j, t_{j+1}]`.
    #[inline]
    pub fn step(&self, j: usize) -> f64 {
        self.nodes[j + 1] - self.nodes[j]
    }

    /// Index of the panel containing `t` (panels are closed on the right).
    pub fn panel_of(&self, t: f64) -> usize {
        match self
            .nodes
            .binary_search_by(|x| x.partial_cmp(&t).expect("finite nodes"))
        {
            Ok(0) => 0,
            Ok(i) => i - 1,
            Err(i) => i.saturating_sub(1).min(self.intervals - 1),
        }
    }
}

/// Scalar samples of a function of time at every node of a mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteFn {
    pub mesh: Arc<TimeMesh>,
    pub values: Vec<f64>,
}

impl DiscreteFn {
    pub fn new(mesh: Arc<TimeMesh>, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.len() {
            return domain(format!(
                "expected {} samples, got {}",
                mesh.len(),
                values.len()
            ));
        }
        Ok(Self { mesh, values })
    }

    pub fn from_fn(mesh: Arc<TimeMesh>, f: impl Fn(f64) -> f64) -> Self {
        let values = mesh.nodes().iter().map(|&t| f(t)).collect();
        Self { mesh, values }
    }

    pub fn constant(mesh: Arc<TimeMesh>, c: f64) -> Self {
        Self::from_fn(mesh, |_| c)
    }

    #[inline]
    pub fn last(&self) -> f64 {
        *self.values.last().expect("non-empty mesh")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_mesh_endpoints() {
        let m = TimeMesh::graded(2.0, 10, 2.5).unwrap();
        assert_eq!(m.t(0), 0.0);
        assert_eq!(m.t(10), 2.0);
        assert!(m.nodes().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn uniform_mesh_is_grading_one() {
        let m = TimeMesh::uniform(1.0, 4).unwrap();
        assert_eq!(m.nodes(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(TimeMesh::graded(0.0, 4, 1.0).is_err());
        assert!(TimeMesh::graded(1.0, 0, 1.0).is_err());
        assert!(TimeMesh::graded(1.0, 4, 0.5).is_err());
        assert!(FracOrder::new(1.0).is_err());
        assert!(FracOrder::new(0.0).is_err());
    }

    #[test]
    fn panel_lookup() {
        let m = TimeMesh::uniform(1.0, 4).unwrap();
        assert_eq!(m.panel_of(0.0), 0);
        assert_eq!(m.panel_of(0.1), 0);
        assert_eq!(m.panel_of(0.25), 0);
        assert_eq!(m.panel_of(0.3), 1);
        assert_eq!(m.panel_of(1.0), 3);
    }

    #[test]
    fn classical_regime_flag() {
        assert!(FracOrder::new(0.75).unwrap().classical_regime());
        assert!(!FracOrder::new(0.5).unwrap().classical_regime());
    }
}
