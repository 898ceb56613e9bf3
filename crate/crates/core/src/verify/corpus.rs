use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DVector;

use crate::error::Result;
use crate::frac_core::FracOrder;
use crate::solver::{ProblemSpec, Source};
use crate::spectral::{ForcingModel, Profile, SpectralBasis};

/// Orders of the reference corpus.
pub const CORPUS_ALPHAS: [f64; 3] = [0.6, 0.75, 0.9];

/// Drift families: none, constant, and affine in `x` and `t`.
pub fn corpus_forcings(length: f64, horizon: f64) -> Result<Vec<(&'static str, ForcingModel)>> {
    let s = 0.2 / PI;
    Ok(vec![
        ("zero", ForcingModel::zero()),
        ("constant", ForcingModel::constant(0.5)),
        (
            "polynomial",
            ForcingModel::time_polynomial(vec![Profile(vec![0.3, s]), Profile(vec![0.15, 0.5 * s])], length, horizon)?,
        ),
    ])
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    /// e.g. `a0.75_constant`.
    pub label: String,
    pub forcing: &'static str,
    pub problem: ProblemSpec,
}

/// The nine problems `CORPUS_ALPHAS x corpus_forcings` with `u0 = w_1`, `g = 0`.
pub fn corpus(basis: &Arc<SpectralBasis>, kappa: f64, horizon: f64) -> Result<Vec<CorpusEntry>> {
    let mut u0 = DVector::zeros(basis.modes());
    u0[0] = 1.0;
    let mut out = Vec::new();
    for &a in &CORPUS_ALPHAS {
        for (name, f) in corpus_forcings(basis.length(), horizon)? {
            out.push(CorpusEntry {
                label: format!("a{a:.2}_{name}"),
                forcing: name,
                problem: ProblemSpec::new(
                    FracOrder::new(a)?,
                    kappa,
                    basis.clone(),
                    horizon,
                    f,
                    u0.clone(),
                    Source::Zero,
                )?,
            });
        }
    }
    Ok(out)
}
