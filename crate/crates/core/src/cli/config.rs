//! TOML experiment configuration.

use std::f64::consts::PI;
use std::path::Path;
use std::sync::Arc;

use nalgebra::DVector;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::frac_core::FracOrder;
use crate::solver::{PowerTerm, ProblemSpec, Scheme, Source};
use crate::spectral::{ForcingModel, Profile, SpectralBasis};
use crate::verify::{Manufactured, PowerMode};

/// Largest number of Galerkin modes accepted from a config.
pub const MAX_MODES: usize = 256;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: ProblemConfig,
    #[serde(default)]
    pub mesh: MeshConfig,
    #[serde(default)]
    pub run: RunConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub alpha: f64,
    #[serde(default = "one")]
    pub kappa: f64,
    /// Interval length; defaults to `pi`.
    pub length: Option<f64>,
    #[serde(default = "one")]
    pub horizon: f64,
    #[serde(default = "default_modes")]
    pub modes: usize,
    #[serde(default)]
    pub u0: U0Spec,
    #[serde(default)]
    pub source: SourceSpec,
    #[serde(default)]
    pub forcing: ForcingSpec,
}

/// A named preset (`zero`, `w<k>`, `parabola`) or explicit coefficients.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum U0Spec {
    Preset(String),
    Coefficients(Vec<f64>),
}

impl Default for U0Spec {
    fn default() -> Self {
        U0Spec::Preset("w1".into())
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SourceSpec {
    #[default]
    Zero,
    /// `g(t) = sum coeff t^power w_mode`.
    Powers { terms: Vec<SourceTermSpec> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceTermSpec {
    pub power: f64,
    pub mode: usize,
    #[serde(default = "one")]
    pub coeff: f64,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ForcingSpec {
    #[default]
    Zero,
    Constant {
        value: f64,
    },
    /// `F(t, x) = sum_i t^i p_i(x)` with `p_i` given by monomial coefficients.
    Polynomial {
        profiles: Vec<Vec<f64>>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshConfig {
    #[serde(default = "default_intervals")]
    pub intervals: usize,
    /// Defaults to `2 / alpha`.
    pub grading: Option<f64>,
}

impl Default for MeshConfig {
    fn default() -> Self {
        Self {
            intervals: default_intervals(),
            grading: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeChoice {
    Vie,
    Direct,
    Both,
}

impl SchemeChoice {
    pub fn schemes(self) -> Vec<Scheme> {
        match self {
            SchemeChoice::Vie => vec![Scheme::Vie],
            SchemeChoice::Direct => vec![Scheme::Direct],
            SchemeChoice::Both => vec![Scheme::Vie, Scheme::Direct],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstantFamily {
    /// Mild constants always, classical ones when `alpha > 1/2`.
    All,
    Mild,
    Classical,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManufacturedSpec {
    pub sigma: f64,
    pub mode: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_scheme")]
    pub scheme: SchemeChoice,
    #[serde(default = "default_slack")]
    pub slack: f64,
    #[serde(default = "default_family")]
    pub constants: ConstantFamily,
    #[serde(default = "default_grid")]
    pub alpha_grid: Vec<f64>,
    /// Fit window as fractions of the horizon.
    #[serde(default = "default_window")]
    pub rate_window: [f64; 2],
    #[serde(default = "default_orders")]
    pub rate_orders: Vec<usize>,
    #[serde(default = "default_levels")]
    pub convergence_intervals: Vec<usize>,
    #[serde(default = "default_manufactured")]
    pub manufactured: Vec<ManufacturedSpec>,
    /// Smallest accepted order between the two finest convergence levels.
    #[serde(default = "default_min_order")]
    pub min_order: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        toml::from_str("").expect("defaults")
    }
}

fn one() -> f64 {
    1.0
}
fn default_modes() -> usize {
    16
}
fn default_intervals() -> usize {
    2048
}
fn default_scheme() -> SchemeChoice {
    SchemeChoice::Vie
}
fn default_slack() -> f64 {
    crate::estimates::DEFAULT_SLACK
}
fn default_family() -> ConstantFamily {
    ConstantFamily::All
}
fn default_grid() -> Vec<f64> {
    crate::estimates::DEFAULT_ALPHA_GRID.to_vec()
}
fn default_window() -> [f64; 2] {
    [1e-3, 1e-1]
}
fn default_orders() -> Vec<usize> {
    vec![1, 2]
}
fn default_levels() -> Vec<usize> {
    vec![256, 512, 1024, 2048]
}
fn default_manufactured() -> Vec<ManufacturedSpec> {
    vec![ManufacturedSpec { sigma: 1.0, mode: 1 }, ManufacturedSpec { sigma: 2.0, mode: 2 }]
}
fn default_min_order() -> f64 {
    0.9
}

fn config_err(key: &str, message: impl Into<String>) -> Error {
    Error::Config {
        key: key.to_string(),
        message: message.into(),
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| {
            let key = e.span().map(|s| locate_key(text, s.start)).unwrap_or_default();
            config_err(&key, e.message().trim().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err("--config", format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    fn validate(&self) -> Result<()> {
        let p = &self.problem;
        if !(p.alpha > 0.0 && p.alpha < 1.0) {
            return Err(config_err("problem.alpha", format!("must lie in (0, 1), got {}", p.alpha)));
        }
        if !(p.kappa > 0.0) {
            return Err(config_err("problem.kappa", format!("must be positive, got {}", p.kappa)));
        }
        if let Some(l) = p.length {
            if !(l > 0.0) {
                return Err(config_err("problem.length", format!("must be positive, got {l}")));
            }
        }
        if !(p.horizon > 0.0) {
            return Err(config_err("problem.horizon", format!("must be positive, got {}", p.horizon)));
        }
        if p.modes == 0 || p.modes > MAX_MODES {
            return Err(config_err("problem.modes", format!("must lie in 1..={MAX_MODES}, got {}", p.modes)));
        }
        self.initial_coefficients(&SpectralBasis::new(p.length.unwrap_or(PI), p.modes)?)?;
        if let SourceSpec::Powers { terms } = &p.source {
            for t in terms {
                if t.mode == 0 || t.mode > p.modes {
                    return Err(config_err("problem.source.terms.mode", format!("mode {} outside 1..={}", t.mode, p.modes)));
                }
                if !(t.power > -1.0) {
                    return Err(config_err("problem.source.terms.power", format!("power {} is not integrable", t.power)));
                }
            }
        }
        if let ForcingSpec::Polynomial { profiles } = &p.forcing {
            if profiles.is_empty() {
                return Err(config_err("problem.forcing.profiles", "needs at least one profile"));
            }
        }
        if self.mesh.intervals == 0 {
            return Err(config_err("mesh.intervals", "must be positive"));
        }
        if let Some(r) = self.mesh.grading {
            if !(r >= 1.0) {
                return Err(config_err("mesh.grading", format!("must be at least 1, got {r}")));
            }
        }
        let r = &self.run;
        if !(r.slack >= 0.0) {
            return Err(config_err("run.slack", format!("must be nonnegative, got {}", r.slack)));
        }
        if r.constants == ConstantFamily::Classical && p.alpha <= 0.5 {
            return Err(config_err(
                "run.constants",
                format!("the classical constants assume 1/2 < alpha < 1, got alpha = {}", p.alpha),
            ));
        }
        if let Some(a) = r.alpha_grid.iter().find(|a| !(**a > 0.5 && **a < 1.0)) {
            return Err(config_err("run.alpha_grid", format!("values must lie in (1/2, 1), got {a}")));
        }
        if r.alpha_grid.len() < 4 {
            return Err(config_err("run.alpha_grid", "needs at least four values"));
        }
        let [lo, hi] = r.rate_window;
        if !(lo > 0.0 && hi > lo && hi <= 1.0) {
            return Err(config_err("run.rate_window", format!("needs 0 < lo < hi <= 1, got [{lo}, {hi}]")));
        }
        if let Some(q) = r.rate_orders.iter().find(|q| **q > 2) {
            return Err(config_err("run.rate_orders", format!("orders above 2 are not supported, got {q}")));
        }
        let lv = &r.convergence_intervals;
        if lv.len() < 3 || lv.windows(2).any(|w| w[1] <= w[0]) {
            return Err(config_err("run.convergence_intervals", "needs at least three increasing sizes"));
        }
        for m in &r.manufactured {
            if m.mode == 0 || m.mode > p.modes {
                return Err(config_err("run.manufactured.mode", format!("mode {} outside 1..={}", m.mode, p.modes)));
            }
            if m.sigma < p.alpha {
                return Err(config_err(
                    "run.manufactured.sigma",
                    format!("exponent {} is below alpha = {}", m.sigma, p.alpha),
                ));
            }
        }
        Ok(())
    }

    pub fn basis(&self) -> Result<Arc<SpectralBasis>> {
        Ok(Arc::new(SpectralBasis::new(self.problem.length.unwrap_or(PI), self.problem.modes)?))
    }

    fn initial_coefficients(&self, basis: &SpectralBasis) -> Result<DVector<f64>> {
        let m = basis.modes();
        match &self.problem.u0 {
            U0Spec::Coefficients(c) => {
                if c.len() > m {
                    return Err(config_err("problem.u0", format!("{} coefficients for {m} modes", c.len())));
                }
                if c.iter().any(|v| !v.is_finite()) {
                    return Err(config_err("problem.u0", "coefficients must be finite"));
                }
                Ok(DVector::from_fn(m, |i, _| c.get(i).copied().unwrap_or(0.0)))
            }
            U0Spec::Preset(name) => {
                let l = basis.length();
                match name.as_str() {
                    "zero" => Ok(DVector::zeros(m)),
                    "parabola" => Ok(basis.project_coeffs(|x| x * (l - x))),
                    other => match other.strip_prefix('w').and_then(|k| k.parse::<usize>().ok()) {
                        Some(k) if (1..=m).contains(&k) => {
                            let mut d = DVector::zeros(m);
                            d[k - 1] = 1.0;
                            Ok(d)
                        }
                        _ => Err(config_err(
                            "problem.u0",
                            format!("unknown preset `{other}` (expected zero, parabola or w1..w{m})"),
                        )),
                    },
                }
            }
        }
    }

    pub fn forcing(&self) -> Result<ForcingModel> {
        let p = &self.problem;
        match &p.forcing {
            ForcingSpec::Zero => Ok(ForcingModel::zero()),
            ForcingSpec::Constant { value } => Ok(ForcingModel::constant(*value)),
            ForcingSpec::Polynomial { profiles } => ForcingModel::time_polynomial(
                profiles.iter().cloned().map(Profile).collect(),
                p.length.unwrap_or(PI),
                p.horizon,
            ),
        }
    }

    fn source(&self) -> Result<Source> {
        let m = self.problem.modes;
        match &self.problem.source {
            SourceSpec::Zero => Ok(Source::Zero),
            SourceSpec::Powers { terms } => Source::powers(
                terms
                    .iter()
                    .map(|t| {
                        let mut c = DVector::zeros(m);
                        c[t.mode - 1] = t.coeff;
                        PowerTerm { power: t.power, coeffs: c }
                    })
                    .collect(),
            ),
        }
    }

    pub fn problem_spec(&self) -> Result<ProblemSpec> {
        let basis = self.basis()?;
        let u0 = self.initial_coefficients(&basis)?;
        ProblemSpec::new(
            FracOrder::new(self.problem.alpha)?,
            self.problem.kappa,
            basis,
            self.problem.horizon,
            self.forcing()?,
            u0,
            self.source()?,
        )
    }

    pub fn grading(&self) -> f64 {
        self.mesh.grading.unwrap_or(2.0 / self.problem.alpha)
    }

    pub fn manufactured(&self) -> Vec<Manufactured> {
        self.run
            .manufactured
            .iter()
            .map(|m| Manufactured::new(vec![PowerMode::new(m.sigma, m.mode)]))
            .collect()
    }
}

/// Dotted path of the innermost table key preceding byte offset `pos`.
fn locate_key(text: &str, pos: usize) -> String {
    let mut table = String::new();
    let mut key = String::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        if offset > pos {
            break;
        }
        let trimmed = line.trim();
        if let Some(name) = trimmed.strip_prefix('[').and_then(|s| s.split(']').next()) {
            table = name.trim_matches('[').trim().to_string();
            key.clear();
        } else if let Some((k, _)) = trimmed.split_once('=') {
            key = k.trim().to_string();
        }
        offset += line.len();
    }
    match (table.is_empty(), key.is_empty()) {
        (true, _) => key,
        (false, true) => table,
        (false, false) => format!("{table}.{key}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_uses_defaults() {
        let cfg = ExperimentConfig::from_toml("[problem]\nalpha = 0.75\n").unwrap();
        assert_eq!(cfg.mesh.intervals, 2048);
        assert_eq!(cfg.run.scheme, SchemeChoice::Vie);
        assert!((cfg.grading() - 2.0 / 0.75).abs() < 1e-15);
        let p = cfg.problem_spec().unwrap();
        assert_eq!(p.u0[0], 1.0);
        assert_eq!(p.modes(), 16);
    }

    #[test]
    fn errors_name_the_key() {
        let cases = [
            ("[problem]\nalpha = 1.5\n", "problem.alpha"),
            ("[problem]\nalpha = 0.5\n[run]\nconstants = \"classical\"\n", "run.constants"),
            ("[problem]\nalpha = 0.7\nu0 = \"w99\"\n", "problem.u0"),
            ("[problem]\nalpha = \"x\"\n", "problem.alpha"),
            ("[problem]\nalpha = 0.7\n[run]\nscheme = \"rk4\"\n", "run.scheme"),
        ];
        for (text, key) in cases {
            match ExperimentConfig::from_toml(text) {
                Err(Error::Config { key: k, .. }) => assert_eq!(k, key, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn classical_request_cites_the_assumption() {
        let err = ExperimentConfig::from_toml("[problem]\nalpha = 0.5\n[run]\nconstants = \"classical\"\n").unwrap_err();
        assert!(err.to_string().contains("1/2 < alpha"), "{err}");
    }

    #[test]
    fn forcing_and_source_blocks() {
        let text = r#"
[problem]
alpha = 0.6
modes = 4
u0 = [0.5, 0.25]
forcing = { kind = "polynomial", profiles = [[0.3, 0.1], [0.2]] }
source = { kind = "powers", terms = [{ power = 0.0, mode = 2, coeff = 3.0 }] }
"#;
        let p = ExperimentConfig::from_toml(text).unwrap().problem_spec().unwrap();
        assert_eq!(p.u0.as_slice(), &[0.5, 0.25, 0.0, 0.0]);
        assert_eq!(p.source.eval(0.3, 4)[1], 3.0);
        assert!(p.forcing.time_polynomial_profiles().is_some());
    }
}
