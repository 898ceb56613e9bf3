use std::f64::consts::PI;

use statrs::function::gamma::gamma;

use crate::error::{domain, Error, Result};
use crate::frac_core::{mittag_leffler, rho_alpha, FracOrder};
use crate::solver::ProblemSpec;
use crate::spectral::ForcingNorms;

/// A constant with a note on where its value comes from.
#[derive(Debug, Clone, PartialEq)]
pub struct Constant {
    pub value: f64,
    pub note: &'static str,
}

impl Constant {
    fn printed(value: f64) -> Self {
        Self { value, note: "closed form" }
    }

    fn synthesized(value: f64) -> Self {
        Self {
            value,
            note: "synthesized from the lemma bounds",
        }
    }

    fn overflow(note: &'static str) -> Self {
        Self {
            value: f64::INFINITY,
            note,
        }
    }
}

/// Inputs the constants depend on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantInputs {
    pub alpha: f64,
    pub kappa: f64,
    pub horizon: f64,
    pub cp: f64,
    pub cr: f64,
    pub norms: ForcingNorms,
}

impl ConstantInputs {
    pub fn of(problem: &ProblemSpec) -> Self {
        let (cp, cr) = problem.basis.domain_constants();
        Self {
            alpha: problem.alpha.value(),
            kappa: problem.kappa,
            horizon: problem.horizon,
            cp,
            cr,
            norms: problem.forcing.norms(),
        }
    }
}

/// Constants of the classical-solution family (`alpha > 1/2`).
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalConstants {
    pub c6: Constant,
    pub c7: Constant,
    pub c8: Constant,
    pub c9: Constant,
    pub c10: Constant,
    pub c11: Constant,
    pub c12: Constant,
    pub c13: Constant,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstantSet {
    pub inputs: ConstantInputs,
    pub cp: f64,
    pub cr: f64,
    pub rho: f64,
    pub c1: Constant,
    pub c2: Constant,
    pub c3: Constant,
    pub c4: Constant,
    pub c5: Constant,
    classical: Option<ClassicalConstants>,
}

impl ConstantSet {
    /// The `C6..C13` family; only defined for `alpha > 1/2`.
    pub fn classical(&self) -> Result<&ClassicalConstants> {
        self.classical.as_ref().ok_or_else(|| {
            Error::Domain(format!(
                "constants C6..C13 assume 1/2 < alpha < 1, got alpha = {}",
                self.inputs.alpha
            ))
        })
    }

    /// `C1` evaluated at time `t` instead of the horizon.
    pub fn c1_at(&self, t: f64) -> f64 {
        c1(&self.inputs, self.c2.value, t)
    }

    /// `(name, value, note)` for every constant, in order.
    pub fn table(&self) -> Vec<(&'static str, f64, &'static str)> {
        let mut out = vec![
            ("C_P", self.cp, "spectral"),
            ("C_R", self.cr, "spectral"),
            ("rho_alpha", self.rho, "closed form"),
        ];
        for (n, c) in [("C1", &self.c1), ("C2", &self.c2), ("C3", &self.c3), ("C4", &self.c4), ("C5", &self.c5)] {
            out.push((n, c.value, c.note));
        }
        if let Some(k) = &self.classical {
            for (n, c) in [
                ("C6", &k.c6),
                ("C7", &k.c7),
                ("C8", &k.c8),
                ("C9", &k.c9),
                ("C10", &k.c10),
                ("C11", &k.c11),
                ("C12", &k.c12),
                ("C13", &k.c13),
            ] {
                out.push((n, c.value, c.note));
            }
        }
        out
    }
}

pub fn compute_constants(problem: &ProblemSpec) -> Result<ConstantSet> {
    constants_from(ConstantInputs::of(problem))
}

/// Same as [`compute_constants`] but fails for `alpha <= 1/2`.
pub fn compute_classical_constants(problem: &ProblemSpec) -> Result<ConstantSet> {
    let set = compute_constants(problem)?;
    set.classical()?;
    Ok(set)
}

fn ml_or_inf(beta: f64, z: f64) -> Result<f64> {
    match mittag_leffler(beta, z) {
        Ok(v) => Ok(v),
        Err(Error::Overflow(_)) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    }
}

fn omega(beta: f64, t: f64) -> f64 {
    t.powf(beta - 1.0) / gamma(beta)
}

fn c1(k: &ConstantInputs, c2: f64, t: f64) -> f64 {
    let a = k.alpha;
    let cos = (0.5 * a * PI).cos();
    let w = omega(1.0 + 0.5 * a, t);
    let e = ml_or_inf(0.5 * a, c2 * w / cos * t.powf(a)).unwrap_or(f64::INFINITY);
    0.5 * (1.0 + k.cp) * (1.0 + c2 * w * w / cos * e)
}

pub fn constants_from(k: ConstantInputs) -> Result<ConstantSet> {
    let order = FracOrder::new(k.alpha)?;
    if !(k.kappa > 0.0 && k.horizon > 0.0) {
        return domain("constants need kappa > 0 and T > 0");
    }
    let (a, kap, t) = (k.alpha, k.kappa, k.horizon);
    let n = k.norms;
    let cos = (0.5 * a * PI).cos();

    let c2 = 2.0 * (1.0 + n.sup * n.sup / kap) + t * t * n.rate_sup * n.rate_sup / kap;
    let c1v = c1(&k, c2, t);
    let c1 = if c1v.is_finite() {
        Constant::printed(c1v)
    } else {
        Constant::overflow("Mittag-Leffler factor overflows")
    };
    let w1 = n.sup_w1 * n.sup_w1;
    let r1 = n.rate_sup_w1 * n.rate_sup_w1;
    let c3 = 2.0 + c1v / kap * (4.0 * w1 + 2.0 * t * t * r1);
    let c4 = 2.0 / kap + 2.0 * c1v / (kap * kap) * (2.0 * w1 + t * t * r1);
    let c5 = c4 * t.powf(1.0 - a) * (1.0 + k.cp) / ((1.0 - a) * cos * gamma(1.0 - 0.5 * a).powi(2));
    let carry = |v: f64| {
        if v.is_finite() {
            Constant::printed(v)
        } else {
            Constant::overflow("inherits an overflowing constant")
        }
    };

    let classical = order.classical_regime().then(|| classical(&k, c1v));
    Ok(ConstantSet {
        inputs: k,
        cp: k.cp,
        cr: k.cr,
        rho: rho_alpha(order),
        c1,
        c2: Constant::printed(c2),
        c3: carry(c3),
        c4: carry(c4),
        c5: carry(c5),
        classical,
    })
}

fn classical(k: &ConstantInputs, c1: f64) -> ClassicalConstants {
    let (a, kap, t) = (k.alpha, k.kappa, k.horizon);
    let n = k.norms;
    let ga = gamma(a);
    let g2a = gamma(2.0 * a - 1.0);
    let w1 = n.sup_w1 * n.sup_w1;
    let rho = crate::frac_core::rho_alpha_raw(a);

    let c6 = k.cr * k.cr * (kap + n.sup_w1).powi(2);
    let c7 = g2a / (ga * ga)
        * (1.0 + t.powf(2.0 * a - 1.0) / ((2.0 * a - 1.0) * ga * ga) + n.sup * n.sup * ga * t.powf(1.0 - a) / (kap * g2a));
    let e = ml_or_inf(2.0 * a - 1.0, c7 * t.powf(2.0 * a - 1.0)).unwrap_or(f64::INFINITY);
    let c8 = e * c6.max(1.0);
    let c9 = (1.0 + c7 * e * omega(2.0 * a, t)) / kap * c6.max(1.0);
    let c10 = 3.0 * (1.0 + w1 * (c8 * t + c9 * ga * t.powf(1.0 - a)));
    let c11 = 6.0 * k.cr * k.cr * (kap * kap + w1) / ((2.0 * a - 1.0) * ga * ga) * t.powf(2.0 * a - 1.0);
    let c12 = c8 * t.powf(2.0 - a) / gamma(2.0 - a)
        + (c10 + c11) * (1.0 + k.cr * k.cr + t.powf(1.0 - a) / (kap * rho) + 1.0 / (kap * kap));
    let kz = a * a * (kap + n.sup_w1).powi(2) * c12
        + a * a * n.rate_sup_w1 * n.rate_sup_w1 * c1 / kap * (2.0 * t).max(t * t);
    let c13 = c12 * 4.0 * (1.0 + kz);

    let wrap = |v: f64, synth: bool| match (v.is_finite(), synth) {
        (false, _) => Constant::overflow("Mittag-Leffler factor overflows"),
        (true, true) => Constant::synthesized(v),
        (true, false) => Constant::printed(v),
    };
    ClassicalConstants {
        c6: wrap(c6, false),
        c7: wrap(c7, false),
        c8: wrap(c8, true),
        c9: wrap(c9, true),
        c10: wrap(c10, false),
        c11: wrap(c11, false),
        c12: wrap(c12, false),
        c13: wrap(c13, true),
    }
}

/// One row of an alpha scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub alpha: f64,
    pub rho: f64,
    pub c2: f64,
    pub c7: f64,
    pub c8: f64,
    pub c9: f64,
    pub c11: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstantScan {
    pub rows: Vec<ScanRow>,
    /// C7 and C11 decrease strictly over the first four grid points.
    pub blows_up_near_half: bool,
    /// C7, C8, C9, C11 finite at the largest alpha.
    pub bounded_near_one: bool,
    pub rho_increasing: bool,
}

/// Default scan grid, dense near `1/2`.
pub const DEFAULT_ALPHA_GRID: [f64; 11] = [0.51, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95, 0.99];

/// Evaluate the classical constants on a grid of `alpha` in `(1/2, 1)`.
pub fn scan_constants(alpha_grid: &[f64], template: &ConstantInputs) -> Result<ConstantScan> {
    if alpha_grid.len() < 4 {
        return domain("alpha scan needs at least four grid points");
    }
    let mut rows = Vec::with_capacity(alpha_grid.len());
    for &a in alpha_grid {
        if !(a > 0.5 && a < 1.0) {
            return domain(format!("scan grid must lie in (1/2, 1), got {a}"));
        }
        let set = constants_from(ConstantInputs { alpha: a, ..*template })?;
        let k = set.classical()?;
        rows.push(ScanRow {
            alpha: a,
            rho: set.rho,
            c2: set.c2.value,
            c7: k.c7.value,
            c8: k.c8.value,
            c9: k.c9.value,
            c11: k.c11.value,
        });
    }
    let mut sorted = rows.clone();
    sorted.sort_by(|a, b| a.alpha.total_cmp(&b.alpha));
    let head = &sorted[..4];
    let blows_up_near_half = head.windows(2).all(|w| w[0].c7 > w[1].c7 && w[0].c11 > w[1].c11);
    let last = sorted.last().expect("non-empty");
    let bounded_near_one = [last.c7, last.c8, last.c9, last.c11].iter().all(|v| v.is_finite());
    let rho_increasing = sorted.windows(2).all(|w| w[1].rho > w[0].rho);
    Ok(ConstantScan {
        rows,
        blows_up_near_half,
        bounded_near_one,
        rho_increasing,
    })
}
