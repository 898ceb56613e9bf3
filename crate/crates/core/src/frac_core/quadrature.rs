//! Quadrature building blocks: Gauss-Legendre rules, exact moments of the
//! power kernel `sigma^(beta-1)` on a panel, and an adaptive Gauss-Kronrod
//! integrator for smooth one-dimensional integrands.

use std::f64::consts::PI;

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(points: usize) -> Self {
        assert!(points >= 1, "a Gauss rule needs at least one point");
        let n = points;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        self.on(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p, d)
}

/// Ratio `a / b` above which the closed-form moments lose too many digits and
/// the binomial series in `(b - a) / a <= 1/3` is used instead.
const CLOSED_FORM_RATIO: f64 = 0.75;

/// Moments of the power kernel on `[a, b]`, `0 <= a < b`:
/// `m0 = int sigma^(beta-1)` and `m1 = int sigma^(beta-1) (b - sigma)`.
pub fn panel_moments(beta: f64, a: f64, b: f64) -> (f64, f64) {
    panel_moments_step(beta, a, b - a)
}

/// [`panel_moments`] on `[a, a + h]`. Passing the width directly keeps
/// panels narrower than the rounding of `a` intact.
pub fn panel_moments_step(beta: f64, a: f64, h: f64) -> (f64, f64) {
    debug_assert!(a >= 0.0 && h > 0.0 && beta > 0.0);
    let b = a + h;
    if a == 0.0 {
        let bb = b.powf(beta);
        return (bb / beta, bb * b / (beta * (beta + 1.0)));
    }
    if a < CLOSED_FORM_RATIO * b {
        let ab = a.powf(beta);
        let bb = b.powf(beta);
        let m0 = (bb - ab) / beta;
        let m1 = (bb * b - ab * a - (beta + 1.0) * ab * (b - a)) / (beta * (beta + 1.0));
        return (m0, m1);
    }
    // (a + x)^(beta-1) = a^(beta-1) sum_k C(beta-1, k) (x/a)^k on [0, h]
    let eps = h / a;
    let mut c = 1.0;
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    for k in 0..80 {
        let kf = k as f64;
        s0 += c / (kf + 1.0);
        s1 += c / ((kf + 1.0) * (kf + 2.0));
        c *= (beta - 1.0 - kf) / (kf + 1.0) * eps;
        if c.abs() < 1e-17 {
            break;
        }
    }
    let ak = a.powf(beta - 1.0);
    (ak * h * s0, ak * h * h * s1)
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(mid - dx) + f(mid + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * half, ((k - g) * half).abs())
}

/// Adaptive Gauss-Kronrod (7/15) integration by recursive bisection.
pub fn adaptive_integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> f64 {
    let (whole, err) = kronrod15(&f, a, b);
    let tol = abs_tol.max(rel_tol * whole.abs());
    refine(&f, a, b, whole, err, tol, 0)
}

fn refine(f: &impl Fn(f64) -> f64, a: f64, b: f64, whole: f64, err: f64, tol: f64, depth: u32) -> f64 {
    if err <= tol || err <= 4.0 * f64::EPSILON * whole.abs() || depth >= 40 {
        return whole;
    }
    let mid = 0.5 * (a + b);
    let (left, el) = kronrod15(f, a, mid);
    let (right, er) = kronrod15(f, mid, b);
    refine(f, a, mid, left, el, 0.5 * tol, depth + 1)
        + refine(f, mid, b, right, er, 0.5 * tol, depth + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let rule = GaussLegendre::new(5);
        // degree 9 is the highest exact degree for 5 points
        let v = rule.integrate(0.0, 2.0, |x| x.powi(9) + 3.0 * x * x);
        assert_relative_eq!(v, 2f64.powi(10) / 10.0 + 8.0, max_relative = 1e-14);
        let w: f64 = rule.weights.iter().sum();
        assert_relative_eq!(w, 2.0, max_relative = 1e-15);
    }

    #[test]
    fn panel_moments_match_fine_quadrature() {
        // brute force with a fine Gauss rule on a panel far from the origin
        let fine = GaussLegendre::new(40);
        for &beta in &[0.25, 0.5, 0.75, 1.0, 1.6, 3.3] {
            for &(a, b) in &[(0.0, 0.3), (0.1, 0.5), (0.74, 1.0), (0.75, 1.0), (0.9, 1.0), (1e-9, 1e-9 + 1e-12), (10.0, 10.001)] {
                let (m0, m1) = panel_moments(beta, a, b);
                if a > 0.0 {
                    let r0 = fine.integrate(a, b, |s| s.powf(beta - 1.0));
                    let r1 = fine.integrate(a, b, |s| s.powf(beta - 1.0) * (b - s));
                    assert_relative_eq!(m0, r0, max_relative = 1e-12);
                    assert_relative_eq!(m1, r1, max_relative = 1e-10);
                } else {
                    assert_relative_eq!(m0, b.powf(beta) / beta, max_relative = 1e-14);
                }
            }
        }
    }

    #[test]
    fn panels_below_rounding_keep_their_width() {
        let (m0, m1) = panel_moments_step(0.4, 1.0, 1e-30);
        assert_relative_eq!(m0, 1e-30, max_relative = 1e-12);
        assert_relative_eq!(m1, 0.5e-60, max_relative = 1e-12);
    }

    #[test]
    fn adaptive_handles_sharp_features() {
        let v = adaptive_integrate(|x| (-(x * 200.0).powi(2)).exp(), 0.0, 1.0, 1e-16, 1e-13);
        assert_relative_eq!(v, PI.sqrt() / 400.0, max_relative = 1e-12);
    }
}
