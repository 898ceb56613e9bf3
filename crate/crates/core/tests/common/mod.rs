//! Seeded random functions and the discrete lemma suite shared by the
//! property and acceptance tests.
#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use rand_chacha::ChaCha8Rng;
use tfpe::frac_core::{FracOrder, TimeMesh};
use tfpe::verify::{
    coercivity_pair, jbeta_l2_pair, jbeta_sup_pair, minkowski_pair, positivity_pair, rho_coercivity_pair, LemmaPair,
};

pub const SAMPLES: usize = 100;
pub const MESHES: [usize; 3] = [256, 512, 1024];
const DIM: usize = 3;

/// A random vector function: low-frequency trigonometric part plus a power.
#[derive(Clone)]
pub struct RandomFn {
    coef: Vec<[f64; 4]>,
    power: f64,
    weight: [f64; DIM],
}

impl RandomFn {
    pub fn draw(rng: &mut ChaCha8Rng) -> Self {
        let coef = (0..DIM * 5)
            .map(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(0.0..2.0 * PI), 0.0, 0.0])
            .collect();
        Self {
            coef,
            power: rng.gen_range(0.3..2.0),
            weight: [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)],
        }
    }

    pub fn eval(&self, t: f64, horizon: f64) -> DVector<f64> {
        DVector::from_fn(DIM, |i, _| {
            let trig: f64 = (0..5)
                .map(|k| {
                    let [c, p, ..] = self.coef[i * 5 + k];
                    c * (k as f64 * PI * t / horizon + p).cos()
                })
                .sum();
            trig + self.weight[i] * (t / horizon).powf(self.power)
        })
    }

    pub fn sample(&self, mesh: &TimeMesh) -> Vec<DVector<f64>> {
        mesh.nodes().iter().map(|&t| self.eval(t, mesh.horizon())).collect()
    }
}

pub struct Case {
    pub alpha: f64,
    pub beta: f64,
    pub horizon: f64,
    pub f: RandomFn,
}

pub fn cases(seed: u64) -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..SAMPLES)
        .map(|_| Case {
            alpha: rng.gen_range(0.51..0.99),
            beta: rng.gen_range(0.05..0.95),
            horizon: rng.gen_range(0.5..2.0),
            f: RandomFn::draw(&mut rng),
        })
        .collect()
}

/// Worst relative deficit per mesh size.
pub fn worst(seed: u64, pair: impl Fn(&Case, &Arc<TimeMesh>) -> LemmaPair + Sync) -> Vec<f64> {
    let cs = cases(seed);
    MESHES
        .iter()
        .map(|&n| {
            cs.par_iter()
                .map(|c| {
                    let mesh = Arc::new(TimeMesh::graded(c.horizon, n, 2.0).unwrap());
                    pair(c, &mesh).deficit()
                })
                .reduce(|| f64::NEG_INFINITY, f64::max)
        })
        .collect()
}

/// `deficits[k] <= eps0 / 2^k` for every mesh level.
pub fn within_halving_slack(eps0: f64, deficits: &[f64]) -> bool {
    deficits.iter().enumerate().all(|(k, d)| *d <= eps0 / 2f64.powi(k as i32))
}

fn order(a: f64) -> FracOrder {
    FracOrder::new(a).unwrap()
}

pub struct LemmaResult {
    pub name: &'static str,
    pub eps0: f64,
    pub deficits: Vec<f64>,
}

impl LemmaResult {
    pub fn pass(&self) -> bool {
        within_halving_slack(self.eps0, &self.deficits)
    }
}

fn result(name: &'static str, eps0: f64, deficits: Vec<f64>) -> LemmaResult {
    LemmaResult { name, eps0, deficits }
}

pub fn positivity() -> LemmaResult {
    let d = worst(1, |c, m| positivity_pair(order(c.alpha), m, &c.f.sample(m)).unwrap());
    result("positivity", 1e-2, d)
}

pub fn cosine_coercivity() -> LemmaResult {
    let d = worst(2, |c, m| {
        let a = c.alpha - 0.5 + c.beta * 0.5;
        coercivity_pair(order(a), m, &c.f.sample(m)).unwrap()
    });
    result("cosine coercivity", 1e-2, d)
}

pub fn minkowski_type() -> LemmaResult {
    let d = worst(3, |c, m| minkowski_pair(c.beta, m, &c.f.sample(m)).unwrap());
    result("minkowski", 1e-6, d)
}

pub fn jbeta_sup() -> LemmaResult {
    let d = worst(4, |c, m| jbeta_sup_pair(c.beta + 0.5, m, &c.f.sample(m)).unwrap());
    result("jbeta sup", 1e-6, d)
}

pub fn jbeta_l2() -> LemmaResult {
    let d = worst(5, |c, m| jbeta_l2_pair(c.alpha, m, &c.f.sample(m)).unwrap());
    result("jbeta l2", 1e-6, d)
}

pub fn rho_coercivity() -> LemmaResult {
    let d = worst(6, |c, m| {
        let a = c.alpha - 0.5 + c.beta * 0.5;
        let v = c.f.sample(m);
        let v: Vec<_> = v.iter().map(|x| x - &v[0]).collect();
        rho_coercivity_pair(order(a), m, &v).unwrap()
    });
    result("rho coercivity", 1e-2, d)
}

pub fn suite() -> Vec<LemmaResult> {
    vec![positivity(), cosine_coercivity(), minkowski_type(), jbeta_sup(), jbeta_l2(), rho_coercivity()]
}

