//! Fit the early-time power laws of u' and u'' and compare with alpha - 1.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DVector;
use tfpe::frac_core::FracOrder;
use tfpe::solver::{solve_vie, ProblemSpec, Source};
use tfpe::spectral::{ForcingModel, SpectralBasis};
use tfpe::verify::{check_regularity_rates, RegularityConfig};

fn main() -> tfpe::Result<()> {
    let basis = Arc::new(SpectralBasis::new(PI, 16)?);
    let mut u0 = DVector::zeros(16);
    u0[0] = 1.0;
    for alpha in [0.6, 0.75, 0.9] {
        let problem = ProblemSpec::new(FracOrder::new(alpha)?, 1.0, basis.clone(), 1.0, ForcingModel::zero(), u0.clone(), Source::Zero)?;
        let traj = solve_vie(&problem, &problem.default_mesh(2048)?)?;
        for q in [1, 2] {
            let report = check_regularity_rates(&problem, &traj, &RegularityConfig::new(q, 1.0))?;
            for row in &report.rows {
                println!(
                    "alpha {alpha} q {q}: {:<12} ~ t^{:>7.4}  weighted {:>7.4} (>= {:.2}) {}",
                    row.quantity,
                    row.fit.exponent,
                    row.weighted_exponent,
                    row.required,
                    if row.pass { "ok" } else { "FAIL" }
                );
            }
        }
        println!("alpha {alpha}: expected slope of ||u'|| is {:.2}", alpha - 1.0);
    }
    Ok(())
}
