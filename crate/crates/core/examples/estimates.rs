//! Check every a priori inequality on one forced problem and print the rows.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DVector;
use tfpe::estimates::{check_classical_estimates, check_mild_estimates, compute_constants, DEFAULT_SLACK};
use tfpe::frac_core::FracOrder;
use tfpe::solver::{solve_vie, PowerTerm, ProblemSpec, Source};
use tfpe::spectral::{ForcingModel, SpectralBasis};

fn main() -> tfpe::Result<()> {
    let basis = Arc::new(SpectralBasis::new(PI, 16)?);
    let u0 = basis.project_coeffs(|x| x * (PI - x));
    let mut g = DVector::zeros(16);
    g[1] = 0.5;
    let source = Source::powers(vec![PowerTerm { power: 0.0, coeffs: g }])?;
    let problem = ProblemSpec::new(FracOrder::new(0.6)?, 1.0, basis, 1.0, ForcingModel::constant(0.5), u0, source)?;

    let traj = solve_vie(&problem, &problem.default_mesh(1024)?)?;
    let constants = compute_constants(&problem)?;
    let mut report = check_mild_estimates(&problem, &traj, &constants, DEFAULT_SLACK)?;
    report.extend(check_classical_estimates(&problem, &traj, &constants, DEFAULT_SLACK)?);

    for row in &report.rows {
        let verdict = if row.pass { "ok" } else { "FAIL" };
        println!("{:>8}  {:>12.5e} <= {:<12.5e} {verdict} {}", row.id, row.lhs, row.rhs, row.note);
    }
    println!("all pass: {}", report.all_pass());
    Ok(())
}
