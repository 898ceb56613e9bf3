//! Solve the z = t u' equation alongside u and watch the mismatch shrink.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DVector;
use tfpe::frac_core::FracOrder;
use tfpe::solver::{solve_vie, ProblemSpec, Source};
use tfpe::spectral::{ForcingModel, SpectralBasis};
use tfpe::verify::{f_bound, z_consistency_check};

fn main() -> tfpe::Result<()> {
    let basis = Arc::new(SpectralBasis::new(PI, 16)?);
    let mut u0 = DVector::zeros(16);
    u0[0] = 1.0;
    let problem = ProblemSpec::new(FracOrder::new(0.75)?, 1.0, basis, 1.0, ForcingModel::constant(0.5), u0, Source::Zero)?;
    for n in [512, 1024, 2048, 4096] {
        let traj = solve_vie(&problem, &problem.default_mesh(n)?)?;
        let z = z_consistency_check(&problem, &traj)?;
        println!(
            "N = {n:>4}: |z - t u'| {:.3e}, differential defect {:.3e}, identity defect {:.3e}, f-bound q=1 {:.5}",
            z.residual,
            z.differential_residual,
            z.identity_residual,
            f_bound(&problem, &traj, 1)?
        );
    }
    Ok(())
}
