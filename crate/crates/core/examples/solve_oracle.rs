//! Solve the unforced single-mode problem with both schemes and compare the
//! first coefficient with `E_a(-t^a)`.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DVector;
use tfpe::frac_core::FracOrder;
use tfpe::solver::{mild_residual, solve_direct, solve_vie, ProblemSpec, Source};
use tfpe::spectral::{ForcingModel, SpectralBasis};
use tfpe::verify::mode_oracle;

fn main() -> tfpe::Result<()> {
    let alpha = 0.75;
    let basis = Arc::new(SpectralBasis::new(PI, 16)?);
    let mut u0 = DVector::zeros(16);
    u0[0] = 1.0;
    let problem = ProblemSpec::new(FracOrder::new(alpha)?, 1.0, basis, 1.0, ForcingModel::zero(), u0, Source::Zero)?;
    let mesh = problem.default_mesh(2048)?;

    for traj in [solve_vie(&problem, &mesh)?, solve_direct(&problem, &mesh)?] {
        let err = mesh
            .nodes()
            .iter()
            .zip(&traj.states)
            .map(|(&t, u)| (u[0] - mode_oracle(alpha, 1.0, 1.0, t).unwrap()).abs())
            .fold(0.0, f64::max);
        println!(
            "{:>6}: d_1(1) = {:.8}, max error {err:.2e}, mild residual {:.2e}",
            traj.scheme.name(),
            traj.states.last().unwrap()[0],
            mild_residual(&problem, &traj)?
        );
    }
    println!(" exact: E_a(-1) = {:.8}", mode_oracle(alpha, 1.0, 1.0, 1.0)?);
    Ok(())
}
