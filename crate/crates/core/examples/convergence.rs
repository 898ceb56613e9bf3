//! Manufactured-solution convergence tables for both schemes.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DVector;
use tfpe::frac_core::FracOrder;
use tfpe::solver::{ProblemSpec, Scheme, Source};
use tfpe::spectral::{ForcingModel, Profile, SpectralBasis};
use tfpe::verify::{convergence_study, Manufactured, PowerMode};

fn main() -> tfpe::Result<()> {
    let basis = Arc::new(SpectralBasis::new(PI, 16)?);
    let forcing = ForcingModel::time_polynomial(vec![Profile(vec![0.3, 0.2 / PI]), Profile(vec![0.15, 0.1 / PI])], PI, 1.0)?;
    let base = ProblemSpec::new(FracOrder::new(0.6)?, 1.0, basis, 1.0, forcing, DVector::zeros(16), Source::Zero)?;

    // u = t w_1 + t^2 w_2
    let man = Manufactured::new(vec![PowerMode::new(1.0, 1), PowerMode::new(2.0, 2)]);
    let problem = man.problem(&base)?;
    for scheme in [Scheme::Vie, Scheme::Direct] {
        let table = convergence_study(&problem, &|t| man.exact(t, 16), &[128, 256, 512, 1024, 2048], scheme)?;
        println!("{}:", scheme.name());
        for row in &table.rows {
            let order = row.order.map(|p| format!("{p:.3}")).unwrap_or_default();
            println!("  N = {:>5}  error {:.3e}  {order}", row.intervals, row.error);
        }
    }
    Ok(())
}
