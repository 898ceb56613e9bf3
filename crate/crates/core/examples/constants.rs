//! Tabulate the explicit constants for a forced problem.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DVector;
use tfpe::estimates::compute_constants;
use tfpe::frac_core::FracOrder;
use tfpe::solver::{ProblemSpec, Source};
use tfpe::spectral::{ForcingModel, Profile, SpectralBasis};

fn main() -> tfpe::Result<()> {
    let basis = Arc::new(SpectralBasis::new(PI, 16)?);
    let forcing = ForcingModel::time_polynomial(vec![Profile(vec![0.3, 0.2 / PI]), Profile(vec![0.15, 0.1 / PI])], PI, 1.0)?;
    let problem = ProblemSpec::new(FracOrder::new(0.75)?, 1.0, basis, 1.0, forcing, DVector::zeros(16), Source::Zero)?;

    let set = compute_constants(&problem)?;
    for (name, value, note) in set.table() {
        println!("{name:>10} = {value:<14.6e} {note}");
    }
    println!("C1 at t = 0.5: {:.6e}", set.c1_at(0.5));
    Ok(())
}
