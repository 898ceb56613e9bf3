//! Scan the classical constants over alpha: they grow without bound as alpha
//! approaches 1/2 and stay finite near 1.

use std::f64::consts::PI;

use tfpe::estimates::{scan_constants, ConstantInputs, DEFAULT_ALPHA_GRID};
use tfpe::spectral::{ForcingModel, SpectralBasis};

fn main() -> tfpe::Result<()> {
    let basis = SpectralBasis::new(PI, 16)?;
    let (cp, cr) = basis.domain_constants();
    let template = ConstantInputs {
        alpha: 0.75,
        kappa: 1.0,
        horizon: 1.0,
        cp,
        cr,
        norms: ForcingModel::constant(0.5).norms(),
    };
    let scan = scan_constants(&DEFAULT_ALPHA_GRID, &template)?;
    println!("{:>6} {:>9} {:>12} {:>12} {:>12} {:>12}", "alpha", "rho", "C7", "C8", "C9", "C11");
    for r in &scan.rows {
        println!("{:>6} {:>9.5} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}", r.alpha, r.rho, r.c7, r.c8, r.c9, r.c11);
    }
    println!(
        "blow-up near 1/2: {}, bounded near 1: {}, rho increasing: {}",
        scan.blows_up_near_half, scan.bounded_near_one, scan.rho_increasing
    );
    Ok(())
}
