//! Fractional integrals, Riemann-Liouville derivatives and Mittag-Leffler
//! values on a graded mesh.

use std::sync::Arc;

use statrs::function::gamma::gamma;
use tfpe::frac_core::{frac_integral, mittag_leffler, rho_alpha, rl_derivative, DiscreteFn, FracOrder, TimeMesh};

fn main() -> tfpe::Result<()> {
    let alpha = FracOrder::new(0.6)?;
    let mesh = Arc::new(TimeMesh::graded(1.0, 1024, alpha.default_grading())?);
    let f = DiscreteFn::from_fn(mesh.clone(), |t| t.powf(1.5));

    let j = frac_integral(0.6, &f)?;
    println!("J^0.6 t^1.5 at 1: {:.10} (exact {:.10})", j.last(), gamma(2.5) / gamma(3.1));

    let d = rl_derivative(alpha, &f, 0.0);
    println!("d/dt J^0.6 t^1.5 at 1: {:.6} (exact {:.6})", d.last(), gamma(2.5) / gamma(2.1));

    for z in [-10.0, -1.0, 1.0] {
        println!("E_0.6({z}) = {:.12}", mittag_leffler(0.6, z)?);
    }
    println!("rho_0.6 = {:.6}", rho_alpha(alpha));
    Ok(())
}
