//! Evaluate both sides of the discrete fractional-calculus inequalities for
//! one vector function.

use std::sync::Arc;

use nalgebra::DVector;
use tfpe::frac_core::{FracOrder, TimeMesh};
use tfpe::verify::{
    coercivity_pair, jbeta_l2_pair, jbeta_sup_pair, minkowski_pair, positivity_pair, rho_coercivity_pair,
};

fn main() -> tfpe::Result<()> {
    let alpha = FracOrder::new(0.7)?;
    let mesh = Arc::new(TimeMesh::graded(1.0, 1024, 2.0)?);
    let v: Vec<DVector<f64>> = mesh
        .nodes()
        .iter()
        .map(|&t| DVector::from_vec(vec![(3.0 * t).cos(), t.sqrt() - 0.5, (1.0 - t).powi(3)]))
        .collect();
    let shifted: Vec<DVector<f64>> = v.iter().map(|x| x - &v[0]).collect();

    let pairs = [
        ("positivity", positivity_pair(alpha, &mesh, &v)?),
        ("coercivity", coercivity_pair(alpha, &mesh, &v)?),
        ("minkowski", minkowski_pair(0.4, &mesh, &v)?),
        ("J^b sup", jbeta_sup_pair(0.8, &mesh, &v)?),
        ("J^b L2", jbeta_l2_pair(0.7, &mesh, &v)?),
        ("rho", rho_coercivity_pair(alpha, &mesh, &shifted)?),
    ];
    for (name, p) in pairs {
        println!("{name:>11}: {:.6e} <= {:.6e}  holds {}", p.lower, p.upper, p.holds(0.0));
    }
    Ok(())
}
