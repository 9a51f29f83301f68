//! Continuum pair-distance averages over disk/ball ensembles against the
//! exact lattice-sum oracle.
//!
//!     cargo run --release -p clocknet --example geometry

use clocknet::geometry::{integral_i, integral_j, lattice_sum_average, Dim, LatticeGeometry};

fn main() {
    for dim in [Dim::TwoD, Dim::ThreeD] {
        let i_val = integral_i(dim).unwrap();
        let j_val = integral_j(dim).unwrap();
        println!("{}: I = {i_val:.5} (x^6 moment), J = {j_val:.4} (x^12 moment)", dim.label());
    }
    println!("\nlattice-sum oracle vs the continuum approximation (unit lattice constant):");
    println!("{:>4} {:>6} {:>4} {:>14} {:>14} {:>8}", "dim", "n", "p", "lattice", "continuum", "rel err");
    for (dim, sizes) in [(Dim::TwoD, vec![100u32, 400, 1000, 1600]), (Dim::ThreeD, vec![64, 146, 512])] {
        for n in sizes {
            let geom = LatticeGeometry::new(dim, n, 1.0).unwrap();
            for exponent in [6u32, 12] {
                let lattice = lattice_sum_average(&geom, exponent).unwrap();
                let integral = if exponent == 6 { integral_i(dim) } else { integral_j(dim) }.unwrap();
                let continuum = geom.radius.powi(exponent as i32) * integral;
                println!(
                    "{:>4} {:>6} {:>4} {:>14.6e} {:>14.6e} {:>7.2}%",
                    dim.label(),
                    n,
                    exponent,
                    lattice,
                    continuum,
                    100.0 * (lattice / continuum - 1.0).abs()
                );
            }
        }
    }
}
