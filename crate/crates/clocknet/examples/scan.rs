//! Scan the Rydberg principal quantum number and plan the optimal network at
//! every point; emits the same CSV as `clocknet scan`.
//!
//!     cargo run --release -p clocknet --example scan > scan.csv

use clocknet::budget::Variant;
use clocknet::config::SystemParams;
use clocknet::geometry::Dim;
use clocknet::optimize::{maximize_gain, scan_principal_numbers, OmegaMode};

fn main() {
    let system = SystemParams::default();
    println!("ntilde,dim,n_opt,E_min,N_max,K_opt,G_max,F");
    for dim in [Dim::TwoD, Dim::ThreeD] {
        for point in
            scan_principal_numbers(50, 150, dim, OmegaMode::Fixed(1e5), Variant::Photonic, &system)
        {
            match point.result {
                Ok(r) => {
                    let plan = maximize_gain(r.e_min, system.atoms_per_clock, r.n_opt).unwrap();
                    println!(
                        "{},{},{},{:.6e},{},{},{:.4},{:.4}",
                        point.n_tilde,
                        dim.label(),
                        r.n_opt,
                        r.e_min,
                        plan.n_max,
                        plan.k_opt,
                        plan.gain_max,
                        plan.fidelity
                    );
                }
                Err(err) => eprintln!("ntilde={} {}: {err}", point.n_tilde, dim.label()),
            }
        }
    }
}
