//! Optimal ensemble size at one principal quantum number, with the certified
//! search and the per-size Rabi-frequency optimum.
//!
//!     cargo run --release -p clocknet --example optimize

use clocknet::budget::Variant;
use clocknet::config::SystemParams;
use clocknet::geometry::Dim;
use clocknet::optimize::{minimize_error, optimal_omega, OmegaMode};

fn main() {
    let system = SystemParams::default();
    for dim in [Dim::ThreeD, Dim::TwoD] {
        let result = minimize_error(120.0, dim, OmegaMode::Fixed(1e5), Variant::Photonic, &system)
            .expect("interior optimum at pinned omega");
        println!(
            "{}: n_opt = {}, E_min = {:.3e} at omega = {:.0e}",
            dim.label(),
            result.n_opt,
            result.e_min,
            result.omega_opt
        );
        let terms = result.budget_at_opt.terms();
        println!(
            "    leading terms: blockade {:.2e}, Rydberg decay {:.2e}",
            terms[0], terms[1]
        );
        // at fixed n the Rabi frequency has its own interior optimum
        let (omega, e) = optimal_omega(result.n_opt, 120.0, dim, Variant::Photonic, &system).unwrap();
        println!("    re-optimizing omega at n = {}: omega* = {omega:.3e}, E = {e:.3e}", result.n_opt);
    }
}
