//! Per-atom error budget of the entangling protocol at the reference operating
//! point (ñ = 120, Ω = 10⁵γ), for both lattice geometries.
//!
//!     cargo run --release -p clocknet --example budget

use clocknet::budget::{error_budget, ErrorInputs, Variant};
use clocknet::config::SystemParams;
use clocknet::geometry::Dim;
use clocknet::params::RydbergConfig;

fn main() {
    let system = SystemParams::default();
    let rydberg = RydbergConfig::new(120.0).expect("valid principal quantum number");
    let labels = [
        "imperfect blockade (e1)",
        "Rydberg decay (e2)",
        "self-blockade (e3)",
        "r2 decay, non-local (e4)",
        "photon detection (e5)",
        "memory error (e6)",
        "photon collection (e7)",
    ];

    for (dim, n_opt) in [(Dim::ThreeD, 146u32), (Dim::TwoD, 54u32)] {
        let inputs = ErrorInputs {
            n: n_opt,
            omega: 1e5,
            dim,
            rydberg,
            system,
            variant: Variant::Photonic,
        };
        let budget = error_budget(&inputs).expect("valid inputs");
        println!("── {} ensemble, n = {n_opt} ──────────────────────────", dim.label());
        let shares = budget.shares_percent(Variant::Photonic);
        for ((label, term), share) in labels.iter().zip(budget.terms()).zip(shares) {
            println!("  {label:<26} {term:>10.2e}   {share:>6.2}%");
        }
        println!("  {:<26} {:>10.2e}   100.00%", "total error per atom", budget.total_per_atom);
        println!(
            "  photon pulse width {:.2e} s, double-excitation leakage at the bound {:.3}\n",
            budget.tau_pulse, budget.p_double
        );
    }

    // the messenger-atom variant drops the photonic terms entirely
    let messenger = error_budget(&ErrorInputs {
        n: 146,
        omega: 1e5,
        dim: Dim::ThreeD,
        rydberg,
        system,
        variant: Variant::Messenger,
    })
    .unwrap();
    println!("messenger variant (3D, n = 146): E = {:.2e} (local terms only)", messenger.total_per_atom);
}
