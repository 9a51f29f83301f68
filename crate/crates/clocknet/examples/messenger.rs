//! The messenger-atom variant: a single shuttled Rydberg atom entangles every
//! ensemble without any photonic link, then each ensemble grows locally.
//!
//!     cargo run --release -p clocknet --example messenger

use clocknet::budget::Variant;
use clocknet::sim::{Protocol, RunMode};

fn main() {
    // one chamber, three ensembles of two atoms
    let protocol = Protocol::new(1, 3, 2, Variant::Messenger).expect("valid layout");
    let st = protocol.vacuum_state().unwrap();
    println!("distributing the seed across 3 ensembles with the messenger atom:");
    for (sign, probability, state) in protocol.run_messenger_distribute(&st, &[0, 1, 2]).unwrap() {
        println!("  messenger measured {sign:+} with probability {probability:.3}; corrected seed state:");
        for (label, amp) in &state.amplitudes {
            println!("    {:<24} {:+.4}{:+.4}i", label.display(), amp.re, amp.im);
        }
    }

    // the full pipeline: distribution, both outcomes, then local growth
    let outcome = protocol.run(RunMode::Exhaustive).unwrap();
    println!("\nfull run ({} atoms total):", outcome.total_atoms);
    for world in &outcome.worlds {
        println!(
            "  outcome {:+}  weight {:.3}  fidelity to the exact GHZ {:.12}",
            world.messenger_outcome.unwrap(),
            world.weight,
            world.fidelity
        );
    }

    // a seeded sampled run prints the state after every stage
    let sampled = protocol.run(RunMode::Sample { seed: 1 }).unwrap();
    println!("\nsampled run trace (seed 1):");
    for step in &sampled.trace {
        println!("  after {}:", step.step);
        for amp in &step.amplitudes {
            println!("    {:<32} {:+.4}{:+.4}i", amp.basis, amp.re, amp.im);
        }
    }
}
