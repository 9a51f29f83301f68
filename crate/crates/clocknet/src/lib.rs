//! clocknet — modeling toolkit for GHZ-entangled neutral-atom optical clock
//! networks.
//!
//! A network of K optical-lattice clocks, each holding M blockaded ensembles of
//! n Yb atoms, is entangled into one global GHZ state: Rydberg blockade drives
//! the local entangling gates, heralded single-photon links (or a shuttled
//! messenger atom) connect the clocks. This crate models that machine end to
//! end:
//!
//! - [`params`] — physical constants and the principal-quantum-number scaling
//!   laws of the Yb Rydberg levels.
//! - [`geometry`] — pair-distance averages over disk/ball ensembles, with a
//!   discrete lattice-sum oracle for the continuum approximation.
//! - [`budget`] — the seven-term per-atom error budget of the protocol.
//! - [`metrology`] — parity statistics, Fisher information, Allan deviations,
//!   and the stability gain over unentangled operation.
//! - [`optimize`] — ensemble-size/Rabi-frequency optimization, principal-number
//!   scans, and network-architecture planning.
//! - [`sim`] — an exact desk-scale simulator of the five-step entangling
//!   protocol in the perfect-blockade, no-decay limit.
//! - [`cli`] — the `clocknet` command-line front end (machine-readable CSV and
//!   JSON artifacts).
//!
//! ## Examples
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run --release -p clocknet --example budget           # per-atom error budget tables
//! cargo run --release -p clocknet --example optimize         # optimal ensemble size at one ñ
//! cargo run --release -p clocknet --example scan             # ñ scan with network plans (CSV)
//! cargo run --release -p clocknet --example network_plan     # gain-maximizing architecture
//! cargo run --release -p clocknet --example fisher           # averaged Fisher information curve
//! cargo run --release -p clocknet --example geometry         # continuum integrals vs lattice sums
//! cargo run --release -p clocknet --example simulate_protocol # five-step protocol, exhaustively
//! cargo run --release -p clocknet --example messenger        # messenger-atom variant
//! ```
//!
//! The same functionality is exposed by the `clocknet` binary; see the README.

pub mod budget;
pub mod cli;
pub mod config;
pub mod geometry;
pub mod metrology;
pub mod optimize;
pub mod params;
pub mod quad;
pub mod sim;

pub use budget::{error_budget, ErrorBudget, ErrorInputs, Variant};
pub use config::SystemParams;
pub use geometry::{Dim, GeometryIntegrals, LatticeGeometry};
pub use metrology::GhzMeasurementModel;
pub use optimize::{maximize_gain, minimize_error, NetworkPlan, OmegaMode, OptimizationResult};
pub use params::{LowerLevelRates, RydbergConfig};
pub use sim::{CollectiveState, Protocol, ProtocolOutcome};
