//! Exact desk-scale simulator of the entangling protocol.
//!
//! States live in the symmetric collective-mode subspace under perfect
//! blockade with ideal pulses; the error model lives in [`crate::budget`], not
//! here. The basis is sparse (a handful of branches at any point), so chains
//! of a few clocks with a few atoms each are exact and fast.

mod herald;
mod protocol;
mod pulse;
mod state;

pub use herald::{bell_measure, BellOutcome, DetectionPattern, Port, SlotOutcome, StationBins};
pub use protocol::{
    parity_distribution, AmplitudeRecord, HeraldRecord, Protocol, ProtocolOutcome, RunMode,
    StepTrace, Wave, WorldRecord,
};
pub use pulse::{
    apply_all, measure_level, measure_messenger_diagonal, two_register_pure_state, Condition,
    Enhancement, MessengerPulse, Op, PhaseShift, PhotonEmit, RabiPulse,
};
pub use state::{
    BasisLabel, CollectiveState, Level, MessengerLevel, Occupation, PhotonBin, SimError,
    MAX_ATOMS_PER_ENSEMBLE, NORM_TOL, PRUNE_EPS,
};
