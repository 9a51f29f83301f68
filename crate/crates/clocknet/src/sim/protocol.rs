//! The five-step entangling protocol in the perfect-blockade, no-decay limit,
//! plus the messenger-atom variant.
//!
//! Composite gadgets are built from the primitive pulses with laser phases
//! chosen so every gadget reproduces its target state with real positive
//! amplitudes (the light-shift ops are the required phase bookkeeping). Step
//! by step:
//!
//! 1. initialize two independent spin waves per seed ensemble,
//! 2. emit four time-bin photon pulses entangled with the waves,
//! 3. herald links between neighboring clocks on two-photon coincidences,
//! 4. connect links with a blockade CNOT plus a shelving measurement,
//! 5. grow the seed entanglement to every atom of every ensemble.
//!
//! End clocks of a chain prepare only the wave their single link consumes, so
//! no emitted photon ever leaves undetected. Inside a clock (and for the
//! messenger variant across the whole network) a shuttled messenger atom
//! copies the seed qubit onto further ensembles through its Rydberg blockade.

use super::herald::{bell_measure, BellOutcome, StationBins};
use super::pulse::{
    apply_all, measure_level, measure_messenger_diagonal, Condition, Enhancement, MessengerPulse,
    Op, PhaseShift, PhotonEmit, RabiPulse,
};
use super::state::{BasisLabel, CollectiveState, Level, MessengerLevel, Occupation, PhotonBin, SimError};
use crate::budget::Variant;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};

/// Retry cap for heralded link attempts in sampled mode.
const MAX_LINK_ATTEMPTS: u32 = 128;
/// World-count guard for exhaustive runs.
const MAX_WORLDS: usize = 4096;

/// Which spin wave a reduced preparation creates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wave {
    /// The clock-state wave (f), facing the left neighbor.
    Clock,
    /// The shelving wave (s), facing the right neighbor.
    Shelf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunMode {
    /// Seeded sampling of every measurement; failed links are retried.
    Sample { seed: u64 },
    /// Every herald pattern and measurement outcome is followed.
    Exhaustive,
}

/// Record of one heralded link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeraldRecord {
    pub link: u32,
    pub attempts: u32,
    pub sign: i8,
}

/// One fully resolved run of the protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct WorldRecord {
    /// Conditional weight of this world (heralded links renormalized over the
    /// retry protocol; measurement outcomes carry their Born weights).
    pub weight: f64,
    pub heralds: Vec<HeraldRecord>,
    /// (clock, outcome) for each connecting shelving measurement.
    pub s_outcomes: Vec<(u32, u8)>,
    /// ± outcome of the messenger measurement, when one happened.
    pub messenger_outcome: Option<i8>,
    pub fidelity: f64,
    pub final_state: CollectiveState,
}

/// Snapshot of the state after one pipeline stage (sampled mode only).
#[derive(Debug, Clone, Serialize)]
pub struct StepTrace {
    pub step: String,
    pub amplitudes: Vec<AmplitudeRecord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AmplitudeRecord {
    pub basis: String,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProtocolOutcome {
    pub total_atoms: u64,
    #[serde(skip)]
    pub worlds: Vec<WorldRecord>,
    pub trace: Vec<StepTrace>,
}

/// The protocol configuration: K clocks × M ensembles × n atoms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Protocol {
    pub clocks: u32,
    pub ensembles_per_clock: u32,
    pub atoms: u32,
    pub variant: Variant,
}

impl Protocol {
    pub fn new(clocks: u32, ensembles_per_clock: u32, atoms: u32, variant: Variant) -> Result<Self, SimError> {
        if clocks < 1 || ensembles_per_clock < 1 {
            return Err(SimError::Precondition("need at least one clock and one ensemble".into()));
        }
        if atoms < 1 || atoms > super::state::MAX_ATOMS_PER_ENSEMBLE {
            return Err(SimError::BadEnsembleSize(atoms));
        }
        Ok(Self { clocks, ensembles_per_clock, atoms, variant })
    }

    pub fn n_ensembles(&self) -> usize {
        (self.clocks * self.ensembles_per_clock) as usize
    }

    pub fn total_atoms(&self) -> u64 {
        self.clocks as u64 * self.ensembles_per_clock as u64 * self.atoms as u64
    }

    fn has_messenger(&self) -> bool {
        self.variant == Variant::Messenger || self.ensembles_per_clock >= 2
    }

    /// Index of the seed (networked) ensemble of a clock.
    pub fn seed(&self, clock: u32) -> usize {
        (clock * self.ensembles_per_clock) as usize
    }

    pub fn vacuum_state(&self) -> Result<CollectiveState, SimError> {
        CollectiveState::vacuum(self.n_ensembles(), self.atoms, self.has_messenger())
    }

    // ── primitive builders ──────────────────────────────────────────────

    fn ground_rydberg(&self, ensemble: usize, rabi: f64, pool: u32, axis: f64, condition: Condition) -> Op {
        Op::Rabi(RabiPulse {
            ensemble,
            levels: (Level::G, Level::R1),
            rabi_phase: rabi,
            axis_phase: axis,
            enhancement: Enhancement::Pool(pool),
            condition,
        })
    }

    fn pi_pulse(&self, ensemble: usize, levels: (Level, Level), axis: f64, condition: Condition) -> Op {
        Op::Rabi(RabiPulse {
            ensemble,
            levels,
            rabi_phase: PI,
            axis_phase: axis,
            enhancement: Enhancement::Ladder,
            condition,
        })
    }

    fn shift(&self, ensemble: usize, level: Level, angle: f64) -> Op {
        Op::Shift(PhaseShift { ensemble, level, angle })
    }

    /// Unconditional flip of the clock wave: 0_f ↔ 1_f via the Rydberg level
    /// (uniform −1 phase).
    fn ops_flip_clock_wave(&self, ensemble: usize) -> Vec<Op> {
        let n = self.atoms;
        vec![
            self.pi_pulse(ensemble, (Level::F, Level::R1), 0.0, Condition::Always),
            self.ground_rydberg(ensemble, PI / (n as f64).sqrt(), n, 0.0, Condition::Always),
            self.pi_pulse(ensemble, (Level::F, Level::R1), 0.0, Condition::Always),
        ]
    }

    /// Full two-wave initialization of one ensemble.
    fn ops_step1_full(&self, ensemble: usize) -> Vec<Op> {
        let n = self.atoms;
        let half = PI / (2.0 * (n as f64).sqrt());
        vec![
            self.ground_rydberg(ensemble, half, n, 0.0, Condition::Always),
            self.pi_pulse(ensemble, (Level::F, Level::R1), PI, Condition::Always),
            self.pi_pulse(ensemble, (Level::F, Level::S), FRAC_PI_2, Condition::Always),
            self.ground_rydberg(ensemble, half, n, 0.0, Condition::Always),
            self.pi_pulse(ensemble, (Level::F, Level::R1), PI, Condition::Always),
        ]
    }

    /// Reduced initialization creating a single wave.
    fn ops_step1_wave(&self, ensemble: usize, wave: Wave) -> Vec<Op> {
        let n = self.atoms;
        let half = PI / (2.0 * (n as f64).sqrt());
        let mut ops = vec![
            self.ground_rydberg(ensemble, half, n, 0.0, Condition::Always),
            self.pi_pulse(ensemble, (Level::F, Level::R1), PI, Condition::Always),
        ];
        if wave == Wave::Shelf {
            ops.push(self.pi_pulse(ensemble, (Level::F, Level::S), FRAC_PI_2, Condition::Always));
        }
        ops
    }

    /// Conditional photon generation: a photon lands in `bin` exactly on the
    /// branches with an empty shelving wave (uniform −1 phase).
    fn ops_emit_gadget(&self, ensemble: usize, bin: u32) -> Vec<Op> {
        let n = self.atoms;
        vec![
            self.pi_pulse(ensemble, (Level::S, Level::R2), 0.0, Condition::Always),
            self.ground_rydberg(ensemble, PI / (n as f64).sqrt(), n, 0.0, Condition::Always),
            self.pi_pulse(ensemble, (Level::E, Level::R1), 0.0, Condition::Always),
            Op::Emit(PhotonEmit { ensemble, bin }),
            self.pi_pulse(ensemble, (Level::S, Level::R2), 0.0, Condition::Always),
        ]
    }

    /// One emission round. Rounds mark, in bin order: empty shelf, empty
    /// clock, occupied shelf, occupied clock. The swap/flip conjugations plus
    /// light shifts keep every round's phase uniform.
    fn ops_emission_round(&self, ensemble: usize, round: u8, attempt: u32) -> Vec<Op> {
        let bin = 4 * attempt + round as u32;
        let swap = |axis: f64| self.pi_pulse(ensemble, (Level::F, Level::S), axis, Condition::Always);
        match round {
            1 => self.ops_emit_gadget(ensemble, bin),
            2 => {
                let mut ops = vec![swap(0.0)];
                ops.extend(self.ops_emit_gadget(ensemble, bin));
                ops.push(swap(0.0));
                ops.push(self.shift(ensemble, Level::F, PI));
                ops.push(self.shift(ensemble, Level::S, PI));
                ops
            }
            3 => {
                let flip_shelf = |ops: &mut Vec<Op>| {
                    ops.push(swap(0.0));
                    ops.extend(self.ops_flip_clock_wave(ensemble));
                    ops.push(swap(0.0));
                };
                let mut ops = Vec::new();
                flip_shelf(&mut ops);
                ops.extend(self.ops_emit_gadget(ensemble, bin));
                flip_shelf(&mut ops);
                ops
            }
            4 => {
                let mut ops = self.ops_flip_clock_wave(ensemble);
                ops.push(swap(0.0));
                ops.extend(self.ops_emit_gadget(ensemble, bin));
                ops.push(swap(0.0));
                ops.push(self.shift(ensemble, Level::F, PI));
                ops.push(self.shift(ensemble, Level::S, PI));
                ops.extend(self.ops_flip_clock_wave(ensemble));
                ops
            }
            _ => unreachable!("emission rounds are 1..=4"),
        }
    }

    /// The five-pulse blockade CNOT: flips the clock wave iff the shelving
    /// wave is empty (uniform −1 phase). Axis phases (δ = axis of the ground
    /// pulse) are exposed for the swap-wrapped variant.
    fn ops_cnot_five_pulse(&self, ensemble: usize, ground_axis: f64) -> Vec<Op> {
        let n = self.atoms;
        vec![
            self.pi_pulse(ensemble, (Level::S, Level::R2), 0.0, Condition::Always),
            self.pi_pulse(ensemble, (Level::F, Level::R1), 0.0, Condition::Always),
            self.ground_rydberg(ensemble, PI / (n as f64).sqrt(), n, ground_axis, Condition::Always),
            self.pi_pulse(ensemble, (Level::F, Level::R1), 0.0, Condition::Always),
            self.pi_pulse(ensemble, (Level::S, Level::R2), 0.0, Condition::Always),
        ]
    }

    /// Swap-conjugated CNOT: flips the shelving wave iff the clock wave is
    /// empty, with a uniform phase (swap axes π and 0, ground axis π/2).
    fn ops_conditional_shelf_flip(&self, ensemble: usize) -> Vec<Op> {
        let mut ops = vec![self.pi_pulse(ensemble, (Level::F, Level::S), PI, Condition::Always)];
        ops.extend(self.ops_cnot_five_pulse(ensemble, FRAC_PI_2));
        ops.push(self.pi_pulse(ensemble, (Level::F, Level::S), 0.0, Condition::Always));
        ops
    }

    /// Moves the shelving qubit into the clock register (exact for an empty
    /// clock register).
    fn ops_convert_shelf_to_clock(&self, ensemble: usize) -> Vec<Op> {
        vec![self.pi_pulse(ensemble, (Level::F, Level::S), -FRAC_PI_2, Condition::Always)]
    }

    /// Returns a measured-out shelving excitation (definite occupation 1) to
    /// the ground state without disturbing the clock register: swap the live
    /// clock wave aside, drain through the Rydberg level, swap back. Uniform
    /// phase for any clock-register content.
    fn ops_drain_shelf(&self, ensemble: usize) -> Vec<Op> {
        let n = self.atoms;
        vec![
            self.pi_pulse(ensemble, (Level::F, Level::S), PI, Condition::Always),
            self.pi_pulse(ensemble, (Level::F, Level::R1), 0.0, Condition::Always),
            self.ground_rydberg(ensemble, PI / (n as f64).sqrt(), n, 0.0, Condition::Always),
            self.pi_pulse(ensemble, (Level::F, Level::S), 0.0, Condition::Always),
        ]
    }

    /// Copies the seed qubit of `seed` onto the empty ensemble `target` using
    /// the messenger atom (no measurement; messenger returns to its shelf).
    fn ops_extension(&self, seed: usize, target: usize) -> Vec<Op> {
        let n = self.atoms;
        let touch_seed = |ops: &mut Vec<Op>| {
            ops.push(self.pi_pulse(seed, (Level::F, Level::R1), 0.0, Condition::Always));
        };
        let messenger_swap = Op::Messenger(MessengerPulse {
            rabi_phase: PI,
            axis_phase: 0.0,
            condition: Condition::BlockedIfEnsembleR1(seed),
        });
        let mut ops = Vec::new();
        touch_seed(&mut ops);
        ops.push(messenger_swap);
        touch_seed(&mut ops);
        ops.push(self.ground_rydberg(target, PI / (n as f64).sqrt(), n, 0.0, Condition::BlockedIfMessengerRydberg));
        ops.push(self.pi_pulse(target, (Level::F, Level::R1), PI, Condition::BlockedIfMessengerRydberg));
        touch_seed(&mut ops);
        ops.push(messenger_swap);
        touch_seed(&mut ops);
        ops.push(self.shift(seed, Level::F, PI));
        ops
    }

    /// Per-ensemble growth: park the qubit on the shelf, promote it to the
    /// Rydberg control, transfer the remaining ground atoms one by one into
    /// the clock state (blocked branches stay put), then clean the shelf
    /// excitation back into the ground state.
    fn ops_growth(&self, ensemble: usize) -> Vec<Op> {
        let n = self.atoms;
        let mut ops = vec![
            self.pi_pulse(ensemble, (Level::F, Level::S), -FRAC_PI_2, Condition::Always),
            self.pi_pulse(ensemble, (Level::S, Level::R2), 0.0, Condition::Always),
        ];
        for j in 1..=n {
            let pool = n - j + 1;
            ops.push(self.ground_rydberg(ensemble, PI / (pool as f64).sqrt(), pool, 0.0, Condition::Always));
            ops.push(Op::Rabi(RabiPulse {
                ensemble,
                levels: (Level::F, Level::R1),
                rabi_phase: PI / (j as f64).sqrt(),
                axis_phase: PI,
                enhancement: Enhancement::Ladder,
                condition: Condition::Always,
            }));
        }
        ops.push(self.pi_pulse(ensemble, (Level::S, Level::R2), 0.0, Condition::Always));
        // shelf cleanup: s → f → r1 → ground
        ops.push(self.pi_pulse(ensemble, (Level::F, Level::S), FRAC_PI_2, Condition::Always));
        ops.push(self.pi_pulse(ensemble, (Level::F, Level::R1), 0.0, Condition::Always));
        ops.push(self.pi_pulse(ensemble, (Level::F, Level::S), -FRAC_PI_2, Condition::Always));
        ops.push(self.ground_rydberg(ensemble, PI / (n as f64).sqrt(), n, 0.0, Condition::Always));
        ops
    }

    // ── public step operations ──────────────────────────────────────────

    /// Step 1: creates the product of the two spin-wave superpositions,
    /// (|0_f⟩+|1_f⟩)(|0_s⟩+|1_s⟩)/2, on one ensemble. Requires the ensemble in
    /// its collective ground state and at least two atoms (one branch houses
    /// both excitations).
    pub fn run_step1_init(&self, state: &CollectiveState, ensemble: usize) -> Result<CollectiveState, SimError> {
        if self.atoms < 2 {
            return Err(SimError::Precondition(
                "two-wave initialization needs n >= 2 (the f and s excitations coexist in one branch)".into(),
            ));
        }
        if !state.ensemble_is_vacuum(ensemble) {
            return Err(SimError::Precondition(format!(
                "ensemble {ensemble} is not in the collective ground state (step 1 applied twice?)"
            )));
        }
        apply_all(state, &self.ops_step1_full(ensemble))
    }

    /// Reduced step 1 for chain ends: a single wave.
    pub fn run_step1_single_wave(
        &self,
        state: &CollectiveState,
        ensemble: usize,
        wave: Wave,
    ) -> Result<CollectiveState, SimError> {
        if !state.ensemble_is_vacuum(ensemble) {
            return Err(SimError::Precondition(format!("ensemble {ensemble} is not in the collective ground state")));
        }
        apply_all(state, &self.ops_step1_wave(ensemble, wave))
    }

    /// Step 2: four conditional emission rounds producing the state
    /// (|0_f⟩|t₂⟩+|1_f⟩|t₄⟩)(|0_s⟩|t₁⟩+|1_s⟩|t₃⟩)/2 on the four bins of this
    /// attempt.
    pub fn run_step2_photon_emission(
        &self,
        state: &CollectiveState,
        ensemble: usize,
        attempt: u32,
    ) -> Result<CollectiveState, SimError> {
        self.check_bins_fresh(state, ensemble, attempt)?;
        let mut current = state.clone();
        for round in 1..=4 {
            current = apply_all(&current, &self.ops_emission_round(ensemble, round, attempt))?;
        }
        Ok(current)
    }

    /// Reduced step 2 emitting only the rounds of one wave.
    pub fn run_step2_single_wave(
        &self,
        state: &CollectiveState,
        ensemble: usize,
        wave: Wave,
        attempt: u32,
    ) -> Result<CollectiveState, SimError> {
        self.check_bins_fresh(state, ensemble, attempt)?;
        let rounds: [u8; 2] = match wave {
            Wave::Shelf => [1, 3],
            Wave::Clock => [2, 4],
        };
        let mut current = state.clone();
        for round in rounds {
            current = apply_all(&current, &self.ops_emission_round(ensemble, round, attempt))?;
        }
        Ok(current)
    }

    fn check_bins_fresh(&self, state: &CollectiveState, ensemble: usize, attempt: u32) -> Result<(), SimError> {
        for label in state.amplitudes.keys() {
            for round in 1..=4u32 {
                let bin = PhotonBin { ensemble: ensemble as u16, bin: 4 * attempt + round };
                if label.has_photon(bin) {
                    return Err(SimError::ModesConsumed(format!(
                        "ensemble {ensemble} already emitted into attempt {attempt}"
                    )));
                }
            }
        }
        Ok(())
    }

    fn station_bins(&self, left: usize, right: usize, attempt_left: u32, attempt_right: u32) -> StationBins {
        StationBins {
            a_slot1: PhotonBin { ensemble: left as u16, bin: 4 * attempt_left + 1 },
            a_slot2: PhotonBin { ensemble: left as u16, bin: 4 * attempt_left + 3 },
            b_slot1: PhotonBin { ensemble: right as u16, bin: 4 * attempt_right + 2 },
            b_slot2: PhotonBin { ensemble: right as u16, bin: 4 * attempt_right + 4 },
        }
    }

    /// Step 3: interferes the shelving-wave bins of `left` with the clock-wave
    /// bins of `right` and returns every detection outcome. Two-photon
    /// coincidences herald the Bell pair |0_s 1_f⟩ ± |1_s 0_f⟩; the sign is in
    /// the pattern record, no correction is applied here.
    pub fn run_step3_bell_merge(
        &self,
        state: &CollectiveState,
        left: usize,
        right: usize,
        attempt: u32,
    ) -> Result<Vec<BellOutcome>, SimError> {
        let bins = self.station_bins(left, right, attempt, attempt);
        let live = |bin: PhotonBin| state.amplitudes.keys().any(|l| l.has_photon(bin));
        // at least one branch must still hold each wave's photon pair
        if !(live(bins.a_slot1) || live(bins.a_slot2)) || !(live(bins.b_slot1) || live(bins.b_slot2)) {
            return Err(SimError::ModesConsumed(format!(
                "station between ensembles {left} and {right} has no live photons for attempt {attempt}"
            )));
        }
        bell_measure(state, &bins)
    }

    /// Flips the sign of the heralded Bell pair via a light shift on the
    /// right ensemble's clock wave.
    pub fn apply_bell_sign_fix(&self, state: &CollectiveState, right: usize) -> Result<CollectiveState, SimError> {
        apply_all(state, &[self.shift(right, Level::F, PI)])
    }

    /// Step 4 on a fresh-links configuration: the swap-conjugated CNOT flips
    /// the shelving wave of clock `k`'s seed iff its clock wave is empty, the
    /// shelving wave is measured, and the outcome-dependent flips (clock wave
    /// of `k`; additionally the clock wave of `k+1` on outcome 0) restore the
    /// GHZ chain. Both outcomes are returned with their probabilities.
    pub fn run_step4_cnot_connect(
        &self,
        state: &CollectiveState,
        clock: u32,
    ) -> Result<Vec<(u8, f64, CollectiveState)>, SimError> {
        self.connect_clock(state, clock, true)
    }

    fn connect_clock(
        &self,
        state: &CollectiveState,
        clock: u32,
        fresh_left_link: bool,
    ) -> Result<Vec<(u8, f64, CollectiveState)>, SimError> {
        let ensemble = self.seed(clock);
        let next = self.seed(clock + 1);
        let flipped = apply_all(state, &self.ops_conditional_shelf_flip(ensemble))?;
        let outcomes = measure_level(&flipped, ensemble, Level::S)?;
        let mut corrected = Vec::new();
        for (value, prob, branch) in outcomes {
            if value > 1 {
                return Err(SimError::InvalidOccupation(format!("shelving register held {value} excitations")));
            }
            // the measured excitation is pumped back to ground before anything else
            let branch = if value == 1 {
                apply_all(&branch, &self.ops_drain_shelf(ensemble))?
            } else {
                branch
            };
            let fixed = if fresh_left_link {
                // outcome 1: flip this clock's wave; outcome 0: flip this and the next
                let mut s = apply_all(&branch, &self.ops_flip_clock_wave(ensemble))?;
                if value == 0 {
                    s = apply_all(&s, &self.ops_flip_clock_wave(next))?;
                }
                s
            } else {
                // left block already aligned: outcome 1 flips the fresh side
                if value == 1 {
                    apply_all(&branch, &self.ops_flip_clock_wave(next))?
                } else {
                    branch
                }
            };
            corrected.push((value as u8, prob, fixed));
        }
        Ok(corrected)
    }

    /// The plain five-pulse CNOT (clock wave flipped iff shelf empty), exposed
    /// for truth-table checks.
    pub fn apply_cnot(&self, state: &CollectiveState, ensemble: usize) -> Result<CollectiveState, SimError> {
        apply_all(state, &self.ops_cnot_five_pulse(ensemble, 0.0))
    }

    /// Step 5 on one clock: copy the seed qubit to the clock's other ensembles
    /// (when they are still empty), then grow every ensemble to its full size
    /// and clean the shelf excitations.
    pub fn run_step5_local_growth(&self, state: &CollectiveState, clock: u32) -> Result<CollectiveState, SimError> {
        let seed = self.seed(clock);
        let mut current = state.clone();
        let targets: Vec<usize> =
            (1..self.ensembles_per_clock).map(|m| seed + m as usize).collect();
        if targets.iter().any(|&t| current.ensemble_is_vacuum(t)) {
            if !targets.iter().all(|&t| current.ensemble_is_vacuum(t)) {
                return Err(SimError::Precondition(
                    "clock has a mix of seeded and empty ensembles; cannot extend".into(),
                ));
            }
            for &target in &targets {
                current = apply_all(&current, &self.ops_extension(seed, target))?;
            }
        }
        for m in 0..self.ensembles_per_clock {
            current = apply_all(&current, &self.ops_growth(seed + m as usize))?;
        }
        Ok(current)
    }

    /// The messenger-variant distribution: a messenger prepared in
    /// (|s⟩+|r₂⟩)/√2 visits every listed ensemble, leaving a conditional clock
    /// excitation; measuring it in the ± basis (both outcomes returned)
    /// projects onto |1_f…⟩ ± |0…⟩, and the − branch is corrected by a light
    /// shift on the first ensemble.
    pub fn run_messenger_distribute(
        &self,
        state: &CollectiveState,
        ensembles: &[usize],
    ) -> Result<Vec<(i8, f64, CollectiveState)>, SimError> {
        if ensembles.is_empty() {
            return Err(SimError::Precondition("messenger distribution needs at least one ensemble".into()));
        }
        let n = self.atoms;
        let mut ops = vec![Op::Messenger(MessengerPulse {
            rabi_phase: FRAC_PI_2,
            axis_phase: FRAC_PI_2,
            condition: Condition::Always,
        })];
        for &e in ensembles {
            ops.push(self.ground_rydberg(e, PI / (n as f64).sqrt(), n, 0.0, Condition::BlockedIfMessengerRydberg));
            ops.push(self.pi_pulse(e, (Level::F, Level::R1), PI, Condition::BlockedIfMessengerRydberg));
        }
        let distributed = apply_all(state, &ops)?;
        let outcomes = measure_messenger_diagonal(&distributed)?;
        let mut corrected = Vec::new();
        for (sign, prob, branch) in outcomes {
            let fixed = if sign < 0 {
                apply_all(&branch, &[self.shift(ensembles[0], Level::F, PI)])?
            } else {
                branch
            };
            corrected.push((sign, prob, fixed));
        }
        Ok(corrected)
    }

    /// The exact GHZ target (|f⟩^N + |g⟩^N)/√2 over every ensemble.
    pub fn ghz_target(&self) -> CollectiveState {
        let n_ens = self.n_ensembles();
        let mut all_f = BasisLabel::vacuum(n_ens, false);
        for occ in &mut all_f.ensembles {
            *occ = Occupation { f: self.atoms as u8, ..Default::default() };
        }
        let all_g = BasisLabel::vacuum(n_ens, false);
        let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        CollectiveState {
            amplitudes: [(all_f, amp), (all_g, amp)].into_iter().collect(),
            n_atoms: self.atoms,
            n_ensembles: n_ens,
        }
    }

    /// Drops a messenger register that is definitely back on its shelf.
    fn retire_messenger(&self, state: &CollectiveState) -> Result<CollectiveState, SimError> {
        if state.amplitudes.keys().next().map(|l| l.messenger.is_none()).unwrap_or(true) {
            return Ok(state.clone());
        }
        if !state.amplitudes.keys().all(|l| l.messenger == Some(MessengerLevel::Shelf)) {
            return Err(SimError::Precondition("messenger is not definitely on its shelf".into()));
        }
        let amplitudes = state
            .amplitudes
            .iter()
            .map(|(l, &a)| {
                let mut bare = l.clone();
                bare.messenger = None;
                (bare, a)
            })
            .collect();
        CollectiveState { amplitudes, n_atoms: state.n_atoms, n_ensembles: state.n_ensembles }.finalize()
    }

    // ── full pipeline ───────────────────────────────────────────────────

    /// Runs the protocol end to end.
    pub fn run(&self, mode: RunMode) -> Result<ProtocolOutcome, SimError> {
        let worlds_and_trace = match mode {
            RunMode::Sample { seed } => {
                let mut rng = ChaCha12Rng::seed_from_u64(seed);
                let mut trace = Vec::new();
                let world = self.run_sampled(&mut rng, &mut trace)?;
                (vec![world], trace)
            }
            RunMode::Exhaustive => (self.run_exhaustive()?, Vec::new()),
        };
        Ok(ProtocolOutcome {
            total_atoms: self.total_atoms(),
            worlds: worlds_and_trace.0,
            trace: worlds_and_trace.1,
        })
    }

    fn record(trace: &mut Vec<StepTrace>, step: impl Into<String>, state: &CollectiveState) {
        let mut amplitudes: Vec<AmplitudeRecord> = state
            .amplitudes
            .iter()
            .filter(|(_, a)| a.norm() > 1e-12)
            .map(|(l, a)| AmplitudeRecord { basis: l.display(), re: a.re, im: a.im })
            .collect();
        amplitudes.sort_by(|a, b| a.basis.cmp(&b.basis));
        trace.push(StepTrace { step: step.into(), amplitudes });
    }

    /// Preparations and emissions for the whole network (attempt 0).
    fn prepare_all(&self, trace: &mut Vec<StepTrace>) -> Result<CollectiveState, SimError> {
        let mut state = self.vacuum_state()?;
        let k = self.clocks;
        for clock in 0..k {
            let seed = self.seed(clock);
            if k == 1 {
                state = self.run_step1_single_wave(&state, seed, Wave::Clock)?;
            } else if clock == 0 {
                state = self.run_step1_single_wave(&state, seed, Wave::Shelf)?;
                state = self.run_step2_single_wave(&state, seed, Wave::Shelf, 0)?;
            } else if clock == k - 1 {
                state = self.run_step1_single_wave(&state, seed, Wave::Clock)?;
                state = self.run_step2_single_wave(&state, seed, Wave::Clock, 0)?;
            } else {
                state = self.run_step1_init(&state, seed)?;
                state = self.run_step2_photon_emission(&state, seed, 0)?;
            }
        }
        Self::record(trace, "prepare+emit", &state);
        Ok(state)
    }

    fn run_exhaustive(&self) -> Result<Vec<WorldRecord>, SimError> {
        if self.variant == Variant::Messenger {
            return self.run_exhaustive_messenger();
        }
        let mut trace = Vec::new();
        let state = self.prepare_all(&mut trace)?;

        struct World {
            state: CollectiveState,
            weight: f64,
            heralds: Vec<HeraldRecord>,
            s_outcomes: Vec<(u32, u8)>,
        }
        let mut worlds = vec![World { state, weight: 1.0, heralds: Vec::new(), s_outcomes: Vec::new() }];

        // heralded links, renormalized over the success branches (failures retry)
        for link in 0..self.clocks.saturating_sub(1) {
            let left = self.seed(link);
            let right = self.seed(link + 1);
            let mut next = Vec::new();
            for world in &worlds {
                let outcomes = self.run_step3_bell_merge(&world.state, left, right, 0)?;
                let success_prob: f64 =
                    outcomes.iter().filter(|o| o.pattern.heralded()).map(|o| o.probability).sum();
                for outcome in outcomes.into_iter().filter(|o| o.pattern.heralded()) {
                    let sign = outcome.pattern.bell_sign();
                    let fixed = if sign < 0 {
                        self.apply_bell_sign_fix(&outcome.state, right)?
                    } else {
                        outcome.state
                    };
                    let mut heralds = world.heralds.clone();
                    heralds.push(HeraldRecord { link, attempts: 1, sign });
                    next.push(World {
                        state: fixed,
                        weight: world.weight * outcome.probability / success_prob,
                        heralds,
                        s_outcomes: world.s_outcomes.clone(),
                    });
                }
            }
            worlds = next;
            if worlds.len() > MAX_WORLDS {
                return Err(SimError::Precondition(format!("world count exceeded {MAX_WORLDS}")));
            }
        }

        // interior connections
        for clock in 1..self.clocks.saturating_sub(1) {
            let mut next = Vec::new();
            for world in &worlds {
                for (m, prob, branch) in self.connect_clock(&world.state, clock, clock == 1)? {
                    let mut s_outcomes = world.s_outcomes.clone();
                    s_outcomes.push((clock, m));
                    next.push(World {
                        state: branch,
                        weight: world.weight * prob,
                        heralds: world.heralds.clone(),
                        s_outcomes,
                    });
                }
            }
            worlds = next;
            if worlds.len() > MAX_WORLDS {
                return Err(SimError::Precondition(format!("world count exceeded {MAX_WORLDS}")));
            }
        }

        let mut records = Vec::new();
        for world in worlds {
            let state = self.finish_photonic(&world.state)?;
            let fidelity = state.fidelity(&self.ghz_target());
            records.push(WorldRecord {
                weight: world.weight,
                heralds: world.heralds,
                s_outcomes: world.s_outcomes,
                messenger_outcome: None,
                fidelity,
                final_state: state,
            });
        }
        Ok(records)
    }

    /// Shared tail of the photonic pipeline: seed conversion at the chain
    /// head, the two-clock alignment flip, per-clock growth, messenger
    /// retirement.
    fn finish_photonic(&self, state: &CollectiveState) -> Result<CollectiveState, SimError> {
        let mut current = state.clone();
        if self.clocks >= 2 {
            current = apply_all(&current, &self.ops_convert_shelf_to_clock(self.seed(0)))?;
            if self.clocks == 2 {
                current = apply_all(&current, &self.ops_flip_clock_wave(self.seed(0)))?;
            }
        }
        for clock in 0..self.clocks {
            current = self.run_step5_local_growth(&current, clock)?;
        }
        self.retire_messenger(&current)
    }

    fn run_exhaustive_messenger(&self) -> Result<Vec<WorldRecord>, SimError> {
        let state = self.vacuum_state()?;
        let every: Vec<usize> = (0..self.n_ensembles()).collect();
        let mut records = Vec::new();
        for (sign, prob, branch) in self.run_messenger_distribute(&state, &every)? {
            let mut current = branch;
            for clock in 0..self.clocks {
                for m in 0..self.ensembles_per_clock {
                    current = apply_all(&current, &self.ops_growth(self.seed(clock) + m as usize))?;
                }
            }
            let current = self.retire_messenger(&current)?;
            let fidelity = current.fidelity(&self.ghz_target());
            records.push(WorldRecord {
                weight: prob,
                heralds: Vec::new(),
                s_outcomes: Vec::new(),
                messenger_outcome: Some(sign),
                fidelity,
                final_state: current,
            });
        }
        Ok(records)
    }

    fn run_sampled(&self, rng: &mut ChaCha12Rng, trace: &mut Vec<StepTrace>) -> Result<WorldRecord, SimError> {
        if self.variant == Variant::Messenger {
            let state = self.vacuum_state()?;
            let every: Vec<usize> = (0..self.n_ensembles()).collect();
            let outcomes = self.run_messenger_distribute(&state, &every)?;
            let (sign, _, mut current) = Self::sample(rng, outcomes, |o| o.1)?;
            Self::record(trace, format!("messenger distribute (outcome {sign:+})"), &current);
            for clock in 0..self.clocks {
                for m in 0..self.ensembles_per_clock {
                    current = apply_all(&current, &self.ops_growth(self.seed(clock) + m as usize))?;
                }
                Self::record(trace, format!("grow clock {clock}"), &current);
            }
            let current = self.retire_messenger(&current)?;
            let fidelity = current.fidelity(&self.ghz_target());
            return Ok(WorldRecord {
                weight: 1.0,
                heralds: Vec::new(),
                s_outcomes: Vec::new(),
                messenger_outcome: Some(sign),
                fidelity,
                final_state: current,
            });
        }

        let mut state = self.prepare_all(trace)?;
        let mut heralds = Vec::new();
        for link in 0..self.clocks.saturating_sub(1) {
            let left = self.seed(link);
            let right = self.seed(link + 1);
            let mut attempt = 0u32;
            loop {
                let outcomes = self.run_step3_bell_merge(&state, left, right, attempt)?;
                let picked = Self::sample(rng, outcomes, |o| o.probability)?;
                if picked.pattern.heralded() {
                    let sign = picked.pattern.bell_sign();
                    state = if sign < 0 {
                        self.apply_bell_sign_fix(&picked.state, right)?
                    } else {
                        picked.state
                    };
                    heralds.push(HeraldRecord { link, attempts: attempt + 1, sign });
                    Self::record(trace, format!("link {link} heralded (sign {sign:+})"), &state);
                    break;
                }
                // failure: both registers collapsed to a product value; reset
                // them and run a fresh attempt on new time bins
                attempt += 1;
                if attempt >= MAX_LINK_ATTEMPTS {
                    return Err(SimError::RetriesExhausted(attempt));
                }
                state = self.reset_and_reprepare(&picked.state, left, right, attempt)?;
                Self::record(trace, format!("link {link} failed, retry {attempt}"), &state);
            }
        }
        let mut s_outcomes = Vec::new();
        for clock in 1..self.clocks.saturating_sub(1) {
            let outcomes = self.connect_clock(&state, clock, clock == 1)?;
            let (m, _, branch) = Self::sample(rng, outcomes, |o| o.1)?;
            state = branch;
            s_outcomes.push((clock, m));
            Self::record(trace, format!("connect clock {clock} (outcome {m})"), &state);
        }
        let state = self.finish_photonic(&state)?;
        Self::record(trace, "grow + cleanup", &state);
        let fidelity = state.fidelity(&self.ghz_target());
        Ok(WorldRecord {
            weight: 1.0,
            heralds,
            s_outcomes,
            messenger_outcome: None,
            fidelity,
            final_state: state,
        })
    }

    fn sample<T>(rng: &mut ChaCha12Rng, outcomes: Vec<T>, prob: impl Fn(&T) -> f64) -> Result<T, SimError> {
        let total: f64 = outcomes.iter().map(&prob).sum();
        let mut u = rng.gen::<f64>() * total;
        let count = outcomes.len();
        for (i, outcome) in outcomes.into_iter().enumerate() {
            u -= prob(&outcome);
            if u <= 0.0 || i + 1 == count {
                return Ok(outcome);
            }
        }
        Err(SimError::Precondition("empty outcome set".into()))
    }

    /// After a failed herald both affected registers hold definite values:
    /// reset them to zero, re-create the waves, and re-emit on fresh bins.
    fn reset_and_reprepare(
        &self,
        state: &CollectiveState,
        left: usize,
        right: usize,
        attempt: u32,
    ) -> Result<CollectiveState, SimError> {
        let n = self.atoms;
        let mut current = state.clone();

        // left ensemble: shelving register
        let shelf_value = current.definite_level_value(left, Level::S).ok_or_else(|| {
            SimError::Precondition("failed link left the shelving register undetermined".into())
        })?;
        if shelf_value == 1 {
            // swap the live clock wave out of the way, flip, swap back
            let mut ops = vec![self.pi_pulse(left, (Level::F, Level::S), 0.0, Condition::Always)];
            ops.extend(self.ops_flip_clock_wave(left));
            ops.push(self.pi_pulse(left, (Level::F, Level::S), 0.0, Condition::Always));
            ops.push(self.shift(left, Level::F, PI));
            current = apply_all(&current, &ops)?;
        }
        // rebuild the shelf wave behind the (possibly live) clock register
        let mut ops = vec![self.pi_pulse(left, (Level::F, Level::S), 0.0, Condition::Always)];
        ops.push(self.ground_rydberg(left, PI / (2.0 * (n as f64).sqrt()), n, 0.0, Condition::Always));
        ops.push(self.pi_pulse(left, (Level::F, Level::R1), PI, Condition::Always));
        ops.push(self.pi_pulse(left, (Level::F, Level::S), 0.0, Condition::Always));
        ops.push(self.shift(left, Level::F, PI));
        ops.push(self.shift(left, Level::S, FRAC_PI_2));
        current = apply_all(&current, &ops)?;
        current = self.run_step2_single_wave(&current, left, Wave::Shelf, attempt)?;

        // right ensemble: clock register
        let clock_value = current.definite_level_value(right, Level::F).ok_or_else(|| {
            SimError::Precondition("failed link left the clock register undetermined".into())
        })?;
        if clock_value == 1 {
            current = apply_all(&current, &self.ops_flip_clock_wave(right))?;
        }
        let ops = vec![
            self.ground_rydberg(right, PI / (2.0 * (n as f64).sqrt()), n, 0.0, Condition::Always),
            self.pi_pulse(right, (Level::F, Level::R1), PI, Condition::Always),
        ];
        current = apply_all(&current, &ops)?;
        self.run_step2_single_wave(&current, right, Wave::Clock, attempt)
    }
}


/// Parity distribution of a final GHZ-form state after per-atom phase φ:
/// P(p|φ) = ½|α + (−1)^p β e^{iNφ}|², with (α, β) the amplitudes of the
/// all-ground and all-clock components. Errors if the state has support
/// outside those two labels.
pub fn parity_distribution(state: &CollectiveState, phi: f64) -> Result<[f64; 2], SimError> {
    let n_total = state.n_atoms as u64 * state.n_ensembles as u64;
    let all_g = BasisLabel::vacuum(state.n_ensembles, false);
    let mut all_f = all_g.clone();
    for occ in &mut all_f.ensembles {
        *occ = Occupation { f: state.n_atoms as u8, ..Default::default() };
    }
    let mut alpha = Complex64::new(0.0, 0.0);
    let mut beta = Complex64::new(0.0, 0.0);
    for (label, &amp) in &state.amplitudes {
        if *label == all_g {
            alpha = amp;
        } else if *label == all_f {
            beta = amp;
        } else if amp.norm() > 1e-12 {
            return Err(SimError::Precondition(format!(
                "state has support outside the GHZ pair: {}",
                label.display()
            )));
        }
    }
    let rotated = beta * Complex64::from_polar(1.0, n_total as f64 * phi);
    let p_even = 0.5 * (alpha + rotated).norm_sqr();
    let p_odd = 0.5 * (alpha - rotated).norm_sqr();
    Ok([p_even, p_odd])
}
