//! Primitive operations on collective states: calibrated Rabi pulses, light
//! shifts, conditional photon emission, and projective measurements.
//!
//! A pulse `[φ]_{a,b}` carries the total single-atom Rabi phase φ and a laser
//! (axis) phase θ. On an unblocked branch it rotates the two-level subspace
//! reachable by moving one quantum between the addressed modes; the effective
//! rotation angle is φ times the collective matrix element. With θ = 0 a π
//! pulse maps |a⟩ → −i|b⟩; the canonical sequences choose θ per pulse so that
//! each composite gadget reproduces its target state with real positive
//! amplitudes.
//!
//! Cross blockade is physics, not bookkeeping: any pulse touching one Rydberg
//! species is inert on branches where the other species is excited.

use super::state::{BasisLabel, CollectiveState, Level, MessengerLevel, Occupation, PhotonBin, SimError};
use num_complex::Complex64;
use std::collections::BTreeMap;

/// How the collective rotation angle is derived from the single-atom phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Enhancement {
    /// Coupling calibrated to a ground pool of `m` atoms: Θ = φ·√m. Used for
    /// ground↔Rydberg pulses; treats the spin-wave modes as exactly
    /// independent of the few excitations parked in other levels.
    Pool(u32),
    /// Exact two-mode matrix element of the addressed рung: Θ = φ·√(k(l+1)).
    Ladder,
}

/// Extra blockade predicates beyond the always-on cross blockade.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Condition {
    Always,
    /// Inert while the messenger atom (parked at this ensemble) is in its
    /// Rydberg level.
    BlockedIfMessengerRydberg,
    /// For messenger pulses: inert while the adjacent ensemble holds an r1
    /// excitation.
    BlockedIfEnsembleR1(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RabiPulse {
    pub ensemble: usize,
    pub levels: (Level, Level),
    /// Total single-atom Rabi phase φ (e.g. π, π/√n).
    pub rabi_phase: f64,
    /// Laser phase θ selecting the rotation axis in the equatorial plane.
    pub axis_phase: f64,
    pub enhancement: Enhancement,
    pub condition: Condition,
}

/// Rotation of the messenger atom between its shelving and Rydberg levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MessengerPulse {
    pub rabi_phase: f64,
    pub axis_phase: f64,
    pub condition: Condition,
}

/// Far-detuned light shift: multiplies each branch by e^{i·angle·n_level}.
/// This is the timing/phase bookkeeping the composite gadgets need.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseShift {
    pub ensemble: usize,
    pub level: Level,
    pub angle: f64,
}

/// Collectively enhanced spontaneous decay of the emitting level into the
/// addressed time bin (ideal limit: the photon is always captured).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonEmit {
    pub ensemble: usize,
    pub bin: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Op {
    Rabi(RabiPulse),
    Messenger(MessengerPulse),
    Shift(PhaseShift),
    Emit(PhotonEmit),
}

impl Op {
    pub fn apply(&self, state: &CollectiveState) -> Result<CollectiveState, SimError> {
        match self {
            Op::Rabi(p) => apply_rabi(state, p),
            Op::Messenger(p) => apply_messenger(state, p),
            Op::Shift(p) => apply_shift(state, p),
            Op::Emit(p) => apply_emit(state, p),
        }
    }
}

/// Applies a sequence of primitive operations, checking norm after each.
pub fn apply_all(state: &CollectiveState, ops: &[Op]) -> Result<CollectiveState, SimError> {
    let mut current = state.clone();
    for op in ops {
        current = op.apply(&current)?;
    }
    Ok(current)
}

fn involves(levels: (Level, Level), level: Level) -> bool {
    levels.0 == level || levels.1 == level
}

fn blocked(label: &BasisLabel, pulse: &RabiPulse) -> Result<bool, SimError> {
    let occ = label.ensembles[pulse.ensemble];
    // cross blockade between the two Rydberg species, always on
    if involves(pulse.levels, Level::R1) && occ.r2 == 1 {
        return Ok(true);
    }
    if involves(pulse.levels, Level::R2) && occ.r1 == 1 {
        return Ok(true);
    }
    match pulse.condition {
        Condition::Always => Ok(false),
        Condition::BlockedIfMessengerRydberg => Ok(label.messenger == Some(MessengerLevel::Rydberg)),
        Condition::BlockedIfEnsembleR1(_) => Err(SimError::Precondition(
            "ensemble-r1 condition is only meaningful on messenger pulses".into(),
        )),
    }
}

/// All occupations reachable from `occ` by moving quanta between the two
/// addressed levels; order is only used for adjacency.
fn ladder(occ: Occupation, levels: (Level, Level), n_atoms: u32) -> Vec<Occupation> {
    let mut rungs = vec![occ];
    // walk a -> b
    let mut cur = occ;
    while let Some(next) = cur.moved(levels.0, levels.1, n_atoms) {
        rungs.push(next);
        cur = next;
    }
    // walk b -> a
    cur = occ;
    while let Some(next) = cur.moved(levels.1, levels.0, n_atoms) {
        rungs.insert(0, next);
        cur = next;
    }
    rungs
}

fn apply_rabi(state: &CollectiveState, pulse: &RabiPulse) -> Result<CollectiveState, SimError> {
    if pulse.ensemble >= state.n_ensembles {
        return Err(SimError::BadEnsembleIndex { index: pulse.ensemble, count: state.n_ensembles });
    }
    if !pulse.rabi_phase.is_finite() || !pulse.axis_phase.is_finite() {
        return Err(SimError::Precondition("pulse phases must be finite".into()));
    }
    let n = state.n_atoms;
    let mut out: BTreeMap<BasisLabel, Complex64> = BTreeMap::new();
    let mut add = |label: BasisLabel, amp: Complex64| {
        *out.entry(label).or_insert(Complex64::new(0.0, 0.0)) += amp;
    };

    for (label, &amp) in &state.amplitudes {
        if blocked(label, pulse)? {
            add(label.clone(), amp);
            continue;
        }
        let occ = label.ensembles[pulse.ensemble];
        let rungs = ladder(occ, pulse.levels, n);
        match rungs.len() {
            1 => add(label.clone(), amp),
            2 => {
                let (here, other) = if rungs[0] == occ { (0, 1) } else { (1, 0) };
                // moving a→b raises the b-count
                let b_here = rungs[here].get(pulse.levels.1, n);
                let b_other = rungs[other].get(pulse.levels.1, n);
                let forward = b_other > b_here; // this input sits on the a-rich rung
                let mu = match pulse.enhancement {
                    Enhancement::Pool(m) => (m as f64).sqrt(),
                    Enhancement::Ladder => {
                        // matrix element of the rung: √(n_a·(n_b+1)) evaluated
                        // on the a-rich side
                        let a_rich = if forward { rungs[here] } else { rungs[other] };
                        let na = a_rich.get(pulse.levels.0, n) as f64;
                        let nb = a_rich.get(pulse.levels.1, n) as f64;
                        (na * (nb + 1.0)).sqrt()
                    }
                };
                let theta = pulse.rabi_phase * mu;
                let cos = Complex64::new((theta / 2.0).cos(), 0.0);
                let phase = if forward { pulse.axis_phase } else { -pulse.axis_phase };
                let transfer = Complex64::new(0.0, -1.0)
                    * Complex64::from_polar(1.0, phase)
                    * (theta / 2.0).sin();
                let mut partner = label.clone();
                partner.ensembles[pulse.ensemble] = rungs[other];
                add(label.clone(), cos * amp);
                add(partner, transfer * amp);
            }
            _ => {
                // multi-rung ladders occur only for unblockaded level pairs;
                // only an exact π pulse acts cleanly there (independent-atom
                // swap of the two occupations)
                let is_pi = (pulse.rabi_phase - std::f64::consts::PI).abs() < 1e-9;
                let rydberg = involves(pulse.levels, Level::R1) || involves(pulse.levels, Level::R2);
                if !is_pi || rydberg || pulse.enhancement != Enhancement::Ladder {
                    return Err(SimError::CollectivePhaseUndefined(format!(
                        "{:?} pulse on a {}-rung ladder at occupation {:?}",
                        pulse.levels,
                        rungs.len(),
                        occ
                    )));
                }
                let na = occ.get(pulse.levels.0, n);
                let nb = occ.get(pulse.levels.1, n);
                let mut swapped = occ;
                set_count(&mut swapped, pulse.levels.0, nb, n);
                set_count(&mut swapped, pulse.levels.1, na, n);
                swapped.validate(n)?;
                // each atom in the pair contributes −i e^{±iθ}
                let total = (na + nb) as f64;
                let signed = na as f64 - nb as f64;
                let phase = Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_2 * total)
                    * Complex64::from_polar(1.0, pulse.axis_phase * signed);
                let mut partner = label.clone();
                partner.ensembles[pulse.ensemble] = swapped;
                add(partner, phase * amp);
            }
        }
    }
    CollectiveState { amplitudes: out, n_atoms: n, n_ensembles: state.n_ensembles }.finalize()
}

fn set_count(occ: &mut Occupation, level: Level, value: u32, _n_atoms: u32) {
    match level {
        Level::G => {} // implicit
        Level::F => occ.f = value as u8,
        Level::S => occ.s = value as u8,
        Level::E => occ.e = value as u8,
        Level::R1 => occ.r1 = value as u8,
        Level::R2 => occ.r2 = value as u8,
    }
}

fn apply_messenger(state: &CollectiveState, pulse: &MessengerPulse) -> Result<CollectiveState, SimError> {
    let mut out: BTreeMap<BasisLabel, Complex64> = BTreeMap::new();
    let mut add = |label: BasisLabel, amp: Complex64| {
        *out.entry(label).or_insert(Complex64::new(0.0, 0.0)) += amp;
    };
    for (label, &amp) in &state.amplitudes {
        let Some(level) = label.messenger else {
            return Err(SimError::Precondition("messenger pulse without a messenger register".into()));
        };
        let is_blocked = match pulse.condition {
            Condition::Always => false,
            Condition::BlockedIfEnsembleR1(i) => label.ensembles[i].r1 == 1,
            Condition::BlockedIfMessengerRydberg => {
                return Err(SimError::Precondition(
                    "messenger pulses cannot be conditioned on the messenger itself".into(),
                ))
            }
        };
        if is_blocked {
            add(label.clone(), amp);
            continue;
        }
        let theta = pulse.rabi_phase;
        let cos = Complex64::new((theta / 2.0).cos(), 0.0);
        let forward = level == MessengerLevel::Shelf;
        let phase = if forward { pulse.axis_phase } else { -pulse.axis_phase };
        let transfer =
            Complex64::new(0.0, -1.0) * Complex64::from_polar(1.0, phase) * (theta / 2.0).sin();
        let mut partner = label.clone();
        partner.messenger = Some(match level {
            MessengerLevel::Shelf => MessengerLevel::Rydberg,
            MessengerLevel::Rydberg => MessengerLevel::Shelf,
        });
        add(label.clone(), cos * amp);
        add(partner, transfer * amp);
    }
    CollectiveState { amplitudes: out, n_atoms: state.n_atoms, n_ensembles: state.n_ensembles }.finalize()
}

fn apply_shift(state: &CollectiveState, shift: &PhaseShift) -> Result<CollectiveState, SimError> {
    if shift.ensemble >= state.n_ensembles {
        return Err(SimError::BadEnsembleIndex { index: shift.ensemble, count: state.n_ensembles });
    }
    let n = state.n_atoms;
    let mut out = BTreeMap::new();
    for (label, &amp) in &state.amplitudes {
        let count = label.ensembles[shift.ensemble].get(shift.level, n) as f64;
        out.insert(label.clone(), amp * Complex64::from_polar(1.0, shift.angle * count));
    }
    CollectiveState { amplitudes: out, n_atoms: n, n_ensembles: state.n_ensembles }.finalize()
}

fn apply_emit(state: &CollectiveState, emit: &PhotonEmit) -> Result<CollectiveState, SimError> {
    if emit.ensemble >= state.n_ensembles {
        return Err(SimError::BadEnsembleIndex { index: emit.ensemble, count: state.n_ensembles });
    }
    let mut out = BTreeMap::new();
    for (label, &amp) in &state.amplitudes {
        let occ = label.ensembles[emit.ensemble];
        if occ.e >= 1 {
            let mut next = label
                .with_photon(PhotonBin { ensemble: emit.ensemble as u16, bin: emit.bin })?;
            next.ensembles[emit.ensemble].e -= 1; // atom decays back to ground
            out.insert(next, amp);
        } else {
            out.insert(label.clone(), amp);
        }
    }
    CollectiveState { amplitudes: out, n_atoms: state.n_atoms, n_ensembles: state.n_ensembles }.finalize()
}

/// Projective measurement of a level occupation on one ensemble. Returns every
/// outcome with nonzero probability alongside its normalized post state.
/// Measuring a register that is zero in every branch is flagged.
pub fn measure_level(
    state: &CollectiveState,
    ensemble: usize,
    level: Level,
) -> Result<Vec<(u32, f64, CollectiveState)>, SimError> {
    if ensemble >= state.n_ensembles {
        return Err(SimError::BadEnsembleIndex { index: ensemble, count: state.n_ensembles });
    }
    let n = state.n_atoms;
    if state.definite_level_value(ensemble, level) == Some(0) {
        return Err(SimError::EmptyRegister(format!("{level:?} of ensemble {ensemble} is empty everywhere")));
    }
    let mut buckets: BTreeMap<u32, BTreeMap<BasisLabel, Complex64>> = BTreeMap::new();
    for (label, &amp) in &state.amplitudes {
        let value = label.ensembles[ensemble].get(level, n);
        buckets.entry(value).or_default().insert(label.clone(), amp);
    }
    Ok(buckets
        .into_iter()
        .map(|(value, amplitudes)| {
            let branch = CollectiveState { amplitudes, n_atoms: n, n_ensembles: state.n_ensembles };
            let prob = branch.norm_sqr();
            (value, prob, branch.renormalized())
        })
        .collect())
}

/// Measurement of the messenger atom in the (|s⟩ ± |r₂⟩)/√2 basis. Outcomes
/// are (+1, −1) with their probabilities; the messenger register is retired
/// from the labels afterwards.
pub fn measure_messenger_diagonal(
    state: &CollectiveState,
) -> Result<Vec<(i8, f64, CollectiveState)>, SimError> {
    let sqrt2_inv = std::f64::consts::FRAC_1_SQRT_2;
    let mut plus: BTreeMap<BasisLabel, Complex64> = BTreeMap::new();
    let mut minus: BTreeMap<BasisLabel, Complex64> = BTreeMap::new();
    for (label, &amp) in &state.amplitudes {
        let Some(level) = label.messenger else {
            return Err(SimError::Precondition("no messenger register to measure".into()));
        };
        let mut bare = label.clone();
        bare.messenger = None;
        let sign = if level == MessengerLevel::Shelf { 1.0 } else { -1.0 };
        *plus.entry(bare.clone()).or_insert(Complex64::new(0.0, 0.0)) += amp * sqrt2_inv;
        *minus.entry(bare).or_insert(Complex64::new(0.0, 0.0)) += amp * sign * sqrt2_inv;
    }
    let mut outcomes = Vec::new();
    for (sign, amplitudes) in [(1i8, plus), (-1i8, minus)] {
        let branch = CollectiveState {
            amplitudes,
            n_atoms: state.n_atoms,
            n_ensembles: state.n_ensembles,
        };
        let mut branch = branch;
        branch.amplitudes.retain(|_, a| a.norm() > super::state::PRUNE_EPS);
        let prob = branch.norm_sqr();
        if prob > 1e-12 {
            outcomes.push((sign, prob, branch.renormalized()));
        }
    }
    Ok(outcomes)
}

/// Extracts the joint pure state of two single-occupancy registers, provided
/// the full state factorizes as (two-register state) ⊗ (rest). Returns
/// amplitudes indexed by (left value, right value) ∈ {0,1}², or None when the
/// state does not factorize.
pub fn two_register_pure_state(
    state: &CollectiveState,
    left: (usize, Level),
    right: (usize, Level),
) -> Option<[Complex64; 4]> {
    let n = state.n_atoms;
    // group branches by the register values
    let mut groups: BTreeMap<(u32, u32), BTreeMap<BasisLabel, Complex64>> = BTreeMap::new();
    for (label, &amp) in &state.amplitudes {
        let lv = label.ensembles[left.0].get(left.1, n);
        let rv = label.ensembles[right.0].get(right.1, n);
        if lv > 1 || rv > 1 {
            return None;
        }
        let mut rest = label.clone();
        // zero the measured registers so rest-labels are comparable
        set_count(&mut rest.ensembles[left.0], left.1, 0, n);
        set_count(&mut rest.ensembles[right.0], right.1, 0, n);
        groups.entry((lv, rv)).or_default().insert(rest, amp);
    }
    // reference environment from the largest group
    let (_, reference) = groups
        .iter()
        .max_by(|a, b| {
            let na: f64 = a.1.values().map(|v| v.norm_sqr()).sum();
            let nb: f64 = b.1.values().map(|v| v.norm_sqr()).sum();
            na.partial_cmp(&nb).unwrap()
        })
        .map(|(k, v)| (*k, v.clone()))?;
    let ref_norm: f64 = reference.values().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let (pivot_label, pivot_amp) = reference
        .iter()
        .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
        .map(|(k, v)| (k.clone(), *v))?;

    let mut psi = [Complex64::new(0.0, 0.0); 4];
    for (&(lv, rv), group) in &groups {
        let lambda = group.get(&pivot_label)? / pivot_amp;
        // verify proportionality on every entry
        if group.len() != reference.len() {
            return None;
        }
        for (label, amp) in group {
            let expected = lambda * reference.get(label)?;
            if (amp - expected).norm() > 1e-10 {
                return None;
            }
        }
        psi[(lv * 2 + rv) as usize] = lambda * ref_norm;
    }
    // normalize
    let norm: f64 = psi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-12 {
        return None;
    }
    for a in &mut psi {
        *a /= norm;
    }
    Some(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn pulse(levels: (Level, Level), phase: f64, axis: f64, enh: Enhancement) -> RabiPulse {
        RabiPulse { ensemble: 0, levels, rabi_phase: phase, axis_phase: axis, enhancement: enh, condition: Condition::Always }
    }

    #[test]
    fn half_sequence_creates_equal_superposition() {
        // collective π/2 between ground and r1, then transfer to f
        let n = 4u32;
        let st = CollectiveState::vacuum(1, n, false).unwrap();
        let st = Op::Rabi(pulse((Level::G, Level::R1), PI / (2.0 * (n as f64).sqrt()), 0.0, Enhancement::Pool(n)))
            .apply(&st)
            .unwrap();
        let st = Op::Rabi(pulse((Level::F, Level::R1), PI, PI, Enhancement::Ladder)).apply(&st).unwrap();
        assert_eq!(st.amplitudes.len(), 2);
        for (label, amp) in &st.amplitudes {
            let occ = label.ensembles[0];
            assert!(occ.r1 == 0 && occ.s == 0);
            assert!((amp.re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12, "amp = {amp}");
            assert!(amp.im.abs() < 1e-12);
        }
    }

    #[test]
    fn empty_pair_is_identity() {
        let st = CollectiveState::vacuum(1, 3, false).unwrap();
        let out = Op::Rabi(pulse((Level::F, Level::S), PI, 0.3, Enhancement::Ladder)).apply(&st).unwrap();
        assert_eq!(out, st);
    }

    #[test]
    fn cross_blockade_freezes_r1_pulses() {
        let mut st = CollectiveState::vacuum(1, 3, false).unwrap();
        let mut label = st.amplitudes.keys().next().unwrap().clone();
        label.ensembles[0].r2 = 1;
        label.ensembles[0].f = 1;
        st.amplitudes = [(label, Complex64::new(1.0, 0.0))].into_iter().collect();
        let out = Op::Rabi(pulse((Level::F, Level::R1), PI, 0.0, Enhancement::Ladder)).apply(&st).unwrap();
        assert_eq!(out, st, "r2 occupation must freeze the f-r1 transition");
        let out2 = Op::Rabi(pulse((Level::G, Level::R1), PI / 3.0f64.sqrt(), 0.0, Enhancement::Pool(3)))
            .apply(&st)
            .unwrap();
        assert_eq!(out2, st);
    }

    #[test]
    fn pi_swap_on_multiatom_pair() {
        // |f^3⟩ under a π pulse on (f, s) swaps into |s^3⟩ with phase (−i)^3·e^{3iθ}
        let n = 3u32;
        let mut st = CollectiveState::vacuum(1, n, false).unwrap();
        let mut label = st.amplitudes.keys().next().unwrap().clone();
        label.ensembles[0].f = 3;
        st.amplitudes = [(label, Complex64::new(1.0, 0.0))].into_iter().collect();
        let out = Op::Rabi(pulse((Level::F, Level::S), PI, PI / 2.0, Enhancement::Ladder)).apply(&st).unwrap();
        let (label, amp) = out.amplitudes.iter().next().unwrap();
        assert_eq!(label.ensembles[0].s, 3);
        assert_eq!(label.ensembles[0].f, 0);
        // (−i·e^{iπ/2})^3 = 1
        assert!((amp - Complex64::new(1.0, 0.0)).norm() < 1e-12, "amp = {amp}");
    }

    #[test]
    fn partial_pulse_on_multiatom_pair_is_flagged() {
        let mut st = CollectiveState::vacuum(1, 4, false).unwrap();
        let mut label = st.amplitudes.keys().next().unwrap().clone();
        label.ensembles[0].f = 1;
        label.ensembles[0].s = 1;
        st.amplitudes = [(label, Complex64::new(1.0, 0.0))].into_iter().collect();
        let err = Op::Rabi(pulse((Level::F, Level::S), PI / 2.0, 0.0, Enhancement::Ladder)).apply(&st);
        assert!(matches!(err, Err(SimError::CollectivePhaseUndefined(_))));
    }

    #[test]
    fn norm_preserved_by_random_pulses() {
        let n = 3u32;
        let mut st = CollectiveState::vacuum(2, n, false).unwrap();
        let seq = [
            pulse((Level::G, Level::R1), PI / (2.0 * (n as f64).sqrt()), 0.1, Enhancement::Pool(n)),
            pulse((Level::F, Level::R1), PI, 1.3, Enhancement::Ladder),
            pulse((Level::F, Level::S), PI, 2.2, Enhancement::Ladder),
            pulse((Level::G, Level::R1), 0.7, -0.4, Enhancement::Pool(n)),
            pulse((Level::S, Level::R2), PI, 0.0, Enhancement::Ladder),
        ];
        for p in seq {
            st = Op::Rabi(p).apply(&st).unwrap();
            let norm = st.norm_sqr();
            assert!((norm - 1.0).abs() < 1e-12, "norm drifted to {norm}");
        }
    }

    #[test]
    fn emission_consumes_excited_level() {
        let mut st = CollectiveState::vacuum(1, 2, false).unwrap();
        let mut label = st.amplitudes.keys().next().unwrap().clone();
        label.ensembles[0].e = 1;
        st.amplitudes = [(label, Complex64::new(1.0, 0.0))].into_iter().collect();
        let out = Op::Emit(PhotonEmit { ensemble: 0, bin: 7 }).apply(&st).unwrap();
        let (label, _) = out.amplitudes.iter().next().unwrap();
        assert_eq!(label.ensembles[0].e, 0);
        assert!(label.has_photon(PhotonBin { ensemble: 0, bin: 7 }));
    }

    #[test]
    fn measure_empty_register_is_flagged() {
        let st = CollectiveState::vacuum(1, 2, false).unwrap();
        assert!(matches!(measure_level(&st, 0, Level::S), Err(SimError::EmptyRegister(_))));
    }

    #[test]
    fn messenger_rotation_and_measurement() {
        let st = CollectiveState::vacuum(1, 2, true).unwrap();
        // π/2 with axis π/2 gives (|s⟩ + |r2⟩)/√2 with real amplitudes
        let st = Op::Messenger(MessengerPulse { rabi_phase: PI / 2.0, axis_phase: PI / 2.0, condition: Condition::Always })
            .apply(&st)
            .unwrap();
        assert_eq!(st.amplitudes.len(), 2);
        let outcomes = measure_messenger_diagonal(&st).unwrap();
        assert_eq!(outcomes.len(), 1, "prepared state is the +1 eigenstate");
        assert_eq!(outcomes[0].0, 1);
        assert!((outcomes[0].1 - 1.0).abs() < 1e-12);
    }
}
