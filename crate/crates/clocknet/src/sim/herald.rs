//! Heralded Bell measurement of two time-bin photon pairs on a balanced beam
//! splitter.
//!
//! The station between a left ensemble A and a right ensemble B receives A's
//! shelving-correlated bins and B's clock-correlated bins, aligned into two
//! detection slots. Each slot interferes (A-pulse, B-pulse) on a 50/50 beam
//! splitter with detectors u (sum port) and v (difference port). A coincidence
//! — exactly one photon in each slot — heralds the entangled state
//! |0_s 1_f⟩ ± |1_s 0_f⟩; both photons bunching into one slot heralds failure
//! (the registers collapse to a product state) and the attempt is retried.
//!
//! Sign convention: coincidences on matching ports (u,u or v,v) project onto
//! the + state, mixed ports onto −. The two-photons-one-detector outcomes
//! follow the usual bunching statistics.

use super::state::{BasisLabel, CollectiveState, PhotonBin, SimError};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;

/// Detector that fired in one slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Port {
    U,
    V,
}

/// One detection slot outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum SlotOutcome {
    Empty,
    One(Port),
    Two(Port),
}

/// Joint outcome of the two slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct DetectionPattern {
    pub slot1: SlotOutcome,
    pub slot2: SlotOutcome,
}

impl DetectionPattern {
    /// Two-photon coincidence across the two slots.
    pub fn heralded(&self) -> bool {
        matches!(self.slot1, SlotOutcome::One(_)) && matches!(self.slot2, SlotOutcome::One(_))
    }

    /// Sign of the heralded Bell state: + when both photons exited the same
    /// port, − for mixed ports. Meaningless for failure patterns.
    pub fn bell_sign(&self) -> i8 {
        match (self.slot1, self.slot2) {
            (SlotOutcome::One(d1), SlotOutcome::One(d2)) if d1 == d2 => 1,
            _ => -1,
        }
    }
}

/// The four station modes of one link attempt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationBins {
    /// A's photon heralding the empty shelving wave (slot 1, A input).
    pub a_slot1: PhotonBin,
    /// A's photon heralding the occupied shelving wave (slot 2, A input).
    pub a_slot2: PhotonBin,
    /// B's photon heralding the empty clock wave (slot 1, B input).
    pub b_slot1: PhotonBin,
    /// B's photon heralding the occupied clock wave (slot 2, B input).
    pub b_slot2: PhotonBin,
}

impl StationBins {
    pub fn all(&self) -> [PhotonBin; 4] {
        [self.a_slot1, self.a_slot2, self.b_slot1, self.b_slot2]
    }
}

/// One measurement outcome: the detection pattern, its probability, and the
/// normalized post-measurement state with the four station bins consumed.
#[derive(Debug, Clone)]
pub struct BellOutcome {
    pub pattern: DetectionPattern,
    pub probability: f64,
    pub state: CollectiveState,
}

/// Amplitudes a slot content contributes to each slot outcome.
fn slot_amplitudes(has_a: bool, has_b: bool) -> Vec<(SlotOutcome, f64)> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    match (has_a, has_b) {
        (false, false) => vec![(SlotOutcome::Empty, 1.0)],
        (true, false) => vec![(SlotOutcome::One(Port::U), r), (SlotOutcome::One(Port::V), r)],
        (false, true) => vec![(SlotOutcome::One(Port::U), r), (SlotOutcome::One(Port::V), -r)],
        // a†b† → (u†² − v†²)/2 → amplitudes 1/√2 on each two-photon port
        (true, true) => vec![(SlotOutcome::Two(Port::U), r), (SlotOutcome::Two(Port::V), -r)],
    }
}

/// Projects the state onto every detection pattern of the station. The
/// returned probabilities sum to one; the station bins are removed from the
/// surviving labels.
pub fn bell_measure(state: &CollectiveState, bins: &StationBins) -> Result<Vec<BellOutcome>, SimError> {
    let consumed = bins.all();
    let mut by_pattern: BTreeMap<DetectionPattern, BTreeMap<BasisLabel, Complex64>> = BTreeMap::new();

    for (label, &amp) in &state.amplitudes {
        let stripped = label.without_photons(&consumed);
        let slot1 = slot_amplitudes(label.has_photon(bins.a_slot1), label.has_photon(bins.b_slot1));
        let slot2 = slot_amplitudes(label.has_photon(bins.a_slot2), label.has_photon(bins.b_slot2));
        for &(o1, c1) in &slot1 {
            for &(o2, c2) in &slot2 {
                let pattern = DetectionPattern { slot1: o1, slot2: o2 };
                *by_pattern
                    .entry(pattern)
                    .or_default()
                    .entry(stripped.clone())
                    .or_insert(Complex64::new(0.0, 0.0)) += amp * c1 * c2;
            }
        }
    }

    let mut outcomes = Vec::new();
    for (pattern, amplitudes) in by_pattern {
        let mut branch =
            CollectiveState { amplitudes, n_atoms: state.n_atoms, n_ensembles: state.n_ensembles };
        branch.amplitudes.retain(|_, a| a.norm() > super::state::PRUNE_EPS);
        let probability = branch.norm_sqr();
        if probability > 1e-12 {
            outcomes.push(BellOutcome { pattern, probability, state: branch.renormalized() });
        }
    }
    Ok(outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::state::Occupation;

    /// Builds the two-ensemble post-emission state by hand:
    /// (|0_s⟩|a1⟩ + |1_s⟩|a2⟩) ⊗ (|0_f⟩|b1⟩ + |1_f⟩|b2⟩) / 2.
    fn linked_pair() -> (CollectiveState, StationBins) {
        let bins = StationBins {
            a_slot1: PhotonBin { ensemble: 0, bin: 1 },
            a_slot2: PhotonBin { ensemble: 0, bin: 3 },
            b_slot1: PhotonBin { ensemble: 1, bin: 2 },
            b_slot2: PhotonBin { ensemble: 1, bin: 4 },
        };
        let mut amplitudes = BTreeMap::new();
        for (s_val, a_bin) in [(0u8, bins.a_slot1), (1, bins.a_slot2)] {
            for (f_val, b_bin) in [(0u8, bins.b_slot1), (1, bins.b_slot2)] {
                let label = BasisLabel {
                    ensembles: vec![
                        Occupation { s: s_val, ..Default::default() },
                        Occupation { f: f_val, ..Default::default() },
                    ],
                    photons: {
                        let mut v = vec![a_bin, b_bin];
                        v.sort();
                        v
                    },
                    messenger: None,
                };
                amplitudes.insert(label, Complex64::new(0.25 * 4.0 / 2.0, 0.0));
            }
        }
        (CollectiveState { amplitudes, n_atoms: 2, n_ensembles: 2 }, bins)
    }

    #[test]
    fn probabilities_sum_to_one() {
        let (state, bins) = linked_pair();
        let outcomes = bell_measure(&state, &bins).unwrap();
        let total: f64 = outcomes.iter().map(|o| o.probability).sum();
        assert!((total - 1.0).abs() < 1e-12, "total probability {total}");
        // four coincidence + four bunching patterns
        assert_eq!(outcomes.iter().filter(|o| o.pattern.heralded()).count(), 4);
        assert_eq!(outcomes.len(), 8);
    }

    #[test]
    fn heralded_states_are_bell_pairs() {
        let (state, bins) = linked_pair();
        for outcome in bell_measure(&state, &bins).unwrap() {
            if !outcome.pattern.heralded() {
                continue;
            }
            assert!((outcome.probability - 0.125).abs() < 1e-12);
            // amplitudes over (s of ensemble 0, f of ensemble 1)
            let amps: Vec<(u8, u8, Complex64)> = outcome
                .state
                .amplitudes
                .iter()
                .map(|(l, &a)| (l.ensembles[0].s, l.ensembles[1].f, a))
                .collect();
            assert_eq!(amps.len(), 2);
            let a01 = amps.iter().find(|(s, f, _)| *s == 0 && *f == 1).unwrap().2;
            let a10 = amps.iter().find(|(s, f, _)| *s == 1 && *f == 0).unwrap().2;
            let expected_sign = outcome.pattern.bell_sign() as f64;
            let ratio = a10 / a01;
            assert!((ratio.re - expected_sign).abs() < 1e-12 && ratio.im.abs() < 1e-12);
        }
    }

    #[test]
    fn failure_states_are_products() {
        let (state, bins) = linked_pair();
        for outcome in bell_measure(&state, &bins).unwrap() {
            if outcome.pattern.heralded() {
                continue;
            }
            assert_eq!(outcome.state.amplitudes.len(), 1, "bunching collapses to a product state");
            let label = outcome.state.amplitudes.keys().next().unwrap();
            // both registers agree: |0_s 0_f⟩ or |1_s 1_f⟩
            assert_eq!(label.ensembles[0].s, label.ensembles[1].f);
            assert!(label.photons.is_empty(), "station bins must be consumed");
        }
    }
}
