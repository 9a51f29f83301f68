//! Sparse collective-mode state vectors.
//!
//! Basis labels track, per ensemble, the occupation of the collective modes
//! (f, s, e, and the two Rydberg species); the ground population is implicit.
//! Perfect blockade caps each Rydberg species at one excitation per ensemble.
//! Photonic time bins and the optional messenger atom extend the label.

use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

/// Amplitudes below this magnitude are pruned after every operation.
pub const PRUNE_EPS: f64 = 1e-14;
/// Allowed norm drift before an operation is declared broken.
pub const NORM_TOL: f64 = 1e-12;
/// Basis-growth guard: ensembles larger than this are refused.
pub const MAX_ATOMS_PER_ENSEMBLE: u32 = 12;

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("ensemble size {0} outside the supported range 1..={MAX_ATOMS_PER_ENSEMBLE}")]
    BadEnsembleSize(u32),
    #[error("ensemble index {index} out of range for {count} ensembles")]
    BadEnsembleIndex { index: usize, count: usize },
    #[error("occupation exceeds the ensemble size or a blockade cap: {0}")]
    InvalidOccupation(String),
    #[error("state norm drifted to {0}, outside 1 ± 1e-12")]
    NormDrift(f64),
    #[error("collective phase undefined: {0}")]
    CollectivePhaseUndefined(String),
    #[error("photon bin {bin} of ensemble {ensemble} already occupied")]
    BinOccupied { ensemble: usize, bin: u32 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("measurement on empty register: {0}")]
    EmptyRegister(String),
    #[error("photonic modes already consumed: {0}")]
    ModesConsumed(String),
    #[error("herald retries exhausted after {0} attempts")]
    RetriesExhausted(u32),
}

/// The six single-atom levels of the scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Level {
    /// Clock ground state (population implicit in the labels).
    G,
    /// Clock excited state; carries one of the two spin waves.
    F,
    /// Metastable shelving level; carries the other spin wave.
    S,
    /// Fast-decaying emitting level.
    E,
    /// First Rydberg species (p-type).
    R1,
    /// Second Rydberg species (s-type), the blockade control.
    R2,
}

/// Collective occupation numbers of one ensemble; the ground count is
/// `n - (f + s + e + r1 + r2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Occupation {
    pub f: u8,
    pub s: u8,
    pub e: u8,
    pub r1: u8,
    pub r2: u8,
}

impl Occupation {
    pub fn vacuum() -> Self {
        Self::default()
    }

    pub fn is_vacuum(&self) -> bool {
        *self == Self::default()
    }

    pub fn excited_total(&self) -> u32 {
        self.f as u32 + self.s as u32 + self.e as u32 + self.r1 as u32 + self.r2 as u32
    }

    pub fn get(&self, level: Level, n_atoms: u32) -> u32 {
        match level {
            Level::G => n_atoms - self.excited_total(),
            Level::F => self.f as u32,
            Level::S => self.s as u32,
            Level::E => self.e as u32,
            Level::R1 => self.r1 as u32,
            Level::R2 => self.r2 as u32,
        }
    }

    /// Returns the occupation with `level` changed by `delta`, or None when
    /// the result violates a blockade cap or the atom count. The ground count
    /// is implicit: shifting it only checks that the pool stays in range.
    pub fn shifted(&self, level: Level, delta: i32, n_atoms: u32) -> Option<Self> {
        let mut out = *self;
        let slot = match level {
            Level::G => {
                let pool = n_atoms as i32 - out.excited_total() as i32 + delta;
                if pool < 0 || pool > n_atoms as i32 {
                    return None;
                }
                return Some(out);
            }
            Level::F => &mut out.f,
            Level::S => &mut out.s,
            Level::E => &mut out.e,
            Level::R1 => &mut out.r1,
            Level::R2 => &mut out.r2,
        };
        let next = *slot as i32 + delta;
        if next < 0 {
            return None;
        }
        *slot = next as u8;
        if out.excited_total() > n_atoms {
            return None;
        }
        // perfect blockade: at most one excitation per Rydberg species
        if out.r1 > 1 || out.r2 > 1 {
            return None;
        }
        Some(out)
    }

    /// Moves one quantum from `from` to `to`, respecting every cap. Moves
    /// touching the implicit ground pool adjust it through the explicit side
    /// alone.
    pub fn moved(&self, from: Level, to: Level, n_atoms: u32) -> Option<Self> {
        if self.get(from, n_atoms) == 0 {
            return None;
        }
        match (from, to) {
            (Level::G, other) => self.shifted(other, 1, n_atoms),
            (other, Level::G) => self.shifted(other, -1, n_atoms),
            (a, b) => self.shifted(a, -1, n_atoms)?.shifted(b, 1, n_atoms),
        }
    }

    pub fn validate(&self, n_atoms: u32) -> Result<(), SimError> {
        if self.excited_total() > n_atoms || self.r1 > 1 || self.r2 > 1 {
            return Err(SimError::InvalidOccupation(format!("{self:?} with n={n_atoms}")));
        }
        Ok(())
    }
}

/// State of the individually addressed messenger atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum MessengerLevel {
    /// Shelving level.
    Shelf,
    /// Rydberg control level (blocks adjacent ensembles).
    Rydberg,
}

/// An occupied photonic time bin. `bin` encodes the emission slot; retried
/// link attempts use fresh bin numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhotonBin {
    pub ensemble: u16,
    pub bin: u32,
}

/// One basis label: per-ensemble occupations, the set of occupied photon bins,
/// and the messenger level when a messenger atom is in play.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisLabel {
    pub ensembles: Vec<Occupation>,
    pub photons: Vec<PhotonBin>,
    pub messenger: Option<MessengerLevel>,
}

impl BasisLabel {
    pub fn vacuum(n_ensembles: usize, messenger: bool) -> Self {
        Self {
            ensembles: vec![Occupation::vacuum(); n_ensembles],
            photons: Vec::new(),
            messenger: if messenger { Some(MessengerLevel::Shelf) } else { None },
        }
    }

    pub fn with_photon(&self, photon: PhotonBin) -> Result<Self, SimError> {
        let mut out = self.clone();
        match out.photons.binary_search(&photon) {
            Ok(_) => Err(SimError::BinOccupied { ensemble: photon.ensemble as usize, bin: photon.bin }),
            Err(pos) => {
                out.photons.insert(pos, photon);
                Ok(out)
            }
        }
    }

    pub fn has_photon(&self, photon: PhotonBin) -> bool {
        self.photons.binary_search(&photon).is_ok()
    }

    pub fn without_photons(&self, bins: &[PhotonBin]) -> Self {
        let mut out = self.clone();
        out.photons.retain(|p| !bins.contains(p));
        out
    }

    /// Human-readable form used in traces, e.g. `e0[f1 s1] e1[g] | t(0:2) | mess=s`.
    pub fn display(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (i, occ) in self.ensembles.iter().enumerate() {
            if occ.is_vacuum() {
                parts.push(format!("e{i}[g]"));
            } else {
                let mut inner = Vec::new();
                for (sym, v) in [("f", occ.f), ("s", occ.s), ("e", occ.e), ("r1", occ.r1), ("r2", occ.r2)] {
                    if v > 0 {
                        inner.push(if v == 1 { sym.to_string() } else { format!("{sym}{v}") });
                    }
                }
                parts.push(format!("e{i}[{}]", inner.join(" ")));
            }
        }
        let mut out = parts.join(" ");
        if !self.photons.is_empty() {
            let bins: Vec<String> =
                self.photons.iter().map(|p| format!("{}:{}", p.ensemble, p.bin)).collect();
            out.push_str(&format!(" | t({})", bins.join(",")));
        }
        if let Some(m) = self.messenger {
            out.push_str(match m {
                MessengerLevel::Shelf => " | mess=s",
                MessengerLevel::Rydberg => " | mess=r2",
            });
        }
        out
    }
}

/// Sparse amplitude map over basis labels. Value semantics: operations return
/// fresh states, nothing is shared.
#[derive(Debug, Clone, PartialEq)]
pub struct CollectiveState {
    pub amplitudes: BTreeMap<BasisLabel, Complex64>,
    /// Atoms per ensemble (all ensembles equal-sized).
    pub n_atoms: u32,
    pub n_ensembles: usize,
}

impl CollectiveState {
    /// All ensembles in the collective ground state.
    pub fn vacuum(n_ensembles: usize, n_atoms: u32, messenger: bool) -> Result<Self, SimError> {
        if n_atoms == 0 || n_atoms > MAX_ATOMS_PER_ENSEMBLE {
            return Err(SimError::BadEnsembleSize(n_atoms));
        }
        let mut amplitudes = BTreeMap::new();
        amplitudes.insert(BasisLabel::vacuum(n_ensembles, messenger), Complex64::new(1.0, 0.0));
        Ok(Self { amplitudes, n_atoms, n_ensembles })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    /// Drops negligible amplitudes and verifies labels and norm.
    pub fn finalize(mut self) -> Result<Self, SimError> {
        self.amplitudes.retain(|_, a| a.norm() > PRUNE_EPS);
        for label in self.amplitudes.keys() {
            for occ in &label.ensembles {
                occ.validate(self.n_atoms)?;
            }
        }
        let norm = self.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(SimError::NormDrift(norm));
        }
        Ok(self)
    }

    /// Renormalizes after a projective measurement.
    pub fn renormalized(mut self) -> Self {
        let norm = self.norm_sqr().sqrt();
        if norm > 0.0 {
            for a in self.amplitudes.values_mut() {
                *a /= norm;
            }
        }
        self
    }

    pub fn inner_product(&self, other: &Self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (label, a) in &self.amplitudes {
            if let Some(b) = other.amplitudes.get(label) {
                acc += a.conj() * b;
            }
        }
        acc
    }

    /// |⟨self|other⟩|², insensitive to global phase.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.inner_product(other).norm_sqr()
    }

    pub fn occupation(&self, label: &BasisLabel, ensemble: usize) -> Occupation {
        label.ensembles[ensemble]
    }

    /// True when `ensemble` is in the vacuum in every branch.
    pub fn ensemble_is_vacuum(&self, ensemble: usize) -> bool {
        self.amplitudes.keys().all(|l| l.ensembles[ensemble].is_vacuum())
    }

    /// The definite occupation of a register, if it has the same value in
    /// every branch.
    pub fn definite_level_value(&self, ensemble: usize, level: Level) -> Option<u32> {
        let mut iter = self.amplitudes.keys();
        let first = iter.next()?.ensembles[ensemble].get(level, self.n_atoms);
        iter.all(|l| l.ensembles[ensemble].get(level, self.n_atoms) == first)
            .then_some(first)
    }

    /// Largest amplitude magnitude, for trace thresholds.
    pub fn max_amplitude(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm()).fold(0.0, f64::max)
    }
}
