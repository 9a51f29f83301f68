//! Parity-measurement statistics, Fisher information, Allan deviations, and the
//! stability gain of a GHZ clock over unentangled interrogation.
//!
//! The GHZ register is modeled as the usual noisy mixture: weight c on the pure
//! GHZ state and weight (1−c)/2 on each of the two classical components, so the
//! parity fringes have contrast c = 2F − 1.

use crate::quad::{adaptive_simpson, QuadError};
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MetrologyError {
    #[error("contrast must lie in [0, 1], got {0}")]
    BadContrast(f64),
    #[error("need at least {min} atoms, got {n}")]
    TooFewAtoms { n: u64, min: u64 },
    #[error("bitstring length {0} exceeds the enumeration guard of 20 atoms")]
    BitstringTooLong(usize),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

/// Parity-fringe model of an N-atom GHZ register with contrast c = 2F − 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GhzMeasurementModel {
    pub n_atoms: u64,
    pub contrast: f64,
}

impl GhzMeasurementModel {
    pub fn from_contrast(n_atoms: u64, contrast: f64) -> Result<Self, MetrologyError> {
        if !(0.0..=1.0).contains(&contrast) {
            return Err(MetrologyError::BadContrast(contrast));
        }
        Ok(Self { n_atoms, contrast })
    }

    pub fn from_fidelity(n_atoms: u64, fidelity: f64) -> Result<Self, MetrologyError> {
        Self::from_contrast(n_atoms, 2.0 * fidelity - 1.0)
    }

    /// Contrast of a state prepared with per-atom error `e`: c = e^(−eN).
    pub fn from_error_per_atom(n_atoms: u64, error_per_atom: f64) -> Result<Self, MetrologyError> {
        Self::from_contrast(n_atoms, (-error_per_atom * n_atoms as f64).exp())
    }

    pub fn fidelity(&self) -> f64 {
        (1.0 + self.contrast) / 2.0
    }
}

/// GHZ fidelity after accumulating per-atom error e over N atoms:
/// F = (1 + e^(−eN))/2.
pub fn fidelity_from_error(error_per_atom: f64, n_atoms: f64) -> f64 {
    (1.0 + (-error_per_atom * n_atoms).exp()) / 2.0
}

/// P(p | φ) = [1 + c·(−1)^p·cos(Nφ)]/2 for parity bit p after interrogation
/// phase φ per atom.
pub fn parity_probability(parity: u8, phi: f64, model: &GhzMeasurementModel) -> f64 {
    let sign = if parity % 2 == 0 { 1.0 } else { -1.0 };
    (1.0 + model.contrast * sign * (model.n_atoms as f64 * phi).cos()) / 2.0
}

/// Probability of a full measurement record q ∈ {0,1}^N:
/// c·[1 + (−1)^Σq·cos(Nφ)]/2^N + (1−c)/2^N. Normalized over all 2^N strings,
/// and its fixed-parity marginal reproduces [`parity_probability`].
pub fn bitstring_probability(bits: &[u8], phi: f64, model: &GhzMeasurementModel) -> Result<f64, MetrologyError> {
    if bits.len() > 20 {
        return Err(MetrologyError::BitstringTooLong(bits.len()));
    }
    let n = bits.len() as i32;
    let parity_sign = if bits.iter().map(|&b| b as u64).sum::<u64>() % 2 == 0 { 1.0 } else { -1.0 };
    let c = model.contrast;
    let cos = (bits.len() as f64 * phi).cos();
    Ok((1.0 + c * parity_sign * cos) / 2f64.powi(n))
}

/// Fisher information of a single parity measurement at true phase φ:
/// N²·sin²(Nφ)/(1/c² − cos²(Nφ)). At c = 1 the removable limit N² is returned.
pub fn fisher_information(phi: f64, model: &GhzMeasurementModel) -> f64 {
    let n2 = (model.n_atoms as f64).powi(2);
    let c = model.contrast;
    if c == 0.0 {
        return 0.0;
    }
    if c >= 1.0 - 1e-14 {
        return n2;
    }
    let x = model.n_atoms as f64 * phi;
    n2 * x.sin().powi(2) / (1.0 / (c * c) - x.cos().powi(2))
}

/// Phase-averaged Fisher information F̄ = (1/2π)∫F(φ)dφ by quadrature over one
/// fringe period (the integrand is periodic in Nφ, so the average depends on c
/// only).
pub fn average_fisher(model: &GhzMeasurementModel) -> Result<f64, MetrologyError> {
    let n2 = (model.n_atoms as f64).powi(2);
    let c = model.contrast;
    if c == 0.0 {
        return Ok(0.0);
    }
    if c >= 1.0 - 1e-14 {
        return Ok(n2);
    }
    let inv_c2 = 1.0 / (c * c);
    let g = |x: f64| x.sin().powi(2) / (inv_c2 - x.cos().powi(2));
    let (integral, _) = adaptive_simpson(&g, -PI, PI, 1e-10)?;
    Ok(n2 * integral / (2.0 * PI))
}

/// Two-branch closed-form approximation of F̄/N²: c²/2 for weak contrast,
/// 1 − √(2(1−c)) near unit contrast, crossing over at c = 0.7.
pub fn average_fisher_approx(contrast: f64) -> f64 {
    if contrast <= 0.7 {
        contrast * contrast / 2.0
    } else {
        1.0 - (2.0 * (1.0 - contrast)).sqrt()
    }
}

/// Allan deviation of the entangled network at averaging time `tau`:
/// σ = (1/(c·ω₀·τ))·(8/π)·√(ln N)/N. Natural logarithm throughout.
pub fn allan_deviation_entangled(
    model: &GhzMeasurementModel,
    omega0: f64,
    tau: f64,
) -> Result<f64, MetrologyError> {
    if model.n_atoms < 2 {
        return Err(MetrologyError::TooFewAtoms { n: model.n_atoms, min: 2 });
    }
    let n = model.n_atoms as f64;
    Ok((8.0 / PI) * n.ln().sqrt() / n / (model.contrast * omega0 * tau))
}

/// Allan deviation of N unentangled atoms (standard quantum limit):
/// σ = 1/(ω₀·τ·√N).
pub fn allan_deviation_unentangled(n_atoms: u64, omega0: f64, tau: f64) -> Result<f64, MetrologyError> {
    if n_atoms < 1 {
        return Err(MetrologyError::TooFewAtoms { n: n_atoms, min: 1 });
    }
    Ok(1.0 / (omega0 * tau * (n_atoms as f64).sqrt()))
}

/// Stability gain of the entangled scheme over the unentangled one at equal
/// atom number: G = e^(−EN)·(π/8)·√(N/ln N). Identical to
/// σ_non-ent / (σ_ent/c) with c = e^(−EN).
pub fn gain(n_atoms: f64, error_per_atom: f64) -> f64 {
    (-error_per_atom * n_atoms).exp() * (PI / 8.0) * (n_atoms / n_atoms.ln()).sqrt()
}

/// Longest averaging time for which the entangled Allan scaling applies, given
/// an atomic coherence rate: τ < 1/(γ_at·N). Informational only, never enforced.
pub fn entangled_validity_time(n_atoms: u64, gamma_atomic: f64) -> f64 {
    1.0 / (gamma_atomic * n_atoms as f64)
}
