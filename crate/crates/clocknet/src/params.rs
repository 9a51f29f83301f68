//! Physical constants and principal-quantum-number scaling laws for Yb Rydberg levels.
//!
//! Everything downstream (error budget, optimizer, simulator) pulls its dimensional
//! quantities from here. All values are stored in SI; the atomic-unit conversion for
//! the interaction coefficients happens exactly once, at construction.

use serde::Serialize;
use thiserror::Error;

/// Reduced Planck constant (J·s).
pub const HBAR: f64 = 1.054571817e-34;
/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// One atomic unit of a C₆ van der Waals coefficient, E_h·a₀⁶ (J·m⁶).
pub const ATOMIC_UNIT_C6: f64 = 9.573e-80;
/// One atomic unit of a C₃ dipole-dipole coefficient, E_h·a₀³ (J·m³).
pub const ATOMIC_UNIT_C3: f64 = 6.460e-49;

#[derive(Debug, Error, PartialEq)]
pub enum ParamsError {
    #[error("principal quantum number {0} too low: lifetime scaling needs n > 4.279")]
    PrincipalTooLowForLifetime(f64),
    #[error("principal quantum number {0} too low: C6 prefactor is non-positive below 3.422")]
    PrincipalTooLowForC6(f64),
    #[error("principal quantum number {0} too low: C3 scaling needs n >= 1")]
    PrincipalTooLowForC3(f64),
    #[error("{name} must be strictly positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("config error: {0}")]
    Config(String),
}

/// Inverse lifetime of the Rydberg levels (s⁻¹), extrapolated from measured
/// lifetimes at low principal quantum numbers. Spontaneous emission only; a
/// cold radiation environment is assumed at n ≳ 100.
pub fn rydberg_gamma(n_tilde: f64) -> Result<f64, ParamsError> {
    if n_tilde <= 4.279 {
        return Err(ParamsError::PrincipalTooLowForLifetime(n_tilde));
    }
    Ok(8.403e8 / (n_tilde - 4.279).powi(3))
}

/// Van der Waals C₆ coefficient for two atoms in the p-type Rydberg level (J·m⁶),
/// extrapolated as (−0.116 + 0.0339·ñ)·ñ¹¹ atomic units. Magnitude only; only
/// |Δ| enters the error model.
pub fn c6_self_coefficient(n_tilde: f64) -> Result<f64, ParamsError> {
    if -0.116 + 0.0339 * n_tilde <= 0.0 {
        return Err(ParamsError::PrincipalTooLowForC6(n_tilde));
    }
    Ok((-0.116 + 0.0339 * n_tilde) * n_tilde.powi(11) * ATOMIC_UNIT_C6)
}

/// Dipole-dipole C₃ coefficient between the two Rydberg species (J·m³),
/// extrapolated as (0.149 + 0.00077·ñ)·ñ⁴ atomic units. Magnitude only.
pub fn c3_cross_coefficient(n_tilde: f64) -> Result<f64, ParamsError> {
    if n_tilde < 1.0 {
        return Err(ParamsError::PrincipalTooLowForC3(n_tilde));
    }
    Ok((0.149 + 0.00077 * n_tilde) * n_tilde.powi(4) * ATOMIC_UNIT_C3)
}

/// Rydberg-level data for one principal quantum number.
///
/// `n_tilde` is kept as a real number: the scan grid is integer but the
/// extrapolation formulas are smooth, which keeps derivative-free optimization
/// experiments possible without touching the core.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RydbergConfig {
    /// Principal quantum number ñ of both Rydberg levels.
    pub n_tilde: f64,
    /// Loss rate γ of either Rydberg level (s⁻¹); the two levels decay alike.
    pub gamma: f64,
    /// |C₆| for the self-interaction of the p-type level (J·m⁶).
    pub c6_self: f64,
    /// |C₃| for the cross interaction between the two levels (J·m³).
    pub c3_cross: f64,
}

impl RydbergConfig {
    pub fn new(n_tilde: f64) -> Result<Self, ParamsError> {
        Ok(Self {
            n_tilde,
            gamma: rydberg_gamma(n_tilde)?,
            c6_self: c6_self_coefficient(n_tilde)?,
            c3_cross: c3_cross_coefficient(n_tilde)?,
        })
    }

    /// True when ñ lies in the range the extrapolations were built for.
    pub fn in_scan_range(&self) -> bool {
        (50.0..=150.0).contains(&self.n_tilde)
    }
}

/// Decay rates of the lower levels, photon-channel constants, and trap geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowerLevelRates {
    /// Decay rate of the metastable shelving level (s⁻¹).
    pub gamma_s: f64,
    /// Decay rate of the fast emitting level (s⁻¹).
    pub gamma_e: f64,
    /// Detector dark-count rate (s⁻¹).
    pub gamma_dark: f64,
    /// Fiber link length between neighboring stations (m).
    pub link_length: f64,
    /// Magic-wavelength lattice constant (m).
    pub lattice_a: f64,
    /// Wavenumber of the collectively emitted photon (m⁻¹).
    pub k_e: f64,
    /// Finesse of the collection cavity.
    pub finesse: f64,
}

impl Default for LowerLevelRates {
    fn default() -> Self {
        Self {
            gamma_s: 0.069,
            gamma_e: 1.8e8,
            gamma_dark: 10.0,
            link_length: 1.0e4,
            lattice_a: 275.75e-9,
            k_e: 2.0 * std::f64::consts::PI / 1.4e-6,
            finesse: 100.0,
        }
    }
}

impl LowerLevelRates {
    /// Checks positivity of every rate; returns soft warnings separately
    /// (links beyond 10 km violate the negligible-fiber-loss assumption but
    /// are not rejected).
    pub fn validate(&self) -> Result<Vec<String>, ParamsError> {
        let fields = [
            ("gamma_s", self.gamma_s),
            ("gamma_e", self.gamma_e),
            ("gamma_dark", self.gamma_dark),
            ("link_length", self.link_length),
            ("lattice_a", self.lattice_a),
            ("k_e", self.k_e),
            ("finesse", self.finesse),
        ];
        for (name, value) in fields {
            if !(value > 0.0) {
                return Err(ParamsError::NonPositive { name, value });
            }
        }
        let mut warnings = Vec::new();
        if self.link_length > 1.0e4 {
            warnings.push(format!(
                "link_length = {} m exceeds 10 km; fiber loss is not modeled at this range",
                self.link_length
            ));
        }
        Ok(warnings)
    }
}

/// Dimensionless interaction strengths δ₆ = C₆/(ħ a⁶ γ) and δ₃ = C₃/(ħ a³ γ)
/// for lattice constant `a`. Returned as (delta_self, delta_cross).
pub fn interaction_deltas(cfg: &RydbergConfig, a: f64) -> Result<(f64, f64), ParamsError> {
    if !(a > 0.0) {
        return Err(ParamsError::NonPositive { name: "lattice_a", value: a });
    }
    Ok((
        dimensionless_strength(cfg.c6_self, a.powi(6), cfg.gamma),
        dimensionless_strength(cfg.c3_cross, a.powi(3), cfg.gamma),
    ))
}

/// C/(ħ·aᵖ·γ) for an interaction coefficient C and length power aᵖ.
/// Exposed separately so unit-consistency can be checked across unit systems.
pub fn dimensionless_strength(coefficient: f64, a_pow: f64, gamma: f64) -> f64 {
    coefficient / (HBAR * a_pow * gamma)
}
