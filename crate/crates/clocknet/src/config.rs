//! Flat key=value configuration overriding the built-in physical constants.
//!
//! Every key is optional; anything not set keeps its default. Lines starting
//! with `#` and blank lines are ignored. Unknown keys are rejected so a typo
//! cannot silently run with defaults.

use crate::params::{LowerLevelRates, ParamsError};
use sha2::{Digest, Sha256};

/// Keys accepted in a config file.
pub const CONFIG_KEYS: [&str; 8] = [
    "gamma_s",
    "gamma_e",
    "gamma_dark",
    "link_length_L",
    "lattice_a",
    "k_e",
    "finesse_f",
    "atoms_per_clock",
];

/// Resolved toolkit-wide parameters: lower-level rates plus the atoms-per-clock
/// budget that normalizes the non-local error terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub rates: LowerLevelRates,
    /// Number of atoms a single clock can hold (the M·n technology budget).
    pub atoms_per_clock: u32,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self { rates: LowerLevelRates::default(), atoms_per_clock: 2500 }
    }
}

impl SystemParams {
    /// Parses a flat `key = value` config text over the defaults.
    pub fn from_config_text(text: &str) -> Result<Self, ParamsError> {
        let mut params = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ParamsError::Config(format!("line {}: expected key=value, got {:?}", lineno + 1, line)))?;
            let key = key.trim();
            let value: f64 = value.trim().parse().map_err(|e| {
                ParamsError::Config(format!("line {}: bad numeric value for {key}: {e}", lineno + 1))
            })?;
            match key {
                "gamma_s" => params.rates.gamma_s = value,
                "gamma_e" => params.rates.gamma_e = value,
                "gamma_dark" => params.rates.gamma_dark = value,
                "link_length_L" => params.rates.link_length = value,
                "lattice_a" => params.rates.lattice_a = value,
                "k_e" => params.rates.k_e = value,
                "finesse_f" => params.rates.finesse = value,
                "atoms_per_clock" => {
                    if value < 1.0 || value.fract() != 0.0 {
                        return Err(ParamsError::Config(format!(
                            "line {}: atoms_per_clock must be a positive integer",
                            lineno + 1
                        )));
                    }
                    params.atoms_per_clock = value as u32;
                }
                other => {
                    return Err(ParamsError::Config(format!(
                        "line {}: unknown key {other:?} (known: {})",
                        lineno + 1,
                        CONFIG_KEYS.join(", ")
                    )))
                }
            }
        }
        params.rates.validate()?;
        Ok(params)
    }
}

/// Content hash of the constants file, recorded in every output manifest.
/// `"default"` when no file was given.
pub fn config_digest(bytes: Option<&[u8]>) -> String {
    match bytes {
        None => "default".to_owned(),
        Some(b) => {
            let mut hasher = Sha256::new();
            hasher.update(b);
            format!("{:x}", hasher.finalize())
        }
    }
}
