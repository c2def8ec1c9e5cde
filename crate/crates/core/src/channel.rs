//! Rayleigh channels with exponential power-delay profiles.

use crate::error::{Error, Result};
use crate::ofdm::{ImpulseResponse, Link};
use crate::rng::SeededRng;

/// Default decay of the exponential profile, in nats per tap.
pub const DEFAULT_DECAY: f64 = 0.3;

/// Per-tap mean powers `p_i = c e^{-decay i}` normalized so that they sum to
/// the total gain.
#[derive(Debug, Clone, PartialEq)]
pub struct PdpProfile {
    powers: Vec<f64>,
    total_gain: f64,
    decay: f64,
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

impl PdpProfile {
    pub fn exponential(len: usize, gamma_db: f64, decay: f64) -> Result<Self> {
        if len == 0 {
            return Err(Error::Domain("power-delay profile needs at least one tap".into()));
        }
        if !(decay >= 0.0) || !decay.is_finite() {
            return Err(Error::Domain(format!("decay must be a finite non-negative value, got {decay}")));
        }
        let total_gain = db_to_linear(gamma_db);
        let shape: Vec<f64> = (0..len).map(|i| (-decay * i as f64).exp()).collect();
        let norm: f64 = shape.iter().sum();
        let powers = shape.iter().map(|s| total_gain * s / norm).collect();
        Ok(Self { powers, total_gain, decay })
    }

    /// Profile from explicit tap powers.
    pub fn from_powers(powers: Vec<f64>) -> Result<Self> {
        if powers.is_empty() {
            return Err(Error::Domain("power-delay profile needs at least one tap".into()));
        }
        if powers.iter().any(|&p| !(p > 0.0)) {
            return Err(Error::Domain("tap powers must be positive".into()));
        }
        let total_gain = powers.iter().sum();
        Ok(Self { powers, total_gain, decay: f64::NAN })
    }

    pub fn powers(&self) -> &[f64] {
        &self.powers
    }

    pub fn len(&self) -> usize {
        self.powers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.powers.is_empty()
    }

    pub fn total_gain(&self) -> f64 {
        self.total_gain
    }

    /// NaN for profiles built from explicit powers.
    pub fn decay(&self) -> f64 {
        self.decay
    }
}

/// Shorthand matching the experiment parameters.
pub fn exponential_pdp(len: usize, gamma_db: f64, decay: f64) -> Result<PdpProfile> {
    PdpProfile::exponential(len, gamma_db, decay)
}

/// Independent zero-mean circularly-symmetric Gaussian taps with the profile's variances.
pub fn sample_channel(pdp: &PdpProfile, link: Link, rng: &mut SeededRng) -> ImpulseResponse {
    let taps = pdp.powers().iter().map(|&p| rng.complex_normal(p)).collect();
    ImpulseResponse::new(taps, link).expect("profile is non-empty")
}
