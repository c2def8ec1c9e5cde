//! Secret-key agreement over OFDM wiretap channels.
//!
//! The crate covers the whole chain used to dimension a low-power key
//! agreement scheme:
//!
//! - [`ofdm`]: matrix model of the cyclic-prefix OFDM link and the effective
//!   legitimate/eavesdropper channels;
//! - [`channel`]: Rayleigh taps with exponential power-delay profiles;
//! - [`rates`]: secret-key and secrecy rates of the single-subcarrier input;
//! - [`ldpc`]: regular LDPC codes (PEG construction, encoding, scrambling,
//!   sum-product decoding, Gaussian-approximation density evolution, FER
//!   simulation and security gap);
//! - [`outage`]: distribution of the eavesdropper SNR and outage analysis.

// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod error;
pub mod ldpc;
pub mod ofdm;
pub mod outage;
pub mod rates;
pub mod rng;

pub use error::{Error, Result};
pub use rng::SeededRng;
