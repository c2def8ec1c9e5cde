//! Regular LDPC codes for the degraded wiretap channel.

pub mod alist;
pub mod decoder;
pub mod density;
pub mod encoder;
pub mod gf2;
pub mod matrix;
pub mod modem;
pub mod peg;
pub mod scrambler;
pub mod sim;

pub use decoder::{sum_product_decode, DecodeResult, SumProductDecoder};
pub use density::{decoding_threshold, density_evolution, psi, psi_inv, Ensemble, ThresholdSearch};
pub use encoder::Encoder;
pub use matrix::ParityCheckMatrix;
pub use modem::awgn_qpsk_llrs;
pub use peg::{peg_construct, peg_report, PegReport};
pub use scrambler::Scrambler;
pub use sim::{fer_ber_sim, security_gap, CodedLink, FerBerEstimate, SecurityGap, SimParams};
