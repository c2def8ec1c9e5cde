//! Monte Carlo frame/bit error rates and the security gap.
//!
//! Each frame draws a random key block, scrambles it, encodes, sends it
//! over QPSK/AWGN, decodes and descrambles. Frame `i` always uses stream `i`
//! of the root seed, so results do not depend on the thread count.

use rayon::prelude::*;

use super::decoder::SumProductDecoder;
use super::encoder::Encoder;
use super::matrix::ParityCheckMatrix;
use super::modem::awgn_qpsk_llrs;
use super::scrambler::Scrambler;
use crate::channel::db_to_linear;
use crate::error::{Error, Result};
use crate::rng::SeededRng;

/// Default maximum number of sum-product iterations.
pub const DEFAULT_DECODER_ITERATIONS: usize = 100;

const BATCH: usize = 32;
const Z95: f64 = 1.959_963_984_540_054;

/// A code ready for simulation: parity checks, encoder, decoder and scrambler.
#[derive(Debug, Clone)]
pub struct CodedLink {
    h: ParityCheckMatrix,
    encoder: Encoder,
    decoder: SumProductDecoder,
    scrambler: Scrambler,
}

impl CodedLink {
    pub fn new(h: ParityCheckMatrix, scrambler_seed: u64) -> Self {
        let encoder = Encoder::new(&h);
        let decoder = SumProductDecoder::new(&h);
        let scrambler = Scrambler::new(encoder.k(), scrambler_seed);
        Self { h, encoder, decoder, scrambler }
    }

    pub fn parity_checks(&self) -> &ParityCheckMatrix {
        &self.h
    }

    pub fn encoder(&self) -> &Encoder {
        &self.encoder
    }

    /// Runs one frame; returns (descrambled bit errors, decoder converged).
    pub fn run_frame(&self, lambda: f64, max_iter: usize, rng: &mut SeededRng) -> (usize, bool) {
        let key: Vec<u8> = (0..self.encoder.k()).map(|_| rng.bit()).collect();
        let word = self.encoder.encode(&self.scrambler.scramble(&key));
        let llrs = awgn_qpsk_llrs(&word, lambda, rng);
        let decoded = self.decoder.decode(&llrs, max_iter);
        let estimate = self.scrambler.descramble(&self.encoder.extract(&decoded.bits));
        let errors = estimate.iter().zip(&key).filter(|(a, b)| a != b).count();
        (errors, decoded.converged)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimParams {
    pub max_frames: usize,
    pub target_frame_errors: usize,
    pub max_iter: usize,
}

impl Default for SimParams {
    fn default() -> Self {
        Self { max_frames: 1000, target_frame_errors: 100, max_iter: DEFAULT_DECODER_ITERATIONS }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FerBerEstimate {
    pub snr_db: f64,
    pub fer: f64,
    pub ber: f64,
    pub frames: usize,
    pub frame_errors: usize,
    pub bit_errors: usize,
    /// Half-width of the Wilson 95% interval on the FER.
    pub confidence_halfwidth: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Wilson score interval `(low, high)` at 95% confidence.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let low = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let high = if successes == trials { 1.0 } else { (center + half).min(1.0) };
    (low, high)
}

pub fn fer_ber_sim(link: &CodedLink, snr_db: f64, params: SimParams, seed: u64) -> Result<FerBerEstimate> {
    if params.max_frames == 0 || params.target_frame_errors == 0 || params.max_iter == 0 {
        return Err(Error::Domain("simulation counts must be positive".into()));
    }
    let lambda = db_to_linear(snr_db);
    let root = SeededRng::new(seed);
    let k = link.encoder.k();
    let (mut frames, mut frame_errors, mut bit_errors) = (0usize, 0usize, 0usize);
    'outer: while frames < params.max_frames {
        let batch = BATCH.min(params.max_frames - frames);
        let results: Vec<usize> = (frames..frames + batch)
            .into_par_iter()
            .map(|i| link.run_frame(lambda, params.max_iter, &mut root.fork(i as u64)).0)
            .collect();
        // accumulate in frame order so early stopping is deterministic
        for errors in results {
            frames += 1;
            bit_errors += errors;
            if errors > 0 {
                frame_errors += 1;
                if frame_errors >= params.target_frame_errors {
                    break 'outer;
                }
            }
        }
    }
    let (ci_low, ci_high) = wilson_interval(frame_errors, frames);
    Ok(FerBerEstimate {
        snr_db,
        fer: frame_errors as f64 / frames as f64,
        ber: bit_errors as f64 / (frames * k.max(1)) as f64,
        frames,
        frame_errors,
        bit_errors,
        confidence_halfwidth: 0.5 * (ci_high - ci_low),
        ci_low,
        ci_high,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SecurityGap {
    /// `10 log10(Lambda_R / Lambda_E)`.
    pub gap_db: f64,
    /// Lowest SNR meeting the reliability target.
    pub lambda_r_db: f64,
    /// Highest SNR still meeting the security target.
    pub lambda_e_db: f64,
    pub points: Vec<FerBerEstimate>,
}

/// Simulates the FER over `grid_db` and locates the reliability and
/// security crossings by interpolation between neighbouring grid points.
pub fn security_gap(
    link: &CodedLink,
    fer_reliable: f64,
    fer_secure: f64,
    grid_db: &[f64],
    params: SimParams,
    seed: u64,
) -> Result<SecurityGap> {
    if !(fer_secure > fer_reliable) {
        return Err(Error::Domain(format!(
            "security FER target {fer_secure} must exceed reliability target {fer_reliable}"
        )));
    }
    let mut grid = grid_db.to_vec();
    grid.sort_by(f64::total_cmp);
    let points = grid
        .iter()
        .enumerate()
        .map(|(i, &db)| fer_ber_sim(link, db, params, seed.wrapping_add(i as u64)))
        .collect::<Result<Vec<_>>>()?;
    let (lambda_e_db, lambda_r_db) = gap_crossings(&points, fer_reliable, fer_secure)?;
    Ok(SecurityGap { gap_db: lambda_r_db - lambda_e_db, lambda_r_db, lambda_e_db, points })
}

/// Crossing points `(Lambda_E, Lambda_R)` in dB on an ascending FER grid.
pub fn gap_crossings(points: &[FerBerEstimate], fer_reliable: f64, fer_secure: f64) -> Result<(f64, f64)> {
    let exhausted = |what: &str| Error::GridExhausted(what.to_string());
    // security: last point with FER >= target before the curve drops below it
    let drop = points
        .iter()
        .position(|p| p.fer < fer_secure)
        .ok_or_else(|| exhausted("FER never falls below the security target"))?;
    if drop == 0 {
        return Err(exhausted("FER is already below the security target at the lowest SNR"));
    }
    let (a, b) = (&points[drop - 1], &points[drop]);
    let lambda_e = a.snr_db + (b.snr_db - a.snr_db) * (a.fer - fer_secure) / (a.fer - b.fer);

    let hit = points
        .iter()
        .position(|p| p.fer <= fer_reliable)
        .ok_or_else(|| exhausted("FER never reaches the reliability target"))?;
    let lambda_r = if hit == 0 || points[hit].fer == 0.0 {
        points[hit].snr_db
    } else {
        // log-linear interpolation of the waterfall
        let (a, b) = (&points[hit - 1], &points[hit]);
        let (la, lb, lt) = (a.fer.log10(), b.fer.log10(), fer_reliable.log10());
        a.snr_db + (b.snr_db - a.snr_db) * (la - lt) / (la - lb)
    };
    Ok((lambda_e, lambda_r))
}
