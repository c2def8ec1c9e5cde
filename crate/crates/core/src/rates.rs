//! Secret-key and secrecy rates under the low-power single-subcarrier input.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ofdm::{self, CMatrix, ImpulseResponse, OfdmConfig};

/// Per-subcarrier SNRs of the legitimate and eavesdropper links (linear).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrPair {
    pub lambda_r: f64,
    pub lambda_e: f64,
}

impl SnrPair {
    pub fn new(lambda_r: f64, lambda_e: f64) -> Result<Self> {
        if !(lambda_r >= 0.0 && lambda_e >= 0.0) {
            return Err(Error::Domain(format!("SNRs must be non-negative, got ({lambda_r}, {lambda_e})")));
        }
        Ok(Self { lambda_r, lambda_e })
    }
}

/// Rank-one input `K_u = P/(1+rho) e_m e_m*`: all power on one subcarrier,
/// scaled so that the transmitted block, prefix included, has energy `P`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputCovariance {
    pub subcarrier: usize,
    pub power: f64,
    pub rho: f64,
}

impl InputCovariance {
    pub fn single_subcarrier(cfg: &OfdmConfig, subcarrier: usize, power: f64) -> Self {
        Self { subcarrier, power, rho: cfg.rho() }
    }

    pub fn scale(&self) -> f64 {
        self.power / (1.0 + self.rho)
    }

    pub fn to_matrix(&self, m: usize) -> CMatrix {
        let mut k = CMatrix::zeros(m, m);
        k[(self.subcarrier, self.subcarrier)] = Complex64::new(self.scale(), 0.0);
        k
    }
}

/// Index of the largest-magnitude gain; ties go to the lowest index.
pub fn best_subcarrier(h_r: &[Complex64]) -> Result<usize> {
    if h_r.is_empty() {
        return Err(Error::EmptyInput("subcarrier gains"));
    }
    let mut best = 0;
    let mut best_gain = h_r[0].norm_sqr();
    for (i, g) in h_r.iter().enumerate().skip(1) {
        let gain = g.norm_sqr();
        if gain > best_gain {
            best = i;
            best_gain = gain;
        }
    }
    Ok(best)
}

/// SNRs on subcarrier `m` when the transmitter spends total power `power`.
pub fn snr_pair(
    cfg: &OfdmConfig,
    g_r: &ImpulseResponse,
    g_e: &ImpulseResponse,
    power: f64,
    m: usize,
) -> Result<SnrPair> {
    if g_r.len() > cfg.prefix() {
        return Err(Error::ChannelTooLong { len: g_r.len(), mu: cfg.prefix() });
    }
    if m >= cfg.subcarriers() {
        return Err(Error::Domain(format!("subcarrier {m} out of range")));
    }
    let scale = power / (1.0 + cfg.rho());
    let gain = g_r.frequency_response(cfg.subcarriers())[m].norm_sqr();
    let leak = ofdm::eavesdropper_column_energy(cfg, g_e, m);
    SnrPair::new(scale * gain, scale * leak)
}

/// Power that puts the legitimate SNR on the best subcarrier at `target_lambda_r`.
pub fn power_for_target_snr(cfg: &OfdmConfig, g_r: &ImpulseResponse, target_lambda_r: f64) -> Result<f64> {
    let h_r = g_r.frequency_response(cfg.subcarriers());
    let m = best_subcarrier(&h_r)?;
    let gain = h_r[m].norm_sqr();
    if gain <= 0.0 {
        return Err(Error::ZeroGain);
    }
    Ok(target_lambda_r * (1.0 + cfg.rho()) / gain)
}

/// `log2((1 + L_R + L_E) / (1 + L_E))` bits per channel use.
pub fn secret_key_rate(s: SnrPair) -> f64 {
    // ln_1p keeps precision at low SNR
    (s.lambda_r / (1.0 + s.lambda_e)).ln_1p() / std::f64::consts::LN_2
}

/// Comparison secrecy rate `[log2(1 + L_R) - log2(1 + L_E)]^+` of the
/// degraded Gaussian wiretap channel with the same input. This is a
/// reconstructed comparison curve, not a capacity result.
pub fn secrecy_rate(s: SnrPair) -> f64 {
    let r = (s.lambda_r.ln_1p() - s.lambda_e.ln_1p()) / std::f64::consts::LN_2;
    r.max(0.0)
}

/// Secret-key rate of the MIMO model for an arbitrary PSD input covariance:
/// `log2|I + K^1/2 (H_R* H_R + H_E* H_E) K^1/2| - log2|I + K^1/2 H_E* H_E K^1/2|`.
pub fn mimo_secret_key_rate(h_r: &[Complex64], h_e: &CMatrix, k_u: &CMatrix) -> Result<f64> {
    let m = h_r.len();
    if k_u.nrows() != m || k_u.ncols() != m {
        return Err(Error::DimensionMismatch(format!("K_u is {}x{}, expected {m}x{m}", k_u.nrows(), k_u.ncols())));
    }
    if h_e.ncols() != m {
        return Err(Error::DimensionMismatch(format!("H_E has {} columns, expected {m}", h_e.ncols())));
    }
    let k_half = psd_sqrt(k_u)?;
    let gram_e = h_e.adjoint() * h_e;
    let mut gram_total = gram_e.clone();
    for (i, g) in h_r.iter().enumerate() {
        gram_total[(i, i)] += Complex64::new(g.norm_sqr(), 0.0);
    }
    let joint = log2_det_identity_plus(&k_half, &gram_total)?;
    let eve = log2_det_identity_plus(&k_half, &gram_e)?;
    Ok(joint - eve)
}

/// Hermitian PSD square root via eigendecomposition.
pub(crate) fn psd_sqrt(k: &CMatrix) -> Result<CMatrix> {
    let herm = (k + k.adjoint()).scale(0.5);
    let eig = herm.symmetric_eigen();
    let max_abs = eig.eigenvalues.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let tol = 1e-12 * max_abs.max(1.0);
    let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if min < -tol {
        return Err(Error::NotPsd(min));
    }
    let roots = DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|&v| Complex64::new(v.max(0.0).sqrt(), 0.0)),
    );
    let v = &eig.eigenvectors;
    Ok(v * CMatrix::from_diagonal(&roots) * v.adjoint())
}

/// `log2 det(I + S G S)` for Hermitian PSD `G`, via Cholesky.
fn log2_det_identity_plus(s: &CMatrix, gram: &CMatrix) -> Result<f64> {
    let inner = s * gram * s;
    let mut a = (&inner + inner.adjoint()).scale(0.5);
    for i in 0..a.nrows() {
        a[(i, i)] += Complex64::new(1.0, 0.0);
    }
    let chol = a
        .cholesky()
        .ok_or_else(|| Error::Domain("I + K^1/2 G K^1/2 is not positive definite".into()))?;
    let l = chol.l_dirty();
    let ln_det: f64 = (0..l.nrows()).map(|i| 2.0 * l[(i, i)].re.ln()).sum();
    Ok(ln_det / std::f64::consts::LN_2)
}
