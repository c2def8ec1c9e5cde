//! Matrix model of an OFDM link with cyclic prefix.
//!
//! A block of `M` frequency-domain symbols `u` is mapped to `N = M + mu` time
//! samples by `T = A F*`, where `F` is the unitary `M`-point DFT and `A`
//! prepends the last `mu` samples as a cyclic prefix. Each link convolves the
//! samples with its impulse response (an `(N+L-1) x N` Toeplitz matrix). The
//! legitimate receiver drops the prefix and the convolution tail and applies
//! `F`, which turns its link into the diagonal of channel gains. The
//! eavesdropper keeps every sample, so its effective channel is the full
//! `G_E T` matrix.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OfdmConfig {
    m: usize,
    mu: usize,
}

impl OfdmConfig {
    pub fn new(m: usize, mu: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidConfig(format!("need at least 2 subcarriers, got M={m}")));
        }
        if mu < 1 {
            return Err(Error::InvalidConfig("cyclic prefix length must be at least 1".into()));
        }
        Ok(Self { m, mu })
    }

    /// Number of subcarriers.
    pub fn subcarriers(&self) -> usize {
        self.m
    }

    /// Cyclic prefix length in samples.
    pub fn prefix(&self) -> usize {
        self.mu
    }

    /// Samples per OFDM symbol, `M + mu`.
    pub fn symbol_len(&self) -> usize {
        self.m + self.mu
    }

    /// Prefix overhead `mu / M`.
    pub fn rho(&self) -> f64 {
        self.mu as f64 / self.m as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Link {
    Legitimate,
    Eavesdropper,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImpulseResponse {
    taps: Vec<Complex64>,
    link: Link,
}

impl ImpulseResponse {
    pub fn new(taps: Vec<Complex64>, link: Link) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::EmptyTaps);
        }
        Ok(Self { taps, link })
    }

    pub fn legitimate(taps: Vec<Complex64>) -> Result<Self> {
        Self::new(taps, Link::Legitimate)
    }

    pub fn eavesdropper(taps: Vec<Complex64>) -> Result<Self> {
        Self::new(taps, Link::Eavesdropper)
    }

    /// Real-valued taps, mostly for tests and examples.
    pub fn from_real(taps: &[f64], link: Link) -> Result<Self> {
        Self::new(taps.iter().map(|&t| Complex64::new(t, 0.0)).collect(), link)
    }

    pub fn taps(&self) -> &[Complex64] {
        &self.taps
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    pub fn link(&self) -> Link {
        self.link
    }

    /// Total power `sum |g(i)|^2`.
    pub fn energy(&self) -> f64 {
        self.taps.iter().map(|t| t.norm_sqr()).sum()
    }

    /// Unnormalized `M`-point DFT of the taps, `G(f_i) = sum_l g(l) e^{-j 2 pi i l / M}`.
    ///
    /// Taps beyond index `M - 1` wrap around, as in a length-`M` FFT of the
    /// zero-padded (or time-aliased) response.
    pub fn frequency_response(&self, m: usize) -> Vec<Complex64> {
        (0..m)
            .map(|i| {
                self.taps
                    .iter()
                    .enumerate()
                    .map(|(l, &g)| g * twiddle(i * l, m))
                    .sum()
            })
            .collect()
    }
}

/// `e^{-j 2 pi k / m}` with the exponent reduced modulo `m` first.
fn twiddle(k: usize, m: usize) -> Complex64 {
    let k = k % m;
    Complex64::from_polar(1.0, -std::f64::consts::TAU * k as f64 / m as f64)
}

/// Sample `k` of a transmitted symbol carries IDFT time index `(k - mu) mod M`.
fn symbol_time(k: usize, cfg: &OfdmConfig) -> usize {
    (k as isize - cfg.prefix() as isize).rem_euclid(cfg.subcarriers() as isize) as usize
}

/// Full-convolution Toeplitz matrix of size `(N+L-1) x N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvolutionMatrix(CMatrix);

impl ConvolutionMatrix {
    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_inner(self) -> CMatrix {
        self.0
    }
}

pub fn toeplitz_conv_matrix(g: &ImpulseResponse, n: usize) -> Result<ConvolutionMatrix> {
    if n == 0 {
        return Err(Error::Domain("convolution input length must be at least 1".into()));
    }
    let l = g.len();
    let mut mat = CMatrix::zeros(n + l - 1, n);
    for col in 0..n {
        for (i, &tap) in g.taps().iter().enumerate() {
            mat[(col + i, col)] = tap;
        }
    }
    Ok(ConvolutionMatrix(mat))
}

/// Unitary DFT matrix, `F[k, n] = e^{-j 2 pi k n / M} / sqrt(M)`.
pub fn dft_matrix(m: usize) -> CMatrix {
    let scale = 1.0 / (m as f64).sqrt();
    CMatrix::from_fn(m, m, |k, n| twiddle(k * n, m) * scale)
}

/// OFDM modulator `T = A F*` (`N x M`).
pub fn modulator_matrix(cfg: &OfdmConfig) -> CMatrix {
    let (m, mu) = (cfg.subcarriers(), cfg.prefix());
    let f_inv = dft_matrix(m).adjoint();
    // Rows 0..mu repeat the last mu rows of F* (the cyclic prefix).
    CMatrix::from_fn(m + mu, m, |r, c| f_inv[(symbol_time(r, cfg), c)])
}

/// OFDM demodulator `R = F B` (`M x (N + L_R - 1)`).
pub fn demodulator_matrix(cfg: &OfdmConfig, l_r: usize) -> Result<CMatrix> {
    if l_r == 0 {
        return Err(Error::EmptyTaps);
    }
    if l_r > cfg.prefix() {
        return Err(Error::ChannelTooLong { len: l_r, mu: cfg.prefix() });
    }
    Ok(demodulator_matrix_unchecked(cfg, l_r))
}

/// Demodulator without the `L_R <= mu` check, for studying inter-carrier
/// leakage when the prefix is too short.
pub fn demodulator_matrix_unchecked(cfg: &OfdmConfig, l_r: usize) -> CMatrix {
    let (m, mu) = (cfg.subcarriers(), cfg.prefix());
    let cols = m + mu + l_r.max(1) - 1;
    let mut b = CMatrix::zeros(m, cols);
    for i in 0..m {
        b[(i, mu + i)] = Complex64::new(1.0, 0.0);
    }
    dft_matrix(m) * b
}

/// Effective channels seen by the two receivers for frequency-domain input.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveChannels {
    /// Legitimate per-subcarrier gains `G_R(f_i)`.
    pub h_r: Vec<Complex64>,
    /// Eavesdropper channel `G_E T`, `(N + L_E - 1) x M`.
    pub h_e: CMatrix,
}

impl EffectiveChannels {
    pub fn h_r_matrix(&self) -> CMatrix {
        CMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.h_r.clone()))
    }

    /// `||H_E e_m||^2`.
    pub fn eavesdropper_column_energy(&self, m: usize) -> f64 {
        self.h_e.column(m).iter().map(|z| z.norm_sqr()).sum()
    }
}

pub fn effective_channels(
    cfg: &OfdmConfig,
    g_r: &ImpulseResponse,
    g_e: &ImpulseResponse,
) -> Result<EffectiveChannels> {
    if g_r.len() > cfg.prefix() {
        return Err(Error::ChannelTooLong { len: g_r.len(), mu: cfg.prefix() });
    }
    let t = modulator_matrix(cfg);
    let g_e_mat = toeplitz_conv_matrix(g_e, cfg.symbol_len())?.into_inner();
    Ok(EffectiveChannels {
        h_r: g_r.frequency_response(cfg.subcarriers()),
        h_e: g_e_mat * t,
    })
}

/// Time-domain samples of column `m` of `T`, i.e. the cyclically extended
/// complex exponential of subcarrier `m`.
pub fn modulator_column(cfg: &OfdmConfig, m: usize) -> Vec<Complex64> {
    let nsc = cfg.subcarriers();
    let scale = 1.0 / (nsc as f64).sqrt();
    (0..cfg.symbol_len())
        .map(|k| {
            twiddle(symbol_time(k, cfg) * m, nsc).conj() * scale
        })
        .collect()
}

/// `||G_E T e_m||^2` by direct convolution, without forming any matrix.
pub fn eavesdropper_column_energy(cfg: &OfdmConfig, g_e: &ImpulseResponse, m: usize) -> f64 {
    let x = modulator_column(cfg, m);
    let taps = g_e.taps();
    let out_len = x.len() + taps.len() - 1;
    (0..out_len)
        .map(|k| {
            let lo = k.saturating_sub(x.len() - 1);
            let hi = k.min(taps.len() - 1);
            let s: Complex64 = (lo..=hi).map(|i| taps[i] * x[k - i]).sum();
            s.norm_sqr()
        })
        .sum()
}
