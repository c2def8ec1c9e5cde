//! Distribution of the eavesdropper SNR and secrecy-outage analysis.
//!
//! For the single-subcarrier input, `Lambda_E = P/(1+rho) ||G_E T e_m||^2`.
//! With independent Rayleigh taps the per-tap phase rotation introduced by
//! subcarrier `m` does not change the joint distribution, so `Lambda_E` has
//! the law of the quadratic form `gamma* C gamma`, `gamma ~ CN(0, I)`, and is
//! a sum of independent exponentials whose means are the eigenvalues of `C`.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::channel::{db_to_linear, sample_channel, PdpProfile};
use crate::error::{Error, Result};
use crate::ofdm::{Link, OfdmConfig};
use crate::rates::{self, SnrPair};
use crate::rng::SeededRng;

/// Eigenvalues below this fraction of the largest one are dropped.
pub const EIGEN_CUTOFF: f64 = 1e-12;
/// Relative eigenvalue gap below which the closed form is not used.
pub const DEGENERACY_GAP: f64 = 1e-6;
/// Largest tolerated sum of |closed-form coefficients|; beyond it the
/// alternating sum loses more than ~1e-10 to cancellation.
const MAX_COEFFICIENT_MASS: f64 = 1e5;

/// Real symmetric PSD matrix `C` of the quadratic form `gamma* C gamma`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticFormMatrix {
    c: DMatrix<f64>,
    /// `P / (1 + rho)` folded into `c`.
    pub scale: f64,
}

impl QuadraticFormMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.c
    }

    pub fn dim(&self) -> usize {
        self.c.nrows()
    }

    /// `gamma* C gamma` for one draw of `gamma ~ CN(0, I)`.
    pub fn sample(&self, rng: &mut SeededRng) -> f64 {
        let g: Vec<_> = (0..self.dim()).map(|_| rng.complex_normal(1.0)).collect();
        let mut acc = 0.0;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                acc += self.c[(i, j)] * (g[i].conj() * g[j]).re;
            }
        }
        acc
    }

    pub fn spectrum(&self) -> EigenSpectrum {
        EigenSpectrum::from_symmetric(&self.c)
    }
}

/// `C = P/(1+rho) D^1/2 C0 D^1/2`, with `D` the tap powers and
/// `C0[i][j] = ((L-1-max(i,j)) + (N-L+1) + min(i,j)) / M`: the three groups
/// count the leading partial sums, the `N-L+1` full-overlap samples and the
/// trailing partial sums of the convolution that contain both taps.
pub fn build_c_matrix(cfg: &OfdmConfig, pdp: &PdpProfile, power: f64) -> Result<QuadraticFormMatrix> {
    let l = pdp.len();
    let n = cfg.symbol_len();
    if l > n {
        return Err(Error::DimensionMismatch(format!("{l} taps exceed symbol length {n}")));
    }
    if !(power >= 0.0) {
        return Err(Error::Domain(format!("power must be non-negative, got {power}")));
    }
    let scale = power / (1.0 + cfg.rho());
    let m = cfg.subcarriers() as f64;
    let sd: Vec<f64> = pdp.powers().iter().map(|p| p.sqrt()).collect();
    let c = DMatrix::from_fn(l, l, |i, j| {
        let count = (l - 1 - i.max(j)) + (n - l + 1) + i.min(j);
        scale * sd[i] * sd[j] * count as f64 / m
    });
    Ok(QuadraticFormMatrix { c, scale })
}

/// Retained eigenvalues of `C`, sorted in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSpectrum {
    eigenvalues: Vec<f64>,
    trace: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdfMethod {
    /// Sum over distinct eigenvalues.
    ClosedForm,
    /// Matrix exponential of the phase-type generator.
    PhaseType,
}

impl EigenSpectrum {
    pub fn from_symmetric(c: &DMatrix<f64>) -> Self {
        let sym = (c + c.transpose()) * 0.5;
        let trace = sym.trace();
        let eig = sym.symmetric_eigen();
        Self::from_values(eig.eigenvalues.iter().copied().collect(), trace)
    }

    /// Spectrum from explicit means; `trace` is their sum.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
            return Err(Error::Domain("eigenvalues must be finite and non-negative".into()));
        }
        let trace = values.iter().sum();
        Ok(Self::from_values(values, trace))
    }

    fn from_values(mut values: Vec<f64>, trace: f64) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        let max = values.first().copied().unwrap_or(0.0).max(0.0);
        values.retain(|&v| v > EIGEN_CUTOFF * max && v > 0.0);
        Self { eigenvalues: values, trace }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Trace of the original matrix.
    pub fn trace(&self) -> f64 {
        self.trace
    }

    pub fn mean(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    /// Coefficients `lambda_i^(L-1) / prod_{j != i} (lambda_i - lambda_j)`.
    fn closed_form_coefficients(&self) -> Vec<f64> {
        let ev = &self.eigenvalues;
        ev.iter()
            .enumerate()
            .map(|(i, &li)| {
                ev.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &lj)| li / (li - lj))
                    .product()
            })
            .collect()
    }

    /// Which evaluation route [`lambda_e_cdf`] takes for this spectrum.
    pub fn cdf_method(&self) -> CdfMethod {
        let ev = &self.eigenvalues;
        if ev.len() <= 1 {
            return CdfMethod::ClosedForm;
        }
        let max = ev[0];
        let min_gap = ev.windows(2).map(|w| w[0] - w[1]).fold(f64::INFINITY, f64::min);
        if min_gap < DEGENERACY_GAP * max {
            return CdfMethod::PhaseType;
        }
        let mass: f64 = self.closed_form_coefficients().iter().map(|a| a.abs()).sum();
        if mass > MAX_COEFFICIENT_MASS {
            CdfMethod::PhaseType
        } else {
            CdfMethod::ClosedForm
        }
    }
}

/// `P{Lambda_E <= theta}` for `Lambda_E = sum_i lambda_i Exp(1)`.
pub fn lambda_e_cdf(theta: f64, spec: &EigenSpectrum) -> f64 {
    if !(theta > 0.0) {
        return 0.0;
    }
    if spec.eigenvalues.is_empty() {
        return 1.0;
    }
    let value = match spec.cdf_method() {
        CdfMethod::ClosedForm => spec
            .closed_form_coefficients()
            .iter()
            .zip(&spec.eigenvalues)
            .map(|(a, &l)| a * -(-theta / l).exp_m1())
            .sum::<f64>(),
        CdfMethod::PhaseType => phase_type_cdf(theta, &spec.eigenvalues),
    };
    value.clamp(0.0, 1.0)
}

/// Exponential stages in series: `1 - alpha exp(S theta) 1` with `alpha = e_1`.
fn phase_type_cdf(theta: f64, means: &[f64]) -> f64 {
    let k = means.len();
    let mut s = DMatrix::<f64>::zeros(k, k);
    for (i, &l) in means.iter().enumerate() {
        s[(i, i)] = -theta / l;
        if i + 1 < k {
            s[(i, i + 1)] = theta / l;
        }
    }
    let e = s.exp();
    let survival: f64 = e.row(0).iter().sum();
    1.0 - survival
}

/// `P{Lambda_E >= lambda_th - epsilon}`.
pub fn secrecy_outage_probability(lambda_th: f64, epsilon: f64, spec: &EigenSpectrum) -> Result<f64> {
    if !(epsilon >= 0.0) || !(lambda_th >= epsilon) {
        return Err(Error::Domain(format!(
            "need lambda_th >= epsilon >= 0, got lambda_th = {lambda_th}, epsilon = {epsilon}"
        )));
    }
    Ok(1.0 - lambda_e_cdf(lambda_th - epsilon, spec))
}

/// Sorted Monte Carlo samples of the secret-key and secrecy rates.
#[derive(Debug, Clone, PartialEq)]
pub struct RateCdf {
    pub secret_key: Vec<f64>,
    pub secrecy: Vec<f64>,
}

/// Lower empirical quantile: the largest `R` with `#{r < R} / n <= p`.
pub fn rate_at_outage(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "no samples");
    let k = (p.clamp(0.0, 1.0) * sorted.len() as f64).floor() as usize;
    sorted[k.min(sorted.len() - 1)]
}

/// Points `(value, i/n)` of the empirical CDF.
pub fn empirical_cdf(sorted: &[f64]) -> Vec<(f64, f64)> {
    let n = sorted.len() as f64;
    sorted.iter().enumerate().map(|(i, &v)| (v, (i + 1) as f64 / n)).collect()
}

impl RateCdf {
    pub fn samples(&self) -> usize {
        self.secret_key.len()
    }

    pub fn sk_rate_at_outage(&self, p: f64) -> f64 {
        rate_at_outage(&self.secret_key, p)
    }

    pub fn secrecy_rate_at_outage(&self, p: f64) -> f64 {
        rate_at_outage(&self.secrecy, p)
    }

    /// Fraction of draws with zero secrecy rate.
    pub fn secrecy_zero_fraction(&self) -> f64 {
        self.secrecy.iter().filter(|&&r| r == 0.0).count() as f64 / self.secrecy.len() as f64
    }
}

/// One channel draw with the power set for the target legitimate SNR.
pub fn draw_snr_pair(
    cfg: &OfdmConfig,
    pdp_r: &PdpProfile,
    pdp_e: &PdpProfile,
    target_lambda_r: f64,
    rng: &mut SeededRng,
) -> Result<SnrPair> {
    let g_r = sample_channel(pdp_r, Link::Legitimate, rng);
    let g_e = sample_channel(pdp_e, Link::Eavesdropper, rng);
    let m = rates::best_subcarrier(&g_r.frequency_response(cfg.subcarriers()))?;
    let power = rates::power_for_target_snr(cfg, &g_r, target_lambda_r)?;
    rates::snr_pair(cfg, &g_r, &g_e, power, m)
}

/// Monte Carlo CDFs of both rates; sample `i` uses stream `i` of `seed`.
pub fn sk_rate_outage_cdf(
    cfg: &OfdmConfig,
    pdp_r: &PdpProfile,
    pdp_e: &PdpProfile,
    target_lambda_r_db: f64,
    samples: usize,
    seed: u64,
) -> Result<RateCdf> {
    if samples == 0 {
        return Err(Error::Domain("need at least one sample".into()));
    }
    let target = db_to_linear(target_lambda_r_db);
    let root = SeededRng::new(seed);
    let pairs = (0..samples)
        .into_par_iter()
        .map(|i| draw_snr_pair(cfg, pdp_r, pdp_e, target, &mut root.fork(i as u64)))
        .collect::<Result<Vec<_>>>()?;
    let mut secret_key: Vec<f64> = pairs.iter().map(|&s| rates::secret_key_rate(s)).collect();
    let mut secrecy: Vec<f64> = pairs.iter().map(|&s| rates::secrecy_rate(s)).collect();
    secret_key.sort_by(f64::total_cmp);
    secrecy.sort_by(f64::total_cmp);
    Ok(RateCdf { secret_key, secrecy })
}

/// Kolmogorov–Smirnov distance between sorted samples and a CDF.
pub fn ks_distance(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Two-sample Kolmogorov–Smirnov statistic of sorted samples.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// 1% critical value of the two-sample KS test (asymptotic).
pub fn ks_critical_1pct(n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    1.628 * ((n + m) / (n * m)).sqrt()
}
