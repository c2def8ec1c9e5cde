//! Gaussian-approximation density evolution for regular LDPC ensembles.
//!
//! Messages are modelled as consistent Gaussians (variance twice the mean),
//! so each ensemble is tracked by a single number: the mean `xi` of the
//! check-to-bit messages. One iteration maps
//! `xi -> psi_inv(psi(m0 + (w_c - 1) xi)^(w_r - 1))`, where `m0` is the mean
//! channel LLR and `psi(x) = E[tanh(Y/2)]` for `Y ~ N(x, 2x)`.

use crate::error::{Error, Result};
use crate::ldpc::modem::qpsk_ec_over_sigma2;

/// Default divergence level: decoding succeeds once `xi` exceeds it.
pub const DEFAULT_DIVERGENCE: f64 = 1.0;
/// Default number of density-evolution iterations.
pub const DEFAULT_DE_ITERATIONS: usize = 1000;

// Gauss–Kronrod 7/15 nodes and weights on [-1, 1].
const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const K15_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const G7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = K15_WEIGHTS[7] * fc;
    let mut gauss = G7_WEIGHTS[3] * fc;
    for i in 0..7 {
        let x = h * GK_NODES[i];
        let s = f(c - x) + f(c + x);
        kronrod += K15_WEIGHTS[i] * s;
        if i % 2 == 1 {
            gauss += G7_WEIGHTS[i / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptive Gauss–Kronrod quadrature to absolute tolerance `tol`.
pub fn integrate_adaptive(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (v, err) = gk15(f, a, b);
        if err <= tol || depth == 0 {
            return v;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, 0.5 * tol, depth - 1) + rec(f, m, b, 0.5 * tol, depth - 1)
    }
    rec(&f, a, b, tol, 40)
}

/// Standard-normal tail beyond which the integrand is negligible.
const Z_SPAN: f64 = 14.0;

/// `psi(x) = 1/sqrt(4 pi x) int tanh(y/2) exp(-(y-x)^2 / (4x)) dy`, evaluated
/// after the substitution `y = x + sqrt(2x) z`.
pub fn psi(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("psi is defined for x >= 0, got {x}")));
    }
    Ok(psi_unchecked(x))
}

fn psi_unchecked(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let s = (2.0 * x).sqrt();
    let norm = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
    let f = |z: f64| (0.5 * (x + s * z)).tanh() * (-0.5 * z * z).exp() * norm;
    integrate_adaptive(f, -Z_SPAN, Z_SPAN, 1e-13).min(1.0)
}

/// Inverse of [`psi`] on `[0, 1)` by bracketing and bisection.
pub fn psi_inv(y: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&y) {
        return Err(Error::Domain(format!("psi_inv is defined on [0, 1), got {y}")));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while psi_unchecked(hi) < y {
        lo = hi;
        hi *= 2.0;
        if hi > 1e6 {
            return Ok(hi);
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if psi_unchecked(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Regular (or average-degree) ensemble: bit degree `w_c`, check degree `w_r`.
/// A fractional `w_r` stands for the mean check degree of an almost-regular ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ensemble {
    pub w_c: f64,
    pub w_r: f64,
}

impl Ensemble {
    pub fn new(w_c: f64, w_r: f64) -> Result<Self> {
        if !(w_c >= 2.0) || !(w_r > w_c) {
            return Err(Error::Domain(format!("need w_c >= 2 and w_r > w_c, got ({w_c}, {w_r})")));
        }
        Ok(Self { w_c, w_r })
    }

    /// Ensemble with column weight `w_c` and design rate `rate = 1 - w_c / w_r`.
    pub fn from_rate(w_c: usize, rate: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&rate) || rate <= 0.0 {
            return Err(Error::Domain(format!("rate must lie in (0, 1), got {rate}")));
        }
        Self::new(w_c as f64, w_c as f64 / (1.0 - rate))
    }

    pub fn rate(&self) -> f64 {
        1.0 - self.w_c / self.w_r
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityEvolution {
    pub converged: bool,
    /// `xi_0 = 0, xi_1, ...`.
    pub trace: Vec<f64>,
}

/// Runs the mean recursion from `xi_0 = 0` at per-bit `E_c / sigma^2`.
/// Success means `xi` exceeded `divergence` within `max_iter` iterations.
pub fn density_evolution(
    ensemble: Ensemble,
    ec_over_sigma2: f64,
    max_iter: usize,
    divergence: f64,
) -> DensityEvolution {
    let m0 = 2.0 * ec_over_sigma2;
    let mut trace = vec![0.0];
    let mut xi = 0.0f64;
    for _ in 0..max_iter {
        let to_check = psi_unchecked(m0 + (ensemble.w_c - 1.0) * xi);
        let p = to_check.powf(ensemble.w_r - 1.0);
        let next = if p >= 1.0 { f64::INFINITY } else { psi_inv(p).unwrap_or(f64::INFINITY) };
        // psi_inv is only accurate to its bisection tolerance; keep the trace monotone
        let next = next.max(xi);
        trace.push(next);
        if next > divergence {
            return DensityEvolution { converged: true, trace };
        }
        if next - xi <= 1e-13 * xi.max(1e-300) {
            break;
        }
        xi = next;
    }
    DensityEvolution { converged: false, trace }
}

/// Threshold search settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdSearch {
    pub tol_db: f64,
    pub max_iter: usize,
    pub divergence: f64,
    pub lo_db: f64,
    pub hi_db: f64,
}

impl Default for ThresholdSearch {
    fn default() -> Self {
        Self {
            tol_db: 0.01,
            max_iter: DEFAULT_DE_ITERATIONS,
            divergence: DEFAULT_DIVERGENCE,
            lo_db: -20.0,
            hi_db: 20.0,
        }
    }
}

/// Smallest QPSK symbol SNR (linear) at which density evolution succeeds,
/// located by bisection in dB to within `tol_db`. The upper (succeeding)
/// end of the final bracket is returned.
pub fn decoding_threshold(ensemble: Ensemble, search: ThresholdSearch) -> Result<f64> {
    if !(search.tol_db > 0.0) {
        return Err(Error::Domain("tol_db must be positive".into()));
    }
    let ok = |db: f64| {
        let lambda = 10f64.powf(db / 10.0);
        density_evolution(ensemble, qpsk_ec_over_sigma2(lambda), search.max_iter, search.divergence).converged
    };
    let (mut lo, mut hi) = (search.lo_db, search.hi_db);
    if ok(lo) || !ok(hi) {
        return Err(Error::BracketNotFound { lo_db: lo, hi_db: hi });
    }
    while hi - lo > search.tol_db {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(10f64.powf(hi / 10.0))
}
