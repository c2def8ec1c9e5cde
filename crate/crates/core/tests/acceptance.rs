//! Acceptance criteria. Each test prints one PASS/FAIL line.
//!
//! Run with `cargo test -p skagree-core --test acceptance -- --nocapture`.

use num_complex::Complex64;
use skagree_core::channel::{exponential_pdp, sample_channel, DEFAULT_DECAY};
use skagree_core::ldpc::{self, CodedLink, Ensemble, SimParams, ThresholdSearch};
use skagree_core::ofdm::{self, ImpulseResponse, Link, OfdmConfig};
use skagree_core::outage::{self, build_c_matrix, lambda_e_cdf, sk_rate_outage_cdf};
use skagree_core::rates::{self, InputCovariance, SnrPair};
use skagree_core::SeededRng;

fn report(id: &str, what: &str, pass: bool, detail: String) {
    println!("[{}] {id}: {what} ({detail})", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "{id} failed: {detail}");
}

fn random_taps(len: usize, rng: &mut SeededRng, link: Link) -> ImpulseResponse {
    ImpulseResponse::new((0..len).map(|_| rng.complex_normal(1.0 / len as f64)).collect(), link).unwrap()
}

#[test]
fn ac1_diagonalization_identity() {
    let cfg = OfdmConfig::new(64, 8).unwrap();
    let t = ofdm::modulator_matrix(&cfg);
    let mut rng = SeededRng::new(101);
    let (mut worst_off, mut worst_diag) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let len = 1 + rng.below(8);
        let g = random_taps(len, &mut rng, Link::Legitimate);
        let r = ofdm::demodulator_matrix(&cfg, len).unwrap();
        let g_mat = ofdm::toeplitz_conv_matrix(&g, cfg.symbol_len()).unwrap().into_inner();
        let prod = r * g_mat * &t;
        let fft = g.frequency_response(64);
        for i in 0..64 {
            for j in 0..64 {
                if i == j {
                    worst_diag = worst_diag.max((prod[(i, i)] - fft[i]).norm());
                } else {
                    worst_off = worst_off.max(prod[(i, j)].norm());
                }
            }
        }
    }
    report(
        "AC1",
        "R G_R T diagonal with FFT gains, 100 channels, M=64, mu=8",
        worst_off < 1e-10 && worst_diag < 1e-10,
        format!("max off-diagonal {worst_off:.2e}, max diagonal error {worst_diag:.2e}, tol 1e-10"),
    );
}

#[test]
fn ac2_rank_one_consistency() {
    let cfg = OfdmConfig::new(64, 8).unwrap();
    let mut rng = SeededRng::new(202);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let g_r = random_taps(1 + rng.below(8), &mut rng, Link::Legitimate);
        let g_e = random_taps(1 + rng.below(12), &mut rng, Link::Eavesdropper);
        let eff = ofdm::effective_channels(&cfg, &g_r, &g_e).unwrap();
        let m = rates::best_subcarrier(&eff.h_r).unwrap();
        for power in [1e-3, 1.0] {
            let k = InputCovariance::single_subcarrier(&cfg, m, power).to_matrix(64);
            let mimo = rates::mimo_secret_key_rate(&eff.h_r, &eff.h_e, &k).unwrap();
            let scalar = rates::secret_key_rate(rates::snr_pair(&cfg, &g_r, &g_e, power, m).unwrap());
            worst = worst.max((mimo - scalar).abs());
        }
    }
    report(
        "AC2",
        "log-det rate with rank-one input equals scalar key rate, 100 draws, P in {1e-3, 1}",
        worst < 1e-10,
        format!("max |difference| {worst:.2e}, tol 1e-10"),
    );
}

#[test]
fn ac3_density_evolution_thresholds() {
    let mut all = true;
    let mut parts = Vec::new();
    for (w_c, rate) in [(3, 0.25), (4, 0.15), (5, 0.03)] {
        let th = ldpc::decoding_threshold(Ensemble::from_rate(w_c, rate).unwrap(), ThresholdSearch::default()).unwrap();
        let db = 10.0 * th.log10();
        all &= (db + 2.0).abs() <= 0.3;
        parts.push(format!("w_c={w_c}/rate {rate}: {db:.3} dB"));
    }
    report("AC3", "GA density-evolution thresholds within -2 +/- 0.3 dB", all, parts.join(", "));
}

#[test]
fn ac4_fer_anchors_desk_scale() {
    let h = ldpc::peg_construct(5000, 0.25, 3, &mut SeededRng::new(1)).unwrap();
    let peg = ldpc::peg_report(&h, 3);
    let link = CodedLink::new(h, 7);
    let secure = ldpc::fer_ber_sim(
        &link,
        -2.2,
        SimParams { max_frames: 300, target_frame_errors: usize::MAX, max_iter: 100 },
        11,
    )
    .unwrap();
    let reliable = ldpc::fer_ber_sim(
        &link,
        -1.2,
        SimParams { max_frames: 1000, target_frame_errors: usize::MAX, max_iter: 100 },
        12,
    )
    .unwrap();
    let structure = peg.m == 3750 && peg.girth.is_some_and(|g| g >= 6);
    report(
        "AC4",
        "PEG n=5000 rate 0.25 w_c=3: FER >= 0.85 at -2.2 dB, FER <= 1e-2 at -1.2 dB",
        structure && secure.fer >= 0.85 && reliable.fer <= 1e-2,
        format!(
            "girth {:?}, row weights {}..{}, FER(-2.2) = {:.3} over {} frames, FER(-1.2) = {:.4} over {} frames",
            peg.girth, peg.min_row_weight, peg.max_row_weight, secure.fer, secure.frames, reliable.fer, reliable.frames
        ),
    );
}

/// Samples of `P/(1+rho) ||G_E T e_m||^2` computed with the dense matrices.
fn dense_lambda_e_samples(cfg: &OfdmConfig, pdp: &skagree_core::channel::PdpProfile, power: f64, m: usize, n: usize, seed: u64) -> Vec<f64> {
    let t = ofdm::modulator_matrix(cfg);
    let col = t.column(m).into_owned();
    let scale = power / (1.0 + cfg.rho());
    let mut rng = SeededRng::new(seed);
    let mut out: Vec<f64> = (0..n)
        .map(|_| {
            let g = sample_channel(pdp, Link::Eavesdropper, &mut rng);
            let conv = ofdm::toeplitz_conv_matrix(&g, cfg.symbol_len()).unwrap().into_inner();
            let y = conv * &col;
            scale * y.iter().map(Complex64::norm_sqr).sum::<f64>()
        })
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

#[test]
fn ac5_outage_pipeline() {
    let mut all = true;
    let mut parts = Vec::new();
    for m in [64usize, 256] {
        let mu = m / 16;
        let cfg = OfdmConfig::new(m, mu).unwrap();
        let pdp = exponential_pdp(mu, -10.0, DEFAULT_DECAY).unwrap();
        let power = 5.0;
        let spec = build_c_matrix(&cfg, &pdp, power).unwrap().spectrum();
        let samples = dense_lambda_e_samples(&cfg, &pdp, power, m / 3, 100_000, 500 + m as u64);
        let d = outage::ks_distance(&samples, |x| lambda_e_cdf(x, &spec));
        all &= d < 0.01;
        parts.push(format!("M={m}: sup|F - F_mc| = {d:.4} ({:?})", spec.cdf_method()));
    }
    report("AC5", "analytic eavesdropper-SNR CDF vs dense matrix Monte Carlo, 1e5 draws, tol 0.01", all, parts.join(", "));
}

fn fig3_rate(decay: f64) -> f64 {
    let cfg = OfdmConfig::new(256, 16).unwrap();
    let pdp = exponential_pdp(16, -10.0, decay).unwrap();
    let cdf = sk_rate_outage_cdf(&cfg, &pdp, &pdp, -1.0, 100_000, 606).unwrap();
    cdf.sk_rate_at_outage(1e-3)
}

#[test]
fn ac6_fig3_anchor() {
    let r = fig3_rate(DEFAULT_DECAY);
    report(
        "AC6a",
        "M=256, mu=16, L=16, Gamma=-10 dB, Lambda_R=-1 dB: key rate at 1e-3 outage = 0.28 +/- 0.05",
        (r - 0.28).abs() <= 0.05,
        format!("decay {DEFAULT_DECAY}: {r:.4} bit/use"),
    );
}

#[test]
fn ac6_decay_stability() {
    let rates: Vec<f64> = [0.3, 0.5, 0.7].iter().map(|&d| fig3_rate(d)).collect();
    let mid = 0.5 * (rates.iter().cloned().fold(f64::INFINITY, f64::min) + rates.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
    let stable = rates.iter().all(|r| (r - mid).abs() <= 0.03);
    report(
        "AC6b",
        "key rate at 1e-3 outage stable within +/-0.03 across decay {0.3, 0.5, 0.7}",
        stable,
        format!("rates {:.4} / {:.4} / {:.4}", rates[0], rates[1], rates[2]),
    );
}

#[test]
fn ac7_property_suites() {
    // psi monotone on [0, 50] with inverse round trip
    let mut psi_ok = true;
    let mut prev = -1.0;
    for i in 0..=500 {
        let x = i as f64 * 0.1;
        let v = ldpc::psi(x).unwrap();
        psi_ok &= v > prev;
        prev = v;
        if x > 0.0 && x <= 30.0 {
            psi_ok &= (ldpc::psi_inv(v).unwrap() - x).abs() < 1e-6;
        }
    }

    // decoder never reports convergence on a non-codeword
    let h = ldpc::peg_construct(96, 0.25, 3, &mut SeededRng::new(3)).unwrap();
    let enc = ldpc::Encoder::new(&h);
    let dec = ldpc::SumProductDecoder::new(&h);
    let mut rng = SeededRng::new(4);
    let (mut bad, mut converged) = (0usize, 0usize);
    for i in 0..10_000 {
        let msg: Vec<u8> = (0..enc.k()).map(|_| rng.bit()).collect();
        let word = enc.encode(&msg);
        let snr_db = -6.0 + 8.0 * (i % 8) as f64 / 7.0;
        let llrs = ldpc::awgn_qpsk_llrs(&word, 10f64.powf(snr_db / 10.0), &mut rng);
        let r = dec.decode(&llrs, 50);
        if r.converged {
            converged += 1;
            bad += (!h.is_codeword(&r.bits)) as usize;
        }
    }

    // scrambler avalanche
    let scr = ldpc::Scrambler::new(1250, 99);
    let mut flipped = 0usize;
    for _ in 0..1000 {
        let bits: Vec<u8> = (0..1250).map(|_| rng.bit()).collect();
        let mut rx = scr.scramble(&bits);
        rx[rng.below(1250)] ^= 1;
        flipped += scr.descramble(&rx).iter().zip(&bits).filter(|(a, b)| a != b).count();
    }
    let avalanche = flipped as f64 / (1000.0 * 1250.0);

    // FER non-increasing in SNR within confidence intervals
    let h = ldpc::peg_construct(480, 0.25, 3, &mut SeededRng::new(5)).unwrap();
    let link = CodedLink::new(h, 6);
    let grid = [-4.0, -3.0, -2.0, -1.0, 0.0];
    let points: Vec<_> = grid
        .iter()
        .map(|&db| ldpc::fer_ber_sim(&link, db, SimParams { max_frames: 400, target_frame_errors: usize::MAX, max_iter: 50 }, 7).unwrap())
        .collect();
    let fer_monotone = points.windows(2).all(|w| w[1].ci_low <= w[0].ci_high);

    // key rate dominates secrecy rate pointwise
    let mut dominated = true;
    for _ in 0..1_000_000 {
        let s = SnrPair::new(rng.uniform() * 10.0, rng.uniform() * 10.0).unwrap();
        dominated &= rates::secret_key_rate(s) >= rates::secrecy_rate(s);
    }

    let pass = psi_ok && bad == 0 && (avalanche - 0.5).abs() <= 0.05 && fer_monotone && dominated;
    report(
        "AC7",
        "property suites",
        pass,
        format!(
            "psi ok {psi_ok}; {bad} non-codewords among {converged} converged of 10^4 frames; avalanche BER {avalanche:.4}; \
             FER {:?} monotone {fer_monotone}; SK >= secrecy on 10^6 pairs {dominated}",
            points.iter().map(|p| (p.fer * 1000.0).round() / 1000.0).collect::<Vec<_>>()
        ),
    );
}
