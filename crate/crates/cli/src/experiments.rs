use rayon::prelude::*;
use serde_json::{json, Value};
use skagree_core::channel::{db_to_linear, exponential_pdp, sample_channel, PdpProfile, DEFAULT_DECAY};
use skagree_core::ldpc::{self, alist, CodedLink, Ensemble, ParityCheckMatrix, SimParams, ThresholdSearch};
use skagree_core::ofdm::{self, ImpulseResponse, Link, OfdmConfig};
use skagree_core::outage::{self, build_c_matrix, lambda_e_cdf, sk_rate_outage_cdf, CdfMethod, EigenSpectrum};
use skagree_core::rates::{self, InputCovariance};
use skagree_core::{Error, SeededRng};

use crate::config::{Kind, Params};
use crate::{Artifacts, CliError};

const FER_HEADER: [&str; 7] = ["snr_db", "frames", "frame_errors", "bit_errors", "fer", "ber", "ci95"];

/// Classifies a library error, attributing input errors to `key`.
fn at(key: &'static str) -> impl Fn(Error) -> CliError {
    move |e| match e {
        Error::BracketNotFound { .. } | Error::GridExhausted(_) | Error::NotPsd(_) | Error::ZeroGain => {
            CliError::Numerical(e.to_string())
        }
        _ => CliError::Config(format!("key `{key}`: {e}")),
    }
}

fn numerical(e: Error) -> CliError {
    CliError::Numerical(e.to_string())
}

pub(crate) fn run(p: &Params, stem: &str) -> Result<Artifacts, CliError> {
    let mut out = Artifacts::default();
    match p.kind() {
        Kind::DiagCheck => diag_check(p, stem, &mut out)?,
        Kind::Threshold => threshold(p, stem, &mut out)?,
        Kind::FerSim => fer_sim(p, stem, &mut out, false)?,
        Kind::SecurityGap => fer_sim(p, stem, &mut out, true)?,
        Kind::SkCdf => sk_cdf(p, stem, &mut out)?,
        Kind::OutageAnalytic => outage_analytic(p, stem, &mut out)?,
    }
    Ok(out)
}

fn ofdm_config(p: &Params) -> Result<OfdmConfig, CliError> {
    let (m, mu) = (p.usize("M")?, p.usize("mu")?);
    OfdmConfig::new(m, mu).map_err(at(if m < 2 { "M" } else { "mu" }))
}

fn decay(p: &Params) -> Result<f64, CliError> {
    let d = p.f64_or("decay", DEFAULT_DECAY)?;
    if d < 0.0 {
        return Err(CliError::Config("key `decay` must be non-negative".into()));
    }
    Ok(d)
}

fn unit_gain_taps(len: usize, link: Link, rng: &mut SeededRng) -> ImpulseResponse {
    let taps = (0..len).map(|_| rng.complex_normal(1.0 / len as f64)).collect();
    ImpulseResponse::new(taps, link).expect("len >= 1")
}

fn diag_check(p: &Params, stem: &str, out: &mut Artifacts) -> Result<(), CliError> {
    let cfg = ofdm_config(p)?;
    let l_r = p.count("L_r")?;
    if l_r > cfg.prefix() {
        return Err(CliError::Config(format!("key `L_r` must not exceed mu = {}", cfg.prefix())));
    }
    let l_e = p.count_or("L_e", cfg.prefix())?;
    let trials = p.count_or("trials", 100)?;
    let powers = p.f64_list_or("power", &[1e-3, 1.0])?;
    if powers.iter().any(|&x| x <= 0.0) {
        return Err(CliError::Config("key `power` must be positive".into()));
    }
    let m = cfg.subcarriers();
    let t = ofdm::modulator_matrix(&cfg);
    let root = SeededRng::new(p.u64("seed")?);
    let rows = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = root.fork(trial as u64);
            let len_r = 1 + rng.below(l_r);
            let len_e = 1 + rng.below(l_e);
            let g_r = unit_gain_taps(len_r, Link::Legitimate, &mut rng);
            let g_e = unit_gain_taps(len_e, Link::Eavesdropper, &mut rng);

            let r = ofdm::demodulator_matrix(&cfg, len_r).map_err(numerical)?;
            let conv = ofdm::toeplitz_conv_matrix(&g_r, cfg.symbol_len()).map_err(numerical)?.into_inner();
            let prod = r * conv * &t;
            let fft = g_r.frequency_response(m);
            let (mut off, mut diag) = (0.0f64, 0.0f64);
            for i in 0..m {
                for j in 0..m {
                    if i == j {
                        diag = diag.max((prod[(i, i)] - fft[i]).norm());
                    } else {
                        off = off.max(prod[(i, j)].norm());
                    }
                }
            }

            let eff = ofdm::effective_channels(&cfg, &g_r, &g_e).map_err(numerical)?;
            let best = rates::best_subcarrier(&eff.h_r).map_err(numerical)?;
            let mut rank_one = 0.0f64;
            for &power in &powers {
                let k = InputCovariance::single_subcarrier(&cfg, best, power).to_matrix(m);
                let mimo = rates::mimo_secret_key_rate(&eff.h_r, &eff.h_e, &k).map_err(numerical)?;
                let pair = rates::snr_pair(&cfg, &g_r, &g_e, power, best).map_err(numerical)?;
                rank_one = rank_one.max((mimo - rates::secret_key_rate(pair)).abs());
            }
            Ok(vec![trial as f64, len_r as f64, len_e as f64, off, diag, rank_one])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let worst = |col: usize| rows.iter().map(|r| r[col]).fold(0.0, f64::max);
    out.meta(
        "results",
        json!({
            "max_offdiagonal": worst(3),
            "max_diagonal_error": worst(4),
            "max_rank_one_error": worst(5),
        }),
    );
    out.push_csv(
        format!("{stem}.csv"),
        &["trial", "L_r", "L_e", "max_offdiagonal", "max_diagonal_error", "rank_one_error"],
        rows,
    );
    Ok(())
}

fn threshold(p: &Params, stem: &str, out: &mut Artifacts) -> Result<(), CliError> {
    let w_c = p.count("w_c")?;
    let ensemble = match (p.has("w_r"), p.has("rate")) {
        (true, true) => return Err(CliError::Config("keys `w_r` and `rate` are mutually exclusive".into())),
        (true, false) => Ensemble::new(w_c as f64, p.f64("w_r")?).map_err(at("w_r"))?,
        (false, true) => Ensemble::from_rate(w_c, p.f64("rate")?).map_err(at("rate"))?,
        (false, false) => return Err(CliError::Config("missing required key `w_r` (or `rate`)".into())),
    };
    let defaults = ThresholdSearch::default();
    let search = ThresholdSearch {
        tol_db: p.f64_or("tol_db", defaults.tol_db)?,
        max_iter: p.count_or("max_iter", defaults.max_iter)?,
        divergence: p.f64_or("divergence", defaults.divergence)?,
        lo_db: p.f64_or("lo_db", defaults.lo_db)?,
        hi_db: p.f64_or("hi_db", defaults.hi_db)?,
    };
    if !(search.tol_db > 0.0) {
        return Err(CliError::Config("key `tol_db` must be positive".into()));
    }
    if !(search.lo_db < search.hi_db) {
        return Err(CliError::Config("key `lo_db` must be below `hi_db`".into()));
    }
    let th = ldpc::decoding_threshold(ensemble, search).map_err(numerical)?;
    let th_db = 10.0 * th.log10();
    out.meta("results", json!({ "threshold_db": th_db, "threshold_linear": th, "rate": ensemble.rate() }));
    out.push_csv(
        format!("{stem}.csv"),
        &["w_c", "w_r", "rate", "threshold_db", "threshold_linear"],
        [vec![ensemble.w_c, ensemble.w_r, ensemble.rate(), th_db, th]],
    );
    Ok(())
}

fn parity_checks(p: &Params, seed: u64) -> Result<(ParityCheckMatrix, usize), CliError> {
    if p.has("alist") {
        for key in ["n", "rate", "w_c", "code_seed"] {
            if p.has(key) {
                return Err(CliError::Config(format!("key `{key}` conflicts with `alist`")));
            }
        }
        let path = p.str("alist")?;
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("key `alist`: cannot read {path}: {e}")))?;
        let h = alist::from_alist(&text).map_err(at("alist"))?;
        let w_c = h.column_weights().into_iter().max().unwrap_or(0);
        return Ok((h, w_c));
    }
    let (n, rate, w_c) = (p.count("n")?, p.f64("rate")?, p.count("w_c")?);
    let mut rng = SeededRng::new(p.u64_or("code_seed", seed)?);
    let h = ldpc::peg_construct(n, rate, w_c, &mut rng).map_err(at("n"))?;
    Ok((h, w_c))
}

fn fer_rows(points: &[ldpc::FerBerEstimate]) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|e| {
            vec![
                e.snr_db,
                e.frames as f64,
                e.frame_errors as f64,
                e.bit_errors as f64,
                e.fer,
                e.ber,
                e.confidence_halfwidth,
            ]
        })
        .collect()
}

fn fer_sim(p: &Params, stem: &str, out: &mut Artifacts, gap: bool) -> Result<(), CliError> {
    let seed = p.u64("seed")?;
    let mut grid = p.f64_list("snr_db")?;
    grid.sort_by(f64::total_cmp);
    let max_frames = p.count("max_frames")?;
    let params = SimParams {
        max_frames,
        target_frame_errors: p.count_or("target_frame_errors", max_frames)?,
        max_iter: p.count_or("max_iter", ldpc::sim::DEFAULT_DECODER_ITERATIONS)?,
    };
    let (h, w_c) = parity_checks(p, seed)?;
    let report = ldpc::peg_report(&h, w_c);
    let alist_text = alist::to_alist(&h);
    let link = CodedLink::new(h, p.u64_or("scrambler_seed", seed)?);
    let enc = link.encoder();
    out.meta(
        "code",
        json!({
            "n": report.n,
            "checks": report.m,
            "k": enc.k(),
            "rank": enc.rank(),
            "rate": enc.rate(),
            "column_weight": report.w_c,
            "irregular_columns": report.irregular_columns,
            "row_weight_min": report.min_row_weight,
            "row_weight_max": report.max_row_weight,
            "girth": report.girth,
        }),
    );

    let points = if gap {
        let fer_reliable = p.f64_or("fer_reliable", 1e-4)?;
        let fer_secure = p.f64_or("fer_secure", 0.9)?;
        for (key, v) in [("fer_reliable", fer_reliable), ("fer_secure", fer_secure)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(CliError::Config(format!("key `{key}` must lie in [0, 1]")));
            }
        }
        if fer_secure <= fer_reliable {
            return Err(CliError::Config("key `fer_secure` must exceed `fer_reliable`".into()));
        }
        let sg = ldpc::security_gap(&link, fer_reliable, fer_secure, &grid, params, seed).map_err(numerical)?;
        out.meta(
            "results",
            json!({ "lambda_e_db": sg.lambda_e_db, "lambda_r_db": sg.lambda_r_db, "gap_db": sg.gap_db }),
        );
        out.push_csv(
            format!("{stem}.gap.csv"),
            &["lambda_e_db", "lambda_r_db", "gap_db"],
            [vec![sg.lambda_e_db, sg.lambda_r_db, sg.gap_db]],
        );
        sg.points
    } else {
        grid.iter()
            .enumerate()
            .map(|(i, &db)| ldpc::fer_ber_sim(&link, db, params, seed.wrapping_add(i as u64)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(numerical)?
    };
    out.push_csv(format!("{stem}.csv"), &FER_HEADER, fer_rows(&points));
    out.push(format!("{stem}.alist"), alist_text.into_bytes());
    Ok(())
}

/// File-name suffix for one value of a swept key.
fn sweep_suffix(values: &[f64], v: f64) -> String {
    if values.len() == 1 { String::new() } else { format!("_ge{v}dB") }
}

fn pdp(p: &Params, len_key: &'static str, gain_db: f64, decay: f64) -> Result<PdpProfile, CliError> {
    exponential_pdp(p.count(len_key)?, gain_db, decay).map_err(at(len_key))
}

fn sk_cdf(p: &Params, stem: &str, out: &mut Artifacts) -> Result<(), CliError> {
    let cfg = ofdm_config(p)?;
    let decay = decay(p)?;
    let pdp_r = pdp(p, "L_r", p.f64("gamma_r_db")?, decay)?;
    if pdp_r.len() > cfg.prefix() {
        return Err(CliError::Config(format!("key `L_r` must not exceed mu = {}", cfg.prefix())));
    }
    let gammas = p.f64_list("gamma_e_db")?;
    let target_db = p.f64("target_lambda_r_db")?;
    let samples = p.count("samples")?;
    let outages = p.f64_list_or("outage", &[1e-3])?;
    if outages.iter().any(|q| !(0.0..=1.0).contains(q)) {
        return Err(CliError::Config("key `outage` must lie in [0, 1]".into()));
    }
    let seed = p.u64("seed")?;
    let mut results = Vec::new();
    for &ge in &gammas {
        let pdp_e = pdp(p, "L_e", ge, decay)?;
        let cdf = sk_rate_outage_cdf(&cfg, &pdp_r, &pdp_e, target_db, samples, seed).map_err(numerical)?;
        let suffix = sweep_suffix(&gammas, ge);
        let quantiles: Vec<Value> = outages
            .iter()
            .map(|&q| {
                json!({
                    "outage": q,
                    "secret_key_rate": cdf.sk_rate_at_outage(q),
                    "secrecy_rate": cdf.secrecy_rate_at_outage(q),
                })
            })
            .collect();
        results.push(json!({
            "gamma_e_db": ge,
            "rate_at_outage": quantiles,
            "secrecy_zero_fraction": cdf.secrecy_zero_fraction(),
            "files": [format!("{stem}{suffix}.csv"), format!("{stem}{suffix}.secrecy.csv")],
        }));
        let header = ["rate", "cumulative_probability"];
        let rows = |v: &[f64]| outage::empirical_cdf(v).into_iter().map(|(x, f)| vec![x, f]).collect::<Vec<_>>();
        out.push_csv(format!("{stem}{suffix}.csv"), &header, rows(&cdf.secret_key));
        out.push_csv(format!("{stem}{suffix}.secrecy.csv"), &header, rows(&cdf.secrecy));
    }
    out.meta("results", Value::Array(results));
    Ok(())
}

fn outage_analytic(p: &Params, stem: &str, out: &mut Artifacts) -> Result<(), CliError> {
    let cfg = ofdm_config(p)?;
    let decay = decay(p)?;
    let gammas = p.f64_list("gamma_e_db")?;
    let power = db_to_linear(p.f64("power_db")?);
    let (lo, hi) = (p.f64_or("theta_min_db", -30.0)?, p.f64_or("theta_max_db", 10.0)?);
    if !(lo < hi) {
        return Err(CliError::Config("key `theta_min_db` must be below `theta_max_db`".into()));
    }
    let points = p.count_or("points", 201)?;
    if points < 2 {
        return Err(CliError::Config("key `points` must be at least 2".into()));
    }
    let threshold = if p.has("lambda_th_db") {
        Some((db_to_linear(p.f64("lambda_th_db")?), p.f64_or("epsilon", 0.0)?))
    } else {
        None
    };
    let mc_samples = p.usize_or("mc_samples", 0)?;
    let seed = p.u64("seed")?;

    let mut results = Vec::new();
    for &ge in &gammas {
        let pdp_e = pdp(p, "L_e", ge, decay)?;
        let spec = build_c_matrix(&cfg, &pdp_e, power).map_err(at("L_e"))?.spectrum();
        let rows: Vec<Vec<f64>> = (0..points)
            .map(|i| {
                let db = lo + (hi - lo) * i as f64 / (points - 1) as f64;
                vec![db, lambda_e_cdf(db_to_linear(db), &spec)]
            })
            .collect();
        let mut entry = json!({
            "gamma_e_db": ge,
            "eigenvalues": spec.eigenvalues(),
            "mean": spec.mean(),
            "cdf_method": match spec.cdf_method() {
                CdfMethod::ClosedForm => "closed-form",
                CdfMethod::PhaseType => "phase-type",
            },
        });
        if let Some((lambda_th, eps)) = threshold {
            let po = outage::secrecy_outage_probability(lambda_th, eps, &spec).map_err(at("epsilon"))?;
            entry["secrecy_outage_probability"] = json!(po);
        }
        if mc_samples > 0 {
            entry["mc_ks_distance"] = json!(monte_carlo_ks(&cfg, &pdp_e, power, &spec, mc_samples, seed));
            entry["mc_samples"] = json!(mc_samples);
        }
        results.push(entry);
        out.push_csv(format!("{stem}{}.csv", sweep_suffix(&gammas, ge)), &["theta_db", "probability"], rows);
    }
    out.meta("results", Value::Array(results));
    Ok(())
}

/// KS distance between the analytic CDF and `P/(1+rho) ||G_E T e_m||^2`
/// sampled through the convolution model at a random subcarrier per draw.
fn monte_carlo_ks(cfg: &OfdmConfig, pdp: &PdpProfile, power: f64, spec: &EigenSpectrum, n: usize, seed: u64) -> f64 {
    let scale = power / (1.0 + cfg.rho());
    let root = SeededRng::new(seed);
    let mut samples: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = root.fork(i as u64);
            let g = sample_channel(pdp, Link::Eavesdropper, &mut rng);
            let m = rng.below(cfg.subcarriers());
            scale * ofdm::eavesdropper_column_energy(cfg, &g, m)
        })
        .collect();
    samples.sort_by(f64::total_cmp);
    outage::ks_distance(&samples, |x| lambda_e_cdf(x, spec))
}
