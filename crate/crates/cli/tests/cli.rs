use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use skagree::{Kind, Params};

fn skagree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skagree")).args(args).output().unwrap()
}

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

/// Runs `kind` on an inline config in a fresh directory.
fn run_inline(kind: &str, config: &str, extra: &[&str]) -> (Output, tempfile::TempDir) {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("config.json");
    fs::write(&cfg, config).unwrap();
    let out = dir.path().join("out");
    let mut args = vec![kind, "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    (skagree(&args), dir)
}

fn out_files(dir: &tempfile::TempDir) -> Vec<String> {
    let Ok(entries) = fs::read_dir(dir.path().join("out")) else { return Vec::new() };
    let mut names: Vec<_> = entries.map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    names
}

fn read_out(dir: &tempfile::TempDir, name: &str) -> String {
    fs::read_to_string(dir.path().join("out").join(name)).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn describe_every_kind() {
    for kind in Kind::ALL {
        let o = skagree(&["describe", kind.name()]);
        assert!(o.status.success(), "{kind}");
        let text = String::from_utf8(o.stdout).unwrap();
        assert!(text.contains("seed") && text.contains("dB"), "{text}");
    }
    let o = skagree(&["describe", "threshold"]);
    let text = String::from_utf8(o.stdout).unwrap();
    for key in ["w_c", "w_r", "rate", "tol_db"] {
        assert!(text.contains(key));
    }
    let o = skagree(&["describe", "unknown"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn threshold_near_minus_two_db() {
    let (o, dir) = run_inline("threshold", r#"{"w_c": 3, "w_r": 4, "seed": 1}"#, &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(out_files(&dir), ["threshold.csv", "threshold.meta.json"]);
    let csv = read_out(&dir, "threshold.csv");
    let lines: Vec<_> = csv.lines().collect();
    assert_eq!(lines[0], "w_c,w_r,rate,threshold_db,threshold_linear");
    assert_eq!(lines.len(), 2);
    let db: f64 = lines[1].split(',').nth(3).unwrap().parse().unwrap();
    assert!((db + 2.0).abs() < 0.3, "{db}");

    let meta: serde_json::Value = serde_json::from_str(&read_out(&dir, "threshold.meta.json")).unwrap();
    assert_eq!(meta["seed"], 1);
    assert_eq!(meta["rng"], skagree_core::rng::RNG_ALGORITHM);
    assert_eq!(meta["params"]["w_r"], 4);
    assert!(meta["wall_time_s"].as_f64().unwrap() >= 0.0);
}

#[test]
fn missing_seed_leaves_nothing_behind() {
    let (o, dir) = run_inline("threshold", r#"{"w_c": 3, "w_r": 4}"#, &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("seed required"));
    assert!(out_files(&dir).is_empty());
}

#[test]
fn config_errors_name_the_key() {
    let cases = [
        ("threshold", r#"{"w_c": 3, "w_r": "four", "seed": 1}"#, "`w_r`"),
        ("threshold", r#"{"w_c": 3, "seed": 1}"#, "`w_r`"),
        ("threshold", r#"{"w_c": 3, "w_r": 4, "tol": 0.1, "seed": 1}"#, "`tol`"),
        ("sk-cdf", r#"{"M": 64, "mu": 4, "L_r": 8, "L_e": 4, "gamma_r_db": 0, "gamma_e_db": 0,
                       "target_lambda_r_db": 0, "samples": 10, "seed": 1}"#, "`L_r`"),
        ("fer-sim", r#"{"n": 101, "rate": 0.25, "w_c": 3, "snr_db": 0, "max_frames": 1, "seed": 1}"#, "`n`"),
        ("diag-check", r#"{"M": 1, "mu": 1, "L_r": 1, "seed": 1}"#, "`M`"),
    ];
    for (kind, cfg, key) in cases {
        let (o, dir) = run_inline(kind, cfg, &[]);
        assert_eq!(o.status.code(), Some(1), "{kind} {cfg}: {}", stderr(&o));
        assert!(stderr(&o).contains(key), "{kind}: {}", stderr(&o));
        assert!(out_files(&dir).is_empty());
    }
}

#[test]
fn numerical_failures_exit_2() {
    // the bracket already decodes at its lower end
    let (o, dir) = run_inline("threshold", r#"{"w_c": 3, "w_r": 4, "lo_db": 5, "hi_db": 20, "seed": 1}"#, &[]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(out_files(&dir).is_empty());

    // every grid point decodes, so the security crossing is never bracketed
    let cfg = r#"{"n": 96, "rate": 0.25, "w_c": 3, "snr_db": [6, 8], "max_frames": 20, "seed": 3}"#;
    let (o, dir) = run_inline("security-gap", cfg, &[]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(out_files(&dir).is_empty());
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let cases = [
        (
            "sk-cdf",
            r#"{"M": 64, "mu": 4, "L_r": 4, "L_e": 4, "gamma_r_db": -10, "gamma_e_db": [-10, -5],
                "target_lambda_r_db": -1, "samples": 3000, "seed": 9}"#,
        ),
        ("fer-sim", r#"{"n": 240, "rate": 0.25, "w_c": 3, "snr_db": [-1, 1], "max_frames": 64, "seed": 5}"#),
        ("diag-check", r#"{"M": 16, "mu": 4, "L_r": 4, "trials": 10, "seed": 2}"#),
        ("outage-analytic", r#"{"M": 32, "mu": 2, "L_e": 2, "gamma_e_db": -3, "power_db": 0, "mc_samples": 500, "seed": 4}"#),
    ];
    for (kind, cfg) in cases {
        let (a, dir_a) = run_inline(kind, cfg, &["--threads", "1"]);
        let (b, dir_b) = run_inline(kind, cfg, &["--threads", "3"]);
        assert!(a.status.success() && b.status.success(), "{kind}: {}{}", stderr(&a), stderr(&b));
        let files = out_files(&dir_a);
        assert_eq!(files, out_files(&dir_b));
        for name in files.iter().filter(|n| !n.ends_with(".json")) {
            assert_eq!(read_out(&dir_a, name), read_out(&dir_b, name), "{kind}: {name}");
        }
    }
}

#[test]
fn fer_sim_artifacts() {
    let cfg = r#"{"n": 240, "rate": 0.25, "w_c": 3, "snr_db": [2, -4], "max_frames": 50, "seed": 5, "output": "short"}"#;
    let (o, dir) = run_inline("fer-sim", cfg, &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(out_files(&dir), ["short.alist", "short.csv", "short.meta.json"]);
    let csv = read_out(&dir, "short.csv");
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("snr_db,frames,frame_errors,bit_errors,fer,ber,ci95"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][0], -4.0, "grid is sorted");
    assert!(rows[0][4] > rows[1][4]);

    let meta: serde_json::Value = serde_json::from_str(&read_out(&dir, "short.meta.json")).unwrap();
    assert_eq!(meta["code"]["n"], 240);
    assert_eq!(meta["code"]["rank"], 180);
    assert!(meta["code"]["girth"].as_u64().unwrap() >= 6);

    // the written code simulates identically from its alist; the 2 dB point
    // was second on the grid, so it ran with seed + 1
    let alist = dir.path().join("out/short.alist");
    let cfg = format!(
        r#"{{"alist": {:?}, "snr_db": 2, "max_frames": 50, "scrambler_seed": 5, "seed": 6}}"#,
        alist.to_str().unwrap()
    );
    let (o, dir2) = run_inline("fer-sim", &cfg, &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(read_out(&dir2, "fer-sim.csv").lines().nth(1), csv.lines().nth(2));
}

#[test]
fn security_gap_on_a_short_code() {
    let cfg = r#"{"n": 240, "rate": 0.25, "w_c": 3, "snr_db": [-5, -4, -3, -2, -1, 0, 1, 2, 3],
                  "max_frames": 200, "fer_reliable": 0.02, "fer_secure": 0.9, "seed": 8}"#;
    let (o, dir) = run_inline("security-gap", cfg, &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let gap = read_out(&dir, "security-gap.gap.csv");
    let row: Vec<f64> = gap.lines().nth(1).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert!(row[0] < row[1], "{gap}");
    assert!((row[2] - (row[1] - row[0])).abs() < 1e-12);
    assert!(row[2] > 0.0 && row[2] < 8.0);
}

#[test]
fn outage_analytic_sweep_writes_one_file_per_value() {
    let cfg = r#"{"M": 64, "mu": 4, "L_e": 4, "gamma_e_db": [-10, 0], "power_db": 3,
                  "points": 11, "lambda_th_db": -2, "seed": 1}"#;
    let (o, dir) = run_inline("outage-analytic", cfg, &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        out_files(&dir),
        ["outage-analytic.meta.json", "outage-analytic_ge-10dB.csv", "outage-analytic_ge0dB.csv"]
    );
    let csv = read_out(&dir, "outage-analytic_ge-10dB.csv");
    let probs: Vec<f64> = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(probs.len(), 11);
    assert!(probs.windows(2).all(|w| w[0] <= w[1]));
    let meta: serde_json::Value = serde_json::from_str(&read_out(&dir, "outage-analytic.meta.json")).unwrap();
    let po: Vec<f64> = (0..2).map(|i| meta["results"][i]["secrecy_outage_probability"].as_f64().unwrap()).collect();
    assert!(po[0] < po[1], "a stronger eavesdropper channel raises the outage probability");
}

#[test]
fn shipped_configs_cover_every_kind() {
    let mut kinds = Vec::new();
    for entry in fs::read_dir(configs_dir()).unwrap() {
        let path = entry.unwrap().path();
        let text = fs::read_to_string(&path).unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        let kind: Kind = value["kind"].as_str().unwrap().parse().unwrap();
        Params::parse(kind, &text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        kinds.push(kind);
    }
    for kind in Kind::ALL {
        assert!(kinds.contains(&kind), "no shipped config for {kind}");
    }
}

#[test]
fn sk_cdf_reproduces_the_outage_anchor() {
    let o = skagree(&["describe", "sk-cdf"]);
    assert!(o.status.success());
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs_dir().join("sk-cdf.json");
    let o = skagree(&["sk-cdf", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("sk-cdf.csv")).unwrap();
    let rates: Vec<f64> = csv.lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(rates.len(), 100_000);
    let r = rates[(1e-3 * rates.len() as f64) as usize];
    assert!((r - 0.28).abs() <= 0.05, "{r}");
}
