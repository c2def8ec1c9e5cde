//! Flat JSON experiment configs and their per-kind key schemas.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde_json::{Map, Value};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    DiagCheck,
    Threshold,
    FerSim,
    SecurityGap,
    SkCdf,
    OutageAnalytic,
}

impl Kind {
    pub const ALL: [Kind; 6] =
        [Kind::DiagCheck, Kind::Threshold, Kind::FerSim, Kind::SecurityGap, Kind::SkCdf, Kind::OutageAnalytic];

    pub fn name(self) -> &'static str {
        match self {
            Kind::DiagCheck => "diag-check",
            Kind::Threshold => "threshold",
            Kind::FerSim => "fer-sim",
            Kind::SecurityGap => "security-gap",
            Kind::SkCdf => "sk-cdf",
            Kind::OutageAnalytic => "outage-analytic",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            Kind::DiagCheck => "checks that the receiver diagonalizes the CP channel and the rank-one rate identity",
            Kind::Threshold => "Gaussian-approximation density-evolution threshold of a regular LDPC ensemble",
            Kind::FerSim => "Monte Carlo FER/BER of a PEG (or alist) LDPC code on QPSK/AWGN",
            Kind::SecurityGap => "FER sweep plus interpolated reliability/security crossings and the security gap",
            Kind::SkCdf => "Monte Carlo CDFs of the secret-key and secrecy rates with power control",
            Kind::OutageAnalytic => "closed-form CDF of the eavesdropper SNR for a fixed transmit power",
        }
    }

    pub fn keys(self) -> Vec<KeySpec> {
        use Req::*;
        let mut keys = vec![
            KeySpec::new("seed", Required, "integer", "RNG seed (mandatory for every kind)"),
            KeySpec::new("output", Optional("kind name"), "string", "file stem for the artifacts"),
            KeySpec::new("kind", Optional("command-line kind"), "string", "must match the kind if given"),
        ];
        let ofdm = |keys: &mut Vec<KeySpec>| {
            keys.push(KeySpec::new("M", Required, "integer", "number of subcarriers"));
            keys.push(KeySpec::new("mu", Required, "integer", "cyclic-prefix length"));
        };
        let code = |keys: &mut Vec<KeySpec>| {
            keys.extend([
                KeySpec::new("n", OneOf("alist"), "integer", "PEG codeword length"),
                KeySpec::new("rate", OneOf("alist"), "linear", "PEG design rate; n*(1-rate) must be an integer"),
                KeySpec::new("w_c", OneOf("alist"), "integer", "PEG column weight"),
                KeySpec::new("code_seed", Optional("seed"), "integer", "PEG tie-break seed"),
                KeySpec::new("alist", OneOf("n, rate, w_c"), "path", "parity-check matrix in alist format"),
                KeySpec::new("scrambler_seed", Optional("seed"), "integer", "seed of the invertible scrambler"),
                KeySpec::new("snr_db", Required, "dB", "QPSK symbol SNR grid (number or list)"),
                KeySpec::new("max_frames", Required, "integer", "frames per SNR point"),
                KeySpec::new("target_frame_errors", Optional("max_frames"), "integer", "stop a point after this many frame errors"),
                KeySpec::new("max_iter", Optional("100"), "integer", "sum-product iterations"),
            ]);
        };
        match self {
            Kind::DiagCheck => {
                ofdm(&mut keys);
                keys.extend([
                    KeySpec::new("L_r", Required, "integer", "maximum legitimate channel length (<= mu); drawn uniformly per trial"),
                    KeySpec::new("L_e", Optional("mu"), "integer", "maximum eavesdropper channel length; drawn uniformly per trial"),
                    KeySpec::new("trials", Optional("100"), "integer", "number of random channels"),
                    KeySpec::new("power", Optional("[0.001, 1]"), "linear", "transmit powers for the rank-one check (number or list)"),
                ]);
            }
            Kind::Threshold => keys.extend([
                KeySpec::new("w_c", Required, "integer", "column weight"),
                KeySpec::new("w_r", OneOf("rate"), "linear", "row weight (may be fractional)"),
                KeySpec::new("rate", OneOf("w_r"), "linear", "design rate; w_r = w_c / (1 - rate)"),
                KeySpec::new("tol_db", Optional("0.01"), "dB", "bisection tolerance"),
                KeySpec::new("max_iter", Optional("1000"), "integer", "density-evolution iterations"),
                KeySpec::new("divergence", Optional("1"), "linear", "message mean at which decoding is declared successful"),
                KeySpec::new("lo_db", Optional("-20"), "dB", "lower end of the search bracket"),
                KeySpec::new("hi_db", Optional("20"), "dB", "upper end of the search bracket"),
            ]),
            Kind::FerSim => code(&mut keys),
            Kind::SecurityGap => {
                code(&mut keys);
                keys.extend([
                    KeySpec::new("fer_reliable", Optional("1e-4"), "linear", "legitimate receiver FER target"),
                    KeySpec::new("fer_secure", Optional("0.9"), "linear", "eavesdropper FER floor"),
                ]);
            }
            Kind::SkCdf => {
                ofdm(&mut keys);
                keys.extend([
                    KeySpec::new("L_r", Required, "integer", "legitimate channel length"),
                    KeySpec::new("L_e", Required, "integer", "eavesdropper channel length"),
                    KeySpec::new("gamma_r_db", Required, "dB", "total legitimate channel gain"),
                    KeySpec::new("gamma_e_db", Required, "dB", "total eavesdropper channel gain (number or list to sweep)"),
                    KeySpec::new("decay", Optional("0.3"), "linear", "exponential PDP decay per tap, p_i ~ exp(-decay*i)"),
                    KeySpec::new("target_lambda_r_db", Required, "dB", "legitimate SNR maintained by power control"),
                    KeySpec::new("samples", Required, "integer", "Monte Carlo channel draws"),
                    KeySpec::new("outage", Optional("[0.001]"), "linear", "outage probabilities to summarize (number or list)"),
                ]);
            }
            Kind::OutageAnalytic => {
                ofdm(&mut keys);
                keys.extend([
                    KeySpec::new("L_e", Required, "integer", "eavesdropper channel length"),
                    KeySpec::new("gamma_e_db", Required, "dB", "total eavesdropper channel gain (number or list to sweep)"),
                    KeySpec::new("decay", Optional("0.3"), "linear", "exponential PDP decay per tap"),
                    KeySpec::new("power_db", Required, "dB", "transmit power P"),
                    KeySpec::new("theta_min_db", Optional("-30"), "dB", "lowest CDF abscissa"),
                    KeySpec::new("theta_max_db", Optional("10"), "dB", "highest CDF abscissa"),
                    KeySpec::new("points", Optional("201"), "integer", "abscissae, evenly spaced in dB"),
                    KeySpec::new("lambda_th_db", Optional("none"), "dB", "decoding threshold for the secrecy outage probability"),
                    KeySpec::new("epsilon", Optional("0"), "linear", "SNR margin below lambda_th"),
                    KeySpec::new("mc_samples", Optional("0"), "integer", "Monte Carlo draws through the matrix model for a KS check"),
                ]);
            }
        }
        keys
    }

    /// Human-readable parameter schema.
    pub fn describe(self) -> String {
        let mut out = format!("{}: {}\n\n", self.name(), self.summary());
        let keys = self.keys();
        let width = keys.iter().map(|k| k.name.len()).max().unwrap_or(0);
        for k in &keys {
            let req = match k.req {
                Req::Required => "required".to_string(),
                Req::OneOf(alt) => format!("required unless {alt}"),
                Req::Optional(default) => format!("optional, default {default}"),
            };
            out.push_str(&format!("  {:width$}  [{}] {} ({req})\n", k.name, k.unit, k.help));
        }
        out.push_str("\nKeys ending in _db are in dB; all other quantities are linear.\n");
        out
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Kind::ALL.iter().map(|k| k.name()).collect();
                CliError::Config(format!("unknown experiment kind `{s}` (expected one of {})", names.join(", ")))
            })
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Req {
    Required,
    /// Required unless the named alternative is given.
    OneOf(&'static str),
    Optional(&'static str),
}

#[derive(Debug, Clone)]
pub struct KeySpec {
    pub name: &'static str,
    pub req: Req,
    pub unit: &'static str,
    pub help: &'static str,
}

impl KeySpec {
    fn new(name: &'static str, req: Req, unit: &'static str, help: &'static str) -> Self {
        Self { name, req, unit, help }
    }
}

/// A parsed config object with typed accessors whose errors name the key.
#[derive(Debug, Clone)]
pub struct Params {
    kind: Kind,
    map: Map<String, Value>,
}

fn bad(key: &str, what: &str) -> CliError {
    CliError::Config(format!("key `{key}` {what}"))
}

impl Params {
    pub fn parse(kind: Kind, text: &str) -> Result<Self, CliError> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| CliError::Config(format!("config is not valid JSON: {e}")))?;
        let Value::Object(map) = value else {
            return Err(CliError::Config("config must be a JSON object".into()));
        };
        let known: BTreeSet<_> = kind.keys().iter().map(|k| k.name).collect();
        if let Some(key) = map.keys().find(|k| !known.contains(k.as_str())) {
            return Err(bad(key, &format!("is not recognised for kind {kind}")));
        }
        if let Some(v) = map.get("kind") {
            if v.as_str() != Some(kind.name()) {
                return Err(bad("kind", &format!("is {v} but the command line asked for {kind}")));
            }
        }
        if !map.contains_key("seed") {
            return Err(CliError::Config("seed required".into()));
        }
        let params = Self { kind, map };
        params.u64("seed")?;
        Ok(params)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn as_json(&self) -> Value {
        Value::Object(self.map.clone())
    }

    pub fn has(&self, key: &str) -> bool {
        self.map.get(key).is_some_and(|v| !v.is_null())
    }

    fn get(&self, key: &str) -> Result<&Value, CliError> {
        self.map
            .get(key)
            .filter(|v| !v.is_null())
            .ok_or_else(|| CliError::Config(format!("missing required key `{key}`")))
    }

    pub fn f64(&self, key: &str) -> Result<f64, CliError> {
        self.get(key)?
            .as_f64()
            .filter(|x| x.is_finite())
            .ok_or_else(|| bad(key, "must be a finite number"))
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, CliError> {
        if self.has(key) { self.f64(key) } else { Ok(default) }
    }

    pub fn u64(&self, key: &str) -> Result<u64, CliError> {
        self.get(key)?.as_u64().ok_or_else(|| bad(key, "must be a non-negative integer"))
    }

    pub fn u64_or(&self, key: &str, default: u64) -> Result<u64, CliError> {
        if self.has(key) { self.u64(key) } else { Ok(default) }
    }

    pub fn usize(&self, key: &str) -> Result<usize, CliError> {
        usize::try_from(self.u64(key)?).map_err(|_| bad(key, "is too large"))
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize, CliError> {
        if self.has(key) { self.usize(key) } else { Ok(default) }
    }

    /// Positive integer.
    pub fn count(&self, key: &str) -> Result<usize, CliError> {
        match self.usize(key)? {
            0 => Err(bad(key, "must be at least 1")),
            v => Ok(v),
        }
    }

    pub fn count_or(&self, key: &str, default: usize) -> Result<usize, CliError> {
        if self.has(key) { self.count(key) } else { Ok(default) }
    }

    /// A number or a non-empty list of numbers.
    pub fn f64_list(&self, key: &str) -> Result<Vec<f64>, CliError> {
        let list = match self.get(key)? {
            Value::Array(items) if !items.is_empty() => items.iter().map(Value::as_f64).collect::<Option<Vec<_>>>(),
            Value::Array(_) => None,
            v => v.as_f64().map(|x| vec![x]),
        };
        list.filter(|l| l.iter().all(|x| x.is_finite()))
            .ok_or_else(|| bad(key, "must be a number or a non-empty list of numbers"))
    }

    pub fn f64_list_or(&self, key: &str, default: &[f64]) -> Result<Vec<f64>, CliError> {
        if self.has(key) { self.f64_list(key) } else { Ok(default.to_vec()) }
    }

    pub fn str(&self, key: &str) -> Result<&str, CliError> {
        self.get(key)?.as_str().ok_or_else(|| bad(key, "must be a string"))
    }

    /// Output file stem.
    pub fn output(&self) -> Result<String, CliError> {
        if !self.has("output") {
            return Ok(self.kind.name().to_string());
        }
        let stem = self.str("output")?;
        if stem.is_empty() || stem.contains(['/', '\\']) || stem.starts_with('.') {
            return Err(bad("output", "must be a plain file stem"));
        }
        Ok(stem.to_string())
    }
}
