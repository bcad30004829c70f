//! Flat `key=value` experiment configuration.
//!
//! One pair per line; `#` starts a comment; blank lines are ignored.
//! Angles accept plain numbers or multiples of pi: `0.3`, `pi`, `pi/20`,
//! `3*pi/4`, `2pi/5` (`π` works as well). Integer lists accept a range
//! `start:stop:step` (inclusive) or a comma list `8,16,32`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::analysis::{dyadic, Baseline};
use crate::error::{Error, Result};
use crate::table::format_real;
use crate::thermal::{BathPair, LevelStructure};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Single,
    Collective,
    BoostCurve,
    EpScaling,
    EpRatio,
    OmegaPi,
    SplitCycle,
    NoInversion,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 8] = [
        ExperimentKind::Single,
        ExperimentKind::Collective,
        ExperimentKind::BoostCurve,
        ExperimentKind::EpScaling,
        ExperimentKind::EpRatio,
        ExperimentKind::OmegaPi,
        ExperimentKind::SplitCycle,
        ExperimentKind::NoInversion,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Single => "single",
            ExperimentKind::Collective => "collective",
            ExperimentKind::BoostCurve => "boost-curve",
            ExperimentKind::EpScaling => "ep-scaling",
            ExperimentKind::EpRatio => "ep-ratio",
            ExperimentKind::OmegaPi => "omega-pi",
            ExperimentKind::SplitCycle => "split-cycle",
            ExperimentKind::NoInversion => "no-inversion",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            ExperimentKind::Single => "one unit, bare and with coherence extraction",
            ExperimentKind::Collective => "per-unit ledgers of an N-unit pipeline (delta_theta or omega)",
            ExperimentKind::BoostCurve => "grouped collective work vs standalone copies over n_list",
            ExperimentKind::EpScaling => "omega=pi pollution and W/EP gains vs SWO and SEPO over n_list",
            ExperimentKind::EpRatio => "omega=pi pollution over a baseline (swo|sepo) over n_list",
            ExperimentKind::OmegaPi => "per-unit bath entropy of the omega=pi machine with n units",
            ExperimentKind::SplitCycle => "pollution when one cycle's work is split into n cycles",
            ExperimentKind::NoInversion => "single-temperature engine fed by a coherent donor",
        }
    }

    /// Keys this experiment accepts beyond the physical parameters.
    fn extra_keys(&self) -> &'static [&'static str] {
        match self {
            ExperimentKind::Single => &["delta_theta"],
            ExperimentKind::Collective => &["n", "delta_theta", "omega"],
            ExperimentKind::BoostCurve => &["delta_theta", "n_list"],
            ExperimentKind::EpScaling => &["n_list"],
            ExperimentKind::EpRatio => &["n_list", "baseline"],
            ExperimentKind::OmegaPi => &["n"],
            ExperimentKind::SplitCycle => &["delta_theta", "n_list"],
            ExperimentKind::NoInversion => &["delta_theta"],
        }
    }
}

impl FromStr for ExperimentKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown experiment '{s}'"))
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

const KNOWN_KEYS: [&str; 11] = [
    "experiment",
    "delta_e_c",
    "delta_e_h",
    "t_c",
    "t_h",
    "n",
    "n_list",
    "delta_theta",
    "omega",
    "baseline",
    "output",
];

/// Fully resolved configuration; every field has a value.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub delta_e_c: f64,
    pub delta_e_h: f64,
    pub t_c: f64,
    pub t_h: f64,
    pub n: usize,
    pub n_list: Vec<usize>,
    /// Rotation per unit.
    pub delta_theta: f64,
    /// Collective angle, for the pipeline experiments.
    pub omega: Option<f64>,
    pub baseline: Baseline,
    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: ExperimentKind::Single,
            delta_e_c: 1.0,
            delta_e_h: 2.0,
            t_c: 0.5,
            t_h: 5.0,
            n: 10,
            n_list: Vec::new(),
            delta_theta: PI / 8.0,
            omega: None,
            baseline: Baseline::Sepo,
            output: None,
        }
    }
}

impl ExperimentConfig {
    pub fn levels(&self) -> Result<LevelStructure> {
        LevelStructure::new(self.delta_e_c, self.delta_e_h)
    }

    pub fn baths(&self) -> Result<BathPair> {
        BathPair::new(self.t_c, self.t_h)
    }

    /// Resolved settings as `(key, value)` pairs, in a fixed order.
    pub fn echo(&self) -> Vec<(String, String)> {
        let mut out = vec![
            ("experiment".to_string(), self.experiment.to_string()),
            ("delta_e_c".into(), format_real(self.delta_e_c)),
            ("delta_e_h".into(), format_real(self.delta_e_h)),
            ("t_c".into(), format_real(self.t_c)),
            ("t_h".into(), format_real(self.t_h)),
        ];
        let keys = self.experiment.extra_keys();
        if keys.contains(&"n") {
            out.push(("n".into(), self.n.to_string()));
        }
        if keys.contains(&"n_list") {
            let list: Vec<String> = self.n_list.iter().map(|n| n.to_string()).collect();
            out.push(("n_list".into(), list.join(",")));
        }
        out.push(("delta_theta".into(), format_real(self.delta_theta)));
        if let Some(omega) = self.omega {
            out.push(("omega".into(), format_real(omega)));
        }
        if keys.contains(&"baseline") {
            out.push(("baseline".into(), self.baseline.to_string()));
        }
        if let Some(path) = &self.output {
            out.push(("output".into(), path.display().to_string()));
        }
        out
    }
}

fn config_err(line: usize, message: impl Into<String>) -> Error {
    Error::Config {
        line,
        message: message.into(),
    }
}

/// Parses a real number or a multiple of pi.
pub fn parse_angle(text: &str) -> Option<f64> {
    let t = text.trim().replace('π', "pi");
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), Some(b.trim().parse::<f64>().ok()?)),
        None => (t.as_str(), None),
    };
    let value = if let Some(coef) = num.strip_suffix("pi") {
        let coef = coef.trim().trim_end_matches('*').trim();
        let c = if coef.is_empty() {
            1.0
        } else {
            coef.parse::<f64>().ok()?
        };
        c * PI
    } else {
        num.parse::<f64>().ok()?
    };
    let value = match den {
        Some(d) if d != 0.0 => value / d,
        Some(_) => return None,
        None => value,
    };
    value.is_finite().then_some(value)
}

/// Parses `start:stop:step` (inclusive) or `a,b,c`.
pub fn parse_int_list(text: &str) -> Option<Vec<usize>> {
    let t = text.trim();
    if t.contains(':') {
        let parts: Vec<&str> = t.split(':').collect();
        let (start, stop, step) = match parts.as_slice() {
            [a, b] => (a.trim().parse().ok()?, b.trim().parse().ok()?, 1usize),
            [a, b, c] => (
                a.trim().parse().ok()?,
                b.trim().parse().ok()?,
                c.trim().parse().ok()?,
            ),
            _ => return None,
        };
        if step == 0 || start > stop {
            return None;
        }
        Some((start..=stop).step_by(step).collect())
    } else {
        t.split(',')
            .map(|s| s.trim().parse::<usize>().ok())
            .collect()
    }
}

fn positive(key: &str, line: usize, v: &str) -> Result<f64> {
    let x: f64 = v
        .parse()
        .map_err(|_| config_err(line, format!("{key}: cannot parse '{v}' as a number")))?;
    if x <= 0.0 || !x.is_finite() {
        return Err(config_err(line, format!("{key} must be positive, got {x}")));
    }
    Ok(x)
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut entries: HashMap<&str, (usize, &str)> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| config_err(line, format!("expected key=value, got '{content}'")))?;
        let (key, value) = (key.trim(), value.trim());
        if !KNOWN_KEYS.contains(&key) {
            return Err(config_err(line, format!("unknown key '{key}'")));
        }
        if entries.insert(key, (line, value)).is_some() {
            return Err(config_err(line, format!("duplicate key '{key}'")));
        }
    }

    let mut cfg = ExperimentConfig::default();
    if let Some(&(line, v)) = entries.get("experiment") {
        cfg.experiment = v.parse().map_err(|e: String| config_err(line, e))?;
    }
    let kind = cfg.experiment;
    for (&key, &(line, _)) in &entries {
        let common = ["experiment", "delta_e_c", "delta_e_h", "t_c", "t_h", "output"];
        if !common.contains(&key) && !kind.extra_keys().contains(&key) {
            return Err(config_err(
                line,
                format!("key '{key}' is not used by experiment '{kind}'"),
            ));
        }
    }

    if let Some(&(line, v)) = entries.get("delta_e_c") {
        cfg.delta_e_c = positive("delta_e_c", line, v)?;
    }
    if let Some(&(line, v)) = entries.get("delta_e_h") {
        cfg.delta_e_h = positive("delta_e_h", line, v)?;
    }
    if cfg.delta_e_c >= cfg.delta_e_h {
        let line = entries
            .get("delta_e_h")
            .or(entries.get("delta_e_c"))
            .map_or(0, |e| e.0);
        return Err(config_err(line, "delta_e_c must be smaller than delta_e_h"));
    }

    let t_c = entries
        .get("t_c")
        .map(|&(line, v)| positive("t_c", line, v))
        .transpose()?;
    let t_h = entries
        .get("t_h")
        .map(|&(line, v)| positive("t_h", line, v))
        .transpose()?;
    if kind == ExperimentKind::NoInversion {
        // one temperature for both baths
        let t = match (t_c, t_h) {
            (Some(a), Some(b)) if a != b => {
                return Err(config_err(
                    entries["t_h"].0,
                    "no-inversion runs with a single temperature: t_c must equal t_h",
                ))
            }
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) => 1.0,
        };
        cfg.t_c = t;
        cfg.t_h = t;
    } else {
        cfg.t_c = t_c.unwrap_or(cfg.t_c);
        cfg.t_h = t_h.unwrap_or(cfg.t_h);
    }

    if let Some(&(line, v)) = entries.get("n") {
        cfg.n = v
            .parse()
            .ok()
            .filter(|&n: &usize| n >= 1)
            .ok_or_else(|| config_err(line, format!("n must be a positive integer, got '{v}'")))?;
    } else if kind == ExperimentKind::OmegaPi {
        cfg.n = 20;
    }

    cfg.n_list = match entries.get("n_list") {
        Some(&(line, v)) => {
            let list = parse_int_list(v)
                .filter(|l| !l.is_empty() && l.iter().all(|&n| n >= 1))
                .ok_or_else(|| config_err(line, format!("cannot parse n_list '{v}'")))?;
            list
        }
        None => match kind {
            ExperimentKind::BoostCurve => (1..=100).collect(),
            ExperimentKind::EpScaling => dyadic(8, 512),
            ExperimentKind::EpRatio => (2..=64).collect(),
            ExperimentKind::SplitCycle => dyadic(1, 1024),
            _ => Vec::new(),
        },
    };

    if let Some(&(line, v)) = entries.get("baseline") {
        cfg.baseline = v
            .parse()
            .map_err(|_| config_err(line, format!("baseline must be swo or sepo, got '{v}'")))?;
    }
    let needs_two = matches!(kind, ExperimentKind::EpScaling)
        || (kind == ExperimentKind::EpRatio && cfg.baseline == Baseline::Sepo);
    if needs_two && cfg.n_list.contains(&1) {
        let line = entries.get("n_list").map_or(0, |e| e.0);
        return Err(config_err(line, "SEPO comparisons need n >= 2 in n_list"));
    }

    let delta_theta = entries
        .get("delta_theta")
        .map(|&(line, v)| {
            parse_angle(v)
                .filter(|&a| a > 0.0 && a <= PI + 1e-12)
                .ok_or_else(|| config_err(line, format!("delta_theta must be an angle in (0, pi], got '{v}'")))
        })
        .transpose()?;
    let omega = entries
        .get("omega")
        .map(|&(line, v)| {
            parse_angle(v)
                .filter(|&a| a > 0.0 && a <= PI + 1e-12)
                .ok_or_else(|| config_err(line, format!("omega must be an angle in (0, pi], got '{v}'")))
        })
        .transpose()?;

    match kind {
        ExperimentKind::Collective => match (delta_theta, omega) {
            (Some(_), Some(_)) => {
                let line = entries["omega"].0.max(entries["delta_theta"].0);
                return Err(config_err(line, "give either delta_theta or omega, not both"));
            }
            (Some(dt), None) => {
                let om = dt * cfg.n as f64;
                if om > PI + 1e-12 {
                    return Err(config_err(
                        entries["delta_theta"].0,
                        format!("n * delta_theta = {om} exceeds pi"),
                    ));
                }
                cfg.delta_theta = dt;
                cfg.omega = Some(om);
            }
            (None, om) => {
                let om = om.unwrap_or(PI);
                cfg.delta_theta = om / cfg.n as f64;
                cfg.omega = Some(om);
            }
        },
        ExperimentKind::OmegaPi => {
            cfg.delta_theta = PI / cfg.n as f64;
            cfg.omega = Some(PI);
        }
        ExperimentKind::EpScaling | ExperimentKind::EpRatio => {
            cfg.delta_theta = PI;
            cfg.omega = Some(PI);
        }
        ExperimentKind::BoostCurve => cfg.delta_theta = delta_theta.unwrap_or(PI / 20.0),
        ExperimentKind::SplitCycle | ExperimentKind::NoInversion => {
            cfg.delta_theta = delta_theta.unwrap_or(PI / 4.0)
        }
        ExperimentKind::Single => cfg.delta_theta = delta_theta.unwrap_or(PI / 8.0),
    }

    if let Some(&(_, v)) = entries.get("output") {
        cfg.output = Some(PathBuf::from(v));
    }
    Ok(cfg)
}
