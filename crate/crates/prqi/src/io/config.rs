//! Flat key-value run configuration for the band-gap experiment.
//!
//! Lines are `key = value`; `#` starts a comment. Recognized keys: X, h,
//! x0, R, n_osc, tol, eta_star, S, schedule, max_iters. R and n_osc
//! together define an initial profile; every key has a default matching
//! the band-gap study.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::solvers::{GammaSchedule, LocalizationGuard, StoppingCriteria};
use crate::sturm::{InitialProfile, SturmConfig, DEFAULT_ETA_STAR, DEFAULT_TAIL_COORDINATE};

/// Parsed run parameters for the band-gap solves.
#[derive(Debug)]
pub struct SturmRunConfig {
    pub config: SturmConfig,
    /// Profile from the R / n_osc keys, when both are present.
    pub profile: Option<InitialProfile>,
    pub tol: f64,
    pub eta_star: f64,
    /// Tail-start coordinate for the localization guard.
    pub s_tail: f64,
    pub schedule: GammaSchedule,
    pub max_iters: usize,
}

impl Default for SturmRunConfig {
    fn default() -> Self {
        SturmRunConfig {
            config: SturmConfig::new(107.3, 0.01),
            profile: None,
            tol: 1e-8,
            eta_star: DEFAULT_ETA_STAR,
            s_tail: DEFAULT_TAIL_COORDINATE,
            schedule: GammaSchedule::ResidualNormSquared,
            max_iters: 100,
        }
    }
}

impl SturmRunConfig {
    pub fn stopping(&self) -> StoppingCriteria {
        let mut stop = StoppingCriteria::new(self.tol);
        stop.max_iters = self.max_iters;
        stop
    }

    /// Guard with the tail starting just beyond `s_tail`, when the domain
    /// reaches that far.
    pub fn guard(&self) -> Option<LocalizationGuard> {
        let tail = (self.s_tail / self.config.h).floor() as usize + 1;
        if tail < self.config.nodes() {
            Some(LocalizationGuard { tail_start_index: tail, threshold: self.eta_star })
        } else {
            None
        }
    }
}

/// Parse a schedule spec: `residual`, `residual2`, or `constant:<v>`.
/// `constant:0` turns the imaginary shift off entirely (the solve then
/// matches classic RQI step for step), so it maps to a zero rule rather
/// than the strictly positive Constant variant.
pub fn parse_schedule(s: &str) -> Result<GammaSchedule> {
    match s.trim() {
        "residual" => Ok(GammaSchedule::ResidualNorm),
        "residual2" => Ok(GammaSchedule::ResidualNormSquared),
        other => {
            if let Some(v) = other.strip_prefix("constant:") {
                let value: f64 = v
                    .parse()
                    .map_err(|_| Error::parse(format!("bad constant gamma {v:?}")))?;
                if !(value.is_finite() && value >= 0.0) {
                    return Err(Error::parse(format!("constant gamma must be finite and >= 0, got {v}")));
                }
                if value == 0.0 {
                    Ok(GammaSchedule::Custom(Box::new(|_, _, _, _| 0.0)))
                } else {
                    Ok(GammaSchedule::Constant(value))
                }
            } else {
                Err(Error::parse(format!(
                    "unknown schedule {other:?}: expected residual, residual2, or constant:<v>"
                )))
            }
        }
    }
}

fn parse_key_f64(key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .map_err(|_| Error::parse(format!("key {key}: bad number {value:?}")))
}

/// Parse the flat key-value text into a run configuration.
pub fn parse_sturm_config(text: &str) -> Result<SturmRunConfig> {
    let mut run = SturmRunConfig::default();
    let mut r_cut: Option<f64> = None;
    let mut n_osc: Option<f64> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(format!("line {}: expected key = value", lineno + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "X" => run.config.x_max = parse_key_f64(key, value)?,
            "h" => run.config.h = parse_key_f64(key, value)?,
            "x0" => run.config.x0 = parse_key_f64(key, value)?,
            "R" => r_cut = Some(parse_key_f64(key, value)?),
            "n_osc" => n_osc = Some(parse_key_f64(key, value)?),
            "tol" => run.tol = parse_key_f64(key, value)?,
            "eta_star" => run.eta_star = parse_key_f64(key, value)?,
            "S" => run.s_tail = parse_key_f64(key, value)?,
            "schedule" => run.schedule = parse_schedule(value)?,
            "max_iters" => {
                run.max_iters = value
                    .parse()
                    .map_err(|_| Error::parse(format!("key max_iters: bad count {value:?}")))?
            }
            other => return Err(Error::parse(format!("line {}: unknown key {other:?}", lineno + 1))),
        }
    }
    run.profile = match (n_osc, r_cut) {
        (Some(n), Some(r)) => Some(InitialProfile::new(n, r)),
        (None, None) => None,
        _ => return Err(Error::parse("R and n_osc must be given together")),
    };
    run.config.validate()?;
    if let Some(p) = &run.profile {
        p.validate(&run.config)?;
    }
    if !(run.tol > 0.0) {
        return Err(Error::parse(format!("tol must be positive, got {}", run.tol)));
    }
    if !(run.eta_star > 0.0 && run.eta_star < 1.0) {
        return Err(Error::parse(format!("eta_star must lie in (0, 1), got {}", run.eta_star)));
    }
    if run.max_iters == 0 {
        return Err(Error::parse("max_iters must be at least 1"));
    }
    Ok(run)
}

pub fn read_sturm_config(path: &Path) -> Result<SturmRunConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::parse(format!("{}: {e}", path.display())))?;
    parse_sturm_config(&text).map_err(|e| Error::parse(format!("{}: {e}", path.display())))
}
