//! Flat key-value run configuration.
//!
//! Grammar: one `key = value` pair per line, `#` starts a comment, blank
//! lines are ignored, unknown keys are errors. Defaults reproduce the
//! reference parameter set (ε = Δ = 0.4, ω = 0.02, g = 0.02, A = 0.48,
//! P = 4.0, cosine drive, |01⟩, n_fock = 12, t_end = 25000).
//!
//! ```text
//! # model
//! epsilon = 0.4
//! delta = 0.4
//! omega = 0.02
//! g = 0.02
//! n_fock = 12
//!
//! # drive: none | cosine | rectangular | triangular
//! drive = cosine
//! amplitude = 0.48
//! period = 4.0
//!
//! # run
//! initial = 01
//! t_end = 25000
//! sample_every = 1
//! stepper = laguerre
//! threshold = 0.5
//! seed = 1
//!
//! # propagator; dt = auto calibrates dt, shift and scale
//! dt = auto
//! k_max = 20
//! alpha = 0
//! sampling = midpoint
//!
//! # output
//! output = trace.csv
//! entropy_base = 2
//! ```

use std::path::{Path, PathBuf};

use crate::analysis::EvolutionTrace;
use crate::error::{Error, Result};
use crate::model::{DriveWaveform, InitialState, ModelParams};
use crate::propagator::{
    build_spectral_window, calibrate_step, evolve, PropagatorConfig, Sampling, Stepper,
};

/// Step-size selection: calibrated automatically or fixed by the user.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DtSpec {
    Auto,
    Fixed(f64),
}

/// Everything one `run` needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: ModelParams,
    pub drive: DriveWaveform,
    pub initial: InitialState,
    pub dt: DtSpec,
    pub k_max: usize,
    pub alpha: f64,
    pub shift: f64,
    pub scale: f64,
    pub sampling: Sampling,
    pub stepper: Stepper,
    pub t_end: f64,
    pub sample_every: usize,
    pub threshold: f64,
    pub seed: u64,
    pub entropy_base: f64,
    pub output: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: ModelParams::default(),
            drive: DriveWaveform::Cosine {
                amplitude: 0.48,
                period: 4.0,
            },
            initial: InitialState::ZeroOne,
            dt: DtSpec::Auto,
            k_max: 20,
            alpha: 0.0,
            shift: 0.0,
            scale: 1.0,
            sampling: Sampling::Midpoint,
            stepper: Stepper::Laguerre,
            t_end: 25000.0,
            sample_every: 1,
            threshold: 0.5,
            seed: 1,
            entropy_base: 2.0,
            output: PathBuf::from("trace.csv"),
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        Self::from_str_contents(&text)
    }

    pub fn from_str_contents(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let mut drive_kind = String::from("cosine");
        let mut amplitude = 0.48;
        let mut period = 4.0;

        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = idx + 1;
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
                message: format!("line {lineno}: expected `key = value`, got `{line}`"),
            })?;
            let key = key.trim();
            let value = value.trim();
            match key {
                "epsilon" => cfg.model.epsilon = parse_num(lineno, key, value)?,
                "delta" => cfg.model.delta = parse_num(lineno, key, value)?,
                "omega" => cfg.model.omega = parse_num(lineno, key, value)?,
                "g" => cfg.model.g = parse_num(lineno, key, value)?,
                "n_fock" => cfg.model.n_fock = parse_int(lineno, key, value)? as usize,
                "drive" => drive_kind = value.to_string(),
                "amplitude" => amplitude = parse_num(lineno, key, value)?,
                "period" => period = parse_num(lineno, key, value)?,
                "initial" => {
                    cfg.initial = InitialState::from_label(value).ok_or_else(|| Error::Config {
                        message: format!(
                            "line {lineno}: initial must be 00, 01, 10 or 11, got `{value}`"
                        ),
                    })?
                }
                "dt" => {
                    cfg.dt = if value == "auto" {
                        DtSpec::Auto
                    } else {
                        DtSpec::Fixed(parse_num(lineno, key, value)?)
                    }
                }
                "k_max" => cfg.k_max = parse_int(lineno, key, value)? as usize,
                "alpha" => cfg.alpha = parse_num(lineno, key, value)?,
                "shift" => cfg.shift = parse_num(lineno, key, value)?,
                "scale" => cfg.scale = parse_num(lineno, key, value)?,
                "sampling" => {
                    cfg.sampling = match value {
                        "midpoint" => Sampling::Midpoint,
                        "left" => Sampling::Left,
                        other => return Err(Error::Config {
                            message: format!(
                                "line {lineno}: sampling must be midpoint or left, got `{other}`"
                            ),
                        }),
                    }
                }
                "stepper" => {
                    cfg.stepper = match value {
                        "laguerre" => Stepper::Laguerre,
                        "oracle" => Stepper::Oracle,
                        other => return Err(Error::Config {
                            message: format!(
                                "line {lineno}: stepper must be laguerre or oracle, got `{other}`"
                            ),
                        }),
                    }
                }
                "t_end" => cfg.t_end = parse_num(lineno, key, value)?,
                "sample_every" => cfg.sample_every = parse_int(lineno, key, value)? as usize,
                "threshold" => cfg.threshold = parse_num(lineno, key, value)?,
                "seed" => cfg.seed = parse_int(lineno, key, value)?,
                "entropy_base" => {
                    cfg.entropy_base = if value == "e" {
                        std::f64::consts::E
                    } else {
                        parse_num(lineno, key, value)?
                    }
                }
                "output" => cfg.output = PathBuf::from(value),
                other => {
                    return Err(Error::Config {
                        message: format!("line {lineno}: unknown key `{other}`"),
                    })
                }
            }
        }

        cfg.drive = match drive_kind.as_str() {
            "none" => DriveWaveform::None,
            "cosine" => DriveWaveform::Cosine { amplitude, period },
            "rectangular" => DriveWaveform::Rectangular { amplitude, period },
            "triangular" => DriveWaveform::Triangular { amplitude, period },
            other => {
                return Err(Error::Config {
                    message: format!(
                        "drive must be none, cosine, rectangular or triangular, got `{other}`"
                    ),
                })
            }
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |message: String| Err(Error::Config { message });
        if !self.model.is_valid() {
            return fail(format!(
                "invalid model parameters (n_fock = {} must be >= 2)",
                self.model.n_fock
            ));
        }
        if !self.drive.is_valid() {
            return fail("drive period must be positive and finite".into());
        }
        if let DtSpec::Fixed(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return fail(format!("dt must be positive, got {dt}"));
            }
        }
        if self.k_max < 1 {
            return fail("k_max must be at least 1".into());
        }
        if self.alpha < 0.0 {
            return fail(format!("alpha must be non-negative, got {}", self.alpha));
        }
        if self.scale <= 0.0 {
            return fail(format!("scale must be positive, got {}", self.scale));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return fail(format!("t_end must be positive, got {}", self.t_end));
        }
        if self.sample_every < 1 {
            return fail("sample_every must be at least 1".into());
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return fail(format!(
                "threshold must lie strictly between 0 and 1, got {}",
                self.threshold
            ));
        }
        if self.entropy_base.is_nan() || self.entropy_base <= 1.0 {
            return fail(format!(
                "entropy_base must exceed 1, got {}",
                self.entropy_base
            ));
        }
        Ok(())
    }

    /// Resolve the propagator settings, calibrating when `dt = auto`.
    pub fn propagator_config(&self) -> Result<PropagatorConfig> {
        let base = PropagatorConfig {
            k_max: self.k_max,
            alpha: self.alpha,
            shift: self.shift,
            scale: self.scale,
            sampling: self.sampling,
            ..PropagatorConfig::default()
        };
        match self.dt {
            DtSpec::Auto => calibrate_step(&self.model, &self.drive, &base),
            DtSpec::Fixed(dt) => Ok(PropagatorConfig { dt, ..base }),
        }
    }

    /// Calibrate (if requested) and evolve; returns the trace together
    /// with the propagator configuration actually used.
    pub fn run(&self) -> Result<(EvolutionTrace, PropagatorConfig)> {
        let prop = self.propagator_config()?;
        let trace = evolve(
            &self.model,
            &self.drive,
            self.initial,
            &prop,
            self.t_end,
            self.sample_every,
            self.stepper,
        )?;
        Ok((trace, prop))
    }

    /// Spectral shift/scale for the current model at maximum drive,
    /// without touching dt. Useful when running with a fixed step.
    pub fn spectral_window(&self) -> Result<(f64, f64)> {
        build_spectral_window(&self.model, &self.drive)
    }
}

fn parse_num(lineno: usize, key: &str, value: &str) -> Result<f64> {
    value.parse::<f64>().map_err(|_| Error::Config {
        message: format!("line {lineno}: {key} expects a number, got `{value}`"),
    })
}

fn parse_int(lineno: usize, key: &str, value: &str) -> Result<u64> {
    value.parse::<u64>().map_err(|_| Error::Config {
        message: format!("line {lineno}: {key} expects an integer, got `{value}`"),
    })
}
