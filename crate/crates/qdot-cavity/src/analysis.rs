//! Post-processing of evolution traces: the first-envelope peak value and
//! the duration of the surrounding super-threshold interval.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{DriveWaveform, InitialState, ModelParams};
use crate::observables::EntanglementSample;
use crate::propagator::{PropagatorConfig, Stepper};

/// Snapshot of everything that produced a trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamsEcho {
    pub model: ModelParams,
    pub drive: DriveWaveform,
    pub initial: InitialState,
    pub propagator: PropagatorConfig,
    pub t_end: f64,
    pub sample_every: usize,
    pub stepper: Stepper,
}

/// Time-ordered, uniformly sampled evolution record.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionTrace {
    samples: Vec<EntanglementSample>,
    params_echo: ParamsEcho,
}

impl EvolutionTrace {
    /// Wrap samples, asserting the grid invariants: strictly increasing
    /// times with uniform spacing to 1e-9.
    pub fn new(samples: Vec<EntanglementSample>, params_echo: ParamsEcho) -> Self {
        assert!(!samples.is_empty(), "trace must contain samples");
        if samples.len() >= 2 {
            let spacing = samples[1].t - samples[0].t;
            for w in samples.windows(2) {
                let dt = w[1].t - w[0].t;
                assert!(dt > 0.0, "sample times must increase strictly");
                assert!(
                    (dt - spacing).abs() <= 1e-9,
                    "sample spacing must be uniform: {dt} vs {spacing}"
                );
            }
        }
        Self {
            samples,
            params_echo,
        }
    }

    pub fn samples(&self) -> &[EntanglementSample] {
        &self.samples
    }

    pub fn params_echo(&self) -> &ParamsEcho {
        &self.params_echo
    }

    pub fn sample_spacing(&self) -> f64 {
        if self.samples.len() >= 2 {
            self.samples[1].t - self.samples[0].t
        } else {
            0.0
        }
    }

    pub fn max_concurrence(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.concurrence)
            .fold(0.0, f64::max)
    }
}

/// Summary of the first super-threshold envelope of C(t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakReport {
    pub t_peak: f64,
    pub c_peak: f64,
    pub interval_start: f64,
    pub interval_end: f64,
    pub interval_length: f64,
    pub threshold: f64,
}

impl fmt::Display for PeakReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "peak:")?;
        writeln!(f, "  c_peak          = {:.6}", self.c_peak)?;
        writeln!(f, "  t_peak          = {:.6}", self.t_peak)?;
        writeln!(f, "  threshold       = {:.6}", self.threshold)?;
        writeln!(f, "  interval_start  = {:.6}", self.interval_start)?;
        writeln!(f, "  interval_end    = {:.6}", self.interval_end)?;
        write!(f, "  interval_length = {:.6}", self.interval_length)
    }
}

/// Locate the first contiguous region with C ≥ threshold and report its
/// peak and interpolated boundary crossings.
///
/// Sub-threshold dips shorter than one drive period within a region are
/// bridged, so the carrier ripple of a driven run does not split the
/// envelope. Returns `None` when the threshold is never reached.
pub fn first_envelope_peak(trace: &EvolutionTrace, threshold: f64) -> Option<PeakReport> {
    assert!(
        threshold > 0.0 && threshold < 1.0,
        "threshold must lie in (0, 1)"
    );
    let samples = trace.samples();

    // Maximal runs of consecutive samples at or above threshold.
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut current: Option<(usize, usize)> = None;
    for (i, s) in samples.iter().enumerate() {
        if s.concurrence >= threshold {
            current = match current {
                Some((a, _)) => Some((a, i)),
                None => Some((i, i)),
            };
        } else if let Some(run) = current.take() {
            runs.push(run);
        }
    }
    if let Some(run) = current {
        runs.push(run);
    }
    if runs.is_empty() {
        return None;
    }

    let bridge = trace.params_echo().drive.period().unwrap_or(0.0);
    let mut merged: Vec<(usize, usize)> = Vec::new();
    for run in runs {
        match merged.last_mut() {
            Some(last) if samples[run.0].t - samples[last.1].t < bridge => {
                last.1 = run.1;
            }
            _ => merged.push(run),
        }
    }

    let (first, last) = merged[0];
    let mut c_peak = f64::NEG_INFINITY;
    let mut t_peak = samples[first].t;
    for s in &samples[first..=last] {
        if s.concurrence > c_peak {
            c_peak = s.concurrence;
            t_peak = s.t;
        }
    }

    let interval_start = if first == 0 {
        samples[0].t
    } else {
        crossing_time(&samples[first - 1], &samples[first], threshold)
    };
    let interval_end = if last + 1 == samples.len() {
        samples[last].t
    } else {
        crossing_time(&samples[last], &samples[last + 1], threshold)
    };

    Some(PeakReport {
        t_peak,
        c_peak,
        interval_start,
        interval_end,
        interval_length: interval_end - interval_start,
        threshold,
    })
}

/// Linear interpolation of the time where C crosses `threshold` between
/// two adjacent samples.
fn crossing_time(a: &EntanglementSample, b: &EntanglementSample, threshold: f64) -> f64 {
    let dc = b.concurrence - a.concurrence;
    if dc.abs() < f64::MIN_POSITIVE {
        return a.t;
    }
    a.t + (threshold - a.concurrence) * (b.t - a.t) / dc
}

/// Maximum pointwise concurrence difference between two traces on the
/// same sample grid.
pub fn trace_compare(a: &EvolutionTrace, b: &EvolutionTrace) -> Result<f64> {
    if a.samples().len() != b.samples().len() {
        return Err(Error::GridMismatch {
            context: format!(
                "sample counts differ: {} vs {}",
                a.samples().len(),
                b.samples().len()
            ),
        });
    }
    let mut worst = 0.0_f64;
    for (sa, sb) in a.samples().iter().zip(b.samples()) {
        if (sa.t - sb.t).abs() > 1e-9 {
            return Err(Error::GridMismatch {
                context: format!("sample times differ: {} vs {}", sa.t, sb.t),
            });
        }
        worst = worst.max((sa.concurrence - sb.concurrence).abs());
    }
    Ok(worst)
}
