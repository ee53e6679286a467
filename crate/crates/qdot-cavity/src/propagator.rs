//! Time evolution under the piecewise-sampled Hamiltonian.
//!
//! The production stepper expands the evolution operator in generalized
//! Laguerre polynomials of the Hamiltonian,
//!
//! ```text
//! e^{-iHt} = (1/(1+it))^{α+1} Σ_k (it/(1+it))^k L^α_k(H),
//! ```
//!
//! truncated at `k_max` and evaluated through the three-term recurrence,
//! so one step costs `k_max` matrix-vector products. The spectrum is
//! shifted and scaled to [-1, 1] before expansion and the shift is undone
//! by an exact phase factor, which keeps `k_max = 20` adequate at usable
//! step sizes. The reference stepper exponentiates exactly through the
//! Hermitian eigendecomposition.
//!
//! Time dependence is handled piecewise: within each step the Hamiltonian
//! is frozen at the midpoint drive value (second-order accurate), and both
//! steppers consume the same frozen sequence.

use std::collections::HashMap;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analysis::{EvolutionTrace, ParamsEcho};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigendecompose, ComplexMatrix, StateVector};
use crate::model::{
    build_initial_state, build_static_hamiltonian, build_total_hamiltonian, sigma_z_pair,
    DriveWaveform, InitialState, ModelParams,
};
use crate::observables::sample_observables;

/// Runtime acceptance threshold on the series tail; calibration targets a
/// far smaller tail, so tripping this means the step size is wrong.
pub const TAIL_ACCEPT: f64 = 1e-8;

/// Calibration targets: tail bound and one-step error against the oracle.
pub const CALIBRATION_TAIL: f64 = 1e-10;
pub const CALIBRATION_STEP_ERROR: f64 = 1e-9;

/// Calibration gives up below this step size.
pub const CALIBRATION_DT_FLOOR: f64 = 1e-6;

const CALIBRATION_SEED: u64 = 0x1a95eed;

/// Where within each step the drive is sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    /// Freeze H at t + dt/2 (second order in the drive variation).
    Midpoint,
    /// Freeze H at t (first order; kept for convergence studies).
    Left,
}

/// Which stepper advances the state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stepper {
    Laguerre,
    Oracle,
}

impl Stepper {
    pub fn name(&self) -> &'static str {
        match self {
            Stepper::Laguerre => "laguerre",
            Stepper::Oracle => "oracle",
        }
    }
}

/// Laguerre propagator configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorConfig {
    /// Expansion truncation order.
    pub k_max: usize,
    /// Laguerre type parameter α ≥ 0; results must not depend on it.
    pub alpha: f64,
    /// Step size.
    pub dt: f64,
    /// Spectral shift s in H' = (H - sI)/c.
    pub shift: f64,
    /// Spectral scale c > 0.
    pub scale: f64,
    /// Drive sampling rule.
    pub sampling: Sampling,
}

impl Default for PropagatorConfig {
    fn default() -> Self {
        Self {
            k_max: 20,
            alpha: 0.0,
            dt: 0.4,
            shift: 0.0,
            scale: 1.0,
            sampling: Sampling::Midpoint,
        }
    }
}

impl PropagatorConfig {
    pub fn is_valid(&self) -> bool {
        self.k_max >= 1
            && self.alpha >= 0.0
            && self.dt > 0.0
            && self.dt.is_finite()
            && self.scale > 0.0
            && self.shift.is_finite()
    }
}

/// Per-step diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    /// Magnitude of the last retained series term relative to the result.
    pub tail_estimate: f64,
    /// |‖ψ_out‖ - 1|.
    pub norm_drift: f64,
}

/// Scratch buffers for repeated Laguerre steps of one dimension.
pub struct LaguerreWorkspace {
    v_prev: Vec<Complex64>,
    v_curr: Vec<Complex64>,
    v_next: Vec<Complex64>,
    hv: Vec<Complex64>,
    acc: Vec<Complex64>,
}

impl LaguerreWorkspace {
    pub fn new(dim: usize) -> Self {
        Self {
            v_prev: vec![Complex64::ZERO; dim],
            v_curr: vec![Complex64::ZERO; dim],
            v_next: vec![Complex64::ZERO; dim],
            hv: vec![Complex64::ZERO; dim],
            acc: vec![Complex64::ZERO; dim],
        }
    }

    /// Advance `psi` by one step in place and return the diagnostics.
    /// Does not enforce the tail threshold; callers decide what to accept.
    pub fn step_unchecked(
        &mut self,
        h: &ComplexMatrix,
        cfg: &PropagatorConfig,
        psi: &mut [Complex64],
    ) -> StepReport {
        let tau = cfg.scale * cfg.dt;
        let denom = Complex64::new(1.0, tau);
        let q = Complex64::new(0.0, tau) / denom;
        let prefactor = denom.powf(-(cfg.alpha + 1.0));

        // v_0 = ψ; accumulate q^k v_k starting at k = 0.
        self.v_prev.copy_from_slice(psi);
        self.acc.copy_from_slice(psi);

        // v_1 = (1 + α)ψ - H'ψ.
        h.matvec_into(psi, &mut self.hv);
        let inv_scale = 1.0 / cfg.scale;
        for ((v1, &v0), hv) in self
            .v_curr
            .iter_mut()
            .zip(self.v_prev.iter())
            .zip(self.hv.iter())
        {
            let hp = (hv - cfg.shift * v0) * inv_scale;
            *v1 = (cfg.alpha + 1.0) * v0 - hp;
        }
        let mut coeff = q;
        for (a, v) in self.acc.iter_mut().zip(self.v_curr.iter()) {
            *a += coeff * v;
        }

        // (k+1) v_{k+1} = (2k+α+1 - H') v_k - (k+α) v_{k-1}.
        for k in 1..cfg.k_max {
            h.matvec_into(&self.v_curr, &mut self.hv);
            let kf = k as f64;
            let b = 2.0 * kf + cfg.alpha + 1.0;
            let c = kf + cfg.alpha;
            let inv_next = 1.0 / (kf + 1.0);
            for (((vn, &vc), &vp), &hv) in self
                .v_next
                .iter_mut()
                .zip(self.v_curr.iter())
                .zip(self.v_prev.iter())
                .zip(self.hv.iter())
            {
                let hp = (hv - cfg.shift * vc) * inv_scale;
                *vn = (b * vc - hp - c * vp) * inv_next;
            }
            coeff *= q;
            for (a, v) in self.acc.iter_mut().zip(self.v_next.iter()) {
                *a += coeff * v;
            }
            std::mem::swap(&mut self.v_prev, &mut self.v_curr);
            std::mem::swap(&mut self.v_curr, &mut self.v_next);
        }

        // Undo the spectral shift with its exact phase.
        let phase = prefactor * Complex64::from_polar(1.0, -cfg.shift * cfg.dt);
        let mut out_norm_sq = 0.0;
        for (p, a) in psi.iter_mut().zip(self.acc.iter()) {
            *p = phase * a;
            out_norm_sq += p.norm_sqr();
        }
        let out_norm = out_norm_sq.sqrt();

        let last_norm_sq: f64 = self.v_curr.iter().map(|z| z.norm_sqr()).sum();
        let tail =
            coeff.norm() * last_norm_sq.sqrt() * prefactor.norm() / out_norm.max(f64::MIN_POSITIVE);

        StepReport {
            tail_estimate: tail,
            norm_drift: (out_norm - 1.0).abs(),
        }
    }
}

/// One Laguerre-propagated step `e^{-iH dt} ψ`.
///
/// `h` must be Hermitian and `psi` normalized. Errors with
/// [`Error::StepTooLarge`] when the truncated-series tail exceeds
/// [`TAIL_ACCEPT`], in which case the step size must be reduced.
pub fn laguerre_step(
    h: &ComplexMatrix,
    psi: &StateVector,
    cfg: &PropagatorConfig,
) -> Result<(StateVector, StepReport)> {
    if h.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            context: "laguerre_step",
            expected: h.dim(),
            actual: psi.dim(),
        });
    }
    assert!(cfg.is_valid(), "invalid propagator configuration");
    let mut ws = LaguerreWorkspace::new(psi.dim());
    let mut out = psi.amplitudes().to_vec();
    let report = ws.step_unchecked(h, cfg, &mut out);
    if report.tail_estimate.is_nan() || report.tail_estimate > TAIL_ACCEPT {
        return Err(Error::StepTooLarge {
            dt: cfg.dt,
            tail: report.tail_estimate,
            threshold: TAIL_ACCEPT,
        });
    }
    Ok((StateVector::new(out), report))
}

/// Exact step `V e^{-iΛ dt} V† ψ` through the eigendecomposition of `h`.
pub fn oracle_step(h: &ComplexMatrix, psi: &StateVector, dt: f64) -> Result<StateVector> {
    if h.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            context: "oracle_step",
            expected: h.dim(),
            actual: psi.dim(),
        });
    }
    let (eigenvalues, vectors) = hermitian_eigendecompose(h)?;
    let mut out = psi.amplitudes().to_vec();
    apply_exponential(&eigenvalues, &vectors, dt, &mut out);
    Ok(StateVector::new(out))
}

fn apply_exponential(eigenvalues: &[f64], vectors: &ComplexMatrix, dt: f64, psi: &mut [Complex64]) {
    let mut coeffs = vec![Complex64::ZERO; psi.len()];
    vectors.matvec_adjoint_into(psi, &mut coeffs);
    for (c, &l) in coeffs.iter_mut().zip(eigenvalues) {
        *c *= Complex64::from_polar(1.0, -l * dt);
    }
    vectors.matvec_into(&coeffs, psi);
}

/// Piecewise-frozen Hamiltonian: H0 with the drive folded into the
/// diagonal, refreshed per step without rebuilding the matrix.
pub(crate) struct FrozenHamiltonian {
    pub(crate) h: ComplexMatrix,
    h0_diag: Vec<Complex64>,
    z_diag: Vec<f64>,
}

impl FrozenHamiltonian {
    pub(crate) fn new(p: &ModelParams) -> Self {
        let h = build_static_hamiltonian(p);
        let z = sigma_z_pair(p);
        let dim = h.dim();
        let h0_diag = (0..dim).map(|i| h[(i, i)]).collect();
        let z_diag = (0..dim).map(|i| z[(i, i)].re).collect();
        Self { h, h0_diag, z_diag }
    }

    pub(crate) fn set_drive(&mut self, f: f64) {
        let dim = self.h.dim();
        for i in 0..dim {
            self.h[(i, i)] = self.h0_diag[i] + Complex64::new(f * self.z_diag[i], 0.0);
        }
    }
}

/// Cache of eigendecompositions keyed by quantized drive value, so the
/// oracle stepper does not re-diagonalize for every step of a periodic
/// drive. The quantization bin (amplitude scaled by 2^-36) perturbs the
/// drive far below every tolerance used in this crate.
pub(crate) struct OracleCache {
    quantum: f64,
    map: HashMap<i64, (Vec<f64>, ComplexMatrix)>,
}

impl OracleCache {
    pub(crate) fn new(amplitude: f64) -> Self {
        Self {
            quantum: amplitude.abs() * 2f64.powi(-36),
            map: HashMap::new(),
        }
    }

    fn key(&self, f: f64) -> i64 {
        if self.quantum == 0.0 {
            0
        } else {
            (f / self.quantum).round() as i64
        }
    }

    pub(crate) fn apply(
        &mut self,
        frozen: &FrozenHamiltonian,
        f: f64,
        dt: f64,
        psi: &mut [Complex64],
    ) -> Result<()> {
        let key = self.key(f);
        if let std::collections::hash_map::Entry::Vacant(slot) = self.map.entry(key) {
            slot.insert(hermitian_eigendecompose(&frozen.h)?);
        }
        let (eigenvalues, vectors) = &self.map[&key];
        apply_exponential(eigenvalues, vectors, dt, psi);
        Ok(())
    }
}

/// Advance the initial state to `t_end`, recording observables every
/// `sample_every` steps (plus the initial point).
///
/// The step size is snapped down so that an integer number of sampling
/// intervals covers `[0, t_end]` exactly, keeping the sample grid uniform.
pub fn evolve(
    p: &ModelParams,
    w: &DriveWaveform,
    s0: InitialState,
    cfg: &PropagatorConfig,
    t_end: f64,
    sample_every: usize,
    stepper: Stepper,
) -> Result<EvolutionTrace> {
    assert!(t_end > 0.0, "t_end must be positive");
    assert!(sample_every >= 1, "sample_every must be at least 1");
    assert!(cfg.is_valid(), "invalid propagator configuration");
    assert!(p.is_valid() && w.is_valid(), "invalid model inputs");

    let interval = cfg.dt * sample_every as f64;
    let n_intervals = (t_end / interval).ceil().max(1.0) as usize;
    let n_steps = n_intervals * sample_every;
    let dt = t_end / n_steps as f64;
    let used_cfg = PropagatorConfig { dt, ..*cfg };

    let layout = p.layout();
    let mut psi = build_initial_state(s0, p.n_fock).amplitudes().to_vec();
    let mut frozen = FrozenHamiltonian::new(p);
    let mut ws = LaguerreWorkspace::new(psi.len());
    let mut oracle = OracleCache::new(w.amplitude());

    let mut samples = Vec::with_capacity(n_intervals + 1);
    samples.push(sample_observables(
        0.0,
        &StateVector::new(psi.clone()),
        &layout,
    )?);

    for step in 0..n_steps {
        let t_left = step as f64 * dt;
        let t_freeze = match used_cfg.sampling {
            Sampling::Midpoint => t_left + 0.5 * dt,
            Sampling::Left => t_left,
        };
        let f = w.value(t_freeze);
        frozen.set_drive(f);

        match stepper {
            Stepper::Laguerre => {
                let report = ws.step_unchecked(&frozen.h, &used_cfg, &mut psi);
                if report.tail_estimate.is_nan() || report.tail_estimate > TAIL_ACCEPT {
                    return Err(Error::StepTooLarge {
                        dt: used_cfg.dt,
                        tail: report.tail_estimate,
                        threshold: TAIL_ACCEPT,
                    });
                }
            }
            Stepper::Oracle => {
                oracle.apply(&frozen, f, dt, &mut psi)?;
            }
        }

        let t_now = (step + 1) as f64 * dt;
        if !psi.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NumericFailure { t: t_now });
        }
        if (step + 1) % sample_every == 0 {
            samples.push(sample_observables(
                t_now,
                &StateVector::new(psi.clone()),
                &layout,
            )?);
        }
    }

    let echo = ParamsEcho {
        model: *p,
        drive: *w,
        initial: s0,
        propagator: used_cfg,
        t_end,
        sample_every,
        stepper,
    };
    Ok(EvolutionTrace::new(samples, echo))
}

/// Spectral shift and scale taken from the eigenvalue range of the
/// Hamiltonian at maximum drive magnitude (all waveforms peak at t = 0).
pub fn build_spectral_window(p: &ModelParams, w: &DriveWaveform) -> Result<(f64, f64)> {
    let h_max = build_total_hamiltonian(p, w, 0.0);
    let (eigenvalues, _) = hermitian_eigendecompose(&h_max)?;
    let lo = eigenvalues.first().copied().unwrap_or(0.0);
    let hi = eigenvalues.last().copied().unwrap_or(0.0);
    Ok((0.5 * (hi + lo), (0.5 * (hi - lo)).max(1e-12)))
}

/// Determine a safe step size and the spectral shift/scale for the given
/// model and drive.
///
/// The spectrum bounds come from the Hamiltonian at maximum drive
/// magnitude. Starting from `cfg.dt`, the step is halved until the series
/// tail stays below [`CALIBRATION_TAIL`] and a single step agrees with
/// the eigendecomposition oracle to [`CALIBRATION_STEP_ERROR`] on ten
/// fixed pseudo-random states.
pub fn calibrate_step(
    p: &ModelParams,
    w: &DriveWaveform,
    cfg: &PropagatorConfig,
) -> Result<PropagatorConfig> {
    assert!(cfg.is_valid(), "invalid propagator configuration");
    let h_max = build_total_hamiltonian(p, w, 0.0);
    let (eigenvalues, vectors) = hermitian_eigendecompose(&h_max)?;
    let lo = eigenvalues.first().copied().unwrap_or(0.0);
    let hi = eigenvalues.last().copied().unwrap_or(0.0);
    let shift = 0.5 * (hi + lo);
    let scale = (0.5 * (hi - lo)).max(1e-12);

    let dim = h_max.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(CALIBRATION_SEED);
    let probes: Vec<Vec<Complex64>> = (0..10)
        .map(|_| {
            let mut v: Vec<Complex64> = (0..dim)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v.iter_mut().for_each(|z| *z /= norm);
            v
        })
        .collect();

    let mut ws = LaguerreWorkspace::new(dim);
    let mut dt = cfg.dt;
    loop {
        let trial = PropagatorConfig {
            dt,
            shift,
            scale,
            ..*cfg
        };
        let mut ok = true;
        for probe in &probes {
            let mut stepped = probe.clone();
            let report = ws.step_unchecked(&h_max, &trial, &mut stepped);
            if report.tail_estimate.is_nan() || report.tail_estimate >= CALIBRATION_TAIL {
                ok = false;
                break;
            }
            let mut reference = probe.clone();
            apply_exponential(&eigenvalues, &vectors, dt, &mut reference);
            let err = stepped
                .iter()
                .zip(&reference)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            if err.is_nan() || err >= CALIBRATION_STEP_ERROR {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(trial);
        }
        dt *= 0.5;
        if dt < CALIBRATION_DT_FLOOR {
            return Err(Error::CalibrationFailed {
                floor: CALIBRATION_DT_FLOOR,
            });
        }
    }
}
