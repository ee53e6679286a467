//! Self-check suite behind the `verify` subcommand: every module property
//! exercised in one place, with pass/fail reporting per check.

use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analysis::{first_envelope_peak, trace_compare, EvolutionTrace, ParamsEcho};
use crate::linalg::{hermitian_eigendecompose, kron, ComplexMatrix, SpaceLayout, StateVector};
use crate::model::{
    build_initial_state, build_static_hamiltonian, build_total_hamiltonian, commutator,
    number_operator, DriveWaveform, InitialState, ModelParams,
};
use crate::observables::{
    concurrence, concurrence_impl, matrix_entropy, populations_and_photon, reduced_boson_matrix,
    reduced_density_matrix, spin_flip, von_neumann_entropy, DensityMatrix4, EntanglementSample,
};
use crate::propagator::{
    calibrate_step, evolve, oracle_step, LaguerreWorkspace, PropagatorConfig, Sampling, Stepper,
    CALIBRATION_TAIL, TAIL_ACCEPT,
};

/// Options for a verification run.
#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Run the reduced subset (every check, smaller sizes and horizons).
    pub quick: bool,
    /// Seed for all randomized checks.
    pub seed: u64,
    /// Fault-injection hook: flip a sign inside the spin-flip transform.
    /// The concurrence checks must then fail; used to prove the suite has
    /// teeth.
    pub fault_spin_flip: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            quick: false,
            seed: 20240817,
            fault_spin_flip: false,
        }
    }
}

/// Result of one named check.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

type CheckFn = fn(&VerifyOptions) -> Result<String, String>;

const CHECKS: &[(&str, CheckFn)] = &[
    ("kron-associativity", check_kron_associativity),
    ("eigen-reconstruction", check_eigen_reconstruction),
    ("matvec-linearity", check_matvec_linearity),
    ("layout-roundtrip", check_layout_roundtrip),
    ("hamiltonian-hermiticity", check_hamiltonian_hermiticity),
    ("drive-periodicity", check_drive_periodicity),
    ("drive-bound", check_drive_bound),
    ("boson-number-conservation", check_boson_number_conservation),
    ("laguerre-single-step", check_laguerre_single_step),
    ("laguerre-unitarity", check_laguerre_unitarity),
    ("oracle-equivalence", check_oracle_equivalence),
    ("energy-conservation", check_energy_conservation),
    ("shift-scale-invariance", check_shift_scale_invariance),
    ("alpha-invariance", check_alpha_invariance),
    ("midpoint-order", check_midpoint_order),
    ("concurrence-references", check_concurrence_references),
    ("concurrence-bounds", check_concurrence_bounds),
    ("concurrence-char-poly-oracle", check_concurrence_char_poly),
    ("purity-cross-check", check_purity_cross_check),
    ("trace-preservation", check_trace_preservation),
    ("local-unitary-invariance", check_local_unitary_invariance),
    ("envelope-crossings", check_envelope_crossings),
    ("envelope-grid-refinement", check_envelope_grid_refinement),
];

/// Run every check and collect the outcomes.
pub fn run_verification(opts: &VerifyOptions) -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|(name, f)| {
            let start = Instant::now();
            let result = f(opts);
            let seconds = start.elapsed().as_secs_f64();
            match result {
                Ok(detail) => CheckOutcome {
                    name,
                    passed: true,
                    detail,
                    seconds,
                },
                Err(detail) => CheckOutcome {
                    name,
                    passed: false,
                    detail,
                    seconds,
                },
            }
        })
        .collect()
}

pub fn all_passed(outcomes: &[CheckOutcome]) -> bool {
    outcomes.iter().all(|o| o.passed)
}

fn rng_for(opts: &VerifyOptions, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(opts.seed ^ salt)
}

fn fail_if(cond: bool, msg: String) -> Result<(), String> {
    if cond {
        Err(msg)
    } else {
        Ok(())
    }
}

fn random_hermitian(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        m[(i, i)] = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
        for j in (i + 1)..dim {
            let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

fn random_state(dim: usize, rng: &mut ChaCha8Rng) -> StateVector {
    let mut v: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= norm);
    StateVector::new(v)
}

fn paper_cosine() -> DriveWaveform {
    DriveWaveform::Cosine {
        amplitude: 0.48,
        period: 4.0,
    }
}

fn check_kron_associativity(opts: &VerifyOptions) -> Result<String, String> {
    let mut rng = rng_for(opts, 0x01);
    let trials = if opts.quick { 20 } else { 100 };
    let mut worst = 0.0_f64;
    for _ in 0..trials {
        let a = random_hermitian(2, &mut rng);
        let b = random_hermitian(3, &mut rng);
        let c = random_hermitian(2, &mut rng);
        let left =
            kron(&kron(&a, &b).map_err(|e| e.to_string())?, &c).map_err(|e| e.to_string())?;
        let right =
            kron(&a, &kron(&b, &c).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        worst = worst.max(left.max_abs_diff(&right));
    }
    fail_if(worst > 1e-14, format!("max deviation {worst:.3e}"))?;
    Ok(format!("{trials} triples, max deviation {worst:.3e}"))
}

fn check_eigen_reconstruction(opts: &VerifyOptions) -> Result<String, String> {
    let mut rng = rng_for(opts, 0x02);
    let dims: &[usize] = if opts.quick {
        &[2, 8, 32]
    } else {
        &[2, 3, 8, 16, 48, 96, 128]
    };
    let mut worst = 0.0_f64;
    for &dim in dims {
        let m = random_hermitian(dim, &mut rng);
        let (vals, vecs) = hermitian_eigendecompose(&m).map_err(|e| e.to_string())?;
        for i in 0..dim {
            for j in 0..dim {
                let mut acc = Complex64::ZERO;
                for (k, &l) in vals.iter().enumerate() {
                    acc += vecs[(i, k)] * l * vecs[(j, k)].conj();
                }
                worst = worst.max((acc - m[(i, j)]).norm());
            }
        }
    }
    fail_if(
        worst > 1e-10,
        format!("reconstruction residual {worst:.3e}"),
    )?;
    Ok(format!("dims {dims:?}, residual {worst:.3e}"))
}

fn check_matvec_linearity(opts: &VerifyOptions) -> Result<String, String> {
    let mut rng = rng_for(opts, 0x03);
    let trials = if opts.quick { 50 } else { 300 };
    let mut worst = 0.0_f64;
    for _ in 0..trials {
        let m = random_hermitian(8, &mut rng);
        let u = random_state(8, &mut rng);
        let v = random_state(8, &mut rng);
        let a = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let b = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let mut combo = StateVector::zeros(8);
        combo.add_scaled(&u, a);
        combo.add_scaled(&v, b);
        let lhs = m.matvec(&combo).map_err(|e| e.to_string())?;
        let mut rhs = StateVector::zeros(8);
        rhs.add_scaled(&m.matvec(&u).map_err(|e| e.to_string())?, a);
        rhs.add_scaled(&m.matvec(&v).map_err(|e| e.to_string())?, b);
        worst = worst.max(lhs.max_abs_diff(&rhs));
    }
    fail_if(worst > 1e-12, format!("max deviation {worst:.3e}"))?;
    Ok(format!("{trials} trials, max deviation {worst:.3e}"))
}

fn check_layout_roundtrip(_opts: &VerifyOptions) -> Result<String, String> {
    for n_fock in [2usize, 5, 12, 16] {
        let layout = SpaceLayout::two_qubits_boson(n_fock);
        for flat in 0..layout.total_dim() {
            let multi = layout.unflatten(flat);
            if layout.flatten(&multi) != flat {
                return Err(format!("roundtrip failed at n_fock {n_fock}, index {flat}"));
            }
        }
    }
    Ok("all flat indices round-trip for n_fock in {2, 5, 12, 16}".into())
}

fn check_hamiltonian_hermiticity(_opts: &VerifyOptions) -> Result<String, String> {
    let p = ModelParams::default();
    let waveforms = [
        DriveWaveform::None,
        paper_cosine(),
        DriveWaveform::Rectangular {
            amplitude: 0.48,
            period: 4.0,
        },
        DriveWaveform::Triangular {
            amplitude: 0.48,
            period: 4.0,
        },
    ];
    let mut worst = 0.0_f64;
    for w in &waveforms {
        for &t in &[0.0, 0.41, 1.0, 3.99, 12345.6] {
            worst = worst.max(build_total_hamiltonian(&p, w, t).hermiticity_violation());
        }
    }
    fail_if(worst > 0.0, format!("hermiticity violation {worst:.3e}"))?;
    Ok("construction exactly symmetric for all waveforms".into())
}

fn check_drive_periodicity(opts: &VerifyOptions) -> Result<String, String> {
    let mut rng = rng_for(opts, 0x06);
    let waveforms = [
        paper_cosine(),
        DriveWaveform::Rectangular {
            amplitude: 0.48,
            period: 4.0,
        },
        DriveWaveform::Triangular {
            amplitude: 0.48,
            period: 4.0,
        },
    ];
    let mut worst = 0.0_f64;
    for w in &waveforms {
        let p = w.period().unwrap();
        for _ in 0..1000 {
            let t: f64 = rng.random_range(0.0..10.0 * p);
            worst = worst.max((w.value(t + p) - w.value(t)).abs());
        }
    }
    fail_if(worst > 1e-14, format!("periodicity violation {worst:.3e}"))?;
    Ok(format!("1000 random t per waveform, worst {worst:.3e}"))
}

fn check_drive_bound(opts: &VerifyOptions) -> Result<String, String> {
    let mut rng = rng_for(opts, 0x07);
    let waveforms = [
        paper_cosine(),
        DriveWaveform::Rectangular {
            amplitude: 0.48,
            period: 4.0,
        },
        DriveWaveform::Triangular {
            amplitude: 0.48,
            period: 4.0,
        },
    ];
    for w in &waveforms {
        for _ in 0..1000 {
            let t: f64 = rng.random_range(0.0..100.0);
            if w.value(t).abs() > w.amplitude() + 1e-14 {
                return Err(format!("|F| exceeds A for {} at t = {t}", w.kind_name()));
            }
        }
    }
    Ok("|F(t)| <= A for all sampled t".into())
}

fn check_boson_number_conservation(_opts: &VerifyOptions) -> Result<String, String> {
    let p = ModelParams {
        g: 0.0,
        n_fock: 6,
        ..ModelParams::default()
    };
    let i4 = ComplexMatrix::identity(4);
    let nb = kron(&i4, &number_operator(p.n_fock)).map_err(|e| e.to_string())?;
    let mut worst = 0.0_f64;
    for &t in &[0.0, 0.5, 1.25] {
        let h = build_total_hamiltonian(&p, &paper_cosine(), t);
        let comm = commutator(&h, &nb).map_err(|e| e.to_string())?;
        worst = worst.max(comm.max_abs());
    }
    fail_if(worst > 1e-12, format!("[H, N_b] norm {worst:.3e}"))?;
    Ok(format!("commutator norm {worst:.3e} at g = 0"))
}

fn check_laguerre_single_step(opts: &VerifyOptions) -> Result<String, String> {
    let mut rng = rng_for(opts, 0x09);
    let p = ModelParams::default();
    let h = build_static_hamiltonian(&p);
    let cfg = calibrate_step(&p, &paper_cosine(), &PropagatorConfig::default())
        .map_err(|e| e.to_string())?;
    let mut worst = 0.0_f64;
    for _ in 0..10 {
        let psi = random_state(h.dim(), &mut rng);
        let (stepped, report) =
            crate::propagator::laguerre_step(&h, &psi, &cfg).map_err(|e| e.to_string())?;
        if report.tail_estimate >= CALIBRATION_TAIL {
            return Err(format!(
                "tail {:.3e} at calibrated dt",
                report.tail_estimate
            ));
        }
        let exact = oracle_step(&h, &psi, cfg.dt).map_err(|e| e.to_string())?;
        worst = worst.max(stepped.max_abs_diff(&exact));
    }
    fail_if(worst > 1e-9, format!("one-step error {worst:.3e}"))?;
    Ok(format!(
        "10 states, one-step error {worst:.3e}, dt {}",
        cfg.dt
    ))
}

fn check_laguerre_unitarity(opts: &VerifyOptions) -> Result<String, String> {
    let p = ModelParams::default();
    let w = paper_cosine();
    let cfg = calibrate_step(&p, &w, &PropagatorConfig::default()).map_err(|e| e.to_string())?;
    let steps = if opts.quick { 5_000 } else { 100_000 };
    let mut psi = build_initial_state(InitialState::ZeroOne, p.n_fock)
        .amplitudes()
        .to_vec();
    let mut frozen_h = build_static_hamiltonian(&p);
    let z = crate::model::sigma_z_pair(&p);
    let dim = frozen_h.dim();
    let h0_diag: Vec<Complex64> = (0..dim).map(|i| frozen_h[(i, i)]).collect();
    let mut ws = LaguerreWorkspace::new(dim);
    let mut worst_tail = 0.0_f64;
    for step in 0..steps {
        let t_mid = (step as f64 + 0.5) * cfg.dt;
        let f = w.value(t_mid);
        for i in 0..dim {
            frozen_h[(i, i)] = h0_diag[i] + Complex64::new(f * z[(i, i)].re, 0.0);
        }
        let report = ws.step_unchecked(&frozen_h, &cfg, &mut psi);
        worst_tail = worst_tail.max(report.tail_estimate);
        if report.tail_estimate > TAIL_ACCEPT {
            return Err(format!("tail blew up at step {step}"));
        }
    }
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let drift = (norm - 1.0).abs();
    let bound = if opts.quick { 1e-7 } else { 1e-6 };
    fail_if(
        drift > bound,
        format!("norm drift {drift:.3e} after {steps} steps"),
    )?;
    Ok(format!(
        "{steps} steps, norm drift {drift:.3e}, worst tail {worst_tail:.3e}"
    ))
}

fn check_oracle_equivalence(opts: &VerifyOptions) -> Result<String, String> {
    let p = ModelParams::default();
    let w = paper_cosine();
    let cfg = calibrate_step(&p, &w, &PropagatorConfig::default()).map_err(|e| e.to_string())?;
    let t_end = if opts.quick { 5.0 } else { 10.0 };
    let lag = evolve(
        &p,
        &w,
        InitialState::ZeroOne,
        &cfg,
        t_end,
        5,
        Stepper::Laguerre,
    )
    .map_err(|e| e.to_string())?;
    let ora = evolve(
        &p,
        &w,
        InitialState::ZeroOne,
        &cfg,
        t_end,
        5,
        Stepper::Oracle,
    )
    .map_err(|e| e.to_string())?;
    let diff = trace_compare(&lag, &ora).map_err(|e| e.to_string())?;
    fail_if(diff > 1e-7, format!("max |ΔC| = {diff:.3e}"))?;
    Ok(format!("t_end {t_end}, max |ΔC| = {diff:.3e}"))
}

fn check_energy_conservation(opts: &VerifyOptions) -> Result<String, String> {
    let p = ModelParams::default();
    let h0 = build_static_hamiltonian(&p);
    let cfg = calibrate_step(&p, &DriveWaveform::None, &PropagatorConfig::default())
        .map_err(|e| e.to_string())?;
    let t_end = if opts.quick { 200.0 } else { 1000.0 };
    let psi0 = build_initial_state(InitialState::ZeroOne, p.n_fock);
    let e0 = psi0.inner(&h0.matvec(&psi0).map_err(|e| e.to_string())?).re;
    let mut psi = psi0.amplitudes().to_vec();
    let mut ws = LaguerreWorkspace::new(psi.len());
    let steps = (t_end / cfg.dt).round() as usize;
    for _ in 0..steps {
        ws.step_unchecked(&h0, &cfg, &mut psi);
    }
    let state = StateVector::new(psi);
    let e1 = state
        .inner(&h0.matvec(&state).map_err(|e| e.to_string())?)
        .re;
    let drift = (e1 - e0).abs();
    fail_if(drift > 1e-6, format!("energy drift {drift:.3e}"))?;
    Ok(format!("t_end {t_end}, energy drift {drift:.3e}"))
}

fn check_shift_scale_invariance(_opts: &VerifyOptions) -> Result<String, String> {
    let p = ModelParams::default();
    let calibrated = calibrate_step(&p, &paper_cosine(), &PropagatorConfig::default())
        .map_err(|e| e.to_string())?;
    let raw = PropagatorConfig {
        shift: 0.0,
        scale: 1.0,
        dt: 0.025,
        ..PropagatorConfig::default()
    };
    let h = build_static_hamiltonian(&p);
    let psi0 = build_initial_state(InitialState::ZeroOne, p.n_fock);
    let run = |cfg: &PropagatorConfig| {
        let steps = (10.0 / cfg.dt).round() as usize;
        let mut psi = psi0.amplitudes().to_vec();
        let mut ws = LaguerreWorkspace::new(psi.len());
        for _ in 0..steps {
            ws.step_unchecked(&h, cfg, &mut psi);
        }
        StateVector::new(psi)
    };
    let a = run(&calibrated);
    let b = run(&raw);
    let overlap = a.inner(&b).norm();
    fail_if(
        overlap < 1.0 - 1e-8,
        format!("phase-corrected overlap {overlap:.12}"),
    )?;
    Ok(format!("overlap {overlap:.12}"))
}

fn check_alpha_invariance(_opts: &VerifyOptions) -> Result<String, String> {
    let p = ModelParams::default();
    let w = paper_cosine();
    let base = calibrate_step(&p, &w, &PropagatorConfig::default()).map_err(|e| e.to_string())?;
    let mut traces = Vec::new();
    for alpha in [0.0, 1.0, 2.0] {
        let cfg = PropagatorConfig { alpha, ..base };
        traces.push(
            evolve(
                &p,
                &w,
                InitialState::ZeroOne,
                &cfg,
                10.0,
                5,
                Stepper::Laguerre,
            )
            .map_err(|e| e.to_string())?,
        );
    }
    let mut worst = 0.0_f64;
    for other in &traces[1..] {
        worst = worst.max(trace_compare(&traces[0], other).map_err(|e| e.to_string())?);
    }
    fail_if(worst > 1e-8, format!("alpha dependence {worst:.3e}"))?;
    Ok(format!("alpha in {{0, 1, 2}}, max |ΔC| = {worst:.3e}"))
}

fn check_midpoint_order(opts: &VerifyOptions) -> Result<String, String> {
    let p = ModelParams::default();
    let w = paper_cosine();
    let base = calibrate_step(&p, &w, &PropagatorConfig::default()).map_err(|e| e.to_string())?;
    let t_end = if opts.quick { 50.0 } else { 100.0 };
    let run = |dt: f64, every: usize| {
        let cfg = PropagatorConfig { dt, ..base };
        evolve(
            &p,
            &w,
            InitialState::ZeroOne,
            &cfg,
            t_end,
            every,
            Stepper::Laguerre,
        )
        .map_err(|e: crate::error::Error| e.to_string())
    };
    let coarse = run(0.1, 4)?;
    let half = run(0.05, 8)?;
    let reference = run(0.025, 16)?;
    let c_end = |t: &EvolutionTrace| t.samples().last().unwrap().concurrence;
    let dev_coarse = (c_end(&coarse) - c_end(&reference)).abs();
    let dev_half = (c_end(&half) - c_end(&reference)).abs();
    let ratio = dev_coarse / dev_half.max(1e-16);
    fail_if(
        !(2.5..=10.0).contains(&ratio),
        format!("convergence ratio {ratio:.2}"),
    )?;
    Ok(format!(
        "halving dt shrinks deviation by {ratio:.2}x (second order)"
    ))
}

fn check_concurrence_references(opts: &VerifyOptions) -> Result<String, String> {
    let mut bell = ComplexMatrix::zeros(4);
    for (i, j) in [(1usize, 1usize), (1, 2), (2, 1), (2, 2)] {
        bell[(i, j)] = Complex64::new(0.5, 0.0);
    }
    let bell = DensityMatrix4::from_matrix(bell).map_err(|e| e.to_string())?;
    let c_bell = concurrence_impl(&bell, opts.fault_spin_flip).map_err(|e| e.to_string())?;
    fail_if(
        (c_bell - 1.0).abs() > 1e-12,
        format!("Bell concurrence {c_bell} != 1"),
    )?;

    for q in 0..4 {
        let mut m = ComplexMatrix::zeros(4);
        m[(q, q)] = Complex64::ONE;
        let rho = DensityMatrix4::from_matrix(m).map_err(|e| e.to_string())?;
        let c = concurrence_impl(&rho, opts.fault_spin_flip).map_err(|e| e.to_string())?;
        fail_if(c > 1e-12, format!("product state {q} has C = {c}"))?;
    }

    // Werner family against the closed form max(0, (3p-1)/2).
    for k in 0..=10 {
        let p = k as f64 / 10.0;
        let q = (1.0 - p) / 4.0;
        let h = p / 2.0;
        let mut m = ComplexMatrix::zeros(4);
        m[(0, 0)] = Complex64::new(h + q, 0.0);
        m[(1, 1)] = Complex64::new(q, 0.0);
        m[(2, 2)] = Complex64::new(q, 0.0);
        m[(3, 3)] = Complex64::new(h + q, 0.0);
        m[(0, 3)] = Complex64::new(h, 0.0);
        m[(3, 0)] = Complex64::new(h, 0.0);
        let rho = DensityMatrix4::from_matrix(m).map_err(|e| e.to_string())?;
        let c = concurrence_impl(&rho, opts.fault_spin_flip).map_err(|e| e.to_string())?;
        let expected = (0.5 * (3.0 * p - 1.0)).max(0.0);
        fail_if(
            (c - expected).abs() > 1e-10,
            format!("Werner p = {p}: C = {c}, expected {expected}"),
        )?;
    }
    Ok("Bell, product and Werner references all match".into())
}

fn check_concurrence_bounds(opts: &VerifyOptions) -> Result<String, String> {
    let mut rng = rng_for(opts, 0x11);
    let trials = if opts.quick { 1_000 } else { 10_000 };
    for i in 0..trials {
        let n_fock = rng.random_range(2usize..8);
        let layout = SpaceLayout::two_qubits_boson(n_fock);
        let psi = random_state(4 * n_fock, &mut rng);
        let rho = reduced_density_matrix(&psi, &layout).map_err(|e| e.to_string())?;
        let c = concurrence(&rho).map_err(|e| e.to_string())?;
        if !(0.0..=1.0).contains(&c) {
            return Err(format!("trial {i}: C = {c} out of [0, 1]"));
        }
    }
    Ok(format!("{trials} random reduced states inside [0, 1]"))
}

/// Independent eigenvalue route for ρρ̃: characteristic polynomial by
/// Faddeev–LeVerrier, roots by Durand–Kerner. Shares nothing with the
/// Jacobi eigensolver used by the production concurrence.
fn char_poly_lambdas(rho: &DensityMatrix4) -> Result<Vec<f64>, String> {
    let product = rho
        .matrix()
        .matmul(spin_flip(rho).matrix())
        .map_err(|e| e.to_string())?;
    let mut coeffs = [Complex64::ZERO; 4];
    let mut mk = product.clone();
    let mut ck = -mk.trace();
    coeffs[0] = ck;
    for k in 2..=4 {
        let mut shifted = mk.clone();
        shifted
            .add_scaled(&ComplexMatrix::identity(4), ck)
            .map_err(|e| e.to_string())?;
        mk = product.matmul(&shifted).map_err(|e| e.to_string())?;
        ck = -mk.trace() / (k as f64);
        coeffs[k - 1] = ck;
    }
    let poly = |x: Complex64| (((x + coeffs[0]) * x + coeffs[1]) * x + coeffs[2]) * x + coeffs[3];
    let seed = Complex64::new(0.4, 0.9);
    let mut roots = [seed, seed * seed, seed * seed * seed, Complex64::ONE];
    for _ in 0..200 {
        let mut moved = 0.0_f64;
        for i in 0..4 {
            let mut denom = Complex64::ONE;
            for j in 0..4 {
                if j != i {
                    denom *= roots[i] - roots[j];
                }
            }
            let delta = poly(roots[i]) / denom;
            roots[i] -= delta;
            moved = moved.max(delta.norm());
        }
        if moved < 1e-16 {
            break;
        }
    }
    let mut lambdas: Vec<f64> = roots.iter().map(|r| r.re.max(0.0).sqrt()).collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok(lambdas)
}

fn check_concurrence_char_poly(opts: &VerifyOptions) -> Result<String, String> {
    let mut rng = rng_for(opts, 0x12);
    let trials = if opts.quick { 20 } else { 100 };
    let layout = SpaceLayout::two_qubits_boson(4);
    let mut worst = 0.0_f64;
    for _ in 0..trials {
        let psi = random_state(16, &mut rng);
        let rho = reduced_density_matrix(&psi, &layout).map_err(|e| e.to_string())?;
        let oracle = char_poly_lambdas(&rho)?;
        let c_oracle = (oracle[0] - oracle[1] - oracle[2] - oracle[3]).clamp(0.0, 1.0);
        let c_impl = concurrence(&rho).map_err(|e| e.to_string())?;
        worst = worst.max((c_impl - c_oracle).abs());
    }
    fail_if(worst > 1e-8, format!("max mismatch {worst:.3e}"))?;
    Ok(format!("{trials} states, max mismatch {worst:.3e}"))
}

fn check_purity_cross_check(opts: &VerifyOptions) -> Result<String, String> {
    let mut rng = rng_for(opts, 0x13);
    let trials = if opts.quick { 20 } else { 100 };
    let n_fock = 6;
    let layout = SpaceLayout::two_qubits_boson(n_fock);
    let mut worst = 0.0_f64;
    for _ in 0..trials {
        let psi = random_state(4 * n_fock, &mut rng);
        let rho12 = reduced_density_matrix(&psi, &layout).map_err(|e| e.to_string())?;
        let rho_b = reduced_boson_matrix(&psi, &layout).map_err(|e| e.to_string())?;
        let s12 = von_neumann_entropy(&rho12).map_err(|e| e.to_string())?;
        let sb = matrix_entropy(&rho_b, 2.0).map_err(|e| e.to_string())?;
        worst = worst.max((s12 - sb).abs());
    }
    fail_if(worst > 1e-8, format!("entropy mismatch {worst:.3e}"))?;
    Ok(format!("{trials} pure states, |S12 - Sb| <= {worst:.3e}"))
}

fn check_trace_preservation(opts: &VerifyOptions) -> Result<String, String> {
    let mut rng = rng_for(opts, 0x14);
    let trials = if opts.quick { 50 } else { 300 };
    let mut worst = 0.0_f64;
    for _ in 0..trials {
        let n_fock = rng.random_range(2usize..10);
        let layout = SpaceLayout::two_qubits_boson(n_fock);
        // Deliberately unnormalized.
        let mut psi = random_state(4 * n_fock, &mut rng);
        let scale = rng.random_range(0.5..1.5);
        psi.scale(Complex64::new(scale, 0.0));
        let rho = reduced_density_matrix(&psi, &layout).map_err(|e| e.to_string())?;
        let (pops, _) = populations_and_photon(&psi, &layout).map_err(|e| e.to_string())?;
        let pop_sum: f64 = pops.iter().sum();
        worst = worst.max((rho.trace() - psi.norm().powi(2)).abs());
        worst = worst.max((pop_sum - psi.norm().powi(2)).abs());
    }
    fail_if(worst > 1e-12, format!("trace deviation {worst:.3e}"))?;
    Ok(format!("{trials} states, trace deviation {worst:.3e}"))
}

fn check_local_unitary_invariance(opts: &VerifyOptions) -> Result<String, String> {
    let mut rng = rng_for(opts, 0x15);
    let trials = if opts.quick { 10 } else { 50 };
    // Full-rank reduced states keep eigenvalues away from zero, where the
    // square root would amplify rounding beyond the 1e-10 bound.
    let layout = SpaceLayout::two_qubits_boson(6);
    let mut worst = 0.0_f64;
    for _ in 0..trials {
        let psi = random_state(24, &mut rng);
        let rho = reduced_density_matrix(&psi, &layout).map_err(|e| e.to_string())?;
        let u1 = random_unitary_2(&mut rng)?;
        let u2 = random_unitary_2(&mut rng)?;
        let u = kron(&u1, &u2).map_err(|e| e.to_string())?;
        let rotated = u
            .matmul(rho.matrix())
            .and_then(|m| m.matmul(&u.adjoint()))
            .map_err(|e| e.to_string())?;
        let rotated = DensityMatrix4::from_matrix(rotated).map_err(|e| e.to_string())?;
        let c0 = concurrence(&rho).map_err(|e| e.to_string())?;
        let c1 = concurrence(&rotated).map_err(|e| e.to_string())?;
        worst = worst.max((c0 - c1).abs());
    }
    fail_if(worst > 1e-10, format!("invariance violation {worst:.3e}"))?;
    Ok(format!("{trials} rotations, max |ΔC| = {worst:.3e}"))
}

fn random_unitary_2(rng: &mut ChaCha8Rng) -> Result<ComplexMatrix, String> {
    let a = rng.random_range(-1.0..1.0);
    let d = rng.random_range(-1.0..1.0);
    let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let h = ComplexMatrix::from_row_slice(
        2,
        &[Complex64::new(a, 0.0), z, z.conj(), Complex64::new(d, 0.0)],
    );
    let (eigs, vecs) = hermitian_eigendecompose(&h).map_err(|e| e.to_string())?;
    let mut u = ComplexMatrix::zeros(2);
    for i in 0..2 {
        for k in 0..2 {
            let mut acc = Complex64::ZERO;
            for (j, &l) in eigs.iter().enumerate() {
                acc += vecs[(i, j)] * Complex64::new(0.0, l).exp() * vecs[(k, j)].conj();
            }
            u[(i, k)] = acc;
        }
    }
    Ok(u)
}

fn synthetic_trace(c_of_t: impl Fn(f64) -> f64, dt: f64, t_end: f64) -> EvolutionTrace {
    let echo = ParamsEcho {
        model: ModelParams::default(),
        drive: DriveWaveform::None,
        initial: InitialState::ZeroOne,
        propagator: PropagatorConfig {
            sampling: Sampling::Midpoint,
            ..PropagatorConfig::default()
        },
        t_end,
        sample_every: 1,
        stepper: Stepper::Laguerre,
    };
    let n = (t_end / dt).round() as usize;
    let samples: Vec<EntanglementSample> = (0..=n)
        .map(|k| {
            let t = k as f64 * dt;
            EntanglementSample {
                t,
                concurrence: c_of_t(t),
                entropy: 0.0,
                norm: 1.0,
                mean_photon: 0.0,
                populations: [1.0, 0.0, 0.0, 0.0],
            }
        })
        .collect();
    EvolutionTrace::new(samples, echo)
}

fn sin_sq(t: f64) -> f64 {
    let s = (std::f64::consts::PI * t / 100.0).sin();
    s * s
}

fn check_envelope_crossings(_opts: &VerifyOptions) -> Result<String, String> {
    let trace = synthetic_trace(sin_sq, 0.5, 200.0);
    let report = first_envelope_peak(&trace, 0.5).ok_or("no peak found")?;
    fail_if(
        (report.c_peak - 1.0).abs() > 1e-12
            || (report.interval_start - 25.0).abs() > 1e-6
            || (report.interval_end - 75.0).abs() > 1e-6
            || (report.interval_length - 50.0).abs() > 1e-6,
        format!(
            "expected peak 1 on [25, 75], got {} on [{}, {}]",
            report.c_peak, report.interval_start, report.interval_end
        ),
    )?;
    let flat = synthetic_trace(|_| 0.0, 0.5, 10.0);
    fail_if(
        first_envelope_peak(&flat, 0.5).is_some(),
        "flat trace produced a peak".into(),
    )?;
    Ok("sin² crossings at 25/75 recovered; flat trace yields no peak".into())
}

fn check_envelope_grid_refinement(_opts: &VerifyOptions) -> Result<String, String> {
    let coarse = synthetic_trace(sin_sq, 0.5, 200.0);
    let fine = synthetic_trace(sin_sq, 0.25, 200.0);
    let lc = first_envelope_peak(&coarse, 0.5)
        .ok_or("no coarse peak")?
        .interval_length;
    let lf = first_envelope_peak(&fine, 0.5)
        .ok_or("no fine peak")?
        .interval_length;
    fail_if(
        (lc - lf).abs() >= 1.0,
        format!("interval length moved by {}", (lc - lf).abs()),
    )?;
    Ok(format!(
        "refinement moved interval length by {:.2e}",
        (lc - lf).abs()
    ))
}
