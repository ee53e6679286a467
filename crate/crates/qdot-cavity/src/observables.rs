//! Reduction of the global pure state to the two-qubit density matrix and
//! the entanglement measures computed from it.
//!
//! Concurrence follows the spin-flip construction: with
//! ρ̃ = (σy⊗σy) ρ* (σy⊗σy), the four λ_i are obtained here as eigenvalues
//! of the Hermitian matrix sqrt(√ρ ρ̃ √ρ), which is numerically stable and
//! always real. The eigenvalue route through the non-Hermitian product ρρ̃
//! is kept as a test oracle only.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigendecompose, ComplexMatrix, SpaceLayout, StateVector};

/// Density-matrix eigenvalues below `-STATE_POSITIVITY_TOL` are treated as
/// an invalid state; anything in `[-STATE_POSITIVITY_TOL, 0)` is clamped.
pub const STATE_POSITIVITY_TOL: f64 = 1e-8;

/// Two-qubit density matrix over the basis {|00⟩, |01⟩, |10⟩, |11⟩}.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix4 {
    m: ComplexMatrix,
}

impl DensityMatrix4 {
    pub fn from_matrix(m: ComplexMatrix) -> Result<Self> {
        if m.dim() != 4 {
            return Err(Error::DimensionMismatch {
                context: "DensityMatrix4",
                expected: 4,
                actual: m.dim(),
            });
        }
        Ok(Self { m })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    /// Diagonal in the computational basis, ordered (p00, p01, p10, p11).
    pub fn populations(&self) -> [f64; 4] {
        [
            self.m[(0, 0)].re,
            self.m[(1, 1)].re,
            self.m[(2, 2)].re,
            self.m[(3, 3)].re,
        ]
    }

    /// Full state-invariant check: Hermitian and unit trace to 1e-10,
    /// eigenvalues above -1e-10.
    pub fn validate(&self) -> Result<()> {
        let violation = self.m.hermiticity_violation();
        if violation > 1e-10 {
            return Err(Error::NotHermitian {
                violation,
                tolerance: 1e-10,
            });
        }
        let trace = self.m.trace();
        if (trace.re - 1.0).abs() > 1e-10 || trace.im.abs() > 1e-10 {
            return Err(Error::InvalidState {
                eigenvalue: trace.re - 1.0,
                tolerance: 1e-10,
            });
        }
        let (eigs, _) = hermitian_eigendecompose(&self.m)?;
        if eigs[0] < -1e-10 {
            return Err(Error::NotPositive {
                eigenvalue: eigs[0],
            });
        }
        Ok(())
    }
}

/// One row of an evolution trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementSample {
    pub t: f64,
    pub concurrence: f64,
    pub entropy: f64,
    pub norm: f64,
    pub mean_photon: f64,
    /// Two-qubit populations (p00, p01, p10, p11).
    pub populations: [f64; 4],
}

/// Trace out the boson mode: ρ12[q, q'] = Σ_n ψ(q, n) ψ*(q', n).
pub fn reduced_density_matrix(psi: &StateVector, layout: &SpaceLayout) -> Result<DensityMatrix4> {
    let n_fock = check_layout(psi, layout)?;
    let amps = psi.amplitudes();
    let mut rho = ComplexMatrix::zeros(4);
    for q in 0..4 {
        for qp in q..4 {
            let mut acc = Complex64::ZERO;
            for n in 0..n_fock {
                acc += amps[q * n_fock + n] * amps[qp * n_fock + n].conj();
            }
            rho[(q, qp)] = acc;
            if qp != q {
                rho[(qp, q)] = acc.conj();
            }
        }
    }
    DensityMatrix4::from_matrix(rho)
}

/// Trace out both qubits: ρb[n, n'] = Σ_q ψ(q, n) ψ*(q, n').
pub fn reduced_boson_matrix(psi: &StateVector, layout: &SpaceLayout) -> Result<ComplexMatrix> {
    let n_fock = check_layout(psi, layout)?;
    let amps = psi.amplitudes();
    let mut rho = ComplexMatrix::zeros(n_fock);
    for n in 0..n_fock {
        for np in n..n_fock {
            let mut acc = Complex64::ZERO;
            for q in 0..4 {
                acc += amps[q * n_fock + n] * amps[q * n_fock + np].conj();
            }
            rho[(n, np)] = acc;
            if np != n {
                rho[(np, n)] = acc.conj();
            }
        }
    }
    Ok(rho)
}

fn check_layout(psi: &StateVector, layout: &SpaceLayout) -> Result<usize> {
    let dims = layout.factor_dims();
    if dims.len() != 3 || dims[0] != 2 || dims[1] != 2 {
        return Err(Error::DimensionMismatch {
            context: "layout must be [2, 2, n_fock]",
            expected: 2,
            actual: *dims.first().unwrap_or(&0),
        });
    }
    if layout.total_dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            context: "state/layout",
            expected: layout.total_dim(),
            actual: psi.dim(),
        });
    }
    Ok(dims[2])
}

/// Spin-flip transform ρ̃ = (σy⊗σy) ρ* (σy⊗σy).
pub fn spin_flip(rho: &DensityMatrix4) -> DensityMatrix4 {
    spin_flip_impl(rho, false)
}

/// Implementation with a fault hook used by the self-check suite: flipping
/// one sign of σy⊗σy must make the concurrence checks fail.
#[doc(hidden)]
pub fn spin_flip_impl(rho: &DensityMatrix4, fault: bool) -> DensityMatrix4 {
    // σy⊗σy maps e_k -> y_k e_{3-k} with y = (-1, 1, 1, -1), so
    // ρ̃[i, j] = y_i y_j conj(ρ[3-i, 3-j]).
    let mut y = [-1.0, 1.0, 1.0, -1.0];
    if fault {
        y[0] = 1.0;
    }
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(4);
    for i in 0..4 {
        for j in 0..4 {
            out[(i, j)] = y[i] * y[j] * m[(3 - i, 3 - j)].conj();
        }
    }
    DensityMatrix4::from_matrix(out).expect("4x4 by construction")
}

/// Eigenvalues of a Hermitian matrix, clamped to be non-negative.
fn clamped_spectrum(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let (eigs, _) = hermitian_eigendecompose(m)?;
    if eigs[0] < -STATE_POSITIVITY_TOL {
        return Err(Error::InvalidState {
            eigenvalue: eigs[0],
            tolerance: STATE_POSITIVITY_TOL,
        });
    }
    Ok(eigs.into_iter().map(|l| l.max(0.0)).collect())
}

/// Wootters concurrence of a two-qubit density matrix.
///
/// Computed through the Hermitian form: the λ_i are the eigenvalues of
/// sqrt(√ρ ρ̃ √ρ) in decreasing order and C = max(λ1 - λ2 - λ3 - λ4, 0).
pub fn concurrence(rho: &DensityMatrix4) -> Result<f64> {
    concurrence_impl(rho, false)
}

#[doc(hidden)]
pub fn concurrence_impl(rho: &DensityMatrix4, spin_flip_fault: bool) -> Result<f64> {
    let (eigs, vecs) = hermitian_eigendecompose(rho.matrix())?;
    if eigs[0] < -STATE_POSITIVITY_TOL {
        return Err(Error::InvalidState {
            eigenvalue: eigs[0],
            tolerance: STATE_POSITIVITY_TOL,
        });
    }
    let roots: Vec<f64> = eigs.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let mut sqrt_rho = ComplexMatrix::zeros(4);
    for i in 0..4 {
        for k in i..4 {
            let mut acc = Complex64::ZERO;
            for (j, &r) in roots.iter().enumerate() {
                acc += vecs[(i, j)] * r * vecs[(k, j)].conj();
            }
            sqrt_rho[(i, k)] = acc;
            if k != i {
                sqrt_rho[(k, i)] = acc.conj();
            }
        }
    }
    let tilde = spin_flip_impl(rho, spin_flip_fault);
    let inner = sqrt_rho.matmul(tilde.matrix())?.matmul(&sqrt_rho)?;
    let mut lambdas = clamped_spectrum(&inner)?
        .into_iter()
        .map(f64::sqrt)
        .collect::<Vec<f64>>();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    Ok(c.clamp(0.0, 1.0))
}

/// Von Neumann entropy -Tr(ρ log ρ) with the given logarithm base.
pub fn matrix_entropy(m: &ComplexMatrix, log_base: f64) -> Result<f64> {
    let spectrum = clamped_spectrum(m)?;
    let ln_base = log_base.ln();
    let s: f64 = spectrum
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.ln() / ln_base)
        .sum();
    Ok(s.max(0.0))
}

/// Von Neumann entropy of a two-qubit state in bits (base-2 logarithm),
/// so a maximally mixed state has S = 2.
pub fn von_neumann_entropy(rho: &DensityMatrix4) -> Result<f64> {
    matrix_entropy(rho.matrix(), 2.0)
}

/// Two-qubit populations and the mean boson occupation number.
pub fn populations_and_photon(psi: &StateVector, layout: &SpaceLayout) -> Result<([f64; 4], f64)> {
    let n_fock = check_layout(psi, layout)?;
    let amps = psi.amplitudes();
    let mut populations = [0.0; 4];
    let mut mean_photon = 0.0;
    for q in 0..4 {
        for n in 0..n_fock {
            let w = amps[q * n_fock + n].norm_sqr();
            populations[q] += w;
            mean_photon += n as f64 * w;
        }
    }
    Ok((populations, mean_photon))
}

/// Assemble the full per-sample record used by evolution traces.
pub fn sample_observables(
    t: f64,
    psi: &StateVector,
    layout: &SpaceLayout,
) -> Result<EntanglementSample> {
    let rho = reduced_density_matrix(psi, layout)?;
    let concurrence = concurrence(&rho)?;
    let entropy = von_neumann_entropy(&rho)?;
    let (populations, mean_photon) = populations_and_photon(psi, layout)?;
    Ok(EntanglementSample {
        t,
        concurrence,
        entropy,
        norm: psi.norm(),
        mean_photon,
        populations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::kron;
    use crate::model::{pauli_y, InitialState};
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn bell_psi_plus() -> DensityMatrix4 {
        // (|01⟩ + |10⟩)/√2
        let h = 0.5;
        DensityMatrix4::from_matrix(ComplexMatrix::from_real_row_slice(
            4,
            &[
                0.0, 0.0, 0.0, 0.0, //
                0.0, h, h, 0.0, //
                0.0, h, h, 0.0, //
                0.0, 0.0, 0.0, 0.0,
            ],
        ))
        .unwrap()
    }

    fn werner(p: f64) -> DensityMatrix4 {
        // p |Φ+⟩⟨Φ+| + (1-p) I/4 with |Φ+⟩ = (|00⟩ + |11⟩)/√2.
        let q = (1.0 - p) / 4.0;
        let h = p / 2.0;
        DensityMatrix4::from_matrix(ComplexMatrix::from_real_row_slice(
            4,
            &[
                h + q,
                0.0,
                0.0,
                h, //
                0.0,
                q,
                0.0,
                0.0, //
                0.0,
                0.0,
                q,
                0.0, //
                h,
                0.0,
                0.0,
                h + q,
            ],
        ))
        .unwrap()
    }

    fn random_pure_composite(n_fock: usize, rng: &mut ChaCha8Rng) -> StateVector {
        let dim = 4 * n_fock;
        let mut v: Vec<Complex64> = (0..dim)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut v {
            *z /= norm;
        }
        StateVector::new(v)
    }

    /// Independent oracle for the concurrence eigenvalues: characteristic
    /// polynomial of the non-Hermitian product ρρ̃ by Faddeev–LeVerrier,
    /// then Durand–Kerner root finding. Shares nothing with the Hermitian
    /// eigensolver route used by the implementation.
    fn lambdas_via_char_poly(rho: &DensityMatrix4) -> Vec<f64> {
        let product = rho.matrix().matmul(spin_flip(rho).matrix()).unwrap();
        // Monic characteristic polynomial coefficients.
        let mut coeffs = [Complex64::ZERO; 4];
        let mut mk = product.clone();
        let mut ck = -mk.trace();
        coeffs[0] = ck;
        for k in 2..=4 {
            let mut shifted = mk.clone();
            shifted.add_scaled(&ComplexMatrix::identity(4), ck).unwrap();
            mk = product.matmul(&shifted).unwrap();
            ck = -mk.trace() / (k as f64);
            coeffs[k - 1] = ck;
        }
        let poly =
            move |x: Complex64| (((x + coeffs[0]) * x + coeffs[1]) * x + coeffs[2]) * x + coeffs[3];
        // Durand–Kerner from staggered complex seeds.
        let mut roots = [
            c(0.4, 0.9),
            c(0.4, 0.9) * c(0.4, 0.9),
            c(0.4, 0.9) * c(0.4, 0.9) * c(0.4, 0.9),
            c(1.0, 0.0),
        ];
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
        lambdas
    }

    #[test]
    fn reduced_density_of_product_state_is_projector() {
        let layout = SpaceLayout::two_qubits_boson(3);
        let psi = crate::model::build_initial_state(InitialState::ZeroOne, 3);
        let rho = reduced_density_matrix(&psi, &layout).unwrap();
        rho.validate().unwrap();
        assert!((rho.matrix()[(1, 1)].re - 1.0).abs() < 1e-15);
        assert_eq!(rho.populations(), [0.0, 1.0, 0.0, 0.0]);
        assert!(concurrence(&rho).unwrap() < 1e-12);
    }

    #[test]
    fn boson_orthogonality_kills_qubit_coherence() {
        // (|00⟩⊗|0⟩ + |11⟩⊗|1⟩)/√2 reduces to diag(1/2, 0, 0, 1/2).
        let n = 3;
        let layout = SpaceLayout::two_qubits_boson(n);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![Complex64::ZERO; 4 * n];
        amps[0] = c(r, 0.0); // (q=00, n=0)
        amps[3 * n + 1] = c(r, 0.0); // (q=11, n=1)
        let rho = reduced_density_matrix(&StateVector::new(amps), &layout).unwrap();
        let expected = ComplexMatrix::from_real_row_slice(
            4,
            &[
                0.5, 0.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 0.5,
            ],
        );
        assert!(rho.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn bell_state_with_vacuum_has_unit_concurrence() {
        let n = 3;
        let layout = SpaceLayout::two_qubits_boson(n);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![Complex64::ZERO; 4 * n];
        amps[n] = c(r, 0.0); // |01⟩⊗|0⟩
        amps[2 * n] = c(r, 0.0); // |10⟩⊗|0⟩
        let rho = reduced_density_matrix(&StateVector::new(amps), &layout).unwrap();
        assert!(rho.matrix().max_abs_diff(bell_psi_plus().matrix()) < 1e-15);
        assert!((concurrence(&rho).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spin_flip_fixed_points_and_swaps() {
        let quarter = 0.25;
        let mixed = DensityMatrix4::from_matrix(ComplexMatrix::from_real_row_slice(
            4,
            &[
                quarter, 0.0, 0.0, 0.0, //
                0.0, quarter, 0.0, 0.0, //
                0.0, 0.0, quarter, 0.0, //
                0.0, 0.0, 0.0, quarter,
            ],
        ))
        .unwrap();
        assert!(spin_flip(&mixed).matrix().max_abs_diff(mixed.matrix()) < 1e-15);

        let mut p00 = ComplexMatrix::zeros(4);
        p00[(0, 0)] = Complex64::ONE;
        let rho00 = DensityMatrix4::from_matrix(p00).unwrap();
        let flipped = spin_flip(&rho00);
        assert!((flipped.matrix()[(3, 3)].re - 1.0).abs() < 1e-15);
        assert!(flipped.matrix()[(0, 0)].norm() < 1e-15);

        // Direct 4x4 multiplication oracle: Y conj(ρ) Y with explicit Y.
        let bell = bell_psi_plus();
        let y = kron(&pauli_y(), &pauli_y()).unwrap();
        let direct = y
            .matmul(&bell.matrix().conjugate())
            .unwrap()
            .matmul(&y)
            .unwrap();
        assert!(spin_flip(&bell).matrix().max_abs_diff(&direct) < 1e-15);
        assert!(spin_flip(&bell).matrix().max_abs_diff(bell.matrix()) < 1e-15);
    }

    #[test]
    fn concurrence_of_werner_family() {
        // Closed form max(0, (3p-1)/2), recovered numerically.
        for k in 0..=10 {
            let p = k as f64 / 10.0;
            let expected = (0.5 * (3.0 * p - 1.0)).max(0.0);
            let got = concurrence(&werner(p)).unwrap();
            assert!(
                (got - expected).abs() < 1e-10,
                "Werner p = {p}: {got} vs {expected}"
            );
        }
        assert!((concurrence(&werner(0.5)).unwrap() - 0.25).abs() < 1e-10);
        assert!(concurrence(&werner(1.0 / 3.0)).unwrap() < 1e-10);
    }

    #[test]
    fn concurrence_of_product_projectors_is_zero() {
        for q in 0..4 {
            let mut m = ComplexMatrix::zeros(4);
            m[(q, q)] = Complex64::ONE;
            let rho = DensityMatrix4::from_matrix(m).unwrap();
            assert!(concurrence(&rho).unwrap() < 1e-12);
        }
    }

    #[test]
    fn entropy_reference_values() {
        let pure = bell_psi_plus();
        assert!(von_neumann_entropy(&pure).unwrap() < 1e-10);

        let mixed = werner(0.0);
        assert!((von_neumann_entropy(&mixed).unwrap() - 2.0).abs() < 1e-12);

        let half = DensityMatrix4::from_matrix(ComplexMatrix::from_real_row_slice(
            4,
            &[
                0.5, 0.0, 0.0, 0.0, //
                0.0, 0.5, 0.0, 0.0, //
                0.0, 0.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 0.0,
            ],
        ))
        .unwrap();
        assert!((von_neumann_entropy(&half).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn populations_and_photon_cases() {
        let n = 4;
        let layout = SpaceLayout::two_qubits_boson(n);

        let psi = crate::model::build_initial_state(InitialState::ZeroOne, n);
        let (pops, photon) = populations_and_photon(&psi, &layout).unwrap();
        assert_eq!(pops, [0.0, 1.0, 0.0, 0.0]);
        assert_eq!(photon, 0.0);

        let mut amps = vec![Complex64::ZERO; 4 * n];
        amps[2] = Complex64::ONE; // |00⟩⊗|2⟩
        let (_, photon) = populations_and_photon(&StateVector::new(amps), &layout).unwrap();
        assert_eq!(photon, 2.0);

        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![Complex64::ZERO; 4 * n];
        amps[0] = c(r, 0.0); // |00⟩⊗|0⟩
        amps[1] = c(r, 0.0); // |00⟩⊗|1⟩
        let (pops, photon) = populations_and_photon(&StateVector::new(amps), &layout).unwrap();
        assert!((photon - 0.5).abs() < 1e-15);
        assert!((pops[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn fault_injected_spin_flip_breaks_concurrence() {
        // Use (|00⟩ + |11⟩)/√2: its spin flip touches the faulted sign.
        let h = 0.5;
        let bell = DensityMatrix4::from_matrix(ComplexMatrix::from_real_row_slice(
            4,
            &[
                h, 0.0, 0.0, h, //
                0.0, 0.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 0.0, //
                h, 0.0, 0.0, h,
            ],
        ))
        .unwrap();
        let honest = concurrence_impl(&bell, false).unwrap();
        let faulty = concurrence_impl(&bell, true).unwrap();
        assert!((honest - 1.0).abs() < 1e-12);
        assert!((faulty - 1.0).abs() > 1e-3, "fault must be visible");
    }

    #[test]
    fn hermitian_form_matches_char_poly_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let psi = random_pure_composite(4, &mut rng);
            let layout = SpaceLayout::two_qubits_boson(4);
            let rho = reduced_density_matrix(&psi, &layout).unwrap();
            let oracle = lambdas_via_char_poly(&rho);
            let c_oracle = (oracle[0] - oracle[1] - oracle[2] - oracle[3]).clamp(0.0, 1.0);
            let c_impl = concurrence(&rho).unwrap();
            assert!(
                (c_impl - c_oracle).abs() < 1e-8,
                "concurrence mismatch: {c_impl} vs oracle {c_oracle}"
            );
        }
    }

    #[test]
    fn purity_cross_check_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let n = 6;
        let layout = SpaceLayout::two_qubits_boson(n);
        for _ in 0..25 {
            let psi = random_pure_composite(n, &mut rng);
            let rho12 = reduced_density_matrix(&psi, &layout).unwrap();
            let rho_b = reduced_boson_matrix(&psi, &layout).unwrap();
            let s12 = von_neumann_entropy(&rho12).unwrap();
            let sb = matrix_entropy(&rho_b, 2.0).unwrap();
            assert!((s12 - sb).abs() < 1e-8, "S(rho12) = {s12}, S(rho_b) = {sb}");
        }
    }

    #[test]
    fn local_unitaries_leave_concurrence_invariant() {
        // Full-rank reduced states (n_fock >= 4) keep the concurrence
        // eigenvalues away from zero, where sqrt would amplify rounding.
        let mut rng = ChaCha8Rng::seed_from_u64(57);
        let layout = SpaceLayout::two_qubits_boson(6);
        for _ in 0..20 {
            let psi = random_pure_composite(6, &mut rng);
            let rho = reduced_density_matrix(&psi, &layout).unwrap();
            let u1 = random_unitary_2(&mut rng);
            let u2 = random_unitary_2(&mut rng);
            let u = kron(&u1, &u2).unwrap();
            let rotated = u
                .matmul(rho.matrix())
                .unwrap()
                .matmul(&u.adjoint())
                .unwrap();
            let rotated = DensityMatrix4::from_matrix(rotated).unwrap();
            let c0 = concurrence(&rho).unwrap();
            let c1 = concurrence(&rotated).unwrap();
            assert!((c0 - c1).abs() < 1e-10);
        }
    }

    fn random_unitary_2(rng: &mut ChaCha8Rng) -> ComplexMatrix {
        // exp(i h) for a random 2x2 Hermitian h.
        let a = rng.random_range(-1.0..1.0);
        let d = rng.random_range(-1.0..1.0);
        let z = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let h = ComplexMatrix::from_row_slice(2, &[c(a, 0.0), z, z.conj(), c(d, 0.0)]);
        let (eigs, vecs) = hermitian_eigendecompose(&h).unwrap();
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
        u
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn prop_concurrence_bounded_and_trace_preserved(seed in 0u64..10_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.random_range(2usize..8);
            let layout = SpaceLayout::two_qubits_boson(n);
            let psi = random_pure_composite(n, &mut rng);
            let rho = reduced_density_matrix(&psi, &layout).unwrap();
            let c = concurrence(&rho).unwrap();
            prop_assert!((0.0..=1.0).contains(&c));
            let trace = rho.trace();
            prop_assert!((trace - psi.norm().powi(2)).abs() <= 1e-12);
        }
    }
}
