//! Model construction: two identical two-level excitons coupled through a
//! single boson mode, with an optional periodic drive on the energy bias.
//!
//! The static part is
//!
//! ```text
//! H0 = Σ_i (-Δ/2 σx_i + ε/2 σz_i) + ω(a†a + 1/2) + g Σ_i (a + a†) σx_i
//! ```
//!
//! and the drive adds `F(t) (σz_1 + σz_2)`. Basis convention: |0⟩ is the
//! σz eigenvector with eigenvalue +1, and composite labels |q1 q2, n⟩
//! follow the factor order [qubit1, qubit2, boson].

use num_complex::Complex64;

use crate::error::Result;
use crate::linalg::{kron, ComplexMatrix, SpaceLayout, StateVector};

/// Static model parameters in the paper's dimensionless units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Energy bias ε (identical for both dots).
    pub epsilon: f64,
    /// Tunneling Δ.
    pub delta: f64,
    /// Boson mode frequency ω.
    pub omega: f64,
    /// Spin-boson coupling g.
    pub g: f64,
    /// Boson Fock-space truncation (number of retained number states).
    pub n_fock: usize,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            epsilon: 0.4,
            delta: 0.4,
            omega: 0.02,
            g: 0.02,
            n_fock: 12,
        }
    }
}

impl ModelParams {
    pub fn layout(&self) -> SpaceLayout {
        SpaceLayout::two_qubits_boson(self.n_fock)
    }

    pub fn total_dim(&self) -> usize {
        4 * self.n_fock
    }

    pub fn is_valid(&self) -> bool {
        self.n_fock >= 2
            && self.epsilon.is_finite()
            && self.delta.is_finite()
            && self.omega.is_finite()
            && self.g.is_finite()
    }
}

/// Periodic drive waveform `F(t)`; all kinds are phase-aligned so that
/// `F(0) = A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DriveWaveform {
    /// No drive, `F(t) = 0`.
    None,
    /// `F(t) = A cos(2πt/P)`.
    Cosine { amplitude: f64, period: f64 },
    /// Zero-mean square wave, 50% duty: `+A` on `[0, P/2)`, `-A` after.
    Rectangular { amplitude: f64, period: f64 },
    /// Zero-mean triangle: `F(0) = A`, `F(P/2) = -A`, `F(P) = A`.
    Triangular { amplitude: f64, period: f64 },
}

impl DriveWaveform {
    /// Evaluate `F(t)`. The argument is reduced modulo the period first so
    /// periodicity holds to rounding of the reduction.
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            DriveWaveform::None => 0.0,
            DriveWaveform::Cosine { amplitude, period } => {
                let tau = t.rem_euclid(period);
                amplitude * (2.0 * std::f64::consts::PI * tau / period).cos()
            }
            DriveWaveform::Rectangular { amplitude, period } => {
                let tau = t.rem_euclid(period);
                if tau < 0.5 * period {
                    amplitude
                } else {
                    -amplitude
                }
            }
            DriveWaveform::Triangular { amplitude, period } => {
                let tau = t.rem_euclid(period);
                if tau <= 0.5 * period {
                    amplitude * (1.0 - 4.0 * tau / period)
                } else {
                    amplitude * (4.0 * tau / period - 3.0)
                }
            }
        }
    }

    pub fn amplitude(&self) -> f64 {
        match *self {
            DriveWaveform::None => 0.0,
            DriveWaveform::Cosine { amplitude, .. }
            | DriveWaveform::Rectangular { amplitude, .. }
            | DriveWaveform::Triangular { amplitude, .. } => amplitude,
        }
    }

    pub fn period(&self) -> Option<f64> {
        match *self {
            DriveWaveform::None => None,
            DriveWaveform::Cosine { period, .. }
            | DriveWaveform::Rectangular { period, .. }
            | DriveWaveform::Triangular { period, .. } => Some(period),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            DriveWaveform::None => "none",
            DriveWaveform::Cosine { .. } => "cosine",
            DriveWaveform::Rectangular { .. } => "rectangular",
            DriveWaveform::Triangular { .. } => "triangular",
        }
    }

    pub fn is_valid(&self) -> bool {
        match *self {
            DriveWaveform::None => true,
            DriveWaveform::Cosine { amplitude, period }
            | DriveWaveform::Rectangular { amplitude, period }
            | DriveWaveform::Triangular { amplitude, period } => {
                amplitude.is_finite() && period.is_finite() && period > 0.0
            }
        }
    }
}

/// Two-qubit product initial state; the boson mode always starts in vacuum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialState {
    ZeroZero,
    ZeroOne,
    OneZero,
    OneOne,
}

impl InitialState {
    /// Index of the two-qubit label in the {|00⟩,|01⟩,|10⟩,|11⟩} ordering.
    pub fn qubit_index(&self) -> usize {
        match self {
            InitialState::ZeroZero => 0,
            InitialState::ZeroOne => 1,
            InitialState::OneZero => 2,
            InitialState::OneOne => 3,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            InitialState::ZeroZero => "00",
            InitialState::ZeroOne => "01",
            InitialState::OneZero => "10",
            InitialState::OneOne => "11",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        match label {
            "00" => Some(InitialState::ZeroZero),
            "01" => Some(InitialState::ZeroOne),
            "10" => Some(InitialState::OneZero),
            "11" => Some(InitialState::OneOne),
            _ => None,
        }
    }
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real_row_slice(2, &[0.0, 1.0, 1.0, 0.0])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(
        2,
        &[
            Complex64::ZERO,
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::ZERO,
        ],
    )
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_row_slice(2, &[1.0, 0.0, 0.0, -1.0])
}

/// Lowering operator `a` on the truncated Fock space: a|n⟩ = √n |n-1⟩.
pub fn ladder_lowering(n_fock: usize) -> ComplexMatrix {
    let mut a = ComplexMatrix::zeros(n_fock);
    for n in 1..n_fock {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// Position-like combination `a + a†`.
pub fn ladder_sum(n_fock: usize) -> ComplexMatrix {
    let a = ladder_lowering(n_fock);
    let mut x = a.adjoint();
    x.add_scaled(&a, Complex64::ONE).expect("same dims");
    x
}

/// Number operator `a†a`.
pub fn number_operator(n_fock: usize) -> ComplexMatrix {
    let mut n = ComplexMatrix::zeros(n_fock);
    for k in 0..n_fock {
        n[(k, k)] = Complex64::new(k as f64, 0.0);
    }
    n
}

fn embed_qubit1(op: &ComplexMatrix, n_fock: usize) -> ComplexMatrix {
    let rest = ComplexMatrix::identity(2 * n_fock);
    kron(op, &rest).expect("embedding within MAX_DIM")
}

fn embed_qubit2(op: &ComplexMatrix, n_fock: usize) -> ComplexMatrix {
    let i2 = ComplexMatrix::identity(2);
    let inner = kron(op, &ComplexMatrix::identity(n_fock)).expect("embedding within MAX_DIM");
    kron(&i2, &inner).expect("embedding within MAX_DIM")
}

fn embed_boson(op: &ComplexMatrix) -> ComplexMatrix {
    let i4 = ComplexMatrix::identity(4);
    kron(&i4, op).expect("embedding within MAX_DIM")
}

/// Embedded `σz_1 + σz_2`; this is the operator the drive couples to.
pub fn sigma_z_pair(p: &ModelParams) -> ComplexMatrix {
    let mut z = embed_qubit1(&pauli_z(), p.n_fock);
    z.add_scaled(&embed_qubit2(&pauli_z(), p.n_fock), Complex64::ONE)
        .expect("same dims");
    z
}

/// Static Hamiltonian `H0` on the composite space, dimension `4 n_fock`.
pub fn build_static_hamiltonian(p: &ModelParams) -> ComplexMatrix {
    assert!(p.is_valid(), "invalid model parameters");
    let n = p.n_fock;

    let mut h = ComplexMatrix::zeros(4 * n);
    let sx1 = embed_qubit1(&pauli_x(), n);
    let sx2 = embed_qubit2(&pauli_x(), n);
    let half_delta = Complex64::new(-0.5 * p.delta, 0.0);
    h.add_scaled(&sx1, half_delta).expect("same dims");
    h.add_scaled(&sx2, half_delta).expect("same dims");

    let half_eps = Complex64::new(0.5 * p.epsilon, 0.0);
    h.add_scaled(&embed_qubit1(&pauli_z(), n), half_eps)
        .expect("same dims");
    h.add_scaled(&embed_qubit2(&pauli_z(), n), half_eps)
        .expect("same dims");

    // ω(a†a + 1/2); the zero-point term only contributes a global phase
    // but is kept for fidelity to the model definition.
    let mut boson = number_operator(n);
    boson
        .add_scaled(&ComplexMatrix::identity(n), Complex64::new(0.5, 0.0))
        .expect("same dims");
    h.add_scaled(&embed_boson(&boson), Complex64::new(p.omega, 0.0))
        .expect("same dims");

    let x = embed_boson(&ladder_sum(n));
    let gx1 = x.matmul(&sx1).expect("same dims");
    let gx2 = x.matmul(&sx2).expect("same dims");
    let g = Complex64::new(p.g, 0.0);
    h.add_scaled(&gx1, g).expect("same dims");
    h.add_scaled(&gx2, g).expect("same dims");
    h
}

/// Total Hamiltonian `H0 + F(t)(σz_1 + σz_2)`.
pub fn build_total_hamiltonian(p: &ModelParams, w: &DriveWaveform, t: f64) -> ComplexMatrix {
    let mut h = build_static_hamiltonian(p);
    let f = w.value(t);
    if f != 0.0 {
        h.add_scaled(&sigma_z_pair(p), Complex64::new(f, 0.0))
            .expect("same dims");
    }
    h
}

/// Normalized product state |q1 q2⟩ ⊗ |n = 0⟩.
pub fn build_initial_state(s: InitialState, n_fock: usize) -> StateVector {
    assert!(n_fock >= 2, "n_fock must be at least 2");
    StateVector::basis(4 * n_fock, s.qubit_index() * n_fock)
}

/// Convenience: commutator `[a, b]`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let mut ab = a.matmul(b)?;
    let ba = b.matmul(a)?;
    ab.add_scaled(&ba, -Complex64::ONE)?;
    Ok(ab)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Independent oracle: assemble H0 entry by entry from the action of
    /// each term on basis states |q1 q2 n⟩, without any kron products.
    fn hand_built_h0(p: &ModelParams) -> ComplexMatrix {
        let n = p.n_fock;
        let dim = 4 * n;
        let idx = |q1: usize, q2: usize, nb: usize| (q1 * 2 + q2) * n + nb;
        let zsign = |q: usize| if q == 0 { 1.0 } else { -1.0 };
        let mut h = ComplexMatrix::zeros(dim);
        for q1 in 0..2 {
            for q2 in 0..2 {
                for nb in 0..n {
                    let col = idx(q1, q2, nb);
                    // Diagonal: bias + boson energy.
                    let diag =
                        0.5 * p.epsilon * (zsign(q1) + zsign(q2)) + p.omega * (nb as f64 + 0.5);
                    h[(col, col)] += Complex64::new(diag, 0.0);
                    // Tunneling flips one qubit, boson untouched.
                    h[(idx(1 - q1, q2, nb), col)] += Complex64::new(-0.5 * p.delta, 0.0);
                    h[(idx(q1, 1 - q2, nb), col)] += Complex64::new(-0.5 * p.delta, 0.0);
                    // Coupling flips one qubit and moves the boson by one.
                    if nb + 1 < n {
                        let amp = p.g * ((nb + 1) as f64).sqrt();
                        h[(idx(1 - q1, q2, nb + 1), col)] += Complex64::new(amp, 0.0);
                        h[(idx(q1, 1 - q2, nb + 1), col)] += Complex64::new(amp, 0.0);
                    }
                    if nb > 0 {
                        let amp = p.g * (nb as f64).sqrt();
                        h[(idx(1 - q1, q2, nb - 1), col)] += Complex64::new(amp, 0.0);
                        h[(idx(q1, 1 - q2, nb - 1), col)] += Complex64::new(amp, 0.0);
                    }
                }
            }
        }
        h
    }

    #[test]
    fn static_hamiltonian_matches_hand_built_oracle() {
        let p = ModelParams {
            n_fock: 3,
            ..ModelParams::default()
        };
        let h = build_static_hamiltonian(&p);
        let oracle = hand_built_h0(&p);
        assert_eq!(h.dim(), 12);
        assert!(h.max_abs_diff(&oracle) < 1e-15);
        // ⟨00,0|H0|00,0⟩ = ε/2 + ε/2 + ω/2 = 0.41 at paper defaults.
        assert!((h[(0, 0)].re - 0.41).abs() < 1e-15);
        // ⟨01,1| g(a+a†)σx_2 |00,0⟩ = g; flat index of (q1=0, q2=1, n=1).
        let row = 4;
        assert!((h[(row, 0)].re - 0.02).abs() < 1e-15);
        assert_eq!(h[(row, 0)].im, 0.0);
    }

    #[test]
    fn static_hamiltonian_is_diagonal_without_generators() {
        let p = ModelParams {
            delta: 0.0,
            g: 0.0,
            n_fock: 4,
            ..ModelParams::default()
        };
        let h = build_static_hamiltonian(&p);
        for i in 0..h.dim() {
            for j in 0..h.dim() {
                if i != j {
                    assert_eq!(h[(i, j)], Complex64::ZERO);
                }
            }
        }
    }

    #[test]
    fn drive_values_match_conventions() {
        let cos = DriveWaveform::Cosine {
            amplitude: 0.48,
            period: 4.0,
        };
        assert_eq!(cos.value(0.0), 0.48);
        assert!(cos.value(1.0).abs() < 1e-15); // t = P/4

        let tri = DriveWaveform::Triangular {
            amplitude: 0.48,
            period: 4.0,
        };
        assert_eq!(tri.value(0.0), 0.48);
        assert_eq!(tri.value(1.0), 0.0);
        assert_eq!(tri.value(2.0), -0.48);

        let rect = DriveWaveform::Rectangular {
            amplitude: 0.48,
            period: 4.0,
        };
        assert_eq!(rect.value(0.49 * 4.0), 0.48);
        assert_eq!(rect.value(0.51 * 4.0), -0.48);

        assert_eq!(DriveWaveform::None.value(123.0), 0.0);
    }

    #[test]
    fn total_hamiltonian_reduces_to_static() {
        let p = ModelParams {
            n_fock: 3,
            ..ModelParams::default()
        };
        let h0 = build_static_hamiltonian(&p);
        let none = build_total_hamiltonian(&p, &DriveWaveform::None, 17.0);
        assert_eq!(h0.max_abs_diff(&none), 0.0);

        let cos = DriveWaveform::Cosine {
            amplitude: 0.48,
            period: 4.0,
        };
        let at_quarter = build_total_hamiltonian(&p, &cos, 1.0);
        assert!(at_quarter.max_abs_diff(&h0) < 1e-15);
    }

    #[test]
    fn drive_shifts_diagonal_by_twice_f() {
        // σz_1 + σz_2 has eigenvalue +2 on |00⟩.
        let p = ModelParams {
            n_fock: 3,
            ..ModelParams::default()
        };
        let cos = DriveWaveform::Cosine {
            amplitude: 0.48,
            period: 4.0,
        };
        let t = 0.3;
        let h0 = build_static_hamiltonian(&p);
        let ht = build_total_hamiltonian(&p, &cos, t);
        let shift = (ht[(0, 0)] - h0[(0, 0)]).re;
        assert!((shift - 2.0 * cos.value(t)).abs() < 1e-14);
    }

    #[test]
    fn initial_states_are_normalized_product_states() {
        let psi = build_initial_state(InitialState::ZeroOne, 3);
        // Flat index of multi-index (0, 1, 0).
        assert_eq!(psi.amplitudes()[3], Complex64::ONE);
        assert!((psi.norm() - 1.0).abs() < 1e-15);
        for s in [
            InitialState::ZeroZero,
            InitialState::ZeroOne,
            InitialState::OneZero,
            InitialState::OneOne,
        ] {
            let v = build_initial_state(s, 5);
            assert!((v.norm() - 1.0).abs() < 1e-15);
            assert_eq!(v.amplitudes()[s.qubit_index() * 5], Complex64::ONE);
        }
    }

    #[test]
    fn hamiltonians_are_exactly_hermitian() {
        let p = ModelParams::default();
        let waveforms = [
            DriveWaveform::None,
            DriveWaveform::Cosine {
                amplitude: 0.48,
                period: 4.0,
            },
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
            for &t in &[0.0, 0.37, 1.0, 2.5, 1000.0] {
                let h = build_total_hamiltonian(&p, w, t);
                assert_eq!(h.hermiticity_violation(), 0.0);
            }
        }
    }

    #[test]
    fn periodic_waveforms_repeat_and_stay_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let waveforms = [
            DriveWaveform::Cosine {
                amplitude: 0.48,
                period: 4.0,
            },
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
            let p = w.period().unwrap();
            for _ in 0..1000 {
                let t: f64 = rng.random_range(0.0..10.0 * p);
                assert!(
                    (w.value(t + p) - w.value(t)).abs() <= 1e-14,
                    "periodicity violated for {} at t = {t}",
                    w.kind_name()
                );
                assert!(w.value(t).abs() <= w.amplitude() + 1e-14);
            }
        }
    }

    #[test]
    fn boson_number_conserved_without_coupling() {
        let p = ModelParams {
            g: 0.0,
            n_fock: 4,
            ..ModelParams::default()
        };
        let cos = DriveWaveform::Cosine {
            amplitude: 0.48,
            period: 4.0,
        };
        let nb = embed_boson(&number_operator(p.n_fock));
        for &t in &[0.0, 0.3, 1.7] {
            let h = build_total_hamiltonian(&p, &cos, t);
            let comm = commutator(&h, &nb).unwrap();
            assert!(comm.max_abs() <= 1e-12);
        }
    }
}
