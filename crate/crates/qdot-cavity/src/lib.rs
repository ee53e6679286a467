//! Entanglement dynamics of two quantum-dot excitons coupled through a
//! single-mode cavity and driven by a periodic field.
//!
//! Two identical two-level excitons sit in separate dots inside one
//! cavity; they never couple directly, only through the boson mode, and a
//! periodic field F(t) modulates their energy bias. Starting from a pure
//! product state, the drive generates and maintains strong two-qubit
//! entanglement, tracked here through the Wootters concurrence and the
//! von Neumann entropy of the reduced two-qubit state.
//!
//! The propagator expands `exp(-iHt)` in Laguerre polynomials of the
//! Hamiltonian evaluated by the three-term recurrence; an exact
//! eigendecomposition stepper serves as the reference everywhere, and a
//! Runge-Kutta benchmark quantifies the performance gap.
//!
//! ## Crate layout
//!
//! - [`linalg`] — dense complex matrices, tensor products, the Jacobi
//!   Hermitian eigensolver and the PSD square root.
//! - [`model`] — Hamiltonian construction, drive waveforms, initial states.
//! - [`propagator`] — Laguerre and oracle steppers, step calibration, the
//!   evolution loop.
//! - [`observables`] — partial traces, concurrence, entropy, populations.
//! - [`analysis`] — envelope peaks and threshold intervals of C(t).
//! - [`config`] — flat key-value run configuration files.
//! - [`output`] — the CSV schema and its re-parser.
//! - [`verify`] — the runnable invariant suite.
//! - [`bench`] — Laguerre vs RK4 timing at matched accuracy.
//!
//! ## Runnable examples
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run --release -p qdot-cavity --example static_spectrum
//! cargo run --release -p qdot-cavity --example drive_waveforms
//! cargo run --release -p qdot-cavity --example calibrate_step
//! cargo run --release -p qdot-cavity --example oracle_vs_laguerre
//! cargo run --release -p qdot-cavity --example concurrence_werner
//! cargo run --release -p qdot-cavity --example entanglement_run
//! cargo run --release -p qdot-cavity --example entropy_cross_check
//! cargo run --release -p qdot-cavity --example benchmark_rk4
//! ```
//!
//! The `qdot-cavity` binary drives full reproduction runs from config
//! files (`run`, `verify`, `benchmark`, `sweep`); see the repository
//! README.

pub mod analysis;
pub mod bench;
pub mod config;
pub mod error;
pub mod linalg;
pub mod model;
pub mod observables;
pub mod output;
pub mod propagator;
pub mod verify;

pub use analysis::{first_envelope_peak, trace_compare, EvolutionTrace, ParamsEcho, PeakReport};
pub use config::{DtSpec, RunConfig};
pub use error::{Error, Result};
pub use linalg::{
    hermitian_eigendecompose, kron, matrix_sqrt_psd, ComplexMatrix, SpaceLayout, StateVector,
};
pub use model::{
    build_initial_state, build_static_hamiltonian, build_total_hamiltonian, DriveWaveform,
    InitialState, ModelParams,
};
pub use num_complex::Complex64;
pub use observables::{
    concurrence, populations_and_photon, reduced_density_matrix, spin_flip, von_neumann_entropy,
    DensityMatrix4, EntanglementSample,
};
pub use propagator::{
    calibrate_step, evolve, laguerre_step, oracle_step, PropagatorConfig, Sampling, StepReport,
    Stepper,
};
