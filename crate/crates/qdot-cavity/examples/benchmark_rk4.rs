//! Wall-time comparison: Laguerre expansion vs classical RK4, both
//! advancing the same piecewise-frozen evolution to the same end-state
//! accuracy against the exact oracle.
//!
//! ```bash
//! cargo run --release -p qdot-cavity --example benchmark_rk4
//! ```

use qdot_cavity::bench::run_benchmark;
use qdot_cavity::model::{DriveWaveform, InitialState, ModelParams};
use qdot_cavity::propagator::PropagatorConfig;

fn main() -> Result<(), qdot_cavity::Error> {
    let report = run_benchmark(
        &ModelParams::default(),
        &DriveWaveform::Cosine {
            amplitude: 0.48,
            period: 4.0,
        },
        &PropagatorConfig::default(),
        InitialState::ZeroOne,
    )?;
    println!("{report}");
    Ok(())
}
