//! Propagate the same driven evolution with the Laguerre expansion and
//! with exact eigendecomposition exponentials, then compare concurrence
//! point by point.
//!
//! ```bash
//! cargo run --release -p qdot-cavity --example oracle_vs_laguerre
//! ```

use qdot_cavity::analysis::trace_compare;
use qdot_cavity::model::{DriveWaveform, InitialState, ModelParams};
use qdot_cavity::propagator::{calibrate_step, evolve, PropagatorConfig, Stepper};

fn main() -> Result<(), qdot_cavity::Error> {
    let p = ModelParams::default();
    let w = DriveWaveform::Cosine {
        amplitude: 0.48,
        period: 4.0,
    };
    let cfg = calibrate_step(&p, &w, &PropagatorConfig::default())?;
    let t_end = 50.0;

    let lag = evolve(
        &p,
        &w,
        InitialState::ZeroOne,
        &cfg,
        t_end,
        5,
        Stepper::Laguerre,
    )?;
    let ora = evolve(
        &p,
        &w,
        InitialState::ZeroOne,
        &cfg,
        t_end,
        5,
        Stepper::Oracle,
    )?;

    println!("t        C (laguerre)     C (oracle)       |diff|");
    for (a, b) in lag.samples().iter().zip(ora.samples()).step_by(10) {
        println!(
            "{:6.1}  {:.12}   {:.12}   {:.2e}",
            a.t,
            a.concurrence,
            b.concurrence,
            (a.concurrence - b.concurrence).abs()
        );
    }
    println!(
        "\nmax pointwise |dC| over [0, {t_end}] = {:.3e}",
        trace_compare(&lag, &ora)?
    );
    Ok(())
}
