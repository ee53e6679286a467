//! Purity cross-check along a real evolution: for a globally pure state
//! the two-qubit entropy must equal the boson entropy at every instant,
//! whichever subsystem is traced out.
//!
//! ```bash
//! cargo run --release -p qdot-cavity --example entropy_cross_check
//! ```

use num_complex::Complex64;
use qdot_cavity::model::{
    build_initial_state, build_static_hamiltonian, sigma_z_pair, DriveWaveform, InitialState,
    ModelParams,
};
use qdot_cavity::observables::{
    matrix_entropy, reduced_boson_matrix, reduced_density_matrix, von_neumann_entropy,
};
use qdot_cavity::propagator::{calibrate_step, laguerre_step, PropagatorConfig};

fn main() -> Result<(), qdot_cavity::Error> {
    let p = ModelParams::default();
    let w = DriveWaveform::Cosine {
        amplitude: 0.48,
        period: 4.0,
    };
    let cfg = calibrate_step(&p, &w, &PropagatorConfig::default())?;
    let h0 = build_static_hamiltonian(&p);
    let z = sigma_z_pair(&p);
    let layout = p.layout();

    let mut psi = build_initial_state(InitialState::ZeroOne, p.n_fock);
    let steps = (400.0 / cfg.dt).round() as usize;
    let report_every = steps / 10;

    println!("t        S(rho_12) [bits]   S(rho_boson) [bits]  |diff|");
    let mut worst = 0.0_f64;
    for step in 0..steps {
        let t_mid = (step as f64 + 0.5) * cfg.dt;
        let mut h = h0.clone();
        h.add_scaled(&z, Complex64::new(w.value(t_mid), 0.0))?;
        let (next, _) = laguerre_step(&h, &psi, &cfg)?;
        psi = next;
        if (step + 1) % report_every == 0 {
            let t = (step + 1) as f64 * cfg.dt;
            let s12 = von_neumann_entropy(&reduced_density_matrix(&psi, &layout)?)?;
            let sb = matrix_entropy(&reduced_boson_matrix(&psi, &layout)?, 2.0)?;
            worst = worst.max((s12 - sb).abs());
            println!(
                "{t:6.1}   {s12:.12}     {sb:.12}      {:.2e}",
                (s12 - sb).abs()
            );
        }
    }
    println!("\nworst |S(rho_12) - S(rho_boson)| = {worst:.3e}");
    Ok(())
}
