//! Build the static Hamiltonian at the reference parameters and inspect
//! its spectrum: the window that the propagator normalizes against.
//!
//! ```bash
//! cargo run --release -p qdot-cavity --example static_spectrum
//! ```

use qdot_cavity::linalg::hermitian_eigendecompose;
use qdot_cavity::model::{
    build_static_hamiltonian, build_total_hamiltonian, DriveWaveform, ModelParams,
};

fn main() -> Result<(), qdot_cavity::Error> {
    let p = ModelParams::default();
    let h0 = build_static_hamiltonian(&p);
    println!(
        "H0 at defaults: dim = {}, hermiticity violation = {:.1e}",
        h0.dim(),
        h0.hermiticity_violation()
    );
    println!("<00,0|H0|00,0> = {:.4} (bias + zero point)", h0[(0, 0)].re);

    let (eigs, _) = hermitian_eigendecompose(&h0)?;
    println!("\nlowest eigenvalues:");
    for (k, l) in eigs.iter().take(8).enumerate() {
        println!("  E{k} = {l:+.6}");
    }
    println!("  ...");
    println!(
        "spectral range: [{:+.6}, {:+.6}]",
        eigs.first().unwrap(),
        eigs.last().unwrap()
    );

    // The drive widens the window; the propagator calibrates against the
    // maximum-field Hamiltonian.
    let cosine = DriveWaveform::Cosine {
        amplitude: 0.48,
        period: 4.0,
    };
    let h_max = build_total_hamiltonian(&p, &cosine, 0.0);
    let (eigs_max, _) = hermitian_eigendecompose(&h_max)?;
    println!(
        "with F = A:     [{:+.6}, {:+.6}]",
        eigs_max.first().unwrap(),
        eigs_max.last().unwrap()
    );
    Ok(())
}
