//! Tabulate the three drive waveforms over one period. All are aligned to
//! F(0) = A so cross-waveform comparisons start from the same phase.
//!
//! ```bash
//! cargo run --release -p qdot-cavity --example drive_waveforms
//! ```

use qdot_cavity::model::DriveWaveform;

fn main() {
    let amplitude = 0.48;
    let period = 4.0;
    let waveforms = [
        DriveWaveform::Cosine { amplitude, period },
        DriveWaveform::Rectangular { amplitude, period },
        DriveWaveform::Triangular { amplitude, period },
    ];

    println!("t/P       cosine     rectangular  triangular");
    let steps = 16;
    for k in 0..=steps {
        let t = period * k as f64 / steps as f64;
        print!("{:5.3}  ", t / period);
        for w in &waveforms {
            print!("  {:+9.5}", w.value(t));
        }
        println!();
    }

    println!("\nperiodicity check at t = 123.456:");
    for w in &waveforms {
        let t = 123.456;
        println!(
            "  {:<12} |F(t+P) - F(t)| = {:.2e}",
            w.kind_name(),
            (w.value(t + period) - w.value(t)).abs()
        );
    }
}
