//! Concurrence of the Werner family p|Φ+⟩⟨Φ+| + (1-p)I/4, which has the
//! closed form max(0, (3p-1)/2): separable up to p = 1/3, then linear.
//!
//! ```bash
//! cargo run --release -p qdot-cavity --example concurrence_werner
//! ```

use num_complex::Complex64;
use qdot_cavity::linalg::ComplexMatrix;
use qdot_cavity::observables::{concurrence, von_neumann_entropy, DensityMatrix4};

fn werner(p: f64) -> DensityMatrix4 {
    let q = (1.0 - p) / 4.0;
    let h = p / 2.0;
    let mut m = ComplexMatrix::zeros(4);
    m[(0, 0)] = Complex64::new(h + q, 0.0);
    m[(1, 1)] = Complex64::new(q, 0.0);
    m[(2, 2)] = Complex64::new(q, 0.0);
    m[(3, 3)] = Complex64::new(h + q, 0.0);
    m[(0, 3)] = Complex64::new(h, 0.0);
    m[(3, 0)] = Complex64::new(h, 0.0);
    DensityMatrix4::from_matrix(m).unwrap()
}

fn main() -> Result<(), qdot_cavity::Error> {
    println!("p      C (computed)    C (closed form)  S [bits]");
    for k in 0..=20 {
        let p = k as f64 / 20.0;
        let rho = werner(p);
        let c = concurrence(&rho)?;
        let s = von_neumann_entropy(&rho)?;
        let closed = (0.5 * (3.0 * p - 1.0)).max(0.0);
        println!("{p:4.2}   {c:.12}  {closed:.12}   {s:.6}");
    }
    Ok(())
}
