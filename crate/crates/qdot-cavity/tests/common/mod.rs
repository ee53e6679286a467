//! Shared helpers and independent oracles for the integration suites.

use num_complex::Complex64;
use qdot_cavity::linalg::ComplexMatrix;
use qdot_cavity::observables::DensityMatrix4;

/// Werner state p |Φ+⟩⟨Φ+| + (1-p) I/4.
pub fn werner(p: f64) -> DensityMatrix4 {
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

/// Bell projector (|01⟩ + |10⟩)(⟨01| + ⟨10|)/2.
pub fn bell_psi_plus() -> DensityMatrix4 {
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

/// Product projector |q⟩⟨q| for a two-qubit label q in 0..4.
pub fn product_projector(q: usize) -> DensityMatrix4 {
    let mut m = ComplexMatrix::zeros(4);
    m[(q, q)] = Complex64::ONE;
    DensityMatrix4::from_matrix(m).unwrap()
}

/// Brute-force spectrum of a Hermitian PSD matrix by power iteration with
/// Hotelling deflation. Deliberately shares nothing with the Jacobi
/// eigensolver used by the implementation under test.
pub fn power_iteration_spectrum(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.dim();
    let mut a = m.clone();
    let mut eigenvalues = Vec::with_capacity(n);
    for round in 0..n {
        let mut v: Vec<Complex64> = (0..n)
            .map(|i| {
                Complex64::new(
                    ((i + 3 * round + 1) as f64).sin() + 0.5,
                    ((2 * i + round) as f64).cos(),
                )
            })
            .collect();
        normalize(&mut v);
        let mut lambda = 0.0_f64;
        for _ in 0..4000 {
            let mut w = vec![Complex64::ZERO; n];
            for i in 0..n {
                let mut acc = Complex64::ZERO;
                for j in 0..n {
                    acc += a[(i, j)] * v[j];
                }
                w[i] = acc;
            }
            let wnorm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if wnorm < 1e-300 {
                lambda = 0.0;
                break;
            }
            let rayleigh: Complex64 = v.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
            let next = rayleigh.re;
            for z in &mut w {
                *z /= wnorm;
            }
            let done = (next - lambda).abs() <= 1e-16 * next.abs().max(1.0);
            v = w;
            lambda = next;
            if done {
                break;
            }
        }
        eigenvalues.push(lambda.max(0.0));
        for i in 0..n {
            for j in 0..n {
                let d = lambda * v[i] * v[j].conj();
                let cur = a[(i, j)];
                a[(i, j)] = cur - d;
            }
        }
    }
    eigenvalues.sort_by(|x, y| y.total_cmp(x));
    eigenvalues
}

fn normalize(v: &mut [Complex64]) {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in v {
        *z /= norm;
    }
}
