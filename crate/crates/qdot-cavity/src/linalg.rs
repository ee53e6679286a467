//! Dense complex linear algebra for the composite Hilbert space.
//!
//! Everything here is sized for the problem at hand: the full space is
//! qubit ⊗ qubit ⊗ truncated boson, so dimensions stay around 4·N ≲ 128 and
//! dense row-major storage plus a Jacobi eigensolver beat any sparse or
//! blocked machinery.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute tolerance for Hermiticity checks on O(1)-norm matrices.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Eigenvalues above `-PSD_TOL` are clamped to zero; below is an error.
pub const PSD_TOL: f64 = 1e-10;

/// Hard cap on dense dimensions produced by tensor products.
pub const MAX_DIM: usize = 4096;

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![Complex64::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    /// Build from a row-major slice of `dim * dim` entries.
    pub fn from_row_slice(dim: usize, entries: &[Complex64]) -> Self {
        assert_eq!(entries.len(), dim * dim, "entry count must be dim^2");
        Self {
            dim,
            data: entries.to_vec(),
        }
    }

    /// Build from real row-major entries (imaginary parts zero).
    pub fn from_real_row_slice(dim: usize, entries: &[f64]) -> Self {
        assert_eq!(entries.len(), dim * dim, "entry count must be dim^2");
        Self {
            dim,
            data: entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conjugate(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Matrix product `self * rhs`.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                context: "matmul",
                expected: self.dim,
                actual: rhs.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::ZERO {
                    continue;
                }
                let rrow = &rhs.data[k * n..(k + 1) * n];
                let orow = &mut out.data[i * n..(i + 1) * n];
                for (o, r) in orow.iter_mut().zip(rrow) {
                    *o += a * r;
                }
            }
        }
        Ok(out)
    }

    /// In-place `self += factor * rhs`.
    pub fn add_scaled(&mut self, rhs: &Self, factor: Complex64) -> Result<()> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                context: "add_scaled",
                expected: self.dim,
                actual: rhs.dim,
            });
        }
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += factor * b;
        }
        Ok(())
    }

    /// Largest entrywise deviation from Hermitian symmetry, max|M - M†|.
    pub fn hermiticity_violation(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// max_ij |a_ij - b_ij|.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff dims must match");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Checked matrix-vector product.
    pub fn matvec(&self, v: &StateVector) -> Result<StateVector> {
        if self.dim != v.dim() {
            return Err(Error::DimensionMismatch {
                context: "matvec",
                expected: self.dim,
                actual: v.dim(),
            });
        }
        let mut out = vec![Complex64::ZERO; self.dim];
        self.matvec_into(v.amplitudes(), &mut out);
        Ok(StateVector::new(out))
    }

    /// `out = M v` on raw slices (hot path, unchecked lengths).
    pub(crate) fn matvec_into(&self, v: &[Complex64], out: &mut [Complex64]) {
        for (row, o) in self.data.chunks_exact(self.dim).zip(out.iter_mut()) {
            let mut acc = Complex64::ZERO;
            for (m, x) in row.iter().zip(v) {
                acc += m * x;
            }
            *o = acc;
        }
    }

    /// `out = M† v` on raw slices.
    pub(crate) fn matvec_adjoint_into(&self, v: &[Complex64], out: &mut [Complex64]) {
        out.fill(Complex64::ZERO);
        for (row, x) in self.data.chunks_exact(self.dim).zip(v) {
            for (o, m) in out.iter_mut().zip(row) {
                *o += m.conj() * x;
            }
        }
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Complex amplitude vector over the composite Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Self {
        assert!(!amplitudes.is_empty(), "state vector must be non-empty");
        Self { amplitudes }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![Complex64::ZERO; dim])
    }

    /// Basis vector |index⟩.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index out of range");
        let mut v = Self::zeros(dim);
        v.amplitudes[index] = Complex64::ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Inner product ⟨self|other⟩ (conjugate-linear in `self`).
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scale(&mut self, factor: Complex64) {
        for z in &mut self.amplitudes {
            *z *= factor;
        }
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, other: &Self, factor: Complex64) {
        for (a, b) in self.amplitudes.iter_mut().zip(&other.amplitudes) {
            *a += factor * b;
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.amplitudes
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// Ordered factorization of the composite space, here [2, 2, N_fock].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceLayout {
    factor_dims: Vec<usize>,
}

impl SpaceLayout {
    pub fn new(factor_dims: Vec<usize>) -> Self {
        assert!(
            factor_dims.iter().all(|&d| d > 0),
            "factor dimensions must be positive"
        );
        Self { factor_dims }
    }

    /// Layout [qubit1, qubit2, boson] used throughout the simulation.
    pub fn two_qubits_boson(n_fock: usize) -> Self {
        Self::new(vec![2, 2, n_fock])
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn total_dim(&self) -> usize {
        self.factor_dims.iter().product()
    }

    /// Multi-index -> flat index, last factor fastest.
    pub fn flatten(&self, multi: &[usize]) -> usize {
        assert_eq!(multi.len(), self.factor_dims.len());
        let mut flat = 0;
        for (&idx, &d) in multi.iter().zip(&self.factor_dims) {
            debug_assert!(idx < d, "multi-index out of range");
            flat = flat * d + idx;
        }
        flat
    }

    /// Flat index -> multi-index; inverse of [`flatten`](Self::flatten).
    pub fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let mut multi = vec![0; self.factor_dims.len()];
        for (slot, &d) in multi.iter_mut().zip(&self.factor_dims).rev() {
            *slot = flat % d;
            flat /= d;
        }
        multi
    }
}

/// Kronecker product a ⊗ b.
///
/// Entry ((i·bdim + k), (j·bdim + l)) = a(i,j) · b(k,l).
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dim = a
        .dim()
        .checked_mul(b.dim())
        .filter(|&d| d <= MAX_DIM)
        .ok_or(Error::DimensionTooLarge {
            dim: a.dim().saturating_mul(b.dim()),
            max: MAX_DIM,
        })?;
    let (na, nb) = (a.dim(), b.dim());
    let mut out = ComplexMatrix::zeros(dim);
    for i in 0..na {
        for j in 0..na {
            let aij = a[(i, j)];
            if aij == Complex64::ZERO {
                continue;
            }
            for k in 0..nb {
                for l in 0..nb {
                    out[(i * nb + k, j * nb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in ascending order and the unitary matrix whose
/// columns are the matching eigenvectors, so `m = V diag(λ) V†`.
///
/// Errors if the input deviates from Hermitian symmetry by more than
/// [`HERMITICITY_TOL`].
pub fn hermitian_eigendecompose(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let violation = m.hermiticity_violation();
    if violation > HERMITICITY_TOL {
        return Err(Error::NotHermitian {
            violation,
            tolerance: HERMITICITY_TOL,
        });
    }
    let n = m.dim();
    let mut a = m.clone();
    // Symmetrize exactly so rounding in the input cannot bias the sweep.
    for i in 0..n {
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = 0.5 * (a[(i, j)] + a[(j, i)].conj());
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);

    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    let stop = 1e-15 * scale;
    const MAX_SWEEPS: usize = 64;

    for _sweep in 0..MAX_SWEEPS {
        let mut largest_off = 0.0_f64;
        for p in 0..n {
            for q in (p + 1)..n {
                largest_off = largest_off.max(a[(p, q)].norm());
            }
        }
        if largest_off <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let beta = a[(p, q)];
                let absb = beta.norm();
                if absb <= stop * 1e-2 {
                    continue;
                }
                let alpha = a[(p, p)].re;
                let gamma = a[(q, q)].re;
                let phase = beta / absb;
                let tau = (gamma - alpha) / (2.0 * absb);
                // Smaller root of t^2 + 2 tau t - 1 = 0, stable form.
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = phase * (t * c);

                // A <- J† A J with J = [[c, s], [-s̄, c]] in the (p, q) plane.
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    let new_kp = c * akp - s.conj() * akq;
                    let new_kq = s * akp + c * akq;
                    a[(k, p)] = new_kp;
                    a[(k, q)] = new_kq;
                    a[(p, k)] = new_kp.conj();
                    a[(q, k)] = new_kq.conj();
                }
                a[(p, p)] = Complex64::new(alpha - t * absb, 0.0);
                a[(q, q)] = Complex64::new(gamma + t * absb, 0.0);
                a[(p, q)] = Complex64::ZERO;
                a[(q, p)] = Complex64::ZERO;

                // Accumulate eigenvectors: V <- V J.
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s.conj() * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, col)] = v[(row, src)];
        }
    }
    Ok((eigenvalues, vectors))
}

/// Principal square root of a Hermitian positive-semidefinite matrix.
///
/// Eigenvalues in `[-PSD_TOL, 0)` are clamped to zero; anything more
/// negative is a positivity error.
pub fn matrix_sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (eigenvalues, vectors) = hermitian_eigendecompose(m)?;
    if let Some(&lo) = eigenvalues.first() {
        if lo < -PSD_TOL {
            return Err(Error::NotPositive { eigenvalue: lo });
        }
    }
    let roots: Vec<f64> = eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let n = m.dim();
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..n {
        for k in i..n {
            let mut acc = Complex64::ZERO;
            for (j, &r) in roots.iter().enumerate() {
                acc += vectors[(i, j)] * r * vectors[(k, j)].conj();
            }
            out[(i, k)] = acc;
            if k != i {
                out[(k, i)] = acc.conj();
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::from_real_row_slice(2, &[0.0, 1.0, 1.0, 0.0])
    }

    fn sigma_z() -> ComplexMatrix {
        ComplexMatrix::from_real_row_slice(2, &[1.0, 0.0, 0.0, -1.0])
    }

    fn random_hermitian(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = c(rng.random_range(-1.0..1.0), 0.0);
            for j in (i + 1)..dim {
                let z = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    #[test]
    fn kron_identities() {
        let i2 = ComplexMatrix::identity(2);
        let i4 = kron(&i2, &i2).unwrap();
        assert_eq!(i4, ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_sigma_z_with_identity_is_diagonal() {
        let m = kron(&sigma_z(), &ComplexMatrix::identity(2)).unwrap();
        let expected = ComplexMatrix::from_real_row_slice(
            4,
            &[
                1.0, 0.0, 0.0, 0.0, //
                0.0, 1.0, 0.0, 0.0, //
                0.0, 0.0, -1.0, 0.0, //
                0.0, 0.0, 0.0, -1.0,
            ],
        );
        assert!(m.max_abs_diff(&expected) == 0.0);
    }

    #[test]
    fn kron_sigma_x_pair_flips_both_qubits() {
        // Hand expansion of the 4x4 product matrix: sx ⊗ sx is the
        // antidiagonal of ones, so it maps |00⟩ -> |11⟩.
        let m = kron(&sigma_x(), &sigma_x()).unwrap();
        let v = m.matvec(&StateVector::basis(4, 0)).unwrap();
        assert_eq!(v.amplitudes()[3], Complex64::ONE);
        assert!((v.norm() - 1.0).abs() < 1e-15);
        assert_eq!(v.amplitudes()[0], Complex64::ZERO);
    }

    #[test]
    fn kron_rejects_oversized_product() {
        let a = ComplexMatrix::identity(MAX_DIM / 2 + 1);
        let b = ComplexMatrix::identity(2);
        assert!(matches!(kron(&a, &b), Err(Error::DimensionTooLarge { .. })));
    }

    #[test]
    fn eigendecompose_sigma_z() {
        let (vals, _) = hermitian_eigendecompose(&sigma_z()).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14);
        assert!((vals[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigendecompose_sigma_x() {
        let (vals, vecs) = hermitian_eigendecompose(&sigma_x()).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14);
        assert!((vals[1] - 1.0).abs() < 1e-14);
        // Eigenvectors are (|0⟩ ∓ |1⟩)/√2 up to phase.
        let minus = StateVector::new(vec![vecs[(0, 0)], vecs[(1, 0)]]);
        let plus = StateVector::new(vec![vecs[(0, 1)], vecs[(1, 1)]]);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let expected_minus = StateVector::new(vec![c(r, 0.0), c(-r, 0.0)]);
        let expected_plus = StateVector::new(vec![c(r, 0.0), c(r, 0.0)]);
        assert!((minus.inner(&expected_minus).norm() - 1.0).abs() < 1e-12);
        assert!((plus.inner(&expected_plus).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigendecompose_reconstructs_random_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &dim in &[2usize, 3, 8, 16, 48, 128] {
            let m = random_hermitian(dim, &mut rng);
            let (vals, vecs) = hermitian_eigendecompose(&m).unwrap();
            // Reconstruction residual is its own oracle.
            let mut recon = ComplexMatrix::zeros(dim);
            for i in 0..dim {
                for j in 0..dim {
                    let mut acc = Complex64::ZERO;
                    for (k, &l) in vals.iter().enumerate() {
                        acc += vecs[(i, k)] * l * vecs[(j, k)].conj();
                    }
                    recon[(i, j)] = acc;
                }
            }
            assert!(
                recon.max_abs_diff(&m) < 1e-10,
                "reconstruction residual too large at dim {dim}"
            );
            // V unitary within 1e-10.
            let gram = vecs.adjoint().matmul(&vecs).unwrap();
            assert!(gram.max_abs_diff(&ComplexMatrix::identity(dim)) < 1e-10);
            // Ascending order.
            assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn eigendecompose_rejects_non_hermitian() {
        let m =
            ComplexMatrix::from_row_slice(2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.0), c(0.0, 0.0)]);
        assert!(matches!(
            hermitian_eigendecompose(&m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn matvec_identity_and_sigma_x() {
        let v = StateVector::new(vec![c(0.3, 0.1), c(-0.2, 0.7)]);
        let iv = ComplexMatrix::identity(2).matvec(&v).unwrap();
        assert!(iv.max_abs_diff(&v) == 0.0);

        let flipped = sigma_x().matvec(&StateVector::basis(2, 0)).unwrap();
        assert_eq!(flipped.amplitudes()[1], Complex64::ONE);
    }

    #[test]
    fn matvec_ladder_operator_on_vacuum() {
        // (a + a†) built by hand for N_fock = 3: entries √(n+1) on the
        // super/sub diagonal.
        let r2 = 2.0_f64.sqrt();
        let x = ComplexMatrix::from_real_row_slice(
            3,
            &[
                0.0, 1.0, 0.0, //
                1.0, 0.0, r2, //
                0.0, r2, 0.0,
            ],
        );
        let out = x.matvec(&StateVector::basis(3, 0)).unwrap();
        assert_eq!(out.amplitudes()[1], Complex64::ONE);
        assert_eq!(out.amplitudes()[0], Complex64::ZERO);
        assert_eq!(out.amplitudes()[2], Complex64::ZERO);
    }

    #[test]
    fn matvec_rejects_dimension_mismatch() {
        let v = StateVector::basis(3, 0);
        assert!(matches!(
            ComplexMatrix::identity(2).matvec(&v),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn sqrt_of_identity_and_diagonal() {
        let i2 = ComplexMatrix::identity(2);
        assert!(matrix_sqrt_psd(&i2).unwrap().max_abs_diff(&i2) < 1e-14);

        let d = ComplexMatrix::from_real_row_slice(2, &[4.0, 0.0, 0.0, 9.0]);
        let expected = ComplexMatrix::from_real_row_slice(2, &[2.0, 0.0, 0.0, 3.0]);
        assert!(matrix_sqrt_psd(&d).unwrap().max_abs_diff(&expected) < 1e-13);
    }

    #[test]
    fn sqrt_of_bell_projector_is_itself() {
        // Projector P = |Ψ⟩⟨Ψ| with |Ψ⟩ = (|01⟩ + |10⟩)/√2 satisfies P² = P.
        let h = 0.5;
        let p = ComplexMatrix::from_real_row_slice(
            4,
            &[
                0.0, 0.0, 0.0, 0.0, //
                0.0, h, h, 0.0, //
                0.0, h, h, 0.0, //
                0.0, 0.0, 0.0, 0.0,
            ],
        );
        let r = matrix_sqrt_psd(&p).unwrap();
        assert!(r.max_abs_diff(&p) < 1e-12);
        let rr = r.matmul(&r).unwrap();
        assert!(rr.max_abs_diff(&p) < 1e-9);
    }

    #[test]
    fn sqrt_rejects_indefinite_matrix() {
        let m = ComplexMatrix::from_real_row_slice(2, &[1.0, 0.0, 0.0, -0.5]);
        assert!(matches!(
            matrix_sqrt_psd(&m),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn layout_flatten_unflatten_roundtrip() {
        let layout = SpaceLayout::two_qubits_boson(12);
        assert_eq!(layout.total_dim(), 48);
        for flat in 0..layout.total_dim() {
            let multi = layout.unflatten(flat);
            assert_eq!(layout.flatten(&multi), flat);
        }
        assert_eq!(layout.flatten(&[0, 1, 0]), 12);
    }

    proptest! {
        #[test]
        fn prop_kron_associative(seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_hermitian(2, &mut rng);
            let b = random_hermitian(3, &mut rng);
            let c = random_hermitian(2, &mut rng);
            let left = kron(&kron(&a, &b).unwrap(), &c).unwrap();
            let right = kron(&a, &kron(&b, &c).unwrap()).unwrap();
            prop_assert!(left.max_abs_diff(&right) <= 1e-14);
        }

        #[test]
        fn prop_matvec_linear(seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
            let m = random_hermitian(6, &mut rng);
            let u = StateVector::new((0..6).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect());
            let v = StateVector::new((0..6).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect());
            let alpha = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let beta = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let mut combo = StateVector::zeros(6);
            combo.add_scaled(&u, alpha);
            combo.add_scaled(&v, beta);
            let lhs = m.matvec(&combo).unwrap();
            let mut rhs = StateVector::zeros(6);
            rhs.add_scaled(&m.matvec(&u).unwrap(), alpha);
            rhs.add_scaled(&m.matvec(&v).unwrap(), beta);
            prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
        }

        #[test]
        fn prop_layout_roundtrip(n_fock in 2usize..32, flat_frac in 0.0f64..1.0) {
            let layout = SpaceLayout::two_qubits_boson(n_fock);
            let flat = ((layout.total_dim() - 1) as f64 * flat_frac) as usize;
            prop_assert_eq!(layout.flatten(&layout.unflatten(flat)), flat);
        }
    }
}
