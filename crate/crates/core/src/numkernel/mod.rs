//! Dense complex linear algebra and the validated value types the rest of the
//! crate is built on.
//!
//! Everything here is a pure function of its inputs. Matrices are stored in
//! `nalgebra` column-major storage but all constructors that take flat data
//! expect row-major order.

mod eig;
mod svd;

use std::ops::Deref;

use nalgebra::{DMatrix, DVector};
pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub use crate::random::random_density;
pub use eig::{hermitian_eig, hermitian_eig_with_tol};
pub(crate) use svd::jacobi_svd;

/// Per-call numerical tolerances.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    pub herm: f64,
    pub trace: f64,
    pub psd: f64,
    pub orth: f64,
    pub norm: f64,
    pub recon: f64,
    pub major: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            herm: 1e-9,
            trace: 1e-9,
            psd: 1e-9,
            orth: 1e-9,
            norm: 1e-9,
            recon: 1e-8,
            major: 1e-9,
        }
    }
}

/// Components below this magnitude are treated as zero when fixing phases.
pub(crate) const PHASE_EPS: f64 = 1e-10;
/// Norm, trace and eigenvalue deviations this small are left uncorrected so
/// that already-normalized values survive a serialization round trip
/// bit-for-bit.
pub(crate) const ROUNDOFF: f64 = 64.0 * f64::EPSILON;

/// `v / norm`, or `v` untouched when `norm` is one up to roundoff.
pub(crate) fn rescale<R: nalgebra::Dim, C: nalgebra::Dim>(
    v: nalgebra::OMatrix<C64, R, C>,
    norm: f64,
) -> nalgebra::OMatrix<C64, R, C>
where
    nalgebra::DefaultAllocator: nalgebra::allocator::Allocator<R, C>,
{
    if (norm - 1.0).abs() <= ROUNDOFF {
        v
    } else {
        v / C64::new(norm, 0.0)
    }
}

/// Dense complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(pub(crate) DMatrix<C64>);

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Self::from_dmatrix(DMatrix::from_row_slice(rows, cols, &entries))
    }

    pub fn from_dmatrix(m: DMatrix<C64>) -> Result<Self> {
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                let z = m[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(ComplexMatrix(m))
    }

    /// Real matrix given row-major.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidArgument("ragged rows".into()));
        }
        let entries = rows.iter().flatten().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_row_major(r, c, entries)
    }

    pub fn identity(n: usize) -> Self {
        ComplexMatrix(DMatrix::identity(n, n))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix(DMatrix::zeros(rows, cols))
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        ComplexMatrix(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(values[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<C64> {
        self.0
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> Vec<C64> {
        let (r, c) = self.shape();
        let mut out = Vec::with_capacity(r * c);
        for i in 0..r {
            for j in 0..c {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        ComplexMatrix(self.0.adjoint())
    }

    pub fn mul(&self, other: &ComplexMatrix) -> Result<Self> {
        if self.cols() != other.rows() {
            return Err(Error::ShapeMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(ComplexMatrix(&self.0 * &other.0))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// max |M_ij - conj(M_ji)|, or `None` if the matrix is not square.
    pub fn hermitian_deviation(&self) -> Option<f64> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        Some(worst)
    }

    /// ||U^dag U - I||_F, or `None` if the matrix is not square.
    pub fn unitarity_deviation(&self) -> Option<f64> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows();
        let g = self.0.adjoint() * &self.0 - DMatrix::<C64>::identity(n, n);
        Some(g.norm())
    }

    pub fn check_unitary(&self, tol: f64) -> Result<()> {
        let dev = self.unitarity_deviation().ok_or(Error::NotSquare {
            rows: self.rows(),
            cols: self.cols(),
        })?;
        if dev > tol {
            return Err(Error::NotUnitary {
                deviation: dev,
                tol,
            });
        }
        Ok(())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn column(&self, j: usize) -> DVector<C64> {
        self.0.column(j).into_owned()
    }

    pub fn apply(&self, v: &DVector<C64>) -> Result<DVector<C64>> {
        if v.len() != self.cols() {
            return Err(Error::ShapeMismatch {
                left: self.shape(),
                right: (v.len(), 1),
            });
        }
        Ok(&self.0 * v)
    }
}

impl Deref for ComplexMatrix {
    type Target = DMatrix<C64>;

    fn deref(&self) -> &DMatrix<C64> {
        &self.0
    }
}

/// ||A - B||_F.
pub fn frobenius_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch {
            left: a.shape(),
            right: b.shape(),
        });
    }
    Ok((&a.0 - &b.0).norm())
}

/// Multiplies `v` by the phase that makes its first component with magnitude
/// above `PHASE_EPS` real and positive.
pub(crate) fn fix_phase_first_nonzero(v: &mut DVector<C64>) {
    if let Some(z) = v.iter().copied().find(|z| z.norm() > PHASE_EPS) {
        let phase = z.conj() / z.norm();
        v.iter_mut().for_each(|x| *x *= phase);
    }
}

/// Multiplies `v` by the phase that makes its largest-magnitude component
/// (the first one on ties) real and positive.
pub(crate) fn fix_phase_largest(v: &mut [C64]) {
    let mut best: Option<C64> = None;
    for &z in v.iter() {
        if best.is_none_or(|b| z.norm() > b.norm()) {
            best = Some(z);
        }
    }
    if let Some(z) = best.filter(|z| z.norm() > 0.0) {
        let phase = z.conj() / z.norm();
        v.iter_mut().for_each(|x| *x *= phase);
    }
}

/// A unit-norm pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(pub(crate) DVector<C64>);

impl StateVector {
    /// Checks the norm is within `tol` of one, then renormalizes.
    pub fn new(amplitudes: Vec<C64>, tol: f64) -> Result<Self> {
        Self::from_dvector(DVector::from_vec(amplitudes), tol)
    }

    pub fn from_dvector(v: DVector<C64>, tol: f64) -> Result<Self> {
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument(
                "state has non-finite amplitude".into(),
            ));
        }
        let norm = v.norm();
        if (norm - 1.0).abs() > tol {
            return Err(Error::BadNorm { norm, tol });
        }
        Ok(StateVector(rescale(v, norm)))
    }

    /// Normalizes `v`; fails on the zero vector.
    pub fn normalized(v: DVector<C64>) -> Result<Self> {
        let norm = v.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::BadNorm { norm, tol: 0.0 });
        }
        Ok(StateVector(v / C64::new(norm, 0.0)))
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = DVector::zeros(dim);
        v[index] = C64::new(1.0, 0.0);
        StateVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.0
    }

    pub fn into_dvector(self) -> DVector<C64> {
        self.0
    }

    /// <self|other>
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.0.dotc(&other.0)
    }

    /// |self><self|
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix(&self.0 * self.0.adjoint())
    }

    /// Zero-pads the state into a larger space.
    pub fn embed(&self, dim: usize) -> Self {
        assert!(dim >= self.dim(), "cannot embed into a smaller space");
        let mut v = DVector::zeros(dim);
        v.rows_mut(0, self.dim()).copy_from(&self.0);
        StateVector(v)
    }
}

/// An unnormalized vector such as a spectrum-weighted eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledVector(pub(crate) DVector<C64>);

impl ScaledVector {
    pub fn new(v: DVector<C64>) -> Result<Self> {
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument(
                "vector has non-finite amplitude".into(),
            ));
        }
        Ok(ScaledVector(v))
    }

    pub fn zeros(dim: usize) -> Self {
        ScaledVector(DVector::zeros(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.norm_squared()
    }
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues sorted decreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<StateVector>,
}

impl Spectrum {
    pub(crate) fn from_parts(eigenvalues: Vec<f64>, eigenvectors: Vec<StateVector>) -> Self {
        debug_assert_eq!(eigenvalues.len(), eigenvectors.len());
        Spectrum {
            eigenvalues,
            eigenvectors,
        }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &[StateVector] {
        &self.eigenvectors
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// sum_j lambda_j v_j v_j^dag
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvectors.first().map_or(0, StateVector::dim);
        let mut m = DMatrix::<C64>::zeros(n, n);
        for (&l, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            let a = v.amplitudes();
            m += (a * a.adjoint()) * C64::new(l, 0.0);
        }
        ComplexMatrix(m)
    }

    /// Gram matrix of the eigenvectors.
    pub fn gram(&self) -> ComplexMatrix {
        let n = self.eigenvectors.len();
        ComplexMatrix(DMatrix::from_fn(n, n, |i, j| {
            self.eigenvectors[i].inner(&self.eigenvectors[j])
        }))
    }
}

/// Hermitian positive-semidefinite matrix with unit trace.
///
/// The spectrum is computed once at validation time and cached.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    spectrum: Spectrum,
}

/// Validates `m` as a density matrix with one tolerance for every bound.
pub fn validate_density(m: &ComplexMatrix, tol: f64) -> Result<DensityMatrix> {
    validate_density_with(
        m,
        &Tolerances {
            herm: tol,
            trace: tol,
            psd: tol,
            ..Tolerances::default()
        },
    )
}

/// Validates `m` as a density matrix. Eigenvalues in `[-tol.psd, 0)` are
/// clipped to zero and the trace is renormalized to one.
pub fn validate_density_with(m: &ComplexMatrix, tol: &Tolerances) -> Result<DensityMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.rows() == 0 {
        return Err(Error::InvalidArgument(
            "density matrix of dimension 0".into(),
        ));
    }
    let spectrum = hermitian_eig_with_tol(m, tol.herm)?;
    let trace: f64 = m.trace().re;
    if (trace - 1.0).abs() > tol.trace {
        return Err(Error::BadTrace {
            trace,
            tol: tol.trace,
        });
    }
    let min = spectrum.eigenvalues().last().copied().unwrap_or(0.0);
    if min < -tol.psd {
        return Err(Error::NotPsd {
            eigenvalue: min,
            tol: tol.psd,
        });
    }

    let clipped = min < -ROUNDOFF;
    let eigenvalues: Vec<f64> = spectrum.eigenvalues().iter().map(|&l| l.max(0.0)).collect();
    let total: f64 = eigenvalues.iter().sum();
    let eigenvalues: Vec<f64> = eigenvalues.iter().map(|&l| l / total).collect();
    let spectrum = Spectrum::from_parts(eigenvalues, spectrum.eigenvectors);

    let matrix = if clipped {
        spectrum.reconstruct()
    } else {
        let h = m.as_dmatrix();
        ComplexMatrix(rescale((h + h.adjoint()) * C64::new(0.5, 0.0), trace))
    };
    Ok(DensityMatrix { matrix, spectrum })
}

impl DensityMatrix {
    /// Density matrix with a known spectrum; eigenvectors must form a full
    /// orthonormal basis and eigenvalues a sorted distribution.
    pub(crate) fn from_spectrum(spectrum: Spectrum) -> Self {
        DensityMatrix {
            matrix: spectrum.reconstruct(),
            spectrum,
        }
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        validate_density(&psi.projector(), 1e-9)
            .expect("projector onto a unit vector is a density matrix")
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        let m = ComplexMatrix::diagonal(&vec![1.0 / dim as f64; dim]);
        validate_density(&m, 1e-9).expect("I/d is a density matrix")
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    /// Eigenvalues sorted decreasing.
    pub fn eigenvalues(&self) -> &[f64] {
        self.spectrum.eigenvalues()
    }

    /// Number of eigenvalues strictly above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.eigenvalues().iter().filter(|&&l| l > tol).count()
    }

    /// von Neumann entropy in nats.
    pub fn von_neumann_entropy(&self) -> f64 {
        -self
            .eigenvalues()
            .iter()
            .filter(|&&l| l > 0.0)
            .map(|&l| l * l.ln())
            .sum::<f64>()
    }
}
