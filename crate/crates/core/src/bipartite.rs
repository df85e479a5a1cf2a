//! Bipartite pure states, Schmidt decompositions and re-decompositions with
//! prescribed weights.
//!
//! A state `|ψ⟩ = Σ_i √p_i |i_A⟩|i_B⟩` can also be written as
//! `Σ_i √q_i |i_A'⟩|ψ_i⟩` with `{|i_A'⟩}` orthonormal and `|ψ_i⟩` unit (but
//! not necessarily orthogonal) exactly when `q ≺ p`. [`corollary4_decompose`]
//! builds such a form: it takes an ensemble of `tr_A |ψ⟩⟨ψ|` with weights
//! `q`, purifies it, and finds the unitary on `A` carrying that purification
//! to `|ψ⟩`.

use nalgebra::{DMatrix, DVector};

use crate::ensembles::{synthesize_ensemble, Ensemble};
use crate::error::{Error, Result};
use crate::majorize::{majorization_violation, ProbVector, PROB_TOL};
use crate::numkernel::{
    fix_phase_largest, frobenius_distance, jacobi_svd, rescale, validate_density, ComplexMatrix,
    DensityMatrix, Spectrum, StateVector, C64, PHASE_EPS,
};

/// Schmidt coefficients (squared) at or below this are treated as zero.
pub const SCHMIDT_CUTOFF: f64 = 1e-12;
/// Schmidt coefficients closer than this are grouped as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-8;
/// Maximum distance between reduced densities of two co-purifications.
pub const COPURIFICATION_TOL: f64 = 1e-8;

/// Unit vector in `A ⊗ B`, amplitudes indexed `(a, b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    amps: DMatrix<C64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

impl BipartiteState {
    /// Amplitudes in row-major `(a, b)` order; renormalized after the norm
    /// check.
    pub fn new(dim_a: usize, dim_b: usize, amplitudes: Vec<C64>, tol: f64) -> Result<Self> {
        if amplitudes.len() != dim_a * dim_b {
            return Err(Error::InvalidArgument(format!(
                "{} amplitudes for a {dim_a}x{dim_b} system",
                amplitudes.len()
            )));
        }
        Self::from_matrix(DMatrix::from_row_slice(dim_a, dim_b, &amplitudes), tol)
    }

    pub fn from_matrix(m: DMatrix<C64>, tol: f64) -> Result<Self> {
        if m.is_empty() {
            return Err(Error::InvalidArgument("empty bipartite system".into()));
        }
        let m = ComplexMatrix::from_dmatrix(m)?.into_dmatrix();
        let norm = m.norm();
        if (norm - 1.0).abs() > tol {
            return Err(Error::BadNorm { norm, tol });
        }
        Ok(BipartiteState {
            amps: rescale(m, norm),
        })
    }

    /// `|a⟩|b⟩`
    pub fn product_basis(dim_a: usize, dim_b: usize, a: usize, b: usize) -> Self {
        let mut m = DMatrix::zeros(dim_a, dim_b);
        m[(a, b)] = C64::new(1.0, 0.0);
        BipartiteState { amps: m }
    }

    /// `Σ_i |i⟩|i⟩ / √d` in a `d × d` system.
    pub fn maximally_entangled(d: usize) -> Self {
        let m = DMatrix::from_fn(d, d, |i, j| {
            if i == j {
                C64::new(1.0 / (d as f64).sqrt(), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        BipartiteState { amps: m }
    }

    pub fn dim_a(&self) -> usize {
        self.amps.nrows()
    }

    pub fn dim_b(&self) -> usize {
        self.amps.ncols()
    }

    /// Amplitude matrix, rows indexed by `A`.
    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.amps
    }

    pub fn to_row_major(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.amps.len());
        for a in 0..self.dim_a() {
            for b in 0..self.dim_b() {
                out.push(self.amps[(a, b)]);
            }
        }
        out
    }

    /// ⟨self|other⟩; dimensions must agree.
    pub fn inner(&self, other: &BipartiteState) -> Result<C64> {
        if self.amps.shape() != other.amps.shape() {
            return Err(Error::ShapeMismatch {
                left: self.amps.shape(),
                right: other.amps.shape(),
            });
        }
        Ok(self
            .amps
            .zip_fold(&other.amps, C64::new(0.0, 0.0), |acc, x, y| {
                acc + x.conj() * y
            }))
    }

    /// |⟨self|other⟩|²
    pub fn fidelity(&self, other: &BipartiteState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Euclidean distance between amplitude vectors.
    pub fn distance(&self, other: &BipartiteState) -> Result<f64> {
        if self.amps.shape() != other.amps.shape() {
            return Err(Error::ShapeMismatch {
                left: self.amps.shape(),
                right: other.amps.shape(),
            });
        }
        Ok((&self.amps - &other.amps).norm())
    }

    /// Zero-pads `A` to `dim_a` dimensions.
    pub fn embed_a(&self, dim_a: usize) -> Self {
        assert!(dim_a >= self.dim_a(), "cannot shrink subsystem A");
        let mut m = DMatrix::zeros(dim_a, self.dim_b());
        m.view_mut((0, 0), self.amps.shape()).copy_from(&self.amps);
        BipartiteState { amps: m }
    }

    /// `(U ⊗ I)|ψ⟩`, renormalized. `op` need not be unitary.
    pub fn apply_a(&self, op: &DMatrix<C64>) -> Result<Self> {
        if op.ncols() != self.dim_a() {
            return Err(Error::ShapeMismatch {
                left: op.shape(),
                right: self.amps.shape(),
            });
        }
        Self::from_unnormalized(op * &self.amps)
    }

    /// `(I ⊗ E)|ψ⟩` without renormalizing, as a raw amplitude matrix.
    pub fn apply_b_raw(&self, op: &DMatrix<C64>) -> Result<DMatrix<C64>> {
        if op.ncols() != self.dim_b() {
            return Err(Error::ShapeMismatch {
                left: op.shape(),
                right: self.amps.shape(),
            });
        }
        Ok(&self.amps * op.transpose())
    }

    pub(crate) fn from_unnormalized(m: DMatrix<C64>) -> Result<Self> {
        let norm = m.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::BadNorm { norm, tol: 0.0 });
        }
        Ok(BipartiteState {
            amps: rescale(m, norm),
        })
    }

    /// Same state with its largest-magnitude amplitude real and positive.
    pub fn with_canonical_phase(&self) -> Self {
        let mut flat = self.to_row_major();
        fix_phase_largest(&mut flat);
        BipartiteState {
            amps: DMatrix::from_row_slice(self.dim_a(), self.dim_b(), &flat),
        }
    }
}

/// `Σ_i √p_i |i_A⟩|i_B⟩` with `p` sorted decreasing and zero terms dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtDecomposition {
    pub coefficients: ProbVector,
    pub basis_a: Vec<StateVector>,
    pub basis_b: Vec<StateVector>,
}

impl SchmidtDecomposition {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    pub fn reconstruct(&self) -> DMatrix<C64> {
        let da = self.basis_a[0].dim();
        let db = self.basis_b[0].dim();
        let mut m = DMatrix::zeros(da, db);
        for ((p, a), b) in self
            .coefficients
            .weights()
            .iter()
            .zip(&self.basis_a)
            .zip(&self.basis_b)
        {
            m += a.amplitudes() * b.amplitudes().transpose() * C64::new(p.sqrt(), 0.0);
        }
        m
    }
}

/// Modified Gram-Schmidt, in place, in the given order.
fn orthonormalize(vs: &mut [DVector<C64>]) {
    for j in 0..vs.len() {
        for _ in 0..2 {
            for i in 0..j {
                let proj = vs[i].dotc(&vs[j]);
                let vi = vs[i].clone();
                vs[j] -= vi * proj;
            }
        }
        let n = vs[j].norm();
        vs[j] /= C64::new(n, 0.0);
    }
}

/// Extends orthonormal `vs` (in dimension `dim`) to a full basis, each time
/// adding the standard vector with the largest residual (lowest index on
/// ties).
fn complete_basis(vs: &[DVector<C64>], dim: usize) -> Vec<DVector<C64>> {
    let mut basis: Vec<DVector<C64>> = vs.to_vec();
    let mut added = Vec::new();
    while basis.len() < dim {
        let mut best: Option<(f64, DVector<C64>)> = None;
        for k in 0..dim {
            let mut e = DVector::<C64>::zeros(dim);
            e[k] = C64::new(1.0, 0.0);
            for _ in 0..2 {
                for b in &basis {
                    let proj = b.dotc(&e);
                    e -= b * proj;
                }
            }
            let r = e.norm();
            if best.as_ref().is_none_or(|(br, _)| r > *br) {
                best = Some((r, e));
            }
        }
        let (r, e) = best.expect("dim > 0");
        let e = e / C64::new(r, 0.0);
        basis.push(e.clone());
        added.push(e);
    }
    added
}

/// Computed from a singular value decomposition of the amplitude matrix, so
/// that small coefficients keep full relative accuracy. Each `|i_A⟩` has its
/// first nonzero component real positive.
pub fn schmidt(psi: &BipartiteState) -> Result<SchmidtDecomposition> {
    let svd = jacobi_svd(psi.matrix());
    let total: f64 = svd.singular_values.iter().map(|s| s * s).sum();

    let mut coefficients = Vec::new();
    let mut basis_a = Vec::new();
    let mut basis_b = Vec::new();
    for ((&sigma, u), v) in svd.singular_values.iter().zip(svd.left).zip(svd.right) {
        let p = sigma * sigma / total;
        if p <= SCHMIDT_CUTOFF {
            continue;
        }
        // M = Σ σ u v†, so the B-side factor is conj(v)
        let mut a = u;
        let mut b = v.conjugate();
        if let Some(z) = a.iter().copied().find(|z| z.norm() > PHASE_EPS) {
            let phase = z.conj() / z.norm();
            a *= phase;
            b *= phase.conj();
        }
        coefficients.push(p);
        basis_a.push(StateVector(a));
        basis_b.push(StateVector(b));
    }
    Ok(SchmidtDecomposition {
        coefficients: ProbVector::new(coefficients, PROB_TOL)?,
        basis_a,
        basis_b,
    })
}

/// `tr_A |ψ⟩⟨ψ| = Σ_i p_i |i_B⟩⟨i_B|` assembled from the Schmidt data, with
/// exact zeros on the complement of the support.
fn reduced_density_b_exact(sd: &SchmidtDecomposition, dim_b: usize) -> DensityMatrix {
    let support: Vec<DVector<C64>> = sd.basis_b.iter().map(|b| b.amplitudes().clone()).collect();
    let rest = complete_basis(&support, dim_b);
    let mut eigenvalues = sd.coefficients.weights().to_vec();
    eigenvalues.resize(dim_b, 0.0);
    let eigenvectors = support.into_iter().chain(rest).map(StateVector).collect();
    DensityMatrix::from_spectrum(Spectrum::from_parts(eigenvalues, eigenvectors))
}

pub fn reduced_density(psi: &BipartiteState, side: Side) -> Result<DensityMatrix> {
    let m = psi.matrix();
    let rho = match side {
        Side::A => m * m.adjoint(),
        Side::B => (m.adjoint() * m).transpose(),
    };
    validate_density(&ComplexMatrix(rho), 1e-9)
}

/// `|φ⟩ = Σ_i √w_i |i_A⟩|ψ_i⟩`, checked to purify `rho`.
pub fn purify(
    rho: &DensityMatrix,
    weights: &ProbVector,
    states: &[StateVector],
) -> Result<BipartiteState> {
    if weights.len() != states.len() {
        return Err(Error::InvalidArgument(format!(
            "{} weights for {} states",
            weights.len(),
            states.len()
        )));
    }
    let n = rho.dim();
    if let Some(s) = states.iter().find(|s| s.dim() != n) {
        return Err(Error::ShapeMismatch {
            left: (n, n),
            right: (s.dim(), 1),
        });
    }
    let phi = BipartiteState::from_unnormalized(purification_matrix(weights, states, n))?;
    let reduced = reduced_density(&phi, Side::B)?;
    let error = frobenius_distance(reduced.matrix(), rho.matrix())?;
    if error > COPURIFICATION_TOL {
        return Err(Error::EnsembleMismatch {
            error,
            tol: COPURIFICATION_TOL,
        });
    }
    Ok(phi.with_canonical_phase())
}

fn purification_matrix(weights: &ProbVector, states: &[StateVector], dim_b: usize) -> DMatrix<C64> {
    let mut m = DMatrix::<C64>::zeros(states.len(), dim_b);
    for (i, (w, s)) in weights.weights().iter().zip(states).enumerate() {
        m.row_mut(i)
            .copy_from(&(s.amplitudes().transpose() * C64::new(w.sqrt(), 0.0)));
    }
    m
}

/// The purification of an ensemble's mixture.
pub fn purify_ensemble(e: &Ensemble) -> Result<BipartiteState> {
    let rho = crate::ensembles::density_from_ensemble(e)?;
    let states: Vec<StateVector> = e.members().iter().map(|m| m.state.clone()).collect();
    purify(&rho, &e.weights(), &states)
}

/// Unitary `U` on `A` with `(U ⊗ I)|φ⟩ = |ψ⟩`.
///
/// Both states are Schmidt-decomposed. Within each group of equal Schmidt
/// coefficients the B-side bases differ by the unitary block
/// `C_ij = ⟨b_i^φ|b_j^ψ⟩`, so `U` sends `a_i^φ` to `Σ_j C_ij a_j^ψ`. The
/// complements of the two A-side supports are matched by completing each
/// support to a full basis.
pub fn relate_purifications(phi: &BipartiteState, psi: &BipartiteState) -> Result<ComplexMatrix> {
    if phi.matrix().shape() != psi.matrix().shape() {
        return Err(Error::ShapeMismatch {
            left: phi.matrix().shape(),
            right: psi.matrix().shape(),
        });
    }
    let rho_phi = reduced_density(phi, Side::B)?;
    let rho_psi = reduced_density(psi, Side::B)?;
    let distance = frobenius_distance(rho_phi.matrix(), rho_psi.matrix())?;
    if distance > COPURIFICATION_TOL {
        return Err(Error::NotCopurifications { distance });
    }
    let sphi = schmidt(phi)?;
    let spsi = schmidt(psi)?;
    if sphi.rank() != spsi.rank() {
        return Err(Error::NotCopurifications { distance });
    }
    let r = sphi.rank();
    let p = sphi.coefficients.weights();
    let dim_a = phi.dim_a();

    let mut mapped: Vec<DVector<C64>> = Vec::with_capacity(r);
    let mut start = 0;
    while start < r {
        let mut end = start + 1;
        while end < r && (p[end - 1] - p[end]).abs() <= DEGENERACY_TOL {
            end += 1;
        }
        for i in start..end {
            let mut v = DVector::<C64>::zeros(dim_a);
            for j in start..end {
                let c = sphi.basis_b[i].inner(&spsi.basis_b[j]);
                v += spsi.basis_a[j].amplitudes() * c;
            }
            mapped.push(v);
        }
        start = end;
    }
    orthonormalize(&mut mapped);

    let source: Vec<DVector<C64>> = sphi
        .basis_a
        .iter()
        .map(|a| a.amplitudes().clone())
        .collect();
    let source_rest = complete_basis(&source, dim_a);
    let mapped_rest = complete_basis(&mapped, dim_a);

    let mut u = DMatrix::<C64>::zeros(dim_a, dim_a);
    for (to, from) in mapped
        .iter()
        .chain(&mapped_rest)
        .zip(source.iter().chain(&source_rest))
    {
        u += to * from.adjoint();
    }
    Ok(ComplexMatrix(u))
}

/// `|ψ⟩ = Σ_i √q_i |i_A'⟩|ψ_i⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cor4Decomposition {
    pub weights: ProbVector,
    /// Orthonormal, in the (possibly enlarged) `A` space.
    pub basis_a: Vec<StateVector>,
    /// Unit, not necessarily orthogonal.
    pub states_b: Vec<StateVector>,
    /// Synthetic placeholder flags for zero-weight members.
    pub synthetic: Vec<bool>,
}

impl Cor4Decomposition {
    pub fn dim_a(&self) -> usize {
        self.basis_a[0].dim()
    }

    pub fn dim_b(&self) -> usize {
        self.states_b[0].dim()
    }

    /// `Σ_i √q_i |i_A'⟩|ψ_i⟩` as an amplitude matrix.
    pub fn reconstruct(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.dim_a(), self.dim_b());
        for ((q, a), b) in self
            .weights
            .weights()
            .iter()
            .zip(&self.basis_a)
            .zip(&self.states_b)
        {
            m += a.amplitudes() * b.amplitudes().transpose() * C64::new(q.sqrt(), 0.0);
        }
        m
    }
}

/// Rewrites `psi` with weights `q`; requires `q ≺ p`, the Schmidt
/// coefficients. If `q` is longer than `A`, `A` is enlarged with zero rows.
pub fn corollary4_decompose(psi: &BipartiteState, q: &ProbVector) -> Result<Cor4Decomposition> {
    let sd = schmidt(psi)?;
    if let Some(v) = majorization_violation(q.weights(), sd.coefficients.weights(), PROB_TOL) {
        return Err(Error::Majorization(v));
    }
    let dim_a = psi.dim_a().max(q.len());
    let psi_e = psi.embed_a(dim_a);
    let rho_b = reduced_density_b_exact(&sd, psi.dim_b());
    let ensemble = synthesize_ensemble(&rho_b, q)?;
    let states: Vec<StateVector> = ensemble.members().iter().map(|m| m.state.clone()).collect();
    // no phase convention here: U must carry this exact vector onto psi
    let phi = BipartiteState::from_unnormalized(purification_matrix(q, &states, psi.dim_b()))?
        .embed_a(dim_a);
    let u = relate_purifications(&phi, &psi_e)?;
    let basis_a = (0..q.len()).map(|i| StateVector(u.column(i))).collect();
    Ok(Cor4Decomposition {
        weights: q.clone(),
        basis_a,
        states_b: states,
        synthetic: ensemble.members().iter().map(|m| m.synthetic).collect(),
    })
}
