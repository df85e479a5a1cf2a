//! Pure-state ensembles `ρ = Σ_i p_i |ψ_i⟩⟨ψ_i|` of a density matrix.
//!
//! A probability vector `p` can be the weight vector of such an ensemble
//! exactly when `p ≺ λ`, the spectrum of `ρ`. [`synthesize_ensemble`] builds
//! one explicitly: with `|e_j⟩ = √λ_j |v_j⟩` the spectrum-weighted
//! eigenvectors and `W` the orthogonal Horn witness of `p ≺ λ`,
//!
//! ```text
//! √p_i |ψ_i⟩ = Σ_j W_ij |e_j⟩
//! ```
//!
//! gives unit states whose mixture with weights `p` is `ρ`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, MajorizationViolation, Result};
use crate::majorize::{
    horn_orthogonal_with_tol, majorization_violation, schur_comparisons, ProbVector, SchurReport,
    PROB_TOL,
};
use crate::numkernel::{
    frobenius_distance, validate_density, ComplexMatrix, DensityMatrix, StateVector, C64,
};

/// One weighted state of an ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct Member {
    pub weight: f64,
    pub state: StateVector,
    /// Set on zero-weight members whose state is a placeholder (`|0⟩`).
    pub synthetic: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    members: Vec<Member>,
}

impl Ensemble {
    /// Checks that the weights form a probability vector and that all states
    /// share one dimension.
    pub fn new(members: Vec<Member>) -> Result<Self> {
        let weights: Vec<f64> = members.iter().map(|m| m.weight).collect();
        let weights = ProbVector::new(weights, PROB_TOL)?;
        let dim = members[0].state.dim();
        if let Some(bad) = members.iter().find(|m| m.state.dim() != dim) {
            return Err(Error::InvalidArgument(format!(
                "ensemble mixes state dimensions {dim} and {}",
                bad.state.dim()
            )));
        }
        let members = members
            .into_iter()
            .zip(weights.into_weights())
            .map(|(m, w)| Member { weight: w, ..m })
            .collect();
        Ok(Ensemble { members })
    }

    pub fn from_pairs(pairs: Vec<(f64, StateVector)>) -> Result<Self> {
        Self::new(
            pairs
                .into_iter()
                .map(|(weight, state)| Member {
                    weight,
                    state,
                    synthetic: false,
                })
                .collect(),
        )
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.members[0].state.dim()
    }

    pub fn weights(&self) -> ProbVector {
        ProbVector::new(self.members.iter().map(|m| m.weight).collect(), PROB_TOL)
            .expect("validated at construction")
    }

    fn mixture(&self) -> DMatrix<C64> {
        let n = self.dim();
        let mut rho = DMatrix::<C64>::zeros(n, n);
        for m in &self.members {
            let a = m.state.amplitudes();
            rho += (a * a.adjoint()) * C64::new(m.weight, 0.0);
        }
        rho
    }
}

/// `Σ_i p_i |ψ_i⟩⟨ψ_i|`.
pub fn density_from_ensemble(e: &Ensemble) -> Result<DensityMatrix> {
    validate_density(&ComplexMatrix(e.mixture()), 1e-9)
}

fn spectrum_vector(rho: &DensityMatrix) -> ProbVector {
    ProbVector::new(rho.eigenvalues().to_vec(), PROB_TOL)
        .expect("density spectrum is a distribution")
}

/// Whether `p` can be the weight vector of a pure-state ensemble of `rho`.
pub fn is_compatible(p: &ProbVector, rho: &DensityMatrix, tol: f64) -> bool {
    majorization_violation(p.weights(), rho.eigenvalues(), tol).is_none()
}

/// An ensemble of `rho` with weights exactly `p`.
///
/// Zero-weight members carry the placeholder state `|0⟩` and are flagged
/// `synthetic`. The output has one member per entry of `p`.
pub fn synthesize_ensemble(rho: &DensityMatrix, p: &ProbVector) -> Result<Ensemble> {
    synthesize_ensemble_with_tol(rho, p, PROB_TOL)
}

pub fn synthesize_ensemble_with_tol(
    rho: &DensityMatrix,
    p: &ProbVector,
    tol: f64,
) -> Result<Ensemble> {
    let lambda = spectrum_vector(rho);
    let witness = horn_orthogonal_with_tol(p, &lambda, tol)?;
    let w = &witness.orthogonal;
    let n = rho.dim();
    let scaled: Vec<DVector<C64>> = rho
        .spectrum()
        .eigenvectors()
        .iter()
        .zip(rho.eigenvalues())
        .map(|(v, &l)| v.amplitudes() * C64::new(l.sqrt(), 0.0))
        .collect();

    let members = p
        .weights()
        .iter()
        .enumerate()
        .map(|(i, &weight)| {
            let mut v = DVector::<C64>::zeros(n);
            // columns j >= n of W multiply the zero vectors appended to the
            // eigenvector list
            for (j, e) in scaled.iter().enumerate() {
                v += e * C64::new(w[(i, j)], 0.0);
            }
            if weight > 0.0 && v.norm() > 0.0 {
                Member {
                    weight,
                    state: StateVector::normalized(v).expect("nonzero"),
                    synthetic: false,
                }
            } else {
                Member {
                    weight,
                    state: StateVector::basis(n, 0),
                    synthetic: true,
                }
            }
        })
        .collect();
    Ensemble::new(members)
}

/// The ensemble `√p_i |ψ_i⟩ = Σ_j u_ij |e_j⟩` produced by an arbitrary
/// unitary `u` acting on the spectrum-weighted eigenvectors, with extra zero
/// vectors appended when `u` is larger than `rho`.
pub fn mix_eigenvectors(rho: &DensityMatrix, u: &ComplexMatrix) -> Result<Ensemble> {
    u.check_unitary(1e-9)?;
    let m = u.rows();
    let n = rho.dim();
    if m < n {
        return Err(Error::InvalidArgument(format!(
            "mixing unitary of size {m} is smaller than the dimension {n}"
        )));
    }
    let scaled: Vec<DVector<C64>> = rho
        .spectrum()
        .eigenvectors()
        .iter()
        .zip(rho.eigenvalues())
        .map(|(v, &l)| v.amplitudes() * C64::new(l.sqrt(), 0.0))
        .collect();
    let mut members = Vec::with_capacity(m);
    for i in 0..m {
        let mut v = DVector::<C64>::zeros(n);
        for (j, e) in scaled.iter().enumerate() {
            v += e * u[(i, j)];
        }
        let weight = v.norm_squared();
        members.push(if weight > 0.0 {
            Member {
                weight,
                state: StateVector::normalized(v).expect("nonzero"),
                synthetic: false,
            }
        } else {
            Member {
                weight: 0.0,
                state: StateVector::basis(n, 0),
                synthetic: true,
            }
        });
    }
    Ensemble::new(members)
}

/// The ensemble with `m` equally weighted members.
pub fn uniform_ensemble(rho: &DensityMatrix, m: usize) -> Result<Ensemble> {
    if m == 0 {
        return Err(Error::InvalidArgument(
            "uniform ensemble needs at least one member".into(),
        ));
    }
    synthesize_ensemble(rho, &ProbVector::uniform(m))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleReport {
    pub dimension_match: bool,
    /// ‖Σ p_i |ψ_i⟩⟨ψ_i| - ρ‖_F, absent on a dimension mismatch.
    pub reconstruction_error: Option<f64>,
    pub weights_majorized: bool,
    pub majorization_failure: Option<String>,
    pub norm_deviations: Vec<f64>,
    pub max_norm_deviation: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Audits `e` against `rho`. Never fails: problems are carried in the report.
pub fn verify_ensemble(e: &Ensemble, rho: &DensityMatrix, tol: f64) -> EnsembleReport {
    let dimension_match = e.dim() == rho.dim();
    let reconstruction_error = if dimension_match {
        frobenius_distance(&ComplexMatrix(e.mixture()), rho.matrix()).ok()
    } else {
        None
    };
    let violation: Option<MajorizationViolation> = majorization_violation(
        &e.members.iter().map(|m| m.weight).collect::<Vec<_>>(),
        rho.eigenvalues(),
        tol,
    );
    let norm_deviations: Vec<f64> = e
        .members
        .iter()
        .map(|m| (m.state.amplitudes().norm() - 1.0).abs())
        .collect();
    let max_norm_deviation = norm_deviations.iter().copied().fold(0.0, f64::max);
    let pass = dimension_match
        && reconstruction_error.is_some_and(|r| r <= tol)
        && violation.is_none()
        && max_norm_deviation <= tol;
    EnsembleReport {
        dimension_match,
        reconstruction_error,
        weights_majorized: violation.is_none(),
        majorization_failure: violation.map(|v| v.to_string()),
        norm_deviations,
        max_norm_deviation,
        tol,
        pass,
    }
}

/// Slack on `H(p) ≥ S(ρ)`.
pub const ENTROPY_TOL: f64 = 1e-9;

/// Eigenvalues at or below this magnitude count as zero in the Schur audit.
/// Functions such as `-Σ√x` turn eigensolver roundoff of order 1e-17 into
/// shifts of order 1e-9.
pub const SPECTRAL_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    /// Shannon entropy of the weights, nats.
    pub shannon: f64,
    /// von Neumann entropy of the mixture, nats.
    pub von_neumann: f64,
    pub holds: bool,
    /// Schur function values on the weights (`x`) against the spectrum (`y`).
    pub schur: SchurReport,
}

pub fn entropy_report(e: &Ensemble) -> Result<EntropyReport> {
    let rho = density_from_ensemble(e)?;
    let shannon = e.weights().shannon_entropy();
    let von_neumann = rho.von_neumann_entropy();
    let holds = shannon >= von_neumann - ENTROPY_TOL;
    let weights: Vec<f64> = e.members.iter().map(|m| m.weight).collect();
    let spectrum: Vec<f64> = rho
        .eigenvalues()
        .iter()
        .map(|&l| if l.abs() <= SPECTRAL_FLOOR { 0.0 } else { l })
        .collect();
    Ok(EntropyReport {
        shannon,
        von_neumann,
        holds,
        schur: schur_comparisons(&weights, &spectrum),
    })
}
