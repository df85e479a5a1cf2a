use std::fmt;

use thiserror::Error;

/// First failing partial sum of a majorization test, or a total mismatch.
///
/// `k` is 1-based: it counts how many of the largest entries were summed.
#[derive(Debug, Clone, PartialEq)]
pub struct MajorizationViolation {
    pub k: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub total_mismatch: bool,
}

impl fmt::Display for MajorizationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.total_mismatch {
            write!(
                f,
                "majorization violated: totals differ ({} vs {})",
                self.lhs, self.rhs
            )
        } else {
            write!(
                f,
                "majorization violated at k={}: {} > {}",
                self.k, self.lhs, self.rhs
            )
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("not Hermitian: max |M_ij - conj(M_ji)| = {deviation:e} exceeds {tol:e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("trace {trace} exceeds tolerance {tol:e} from 1")]
    BadTrace { trace: f64, tol: f64 },

    #[error("not positive semidefinite: eigenvalue {eigenvalue} < -{tol:e}")]
    NotPsd { eigenvalue: f64, tol: f64 },

    #[error("not unitary: ||U^dag U - I||_F = {deviation:e} exceeds {tol:e}")]
    NotUnitary { deviation: f64, tol: f64 },

    #[error("state norm {norm} deviates from 1 by more than {tol:e}")]
    BadNorm { norm: f64, tol: f64 },

    #[error("probability vector: {0}")]
    BadProbVector(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0}")]
    Majorization(MajorizationViolation),

    #[error("states are not purifications of the same density matrix: reduced densities differ by {distance:e}")]
    NotCopurifications { distance: f64 },

    #[error("target Schmidt rank {rank} exceeds the available entanglement dimension {d}")]
    SchmidtRankTooLarge { rank: usize, d: usize },

    #[error(
        "ensemble does not reproduce the density matrix: Frobenius error {error:e} exceeds {tol:e}"
    )]
    EnsembleMismatch { error: f64, tol: f64 },

    #[error("unknown Schur-convex function `{0}`")]
    UnknownFunction(String),

    #[error("parse error in {path}: {message}")]
    Parse { path: String, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Whether the error rejects a well-formed request on mathematical grounds
    /// (as opposed to malformed or invalid input).
    pub fn is_domain_rejection(&self) -> bool {
        matches!(
            self,
            Error::Majorization(_)
                | Error::NotCopurifications { .. }
                | Error::SchmidtRankTooLarge { .. }
                | Error::EnsembleMismatch { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
