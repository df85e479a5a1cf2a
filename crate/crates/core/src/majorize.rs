//! Majorization of probability vectors and its constructive witnesses.
//!
//! `x ≺ y` ("x is majorized by y") holds when the partial sums of the
//! decreasingly sorted `x` never exceed those of `y` and the totals agree.
//! Vectors of different lengths are compared after zero-padding the shorter.
//!
//! When `x ≺ y` two witnesses are produced:
//!
//! * a [`TChain`]: at most `d - 1` T-transforms (two-coordinate averages)
//!   whose successive application takes `y` to `x`;
//! * a [`HornWitness`]: a real orthogonal `W` with `D_ij = W_ij²` doubly
//!   stochastic and `D y = x`.
//!
//! The module also hosts the Schur-convex function suite used to audit
//! majorization relations.

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, MajorizationViolation, Result};
use crate::numkernel::{ComplexMatrix, C64};

/// Default tolerance on probability vector entries and sums.
pub const PROB_TOL: f64 = 1e-9;

/// Nonnegative weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    /// Validates `weights`. Entries in `[-tol, 0)` are clipped to zero.
    pub fn new(weights: Vec<f64>, tol: f64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::BadProbVector("empty".into()));
        }
        let mut weights = weights;
        for (i, w) in weights.iter_mut().enumerate() {
            if !w.is_finite() {
                return Err(Error::BadProbVector(format!("entry {i} is not finite")));
            }
            if *w < -tol {
                return Err(Error::BadProbVector(format!("entry {i} is negative ({w})")));
            }
            if *w < 0.0 {
                *w = 0.0;
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > tol {
            return Err(Error::BadProbVector(format!("sum {sum} differs from 1")));
        }
        Ok(ProbVector(weights))
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform distribution needs at least one outcome");
        ProbVector(vec![1.0 / n as f64; n])
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn into_weights(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Weights sorted decreasing.
    pub fn sorted_desc(&self) -> Vec<f64> {
        let mut v = self.0.clone();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    /// Weights zero-padded to length `n` (no-op if already at least `n`).
    pub fn padded(&self, n: usize) -> Vec<f64> {
        let mut v = self.0.clone();
        if v.len() < n {
            v.resize(n, 0.0);
        }
        v
    }

    /// Shannon entropy in nats, with 0 ln 0 = 0.
    pub fn shannon_entropy(&self) -> f64 {
        -self
            .0
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| p * p.ln())
            .sum::<f64>()
    }
}

/// Indices of `v` ordered by decreasing value, ties by increasing index.
pub(crate) fn sorted_desc_indices(v: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[b].total_cmp(&v[a]).then(a.cmp(&b)));
    idx
}

/// First failing condition of `x ≺ y` on raw vectors, zero-padded to a
/// common length.
pub fn majorization_violation(x: &[f64], y: &[f64], tol: f64) -> Option<MajorizationViolation> {
    let d = x.len().max(y.len());
    let mut xs: Vec<f64> = x.to_vec();
    let mut ys: Vec<f64> = y.to_vec();
    xs.resize(d, 0.0);
    ys.resize(d, 0.0);
    xs.sort_by(|a, b| b.total_cmp(a));
    ys.sort_by(|a, b| b.total_cmp(a));

    let (mut sx, mut sy) = (0.0, 0.0);
    for k in 0..d {
        sx += xs[k];
        sy += ys[k];
        if k + 1 < d && sx > sy + tol {
            return Some(MajorizationViolation {
                k: k + 1,
                lhs: sx,
                rhs: sy,
                total_mismatch: false,
            });
        }
    }
    if (sx - sy).abs() > tol {
        return Some(MajorizationViolation {
            k: d,
            lhs: sx,
            rhs: sy,
            total_mismatch: true,
        });
    }
    None
}

/// `x ≺ y` within `tol` on every partial sum and on the totals.
pub fn is_majorized_by(x: &ProbVector, y: &ProbVector, tol: f64) -> bool {
    majorization_violation(x.weights(), y.weights(), tol).is_none()
}

fn require_majorized(x: &ProbVector, y: &ProbVector, tol: f64) -> Result<()> {
    match majorization_violation(x.weights(), y.weights(), tol) {
        Some(v) => Err(Error::Majorization(v)),
        None => Ok(()),
    }
}

/// Identity except on coordinates `i` and `k`, where it acts as
/// `[[t, 1-t], [1-t, t]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTransform {
    pub i: usize,
    pub k: usize,
    pub t: f64,
}

impl TTransform {
    pub fn new(i: usize, k: usize, t: f64) -> Result<Self> {
        if i == k {
            return Err(Error::InvalidArgument(
                "T-transform needs two distinct indices".into(),
            ));
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidArgument(format!(
                "T-transform parameter {t} outside [0, 1]"
            )));
        }
        Ok(TTransform { i, k, t })
    }

    pub fn apply_in_place(&self, v: &mut [f64]) {
        let (a, b) = (v[self.i], v[self.k]);
        v[self.i] = self.t * a + (1.0 - self.t) * b;
        v[self.k] = (1.0 - self.t) * a + self.t * b;
    }

    pub fn matrix(&self, dim: usize) -> DMatrix<f64> {
        let mut m = DMatrix::identity(dim, dim);
        m[(self.i, self.i)] = self.t;
        m[(self.k, self.k)] = self.t;
        m[(self.i, self.k)] = 1.0 - self.t;
        m[(self.k, self.i)] = 1.0 - self.t;
        m
    }
}

impl fmt::Display for TTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T({}, {}; t={})", self.i, self.k, self.t)
    }
}

/// T-transforms taking `y` to `x`, together with the coordinate bookkeeping
/// that lets them act in a decreasingly sorted frame.
///
/// `transforms` are stored in application order: the first element acts
/// first. As a matrix product the chain is `T_n ⋯ T_2 T_1`.
///
/// The sorted frame is reached by `frame[c] = y[source_permutation[c]]`; the
/// result in the frame is read back as `x[target_permutation[c]] = frame[c]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TChain {
    pub transforms: Vec<TTransform>,
    pub source_permutation: Vec<usize>,
    pub target_permutation: Vec<usize>,
    /// Length of `x` before zero-padding.
    pub x_len: usize,
    /// Length of `y` before zero-padding.
    pub y_len: usize,
}

impl TChain {
    pub fn identity(dim: usize) -> Self {
        TChain {
            transforms: Vec::new(),
            source_permutation: (0..dim).collect(),
            target_permutation: (0..dim).collect(),
            x_len: dim,
            y_len: dim,
        }
    }

    /// Working dimension after zero-padding.
    pub fn dim(&self) -> usize {
        self.source_permutation.len()
    }

    pub fn len(&self) -> usize {
        self.transforms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transforms.is_empty()
    }

    /// Doubly stochastic matrix `S` with `S y = x` in the original orderings.
    pub fn stochastic_matrix(&self) -> DMatrix<f64> {
        let d = self.dim();
        let mut frame = DMatrix::identity(d, d);
        for t in &self.transforms {
            frame = t.matrix(d) * frame;
        }
        permute_into_original(&frame, &self.source_permutation, &self.target_permutation)
    }
}

/// `Q M R` with `(R y)[c] = y[source[c]]` and `(Q r)[target[c]] = r[c]`.
fn permute_into_original(m: &DMatrix<f64>, source: &[usize], target: &[usize]) -> DMatrix<f64> {
    let d = m.nrows();
    let mut out = DMatrix::zeros(d, d);
    for c in 0..d {
        for i in 0..d {
            out[(target[c], source[i])] = m[(c, i)];
        }
    }
    out
}

/// Builds the T-transform chain taking `y` to `x`.
///
/// Each step works on the still-active coordinates of the sorted frame: it
/// takes the largest active value `v_1` and the largest position `k` with
/// `v_k ≤ x_j ≤ v_{k-1}`, averages the two so the top coordinate becomes
/// `x_j`, and freezes that coordinate. Steps with `t = 1` are skipped.
pub fn t_transform_chain(x: &ProbVector, y: &ProbVector) -> Result<TChain> {
    t_transform_chain_with_tol(x, y, PROB_TOL)
}

pub fn t_transform_chain_with_tol(x: &ProbVector, y: &ProbVector, tol: f64) -> Result<TChain> {
    require_majorized(x, y, tol)?;
    let d = x.len().max(y.len());
    let xp = x.padded(d);
    let yp = y.padded(d);

    let source = sorted_desc_indices(&yp);
    let x_order = sorted_desc_indices(&xp);
    let mut work: Vec<f64> = source.iter().map(|&i| yp[i]).collect();
    let mut active: Vec<usize> = (0..d).collect();
    let mut frozen = Vec::with_capacity(d);
    let mut transforms = Vec::new();

    for &xi in x_order.iter().take(d.saturating_sub(1)) {
        let target = xp[xi];
        active.sort_by(|&a, &b| work[b].total_cmp(&work[a]).then(a.cmp(&b)));
        let top = active[0];
        let v1 = work[top];
        if target < v1 {
            let r = active.len();
            let pos = (1..r)
                .rev()
                .find(|&p| work[active[p]] <= target && target <= work[active[p - 1]])
                .unwrap_or(r - 1);
            let partner = active[pos];
            let vk = work[partner];
            if v1 > vk {
                let t = ((target - vk) / (v1 - vk)).clamp(0.0, 1.0);
                if t < 1.0 {
                    let tt = TTransform {
                        i: top,
                        k: partner,
                        t,
                    };
                    tt.apply_in_place(&mut work);
                    transforms.push(tt);
                }
            }
        }
        frozen.push(top);
        active.remove(0);
    }
    frozen.extend(active);

    let mut target_permutation = vec![0; d];
    for (j, &c) in frozen.iter().enumerate() {
        target_permutation[c] = x_order[j];
    }
    Ok(TChain {
        transforms,
        source_permutation: source,
        target_permutation,
        x_len: x.len(),
        y_len: y.len(),
    })
}

/// Applies `chain` to `y`. The result has the chain's padded dimension.
pub fn apply_t_chain(chain: &TChain, y: &ProbVector) -> Result<ProbVector> {
    let d = chain.dim();
    if y.len() != d && y.len() != chain.y_len {
        return Err(Error::InvalidArgument(format!(
            "chain acts on dimension {d}, vector has length {}",
            y.len()
        )));
    }
    let yp = y.padded(d);
    let mut frame: Vec<f64> = chain.source_permutation.iter().map(|&i| yp[i]).collect();
    for t in &chain.transforms {
        t.apply_in_place(&mut frame);
    }
    let mut out = vec![0.0; d];
    for (c, &v) in frame.iter().enumerate() {
        out[chain.target_permutation[c]] = v;
    }
    ProbVector::new(out, PROB_TOL)
}

/// Applies raw T-transforms, in order, to `y`.
pub fn apply_transforms(transforms: &[TTransform], y: &ProbVector) -> Result<ProbVector> {
    let mut v = y.weights().to_vec();
    for t in transforms {
        if t.i >= v.len() || t.k >= v.len() {
            return Err(Error::InvalidArgument(format!(
                "{t} out of range for length {}",
                v.len()
            )));
        }
        t.apply_in_place(&mut v);
    }
    ProbVector::new(v, PROB_TOL)
}

/// Real orthogonal `W` whose entrywise square `D` is doubly stochastic with
/// `D y = x`.
#[derive(Debug, Clone, PartialEq)]
pub struct HornWitness {
    pub orthogonal: DMatrix<f64>,
    pub stochastic: DMatrix<f64>,
    pub chain: TChain,
}

impl HornWitness {
    pub fn orthogonal_complex(&self) -> ComplexMatrix {
        ComplexMatrix(self.orthogonal.map(|w| C64::new(w, 0.0)))
    }

    /// ||W Wᵀ - I||_F
    pub fn orthogonality_error(&self) -> f64 {
        let n = self.orthogonal.nrows();
        (&self.orthogonal * self.orthogonal.transpose() - DMatrix::<f64>::identity(n, n)).norm()
    }

    /// Largest deviation of a row or column sum of `D` from one.
    pub fn stochasticity_error(&self) -> f64 {
        stochasticity_error(&self.stochastic)
    }
}

pub(crate) fn stochasticity_error(d: &DMatrix<f64>) -> f64 {
    let rows = d.row_iter().map(|r| (r.sum() - 1.0).abs());
    let cols = d.column_iter().map(|c| (c.sum() - 1.0).abs());
    rows.chain(cols).fold(0.0, f64::max)
}

/// Orthogonal matrix `W` with `(W_ij²) y = x`.
///
/// Starting from the identity, the chain's transforms are folded in from the
/// last applied to the first. For a transform on `(a, b)` with parameter
/// `t`, where the current `U` fixes coordinate `a`, columns `a` and `b` are
/// replaced by
///
/// ```text
/// W[:, a] =  √t e_a + √(1-t) U[:, b]
/// W[:, b] = -√(1-t) e_a + √t U[:, b]
/// ```
///
/// which is a rotation inside `span{e_a, U[:, b]}` and so keeps `W`
/// orthogonal, while `W_ij²` picks up exactly the T-transform's averaging.
pub fn horn_orthogonal(x: &ProbVector, y: &ProbVector) -> Result<HornWitness> {
    horn_orthogonal_with_tol(x, y, PROB_TOL)
}

pub fn horn_orthogonal_with_tol(x: &ProbVector, y: &ProbVector, tol: f64) -> Result<HornWitness> {
    let chain = t_transform_chain_with_tol(x, y, tol)?;
    let d = chain.dim();
    let mut u = DMatrix::<f64>::identity(d, d);
    for t in chain.transforms.iter().rev() {
        let (a, b) = (t.i, t.k);
        let st = t.t.sqrt();
        let sc = (1.0 - t.t).sqrt();
        let ub = u.column(b).into_owned();
        let mut col_a = &ub * sc;
        col_a[a] += st;
        let mut col_b = &ub * st;
        col_b[a] -= sc;
        u.set_column(a, &col_a);
        u.set_column(b, &col_b);
    }
    let orthogonal =
        permute_into_original(&u, &chain.source_permutation, &chain.target_permutation);
    let stochastic = orthogonal.map(|w| w * w);
    Ok(HornWitness {
        orthogonal,
        stochastic,
        chain,
    })
}

/// Entrywise `|u_ij|²` of a unitary matrix.
pub fn unitary_to_stochastic(u: &ComplexMatrix) -> Result<DMatrix<f64>> {
    unitary_to_stochastic_with_tol(u, 1e-9)
}

pub fn unitary_to_stochastic_with_tol(u: &ComplexMatrix, tol: f64) -> Result<DMatrix<f64>> {
    u.check_unitary(tol)?;
    Ok(u.as_dmatrix().map(|z| z.norm_sqr()))
}

/// Functions monotone under majorization.
///
/// All variants except [`SchurFunction::NegMax`] are Schur-convex
/// (`x ≺ y` implies `f(x) ≤ f(y)`). `NegMax` is Schur-concave, since
/// `x ≺ y` gives `x↓_1 ≤ y↓_1`; it is evaluated on request and audited with
/// the reversed inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum SchurFunction {
    /// Σ x_i ln x_i
    NegEntropy,
    /// Σ x_i^k with k ≥ 1
    PowerSum { k: f64 },
    /// -Π x_i
    NegProduct,
    /// -x↓_1
    NegMax,
    /// x↓_1
    Max,
    /// -x↓_d
    NegMin,
    /// Σ f(x_i) for a convex scalar f
    SumConvex { f: ConvexScalar },
}

/// Convex functions on `[0, 1]`; `x ↦ Σ f(x_i)` is Schur-convex for each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvexScalar {
    /// x ln x
    XLogX,
    /// x²
    Square,
    /// e^x
    Exp,
    /// -√x
    NegSqrt,
    /// |x - 1/2|
    AbsCentered,
}

impl ConvexScalar {
    pub const ALL: [ConvexScalar; 5] = [
        ConvexScalar::XLogX,
        ConvexScalar::Square,
        ConvexScalar::Exp,
        ConvexScalar::NegSqrt,
        ConvexScalar::AbsCentered,
    ];

    pub fn eval(self, x: f64) -> f64 {
        match self {
            ConvexScalar::XLogX if x > 0.0 => x * x.ln(),
            ConvexScalar::XLogX => 0.0,
            ConvexScalar::Square => x * x,
            ConvexScalar::Exp => x.exp(),
            ConvexScalar::NegSqrt => -x.max(0.0).sqrt(),
            ConvexScalar::AbsCentered => (x - 0.5).abs(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ConvexScalar::XLogX => "x_log_x",
            ConvexScalar::Square => "square",
            ConvexScalar::Exp => "exp",
            ConvexScalar::NegSqrt => "neg_sqrt",
            ConvexScalar::AbsCentered => "abs_centered",
        }
    }
}

impl SchurFunction {
    /// Looks up a function by id. `k` is required (and must be ≥ 1) for
    /// `power_sum`; `sum_<scalar>` selects a [`ConvexScalar`].
    pub fn from_name(name: &str, k: Option<f64>) -> Result<Self> {
        match name {
            "neg_entropy" => Ok(SchurFunction::NegEntropy),
            "power_sum" => {
                let k = k.ok_or_else(|| Error::InvalidArgument("power_sum needs k".into()))?;
                if k.is_nan() || k < 1.0 {
                    return Err(Error::InvalidArgument(format!(
                        "power_sum needs k >= 1, got {k}"
                    )));
                }
                Ok(SchurFunction::PowerSum { k })
            }
            "neg_product" => Ok(SchurFunction::NegProduct),
            "neg_max" => Ok(SchurFunction::NegMax),
            "max" => Ok(SchurFunction::Max),
            "neg_min" => Ok(SchurFunction::NegMin),
            other => other
                .strip_prefix("sum_")
                .and_then(|f| ConvexScalar::ALL.into_iter().find(|c| c.name() == f))
                .map(|f| SchurFunction::SumConvex { f })
                .ok_or_else(|| Error::UnknownFunction(other.to_string())),
        }
    }

    pub fn name(&self) -> String {
        match self {
            SchurFunction::NegEntropy => "neg_entropy".into(),
            SchurFunction::PowerSum { k } => format!("power_sum(k={k})"),
            SchurFunction::NegProduct => "neg_product".into(),
            SchurFunction::NegMax => "neg_max".into(),
            SchurFunction::Max => "max".into(),
            SchurFunction::NegMin => "neg_min".into(),
            SchurFunction::SumConvex { f } => format!("sum_{}", f.name()),
        }
    }

    pub fn is_schur_convex(&self) -> bool {
        !matches!(self, SchurFunction::NegMax)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match *self {
            SchurFunction::NegEntropy => ConvexScalar::XLogX.sum(x),
            SchurFunction::PowerSum { k } => x.iter().map(|&p| p.powf(k)).sum(),
            SchurFunction::NegProduct => -x.iter().product::<f64>(),
            SchurFunction::NegMax => -x.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            SchurFunction::Max => x.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            SchurFunction::NegMin => -x.iter().copied().fold(f64::INFINITY, f64::min),
            SchurFunction::SumConvex { f } => f.sum(x),
        }
    }

    /// Every built-in function, in report order.
    pub fn registry() -> Vec<SchurFunction> {
        let mut out = vec![
            SchurFunction::NegEntropy,
            SchurFunction::PowerSum { k: 1.5 },
            SchurFunction::PowerSum { k: 2.0 },
            SchurFunction::PowerSum { k: 3.0 },
            SchurFunction::NegProduct,
            SchurFunction::Max,
            SchurFunction::NegMin,
            SchurFunction::NegMax,
        ];
        out.extend(
            ConvexScalar::ALL
                .into_iter()
                .map(|f| SchurFunction::SumConvex { f }),
        );
        out
    }
}

impl ConvexScalar {
    fn sum(self, x: &[f64]) -> f64 {
        x.iter().map(|&p| self.eval(p)).sum()
    }
}

/// Evaluates a named Schur function on `x`.
pub fn schur_value(name: &str, x: &ProbVector, k: Option<f64>) -> Result<f64> {
    Ok(SchurFunction::from_name(name, k)?.eval(x.weights()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchurComparison {
    pub function: SchurFunction,
    pub name: String,
    pub schur_convex: bool,
    pub value_x: f64,
    pub value_y: f64,
    /// `value_x ≤ value_y + tol` for Schur-convex functions, the reverse for
    /// Schur-concave ones.
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchurReport {
    /// Common length both vectors were zero-padded to.
    pub padded_len: usize,
    pub comparisons: Vec<SchurComparison>,
    pub all_hold: bool,
}

/// Slack allowed on every Schur inequality.
pub const SCHUR_TOL: f64 = 1e-9;

/// Compares every registered function on `x ≺ y`.
pub fn check_schur_inequalities(x: &ProbVector, y: &ProbVector) -> Result<SchurReport> {
    require_majorized(x, y, PROB_TOL)?;
    Ok(schur_comparisons(x.weights(), y.weights()))
}

pub(crate) fn schur_comparisons(x: &[f64], y: &[f64]) -> SchurReport {
    let d = x.len().max(y.len());
    let mut xp = x.to_vec();
    let mut yp = y.to_vec();
    xp.resize(d, 0.0);
    yp.resize(d, 0.0);
    let comparisons: Vec<SchurComparison> = SchurFunction::registry()
        .into_iter()
        .map(|f| {
            let value_x = f.eval(&xp);
            let value_y = f.eval(&yp);
            let holds = if f.is_schur_convex() {
                value_x <= value_y + SCHUR_TOL
            } else {
                value_x + SCHUR_TOL >= value_y
            };
            SchurComparison {
                function: f,
                name: f.name(),
                schur_convex: f.is_schur_convex(),
                value_x,
                value_y,
                holds,
            }
        })
        .collect();
    let all_hold = comparisons.iter().all(|c| c.holds);
    SchurReport {
        padded_len: d,
        comparisons,
        all_hold,
    }
}
