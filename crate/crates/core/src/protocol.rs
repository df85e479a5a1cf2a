//! Exact simulation of the measurement-based transformation of a maximally
//! entangled state into an arbitrary target with Schmidt rank at most `d`.
//!
//! The target is first written with uniform weights,
//! `|φ⟩ = Σ_i |i_A'⟩|φ_i⟩ / √d`. Bob measures with
//! `E_{s,t} = E U_{s,t}`, where `E = F / √(d·tr F†F)`,
//! `F = Σ_i |φ_i⟩⟨i|` and `U_{s,t} = X^s Z^t` are the Weyl operators. He
//! announces `(s, t)` using `⌈2 log₂ d⌉` bits, and Alice applies
//! `X^s Z^{-t}` in her basis `{|i_A'⟩}`, which recovers `|φ⟩` on every
//! branch.
//!
//! The Weyl twirl satisfies `Σ_{s,t} U†_{s,t} A U_{s,t} = d·tr(A)·I`; the
//! factor `d` is what forces the `√d` in the normalization of `E`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bipartite::{corollary4_decompose, schmidt, BipartiteState, Cor4Decomposition};
use crate::error::{Error, Result};
use crate::majorize::ProbVector;
use crate::numkernel::{ComplexMatrix, StateVector, C64};
use crate::random::rng;

/// Weyl operator index `(s, t)` with `0 ≤ s, t < d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeylPair {
    pub d: usize,
    pub s: usize,
    pub t: usize,
}

impl WeylPair {
    pub fn new(d: usize, s: usize, t: usize) -> Result<Self> {
        if d == 0 || s >= d || t >= d {
            return Err(Error::InvalidArgument(format!(
                "Weyl pair ({s}, {t}) out of range for d = {d}"
            )));
        }
        Ok(WeylPair { d, s, t })
    }

    /// Outcome index `s·d + t`.
    pub fn index(&self) -> usize {
        self.s * self.d + self.t
    }

    pub fn from_index(d: usize, k: usize) -> Self {
        WeylPair {
            d,
            s: k / d,
            t: k % d,
        }
    }

    /// All `d²` pairs in index order.
    pub fn all(d: usize) -> impl Iterator<Item = WeylPair> {
        (0..d * d).map(move |k| WeylPair::from_index(d, k))
    }
}

/// ω^n with ω = exp(2πi/d), reducing `n` mod `d` first.
fn root_of_unity(d: usize, n: usize) -> C64 {
    C64::from_polar(1.0, 2.0 * PI * ((n % d) as f64) / d as f64)
}

fn check_d(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidArgument(
            "dimension d must be at least 1".into(),
        ));
    }
    Ok(())
}

/// `X|j⟩ = |j ⊕ 1⟩`
pub fn shift_op(d: usize) -> Result<ComplexMatrix> {
    check_d(d)?;
    weyl_op(&WeylPair::new(d, 1 % d, 0)?)
}

/// `Z|j⟩ = ω^j |j⟩`
pub fn clock_op(d: usize) -> Result<ComplexMatrix> {
    check_d(d)?;
    weyl_op(&WeylPair::new(d, 0, 1 % d)?)
}

/// `U_{s,t} = X^s Z^t`, i.e. `U_{s,t}|j⟩ = ω^{jt} |j ⊕ s⟩`.
pub fn weyl_op(pair: &WeylPair) -> Result<ComplexMatrix> {
    let WeylPair { d, s, t } = *pair;
    WeylPair::new(d, s, t)?;
    let mut m = DMatrix::<C64>::zeros(d, d);
    for j in 0..d {
        m[((j + s) % d, j)] = root_of_unity(d, j * t);
    }
    Ok(ComplexMatrix(m))
}

/// `Σ_{s,t} U†_{s,t} A U_{s,t}`
pub fn weyl_twirl(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let d = a.rows();
    check_d(d)?;
    let mut sum = DMatrix::<C64>::zeros(d, d);
    for pair in WeylPair::all(d) {
        let u = weyl_op(&pair)?;
        sum += u.adjoint().as_dmatrix() * a.as_dmatrix() * u.as_dmatrix();
    }
    Ok(ComplexMatrix(sum))
}

/// Bob's measurement `{E_{s,t}}`, stored in outcome-index order.
///
/// `frame` is the orthonormal basis `{|i⟩}` of Bob's `d`-dimensional
/// subspace on which the Weyl operators act. On its orthogonal complement
/// each operator is `I/d`, so that the set is complete on all of Bob's space.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSet {
    d: usize,
    frame: Vec<StateVector>,
    operators: Vec<ComplexMatrix>,
}

impl MeasurementSet {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dim_b(&self) -> usize {
        self.frame[0].dim()
    }

    pub fn frame(&self) -> &[StateVector] {
        &self.frame
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn operator(&self, pair: &WeylPair) -> &ComplexMatrix {
        &self.operators[pair.index()]
    }

    /// ‖Σ E†E - I‖_F
    pub fn completeness_error(&self) -> f64 {
        let n = self.dim_b();
        let mut sum = DMatrix::<C64>::zeros(n, n);
        for e in &self.operators {
            sum += e.adjoint().as_dmatrix() * e.as_dmatrix();
        }
        (sum - DMatrix::<C64>::identity(n, n)).norm()
    }
}

/// Residual norm below which a vector is taken to lie in a span.
const SPAN_TOL: f64 = 1e-10;

fn project_out(basis: &[DVector<C64>], v: &mut DVector<C64>) {
    for _ in 0..2 {
        for b in basis {
            let proj = b.dotc(v);
            *v -= b * proj;
        }
    }
}

/// Bob's frame: the standard basis `|0⟩..|d-1⟩` when the states live there,
/// otherwise an orthonormal basis of their span completed to `d` vectors.
fn bob_frame(states: &[StateVector], d: usize) -> Vec<DVector<C64>> {
    let n = states[0].dim();
    let in_standard = states
        .iter()
        .all(|s| s.amplitudes().iter().skip(d).all(|z| z.norm() <= 1e-12));
    if in_standard {
        return (0..d)
            .map(|i| StateVector::basis(n, i).into_dvector())
            .collect();
    }
    let mut frame: Vec<DVector<C64>> = Vec::with_capacity(d);
    for s in states {
        let mut v = s.amplitudes().clone();
        project_out(&frame, &mut v);
        let r = v.norm();
        if r > SPAN_TOL {
            frame.push(v / C64::new(r, 0.0));
        }
    }
    while frame.len() < d {
        let mut best: Option<(f64, DVector<C64>)> = None;
        for k in 0..n {
            let mut e = StateVector::basis(n, k).into_dvector();
            project_out(&frame, &mut e);
            let r = e.norm();
            if best.as_ref().is_none_or(|(br, _)| r > *br) {
                best = Some((r, e));
            }
        }
        let (r, e) = best.expect("n >= d > 0");
        frame.push(e / C64::new(r, 0.0));
    }
    frame
}

/// Builds `{E_{s,t}}` from the target's B-side states `|φ_i⟩`.
pub fn build_measurement(target_states_b: &[StateVector], d: usize) -> Result<MeasurementSet> {
    check_d(d)?;
    if target_states_b.len() != d {
        return Err(Error::InvalidArgument(format!(
            "{} states given for d = {d}",
            target_states_b.len()
        )));
    }
    let n = target_states_b[0].dim();
    if n < d {
        return Err(Error::InvalidArgument(format!(
            "Bob's dimension {n} is below d = {d}"
        )));
    }
    for s in target_states_b {
        if s.dim() != n {
            return Err(Error::ShapeMismatch {
                left: (n, 1),
                right: (s.dim(), 1),
            });
        }
        let norm = s.amplitudes().norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::BadNorm { norm, tol: 1e-9 });
        }
    }
    let frame = bob_frame(target_states_b, d);
    let basis = DMatrix::from_columns(&frame);

    let mut f = DMatrix::<C64>::zeros(n, n);
    for (phi, fi) in target_states_b.iter().zip(&frame) {
        f += phi.amplitudes() * fi.adjoint();
    }
    let norm = (d as f64 * (f.adjoint() * &f).trace().re).sqrt();
    let e = f / C64::new(norm, 0.0);
    let complement =
        (DMatrix::<C64>::identity(n, n) - &basis * basis.adjoint()) / C64::new(d as f64, 0.0);

    let operators = WeylPair::all(d)
        .map(|pair| {
            let u = weyl_op(&pair).expect("pair in range");
            let embedded = &basis * u.as_dmatrix() * basis.adjoint();
            ComplexMatrix(&e * embedded + &complement)
        })
        .collect();
    Ok(MeasurementSet {
        d,
        frame: frame.into_iter().map(StateVector).collect(),
        operators,
    })
}

/// `Σ_i |a_i⟩|f_i⟩ / √d` for Alice's basis `a` and Bob's frame `f`.
pub fn resource_state(
    alice_basis: &[StateVector],
    bob_frame: &[StateVector],
) -> Result<BipartiteState> {
    if alice_basis.len() != bob_frame.len() || alice_basis.is_empty() {
        return Err(Error::InvalidArgument(
            "Alice and Bob bases differ in size".into(),
        ));
    }
    let (da, db) = (alice_basis[0].dim(), bob_frame[0].dim());
    let mut m = DMatrix::<C64>::zeros(da, db);
    for (a, b) in alice_basis.iter().zip(bob_frame) {
        m += a.amplitudes() * b.amplitudes().transpose();
    }
    BipartiteState::from_matrix(m / C64::new((alice_basis.len() as f64).sqrt(), 0.0), 1e-9)
}

/// `‖(I ⊗ E_{s,t})|ψ⟩‖²` for every outcome, in index order.
pub fn outcome_distribution(meas: &MeasurementSet, psi_max: &BipartiteState) -> Result<ProbVector> {
    if psi_max.dim_b() != meas.dim_b() {
        return Err(Error::ShapeMismatch {
            left: (meas.dim_b(), meas.dim_b()),
            right: psi_max.matrix().shape(),
        });
    }
    let sd = schmidt(psi_max)?;
    let d = meas.d();
    let flat = sd.rank() == d
        && sd
            .coefficients
            .weights()
            .iter()
            .all(|&p| (p - 1.0 / d as f64).abs() <= 1e-9);
    if !flat {
        return Err(Error::InvalidArgument(format!(
            "input is not maximally entangled with Schmidt rank {d}"
        )));
    }
    let probs = meas
        .operators()
        .iter()
        .map(|e| {
            psi_max
                .apply_b_raw(e.as_dmatrix())
                .map(|m| m.norm_squared())
        })
        .collect::<Result<Vec<f64>>>()?;
    ProbVector::new(probs, 1e-10)
}

/// Classical cost of announcing one of `d²` outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommCost {
    /// ⌈2 log₂ d⌉
    pub bits: u32,
    /// d - 1, the cost of the earlier round-based protocol.
    pub prior_protocol_bits: usize,
}

pub fn comm_cost(d: usize) -> Result<CommCost> {
    check_d(d)?;
    // smallest b with 2^b ≥ d², computed exactly
    let sq = (d as u128) * (d as u128);
    let bits = if sq <= 1 {
        0
    } else {
        128 - (sq - 1).leading_zeros()
    };
    Ok(CommCost {
        bits,
        prior_protocol_bits: d - 1,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolTranscript {
    pub d: usize,
    pub seed: Option<u64>,
    pub outcome: WeylPair,
    pub outcome_probability: f64,
    pub bits_sent: u32,
    /// Human-readable form of Alice's correction.
    pub correction: String,
    /// Powers `(a, b)` of Alice's `X^a Z^b`, with `b = -t mod d`.
    pub correction_powers: (usize, usize),
    pub final_state: BipartiteState,
    pub fidelity: f64,
}

/// Everything fixed before Bob measures.
#[derive(Debug, Clone)]
pub struct ProtocolSetup {
    pub d: usize,
    pub target: BipartiteState,
    pub decomposition: Cor4Decomposition,
    pub measurement: MeasurementSet,
    pub resource: BipartiteState,
    pub outcome_probabilities: ProbVector,
}

pub fn prepare_protocol(target: &BipartiteState, d: usize) -> Result<ProtocolSetup> {
    check_d(d)?;
    if target.dim_a() < d || target.dim_b() < d {
        return Err(Error::InvalidArgument(format!(
            "both parties need dimension at least d = {d}, got {}x{}",
            target.dim_a(),
            target.dim_b()
        )));
    }
    let rank = schmidt(target)?.rank();
    if rank > d {
        return Err(Error::SchmidtRankTooLarge { rank, d });
    }
    let decomposition = corollary4_decompose(target, &ProbVector::uniform(d))?;
    let measurement = build_measurement(&decomposition.states_b, d)?;
    let resource = resource_state(&decomposition.basis_a, measurement.frame())?;
    let outcome_probabilities = outcome_distribution(&measurement, &resource)?;
    Ok(ProtocolSetup {
        d,
        target: target.clone(),
        decomposition,
        measurement,
        resource,
        outcome_probabilities,
    })
}

impl ProtocolSetup {
    /// `X^a Z^b` written in Alice's basis, identity on its complement.
    fn alice_correction(&self, pair: &WeylPair) -> DMatrix<C64> {
        let d = self.d;
        let z_power = (d - pair.t) % d;
        let u = weyl_op(&WeylPair {
            d,
            s: pair.s,
            t: z_power,
        })
        .expect("in range");
        let cols: Vec<DVector<C64>> = self
            .decomposition
            .basis_a
            .iter()
            .map(|a| a.amplitudes().clone())
            .collect();
        let v = DMatrix::from_columns(&cols);
        let n = v.nrows();
        &v * u.as_dmatrix() * v.adjoint() + DMatrix::<C64>::identity(n, n) - &v * v.adjoint()
    }

    /// Runs the branch in which Bob observes `outcome`.
    pub fn run_branch(&self, outcome: WeylPair, seed: Option<u64>) -> Result<ProtocolTranscript> {
        let d = self.d;
        let outcome = WeylPair::new(d, outcome.s, outcome.t)?;
        let e = self.measurement.operator(&outcome);
        let post = self.resource.apply_b_raw(e.as_dmatrix())?;
        let post = BipartiteState::from_unnormalized(post)?;
        let corrected = post.apply_a(&self.alice_correction(&outcome))?;
        let final_state = corrected.with_canonical_phase();
        let fidelity = self.target.fidelity(&final_state)?.min(1.0);
        let z_power = (d - outcome.t) % d;
        Ok(ProtocolTranscript {
            d,
            seed,
            outcome,
            outcome_probability: self.outcome_probabilities.weights()[outcome.index()],
            bits_sent: comm_cost(d)?.bits,
            correction: format!(
                "X^{} Z^-{} on Alice (her Schmidt basis)",
                outcome.s, outcome.t
            ),
            correction_powers: (outcome.s, z_power),
            final_state,
            fidelity,
        })
    }

    /// Draws Bob's outcome by inverse CDF from a seeded ChaCha8 stream.
    pub fn sample_outcome(&self, seed: u64) -> WeylPair {
        let u: f64 = rng(seed).gen();
        let probs = self.outcome_probabilities.weights();
        let mut acc = 0.0;
        for (k, &p) in probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return WeylPair::from_index(self.d, k);
            }
        }
        WeylPair::from_index(self.d, probs.len() - 1)
    }
}

/// One sampled run of the protocol.
pub fn run_protocol(target: &BipartiteState, d: usize, seed: u64) -> Result<ProtocolTranscript> {
    let setup = prepare_protocol(target, d)?;
    let outcome = setup.sample_outcome(seed);
    setup.run_branch(outcome, Some(seed))
}

/// Every one of the `d²` branches, in outcome-index order.
pub fn run_protocol_exhaustive(
    target: &BipartiteState,
    d: usize,
) -> Result<Vec<ProtocolTranscript>> {
    let setup = prepare_protocol(target, d)?;
    WeylPair::all(d)
        .map(|pair| setup.run_branch(pair, None))
        .collect()
}

/// Whether every entry of `p` is within `tol` of `1/len`.
pub fn is_uniform(p: &ProbVector, tol: f64) -> bool {
    let n = p.len() as f64;
    p.weights().iter().all(|&w| (w - 1.0 / n).abs() <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::frobenius_distance;
    use crate::random::{random_bipartite_with_rank, rng};

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn shift_and_clock_small() {
        assert_eq!(shift_op(1).unwrap(), ComplexMatrix::identity(1));
        assert_eq!(clock_op(1).unwrap(), ComplexMatrix::identity(1));
        let x = shift_op(2).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(frobenius_distance(&x, &expected).unwrap() < 1e-15);
        let z = clock_op(2).unwrap();
        assert!(frobenius_distance(&z, &ComplexMatrix::diagonal(&[1.0, -1.0])).unwrap() < 1e-15);
        assert!(shift_op(0).is_err());
        assert!(clock_op(0).is_err());
    }

    #[test]
    fn group_order() {
        for d in 1..7 {
            let x = shift_op(d).unwrap();
            let z = clock_op(d).unwrap();
            let (mut xp, mut zp) = (ComplexMatrix::identity(d), ComplexMatrix::identity(d));
            for _ in 0..d {
                xp = xp.mul(&x).unwrap();
                zp = zp.mul(&z).unwrap();
            }
            assert!(frobenius_distance(&xp, &ComplexMatrix::identity(d)).unwrap() <= 1e-12);
            assert!(frobenius_distance(&zp, &ComplexMatrix::identity(d)).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn weyl_examples() {
        assert_eq!(
            weyl_op(&WeylPair::new(3, 0, 0).unwrap()).unwrap(),
            ComplexMatrix::identity(3)
        );
        let xz = weyl_op(&WeylPair::new(2, 1, 1).unwrap()).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        assert!(frobenius_distance(&xz, &expected).unwrap() < 1e-15);
        // X·Z matches the product of the factors
        let prod = shift_op(2).unwrap().mul(&clock_op(2).unwrap()).unwrap();
        assert!(frobenius_distance(&xz, &prod).unwrap() < 1e-15);
        assert!(WeylPair::new(2, 2, 0).is_err());
    }

    #[test]
    fn weyl_operators_trace_orthogonal() {
        let d = 3;
        let ops: Vec<ComplexMatrix> = WeylPair::all(d).map(|p| weyl_op(&p).unwrap()).collect();
        for (i, a) in ops.iter().enumerate() {
            for (j, b) in ops.iter().enumerate() {
                let tr = a.adjoint().mul(b).unwrap().trace();
                let expected = if i == j { d as f64 } else { 0.0 };
                assert!((tr - c(expected)).norm() < 1e-12, "pair {i},{j}");
            }
        }
    }

    #[test]
    fn twirl_carries_factor_d() {
        let twirl = weyl_twirl(&ComplexMatrix::identity(2)).unwrap();
        assert!(frobenius_distance(&twirl, &ComplexMatrix::diagonal(&[4.0, 4.0])).unwrap() < 1e-12);
    }

    #[test]
    fn identity_target_measurement() {
        let d = 3;
        let states: Vec<StateVector> = (0..d).map(|i| StateVector::basis(d, i)).collect();
        let m = build_measurement(&states, d).unwrap();
        for pair in WeylPair::all(d) {
            let u = weyl_op(&pair).unwrap();
            let expected = ComplexMatrix(u.as_dmatrix() / c(d as f64));
            assert!(frobenius_distance(m.operator(&pair), &expected).unwrap() < 1e-15);
        }
        assert!(m.completeness_error() < 1e-14);
    }

    #[test]
    fn measurement_validation() {
        let states = vec![StateVector::basis(2, 0)];
        assert!(build_measurement(&states, 2).is_err());
        assert!(build_measurement(&states, 0).is_err());
    }

    #[test]
    fn qubit_target_completeness() {
        let target = BipartiteState::new(
            2,
            2,
            vec![c(0.8f64.sqrt()), c(0.0), c(0.0), c(0.2f64.sqrt())],
            1e-9,
        )
        .unwrap();
        let setup = prepare_protocol(&target, 2).unwrap();
        assert_eq!(setup.measurement.operators().len(), 4);
        assert!(setup.measurement.completeness_error() <= 1e-10);
        assert!(is_uniform(&setup.outcome_probabilities, 1e-10));
    }

    #[test]
    fn protocol_qubit_example() {
        let target = BipartiteState::new(
            2,
            2,
            vec![c(0.8f64.sqrt()), c(0.0), c(0.0), c(0.2f64.sqrt())],
            1e-9,
        )
        .unwrap();
        let t = run_protocol(&target, 2, 42).unwrap();
        assert!(t.fidelity >= 1.0 - 1e-9);
        assert_eq!(t.bits_sent, 2);
        assert_eq!(t, run_protocol(&target, 2, 42).unwrap());
    }

    #[test]
    fn protocol_maximally_entangled_target() {
        let target = BipartiteState::maximally_entangled(4);
        for t in run_protocol_exhaustive(&target, 4).unwrap() {
            assert!(t.fidelity >= 1.0 - 1e-9);
            assert_eq!(t.bits_sent, 4);
        }
    }

    #[test]
    fn protocol_exhaustive_random_qutrit() {
        let mut g = rng(8);
        let target = random_bipartite_with_rank(&mut g, 3, 3, 3);
        let branches = run_protocol_exhaustive(&target, 3).unwrap();
        assert_eq!(branches.len(), 9);
        for b in branches {
            assert!(b.fidelity >= 1.0 - 1e-9);
            assert!((b.outcome_probability - 1.0 / 9.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn protocol_bob_larger_than_d() {
        let mut g = rng(4);
        let target = random_bipartite_with_rank(&mut g, 2, 5, 2);
        let setup = prepare_protocol(&target, 2).unwrap();
        assert!(setup.measurement.completeness_error() <= 1e-10);
        for b in run_protocol_exhaustive(&target, 2).unwrap() {
            assert!(b.fidelity >= 1.0 - 1e-9);
        }
    }

    #[test]
    fn protocol_rejects_high_schmidt_rank() {
        let target = BipartiteState::maximally_entangled(3);
        assert!(matches!(
            run_protocol(&target, 2, 0),
            Err(Error::SchmidtRankTooLarge { rank: 3, d: 2 })
        ));
    }

    #[test]
    fn trivial_dimension() {
        let target = BipartiteState::maximally_entangled(1);
        let setup = prepare_protocol(&target, 1).unwrap();
        assert_eq!(setup.outcome_probabilities.weights(), &[1.0]);
        let t = run_protocol(&target, 1, 3).unwrap();
        assert_eq!(t.bits_sent, 0);
    }

    #[test]
    fn comm_cost_examples() {
        assert_eq!(
            comm_cost(2).unwrap(),
            CommCost {
                bits: 2,
                prior_protocol_bits: 1
            }
        );
        assert_eq!(comm_cost(1).unwrap().bits, 0);
        assert_eq!(comm_cost(3).unwrap().bits, 4);
        assert_eq!(
            comm_cost(1024).unwrap(),
            CommCost {
                bits: 20,
                prior_protocol_bits: 1023
            }
        );
        assert!(comm_cost(0).is_err());
    }

    #[test]
    fn outcome_distribution_requires_maximal_entanglement() {
        let target = BipartiteState::new(
            2,
            2,
            vec![c(0.8f64.sqrt()), c(0.0), c(0.0), c(0.2f64.sqrt())],
            1e-9,
        )
        .unwrap();
        let setup = prepare_protocol(&target, 2).unwrap();
        assert!(outcome_distribution(&setup.measurement, &target).is_err());
    }
}
