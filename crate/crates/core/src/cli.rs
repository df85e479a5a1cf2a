//! Batch front end: JSON input documents, one job per invocation, JSON
//! reports.
//!
//! Every input file is a JSON object with a `"kind"` tag:
//!
//! ```json
//! {"kind": "probvec",   "weights": [0.5, 0.5]}
//! {"kind": "density",   "dim": 2, "entries": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]}
//! {"kind": "bipartite", "dim_a": 2, "dim_b": 2, "amplitudes": [[0.6, 0], [0, 0], [0, 0], [0.8, 0]]}
//! {"kind": "state",     "amplitudes": [[1, 0], [0, 0]]}
//! {"kind": "ensemble",  "members": [{"weight": 1.0, "state": [[1, 0], [0, 0]]}]}
//! ```
//!
//! Complex numbers are `[re, im]` pairs, matrices are lists of rows, and
//! bipartite amplitudes are row-major in `(a, b)`.
//!
//! Exit codes: `0` success, `1` domain rejection (the report is still
//! written, with `status = "rejected"` and a `reason`), `2` malformed input
//! or arguments.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, ValueEnum};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::bipartite::{corollary4_decompose, reduced_density, schmidt, BipartiteState, Side};
use crate::ensembles::{
    entropy_report, synthesize_ensemble_with_tol, verify_ensemble, Ensemble, Member,
};
use crate::error::{Error, Result};
use crate::majorize::{
    check_schur_inequalities, horn_orthogonal_with_tol, majorization_violation, ProbVector,
};
use crate::numkernel::{
    validate_density_with, ComplexMatrix, DensityMatrix, StateVector, Tolerances, C64,
};
use crate::protocol::{comm_cost, prepare_protocol, ProtocolTranscript, WeylPair};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Is x ≺ y? Inputs: probvec x, probvec y.
    MajorizeCheck,
    /// T-transform chain and orthogonal witness. Inputs: probvec x, probvec y.
    MajorizeDecompose,
    /// Ensemble of ρ with weights p. Inputs: density ρ, probvec p.
    EnsembleSynth,
    /// Audit an ensemble against ρ. Inputs: ensemble, density ρ.
    EnsembleVerify,
    /// Schmidt decomposition. Input: bipartite state.
    Schmidt,
    /// Rewrite a bipartite state with new weights q. Inputs: bipartite, probvec q.
    Corollary4,
    /// Simulate the Weyl measurement protocol. Input: bipartite target.
    ProtocolRun,
    /// Schur-convex function values. Inputs: probvec x, probvec y.
    SchurReport,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::MajorizeCheck => "majorize-check",
            Command::MajorizeDecompose => "majorize-decompose",
            Command::EnsembleSynth => "ensemble-synth",
            Command::EnsembleVerify => "ensemble-verify",
            Command::Schmidt => "schmidt",
            Command::Corollary4 => "corollary4",
            Command::ProtocolRun => "protocol-run",
            Command::SchurReport => "schur-report",
        }
    }

    fn expected_kinds(self) -> &'static [Kind] {
        use Kind::*;
        match self {
            Command::MajorizeCheck | Command::MajorizeDecompose | Command::SchurReport => {
                &[Probvec, Probvec]
            }
            Command::EnsembleSynth => &[Density, Probvec],
            Command::EnsembleVerify => &[Ensemble, Density],
            Command::Schmidt | Command::ProtocolRun => &[Bipartite],
            Command::Corollary4 => &[Bipartite, Probvec],
        }
    }
}

/// Tolerance overrides; unset flags keep the library defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct TolArgs {
    /// Hermiticity check
    #[arg(long = "tol-herm")]
    pub herm: Option<f64>,
    /// Trace check
    #[arg(long = "tol-trace")]
    pub trace: Option<f64>,
    /// Negative eigenvalue clipping
    #[arg(long = "tol-psd")]
    pub psd: Option<f64>,
    /// Orthogonality and unitarity checks
    #[arg(long = "tol-orth")]
    pub orth: Option<f64>,
    /// State norm check
    #[arg(long = "tol-norm")]
    pub norm: Option<f64>,
    /// Ensemble reconstruction check
    #[arg(long = "tol-recon")]
    pub recon: Option<f64>,
    /// Probability sums and majorization partial sums
    #[arg(long = "tol-major")]
    pub major: Option<f64>,
}

impl TolArgs {
    pub fn resolve(&self) -> Tolerances {
        let d = Tolerances::default();
        Tolerances {
            herm: self.herm.unwrap_or(d.herm),
            trace: self.trace.unwrap_or(d.trace),
            psd: self.psd.unwrap_or(d.psd),
            orth: self.orth.unwrap_or(d.orth),
            norm: self.norm.unwrap_or(d.norm),
            recon: self.recon.unwrap_or(d.recon),
            major: self.major.unwrap_or(d.major),
        }
    }
}

/// One batch job.
#[derive(Debug, Clone, Parser)]
#[command(
    name = "ensemble-majorize",
    version,
    about = "Majorization, ensemble synthesis and entanglement transformation jobs"
)]
pub struct JobSpec {
    #[arg(value_enum)]
    pub command: Command,
    /// Input document; repeat in the order the command expects.
    #[arg(short = 'i', long = "input", value_name = "FILE")]
    pub inputs: Vec<PathBuf>,
    /// Report path; stdout when omitted.
    #[arg(short = 'o', long = "output", value_name = "FILE")]
    pub output: Option<PathBuf>,
    /// Seed for sampling the protocol outcome.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Entanglement dimension d for protocol-run; defaults to the target's
    /// Schmidt rank.
    #[arg(long)]
    pub dim: Option<usize>,
    /// protocol-run: enumerate all d² outcomes instead of sampling one.
    #[arg(long)]
    pub exhaustive: bool,
    #[command(flatten)]
    pub tol: TolArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Probvec,
    Density,
    Bipartite,
    State,
    Ensemble,
}

impl Kind {
    fn tag(self) -> &'static str {
        match self {
            Kind::Probvec => "probvec",
            Kind::Density => "density",
            Kind::Bipartite => "bipartite",
            Kind::State => "state",
            Kind::Ensemble => "ensemble",
        }
    }
}

/// `[re, im]`
pub type ComplexPair = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MemberDoc {
    pub weight: f64,
    pub state: Vec<ComplexPair>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub synthetic: bool,
}

/// Wire form of every input and of the domain values embedded in reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Document {
    Probvec {
        weights: Vec<f64>,
    },
    Density {
        dim: usize,
        entries: Vec<Vec<ComplexPair>>,
    },
    Bipartite {
        dim_a: usize,
        dim_b: usize,
        amplitudes: Vec<ComplexPair>,
    },
    State {
        amplitudes: Vec<ComplexPair>,
    },
    Ensemble {
        members: Vec<MemberDoc>,
    },
}

/// A validated input.
#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    ProbVector(ProbVector),
    Density(DensityMatrix),
    Bipartite(BipartiteState),
    State(StateVector),
    Ensemble(Ensemble),
}

impl Input {
    pub fn kind(&self) -> Kind {
        match self {
            Input::ProbVector(_) => Kind::Probvec,
            Input::Density(_) => Kind::Density,
            Input::Bipartite(_) => Kind::Bipartite,
            Input::State(_) => Kind::State,
            Input::Ensemble(_) => Kind::Ensemble,
        }
    }
}

fn pair(z: C64) -> ComplexPair {
    [z.re, z.im]
}

fn complex(p: &ComplexPair) -> C64 {
    C64::new(p[0], p[1])
}

fn pairs(v: impl IntoIterator<Item = C64>) -> Vec<ComplexPair> {
    v.into_iter().map(pair).collect()
}

fn matrix_rows(m: &DMatrix<C64>) -> Vec<Vec<ComplexPair>> {
    m.row_iter().map(|r| pairs(r.iter().copied())).collect()
}

fn real_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

impl Document {
    pub fn probvec(p: &ProbVector) -> Self {
        Document::Probvec {
            weights: p.weights().to_vec(),
        }
    }

    pub fn density(rho: &DensityMatrix) -> Self {
        Document::Density {
            dim: rho.dim(),
            entries: matrix_rows(rho.matrix().as_dmatrix()),
        }
    }

    pub fn bipartite(psi: &BipartiteState) -> Self {
        Document::Bipartite {
            dim_a: psi.dim_a(),
            dim_b: psi.dim_b(),
            amplitudes: pairs(psi.to_row_major()),
        }
    }

    pub fn state(v: &StateVector) -> Self {
        Document::State {
            amplitudes: pairs(v.amplitudes().iter().copied()),
        }
    }

    pub fn ensemble(e: &Ensemble) -> Self {
        Document::Ensemble {
            members: e
                .members()
                .iter()
                .map(|m| MemberDoc {
                    weight: m.weight,
                    state: pairs(m.state.amplitudes().iter().copied()),
                    synthetic: m.synthetic,
                })
                .collect(),
        }
    }

    /// Validates the document into a domain value.
    pub fn validate(&self, tol: &Tolerances) -> Result<Input> {
        match self {
            Document::Probvec { weights } => Ok(Input::ProbVector(ProbVector::new(
                weights.clone(),
                tol.major,
            )?)),
            Document::Density { dim, entries } => {
                if entries.len() != *dim {
                    return Err(field_error(
                        "entries",
                        format!("{} rows for dim {dim}", entries.len()),
                    ));
                }
                if let Some((r, row)) = entries
                    .iter()
                    .enumerate()
                    .find(|(_, row)| row.len() != *dim)
                {
                    return Err(field_error(
                        "entries",
                        format!("row {r} has {} entries, expected {dim}", row.len()),
                    ));
                }
                let flat: Vec<C64> = entries.iter().flatten().map(complex).collect();
                let m = ComplexMatrix::from_row_major(*dim, *dim, flat)?;
                Ok(Input::Density(validate_density_with(&m, tol)?))
            }
            Document::Bipartite {
                dim_a,
                dim_b,
                amplitudes,
            } => Ok(Input::Bipartite(BipartiteState::new(
                *dim_a,
                *dim_b,
                amplitudes.iter().map(complex).collect(),
                tol.norm,
            )?)),
            Document::State { amplitudes } => Ok(Input::State(state_from_pairs(amplitudes, tol)?)),
            Document::Ensemble { members } => {
                if members.is_empty() {
                    return Err(field_error("members", "ensemble has no members".into()));
                }
                let members = members
                    .iter()
                    .map(|m| {
                        Ok(Member {
                            weight: m.weight,
                            state: state_from_pairs(&m.state, tol)?,
                            synthetic: m.synthetic,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Input::Ensemble(Ensemble::new(members)?))
            }
        }
    }
}

fn state_from_pairs(amplitudes: &[ComplexPair], tol: &Tolerances) -> Result<StateVector> {
    if amplitudes.is_empty() {
        return Err(field_error("amplitudes", "empty state".into()));
    }
    StateVector::new(amplitudes.iter().map(complex).collect(), tol.norm)
}

fn field_error(field: &str, message: String) -> Error {
    Error::InvalidArgument(format!("field `{field}`: {message}"))
}

/// Parses a document from text; `label` names the source in errors.
pub fn parse_document(text: &str, label: &str) -> Result<Document> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        path: label.to_string(),
        message: e.to_string(),
    })
}

/// Reads and validates one input file.
pub fn parse_input(path: &Path, tol: &Tolerances) -> Result<Input> {
    load_input(path, tol).map(|(input, _)| input)
}

fn load_input(path: &Path, tol: &Tolerances) -> Result<(Input, String)> {
    let bytes = fs::read(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let label = path.display().to_string();
    let text = std::str::from_utf8(&bytes).map_err(|e| Error::Parse {
        path: label.clone(),
        message: format!("not UTF-8: {e}"),
    })?;
    let input = parse_document(text, &label)?
        .validate(tol)
        .map_err(|e| match e {
            Error::Io { .. } | Error::Parse { .. } => e,
            other => Error::Parse {
                path: label.clone(),
                message: other.to_string(),
            },
        })?;
    Ok((input, hex::encode(Sha256::digest(&bytes))))
}

/// Result of a job: exit code, report text (absent on input errors) and a
/// message for stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct JobOutcome {
    pub exit_code: i32,
    pub report: Option<String>,
    pub message: Option<String>,
}

enum Status {
    Ok(Value),
    Rejected { reason: String, detail: Value },
}

/// Runs `spec` without touching the output path.
pub fn run_job(spec: &JobSpec) -> JobOutcome {
    let tol = spec.tol.resolve();
    let expected = spec.command.expected_kinds();
    if spec.inputs.len() != expected.len() {
        return input_error(format!(
            "{} expects {} input(s) ({}), got {}",
            spec.command.name(),
            expected.len(),
            expected
                .iter()
                .map(|k| k.tag())
                .collect::<Vec<_>>()
                .join(", "),
            spec.inputs.len()
        ));
    }
    let mut inputs = Vec::with_capacity(expected.len());
    let mut digests = Vec::with_capacity(expected.len());
    for (path, &kind) in spec.inputs.iter().zip(expected) {
        match load_input(path, &tol) {
            Ok((input, digest)) if input.kind() == kind => {
                inputs.push(input);
                digests.push(json!({"path": path.display().to_string(), "sha256": digest}));
            }
            Ok((input, _)) => {
                return input_error(format!(
                    "{}: expected a {} document, found {}",
                    path.display(),
                    kind.tag(),
                    input.kind().tag()
                ))
            }
            Err(e) => return input_error(e.to_string()),
        }
    }

    let status = match dispatch(spec, &tol, inputs) {
        Ok(s) => s,
        Err(e) if e.is_domain_rejection() => Status::Rejected {
            reason: e.to_string(),
            detail: Value::Null,
        },
        Err(e) => return input_error(e.to_string()),
    };

    let (exit_code, status_tag, reason, result) = match status {
        Status::Ok(v) => (EXIT_OK, "ok", Value::Null, v),
        Status::Rejected { reason, detail } => {
            (EXIT_REJECTED, "rejected", Value::String(reason), detail)
        }
    };
    let report = json!({
        "command": spec.command.name(),
        "version": VERSION,
        "status": status_tag,
        "reason": reason,
        "options": {
            "seed": spec.seed,
            "dim": spec.dim,
            "exhaustive": spec.exhaustive,
        },
        "tolerances": tol,
        "inputs": digests,
        "result": result,
    });
    let mut text = serde_json::to_string_pretty(&report).expect("report values are serializable");
    text.push('\n');
    JobOutcome {
        exit_code,
        message: reason.as_str().map(str::to_string),
        report: Some(text),
    }
}

fn input_error(message: String) -> JobOutcome {
    JobOutcome {
        exit_code: EXIT_INPUT,
        report: None,
        message: Some(message),
    }
}

fn take_probvec(i: Input) -> ProbVector {
    match i {
        Input::ProbVector(p) => p,
        _ => unreachable!("kind checked"),
    }
}

fn take_density(i: Input) -> DensityMatrix {
    match i {
        Input::Density(d) => d,
        _ => unreachable!("kind checked"),
    }
}

fn take_bipartite(i: Input) -> BipartiteState {
    match i {
        Input::Bipartite(b) => b,
        _ => unreachable!("kind checked"),
    }
}

fn take_ensemble(i: Input) -> Ensemble {
    match i {
        Input::Ensemble(e) => e,
        _ => unreachable!("kind checked"),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn dispatch(spec: &JobSpec, tol: &Tolerances, inputs: Vec<Input>) -> Result<Status> {
    let mut it = inputs.into_iter();
    let mut next = || it.next().expect("input count checked");
    match spec.command {
        Command::MajorizeCheck => {
            let (x, y) = (take_probvec(next()), take_probvec(next()));
            let violation = majorization_violation(x.weights(), y.weights(), tol.major);
            let result = json!({
                "x": Document::probvec(&x),
                "y": Document::probvec(&y),
                "majorized": violation.is_none(),
            });
            Ok(match violation {
                None => Status::Ok(result),
                Some(v) => Status::Rejected {
                    reason: v.to_string(),
                    detail: result,
                },
            })
        }
        Command::MajorizeDecompose => {
            let (x, y) = (take_probvec(next()), take_probvec(next()));
            let w = horn_orthogonal_with_tol(&x, &y, tol.major)?;
            let n = w.orthogonal.nrows();
            let image = &w.stochastic * nalgebra::DVector::from_vec(y.padded(n));
            let residual = image
                .iter()
                .zip(x.padded(n))
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            Ok(Status::Ok(json!({
                "chain": w.chain,
                "chain_length": w.chain.len(),
                "orthogonal": real_rows(&w.orthogonal),
                "stochastic": real_rows(&w.stochastic),
                "orthogonality_error": w.orthogonality_error(),
                "stochasticity_error": w.stochasticity_error(),
                "image_error": residual,
            })))
        }
        Command::EnsembleSynth => {
            let (rho, p) = (take_density(next()), take_probvec(next()));
            let e = synthesize_ensemble_with_tol(&rho, &p, tol.major)?;
            let verification = verify_ensemble(&e, &rho, tol.recon);
            let entropy = entropy_report(&e)?;
            Ok(Status::Ok(json!({
                "ensemble": Document::ensemble(&e),
                "verification": verification,
                "entropy": entropy,
            })))
        }
        Command::EnsembleVerify => {
            let (e, rho) = (take_ensemble(next()), take_density(next()));
            let verification = verify_ensemble(&e, &rho, tol.recon);
            let entropy = if verification.dimension_match {
                Some(entropy_report(&e)?)
            } else {
                None
            };
            let pass = verification.pass;
            let reason = verification_reason(&verification);
            let result = json!({"verification": verification, "entropy": entropy});
            Ok(if pass {
                Status::Ok(result)
            } else {
                Status::Rejected {
                    reason,
                    detail: result,
                }
            })
        }
        Command::Schmidt => {
            let psi = take_bipartite(next());
            let sd = schmidt(&psi)?;
            let error = (sd.reconstruct() - psi.matrix()).norm();
            let rho_a = reduced_density(&psi, Side::A)?;
            Ok(Status::Ok(json!({
                "rank": sd.rank(),
                "coefficients": Document::probvec(&sd.coefficients),
                "basis_a": sd.basis_a.iter().map(Document::state).collect::<Vec<_>>(),
                "basis_b": sd.basis_b.iter().map(Document::state).collect::<Vec<_>>(),
                "reduced_a": Document::density(&rho_a),
                "reconstruction_error": error,
            })))
        }
        Command::Corollary4 => {
            let (psi, q) = (take_bipartite(next()), take_probvec(next()));
            let c = corollary4_decompose(&psi, &q)?;
            let target = psi.embed_a(c.dim_a());
            let error = (c.reconstruct() - target.matrix()).norm();
            Ok(Status::Ok(json!({
                "weights": Document::probvec(&c.weights),
                "basis_a": c.basis_a.iter().map(Document::state).collect::<Vec<_>>(),
                "states_b": c.states_b.iter().map(Document::state).collect::<Vec<_>>(),
                "synthetic": c.synthetic,
                "dim_a": c.dim_a(),
                "reconstruction_error": error,
            })))
        }
        Command::ProtocolRun => {
            let target = take_bipartite(next());
            let d = match spec.dim {
                Some(d) => d,
                None => schmidt(&target)?.rank(),
            };
            let setup = prepare_protocol(&target, d)?;
            let transcripts = if spec.exhaustive {
                WeylPair::all(d)
                    .map(|p| setup.run_branch(p, None))
                    .collect::<Result<Vec<_>>>()?
            } else {
                vec![setup.run_branch(setup.sample_outcome(spec.seed), Some(spec.seed))?]
            };
            let min_fidelity = transcripts.iter().map(|t| t.fidelity).fold(1.0, f64::min);
            Ok(Status::Ok(json!({
                "d": d,
                "comm_cost": comm_cost(d)?,
                "completeness_error": setup.measurement.completeness_error(),
                "outcome_distribution": Document::probvec(&setup.outcome_probabilities),
                "min_fidelity": min_fidelity,
                "transcripts": transcripts.iter().map(transcript_value).collect::<Vec<_>>(),
            })))
        }
        Command::SchurReport => {
            let (x, y) = (take_probvec(next()), take_probvec(next()));
            Ok(Status::Ok(to_value(&check_schur_inequalities(&x, &y)?)))
        }
    }
}

fn verification_reason(v: &crate::ensembles::EnsembleReport) -> String {
    if !v.dimension_match {
        return "ensemble and density matrix have different dimensions".into();
    }
    if let Some(m) = &v.majorization_failure {
        return m.clone();
    }
    if let Some(r) = v.reconstruction_error.filter(|&r| r > v.tol) {
        return Error::EnsembleMismatch {
            error: r,
            tol: v.tol,
        }
        .to_string();
    }
    format!(
        "member state norm deviates from 1 by {:e}",
        v.max_norm_deviation
    )
}

pub fn transcript_value(t: &ProtocolTranscript) -> Value {
    json!({
        "d": t.d,
        "seed": t.seed,
        "outcome": {"s": t.outcome.s, "t": t.outcome.t, "index": t.outcome.index()},
        "outcome_probability": t.outcome_probability,
        "bits_sent": t.bits_sent,
        "correction": t.correction,
        "correction_powers": {"x": t.correction_powers.0, "z": t.correction_powers.1},
        "final_state": Document::bipartite(&t.final_state),
        "fidelity": t.fidelity,
    })
}

/// Parses `args`, runs the job, writes the report and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let spec = match JobSpec::try_parse_from(args) {
        Ok(s) => s,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let outcome = run_job(&spec);
    if let Some(report) = &outcome.report {
        match &spec.output {
            Some(path) => {
                if let Err(e) = fs::write(path, report) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return EXIT_INPUT;
                }
            }
            None => print!("{report}"),
        }
    }
    if let Some(m) = &outcome.message {
        let prefix = if outcome.exit_code == EXIT_REJECTED {
            "rejected"
        } else {
            "error"
        };
        eprintln!("{prefix}: {m}");
    }
    outcome.exit_code
}
