//! Library outputs against frozen reference values in `fixtures/oracle.json`.
//! Regenerate with `tests/oracle/generate.py`.

use std::sync::OnceLock;

use clap::Parser;
use ensemble_majorize::bipartite::{schmidt, BipartiteState};
use ensemble_majorize::cli::{run_job, Document, JobSpec, EXIT_REJECTED};
use ensemble_majorize::ensembles::{density_from_ensemble, Ensemble};
use ensemble_majorize::majorize::{schur_value, t_transform_chain, ProbVector};
use ensemble_majorize::numkernel::{
    frobenius_distance, hermitian_eig, ComplexMatrix, DensityMatrix, StateVector, C64,
};
use ensemble_majorize::protocol::{comm_cost, prepare_protocol, weyl_twirl, WeylPair};
use serde_json::Value;

fn oracle() -> &'static Value {
    static CELL: OnceLock<Value> = OnceLock::new();
    CELL.get_or_init(|| {
        serde_json::from_str(include_str!("fixtures/oracle.json")).expect("fixture parses")
    })
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect()
}

fn complex_list(v: &Value) -> Vec<C64> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|p| {
            let p = floats(p);
            C64::new(p[0], p[1])
        })
        .collect()
}

fn complex_rows(v: &Value) -> ComplexMatrix {
    let rows: Vec<Vec<C64>> = v.as_array().unwrap().iter().map(complex_list).collect();
    let n = rows.len();
    ComplexMatrix::from_row_major(n, rows[0].len(), rows.concat()).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn prob(w: &[f64]) -> ProbVector {
    ProbVector::new(w.to_vec(), 1e-12).unwrap()
}

#[test]
fn hermitian_eigenvalues_match_lapack() {
    let case = &oracle()["hermitian8"];
    let spec = hermitian_eig(&complex_rows(&case["matrix"])).unwrap();
    for (got, want) in spec.eigenvalues().iter().zip(floats(&case["eigenvalues"])) {
        assert!(close(*got, want, 1e-12), "{got} vs {want}");
    }

    let indefinite = ComplexMatrix::from_real_rows(&[vec![0.5, 0.6], vec![0.6, 0.5]]).unwrap();
    let got = hermitian_eig(&indefinite).unwrap();
    for (g, w) in got
        .eigenvalues()
        .iter()
        .zip(floats(&oracle()["indefinite2"]["eigenvalues"]))
    {
        assert!(close(*g, w, 1e-14));
    }
}

#[test]
fn t_chains_match_exact_rationals() {
    for case in oracle()["chains"].as_array().unwrap() {
        let chain =
            t_transform_chain(&prob(&floats(&case["x"])), &prob(&floats(&case["y"]))).unwrap();
        let steps = case["steps"].as_array().unwrap();
        assert_eq!(chain.transforms.len(), steps.len());
        for (t, s) in chain.transforms.iter().zip(steps) {
            assert_eq!(t.i as u64, s["i"].as_u64().unwrap());
            assert_eq!(t.k as u64, s["k"].as_u64().unwrap());
            let q = floats(&s["t"]);
            assert!(
                close(t.t, q[0] / q[1], 1e-14),
                "{} vs {}/{}",
                t.t,
                q[0],
                q[1]
            );
        }
    }
}

#[test]
fn schur_function_values() {
    let s = &oracle()["schur"];
    let v = |name: &str, w: &[f64], k: Option<f64>| schur_value(name, &prob(w), k).unwrap();
    assert!(close(
        v("neg_entropy", &[0.5, 0.5], None),
        s["neg_entropy_half_half"].as_f64().unwrap(),
        1e-15
    ));
    assert!(close(
        v("power_sum", &[1.0 / 3.0; 3], Some(2.0)),
        s["power_sum2_uniform3"].as_f64().unwrap(),
        1e-15
    ));
    assert!(close(
        v("power_sum", &[0.5, 0.3, 0.2], Some(2.0)),
        s["power_sum2_532"].as_f64().unwrap(),
        1e-15
    ));
    assert!(close(
        prob(&[0.5, 0.5]).shannon_entropy(),
        s["ln2"].as_f64().unwrap(),
        1e-15
    ));
    assert!(close(
        ProbVector::uniform(3).shannon_entropy(),
        s["ln3"].as_f64().unwrap(),
        1e-15
    ));
}

#[test]
fn mixture_and_distance() {
    let zero = StateVector::basis(2, 0);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = StateVector::new(vec![C64::new(h, 0.0), C64::new(h, 0.0)], 1e-12).unwrap();
    let e = Ensemble::from_pairs(vec![(0.5, zero.clone()), (0.5, plus)]).unwrap();
    let rho = density_from_ensemble(&e).unwrap();
    let want = complex_rows(&oracle()["mixture_zero_plus"]);
    assert!(frobenius_distance(rho.matrix(), &want).unwrap() <= 1e-15);

    let d = frobenius_distance(
        DensityMatrix::from_pure(&zero).matrix(),
        DensityMatrix::maximally_mixed(2).matrix(),
    )
    .unwrap();
    assert!(close(
        d,
        oracle()["pure_vs_mixed_distance"].as_f64().unwrap(),
        1e-15
    ));
}

#[test]
fn schmidt_coefficients_match_svd() {
    let case = &oracle()["schmidt34"];
    let psi = BipartiteState::new(3, 4, complex_list(&case["amplitudes"]), 1e-10).unwrap();
    let sd = schmidt(&psi).unwrap();
    let want = floats(&case["coefficients"]);
    assert_eq!(sd.rank(), want.len());
    for (got, want) in sd.coefficients.weights().iter().zip(want) {
        assert!(close(*got, want, 1e-14), "{got} vs {want}");
    }
}

#[test]
fn weyl_twirl_scalar() {
    for case in oracle()["twirl"].as_array().unwrap() {
        let d = case["d"].as_u64().unwrap() as usize;
        let a = complex_rows(&case["matrix"]);
        let tw = weyl_twirl(&a).unwrap();
        let scalar = case["scalar"].as_f64().unwrap();
        assert!(close(
            scalar,
            d as f64 * case["trace"].as_f64().unwrap(),
            1e-12
        ));
        let want = ComplexMatrix::diagonal(&vec![scalar; d]);
        assert!(frobenius_distance(&tw, &want).unwrap() <= 1e-12);
    }
}

#[test]
fn protocol_statistics_match_simulation() {
    for case in oracle()["protocol"].as_array().unwrap() {
        let u = |k: &str| case[k].as_u64().unwrap() as usize;
        let (da, db, d) = (u("dim_a"), u("dim_b"), u("d"));
        let target = BipartiteState::new(da, db, complex_list(&case["amplitudes"]), 1e-10).unwrap();
        let setup = prepare_protocol(&target, d).unwrap();
        assert!(setup.measurement.completeness_error() <= 1e-12);
        assert!(case["completeness_error"].as_f64().unwrap() <= 1e-12);

        let probs = floats(&case["probabilities"]);
        let fids = floats(&case["fidelities"]);
        for k in 0..d * d {
            let pair = WeylPair::from_index(d, k);
            let t = setup.run_branch(pair, None).unwrap();
            assert!(
                close(t.outcome_probability, probs[k], 1e-12),
                "p{k}: {} vs {}",
                t.outcome_probability,
                probs[k]
            );
            assert!(
                close(t.fidelity, fids[k], 1e-12),
                "f{k}: {} vs {}",
                t.fidelity,
                fids[k]
            );
        }
    }
}

#[test]
fn communication_cost_table() {
    for case in oracle()["comm_cost"].as_array().unwrap() {
        let c = comm_cost(case["d"].as_u64().unwrap() as usize).unwrap();
        assert_eq!(c.bits as u64, case["bits"].as_u64().unwrap());
        assert_eq!(
            c.prior_protocol_bits as u64,
            case["prior"].as_u64().unwrap()
        );
    }
}

#[test]
fn majorize_check_rejection_reason() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, w: &[f64]| {
        let path = dir.path().join(name);
        std::fs::write(
            &path,
            serde_json::to_string(&Document::probvec(&prob(w))).unwrap(),
        )
        .unwrap();
        path
    };
    let x = write("x.json", &[0.75, 0.25]);
    let y = write("y.json", &[0.5, 0.5]);
    let spec = JobSpec::parse_from([
        "ensemble-majorize".as_ref(),
        "majorize-check".as_ref(),
        "-i".as_ref(),
        x.as_os_str(),
        "-i".as_ref(),
        y.as_os_str(),
    ]);
    let out = run_job(&spec);
    assert_eq!(out.exit_code, EXIT_REJECTED);
    assert_eq!(out.message.as_deref(), oracle()["cli_reason"].as_str());
}
