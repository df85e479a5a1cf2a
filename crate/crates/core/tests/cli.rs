use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ensemble_majorize::bipartite::BipartiteState;
use ensemble_majorize::cli::{parse_document, Document, EXIT_INPUT, EXIT_OK, EXIT_REJECTED};
use ensemble_majorize::majorize::ProbVector;
use ensemble_majorize::numkernel::{random_density, Tolerances};
use ensemble_majorize::random::{random_bipartite_with_rank, rng};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ensemble-majorize"))
        .args(args)
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, doc: &Document) -> String {
    let path: PathBuf = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(doc).unwrap()).unwrap();
    path.to_string_lossy().into_owned()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn probvec(w: &[f64]) -> Document {
    Document::probvec(&ProbVector::new(w.to_vec(), 1e-12).unwrap())
}

#[test]
fn majorize_check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let x = write(dir.path(), "x.json", &probvec(&[0.4, 0.35, 0.25]));
    let y = write(dir.path(), "y.json", &probvec(&[0.6, 0.3, 0.1]));

    let ok = run(&["majorize-check", "-i", &x, "-i", &y]);
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    let r = report(&ok);
    assert_eq!(r["status"], "ok");
    assert_eq!(r["result"]["majorized"], true);
    assert_eq!(r["inputs"].as_array().unwrap().len(), 2);
    assert_eq!(r["inputs"][0]["sha256"].as_str().unwrap().len(), 64);

    let rejected = run(&["majorize-check", "-i", &y, "-i", &x]);
    assert_eq!(rejected.status.code(), Some(EXIT_REJECTED));
    assert_eq!(report(&rejected)["status"], "rejected");
    assert!(String::from_utf8_lossy(&rejected.stderr).starts_with("rejected:"));
}

#[test]
fn malformed_inputs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad_sum = write(
        dir.path(),
        "bad.json",
        &Document::Probvec {
            weights: vec![0.5, 0.6],
        },
    );
    let good = write(dir.path(), "good.json", &probvec(&[1.0]));
    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{\"kind\": \"probvec\", \"weights\": [0.5,").unwrap();
    let garbage = garbage.to_string_lossy().into_owned();

    for args in [
        vec!["majorize-check", "-i", &bad_sum, "-i", &good],
        vec!["majorize-check", "-i", &garbage, "-i", &good],
        vec!["majorize-check", "-i", &good],
        vec!["schmidt", "-i", &good],
        vec!["majorize-check", "-i", "/nonexistent/x.json", "-i", &good],
        vec!["no-such-command"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(EXIT_INPUT), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
    let out = run(&["majorize-check", "-i", &garbage, "-i", &good]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let psi = random_bipartite_with_rank(&mut rng(3), 3, 4, 3);
    let target = write(dir.path(), "psi.json", &Document::bipartite(&psi));
    let rho = random_density(3, 2, 9).unwrap();
    let rho_path = write(dir.path(), "rho.json", &Document::density(&rho));
    let p = write(dir.path(), "p.json", &probvec(&[0.3, 0.3, 0.2, 0.2]));

    for args in [
        vec!["protocol-run", "-i", &target, "--seed", "17"],
        vec!["protocol-run", "-i", &target, "--exhaustive"],
        vec!["ensemble-synth", "-i", &rho_path, "-i", &p],
        vec!["schmidt", "-i", &target],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(
            a.status.code(),
            Some(EXIT_OK),
            "{args:?}: {}",
            String::from_utf8_lossy(&a.stderr)
        );
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(a.stdout.ends_with(b"\n"));
    }
}

#[test]
fn output_flag_writes_the_same_report() {
    let dir = tempfile::tempdir().unwrap();
    let x = write(dir.path(), "x.json", &probvec(&[0.5, 0.5]));
    let y = write(dir.path(), "y.json", &probvec(&[1.0, 0.0]));
    let out_path = dir.path().join("report.json");
    let to_file = run(&[
        "majorize-decompose",
        "-i",
        &x,
        "-i",
        &y,
        "-o",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(to_file.status.code(), Some(EXIT_OK));
    assert!(to_file.stdout.is_empty());
    let stdout = run(&["majorize-decompose", "-i", &x, "-i", &y]);
    assert_eq!(std::fs::read(&out_path).unwrap(), stdout.stdout);
    let r = report(&stdout);
    assert_eq!(r["result"]["chain_length"], 1);
}

#[test]
fn synthesized_ensemble_feeds_verify() {
    let dir = tempfile::tempdir().unwrap();
    let rho = random_density(3, 3, 4).unwrap();
    let rho_path = write(dir.path(), "rho.json", &Document::density(&rho));
    let p = write(dir.path(), "p.json", &probvec(&[0.25; 4]));
    let synth = report(&run(&["ensemble-synth", "-i", &rho_path, "-i", &p]));

    let doc = parse_document(&synth["result"]["ensemble"].to_string(), "report").unwrap();
    doc.validate(&Tolerances::default()).unwrap();
    let ens = write(dir.path(), "ens.json", &doc);
    let verify = run(&["ensemble-verify", "-i", &ens, "-i", &rho_path]);
    assert_eq!(verify.status.code(), Some(EXIT_OK));

    let other = write(
        dir.path(),
        "other.json",
        &Document::density(&random_density(3, 3, 5).unwrap()),
    );
    let mismatch = run(&["ensemble-verify", "-i", &ens, "-i", &other]);
    assert_eq!(mismatch.status.code(), Some(EXIT_REJECTED));
}

#[test]
fn corollary_and_protocol_reports() {
    let dir = tempfile::tempdir().unwrap();
    let psi = BipartiteState::maximally_entangled(2);
    let target = write(dir.path(), "psi.json", &Document::bipartite(&psi));
    let q = write(dir.path(), "q.json", &probvec(&[0.5, 0.25, 0.25]));
    let c4 = report(&run(&["corollary4", "-i", &target, "-i", &q]));
    assert!(c4["result"]["reconstruction_error"].as_f64().unwrap() <= 1e-12);
    assert_eq!(c4["result"]["dim_a"], 3);

    let too_peaked = write(dir.path(), "peaked.json", &probvec(&[0.9, 0.1]));
    assert_eq!(
        run(&["corollary4", "-i", &target, "-i", &too_peaked])
            .status
            .code(),
        Some(EXIT_REJECTED)
    );

    let pr = report(&run(&["protocol-run", "-i", &target, "--exhaustive"]));
    let transcripts = pr["result"]["transcripts"].as_array().unwrap();
    assert_eq!(transcripts.len(), 4);
    assert!(pr["result"]["min_fidelity"].as_f64().unwrap() >= 1.0 - 1e-12);
    assert_eq!(pr["result"]["comm_cost"]["bits"], 2);
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(EXIT_OK));
    assert_eq!(run(&["--version"]).status.code(), Some(EXIT_OK));
}
