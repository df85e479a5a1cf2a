//! Writes input documents, runs jobs through the same entry point as the
//! binary and prints the reports.
//!
//!     cargo run --example json_jobs

use clap::Parser;
use ensemble_majorize::bipartite::BipartiteState;
use ensemble_majorize::cli::{run_job, Document, JobSpec};
use ensemble_majorize::majorize::ProbVector;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("ensemble-majorize-example");
    std::fs::create_dir_all(&dir)?;
    let save = |name: &str, doc: &Document| -> std::io::Result<String> {
        let path = dir.join(name);
        std::fs::write(&path, serde_json::to_string_pretty(doc)?)?;
        Ok(path.to_string_lossy().into_owned())
    };

    let x = save(
        "x.json",
        &Document::probvec(&ProbVector::new(vec![0.5, 0.3, 0.2], 1e-12)?),
    )?;
    let y = save(
        "y.json",
        &Document::probvec(&ProbVector::new(vec![0.7, 0.2, 0.1], 1e-12)?),
    )?;
    let bell = save(
        "bell.json",
        &Document::bipartite(&BipartiteState::maximally_entangled(2)),
    )?;
    println!("input document:\n{}", std::fs::read_to_string(&x)?);

    for args in [
        vec!["majorize-check", "-i", &y, "-i", &x],
        vec!["majorize-decompose", "-i", &x, "-i", &y],
        vec!["protocol-run", "-i", &bell, "--seed", "1"],
    ] {
        let spec = JobSpec::try_parse_from(
            std::iter::once("ensemble-majorize").chain(args.iter().copied()),
        )?;
        let out = run_job(&spec);
        println!(
            "$ ensemble-majorize {}\nexit code {}",
            args.join(" "),
            out.exit_code
        );
        if let Some(msg) = out.message {
            println!("message: {msg}");
        }
        if let Some(report) = out.report {
            print!("{report}");
        }
        println!();
    }
    Ok(())
}
