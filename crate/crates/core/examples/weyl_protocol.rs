//! Creates an arbitrary Schmidt-rank-`d` target from a maximally entangled
//! resource with one Weyl measurement on Bob's side, one classical message
//! and a Weyl correction on Alice's side.
//!
//!     cargo run --example weyl_protocol

use ensemble_majorize::numkernel::ComplexMatrix;
use ensemble_majorize::protocol::{comm_cost, is_uniform, prepare_protocol, weyl_twirl, WeylPair};
use ensemble_majorize::random::{random_bipartite_with_rank, rng};

fn main() -> ensemble_majorize::Result<()> {
    let d = 3;
    let target = random_bipartite_with_rank(&mut rng(12), 3, 4, d);
    let setup = prepare_protocol(&target, d)?;

    println!(
        "measurement completeness error {:.2e}",
        setup.measurement.completeness_error()
    );
    println!(
        "outcome distribution uniform: {}",
        is_uniform(&setup.outcome_probabilities, 1e-12)
    );

    for pair in WeylPair::all(d) {
        let t = setup.run_branch(pair, None)?;
        println!(
            "  outcome ({}, {}): p = {:.4}, correction {:<10} fidelity {:.15}",
            pair.s, pair.t, t.outcome_probability, t.correction, t.fidelity
        );
    }
    let cost = comm_cost(d)?;
    println!(
        "bits sent: {} (round-based protocol: {})",
        cost.bits, cost.prior_protocol_bits
    );

    let sampled = setup.run_branch(setup.sample_outcome(2024), Some(2024))?;
    println!(
        "seed 2024 samples outcome ({}, {})",
        sampled.outcome.s, sampled.outcome.t
    );

    // summing U†AU over all d² Weyl operators leaves d·tr(A) on the diagonal
    let a = ComplexMatrix::from_real_rows(&[
        vec![0.2, 0.1, 0.0],
        vec![0.1, 0.5, 0.3],
        vec![0.0, 0.3, 0.3],
    ])?;
    let tw = weyl_twirl(&a)?;
    println!(
        "\ntwirl of a trace-one matrix:\n{:.3}",
        tw.as_dmatrix().map(|z| z.re)
    );
    Ok(())
}
