//! Schmidt decomposition of a bipartite pure state and its rewriting as
//! `Σ √q_i |a_i⟩|b_i⟩` with orthonormal `a_i` and weights `q` majorized by
//! the Schmidt coefficients.
//!
//!     cargo run --example schmidt_reweighting

use ensemble_majorize::bipartite::{corollary4_decompose, schmidt};
use ensemble_majorize::majorize::ProbVector;
use ensemble_majorize::random::{random_bipartite_with_rank, rng};

fn main() -> ensemble_majorize::Result<()> {
    let psi = random_bipartite_with_rank(&mut rng(5), 3, 3, 3);
    let sd = schmidt(&psi)?;
    println!(
        "Schmidt rank {}, coefficients {:.5?}",
        sd.rank(),
        sd.coefficients.weights()
    );

    let q = ProbVector::uniform(4);
    let dec = corollary4_decompose(&psi, &q)?;
    println!(
        "\nuniform weights over {} terms, A enlarged to dimension {}",
        q.len(),
        dec.dim_a()
    );
    for (i, b) in dec.states_b.iter().enumerate() {
        let overlaps: Vec<String> = dec
            .states_b
            .iter()
            .map(|c| format!("{:.3}", b.inner(c).norm()))
            .collect();
        println!("  |⟨b_{i}|b_j⟩| = [{}]", overlaps.join(", "));
    }
    let err = (dec.reconstruct() - psi.embed_a(dec.dim_a()).matrix()).norm();
    println!("reconstruction error {err:.2e}");

    let too_peaked = ProbVector::new(vec![0.9, 0.1], 1e-12)?;
    if let Err(e) = corollary4_decompose(&psi, &too_peaked) {
        println!("\nweights {:?}: {e}", too_peaked.weights());
    }
    Ok(())
}
