//! Equal-weight ensembles of every admissible size, with the entropy bound
//! and Schur-convex comparisons of weights against spectrum.
//!
//!     cargo run --example uniform_ensembles

use ensemble_majorize::ensembles::{entropy_report, uniform_ensemble};
use ensemble_majorize::numkernel::random_density;

fn main() -> ensemble_majorize::Result<()> {
    let rho = random_density(4, 3, 7)?;
    let rank = rho.rank(1e-10);
    println!(
        "rank {rank}, von Neumann entropy {:.5} nats",
        rho.von_neumann_entropy()
    );

    for m in 1..=6 {
        match uniform_ensemble(&rho, m) {
            Err(e) => println!("m = {m}: {e}"),
            Ok(e) => {
                let r = entropy_report(&e)?;
                println!(
                    "m = {m}: H(weights) = {:.5} >= S(rho) = {:.5}: {}; Schur comparisons hold: {}",
                    r.shannon, r.von_neumann, r.holds, r.schur.all_hold
                );
            }
        }
    }
    Ok(())
}
