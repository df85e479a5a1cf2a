//! Builds a pure-state ensemble with prescribed weights for a random density
//! matrix, then audits it.
//!
//!     cargo run --example ensemble_synthesis

use ensemble_majorize::ensembles::{is_compatible, synthesize_ensemble, verify_ensemble};
use ensemble_majorize::majorize::ProbVector;
use ensemble_majorize::numkernel::random_density;

fn main() -> ensemble_majorize::Result<()> {
    let rho = random_density(3, 3, 42)?;
    println!("spectrum of rho: {:.5?}", rho.eigenvalues());

    // five members: more than the dimension is fine as long as the weights
    // are majorized by the spectrum
    let p = ProbVector::new(vec![0.3, 0.2, 0.2, 0.15, 0.15], 1e-12)?;
    println!("requested weights: {:?}", p.weights());
    println!("compatible: {}", is_compatible(&p, &rho, 1e-10));

    let e = synthesize_ensemble(&rho, &p)?;
    for (i, m) in e.members().iter().enumerate() {
        let amps: Vec<String> = m
            .state
            .amplitudes()
            .iter()
            .map(|z| format!("{:+.3}{:+.3}i", z.re, z.im))
            .collect();
        println!(
            "  member {i}: weight {:.3}  state [{}]",
            m.weight,
            amps.join(", ")
        );
    }
    let report = verify_ensemble(&e, &rho, 1e-10);
    println!(
        "reconstruction error {:.2e}, pass {}",
        report.reconstruction_error.unwrap_or(f64::NAN),
        report.pass
    );

    let peaked = ProbVector::new(vec![0.95, 0.05], 1e-12)?;
    match synthesize_ensemble(&rho, &peaked) {
        Ok(_) => println!("unexpected success"),
        Err(e) => println!("weights {:?} rejected: {e}", peaked.weights()),
    }
    Ok(())
}
