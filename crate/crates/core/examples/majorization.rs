//! Majorization test, T-transform chain and the orthogonal witness for a
//! pair `x ≺ y`.
//!
//!     cargo run --example majorization

use ensemble_majorize::majorize::{
    apply_t_chain, check_schur_inequalities, horn_orthogonal, majorization_violation,
    t_transform_chain, ProbVector,
};

fn main() -> ensemble_majorize::Result<()> {
    let y = ProbVector::new(vec![0.6, 0.3, 0.1], 1e-12)?;
    let x = ProbVector::new(vec![0.25, 0.4, 0.35], 1e-12)?;

    match majorization_violation(x.weights(), y.weights(), 1e-12) {
        None => println!(
            "x = {:?} is majorized by y = {:?}",
            x.weights(),
            y.weights()
        ),
        Some(v) => println!("{v}"),
    }
    if let Some(v) = majorization_violation(y.weights(), x.weights(), 1e-12) {
        println!("reverse direction: {v}");
    }

    let chain = t_transform_chain(&x, &y)?;
    println!("\nchain of {} T-transforms:", chain.len());
    for t in &chain.transforms {
        println!("  {t}");
    }
    println!(
        "chain applied to y: {:?}",
        apply_t_chain(&chain, &y)?.weights()
    );

    let w = horn_orthogonal(&x, &y)?;
    println!("\northogonal witness W:\n{:.6}", w.orthogonal);
    println!("D = W∘W:\n{:.6}", w.stochastic);
    println!(
        "|WWᵀ - I| = {:.2e}, |D - stochastic| = {:.2e}",
        w.orthogonality_error(),
        w.stochasticity_error()
    );

    let schur = check_schur_inequalities(&x, &y)?;
    println!("\nSchur inequalities, all hold: {}", schur.all_hold);
    for c in &schur.comparisons {
        println!(
            "  {:<20} f(x) = {:>9.5}  f(y) = {:>9.5}",
            c.name, c.value_x, c.value_y
        );
    }
    Ok(())
}
