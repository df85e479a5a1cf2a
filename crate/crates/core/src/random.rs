//! Seeded generators for test instances.
//!
//! All generators draw from an explicit RNG; [`rng`] builds the ChaCha8
//! stream used throughout, whose output is stable across platforms and
//! crate versions.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::bipartite::BipartiteState;
use crate::error::{Error, Result};
use crate::majorize::{apply_transforms, ProbVector, TTransform, PROB_TOL};
use crate::numkernel::{validate_density, ComplexMatrix, DensityMatrix, StateVector, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

/// `G G† / tr(G G†)` for a `dim × rank` complex Gaussian `G`.
pub fn random_density(dim: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    random_density_with(&mut rng(seed), dim, rank)
}

pub fn random_density_with<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    rank: usize,
) -> Result<DensityMatrix> {
    if rank == 0 || rank > dim {
        return Err(Error::InvalidArgument(format!(
            "rank {rank} outside 1..={dim}"
        )));
    }
    let g = DMatrix::from_fn(dim, rank, |_, _| complex_gaussian(rng));
    let gg = &g * g.adjoint();
    let tr = gg.trace().re;
    validate_density(&ComplexMatrix(gg / C64::new(tr, 0.0)), 1e-9)
}

/// Haar-random unitary from the Gram-Schmidt orthonormalization of a
/// complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = DMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    let mut q = DMatrix::<C64>::zeros(n, n);
    for j in 0..n {
        let mut v = g.column(j).into_owned();
        for _ in 0..2 {
            for i in 0..j {
                let qi = q.column(i).into_owned();
                let proj = qi.dotc(&v);
                v -= qi * proj;
            }
        }
        let norm = v.norm();
        q.set_column(j, &(v / C64::new(norm, 0.0)));
    }
    ComplexMatrix(q)
}

/// Haar-random pure state.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> StateVector {
    let v = DVector::from_fn(dim, |_, _| complex_gaussian(rng));
    StateVector::normalized(v).expect("Gaussian vector is nonzero")
}

/// Uniform draw from the probability simplex.
pub fn random_probvector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ProbVector {
    let w: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = w.iter().sum();
    ProbVector::new(w.into_iter().map(|x| x / s).collect(), PROB_TOL)
        .expect("normalized exponentials form a distribution")
}

/// `len` T-transforms on random coordinate pairs of `0..dim`.
pub fn random_t_transforms<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    len: usize,
) -> Vec<TTransform> {
    if dim < 2 {
        return Vec::new();
    }
    (0..len)
        .map(|_| {
            let i = rng.gen_range(0..dim);
            let mut k = rng.gen_range(0..dim - 1);
            if k >= i {
                k += 1;
            }
            TTransform {
                i,
                k,
                t: rng.gen_range(0.0..=1.0),
            }
        })
        .collect()
}

/// A vector majorized by `y`, padded to `len ≥ y.len()` entries, obtained by
/// applying a random chain of T-transforms.
pub fn random_majorized<R: Rng + ?Sized>(rng: &mut R, y: &ProbVector, len: usize) -> ProbVector {
    let len = len.max(y.len());
    let padded = ProbVector::new(y.padded(len), PROB_TOL).expect("padding keeps y valid");
    let steps = rng.gen_range(0..=2 * len);
    let chain = random_t_transforms(rng, len, steps);
    apply_transforms(&chain, &padded).expect("transforms are in range")
}

/// Haar-random bipartite pure state.
pub fn random_bipartite<R: Rng + ?Sized>(
    rng: &mut R,
    dim_a: usize,
    dim_b: usize,
) -> BipartiteState {
    let psi = random_state(rng, dim_a * dim_b);
    BipartiteState::new(
        dim_a,
        dim_b,
        psi.amplitudes().iter().copied().collect(),
        1e-9,
    )
    .expect("normalized amplitudes")
}

/// Random bipartite state of Schmidt rank at most `rank`.
pub fn random_bipartite_with_rank<R: Rng + ?Sized>(
    rng: &mut R,
    dim_a: usize,
    dim_b: usize,
    rank: usize,
) -> BipartiteState {
    let rank = rank.clamp(1, dim_a.min(dim_b));
    let left = DMatrix::from_fn(dim_a, rank, |_, _| complex_gaussian(rng));
    let right = DMatrix::from_fn(rank, dim_b, |_, _| complex_gaussian(rng));
    let m = left * right;
    let norm = m.norm();
    let m = m / C64::new(norm, 0.0);
    BipartiteState::from_matrix(m, 1e-9).expect("normalized amplitudes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::hermitian_eig;

    #[test]
    fn rank_one_is_pure() {
        for seed in 0..5 {
            let rho = random_density(2, 1, seed).unwrap();
            assert!((rho.eigenvalues()[0] - 1.0).abs() < 1e-12);
            assert!(rho.eigenvalues()[1].abs() < 1e-12);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(
            random_density(4, 4, 7).unwrap(),
            random_density(4, 4, 7).unwrap()
        );
        assert_ne!(
            random_density(4, 4, 7).unwrap(),
            random_density(4, 4, 8).unwrap()
        );
    }

    #[test]
    fn requested_rank() {
        let rho = random_density(4, 2, 7).unwrap();
        let s = hermitian_eig(rho.matrix()).unwrap();
        assert_eq!(s.eigenvalues().iter().filter(|&&l| l > 1e-9).count(), 2);
    }

    #[test]
    fn rank_out_of_range() {
        assert!(random_density(3, 0, 1).is_err());
        assert!(random_density(3, 4, 1).is_err());
    }

    #[test]
    fn unitary_is_unitary() {
        let u = random_unitary(&mut rng(3), 7);
        assert!(u.unitarity_deviation().unwrap() < 1e-12);
    }
}
