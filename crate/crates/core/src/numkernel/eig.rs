//! Cyclic Jacobi eigensolver for small dense Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies the classic real Jacobi rotation, so the combined
//! 2x2 unitary is
//!
//! ```text
//! G = [[ c,            s           ],
//!      [ -s e^{-i phi}, c e^{-i phi} ]]
//! ```
//!
//! acting on rows/columns `p` and `q`. Sweeps run in a fixed `(p, q)` order,
//! which makes the output a pure function of the input.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector};

use super::{fix_phase_first_nonzero, ComplexMatrix, Spectrum, StateVector, C64};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-12;
const DEGENERACY_TOL: f64 = 1e-12;

/// Eigen-decomposition with the default Hermiticity tolerance (1e-9).
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<Spectrum> {
    hermitian_eig_with_tol(h, 1e-9)
}

pub fn hermitian_eig_with_tol(h: &ComplexMatrix, herm_tol: f64) -> Result<Spectrum> {
    let deviation = h.hermitian_deviation().ok_or(Error::NotSquare {
        rows: h.rows(),
        cols: h.cols(),
    })?;
    if deviation > herm_tol {
        return Err(Error::NotHermitian {
            deviation,
            tol: herm_tol,
        });
    }
    let n = h.rows();
    let m = h.as_dmatrix();
    let mut a: DMatrix<C64> = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut v = DMatrix::<C64>::identity(n, n);

    let scale = a.norm().max(1.0);
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= OFF_DIAGONAL_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut pairs: Vec<(f64, DVector<C64>)> = (0..n)
        .map(|j| {
            let mut col = v.column(j).into_owned();
            fix_phase_first_nonzero(&mut col);
            (a[(j, j)].re, col)
        })
        .collect();
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));

    // Within runs of (numerically) equal eigenvalues, order eigenvectors
    // lexicographically.
    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        while end < pairs.len() && (pairs[end - 1].0 - pairs[end].0).abs() <= DEGENERACY_TOL {
            end += 1;
        }
        pairs[start..end].sort_by(|x, y| lexicographic(&x.1, &y.1));
        start = end;
    }

    let (eigenvalues, eigenvectors): (Vec<f64>, Vec<StateVector>) = pairs
        .into_iter()
        .map(|(l, col)| (l, StateVector(col)))
        .unzip();
    Ok(Spectrum::from_parts(eigenvalues, eigenvectors))
}

fn off_diagonal_norm(a: &DMatrix<C64>) -> f64 {
    let n = a.nrows();
    let mut sum = 0.0;
    for j in 0..n {
        for i in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

fn rotate(a: &mut DMatrix<C64>, v: &mut DMatrix<C64>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let phase = apq.conj() / r;

    let g_pp = C64::new(c, 0.0);
    let g_pq = C64::new(s, 0.0);
    let g_qp = phase * (-s);
    let g_qq = phase * c;

    let n = a.nrows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

fn lexicographic(x: &DVector<C64>, y: &DVector<C64>) -> Ordering {
    for (a, b) in x.iter().zip(y.iter()) {
        let ord = a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im));
        if ord != Ordering::Equal {
            return ord;
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::frobenius_distance;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = DMatrix::from_fn(n, n, |_, _| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        ComplexMatrix(&g + g.adjoint())
    }

    #[test]
    fn diagonal_input() {
        let s = hermitian_eig(&ComplexMatrix::diagonal(&[0.5, 0.5])).unwrap();
        assert_eq!(s.eigenvalues(), &[0.5, 0.5]);
        // tie broken lexicographically: (0,1) sorts before (1,0)
        let gram = s.gram();
        assert!(frobenius_distance(&gram, &ComplexMatrix::identity(2)).unwrap() < 1e-15);
        for v in s.eigenvectors() {
            let nonzero = v.amplitudes().iter().filter(|z| z.norm() > 0.0).count();
            assert_eq!(nonzero, 1);
        }
    }

    #[test]
    fn pauli_x() {
        let x = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let s = hermitian_eig(&x).unwrap();
        assert!((s.eigenvalues()[0] - 1.0).abs() < 1e-15);
        assert!((s.eigenvalues()[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn pauli_y_has_complex_eigenvectors() {
        let y = ComplexMatrix::from_row_major(
            2,
            2,
            vec![
                C64::new(0.0, 0.0),
                C64::new(0.0, -1.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        let s = hermitian_eig(&y).unwrap();
        assert!(frobenius_distance(&s.reconstruct(), &y).unwrap() < 1e-14);
        // first component real positive
        for v in s.eigenvectors() {
            let z = v.amplitudes()[0];
            assert!(z.re > 0.0 && z.im.abs() < 1e-15);
        }
    }

    #[test]
    fn random_reconstruction_and_orthonormality() {
        for (n, seed) in [(1, 1), (2, 2), (5, 3), (8, 4), (16, 5)] {
            let h = random_hermitian(n, seed);
            let s = hermitian_eig(&h).unwrap();
            assert!(frobenius_distance(&s.reconstruct(), &h).unwrap() <= 1e-10);
            let gram = s.gram();
            assert!(frobenius_distance(&gram, &ComplexMatrix::identity(n)).unwrap() <= 1e-10);
            assert!(s.eigenvalues().windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn deterministic() {
        let h = random_hermitian(6, 9);
        assert_eq!(hermitian_eig(&h).unwrap(), hermitian_eig(&h).unwrap());
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
        assert!(matches!(
            hermitian_eig(&ComplexMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }
}
