//! One-sided (Hestenes) Jacobi SVD for small dense complex matrices.
//!
//! Columns of a working copy of `M` are rotated pairwise until mutually
//! orthogonal; the accumulated rotations form `V`. Singular values are the
//! final column norms, which keeps small ones accurate relative to their
//! size rather than to `‖M‖`.

use nalgebra::{DMatrix, DVector};

use super::C64;

const MAX_SWEEPS: usize = 100;
/// Columns count as orthogonal once `|⟨w_p, w_q⟩| ≤ ORTH_TOL ‖w_p‖ ‖w_q‖`.
const ORTH_TOL: f64 = 1e-15;
/// ... or once `|⟨w_p, w_q⟩| ≤ ABS_TOL ‖M‖²_F`, which stops rotations
/// among numerically zero columns.
const ABS_TOL: f64 = 1e-30;

/// `M = Σ_i σ_i u_i v_i†`, singular values sorted decreasing.
///
/// `right` is a full orthonormal basis of the column space dimension;
/// `left[i]` is zero when `σ_i = 0`.
#[derive(Debug, Clone)]
pub(crate) struct Svd {
    pub singular_values: Vec<f64>,
    pub left: Vec<DVector<C64>>,
    pub right: Vec<DVector<C64>>,
}

pub(crate) fn jacobi_svd(m: &DMatrix<C64>) -> Svd {
    let n = m.ncols();
    let mut w = m.clone();
    let mut v = DMatrix::<C64>::identity(n, n);
    let floor = ABS_TOL * m.norm_squared();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                rotated |= rotate(&mut w, &mut v, p, q, floor);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut triples: Vec<(f64, DVector<C64>, DVector<C64>)> = (0..n)
        .map(|j| {
            let col = w.column(j).into_owned();
            let sigma = col.norm();
            let u = if sigma > 0.0 {
                col / C64::new(sigma, 0.0)
            } else {
                DVector::zeros(m.nrows())
            };
            (sigma, u, v.column(j).into_owned())
        })
        .collect();
    triples.sort_by(|a, b| b.0.total_cmp(&a.0));

    let mut out = Svd {
        singular_values: Vec::with_capacity(n),
        left: Vec::with_capacity(n),
        right: Vec::with_capacity(n),
    };
    for (s, u, r) in triples {
        out.singular_values.push(s);
        out.left.push(u);
        out.right.push(r);
    }
    out
}

/// Orthogonalizes columns `p` and `q`; returns whether anything changed.
fn rotate(w: &mut DMatrix<C64>, v: &mut DMatrix<C64>, p: usize, q: usize, floor: f64) -> bool {
    let alpha = w.column(p).norm_squared();
    let beta = w.column(q).norm_squared();
    let gamma = w.column(p).dotc(&w.column(q));
    let g = gamma.norm();
    if g <= floor || g <= ORTH_TOL * (alpha * beta).sqrt() {
        return false;
    }
    // make the pivot real positive, then apply a real rotation
    let phase = (gamma / g).conj();
    let zeta = (beta - alpha) / (2.0 * g);
    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = c * t;
    for mat in [w, v] {
        for r in 0..mat.nrows() {
            let a = mat[(r, p)];
            let b = mat[(r, q)] * phase;
            mat[(r, p)] = a * c - b * s;
            mat[(r, q)] = a * s + b * c;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::rng;
    use rand::Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn gaussian(g: &mut impl Rng, r: usize, c: usize) -> DMatrix<C64> {
        DMatrix::from_fn(r, c, |_, _| {
            C64::new(
                StandardNormal.sample(&mut *g),
                StandardNormal.sample(&mut *g),
            )
        })
    }

    fn reconstruct(s: &Svd, rows: usize, cols: usize) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(rows, cols);
        for ((&sigma, u), v) in s.singular_values.iter().zip(&s.left).zip(&s.right) {
            m += u * v.adjoint() * C64::new(sigma, 0.0);
        }
        m
    }

    #[test]
    fn random_shapes_reconstruct() {
        let mut g = rng(11);
        for (r, c) in [(1, 1), (1, 5), (5, 1), (3, 7), (7, 3), (8, 8), (10, 9)] {
            let m = gaussian(&mut g, r, c);
            let s = jacobi_svd(&m);
            assert!((reconstruct(&s, r, c) - &m).norm() <= 1e-13 * m.norm().max(1.0));
            assert!(s.singular_values.windows(2).all(|w| w[0] >= w[1]));
            let v = DMatrix::from_columns(&s.right);
            assert!((v.adjoint() * &v - DMatrix::<C64>::identity(c, c)).norm() <= 1e-13);
        }
    }

    #[test]
    fn rank_one_with_zero_rows() {
        let mut g = rng(1);
        let a = gaussian(&mut g, 10, 1);
        let b = gaussian(&mut g, 1, 9);
        let mut m = DMatrix::<C64>::zeros(10, 9);
        m.view_mut((0, 0), (8, 9)).copy_from(&(a.rows(0, 8) * b));
        let m = &m / C64::new(m.norm(), 0.0);
        let s = jacobi_svd(&m);
        assert!((s.singular_values[0] - 1.0).abs() <= 1e-14);
        assert!(s.singular_values[1] <= 1e-14);
        assert!((reconstruct(&s, 10, 9) - &m).norm() <= 1e-14);
    }

    #[test]
    fn small_singular_values_keep_relative_accuracy() {
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![
            C64::new(1.0, 0.0),
            C64::new(1e-9, 0.0),
            C64::new(1e-14, 0.0),
        ]));
        let s = jacobi_svd(&d);
        assert!((s.singular_values[1] / 1e-9 - 1.0).abs() <= 1e-12);
        assert!((s.singular_values[2] / 1e-14 - 1.0).abs() <= 1e-12);
    }
}
