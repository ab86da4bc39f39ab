//! Kernels, spans and small solves on dense complex matrices.
//!
//! Vectors cross this module's boundary as plain `Vec<C>`; `faer` does the
//! factorizations.

use faer::linalg::solvers::{Solve, SolveLstsq};
use faer::{Col, Mat};
use thiserror::Error;

use crate::function::C;
use crate::tolerances::{RANK_CUTOFF, RANK_GUARD_BAND};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("singular value {value:e} lies inside the guard band [{lo:e}, {hi:e}]; numerical rank is ambiguous")]
    RankAmbiguity { value: f64, lo: f64, hi: f64 },
    #[error("singular value decomposition did not converge")]
    NoConvergence,
}

/// Orthonormal basis of the kernel of `a`.
///
/// Singular values below [`RANK_CUTOFF`] count as zero; any value in
/// [`RANK_GUARD_BAND`] is reported instead of rounded.
pub fn kernel(a: &Mat<C>) -> Result<Vec<Vec<C>>, LinalgError> {
    let n = a.ncols();
    if n == 0 {
        return Ok(Vec::new());
    }
    // the thin decomposition of a wide matrix would drop part of V
    let svd = if a.nrows() >= n { a.thin_svd() } else { a.svd() }.map_err(|_| LinalgError::NoConvergence)?;
    let (s, v) = (svd.S(), svd.V());
    let (lo, hi) = RANK_GUARD_BAND;
    let mut basis = Vec::new();
    for j in 0..n {
        let value = if j < s.dim() { s[j].re } else { 0.0 };
        if (lo..=hi).contains(&value) {
            return Err(LinalgError::RankAmbiguity { value, lo, hi });
        }
        if value < RANK_CUTOFF {
            basis.push((0..n).map(|i| v[(i, j)]).collect());
        }
    }
    Ok(basis)
}

/// Orthonormal basis of the span of `vectors`, with the rank decided
/// relative to the largest singular value.
pub fn orthonormal_span(vectors: &[Vec<C>]) -> Vec<Vec<C>> {
    let Some(first) = vectors.first() else {
        return Vec::new();
    };
    let dim = first.len();
    let m = Mat::from_fn(dim, vectors.len(), |i, j| vectors[j][i]);
    let Ok(svd) = m.thin_svd() else {
        return Vec::new();
    };
    let (s, u) = (svd.S(), svd.U());
    let top = (0..s.dim()).map(|k| s[k].re).fold(0.0, f64::max);
    (0..s.dim())
        .filter(|&k| top > 0.0 && s[k].re > RANK_CUTOFF * top.max(1.0))
        .map(|k| (0..dim).map(|i| u[(i, k)]).collect())
        .collect()
}

fn dotc(a: &[C], b: &[C]) -> C {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// `‖v - P v‖ / ‖v‖` for the orthogonal projection `P` onto the span of the
/// orthonormal `basis`; 0 for `v = 0`.
pub fn projection_residual(basis: &[Vec<C>], v: &[C]) -> f64 {
    let total = norm(v);
    if total == 0.0 {
        return 0.0;
    }
    let mut rest = v.to_vec();
    for b in basis {
        let coeff = dotc(b, &rest);
        for (r, bi) in rest.iter_mut().zip(b) {
            *r -= bi * coeff;
        }
    }
    norm(&rest) / total
}

/// Solves the square system `a x = b`; `None` if the result is not finite.
pub fn solve_square(a: &Mat<C>, b: &[C]) -> Option<Vec<C>> {
    let rhs = Col::from_fn(b.len(), |i| b[i]);
    let x = a.partial_piv_lu().solve(&rhs);
    let out: Vec<C> = (0..x.nrows()).map(|i| x[i]).collect();
    out.iter().all(|z| z.re.is_finite() && z.im.is_finite()).then_some(out)
}

/// Real least squares `min ‖a x - b‖` for a tall full-rank `a`.
pub fn least_squares(a: &Mat<f64>, b: &[f64]) -> Option<Vec<f64>> {
    if a.nrows() < a.ncols() {
        return None;
    }
    let rhs = Col::from_fn(b.len(), |i| b[i]);
    let x = a.qr().solve_lstsq(&rhs);
    let out: Vec<f64> = (0..x.nrows()).map(|i| x[i]).collect();
    out.iter().all(|z| z.is_finite()).then_some(out)
}

/// Complex least squares `min ‖a x - b‖` for a tall full-rank `a`.
pub fn least_squares_complex(a: &Mat<C>, b: &[C]) -> Option<Vec<C>> {
    if a.nrows() < a.ncols() {
        return None;
    }
    let rhs = Col::from_fn(b.len(), |i| b[i]);
    let x = a.qr().solve_lstsq(&rhs);
    let out: Vec<C> = (0..x.nrows()).map(|i| x[i]).collect();
    out.iter().all(|z| z.re.is_finite() && z.im.is_finite()).then_some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C {
        C::new(re, 0.0)
    }

    fn apply(a: &Mat<C>, v: &[C]) -> Vec<C> {
        (0..a.nrows()).map(|i| (0..a.ncols()).map(|j| a[(i, j)] * v[j]).sum()).collect()
    }

    #[test]
    fn kernel_of_rank_one() {
        let rows = [[1.0, 1.0], [2.0, 2.0], [-1.0, -1.0]];
        let a = Mat::from_fn(3, 2, |i, j| c(rows[i][j]));
        let k = kernel(&a).unwrap();
        assert_eq!(k.len(), 1);
        assert!(norm(&apply(&a, &k[0])) < 1e-14);
        assert!((norm(&k[0]) - 1.0).abs() < 1e-14);
    }

    /// Constant matrices of odd size are a known failure case for some
    /// bidiagonal SVD implementations.
    #[test]
    fn constant_matrices() {
        for n in 2..10 {
            let a = Mat::from_fn(n, n, |_, _| c(24.0));
            let k = kernel(&a).unwrap();
            assert_eq!(k.len(), n - 1, "n = {n}");
            for v in &k {
                assert!(norm(&apply(&a, v)) < 1e-12);
            }
            let span = orthonormal_span(&vec![vec![c(3.0); n]; 2 * n + 1]);
            assert_eq!(span.len(), 1);
            assert!(projection_residual(&span, &vec![c(1.0); n]) < 1e-14);
        }
    }

    #[test]
    fn wide_and_full_rank() {
        let a = Mat::from_fn(1, 3, |_, j| c(if j == 0 { 1.0 } else { 0.0 }));
        assert_eq!(kernel(&a).unwrap().len(), 2);
        assert!(kernel(&Mat::<C>::identity(3, 3)).unwrap().is_empty());
    }

    #[test]
    fn guard_band_flags() {
        let a = Mat::from_fn(2, 2, |i, j| if i == j { c([1.0, 5e-10][i]) } else { c(0.0) });
        assert!(matches!(kernel(&a), Err(LinalgError::RankAmbiguity { .. })));
        let a = Mat::from_fn(2, 2, |i, j| if i == j { c([1.0, 1e-13][i]) } else { c(0.0) });
        assert_eq!(kernel(&a).unwrap().len(), 1);
    }

    #[test]
    fn spans() {
        let e1 = vec![c(1.0), c(0.0), c(0.0)];
        let v = vec![c(2.0), c(2.0), c(0.0)];
        let basis = orthonormal_span(&[e1.clone(), v, vec![c(3.0), c(0.0), c(0.0)]]);
        assert_eq!(basis.len(), 2);
        assert!(projection_residual(&basis, &[c(0.0), c(5.0), c(0.0)]) < 1e-14);
        assert!((projection_residual(&basis, &[c(0.0), c(0.0), c(1.0)]) - 1.0).abs() < 1e-14);
        assert!(orthonormal_span(&[]).is_empty());
    }

    #[test]
    fn small_solves() {
        let a = Mat::from_fn(2, 2, |i, j| c([[2.0, 1.0], [1.0, 3.0]][i][j]));
        let x = solve_square(&a, &[c(3.0), c(5.0)]).unwrap();
        assert!((x[0] - c(0.8)).norm() < 1e-14 && (x[1] - c(1.4)).norm() < 1e-14);
        let rows = [[1.0, 0.0], [1.0, 1.0], [1.0, 2.0]];
        let a = Mat::from_fn(3, 2, |i, j| rows[i][j]);
        let x = least_squares(&a, &[1.0, 3.0, 5.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 2.0).abs() < 1e-12);
        let a = Mat::from_fn(3, 2, |i, j| C::new(rows[i][j], rows[i][j]));
        let x = least_squares_complex(&a, &[c(1.0), c(3.0), c(5.0)]).unwrap();
        assert!((x[0] - C::new(0.5, -0.5)).norm() < 1e-12 && (x[1] - C::new(1.0, -1.0)).norm() < 1e-12);
    }
}
