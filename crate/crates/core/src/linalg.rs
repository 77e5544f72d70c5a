//! Small dense linear algebra: exact rank over the rationals and
//! tolerance-based rank and least squares in floating point.

use nalgebra::{DMatrix, DVector};
use num_traits::Zero;

use crate::symbolic::Rational;

/// Relative cutoff below which singular values count as zero.
pub const RANK_RTOL: f64 = 1e-9;

/// Largest singular values below this are treated as "all tiny" and the
/// cutoff falls back to an absolute `RANK_RTOL`.
const TINY_SCALE: f64 = 1e-12;

/// Rank by fraction-exact Gaussian elimination.
pub fn exact_rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let pivot_row = m[rank].clone();
        for r in rank + 1..nrows {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &pivot_row[col];
            for c in col..ncols {
                let delta = &factor * &pivot_row[c];
                m[r][c] -= delta;
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// Singular values in descending order.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    let mut s: Vec<f64> = m
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Absolute cutoff used for a matrix whose largest singular value is `smax`.
pub fn rank_cutoff(smax: f64) -> f64 {
    let scale = if smax < TINY_SCALE { 1.0 } else { smax };
    RANK_RTOL * scale
}

/// Numerical rank with the relative cutoff [`RANK_RTOL`].
pub fn numeric_rank(m: &DMatrix<f64>) -> usize {
    let s = singular_values(m);
    let cutoff = rank_cutoff(s.first().copied().unwrap_or(0.0));
    s.iter().filter(|&&v| v > cutoff).count()
}

/// Numerical rank of an antisymmetric matrix, rounded to an even number
/// (singular values of antisymmetric matrices come in pairs).
pub fn antisymmetric_rank(m: &DMatrix<f64>) -> usize {
    let r = numeric_rank(m);
    r + (r & 1)
}

/// Minimum-norm least-squares solution of `m x = b` and its residual norm.
pub fn min_norm_solve(m: &DMatrix<f64>, b: &DVector<f64>) -> (DVector<f64>, f64) {
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cutoff = rank_cutoff(smax);
    let x = svd
        .solve(b, cutoff)
        .unwrap_or_else(|_| DVector::zeros(m.ncols()));
    let residual = (m * &x - b).norm();
    (x, residual)
}

/// Orthonormal bases of the column space and of the null space of `m`.
pub fn image_and_kernel(m: &DMatrix<f64>) -> (Vec<DVector<f64>>, Vec<DVector<f64>>) {
    let n = m.ncols();
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("requested u");
    let v_t = svd.v_t.expect("requested v_t");
    let s = &svd.singular_values;
    let smax = s.iter().copied().fold(0.0, f64::max);
    let cutoff = rank_cutoff(smax);
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]));
    let rank = order.iter().filter(|&&i| s[i] > cutoff).count();
    let image = order[..rank]
        .iter()
        .map(|&i| u.column(i).into_owned())
        .collect();
    // nalgebra's thin SVD returns min(m, n) right singular vectors, which
    // covers the square matrices used here.
    let mut kernel: Vec<DVector<f64>> = order[rank..]
        .iter()
        .map(|&i| v_t.row(i).transpose().into_owned())
        .collect();
    kernel.truncate(n - rank);
    (image, kernel)
}
