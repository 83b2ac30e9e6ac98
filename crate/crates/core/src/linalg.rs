//! Dense linear-algebra helpers on top of nalgebra, plus exact row reduction.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::scalar::FieldScalar;

/// Smallest singular value. Zero for an empty matrix.
pub fn sigma_min(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    singular_values(m).into_iter().fold(f64::INFINITY, f64::min)
}

pub fn sigma_max(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    singular_values(m).into_iter().fold(0.0, f64::max)
}

pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    let (r, c) = m.shape();
    if r >= c {
        m.clone().singular_values().iter().copied().collect()
    } else {
        // Square up so every right singular direction is represented.
        let mut padded = DMatrix::zeros(c, c);
        padded.view_mut((0, 0), (r, c)).copy_from(m);
        let mut sv: Vec<f64> = padded.singular_values().iter().copied().collect();
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
        sv.truncate(r);
        // A wide matrix always has a nontrivial kernel.
        sv.push(0.0);
        sv
    }
}

/// Orthonormal basis (columns) of the null space of `m`, with singular values
/// at most `tol * max(1, sigma_max)` counted as zero.
pub fn null_space(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let (r, c) = m.shape();
    let square = if r >= c {
        m.clone()
    } else {
        let mut p = DMatrix::zeros(c, c);
        p.view_mut((0, 0), (r, c)).copy_from(m);
        p
    };
    let svd = square.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cut = tol * smax.max(1.0);
    let cols: Vec<DVector<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= cut)
        .map(|(i, _)| v_t.row(i).transpose())
        .collect();
    if cols.is_empty() {
        DMatrix::zeros(c, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

/// Numerical rank with relative cutoff.
pub fn rank(m: &DMatrix<f64>, tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let (r, c) = m.shape();
    let sv: Vec<f64> = if r >= c {
        m.clone().singular_values().iter().copied().collect()
    } else {
        m.transpose().singular_values().iter().copied().collect()
    };
    let smax = sv.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > tol * smax.max(1.0)).count()
}

/// Orthonormal basis for the column span of `m`.
pub fn column_basis(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let (r, c) = m.shape();
    if c == 0 || r == 0 {
        return DMatrix::zeros(r, 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cols: Vec<DVector<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s > tol * smax.max(1.0))
        .map(|(i, _)| u.column(i).into_owned())
        .collect();
    if cols.is_empty() {
        DMatrix::zeros(r, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

/// Least-squares solution of `a x = b` via SVD, with relative cutoff `tol`.
pub fn lstsq(a: &DMatrix<f64>, b: &DVector<f64>, tol: f64) -> DVector<f64> {
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    svd.solve(b, tol * smax.max(f64::MIN_POSITIVE))
        .unwrap_or_else(|_| DVector::zeros(a.ncols()))
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Null vector of a complex square matrix: right singular vector of the
/// smallest singular value. Returns `(vector, sigma_min)`.
pub fn complex_null_vector(m: &DMatrix<Complex64>) -> (DVector<Complex64>, f64) {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let (idx, smin) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(bi, bs), (i, s)| if *s < bs { (i, *s) } else { (bi, bs) });
    let v = v_t.row(idx).adjoint();
    (v, smin)
}

/// Exact reduced row-echelon form. Returns pivot columns.
pub fn rref<T: FieldScalar>(rows: &mut Vec<Vec<T>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r >= rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = T::one() / rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    let v = rows[r][j].clone();
                    if !v.is_zero() {
                        rows[i][j] = rows[i][j].clone() - f.clone() * v;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Exact null space basis of the row system `rows * x = 0`.
pub fn exact_null_space<T: FieldScalar>(mut rows: Vec<Vec<T>>, ncols: usize) -> Vec<Vec<T>> {
    // Drop zero rows early; the systems are large and sparse.
    rows.retain(|r| r.iter().any(|v| !v.is_zero()));
    let pivots = rref(&mut rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![T::zero(); ncols];
            v[f] = T::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -rows[r][f].clone();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    #[test]
    fn sigma_min_of_rotation_is_one() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        assert!((sigma_min(&m) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn wide_matrix_has_null_space() {
        let m = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        let n = null_space(&m, 1e-12);
        assert_eq!(n.ncols(), 2);
        assert!((&m * &n).amax() < 1e-14);
        assert_eq!(sigma_min(&m), 0.0);
    }

    #[test]
    fn exact_null_space_of_rank_one_system() {
        let q = |v: i64| BigRational::from_integer(BigInt::from(v));
        let rows = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]];
        let ns = exact_null_space(rows, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert_eq!(v[0].clone() + q(2) * v[1].clone() + q(3) * v[2].clone(), q(0));
        }
    }

    #[test]
    fn rank_counts_independent_columns() {
        let m = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, 2.0, 4.0, 3.0, 6.0]);
        assert_eq!(rank(&m, 1e-12), 1);
    }
}
