//! Center and nucleus as null spaces of stacked linear conditions.

use nalgebra::DMatrix;
use num_rational::BigRational;

use super::{Algebra, Element, Field, Table};
use crate::linalg;
use crate::scalar::Scalar;

const TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct Subspace {
    algebra: Algebra,
    basis: Vec<Element>,
    /// Dimension over the base field.
    dim: usize,
    /// Whether the null-space computation ran in exact arithmetic.
    exact: bool,
}

impl Subspace {
    /// Subspace spanned by `vectors` (realified coordinates). For complex
    /// algebras the real span is assumed closed under multiplication by `i`.
    pub fn from_real_span(algebra: &Algebra, vectors: Vec<Vec<f64>>, exact: bool) -> Self {
        let basis = match algebra.field() {
            Field::Real => vectors,
            Field::Complex => complex_basis(algebra, vectors),
        };
        Subspace {
            algebra: algebra.clone(),
            dim: basis.len(),
            basis: basis
                .into_iter()
                .map(|v| Element::from_raw(algebra.clone(), v))
                .collect(),
            exact,
        }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn basis(&self) -> &[Element] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Real spanning set (for complex algebras: `b` and `i b` for every basis `b`).
    pub fn real_span(&self) -> Vec<Vec<f64>> {
        match self.algebra.field() {
            Field::Real => self.basis.iter().map(|b| b.coords().to_vec()).collect(),
            Field::Complex => self
                .basis
                .iter()
                .flat_map(|b| [b.coords().to_vec(), times_i(&self.algebra, b.coords())])
                .collect(),
        }
    }

    fn real_matrix(&self) -> DMatrix<f64> {
        let cols = self.real_span();
        let n = self.algebra.real_dim();
        DMatrix::from_fn(n, cols.len(), |r, c| cols[c][r])
    }

    /// Rank test: does `x` lie in the span?
    pub fn contains(&self, x: &Element) -> bool {
        let m = self.real_matrix();
        let base = linalg::rank(&m, TOL);
        let mut ext = m.clone().insert_column(m.ncols(), 0.0);
        ext.column_mut(m.ncols()).copy_from_slice(x.coords());
        linalg::rank(&ext, TOL) == base
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }
}

fn times_i(alg: &Algebra, v: &[f64]) -> Vec<f64> {
    let d = alg.dim();
    (0..2 * d)
        .map(|k| if k < d { -v[k + d] } else { v[k - d] })
        .collect()
}

/// Greedy complex basis out of a real, `i`-invariant spanning set.
fn complex_basis(alg: &Algebra, vectors: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let n = alg.real_dim();
    let rank = |cols: &[Vec<f64>]| {
        linalg::rank(&DMatrix::from_fn(n, cols.len(), |r, c| cols[c][r]), TOL)
    };
    let mut chosen = Vec::new();
    let mut span: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mut ext = span.clone();
        ext.push(v.clone());
        if rank(&ext) > span.len() {
            span.push(v.clone());
            span.push(times_i(alg, &v));
            chosen.push(v);
        }
    }
    chosen
}

/// Product tables `P[i][j]` as dense vectors.
fn dense_products<T: Scalar>(t: &Table<T>) -> Vec<Vec<Vec<T>>> {
    let n = t.dim();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut v = vec![T::zero(); n];
                    for (k, c) in t.basis_product(i, j) {
                        v[*k] = c.clone();
                    }
                    v
                })
                .collect()
        })
        .collect()
}

/// `x = sum_m v_m u_m` times `u_k` (dense).
fn mul_dense<T: Scalar>(p: &[Vec<Vec<T>>], v: &[T], k: usize, left: bool) -> Vec<T> {
    let n = v.len();
    let mut out = vec![T::zero(); n];
    for (m, vm) in v.iter().enumerate() {
        if vm.is_zero() {
            continue;
        }
        let row = if left { &p[m][k] } else { &p[k][m] };
        for (o, c) in out.iter_mut().zip(row) {
            if !c.is_zero() {
                *o = o.clone() + vm.clone() * c.clone();
            }
        }
    }
    out
}

/// Condition rows over the unknown coefficients of `x`:
/// the `r`-th coordinate of a linear map applied to `u_i` gives column `i`.
fn center_rows<T: Scalar>(t: &Table<T>) -> Vec<Vec<T>> {
    let n = t.dim();
    let p = dense_products(t);
    let mut rows = Vec::new();
    for j in 0..n {
        for r in 0..n {
            rows.push((0..n).map(|i| p[i][j][r].clone() - p[j][i][r].clone()).collect());
        }
    }
    rows
}

/// Rows of `[u_i, u_j, u_k]` with `u_i` in each of the three slots.
fn nucleus_rows<T: Scalar>(t: &Table<T>, slot: usize) -> impl Iterator<Item = Vec<T>> {
    let n = t.dim();
    let p = dense_products(t);
    (0..n).flat_map(move |j| {
        let p = p.clone();
        (0..n).flat_map(move |k| {
            // Associator image of each unknown basis vector, column by column.
            let cols: Vec<Vec<T>> = (0..n)
                .map(|i| {
                    let (a, b, c) = match slot {
                        0 => (i, j, k),
                        1 => (j, i, k),
                        _ => (j, k, i),
                    };
                    let ab_c = mul_dense(&p, &p[a][b], c, true);
                    let a_bc = mul_dense(&p, &p[b][c], a, false);
                    ab_c.into_iter().zip(a_bc).map(|(x, y)| x - y).collect()
                })
                .collect();
            (0..n)
                .map(|r| cols.iter().map(|col| col[r].clone()).collect::<Vec<T>>())
                .collect::<Vec<_>>()
        })
    })
}

/// Minimal real null-space dimension: the span of 1 (and `i 1` when complex).
fn min_null(a: &Algebra) -> usize {
    match a.field() {
        Field::Real => 1,
        Field::Complex => 2,
    }
}

/// Incremental exact reduction that stops once the rank reaches `cap`.
fn exact_kernel(
    rows: impl Iterator<Item = Vec<BigRational>>,
    n: usize,
    cap: usize,
) -> Vec<Vec<BigRational>> {
    let mut basis: Vec<Vec<BigRational>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for mut row in rows {
        for (b, &p) in basis.iter().zip(&pivots) {
            if !Scalar::is_zero(&row[p]) {
                let f = row[p].clone();
                for (x, y) in row.iter_mut().zip(b) {
                    if !Scalar::is_zero(y) {
                        *x = x.clone() - f.clone() * y.clone();
                    }
                }
            }
        }
        let Some(p) = row.iter().position(|x| !Scalar::is_zero(x)) else {
            continue;
        };
        let inv = <BigRational as Scalar>::one() / row[p].clone();
        for x in row.iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for b in basis.iter_mut() {
            if !Scalar::is_zero(&b[p]) {
                let f = b[p].clone();
                for (x, y) in b.iter_mut().zip(&row) {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
        }
        basis.push(row);
        pivots.push(p);
        if basis.len() >= cap {
            break;
        }
    }
    linalg::exact_null_space(basis, n)
}

fn float_kernel(rows: impl Iterator<Item = Vec<f64>>, n: usize) -> Vec<Vec<f64>> {
    // Accumulate the Gram matrix; the row count can be large.
    let mut g = DMatrix::<f64>::zeros(n, n);
    for r in rows {
        for a in 0..n {
            if r[a] == 0.0 {
                continue;
            }
            for b in 0..n {
                g[(a, b)] += r[a] * r[b];
            }
        }
    }
    let ns = linalg::null_space(&g, 1e-12);
    (0..ns.ncols()).map(|c| ns.column(c).iter().copied().collect()).collect()
}

fn kernel<F, G, I, J>(a: &Algebra, exact_rows: F, float_rows: G) -> Subspace
where
    F: FnOnce(&Table<BigRational>) -> I,
    G: FnOnce(&Table<f64>) -> J,
    I: Iterator<Item = Vec<BigRational>>,
    J: Iterator<Item = Vec<f64>>,
{
    let n = a.real_dim();
    match a.exact_table() {
        Some(t) => {
            let ns = exact_kernel(exact_rows(t), n, n - min_null(a));
            let vecs = ns
                .into_iter()
                .map(|v| v.iter().map(Scalar::to_f64).collect())
                .collect();
            Subspace::from_real_span(a, vecs, true)
        }
        None => Subspace::from_real_span(a, float_kernel(float_rows(a.table()), n), false),
    }
}

/// Center `Z(A) = { x : [x, A] = 0 }`.
pub fn center(a: &Algebra) -> Subspace {
    kernel(a, |t| center_rows(t).into_iter(), |t| center_rows(t).into_iter())
}

/// Nucleus `N(A) = { x : [x, A, A] = [A, x, A] = [A, A, x] = 0 }`.
pub fn nucleus(a: &Algebra) -> Subspace {
    kernel(
        a,
        |t| (0..3).flat_map(|s| nucleus_rows(t, s)).collect::<Vec<_>>().into_iter(),
        |t| (0..3).flat_map(|s| nucleus_rows(t, s)).collect::<Vec<_>>().into_iter(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin;

    #[test]
    fn known_dimensions() {
        let dims = |n: &str| {
            let a = builtin(n).unwrap();
            (center(&a).dim(), nucleus(&a).dim())
        };
        assert_eq!(dims("H"), (1, 4));
        assert_eq!(dims("O"), (1, 1));
        assert_eq!(dims("mat2r"), (1, 4));
        assert_eq!(dims("C"), (2, 2));
        assert_eq!(dims("upper2"), (1, 3));
        assert_eq!(dims("mat2c"), (1, 4));
        assert_eq!(dims("S16"), (1, 1));
    }

    #[test]
    fn center_contains_unit_and_is_inside_nucleus() {
        for n in ["H", "O", "mat2r", "mat2c", "upper2"] {
            let a = builtin(n).unwrap();
            let z = center(&a);
            assert!(z.is_exact());
            assert!(z.contains(&a.unit()), "{n}");
            assert!(z.is_subspace_of(&nucleus(&a)), "{n}");
        }
    }

    #[test]
    fn float_path_agrees() {
        let h = builtin("H").unwrap();
        let rows = center_rows(h.table()).into_iter();
        let k = float_kernel(rows, 4);
        assert_eq!(k.len(), 1);
        assert!((k[0][0].abs() - 1.0).abs() < 1e-12);
    }
}
