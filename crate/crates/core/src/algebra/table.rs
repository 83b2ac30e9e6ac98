use crate::scalar::Scalar;

/// Sparse rank-3 tensor of structure constants: `products[i * dim + j]` lists
/// the nonzero `(k, c[i][j][k])`.
#[derive(Clone, Debug, PartialEq)]
pub struct Table<T> {
    dim: usize,
    products: Vec<Vec<(usize, T)>>,
}

impl<T: Scalar> Table<T> {
    pub fn zeros(dim: usize) -> Self {
        Table {
            dim,
            products: vec![Vec::new(); dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Adds `value` to `c[i][j][k]`.
    pub fn add(&mut self, i: usize, j: usize, k: usize, value: T) {
        if value.is_zero() {
            return;
        }
        let row = &mut self.products[i * self.dim + j];
        match row.iter_mut().find(|(kk, _)| *kk == k) {
            Some((_, v)) => {
                *v = v.clone() + value;
            }
            None => row.push((k, value)),
        }
        row.retain(|(_, v)| !v.is_zero());
        row.sort_by_key(|(kk, _)| *kk);
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> T {
        self.products[i * self.dim + j]
            .iter()
            .find(|(kk, _)| *kk == k)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(T::zero)
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, T)] {
        &self.products[i * self.dim + j]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, &T)> {
        self.products.iter().enumerate().flat_map(move |(ij, row)| {
            let (i, j) = (ij / self.dim, ij % self.dim);
            row.iter().map(move |(k, v)| (i, j, *k, v))
        })
    }

    pub fn nnz(&self) -> usize {
        self.products.iter().map(Vec::len).sum()
    }

    /// Bilinear product of coordinate vectors.
    pub fn mul(&self, a: &[T], b: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.dim];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let ab = ai.clone() * bj.clone();
                for (k, c) in &self.products[i * self.dim + j] {
                    out[*k] = out[*k].clone() + ab.clone() * c.clone();
                }
            }
        }
        out
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Table<U> {
        Table {
            dim: self.dim,
            products: self
                .products
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|(k, v)| (*k, f(v)))
                        .filter(|(_, v)| !v.is_zero())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn try_map<U: Scalar>(&self, f: impl Fn(&T) -> Option<U>) -> Option<Table<U>> {
        let mut products = Vec::with_capacity(self.products.len());
        for row in &self.products {
            let mut r = Vec::with_capacity(row.len());
            for (k, v) in row {
                r.push((*k, f(v)?));
            }
            products.push(r);
        }
        Some(Table {
            dim: self.dim,
            products,
        })
    }
}

impl Table<f64> {
    /// `out = a * b`, allocation free.
    pub fn mul_into(&self, a: &[f64], b: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        let d = self.dim;
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0.0 {
                continue;
            }
            let base = i * d;
            for (j, &bj) in b.iter().enumerate() {
                if bj == 0.0 {
                    continue;
                }
                let ab = ai * bj;
                for &(k, c) in &self.products[base + j] {
                    out[k] += ab * c;
                }
            }
        }
    }
}

/// Sparse linear map stored by columns: `columns[j]` lists `(i, m[i][j])`.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMap<T> {
    dim: usize,
    columns: Vec<Vec<(usize, T)>>,
}

impl<T: Scalar> SparseMap<T> {
    pub fn identity(dim: usize) -> Self {
        SparseMap {
            dim,
            columns: (0..dim).map(|j| vec![(j, T::one())]).collect(),
        }
    }

    pub fn from_columns(dim: usize, columns: Vec<Vec<(usize, T)>>) -> Self {
        SparseMap { dim, columns }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn column(&self, j: usize) -> &[(usize, T)] {
        &self.columns[j]
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.dim];
        for (j, vj) in v.iter().enumerate() {
            if vj.is_zero() {
                continue;
            }
            for (i, m) in &self.columns[j] {
                out[*i] = out[*i].clone() + m.clone() * vj.clone();
            }
        }
        out
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> SparseMap<U> {
        SparseMap {
            dim: self.dim,
            columns: self
                .columns
                .iter()
                .map(|c| c.iter().map(|(i, v)| (*i, f(v))).collect())
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_accumulates_and_cancels() {
        let mut t = Table::<f64>::zeros(2);
        t.add(0, 1, 1, 2.0);
        t.add(0, 1, 1, -2.0);
        assert_eq!(t.nnz(), 0);
        t.add(1, 1, 0, -1.0);
        assert_eq!(t.get(1, 1, 0), -1.0);
        assert_eq!(t.mul(&[0.0, 3.0], &[0.0, 2.0]), vec![-6.0, 0.0]);
    }

    #[test]
    fn mul_into_matches_mul() {
        let mut t = Table::<f64>::zeros(2);
        t.add(0, 0, 0, 1.0);
        t.add(0, 1, 1, 1.0);
        t.add(1, 0, 1, 1.0);
        t.add(1, 1, 0, -1.0);
        let a = [0.3, -1.2];
        let b = [2.0, 0.5];
        let mut out = [0.0; 2];
        t.mul_into(&a, &b, &mut out);
        assert_eq!(out.to_vec(), t.mul(&a, &b));
    }
}
