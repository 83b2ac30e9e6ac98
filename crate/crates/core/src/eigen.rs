//! Eigenvalues of matrices with entries in an algebra.
//!
//! `A^n` is made a complex vector space through a copy `C_I`: scalars act
//! by `L_I` (left) or `R_I` (right) in every entry. When `X -> MX` commutes
//! with that action it is a complex-linear map, and the eigenvalues of its
//! complex matrix are the `lambda` in `C_I` with `MX = lambda X` (left) or
//! `MX = X lambda` (right).

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::algebra::io::{element_from_value, element_to_value};
use crate::algebra::{builtin, Algebra, ComplexCopy, Element};
use crate::error::{Error, ParseError, Result};
use crate::identities::{check_associative, CheckConfig};
use crate::linalg::{self, complex_null_vector, max_abs};

/// `||J^2 + Id||` and `||TJ - JT||` bound (relative to `1 + ||T||`).
pub const STRUCTURE_TOL: f64 = 1e-10;
const SCHUR_EPS: f64 = 1e-15;
const SCHUR_MAX_ITER: usize = 10_000;

/// Square matrix of algebra elements, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraMatrix {
    algebra: Algebra,
    n: usize,
    entries: Vec<Element>,
}

impl AlgebraMatrix {
    pub fn new(algebra: &Algebra, n: usize, entries: Vec<Element>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("empty matrix".into()));
        }
        if entries.len() != n * n {
            return Err(Error::Dimension {
                expected: n * n,
                got: entries.len(),
            });
        }
        for e in &entries {
            algebra.check_same(e.algebra())?;
        }
        Ok(AlgebraMatrix {
            algebra: algebra.clone(),
            n,
            entries,
        })
    }

    pub fn from_rows(algebra: &Algebra, rows: Vec<Vec<Element>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(ParseError::Matrix("rows must have length n".into()).into());
        }
        AlgebraMatrix::new(algebra, n, rows.into_iter().flatten().collect())
    }

    pub fn identity(algebra: &Algebra, n: usize) -> Self {
        Self::diagonal(algebra, &vec![algebra.unit(); n]).expect("same algebra")
    }

    pub fn diagonal(algebra: &Algebra, diag: &[Element]) -> Result<Self> {
        let n = diag.len();
        let entries = (0..n * n)
            .map(|k| if k / n == k % n { diag[k / n].clone() } else { algebra.zero() })
            .collect();
        AlgebraMatrix::new(algebra, n, entries)
    }

    /// An `n x n` JSON array of coordinate arrays (or element strings).
    pub fn from_value(algebra: &Algebra, v: &Value) -> Result<Self> {
        let bad = |why: &str| Error::from(ParseError::Matrix(why.into()));
        let rows = v.as_array().ok_or_else(|| bad("expected an array of rows"))?;
        let rows = rows
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| bad("expected each row to be an array"))?
                    .iter()
                    .map(|e| match e {
                        Value::String(s) => crate::algebra::io::parse_element(algebra, s),
                        _ => element_from_value(algebra, e),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if rows.is_empty() {
            return Err(bad("empty matrix"));
        }
        AlgebraMatrix::from_rows(algebra, rows)
    }

    pub fn parse_json(algebra: &Algebra, text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
        AlgebraMatrix::from_value(algebra, &v)
    }

    pub fn to_value(&self) -> Value {
        Value::Array(
            self.entries
                .chunks(self.n)
                .map(|r| Value::Array(r.iter().map(element_to_value).collect()))
                .collect(),
        )
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> &Element {
        &self.entries[r * self.n + c]
    }

    pub fn entries(&self) -> &[Element] {
        &self.entries
    }

    pub fn scale(&self, s: f64) -> Self {
        AlgebraMatrix {
            algebra: self.algebra.clone(),
            n: self.n,
            entries: self.entries.iter().map(|e| e.scale(s)).collect(),
        }
    }

    /// `(MX)_r = sum_s M_rs X_s`.
    pub fn apply(&self, x: &[Element]) -> Result<Vec<Element>> {
        if x.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: x.len(),
            });
        }
        for e in x {
            self.algebra.check_same(e.algebra())?;
        }
        Ok(self.apply_raw(&x.iter().map(|e| e.coords().to_vec()).collect::<Vec<_>>())
            .into_iter()
            .map(|v| Element::from_raw(self.algebra.clone(), v))
            .collect())
    }

    fn apply_raw(&self, x: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let d = self.algebra.real_dim();
        (0..self.n)
            .map(|r| {
                let mut acc = vec![0.0; d];
                for (s, xs) in x.iter().enumerate() {
                    for (a, p) in acc.iter_mut().zip(self.algebra.mul_raw(self.get(r, s).coords(), xs)) {
                        *a += p;
                    }
                }
                acc
            })
            .collect()
    }

    /// Max row sum of the entries' max-abs coordinates.
    pub fn norm_inf(&self) -> f64 {
        self.entries
            .chunks(self.n)
            .map(|r| r.iter().map(Element::max_abs).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Real matrix of `X -> MX` on `A^n` (blocks `L_{M_rs}`).
    pub fn real_operator(&self) -> DMatrix<f64> {
        let d = self.algebra.real_dim();
        let mut t = DMatrix::zeros(self.n * d, self.n * d);
        for r in 0..self.n {
            for s in 0..self.n {
                t.view_mut((r * d, s * d), (d, d))
                    .copy_from(&self.algebra.left_mult_matrix(self.get(r, s).coords()));
            }
        }
        t
    }
}

impl fmt::Display for AlgebraMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_value())
    }
}

/// Default tolerance `1e-8 (1 + ||M||_inf)`.
pub fn default_tol(m: &AlgebraMatrix) -> f64 {
    1e-8 * (1.0 + m.norm_inf())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// Complex structure `J` on `A^n` with a complex basis `b_1..b_p`; the real
/// basis is `b_1..b_p, J b_1..J b_p`.
#[derive(Clone, Debug)]
pub struct ComplexStructure {
    j: DMatrix<f64>,
    basis: Vec<DVector<f64>>,
    side: Side,
    /// Inverse of the real basis matrix.
    coords: DMatrix<f64>,
}

impl ComplexStructure {
    /// Structure on `A^n` from `L_I` or `R_I` acting entrywise.
    pub fn new(copy: &ComplexCopy, side: Side, n: usize) -> Result<Self> {
        let alg = copy.algebra();
        let i = copy.i().coords();
        let block = match side {
            Side::Left => alg.left_mult_matrix(i),
            Side::Right => alg.right_mult_matrix(i),
        };
        let d = alg.real_dim();
        let mut j = DMatrix::zeros(n * d, n * d);
        for r in 0..n {
            j.view_mut((r * d, r * d), (d, d)).copy_from(&block);
        }
        Self::from_matrix(j, side)
    }

    pub fn from_matrix(j: DMatrix<f64>, side: Side) -> Result<Self> {
        let m = j.nrows();
        let residual = linalg::max_abs((&j * &j + DMatrix::identity(m, m)).as_slice());
        if !(residual < STRUCTURE_TOL) {
            return Err(Error::NotComplexStructure { residual });
        }
        // Greedy: a coordinate vector joins if it raises the rank of
        // span(chosen, J chosen) by two.
        let mut basis = Vec::new();
        let mut cols: Vec<DVector<f64>> = Vec::new();
        for k in 0..m {
            if cols.len() == m {
                break;
            }
            let e = DVector::from_fn(m, |r, _| if r == k { 1.0 } else { 0.0 });
            let je = &j * &e;
            let mut trial = cols.clone();
            trial.push(e.clone());
            trial.push(je.clone());
            if linalg::rank(&DMatrix::from_columns(&trial), 1e-9) == trial.len() {
                cols = trial;
                basis.push(e);
            }
        }
        let p = basis.len();
        let ordered: Vec<DVector<f64>> = basis.iter().cloned().chain(basis.iter().map(|b| &j * b)).collect();
        let b = DMatrix::from_columns(&ordered);
        let coords = b
            .try_inverse()
            .filter(|_| 2 * p == m)
            .ok_or_else(|| Error::NotComplexStructure { residual: f64::NAN })?;
        Ok(ComplexStructure { j, basis, side, coords })
    }

    pub fn j(&self) -> &DMatrix<f64> {
        &self.j
    }

    pub fn complex_basis(&self) -> &[DVector<f64>] {
        &self.basis
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn complex_dim(&self) -> usize {
        self.basis.len()
    }

    /// Complex coordinates of a real vector: `v = sum Re(z_k) b_k + Im(z_k) J b_k`.
    pub fn to_complex(&self, v: &DVector<f64>) -> DVector<Complex64> {
        let w = &self.coords * v;
        let p = self.basis.len();
        DVector::from_fn(p, |k, _| Complex64::new(w[k], w[p + k]))
    }

    pub fn to_real(&self, z: &DVector<Complex64>) -> DVector<f64> {
        let m = self.j.nrows();
        let mut v = DVector::zeros(m);
        for (b, c) in self.basis.iter().zip(z.iter()) {
            v += b * c.re + (&self.j * b) * c.im;
        }
        v
    }

    /// Complex matrix of a real operator that commutes with `J`.
    pub fn complexify(&self, t: &DMatrix<f64>) -> Result<DMatrix<Complex64>> {
        let residual = max_abs((t * &self.j - &self.j * t).as_slice());
        let scale = 1.0 + max_abs(t.as_slice());
        if !(residual < STRUCTURE_TOL * scale) {
            return Err(Error::NotComplexLinear { residual });
        }
        let p = self.basis.len();
        let mut c = DMatrix::zeros(p, p);
        for (l, b) in self.basis.iter().enumerate() {
            c.set_column(l, &self.to_complex(&(t * b)));
        }
        Ok(c)
    }
}

#[derive(Clone, Debug)]
pub struct EigenPair {
    /// `(x, y)` for `lambda = x + yI`.
    pub lambda: (f64, f64),
    /// Eigenvector, normalized to `||X||_inf = 1`.
    pub x: Vec<Element>,
    /// `||MX - lambda X||_inf`.
    pub residual_left: f64,
    /// `||MX - X lambda||_inf`.
    pub residual_right: f64,
    pub two_sided: bool,
    /// Size of the eigenvalue cluster this pair represents.
    pub multiplicity: usize,
}

impl Serialize for EigenPair {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("EigenPair", 6)?;
        st.serialize_field("lambda", &self.lambda)?;
        st.serialize_field("x", &self.x.iter().map(element_to_value).collect::<Vec<_>>())?;
        st.serialize_field("residual_left", &self.residual_left)?;
        st.serialize_field("residual_right", &self.residual_right)?;
        st.serialize_field("two_sided", &self.two_sided)?;
        st.serialize_field("multiplicity", &self.multiplicity)?;
        st.end()
    }
}

/// `(||MX - lambda X||_inf, ||MX - X lambda||_inf)` from scratch.
pub fn residuals(m: &AlgebraMatrix, copy: &ComplexCopy, lambda: (f64, f64), x: &[Element]) -> Result<(f64, f64)> {
    let mx = m.apply(x)?;
    let l = copy.embed(lambda.0, lambda.1);
    let (mut left, mut right) = (0.0f64, 0.0f64);
    for (a, xi) in mx.iter().zip(x) {
        let lx = l.mul(xi)?;
        let xl = xi.mul(&l)?;
        left = left.max(a.distance_inf(&lx));
        right = right.max(a.distance_inf(&xl));
    }
    Ok((left, right))
}

/// Eigenvalues of a complex matrix with a stopping criterion on the Schur form.
pub fn complex_eigenvalues(c: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let schur = c
        .clone()
        .try_schur(SCHUR_EPS, SCHUR_MAX_ITER)
        .ok_or_else(|| Error::Eigensolver("Schur iteration did not converge".into()))?;
    let ev = schur
        .eigenvalues()
        .ok_or_else(|| Error::Eigensolver("no triangular Schur form".into()))?;
    Ok(ev.iter().copied().collect())
}

/// Descending `|lambda|` (moduli within `1e-12` relative tie), then
/// descending imaginary part, then descending real part.
fn lambda_order(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    let (ra, rb) = (a.norm(), b.norm());
    let by_mod = if (ra - rb).abs() <= 1e-12 * ra.max(rb).max(1.0) {
        std::cmp::Ordering::Equal
    } else {
        rb.total_cmp(&ra)
    };
    by_mod.then(b.im.total_cmp(&a.im)).then(b.re.total_cmp(&a.re))
}

/// Groups eigenvalues into clusters of mutual (chained) distance `<= tol`.
fn cluster(mut ev: Vec<Complex64>, tol: f64) -> Vec<(Complex64, usize)> {
    ev.sort_by(lambda_order);
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    'next: for z in ev {
        for g in groups.iter_mut() {
            if g.iter().any(|w| (w - z).norm() <= tol) {
                g.push(z);
                continue 'next;
            }
        }
        groups.push(vec![z]);
    }
    let mut out: Vec<(Complex64, usize)> = groups
        .into_iter()
        .map(|g| {
            let k = g.len();
            (g.iter().sum::<Complex64>() / k as f64, k)
        })
        .collect();
    out.sort_by(|a, b| lambda_order(&a.0, &b.0));
    out
}

fn pairs(m: &AlgebraMatrix, copy: &ComplexCopy, side: Side, tol: f64) -> Result<Vec<EigenPair>> {
    m.algebra.check_same(copy.algebra())?;
    let cs = ComplexStructure::new(copy, side, m.n)?;
    let c = cs.complexify(&m.real_operator())?;
    let p = c.nrows();
    let d = m.algebra.real_dim();
    let mut out = Vec::new();
    for (lambda, mult) in cluster(complex_eigenvalues(&c)?, tol) {
        let shifted = &c - DMatrix::from_diagonal_element(p, p, lambda);
        let (mut z, _) = complex_null_vector(&shifted);
        // Fix the phase: largest coordinate (first on ties) real positive.
        let k0 = (0..p).fold(0, |b, k| if z[k].norm() > z[b].norm() * (1.0 + 1e-12) { k } else { b });
        let phase = z[k0].conj() / z[k0].norm();
        z *= phase;
        let v = cs.to_real(&z);
        let v = &v / max_abs(v.as_slice());
        let x: Vec<Element> = (0..m.n)
            .map(|r| Element::from_raw(m.algebra.clone(), v.as_slice()[r * d..(r + 1) * d].to_vec()))
            .collect();
        let lam = (lambda.re, lambda.im);
        let (residual_left, residual_right) = residuals(m, copy, lam, &x)?;
        let defining = match side {
            Side::Left => residual_left,
            Side::Right => residual_right,
        };
        if side == Side::Right && !(defining < tol) {
            continue;
        }
        out.push(EigenPair {
            lambda: lam,
            x,
            residual_left,
            residual_right,
            two_sided: residual_left < tol && residual_right < tol,
            multiplicity: mult,
        });
    }
    Ok(out)
}

/// `MX = lambda X` with `lambda` in a nuclear copy `C_I`. `X -> MX` must
/// commute with `L_I`, which holds whenever `I` is central.
pub fn left_eigenpairs(m: &AlgebraMatrix, copy: &ComplexCopy, tol: f64) -> Result<Vec<EigenPair>> {
    if !copy.nuclear() {
        return Err(Error::NonNuclearCopy);
    }
    pairs(m, copy, Side::Left, tol)
}

/// `MX = X lambda` over an associative algebra containing `C_I`.
pub fn right_eigenpairs(m: &AlgebraMatrix, copy: &ComplexCopy, tol: f64) -> Result<Vec<EigenPair>> {
    let rep = check_associative(m.algebra(), &CheckConfig::default());
    if !rep.holds() {
        return Err(Error::NotAssociative {
            residual: rep.max_residual,
        });
    }
    pairs(m, copy, Side::Right, tol)
}

/// The `2n x 2n` complex adjoint of a quaternion matrix: `q = a + bj` with
/// `a, b` in `C_i` becomes the block `[[a, b], [-conj(b), conj(a)]]`.
///
/// This block is multiplicative. Its transpose `[[a, -conj(b)], [b, conj(a)]]`
/// is not (it reverses products), so it only agrees with it for `n = 1`.
pub fn complex_adjoint_quaternion(m: &AlgebraMatrix) -> Result<DMatrix<Complex64>> {
    let h = builtin("H")?;
    if !m.algebra().same(&h) {
        return Err(Error::WrongAlgebra(format!("expected H, got {}", m.algebra().name())));
    }
    let n = m.n();
    let mut c = DMatrix::zeros(2 * n, 2 * n);
    for r in 0..n {
        for s in 0..n {
            let q = m.get(r, s).coords();
            let a = Complex64::new(q[0], q[1]);
            let b = Complex64::new(q[2], q[3]);
            c[(2 * r, 2 * s)] = a;
            c[(2 * r, 2 * s + 1)] = b;
            c[(2 * r + 1, 2 * s)] = -b.conj();
            c[(2 * r + 1, 2 * s + 1)] = a.conj();
        }
    }
    Ok(c)
}

/// Pairs each `a` with a distinct nearest `b`; the largest matched distance,
/// or infinity for multisets of different size.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    // Greedy on globally shortest pairs first.
    let mut cand: Vec<(f64, usize, usize)> = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            cand.push(((x - y).norm(), i, j));
        }
    }
    cand.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut done = vec![false; a.len()];
    for (dist, i, j) in cand {
        if !done[i] && !used[j] {
            done[i] = true;
            used[j] = true;
            worst = worst.max(dist);
        }
    }
    worst
}

/// Eigenvalues of a pair list, expanded by multiplicity.
pub fn spectrum(pairs: &[EigenPair]) -> Vec<Complex64> {
    pairs
        .iter()
        .flat_map(|p| std::iter::repeat_n(Complex64::new(p.lambda.0, p.lambda.1), p.multiplicity))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h() -> Algebra {
        builtin("H").unwrap()
    }

    #[test]
    fn quaternion_right_structure() {
        let cc = ComplexCopy::verify(h().basis(1)).unwrap();
        let cs = ComplexStructure::new(&cc, Side::Right, 1).unwrap();
        assert_eq!(cs.complex_dim(), 2);
        let v = DVector::from_vec(vec![0.3, -1.0, 2.0, 0.5]);
        let back = cs.to_real(&cs.to_complex(&v));
        assert!((back - v).amax() < 1e-14);
        let c = builtin("C").unwrap();
        let ci = ComplexCopy::verify(c.basis(1)).unwrap();
        assert_eq!(ComplexStructure::new(&ci, Side::Left, 3).unwrap().complex_dim(), 3);
    }

    #[test]
    fn j_square_must_be_minus_identity() {
        let j = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert!(matches!(
            ComplexStructure::from_matrix(j, Side::Left),
            Err(Error::NotComplexStructure { .. })
        ));
    }

    #[test]
    fn hand_example_j() {
        let a = h();
        let cc = ComplexCopy::verify(a.basis(1)).unwrap();
        let m = AlgebraMatrix::new(&a, 1, vec![a.basis(2)]).unwrap();
        let ps = right_eigenpairs(&m, &cc, default_tol(&m)).unwrap();
        assert_eq!(ps.len(), 2);
        // Sorted by descending imaginary part on equal modulus.
        assert!((ps[0].lambda.0).abs() < 1e-12 && (ps[0].lambda.1 - 1.0).abs() < 1e-12);
        assert!((ps[1].lambda.1 + 1.0).abs() < 1e-12);
        // X = (1 + k) c with c in C_i.
        let one_k = a.element(vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        let inv = crate::algebra::invert(&one_k, 1e-12).unwrap();
        let c = inv.mul(&ps[0].x[0]).unwrap();
        assert!(c.coords()[2].abs() < 1e-12 && c.coords()[3].abs() < 1e-12);
        assert!(ps.iter().all(|p| p.residual_right < 1e-12 && !p.two_sided));
    }

    #[test]
    fn adjoint_blocks() {
        let a = h();
        let j = complex_adjoint_quaternion(&AlgebraMatrix::new(&a, 1, vec![a.basis(2)]).unwrap()).unwrap();
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(j, DMatrix::from_row_slice(2, 2, &[z, one, -one, z]));
        let i = complex_adjoint_quaternion(&AlgebraMatrix::new(&a, 1, vec![a.basis(1)]).unwrap()).unwrap();
        assert_eq!(i[(0, 0)], Complex64::new(0.0, 1.0));
        assert_eq!(i[(1, 1)], Complex64::new(0.0, -1.0));
        let o = builtin("O").unwrap();
        assert!(matches!(
            complex_adjoint_quaternion(&AlgebraMatrix::identity(&o, 1)),
            Err(Error::WrongAlgebra(_))
        ));
    }

    #[test]
    fn adjoint_is_multiplicative() {
        let a = h();
        let p = AlgebraMatrix::new(&a, 1, vec![a.element(vec![0.5, -1.0, 2.0, 0.25]).unwrap()]).unwrap();
        let q = AlgebraMatrix::new(&a, 1, vec![a.element(vec![-1.5, 0.5, 1.0, 3.0]).unwrap()]).unwrap();
        let pq = AlgebraMatrix::new(&a, 1, vec![p.get(0, 0).mul(q.get(0, 0)).unwrap()]).unwrap();
        let lhs = complex_adjoint_quaternion(&pq).unwrap();
        let rhs = complex_adjoint_quaternion(&p).unwrap() * complex_adjoint_quaternion(&q).unwrap();
        assert!((lhs - rhs).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn identity_matrix() {
        let c = builtin("mat2c").unwrap();
        let ci = ComplexCopy::verify(c.element(vec![0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0]).unwrap()).unwrap();
        assert!(ci.central());
        let m = AlgebraMatrix::identity(&c, 2);
        let ps = left_eigenpairs(&m, &ci, default_tol(&m)).unwrap();
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].multiplicity, 8);
        assert!(ps[0].two_sided);
    }

    #[test]
    fn noncentral_left_structure_is_refused() {
        let a = h();
        let cc = ComplexCopy::verify(a.basis(1)).unwrap();
        let m = AlgebraMatrix::new(&a, 1, vec![a.basis(2)]).unwrap();
        assert!(matches!(left_eigenpairs(&m, &cc, 1e-8), Err(Error::NotComplexLinear { .. })));
        let o = builtin("O").unwrap();
        let oc = ComplexCopy::verify(o.basis(1)).unwrap();
        let om = AlgebraMatrix::identity(&o, 1);
        assert!(matches!(right_eigenpairs(&om, &oc, 1e-8), Err(Error::NotAssociative { .. })));
        assert!(matches!(left_eigenpairs(&om, &oc, 1e-8), Err(Error::NonNuclearCopy)));
    }

    #[test]
    fn matrix_json_round_trip() {
        let a = h();
        let m = AlgebraMatrix::parse_json(&a, "[[[0,0,1,0], \"1 + k\"], [[1,0,0,0], [0,0,0,0]]]").unwrap();
        assert_eq!(m.n(), 2);
        assert_eq!(m.get(0, 1), &a.element(vec![1.0, 0.0, 0.0, 1.0]).unwrap());
        let again = AlgebraMatrix::from_value(&a, &m.to_value()).unwrap();
        assert_eq!(m, again);
        assert!(AlgebraMatrix::parse_json(&a, "[[[1,0,0,0]], []]").is_err());
        assert!(AlgebraMatrix::parse_json(&a, "[]").is_err());
    }

    #[test]
    fn multiset_matching() {
        let z = |r, i| Complex64::new(r, i);
        assert_eq!(multiset_distance(&[z(1.0, 0.0), z(0.0, 1.0)], &[z(0.0, 1.0), z(1.0, 0.0)]), 0.0);
        assert!(multiset_distance(&[z(1.0, 0.0)], &[]).is_infinite());
    }
}
