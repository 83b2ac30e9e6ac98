//! Finite-dimensional algebras given by structure constants.
//!
//! An [`Algebra`] is a cheap handle (`Arc`) to an immutable description:
//! base field, dimension, basis labels, a sparse structure-constant tensor
//! `u_i u_j = sum_k c[i][j][k] u_k` and the coordinates of the unit.
//!
//! Complex algebras are stored *realified*: a complex algebra with basis
//! `u_0..u_{d-1}` is handled numerically as the real algebra with basis
//! `u_0..u_{d-1}, i u_0..i u_{d-1}`. Element coordinates are always real
//! vectors of length [`Algebra::real_dim`]; [`Element::base_coords`] gives
//! the complex view.

mod catalog;
mod copy;
mod element;
mod inverse;
pub mod io;
mod subspace;
mod table;

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Coef, Number, Scalar};

pub use catalog::{builtin, builtin_names, builtin_with_profile, cayley_dickson, hardcoded_octonions, hardcoded_quaternions, Profile};
pub use copy::{exp_circle, find_complex_copy, ComplexCopy, CopySearch, COPY_TOL};
pub use element::{associator, commutator, Element};
pub use inverse::{invert, FailedCondition, SingularVerdict};
pub use subspace::{center, nucleus, Subspace};
pub use table::{SparseMap, Table};

/// Residual below which the unit is accepted as a two-sided identity for
/// floating-point tables.
pub const UNIT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Real => f.write_str("real"),
            Field::Complex => f.write_str("complex"),
        }
    }
}

/// The standard involution carried by Cayley–Dickson algebras, as a real
/// linear map on coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Involution {
    pub(crate) num: SparseMap<f64>,
    pub(crate) exact: Option<SparseMap<BigRational>>,
}

impl Involution {
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.num.apply(v)
    }
}

#[derive(Debug)]
struct Inner {
    name: String,
    field: Field,
    dim: usize,
    labels: Vec<String>,
    /// Source entries over the base field, kept for serialization.
    entries: Vec<(usize, usize, usize, Coef)>,
    unit_base: Vec<Coef>,
    real: Table<f64>,
    exact: Option<Table<BigRational>>,
    unit: Vec<f64>,
    involution: Option<Involution>,
}

/// Handle to an immutable finite-dimensional unital algebra.
#[derive(Clone)]
pub struct Algebra(Arc<Inner>);

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algebra")
            .field("name", &self.0.name)
            .field("field", &self.0.field)
            .field("dim", &self.0.dim)
            .finish()
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

/// Builder for [`Algebra`]; validates shape and the unit on `build`.
#[derive(Clone, Debug)]
pub struct AlgebraBuilder {
    name: String,
    field: Field,
    dim: usize,
    labels: Option<Vec<String>>,
    entries: Vec<(usize, usize, usize, Coef)>,
    unit: Option<Vec<Coef>>,
    involution: Option<Vec<(usize, usize, Number)>>,
}

impl AlgebraBuilder {
    pub fn new(name: impl Into<String>, field: Field, dim: usize) -> Self {
        AlgebraBuilder {
            name: name.into(),
            field,
            dim,
            labels: None,
            entries: Vec::new(),
            unit: None,
            involution: None,
        }
    }

    pub fn labels<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Self {
        self.labels = Some(labels.into_iter().map(Into::into).collect());
        self
    }

    /// Sets `c[i][j][k]` (accumulating if repeated).
    pub fn entry(mut self, i: usize, j: usize, k: usize, value: impl Into<Coef>) -> Self {
        self.entries.push((i, j, k, value.into()));
        self
    }

    pub fn push_entry(&mut self, i: usize, j: usize, k: usize, value: Coef) {
        self.entries.push((i, j, k, value));
    }

    pub fn unit(mut self, unit: Vec<Coef>) -> Self {
        self.unit = Some(unit);
        self
    }

    /// Unit equal to basis vector `idx`.
    pub fn unit_basis(mut self, idx: usize) -> Self {
        let mut u = vec![Coef::from(0i64); self.dim];
        if idx < self.dim {
            u[idx] = Coef::from(1i64);
        }
        self.unit = Some(u);
        self
    }

    /// Standard involution: `sigma(u_col) = sum value * u_row` over real coordinates.
    pub fn involution(mut self, entries: Vec<(usize, usize, Number)>) -> Self {
        self.involution = Some(entries);
        self
    }

    pub fn build(self) -> Result<Algebra> {
        let d = self.dim;
        if d == 0 {
            return Err(Error::InvalidAlgebra("dimension must be at least 1".into()));
        }
        let labels = match self.labels {
            Some(l) if l.len() != d => {
                return Err(Error::InvalidAlgebra(format!(
                    "{} basis labels for dimension {d}",
                    l.len()
                )))
            }
            Some(l) => l,
            None => (0..d).map(|i| format!("u{i}")).collect(),
        };
        let unit_base = self
            .unit
            .ok_or_else(|| Error::InvalidAlgebra("missing unit".into()))?;
        if unit_base.len() != d {
            return Err(Error::Dimension {
                expected: d,
                got: unit_base.len(),
            });
        }
        let rd = match self.field {
            Field::Real => d,
            Field::Complex => 2 * d,
        };
        for (i, j, k, c) in &self.entries {
            if *i >= d || *j >= d || *k >= d {
                return Err(Error::InvalidAlgebra(format!(
                    "table index ({i}, {j}, {k}) out of range for dimension {d}"
                )));
            }
            if self.field == Field::Real && !c.im.is_zero() {
                return Err(Error::InvalidAlgebra(
                    "complex structure constant in a real algebra".into(),
                ));
            }
        }
        if self.field == Field::Real && unit_base.iter().any(|c| !c.im.is_zero()) {
            return Err(Error::InvalidAlgebra("complex unit in a real algebra".into()));
        }

        let exact_ok = self.entries.iter().all(|(_, _, _, c)| c.is_exact())
            && unit_base.iter().all(Coef::is_exact);
        let real = realify(self.field, d, &self.entries, |n| n.to_f64());
        let exact = exact_ok.then(|| {
            realify(self.field, d, &self.entries, |n| {
                n.as_exact().cloned().expect("checked exact")
            })
        });
        let unit: Vec<f64> = realify_vec(self.field, &unit_base, |n| n.to_f64());

        let involution = match self.involution {
            None => None,
            Some(_) if self.field == Field::Complex => {
                return Err(Error::InvalidAlgebra(
                    "involution metadata is only supported on real algebras".into(),
                ))
            }
            Some(ents) => {
                let mut num_cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); rd];
                let mut ex_cols: Vec<Vec<(usize, BigRational)>> = vec![Vec::new(); rd];
                let mut all_exact = true;
                for (row, col, v) in &ents {
                    if *row >= rd || *col >= rd {
                        return Err(Error::InvalidAlgebra("involution index out of range".into()));
                    }
                    num_cols[*col].push((*row, v.to_f64()));
                    match v.as_exact() {
                        Some(r) => ex_cols[*col].push((*row, r.clone())),
                        None => all_exact = false,
                    }
                }
                Some(Involution {
                    num: SparseMap::from_columns(rd, num_cols),
                    exact: (all_exact && exact_ok).then(|| SparseMap::from_columns(rd, ex_cols)),
                })
            }
        };

        let alg = Algebra(Arc::new(Inner {
            name: self.name,
            field: self.field,
            dim: d,
            labels,
            entries: self.entries,
            unit_base,
            real,
            exact,
            unit,
            involution,
        }));
        alg.check_unit()?;
        Ok(alg)
    }
}

fn realify<T: Scalar>(
    field: Field,
    d: usize,
    entries: &[(usize, usize, usize, Coef)],
    conv: impl Fn(&Number) -> T,
) -> Table<T> {
    let rd = if field == Field::Real { d } else { 2 * d };
    let mut t = Table::zeros(rd);
    for (i, j, k, c) in entries {
        let re = conv(&c.re);
        let im = conv(&c.im);
        t.add(*i, *j, *k, re.clone());
        if field == Field::Complex {
            t.add(*i, *j, k + d, im.clone());
            // (i u_p) u_q = u_p (i u_q) = i (u_p u_q)
            for (p, q) in [(i + d, *j), (*i, j + d)] {
                t.add(p, q, k + d, re.clone());
                t.add(p, q, *k, -im.clone());
            }
            // (i u_p)(i u_q) = -(u_p u_q)
            t.add(i + d, j + d, *k, -re.clone());
            t.add(i + d, j + d, k + d, -im.clone());
        }
    }
    t
}

fn realify_vec<T: Scalar>(field: Field, v: &[Coef], conv: impl Fn(&Number) -> T) -> Vec<T> {
    let mut out: Vec<T> = v.iter().map(|c| conv(&c.re)).collect();
    if field == Field::Complex {
        out.extend(v.iter().map(|c| conv(&c.im)));
    }
    out
}

impl Algebra {
    pub fn builder(name: impl Into<String>, field: Field, dim: usize) -> AlgebraBuilder {
        AlgebraBuilder::new(name, field, dim)
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn field(&self) -> Field {
        self.0.field
    }

    /// Dimension over the base field.
    pub fn dim(&self) -> usize {
        self.0.dim
    }

    /// Dimension of the realified algebra (length of coordinate vectors).
    pub fn real_dim(&self) -> usize {
        self.0.real.dim()
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    /// Labels of the realified basis.
    pub fn real_labels(&self) -> Vec<String> {
        match self.0.field {
            Field::Real => self.0.labels.clone(),
            Field::Complex => self
                .0
                .labels
                .iter()
                .cloned()
                .chain(self.0.labels.iter().map(|l| format!("i*{l}")))
                .collect(),
        }
    }

    pub fn table(&self) -> &Table<f64> {
        &self.0.real
    }

    /// Exact structure constants, present when every input value was rational.
    pub fn exact_table(&self) -> Option<&Table<BigRational>> {
        self.0.exact.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.0.exact.is_some()
    }

    pub fn entries(&self) -> &[(usize, usize, usize, Coef)] {
        &self.0.entries
    }

    pub fn unit_base(&self) -> &[Coef] {
        &self.0.unit_base
    }

    pub fn involution(&self) -> Option<&Involution> {
        self.0.involution.as_ref()
    }

    /// Same handle or structurally identical algebra.
    pub fn same(&self, other: &Algebra) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.name == other.0.name
                && self.0.field == other.0.field
                && self.0.real == other.0.real
                && self.0.unit == other.0.unit)
    }

    pub(crate) fn check_same(&self, other: &Algebra) -> Result<()> {
        if self.same(other) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch {
                left: self.name().to_string(),
                right: other.name().to_string(),
            })
        }
    }

    pub fn unit(&self) -> Element {
        Element::from_raw(self.clone(), self.0.unit.clone())
    }

    pub fn unit_coords(&self) -> &[f64] {
        &self.0.unit
    }

    pub fn zero(&self) -> Element {
        Element::from_raw(self.clone(), vec![0.0; self.real_dim()])
    }

    /// Realified basis vector `idx`.
    pub fn basis(&self, idx: usize) -> Element {
        let mut v = vec![0.0; self.real_dim()];
        v[idx] = 1.0;
        Element::from_raw(self.clone(), v)
    }

    /// Element from realified coordinates.
    pub fn element(&self, coords: Vec<f64>) -> Result<Element> {
        if coords.len() != self.real_dim() {
            return Err(Error::Dimension {
                expected: self.real_dim(),
                got: coords.len(),
            });
        }
        Ok(Element::from_raw(self.clone(), coords))
    }

    /// Element from base-field coordinates.
    pub fn element_from_base(&self, coords: &[Complex64]) -> Result<Element> {
        if coords.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: coords.len(),
            });
        }
        match self.field() {
            Field::Real => {
                if coords.iter().any(|c| c.im != 0.0) {
                    return Err(Error::InvalidArgument(
                        "complex coordinate for a real algebra".into(),
                    ));
                }
                Ok(Element::from_raw(self.clone(), coords.iter().map(|c| c.re).collect()))
            }
            Field::Complex => {
                let mut v: Vec<f64> = coords.iter().map(|c| c.re).collect();
                v.extend(coords.iter().map(|c| c.im));
                Ok(Element::from_raw(self.clone(), v))
            }
        }
    }

    /// Product of raw realified coordinate vectors.
    pub fn mul_raw(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.real_dim()];
        self.0.real.mul_into(a, b, &mut out);
        out
    }

    pub fn mul_into(&self, a: &[f64], b: &[f64], out: &mut [f64]) {
        self.0.real.mul_into(a, b, out);
    }

    /// Real matrix of `b -> a b` (column k = coordinates of `a u_k`).
    pub fn left_mult_matrix(&self, a: &[f64]) -> DMatrix<f64> {
        let n = self.real_dim();
        let mut m = DMatrix::zeros(n, n);
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0.0 {
                continue;
            }
            for k in 0..n {
                for &(r, c) in self.0.real.basis_product(i, k) {
                    m[(r, k)] += ai * c;
                }
            }
        }
        m
    }

    /// Real matrix of `b -> b a`.
    pub fn right_mult_matrix(&self, a: &[f64]) -> DMatrix<f64> {
        let n = self.real_dim();
        let mut m = DMatrix::zeros(n, n);
        for (j, &aj) in a.iter().enumerate() {
            if aj == 0.0 {
                continue;
            }
            for k in 0..n {
                for &(r, c) in self.0.real.basis_product(k, j) {
                    m[(r, k)] += aj * c;
                }
            }
        }
        m
    }

    /// Moduli of the base-field coordinates of a realified vector of length
    /// `m * real_dim / dim` (an element, or a stacked tuple of elements).
    pub fn base_moduli(&self, v: &[f64]) -> Vec<f64> {
        base_moduli(self.field(), v)
    }

    fn check_unit(&self) -> Result<()> {
        let n = self.real_dim();
        if let Some(exact) = &self.0.exact {
            let unit = realify_vec(self.0.field, &self.0.unit_base, |x| {
                x.as_exact().cloned().expect("exact unit")
            });
            for i in 0..n {
                let mut e = vec![<BigRational as Scalar>::zero(); n];
                e[i] = <BigRational as Scalar>::one();
                if exact.mul(&unit, &e) != e || exact.mul(&e, &unit) != e {
                    let l = self.mul_raw(&self.0.unit, &e.iter().map(Scalar::to_f64).collect::<Vec<_>>());
                    let residual = l
                        .iter()
                        .enumerate()
                        .map(|(k, x)| (x - if k == i { 1.0 } else { 0.0 }).abs())
                        .fold(0.0, f64::max);
                    return Err(Error::UnitNotIdentity {
                        residual: residual.max(f64::MIN_POSITIVE),
                    });
                }
            }
            return Ok(());
        }
        let mut residual: f64 = 0.0;
        for i in 0..n {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            let l = self.mul_raw(&self.0.unit, &e);
            let r = self.mul_raw(&e, &self.0.unit);
            for k in 0..n {
                let t = if k == i { 1.0 } else { 0.0 };
                residual = residual.max((l[k] - t).abs()).max((r[k] - t).abs());
            }
        }
        if residual < UNIT_TOL {
            Ok(())
        } else {
            Err(Error::UnitNotIdentity { residual })
        }
    }
}

pub(crate) fn base_moduli(field: Field, v: &[f64]) -> Vec<f64> {
    match field {
        Field::Real => v.iter().map(|x| x.abs()).collect(),
        Field::Complex => {
            let h = v.len() / 2;
            (0..h).map(|k| v[k].hypot(v[k + h])).collect()
        }
    }
}
