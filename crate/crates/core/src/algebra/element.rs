use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{Algebra, Field};
use crate::error::Result;
use crate::linalg;

/// An element of an [`Algebra`], stored by realified coordinates.
#[derive(Clone)]
pub struct Element {
    algebra: Algebra,
    coords: Vec<f64>,
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({}: {:?})", self.algebra.name(), self.coords)
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.algebra.same(&other.algebra) && self.coords == other.coords
    }
}

impl Element {
    pub(crate) fn from_raw(algebra: Algebra, coords: Vec<f64>) -> Self {
        debug_assert_eq!(coords.len(), algebra.real_dim());
        Element { algebra, coords }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    /// Coordinates over the base field.
    pub fn base_coords(&self) -> Vec<Complex64> {
        match self.algebra.field() {
            Field::Real => self.coords.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            Field::Complex => {
                let d = self.algebra.dim();
                (0..d)
                    .map(|k| Complex64::new(self.coords[k], self.coords[k + d]))
                    .collect()
            }
        }
    }

    pub fn mul(&self, other: &Element) -> Result<Element> {
        self.algebra.check_same(&other.algebra)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Element) -> Element {
        Element::from_raw(
            self.algebra.clone(),
            self.algebra.mul_raw(&self.coords, &other.coords),
        )
    }

    pub fn scale(&self, s: f64) -> Element {
        Element::from_raw(self.algebra.clone(), self.coords.iter().map(|x| x * s).collect())
    }

    pub fn norm2(&self) -> f64 {
        linalg::norm2(&self.coords)
    }

    pub fn max_abs(&self) -> f64 {
        linalg::max_abs(&self.coords)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|x| *x == 0.0)
    }

    /// Matrix of `b -> self * b` on realified coordinates.
    pub fn left_mult_operator(&self) -> DMatrix<f64> {
        self.algebra.left_mult_matrix(&self.coords)
    }

    /// Matrix of `b -> b * self` on realified coordinates.
    pub fn right_mult_operator(&self) -> DMatrix<f64> {
        self.algebra.right_mult_matrix(&self.coords)
    }

    /// Complex `d x d` matrix of `b -> self * b` for complex algebras.
    pub fn complex_left_mult_operator(&self) -> Option<DMatrix<Complex64>> {
        complexify(&self.algebra, &self.left_mult_operator())
    }

    pub fn complex_right_mult_operator(&self) -> Option<DMatrix<Complex64>> {
        complexify(&self.algebra, &self.right_mult_operator())
    }

    pub fn distance_inf(&self, other: &Element) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

fn complexify(alg: &Algebra, m: &DMatrix<f64>) -> Option<DMatrix<Complex64>> {
    if alg.field() != Field::Complex {
        return None;
    }
    let d = alg.dim();
    // Column l of the real matrix is the image of u_l; a complex-linear
    // operator is determined by those columns.
    Some(DMatrix::from_fn(d, d, |k, l| Complex64::new(m[(k, l)], m[(k + d, l)])))
}

pub fn commutator(a: &Element, b: &Element) -> Result<Element> {
    Ok(&a.mul(b)? - &b.mul(a)?)
}

pub fn associator(a: &Element, b: &Element, c: &Element) -> Result<Element> {
    let ab_c = a.mul(b)?.mul(c)?;
    let a_bc = a.mul(&b.mul(c)?)?;
    Ok(&ab_c - &a_bc)
}

fn zip_with(a: &Element, b: &Element, f: impl Fn(f64, f64) -> f64) -> Element {
    assert!(
        a.algebra.same(&b.algebra),
        "arithmetic on elements of different algebras ({} vs {})",
        a.algebra.name(),
        b.algebra.name()
    );
    Element::from_raw(
        a.algebra.clone(),
        a.coords.iter().zip(&b.coords).map(|(x, y)| f(*x, *y)).collect(),
    )
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(-1.0)
    }
}

impl Mul<&Element> for f64 {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        rhs.scale(self)
    }
}
