use std::fmt;

use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};
use crate::linalg::norm2;

/// Bound on `(rr)r - r(rr)` relative to `max(1, |r|^3)`.
pub const POWER_TOL: f64 = 1e-10;

/// Which side the coefficients multiply the powers from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CoefSide {
    #[default]
    Left,
    Right,
}

/// `f_0 + f_1 x + ... + f_n x^n` with `f_n != 0` (or the single coefficient 0).
#[derive(Clone, Debug, PartialEq)]
pub struct CommPoly {
    algebra: Algebra,
    coeffs: Vec<Element>,
}

impl CommPoly {
    pub fn new(algebra: &Algebra, mut coeffs: Vec<Element>) -> Result<Self> {
        for c in &coeffs {
            algebra.check_same(c.algebra())?;
        }
        while coeffs.len() > 1 && coeffs.last().is_some_and(Element::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(algebra.zero());
        }
        Ok(CommPoly {
            algebra: algebra.clone(),
            coeffs,
        })
    }

    /// Coefficients given as realified coordinate vectors.
    pub fn from_coords(algebra: &Algebra, coeffs: Vec<Vec<f64>>) -> Result<Self> {
        let cs = coeffs
            .into_iter()
            .map(|c| algebra.element(c))
            .collect::<Result<Vec<_>>>()?;
        CommPoly::new(algebra, cs)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn coeffs(&self) -> &[Element] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &Element {
        self.coeffs.last().expect("nonempty")
    }

    /// `f(r) = f_0 + f_1 r + ... + f_n r^n` with `r^i = r r^{i-1}`.
    pub fn eval(&self, r: &Element) -> Result<Element> {
        self.eval_with(r, CoefSide::Left)
    }

    pub fn eval_with(&self, r: &Element, side: CoefSide) -> Result<Element> {
        let alg = &self.algebra;
        alg.check_same(r.algebra())?;
        let x = r.coords();
        let n = self.degree();
        if n >= 3 {
            let rr = alg.mul_raw(x, x);
            let a = alg.mul_raw(&rr, x);
            let b = alg.mul_raw(x, &rr);
            let residual = a.iter().zip(&b).fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
            if residual > POWER_TOL * norm2(x).powi(3).max(1.0) {
                return Err(Error::PowerAmbiguity { residual });
            }
        }
        let mut acc = self.coeffs[0].coords().to_vec();
        let mut pow = alg.unit_coords().to_vec();
        for c in &self.coeffs[1..] {
            pow = alg.mul_raw(x, &pow);
            if c.is_zero() {
                continue;
            }
            let term = match side {
                CoefSide::Left => alg.mul_raw(c.coords(), &pow),
                CoefSide::Right => alg.mul_raw(&pow, c.coords()),
            };
            for (s, t) in acc.iter_mut().zip(term) {
                *s += t;
            }
        }
        alg.element(acc)
    }
}

pub(crate) fn fmt_coords(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
    parts.join(",")
}

impl fmt::Display for CommPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() && !(k == 0 && self.degree() == 0) {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({})", fmt_coords(c.coords()))?;
            match k {
                0 => {}
                1 => f.write_str("*x")?,
                _ => write!(f, "*x^{k}")?,
            }
        }
        Ok(())
    }
}
