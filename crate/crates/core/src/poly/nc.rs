use std::fmt;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::comm::fmt_coords;
use crate::algebra::{Algebra, ComplexCopy, Element, COPY_TOL};
use crate::error::{Error, Result};
use crate::linalg::{max_abs, norm2};

/// Relative tolerance for the sampled check of the scalar expansion.
pub const EXPAND_TOL: f64 = 1e-8;

/// A noncommutative monomial with explicit parenthesization.
#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Const(Element),
    Var,
    Mul(Box<Node>, Box<Node>),
}

impl Node {
    pub fn mul(l: Node, r: Node) -> Node {
        Node::Mul(Box::new(l), Box::new(r))
    }

    /// Number of `Var` leaves.
    pub fn degree(&self) -> usize {
        match self {
            Node::Const(_) => 0,
            Node::Var => 1,
            Node::Mul(l, r) => l.degree() + r.degree(),
        }
    }

    fn eval_raw(&self, alg: &Algebra, a: &[f64]) -> Vec<f64> {
        match self {
            Node::Const(c) => c.coords().to_vec(),
            Node::Var => a.to_vec(),
            Node::Mul(l, r) => alg.mul_raw(&l.eval_raw(alg, a), &r.eval_raw(alg, a)),
        }
    }

    fn constants<'a>(&'a self, out: &mut Vec<&'a Element>) {
        match self {
            Node::Const(c) => out.push(c),
            Node::Var => {}
            Node::Mul(l, r) => {
                l.constants(out);
                r.constants(out);
            }
        }
    }

    /// Multiplies the monomial by the real scalar `s`, through its first constant
    /// when it has one.
    pub(crate) fn scaled(self, s: f64, alg: &Algebra) -> Node {
        fn go(n: Node, s: f64, done: &mut bool) -> Node {
            match n {
                Node::Const(c) if !*done => {
                    *done = true;
                    Node::Const(c.scale(s))
                }
                Node::Mul(l, r) => {
                    let l = go(*l, s, done);
                    let r = go(*r, s, done);
                    Node::mul(l, r)
                }
                other => other,
            }
        }
        let mut done = false;
        let n = go(self, s, &mut done);
        if done {
            n
        } else {
            Node::mul(Node::Const(alg.unit().scale(s)), n)
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Const(c) => write!(f, "(c {})", fmt_coords(c.coords())),
            Node::Var => f.write_str("x"),
            Node::Mul(l, r) => write!(f, "(* {l} {r})"),
        }
    }
}

/// A finite sum of noncommutative monomials.
#[derive(Clone, Debug, PartialEq)]
pub struct NCPoly {
    algebra: Algebra,
    terms: Vec<Node>,
}

impl NCPoly {
    pub fn new(algebra: &Algebra, terms: Vec<Node>) -> Result<Self> {
        let mut cs = Vec::new();
        for t in &terms {
            t.constants(&mut cs);
        }
        for c in cs {
            algebra.check_same(c.algebra())?;
        }
        Ok(NCPoly {
            algebra: algebra.clone(),
            terms,
        })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn terms(&self) -> &[Node] {
        &self.terms
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(Node::degree).max().unwrap_or(0)
    }

    /// Sum of the terms of greatest degree (syntactic).
    pub fn leading_part(&self) -> NCPoly {
        let d = self.degree();
        NCPoly {
            algebra: self.algebra.clone(),
            terms: self.terms.iter().filter(|t| t.degree() == d).cloned().collect(),
        }
    }

    pub fn eval(&self, a: &Element) -> Result<Element> {
        self.algebra.check_same(a.algebra())?;
        Ok(Element::from_raw(self.algebra.clone(), self.eval_coords(a.coords())))
    }

    pub fn eval_coords(&self, a: &[f64]) -> Vec<f64> {
        let mut acc = vec![0.0; self.algebra.real_dim()];
        for t in &self.terms {
            for (s, v) in acc.iter_mut().zip(t.eval_raw(&self.algebra, a)) {
                *s += v;
            }
        }
        acc
    }

    pub fn add(&self, other: &NCPoly) -> Result<NCPoly> {
        self.algebra.check_same(&other.algebra)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(NCPoly {
            algebra: self.algebra.clone(),
            terms,
        })
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.terms.as_slice() {
            [t] => write!(f, "{t}"),
            ts => {
                f.write_str("(+")?;
                for t in ts {
                    write!(f, " {t}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Coefficients `[p_0, p_1(A0), ..., p_n(A0)]` with `p(z A0) = sum z^i p_i(A0)`
/// for `z` in the copy of C.
///
/// Pulling `z` out of a monomial needs `I` nuclear and commuting with `A0`
/// and with every constant of a nonconstant term. The expansion is checked
/// against direct evaluation at five random `z`.
pub fn expand_in_scalar(p: &NCPoly, a0: &Element, copy: &ComplexCopy) -> Result<Vec<Element>> {
    let alg = p.algebra();
    alg.check_same(a0.algebra())?;
    alg.check_same(copy.algebra())?;
    if !copy.nuclear() {
        return Err(Error::NonNuclearCopy);
    }
    let i = copy.i();
    let commutes = |e: &Element| {
        let d: Vec<f64> = alg
            .mul_raw(i.coords(), e.coords())
            .iter()
            .zip(alg.mul_raw(e.coords(), i.coords()))
            .map(|(x, y)| x - y)
            .collect();
        max_abs(&d) <= COPY_TOL * max_abs(e.coords()).max(1.0)
    };
    if p.degree() >= 1 && !commutes(a0) {
        return Err(Error::NotHoistable("I does not commute with A0".into()));
    }
    for t in p.terms().iter().filter(|t| t.degree() >= 1) {
        let mut cs = Vec::new();
        t.constants(&mut cs);
        if let Some(c) = cs.into_iter().find(|c| !commutes(c)) {
            return Err(Error::NotHoistable(format!(
                "I does not commute with the constant ({})",
                fmt_coords(c.coords())
            )));
        }
    }
    let n = p.degree();
    let mut coeffs = vec![vec![0.0; alg.real_dim()]; n + 1];
    for t in p.terms() {
        for (s, v) in coeffs[t.degree()].iter_mut().zip(t.eval_raw(alg, a0.coords())) {
            *s += v;
        }
    }
    let coeffs: Vec<Element> = coeffs
        .into_iter()
        .map(|c| Element::from_raw(alg.clone(), c))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let z = Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng));
        let za0 = copy.embed(z.re, z.im).mul_unchecked(a0);
        let direct = p.eval_coords(za0.coords());
        let mut sum = vec![0.0; alg.real_dim()];
        let mut zk = Complex64::new(1.0, 0.0);
        for c in &coeffs {
            let t = alg.mul_raw(copy.embed(zk.re, zk.im).coords(), c.coords());
            for (s, v) in sum.iter_mut().zip(t) {
                *s += v;
            }
            zk *= z;
        }
        let diff: Vec<f64> = sum.iter().zip(&direct).map(|(a, b)| a - b).collect();
        let rel = norm2(&diff) / norm2(&direct).max(1.0);
        if !(rel < EXPAND_TOL) {
            return Err(Error::NotHoistable(format!(
                "expansion disagrees with direct evaluation (relative residual {rel:e})"
            )));
        }
    }
    Ok(coeffs)
}
