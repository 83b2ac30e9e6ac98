//! Cayley–Dickson doubling and the built-in catalog.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use super::{Algebra, AlgebraBuilder, Field, SparseMap, Table};
use crate::error::{Error, Result};
use crate::scalar::{Coef, Number, Scalar};

/// Expected outcome per identity name. Identities missing from the map are
/// not compared.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Profile(pub BTreeMap<String, bool>);

impl Profile {
    pub fn expect(&self, identity: &str) -> Option<bool> {
        self.0.get(identity).copied()
    }

    fn from_pairs(pairs: &[(&str, bool)]) -> Self {
        Profile(pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect())
    }

    fn alternative(associative: bool, commutative: bool) -> Self {
        let mut p = Self::from_pairs(&[
            ("left_alternative", true),
            ("right_alternative", true),
            ("moufang_left", true),
            ("moufang_middle", true),
            ("moufang_right", true),
            ("skornyakov_left_1", true),
            ("skornyakov_left_2", true),
            ("skornyakov_right_1", true),
            ("skornyakov_right_2", true),
            ("power_associative", true),
            ("artin", true),
            ("inverse_left", true),
            ("inverse_right", true),
        ]);
        p.0.insert("associative".into(), associative);
        p.0.insert("commutative".into(), commutative);
        p
    }
}

const BUILTINS: [&str; 8] = ["R", "C", "H", "O", "S16", "mat2r", "mat2c", "upper2"];

pub fn builtin_names() -> &'static [&'static str] {
    &BUILTINS
}

struct Catalog {
    algebras: BTreeMap<&'static str, (Algebra, Profile)>,
}

fn catalog() -> &'static std::result::Result<Catalog, Error> {
    static CATALOG: OnceLock<std::result::Result<Catalog, Error>> = OnceLock::new();
    CATALOG.get_or_init(build_catalog)
}

/// Looks up a built-in algebra by name (case-insensitive).
pub fn builtin(name: &str) -> Result<Algebra> {
    builtin_with_profile(name).map(|(a, _)| a)
}

pub fn builtin_with_profile(name: &str) -> Result<(Algebra, Profile)> {
    let cat = catalog().as_ref().map_err(Clone::clone)?;
    let key = BUILTINS
        .iter()
        .find(|b| b.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::InvalidArgument(format!("unknown builtin algebra `{name}`")))?;
    Ok(cat.algebras[key].clone())
}

fn build_catalog() -> std::result::Result<Catalog, Error> {
    let real = Algebra::builder("R", Field::Real, 1)
        .labels(["1"])
        .entry(0, 0, 0, 1i64)
        .unit_basis(0)
        .involution(vec![(0, 0, Number::from_i64(1))])
        .build()?;
    let c = doubled(&real, "C", vec!["1".into(), "i".into()])?;
    let h = doubled(&c, "H", ["1", "i", "j", "k"].map(String::from).to_vec())?;
    let o = doubled(&h, "O", octonion_labels(8))?;
    let s16 = doubled(&o, "S16", octonion_labels(16))?;

    if h.table() != hardcoded_quaternions().table() {
        return Err(Error::InvalidAlgebra(
            "doubled quaternion table disagrees with the reference table".into(),
        ));
    }
    if o.table() != hardcoded_octonions().table() {
        return Err(Error::InvalidAlgebra(
            "doubled octonion table disagrees with the reference table".into(),
        ));
    }

    let mut algebras = BTreeMap::new();
    algebras.insert("R", (real, Profile::alternative(true, true)));
    algebras.insert("C", (c, Profile::alternative(true, true)));
    algebras.insert("H", (h, Profile::alternative(true, false)));
    algebras.insert("O", (o, Profile::alternative(false, false)));
    algebras.insert(
        "S16",
        (
            s16,
            Profile::from_pairs(&[
                ("left_alternative", false),
                ("right_alternative", false),
                ("associative", false),
                ("commutative", false),
                ("moufang_left", false),
                ("moufang_middle", false),
                ("moufang_right", false),
                ("power_associative", true),
                ("artin", false),
                ("inverse_left", false),
                ("inverse_right", false),
            ]),
        ),
    );
    algebras.insert("mat2r", (matrix_algebra("mat2r", Field::Real)?, Profile::alternative(true, false)));
    algebras.insert("mat2c", (matrix_algebra("mat2c", Field::Complex)?, Profile::alternative(true, false)));
    algebras.insert("upper2", (upper_triangular()?, Profile::alternative(true, false)));
    Ok(Catalog { algebras })
}

fn octonion_labels(n: usize) -> Vec<String> {
    std::iter::once("1".to_string())
        .chain((1..n).map(|i| format!("e{i}")))
        .collect()
}

fn matrix_algebra(name: &str, field: Field) -> Result<Algebra> {
    // Basis E11, E12, E21, E22 with E_ij E_kl = delta_jk E_il.
    let idx = |r: usize, c: usize| 2 * r + c;
    let mut b = Algebra::builder(name, field, 4).labels(["E11", "E12", "E21", "E22"]);
    for i in 0..2 {
        for j in 0..2 {
            for l in 0..2 {
                b.push_entry(idx(i, j), idx(j, l), idx(i, l), Coef::from(1i64));
            }
        }
    }
    let one = Coef::from(1i64);
    let zero = Coef::from(0i64);
    b.unit(vec![one.clone(), zero.clone(), zero, one]).build()
}

fn upper_triangular() -> Result<Algebra> {
    // Basis E11, E12, E22.
    Algebra::builder("upper2", Field::Real, 3)
        .labels(["E11", "E12", "E22"])
        .entry(0, 0, 0, 1i64)
        .entry(0, 1, 1, 1i64)
        .entry(1, 2, 1, 1i64)
        .entry(2, 2, 2, 1i64)
        .unit(vec![Coef::from(1i64), Coef::from(0i64), Coef::from(1i64)])
        .build()
}

/// Cayley–Dickson double `(a, b)(c, d) = (ac - sigma(d) b, da + b sigma(c))`
/// of a real algebra carrying its standard involution `sigma`.
///
/// The new basis is `e_p = (u_p, 0)` followed by `f_p = (0, u_p)`, and the
/// new involution is `(a, b) -> (sigma(a), -b)`.
pub fn cayley_dickson(a: &Algebra) -> Result<Algebra> {
    let labels = a
        .labels()
        .iter()
        .cloned()
        .chain(a.labels().iter().map(|l| format!("{l}'")))
        .collect();
    doubled(a, &format!("CD({})", a.name()), labels)
}

fn doubled(a: &Algebra, name: &str, labels: Vec<String>) -> Result<Algebra> {
    if a.field() != Field::Real {
        return Err(Error::NotReal);
    }
    let inv = a
        .involution()
        .ok_or_else(|| Error::MissingInvolution(a.name().to_string()))?;
    let d = a.dim();
    let builder = Algebra::builder(name, Field::Real, 2 * d).labels(labels);
    let unit: Vec<Coef> = a
        .unit_base()
        .iter()
        .cloned()
        .chain((0..d).map(|_| Coef::from(0i64)))
        .collect();
    let builder = match (a.exact_table(), &inv.exact) {
        (Some(t), Some(s)) => double_entries(builder, t, s, |x| Number::Exact(x.clone())),
        _ => double_entries(builder, a.table(), &inv.num, |x| Number::Float(*x)),
    };
    let mut involution = source_involution(a);
    for p in 0..d {
        involution.push((d + p, d + p, Number::from_i64(-1)));
    }
    builder.unit(unit).involution(involution).build()
}

/// Involution of `a` as `(row, col, value)` triples.
fn source_involution(a: &Algebra) -> Vec<(usize, usize, Number)> {
    let inv = a.involution().expect("checked");
    let d = a.real_dim();
    let mut out = Vec::new();
    for col in 0..d {
        match &inv.exact {
            Some(s) => {
                for (row, v) in s.column(col) {
                    out.push((*row, col, Number::Exact(v.clone())));
                }
            }
            None => {
                for (row, v) in inv.num.column(col) {
                    out.push((*row, col, Number::Float(*v)));
                }
            }
        }
    }
    out
}

fn double_entries<T: Scalar>(
    mut b: AlgebraBuilder,
    t: &Table<T>,
    sigma: &SparseMap<T>,
    num: impl Fn(&T) -> Number,
) -> AlgebraBuilder {
    let d = t.dim();
    let basis = |p: usize| {
        let mut v = vec![T::zero(); d];
        v[p] = T::one();
        v
    };
    let sig = |q: usize| sigma.apply(&basis(q));
    let mut push = |i: usize, j: usize, off: usize, v: Vec<T>, neg: bool| {
        for (k, x) in v.into_iter().enumerate() {
            if !x.is_zero() {
                let x = if neg { -x } else { x };
                b.push_entry(i, j, k + off, Coef::real(num(&x)));
            }
        }
    };
    for p in 0..d {
        for q in 0..d {
            push(p, q, 0, t.mul(&basis(p), &basis(q)), false);
            push(p, d + q, d, t.mul(&basis(q), &basis(p)), false);
            push(d + p, q, d, t.mul(&basis(p), &sig(q)), false);
            push(d + p, d + q, 0, t.mul(&sig(q), &basis(p)), true);
        }
    }
    b
}

/// The quaternion table written out by hand: basis 1, i, j, k.
pub fn hardcoded_quaternions() -> Algebra {
    let mut b = Algebra::builder("H_ref", Field::Real, 4).labels(["1", "i", "j", "k"]);
    for p in 0..4 {
        b.push_entry(0, p, p, Coef::from(1i64));
        if p > 0 {
            b.push_entry(p, 0, p, Coef::from(1i64));
            b.push_entry(p, p, 0, Coef::from(-1i64));
        }
    }
    for (x, y, z) in [(1, 2, 3), (2, 3, 1), (3, 1, 2)] {
        b.push_entry(x, y, z, Coef::from(1i64));
        b.push_entry(y, x, z, Coef::from(-1i64));
    }
    b.unit_basis(0).build().expect("reference quaternions")
}

/// The octonion table from its Fano-plane triples: `e_a e_b = e_c` for each
/// cyclic rotation of a triple, with the reversed products negated.
pub fn hardcoded_octonions() -> Algebra {
    const TRIPLES: [(usize, usize, usize); 7] =
        [(1, 2, 3), (1, 4, 5), (1, 7, 6), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 6, 5)];
    let mut b = Algebra::builder("O_ref", Field::Real, 8).labels(octonion_labels(8));
    for p in 0..8 {
        b.push_entry(0, p, p, Coef::from(1i64));
        if p > 0 {
            b.push_entry(p, 0, p, Coef::from(1i64));
            b.push_entry(p, p, 0, Coef::from(-1i64));
        }
    }
    for (x, y, z) in TRIPLES {
        for (a, bb, c) in [(x, y, z), (y, z, x), (z, x, y)] {
            b.push_entry(a, bb, c, Coef::from(1i64));
            b.push_entry(bb, a, c, Coef::from(-1i64));
        }
    }
    b.unit_basis(0).build().expect("reference octonions")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_builds_and_cross_checks() {
        for name in builtin_names() {
            let a = builtin(name).unwrap();
            assert_eq!(a.name(), *name);
            assert!(a.is_exact());
        }
        assert_eq!(builtin("s16").unwrap().dim(), 16);
        assert!(builtin("X").is_err());
    }

    #[test]
    fn doubling_real_gives_complex_numbers() {
        let r = builtin("R").unwrap();
        let c = cayley_dickson(&r).unwrap();
        assert_eq!(c.dim(), 2);
        assert_eq!(c.table(), builtin("C").unwrap().table());
        assert_eq!(c.mul_raw(&[0.0, 1.0], &[0.0, 1.0]), vec![-1.0, 0.0]);
    }

    #[test]
    fn octonion_reference_products() {
        let o = builtin("O").unwrap();
        let e = |i| o.basis(i);
        let lhs = e(1).mul(&e(2)).unwrap().mul(&e(4)).unwrap();
        let rhs = e(1).mul(&e(2).mul(&e(4)).unwrap()).unwrap();
        assert_eq!(lhs, e(7));
        assert_eq!(rhs, e(7).scale(-1.0));
    }

    #[test]
    fn doubling_requires_involution() {
        let m = builtin("mat2r").unwrap();
        assert!(matches!(cayley_dickson(&m), Err(Error::MissingInvolution(_))));
    }

    #[test]
    fn involution_is_conjugation() {
        let o = builtin("O").unwrap();
        let inv = o.involution().unwrap();
        let x = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0];
        let c = inv.apply(&x);
        assert_eq!(c, vec![1.0, -2.0, -3.0, -4.0, -5.0, -6.0, -7.0, -8.0]);
        // x * conj(x) = |x|^2
        let n = o.mul_raw(&x, &c);
        assert_eq!(n[0], 204.0);
        assert!(n[1..].iter().all(|v| *v == 0.0));
    }
}
