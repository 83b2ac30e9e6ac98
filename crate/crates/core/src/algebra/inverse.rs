use nalgebra::DVector;
use serde::Serialize;

use super::Element;
use crate::linalg;

/// Which part of the two-sided inverse test failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailedCondition {
    /// `a u = 1` has no solution.
    LeftUnsolvable,
    /// `v a = 1` has no solution.
    RightUnsolvable,
    /// Both systems are solvable but the solutions differ or are not unique.
    Ambiguous,
    /// The common solution is not a two-sided inverse.
    NotTwoSided,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularVerdict {
    /// `min(sigma_min(L_a), sigma_min(R_a))`.
    pub sigma_min: f64,
    pub failed: FailedCondition,
    pub residual: f64,
}

impl SingularVerdict {
    pub fn is_ambiguous(&self) -> bool {
        self.failed == FailedCondition::Ambiguous
    }
}

/// Two-sided inverse of `a`, decided through both multiplication operators.
///
/// `tol` bounds the residuals `|a u - 1|`, `|u a - 1|` and the disagreement
/// `|u - v|` (the latter relative to `max(1, |u|)`), all in the sup norm.
pub fn invert(a: &Element, tol: f64) -> Result<Element, SingularVerdict> {
    let alg = a.algebra();
    let l = alg.left_mult_matrix(a.coords());
    let r = alg.right_mult_matrix(a.coords());
    let sl = linalg::singular_values(&l);
    let sr = linalg::singular_values(&r);
    let min = |s: &[f64]| s.iter().copied().fold(f64::INFINITY, f64::min);
    let max = |s: &[f64]| s.iter().copied().fold(0.0, f64::max);
    let sigma_min = min(&sl).min(min(&sr));
    let verdict = |failed, residual| SingularVerdict {
        sigma_min,
        failed,
        residual,
    };

    let one = DVector::from_column_slice(alg.unit_coords());
    let cutoff = 1e-13;
    let u = linalg::lstsq(&l, &one, cutoff);
    let v = linalg::lstsq(&r, &one, cutoff);
    let res_l = linalg::max_abs((&l * &u - &one).as_slice());
    let res_r = linalg::max_abs((&r * &v - &one).as_slice());
    if max(&sl) == 0.0 || !(res_l < tol) {
        return Err(verdict(FailedCondition::LeftUnsolvable, res_l));
    }
    if !(res_r < tol) {
        return Err(verdict(FailedCondition::RightUnsolvable, res_r));
    }
    // Solvable but singular operator: the solution is not unique.
    let singular = min(&sl) <= cutoff * max(&sl) || min(&sr) <= cutoff * max(&sr);
    let scale = linalg::max_abs(u.as_slice()).max(1.0);
    let diff = linalg::max_abs((&u - &v).as_slice());
    if singular || !(diff < tol * scale) {
        return Err(verdict(FailedCondition::Ambiguous, diff));
    }
    let ua = alg.mul_raw(u.as_slice(), a.coords());
    let res_two = ua
        .iter()
        .zip(alg.unit_coords())
        .fold(0.0f64, |m, (x, e)| m.max((x - e).abs()));
    if !(res_two < tol) {
        return Err(verdict(FailedCondition::NotTwoSided, res_two));
    }
    Ok(Element::from_raw(alg.clone(), u.as_slice().to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin;

    #[test]
    fn quaternion_unit_inverse() {
        let h = builtin("H").unwrap();
        let inv = invert(&h.basis(1), 1e-10).unwrap();
        assert!(inv.distance_inf(&h.basis(1).scale(-1.0)) < 1e-14);
    }

    #[test]
    fn zero_is_singular() {
        let h = builtin("H").unwrap();
        let v = invert(&h.zero(), 1e-10).unwrap_err();
        assert_eq!(v.sigma_min, 0.0);
        assert_eq!(v.failed, FailedCondition::LeftUnsolvable);
    }

    #[test]
    fn octonion_one_plus_e1() {
        let o = builtin("O").unwrap();
        let a = &o.unit() + &o.basis(1);
        let inv = invert(&a, 1e-10).unwrap();
        let expect = (&o.unit() - &o.basis(1)).scale(0.5);
        assert!(inv.distance_inf(&expect) < 1e-14);
    }

    #[test]
    fn matrix_idempotent_is_singular() {
        let m = builtin("mat2r").unwrap();
        let v = invert(&m.basis(0), 1e-10).unwrap_err();
        assert!(v.sigma_min < 1e-14);
    }

    #[test]
    fn one_sided_inverses() {
        // span{1, x, y} with xy = 1 and every other product of x, y zero.
        use crate::algebra::{Algebra, Field};
        let a = Algebra::builder("onesided", Field::Real, 3)
            .entry(0, 0, 0, 1i64)
            .entry(0, 1, 1, 1i64)
            .entry(1, 0, 1, 1i64)
            .entry(0, 2, 2, 1i64)
            .entry(2, 0, 2, 1i64)
            .entry(1, 2, 0, 1i64)
            .unit_basis(0)
            .build()
            .unwrap();
        let v = invert(&a.basis(1), 1e-10).unwrap_err();
        assert_eq!(v.failed, FailedCondition::RightUnsolvable);
        // (x + y) y = 1 and x (x + y) = 1, with singular operators.
        let s = &a.basis(1) + &a.basis(2);
        let w = invert(&s, 1e-10).unwrap_err();
        assert!(w.is_ambiguous());
    }

    #[test]
    fn double_inverse_round_trips() {
        let o = builtin("O").unwrap();
        let a = o
            .element(vec![0.3, -1.2, 0.5, 2.0, -0.7, 0.1, 0.9, -0.4])
            .unwrap();
        let b = invert(&invert(&a, 1e-10).unwrap(), 1e-10).unwrap();
        assert!(b.distance_inf(&a) < 1e-12);
    }
}
