//! Copies of the complex numbers: elements `I` with `I^2 = -1`.

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::{Algebra, Element};
use crate::error::{Error, Result};
use crate::linalg;

/// Residual bound for `I^2 + 1`, nuclearity and centrality checks.
pub const COPY_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct ComplexCopy {
    i: Element,
    nuclear: bool,
    central: bool,
    verification_residual: f64,
    nuclear_residual: f64,
    central_residual: f64,
}

#[derive(Serialize)]
struct CopyJson<'a> {
    i: &'a [f64],
    nuclear: bool,
    central: bool,
    verification_residual: f64,
}

impl Serialize for ComplexCopy {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CopyJson {
            i: self.i.coords(),
            nuclear: self.nuclear,
            central: self.central,
            verification_residual: self.verification_residual,
        }
        .serialize(s)
    }
}

impl ComplexCopy {
    /// Checks `I^2 = -1` and computes the nuclear and central flags.
    pub fn verify(i: Element) -> Result<Self> {
        let alg = i.algebra().clone();
        let sq = alg.mul_raw(i.coords(), i.coords());
        let residual = sq
            .iter()
            .zip(alg.unit_coords())
            .fold(0.0f64, |m, (x, e)| m.max((x + e).abs()));
        if !(residual < COPY_TOL) {
            return Err(Error::CopyVerification { residual });
        }
        let n = alg.real_dim();
        let x = i.coords();
        let mut nres: f64 = 0.0;
        let mut cres: f64 = 0.0;
        for j in 0..n {
            let uj = unit_vec(n, j);
            let xu = alg.mul_raw(x, &uj);
            let ux = alg.mul_raw(&uj, x);
            cres = cres.max(diff_inf(&xu, &ux));
            for k in 0..n {
                let uk = unit_vec(n, k);
                let ujk = alg.mul_raw(&uj, &uk);
                // [I, u_j, u_k]
                let a = diff_inf(&alg.mul_raw(&xu, &uk), &alg.mul_raw(x, &ujk));
                // [u_j, I, u_k]
                let b = diff_inf(&alg.mul_raw(&ux, &uk), &alg.mul_raw(&uj, &alg.mul_raw(x, &uk)));
                // [u_j, u_k, I]
                let c = diff_inf(&alg.mul_raw(&ujk, x), &alg.mul_raw(&uj, &alg.mul_raw(&uk, x)));
                nres = nres.max(a).max(b).max(c);
            }
        }
        Ok(ComplexCopy {
            i,
            nuclear: nres < COPY_TOL,
            central: cres < COPY_TOL,
            verification_residual: residual,
            nuclear_residual: nres,
            central_residual: cres,
        })
    }

    pub fn i(&self) -> &Element {
        &self.i
    }

    pub fn algebra(&self) -> &Algebra {
        self.i.algebra()
    }

    pub fn nuclear(&self) -> bool {
        self.nuclear
    }

    pub fn central(&self) -> bool {
        self.central
    }

    pub fn verification_residual(&self) -> f64 {
        self.verification_residual
    }

    pub fn nuclear_residual(&self) -> f64 {
        self.nuclear_residual
    }

    pub fn central_residual(&self) -> f64 {
        self.central_residual
    }

    /// `x + y I`.
    pub fn embed(&self, x: f64, y: f64) -> Element {
        let alg = self.algebra();
        let v = alg
            .unit_coords()
            .iter()
            .zip(self.i.coords())
            .map(|(e, i)| x * e + y * i)
            .collect();
        Element::from_raw(alg.clone(), v)
    }
}

/// `e^{It} = cos(t) 1 + sin(t) I`.
pub fn exp_circle(c: &ComplexCopy, t: f64) -> Element {
    c.embed(t.cos(), t.sin())
}

fn unit_vec(n: usize, j: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[j] = 1.0;
    v
}

fn diff_inf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Budget for the damped Newton search.
#[derive(Clone, Debug)]
pub struct CopySearch {
    pub starts: usize,
    pub iterations: usize,
    pub damping: f64,
    pub seed: u64,
}

impl Default for CopySearch {
    fn default() -> Self {
        CopySearch {
            starts: 64,
            iterations: 100,
            damping: 0.5,
            seed: 42,
        }
    }
}

/// Verifies `hint`, or searches for `I` with `I^2 = -1` by damped Newton on
/// `F(x) = x^2 + 1` from random unit starts.
///
/// Not finding one is inconclusive.
pub fn find_complex_copy(
    a: &Algebra,
    hint: Option<&Element>,
    search: &CopySearch,
) -> Result<ComplexCopy> {
    if let Some(h) = hint {
        a.check_same(h.algebra())?;
        return ComplexCopy::verify(h.clone());
    }
    let n = a.real_dim();
    let one = DVector::from_column_slice(a.unit_coords());
    let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
    let residual = |x: &DVector<f64>| {
        let sq = DVector::from_vec(a.mul_raw(x.as_slice(), x.as_slice()));
        sq + &one
    };
    for _ in 0..search.starts {
        let mut x = DVector::from_fn(n, |_, _| StandardNormal.sample(&mut rng));
        let nx = x.norm();
        if nx == 0.0 {
            continue;
        }
        x /= nx;
        let mut f = residual(&x);
        let mut fnorm = f.norm();
        for _ in 0..search.iterations {
            if linalg::max_abs(f.as_slice()) < 1e-14 {
                break;
            }
            // J h = x h + h x
            let jac = a.left_mult_matrix(x.as_slice()) + a.right_mult_matrix(x.as_slice());
            let step = linalg::lstsq(&jac, &(-&f), 1e-12);
            let mut t = 1.0;
            let mut accepted = false;
            for _ in 0..30 {
                let cand = &x + &step * t;
                let fc = residual(&cand);
                let nc = fc.norm();
                if nc < fnorm {
                    x = cand;
                    f = fc;
                    fnorm = nc;
                    accepted = true;
                    break;
                }
                t *= search.damping;
            }
            if !accepted {
                break;
            }
        }
        if let Ok(c) = ComplexCopy::verify(Element::from_raw(a.clone(), x.as_slice().to_vec())) {
            return Ok(c);
        }
    }
    Err(Error::CopyNotFound {
        starts: search.starts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin;

    #[test]
    fn quaternion_hint() {
        let h = builtin("H").unwrap();
        let c = find_complex_copy(&h, Some(&h.basis(1)), &CopySearch::default()).unwrap();
        assert!(c.nuclear());
        assert!(!c.central());
        assert_eq!(c.verification_residual(), 0.0);
    }

    #[test]
    fn search_in_complex_numbers() {
        let c = builtin("C").unwrap();
        let cc = find_complex_copy(&c, None, &CopySearch::default()).unwrap();
        assert!(cc.central());
        assert!(cc.i().coords()[0].abs() < 1e-10);
        assert!((cc.i().coords()[1].abs() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn search_in_matrices_and_octonions() {
        for name in ["mat2r", "O", "H"] {
            let a = builtin(name).unwrap();
            let c = find_complex_copy(&a, None, &CopySearch::default()).unwrap();
            assert!(c.verification_residual() < COPY_TOL, "{name}");
        }
    }

    #[test]
    fn octonion_e1_is_not_nuclear() {
        let o = builtin("O").unwrap();
        let c = ComplexCopy::verify(o.basis(1)).unwrap();
        assert!(!c.nuclear());
        assert!(!c.central());
    }

    #[test]
    fn bad_hint_is_rejected() {
        let h = builtin("H").unwrap();
        let err = ComplexCopy::verify(h.unit()).unwrap_err();
        assert!(matches!(err, Error::CopyVerification { .. }));
    }

    #[test]
    fn upper_triangular_has_no_copy() {
        let u = builtin("upper2").unwrap();
        let search = CopySearch {
            starts: 8,
            ..CopySearch::default()
        };
        assert!(matches!(
            find_complex_copy(&u, None, &search),
            Err(Error::CopyNotFound { .. })
        ));
    }

    #[test]
    fn circle_is_a_group() {
        let h = builtin("H").unwrap();
        let c = ComplexCopy::verify(h.basis(2)).unwrap();
        assert_eq!(exp_circle(&c, 0.0), h.unit());
        let q = exp_circle(&c, std::f64::consts::FRAC_PI_2);
        assert!(q.distance_inf(&h.basis(2)) < 1e-15);
        let (t1, t2) = (0.7, -2.3);
        let prod = exp_circle(&c, t1).mul(&exp_circle(&c, t2)).unwrap();
        assert!(prod.distance_inf(&exp_circle(&c, t1 + t2)) < 1e-14);
    }
}
