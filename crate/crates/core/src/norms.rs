//! Algebra norms built from vector-space norms: scaling by an explicit
//! constant, unitalization, quotient seminorms, domination of a seminorm, and
//! renorming to make a copy of the complex numbers act isometrically.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{Algebra, ComplexCopy, Element, Field, Subspace};
use crate::error::{Error, Result};
use crate::identities::{check_left_alternative, check_right_alternative, random_unit, CheckConfig};
use crate::linalg;

/// Random directions used to estimate equivalence constants of general norms.
pub const EQUIV_SAMPLES: usize = 100_000;
/// Safety factor applied to sampled equivalence constants.
pub const EQUIV_SAFETY: f64 = 1.01;
/// Target width of the golden-section refinement of circle suprema.
pub const REFINE_TOL: f64 = 1e-10;
/// Default torus grid per axis.
pub const DEFAULT_GRID: usize = 256;
const EQUIV_SEED: u64 = 0x6e6f726d;

type Eval = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Vector-space norm with respect to the stored basis. For complex algebras
/// the absolute values are complex moduli of the base coordinates.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormSpec {
    L1,
    L2,
    Linf,
    WeightedL1(Vec<f64>),
}

impl NormSpec {
    pub fn validate(&self, a: &Algebra) -> Result<()> {
        if let NormSpec::WeightedL1(w) = self {
            if w.len() != a.dim() {
                return Err(Error::Dimension {
                    expected: a.dim(),
                    got: w.len(),
                });
            }
            if w.iter().any(|x| !(*x > 0.0) || !x.is_finite()) {
                return Err(Error::InvalidArgument("weights must be positive".into()));
            }
        }
        Ok(())
    }

    /// Evaluates on realified coordinates.
    pub fn eval(&self, a: &Algebra, v: &[f64]) -> f64 {
        let m = moduli(a.field(), a.dim(), v);
        match self {
            NormSpec::L1 => m.sum(),
            NormSpec::L2 => m.map(|x| x * x).sum::<f64>().sqrt(),
            NormSpec::Linf => m.fold(0.0, f64::max),
            NormSpec::WeightedL1(w) => m.zip(w).map(|(x, w)| x * w).sum(),
        }
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormSpec::L1 => f.write_str("l1"),
            NormSpec::L2 => f.write_str("l2"),
            NormSpec::Linf => f.write_str("linf"),
            NormSpec::WeightedL1(w) => {
                let parts: Vec<String> = w.iter().map(|x| x.to_string()).collect();
                write!(f, "weighted_l1:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for NormSpec {
    type Err = Error;

    /// `l1`, `l2`, `linf` or `weighted_l1:w1,w2,...`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "l1" => return Ok(NormSpec::L1),
            "l2" | "euclidean" => return Ok(NormSpec::L2),
            "linf" => return Ok(NormSpec::Linf),
            _ => {}
        }
        let Some(rest) = s.strip_prefix("weighted_l1:") else {
            return Err(Error::InvalidArgument(format!("unknown norm `{s}`")));
        };
        let w = rest
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidArgument(format!("bad weight `{x}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(NormSpec::WeightedL1(w))
    }
}

fn moduli(field: Field, d: usize, v: &[f64]) -> impl Iterator<Item = f64> + '_ {
    (0..d).map(move |k| match field {
        Field::Real => v[k].abs(),
        Field::Complex => v[k].hypot(v[k + d]),
    })
}

fn l1(a: &Algebra, v: &[f64]) -> f64 {
    moduli(a.field(), a.dim(), v).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantsMethod {
    ClosedForm,
    /// Extremal ratio over all basis directions and random directions,
    /// widened by [`EQUIV_SAFETY`].
    Sampled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scaling {
    /// `M = c2^2 M0`.
    C2SquaredM0,
    /// Euclidean norm already multiplicative on this basis, so `M = 1`.
    Composition,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Scaled,
    Unitalized,
    Dominating,
    CircleInvariant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CircleSide {
    Both,
    Left,
    Right,
}

impl FromStr for CircleSide {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "both" => Ok(CircleSide::Both),
            "left" => Ok(CircleSide::Left),
            "right" => Ok(CircleSide::Right),
            _ => Err(Error::InvalidArgument(format!("unknown side `{s}`"))),
        }
    }
}

impl fmt::Display for CircleSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CircleSide::Both => "both",
            CircleSide::Left => "left",
            CircleSide::Right => "right",
        })
    }
}

/// Constants of a construction. `c1 |a| <= |a|_1 <= c2 |a|` relates the
/// pre-scaling vector norm to the l1 norm of the stored basis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormMeta {
    pub m0: f64,
    pub c1: f64,
    pub c2: f64,
    pub m: f64,
    /// `sup_t |e^{It}|` in the base algebra norm.
    pub c: Option<f64>,
    pub constants: ConstantsMethod,
    pub scaling: Scaling,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub side: Option<CircleSide>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    /// Grid maximum of `|e^{It}|` before refinement.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_grid: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_window: Option<String>,
}

/// Grid-plus-refinement supremum over the torus.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SupDetail {
    pub grid_max: f64,
    pub value: f64,
    pub t1: f64,
    pub t2: f64,
}

struct CircleData {
    algebra: Algebra,
    i: Vec<f64>,
    side: CircleSide,
    grid: usize,
    base: Eval,
    c: f64,
}

impl CircleData {
    /// `sup |e^{It1} a e^{It2}|` (parenthesized per side), without the factor `c`.
    fn sup(&self, x: &[f64]) -> SupDetail {
        let alg = &self.algebra;
        let i = &self.i;
        let xr = alg.mul_raw(x, i);
        let lx = alg.mul_raw(i, x);
        let lxr = match self.side {
            CircleSide::Right => alg.mul_raw(i, &xr),
            _ => alg.mul_raw(&lx, i),
        };
        let n = x.len();
        let mut buf = vec![0.0; n];
        let mut g = |t1: f64, t2: f64| {
            let (s1, c1) = t1.sin_cos();
            let (s2, c2) = t2.sin_cos();
            let (w0, w1, w2, w3) = (c1 * c2, c1 * s2, s1 * c2, s1 * s2);
            for k in 0..n {
                buf[k] = w0 * x[k] + w1 * xr[k] + w2 * lx[k] + w3 * lxr[k];
            }
            (self.base)(&buf)
        };
        let trig: Vec<f64> = (0..self.grid).map(|k| TAU * k as f64 / self.grid as f64).collect();
        let (mut b1, mut b2, mut best) = (0.0, 0.0, f64::NEG_INFINITY);
        for &t1 in &trig {
            for &t2 in &trig {
                let v = g(t1, t2);
                if v > best {
                    (b1, b2, best) = (t1, t2, v);
                }
            }
        }
        let grid_max = best;
        let h = TAU / self.grid as f64;
        // Coordinate-wise golden-section ascent inside the best cell.
        let (mut t1, mut t2, mut val) = (b1, b2, best);
        for _ in 0..12 {
            let before = val;
            let (n1, v1) = golden_min(|s| -g(s, t2), t1 - h, t1 + h, REFINE_TOL);
            if -v1 > val {
                (t1, val) = (n1, -v1);
            }
            let (n2, v2) = golden_min(|s| -g(t1, s), t2 - h, t2 + h, REFINE_TOL);
            if -v2 > val {
                (t2, val) = (n2, -v2);
            }
            if val - before <= 1e-15 * val.abs() {
                break;
            }
        }
        SupDetail {
            grid_max,
            value: val,
            t1,
            t2,
        }
    }
}

/// A norm produced by one of the constructions, evaluated on realified
/// coordinates.
#[derive(Clone)]
pub struct ConstructedNorm {
    algebra: Algebra,
    eval: Eval,
    meta: NormMeta,
    provenance: Provenance,
    spec: Option<NormSpec>,
    /// Pre-scaling vector norm the constants `c1, c2` refer to.
    vector_norm: Option<Eval>,
    /// Algebra norm a unitalized or circle norm is built from.
    base: Option<Eval>,
    circle: Option<Arc<CircleData>>,
}

impl fmt::Debug for ConstructedNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConstructedNorm")
            .field("algebra", &self.algebra.name())
            .field("provenance", &self.provenance)
            .field("spec", &self.spec)
            .field("meta", &self.meta)
            .finish()
    }
}

impl ConstructedNorm {
    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn meta(&self) -> &NormMeta {
        &self.meta
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn spec(&self) -> Option<&NormSpec> {
        self.spec.as_ref()
    }

    pub fn eval(&self, a: &Element) -> Result<f64> {
        self.algebra.check_same(a.algebra())?;
        Ok((self.eval)(a.coords()))
    }

    pub fn eval_coords(&self, v: &[f64]) -> f64 {
        (self.eval)(v)
    }

    /// The algebra norm this one was derived from, if any.
    pub fn base_eval(&self, v: &[f64]) -> Option<f64> {
        self.base.as_ref().map(|b| b(v))
    }

    /// Unscaled vector norm the equivalence constants refer to, if any.
    pub fn vector_norm_eval(&self, v: &[f64]) -> Option<f64> {
        self.vector_norm.as_ref().map(|b| b(v))
    }

    /// Grid and refined suprema for a circle-invariant norm (without `c`).
    pub fn sup_detail(&self, v: &[f64]) -> Option<SupDetail> {
        self.circle.as_ref().map(|c| c.sup(v))
    }
}

/// Largest `norm(u_i u_j)` over the base basis.
fn m0(a: &Algebra, norm: &dyn Fn(&[f64]) -> f64) -> f64 {
    let d = a.dim();
    let mut best: f64 = 0.0;
    for i in 0..d {
        let ui = a.basis(i);
        for j in 0..d {
            let p = a.mul_raw(ui.coords(), a.basis(j).coords());
            best = best.max(norm(&p));
        }
    }
    best
}

/// Sampled `(c1, c2)` with `c1 norm(v) <= l1(v) <= c2 norm(v)`, over vectors
/// `embed(b)` for basis directions and random unit `b` of length `m`.
fn sampled_constants(
    m: usize,
    l1_of: impl Fn(&[f64]) -> f64,
    norm_of: impl Fn(&[f64]) -> f64,
) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    let mut push = |b: &[f64]| {
        let r = l1_of(b) / norm_of(b);
        if r.is_finite() {
            lo = lo.min(r);
            hi = hi.max(r);
        }
    };
    for k in 0..m {
        let mut e = vec![0.0; m];
        e[k] = 1.0;
        push(&e);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(EQUIV_SEED);
    for _ in 0..EQUIV_SAMPLES {
        push(&random_unit(&mut rng, m));
    }
    (lo / EQUIV_SAFETY, hi * EQUIV_SAFETY)
}

/// Whether `|ab|_2 = |a|_2 |b|_2` identically: `L_i^T L_j + L_j^T L_i = 2 delta_ij`
/// for the left multiplications by the realified basis.
pub fn is_euclidean_composition(a: &Algebra) -> bool {
    let n = a.real_dim();
    let ls: Vec<DMatrix<f64>> = (0..n)
        .map(|i| {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            a.left_mult_matrix(&e)
        })
        .collect();
    for i in 0..n {
        for j in i..n {
            let s = ls[i].transpose() * &ls[j] + ls[j].transpose() * &ls[i];
            let target = if i == j { 2.0 } else { 0.0 };
            for r in 0..n {
                for c in 0..n {
                    let t = if r == c { target } else { 0.0 };
                    if (s[(r, c)] - t).abs() > 1e-12 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// `M |.|` with `M = c2^2 M0`, an algebra norm.
pub fn scale_to_algebra_norm(a: &Algebra, spec: &NormSpec) -> Result<ConstructedNorm> {
    spec.validate(a)?;
    let alg = a.clone();
    let sp = spec.clone();
    let vector: Eval = Arc::new(move |v: &[f64]| sp.eval(&alg, v));
    let m0 = m0(a, &*vector);
    let d = a.dim() as f64;
    let (c1, c2, constants) = match spec {
        NormSpec::L1 => (1.0, 1.0, ConstantsMethod::ClosedForm),
        NormSpec::L2 => (1.0, d.sqrt(), ConstantsMethod::ClosedForm),
        NormSpec::Linf => (1.0, d, ConstantsMethod::ClosedForm),
        NormSpec::WeightedL1(_) => {
            let (c1, c2) = sampled_constants(a.real_dim(), |v| l1(a, v), |v| vector(v));
            (c1, c2, ConstantsMethod::Sampled)
        }
    };
    let (m, scaling) = if *spec == NormSpec::L2 && is_euclidean_composition(a) {
        (1.0, Scaling::Composition)
    } else {
        (c2 * c2 * m0, Scaling::C2SquaredM0)
    };
    let inner = vector.clone();
    Ok(ConstructedNorm {
        algebra: a.clone(),
        eval: Arc::new(move |v: &[f64]| m * inner(v)),
        meta: NormMeta {
            m0,
            c1,
            c2,
            m,
            c: None,
            constants,
            scaling,
            side: None,
            grid: None,
            c_grid: None,
            lambda_window: None,
        },
        provenance: Provenance::Scaled,
        spec: Some(spec.clone()),
        vector_norm: Some(vector),
        base: None,
        circle: None,
    })
}

/// Golden-section search for the minimum of a unimodal `f` on `[lo, hi]`.
fn golden_min(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    const R: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - R * (hi - lo);
    let mut x2 = lo + R * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            (x2, f2) = (x1, f1);
            x1 = hi - R * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            (x1, f1) = (x2, f2);
            x2 = lo + R * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Samples submultiplicativity of `n` on `pairs` random pairs; worst relative excess.
fn submult_excess(n: &ConstructedNorm, pairs: usize, seed: u64) -> f64 {
    let a = &n.algebra;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..pairs {
        let x = random_unit(&mut rng, a.real_dim());
        let y = random_unit(&mut rng, a.real_dim());
        let rhs = n.eval_coords(&x) * n.eval_coords(&y);
        let lhs = n.eval_coords(&a.mul_raw(&x, &y));
        worst = worst.max((lhs - rhs) / rhs);
    }
    worst
}

/// `|a|' = inf_lambda (|lambda| + |a - lambda 1|)`, minimized over the
/// window `|lambda| <= |a|` outside which `lambda = 0` already does better.
pub fn unitalize_norm(a: &Algebra, n: &ConstructedNorm) -> Result<ConstructedNorm> {
    a.check_same(&n.algebra)?;
    let excess = submult_excess(n, 200, EQUIV_SEED);
    if excess > 1e-9 {
        return Err(Error::Precondition(format!(
            "base norm is not submultiplicative (relative excess {excess:e})"
        )));
    }
    let base = n.eval.clone();
    let alg = a.clone();
    let unit = a.unit_coords().to_vec();
    let eval: Eval = Arc::new(move |v: &[f64]| unitalized(&alg, &unit, &*base, v));
    let mut meta = n.meta.clone();
    meta.lambda_window = Some("|lambda| <= |a|".into());
    Ok(ConstructedNorm {
        algebra: a.clone(),
        eval,
        meta,
        provenance: Provenance::Unitalized,
        spec: n.spec.clone(),
        vector_norm: n.vector_norm.clone(),
        base: Some(n.eval.clone()),
        circle: None,
    })
}

fn unitalized(alg: &Algebra, unit: &[f64], base: &dyn Fn(&[f64]) -> f64, v: &[f64]) -> f64 {
    let r = base(v);
    if r == 0.0 {
        return 0.0;
    }
    let tol = 1e-13 * r;
    let nr = v.len();
    let mut buf = vec![0.0; nr];
    match alg.field() {
        Field::Real => {
            let mut f = |lam: f64| {
                for k in 0..nr {
                    buf[k] = v[k] - lam * unit[k];
                }
                lam.abs() + base(&buf)
            };
            let (_, best) = golden_min(&mut f, -r, r, tol);
            best.min(r)
        }
        Field::Complex => {
            let d = alg.dim();
            // i * 1 in realified coordinates.
            let iunit: Vec<f64> = (0..nr)
                .map(|k| if k < d { -unit[k + d] } else { unit[k - d] })
                .collect();
            let mut f = |x: f64, y: f64| {
                for k in 0..nr {
                    buf[k] = v[k] - x * unit[k] - y * iunit[k];
                }
                x.hypot(y) + base(&buf)
            };
            let (_, best) = golden_min(
                |x| {
                    let h = (r * r - x * x).max(0.0).sqrt();
                    golden_min(|y| f(x, y), -h, h, tol).1
                },
                -r,
                r,
                tol,
            );
            best.min(r)
        }
    }
}

/// A vector-space seminorm with known kernel.
#[derive(Clone)]
pub struct Seminorm {
    algebra: Algebra,
    eval: Eval,
    kernel: Subspace,
}

impl fmt::Debug for Seminorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Seminorm")
            .field("algebra", &self.algebra.name())
            .field("kernel_dim", &self.kernel.dim())
            .finish()
    }
}

impl Seminorm {
    /// `s(a) = sum_k |sum_i w_ki a_i|` over base coordinates `a_i`.
    pub fn from_forms(a: &Algebra, forms: Vec<Vec<f64>>) -> Result<Self> {
        let d = a.dim();
        if let Some(bad) = forms.iter().find(|f| f.len() != d) {
            return Err(Error::Dimension {
                expected: d,
                got: bad.len(),
            });
        }
        let w = DMatrix::from_fn(forms.len(), d, |r, c| forms[r][c]);
        let ns = linalg::null_space(&w, 1e-12);
        let mut vecs = Vec::new();
        for c in 0..ns.ncols() {
            let col: Vec<f64> = ns.column(c).iter().copied().collect();
            match a.field() {
                Field::Real => vecs.push(col),
                Field::Complex => {
                    let mut re = col.clone();
                    re.resize(2 * d, 0.0);
                    let mut im = vec![0.0; d];
                    im.extend_from_slice(&col);
                    vecs.push(re);
                    vecs.push(im);
                }
            }
        }
        let kernel = Subspace::from_real_span(a, vecs, false);
        let field = a.field();
        let eval: Eval = Arc::new(move |v: &[f64]| {
            forms
                .iter()
                .map(|f| {
                    let re: f64 = f.iter().zip(v).map(|(w, x)| w * x).sum();
                    match field {
                        Field::Real => re.abs(),
                        Field::Complex => {
                            let im: f64 = f.iter().zip(&v[d..]).map(|(w, x)| w * x).sum();
                            re.hypot(im)
                        }
                    }
                })
                .sum()
        });
        Ok(Seminorm {
            algebra: a.clone(),
            eval,
            kernel,
        })
    }

    /// A genuine norm viewed as a seminorm (zero kernel).
    pub fn from_norm(a: &Algebra, spec: &NormSpec) -> Result<Self> {
        spec.validate(a)?;
        let alg = a.clone();
        let sp = spec.clone();
        Ok(Seminorm {
            algebra: a.clone(),
            eval: Arc::new(move |v: &[f64]| sp.eval(&alg, v)),
            kernel: Subspace::from_real_span(a, Vec::new(), true),
        })
    }

    pub fn zero(a: &Algebra) -> Self {
        let n = a.real_dim();
        let all = (0..n)
            .map(|i| {
                let mut e = vec![0.0; n];
                e[i] = 1.0;
                e
            })
            .collect();
        Seminorm {
            algebra: a.clone(),
            eval: Arc::new(|_: &[f64]| 0.0),
            kernel: Subspace::from_real_span(a, all, true),
        }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn kernel(&self) -> &Subspace {
        &self.kernel
    }

    pub fn eval(&self, a: &Element) -> Result<f64> {
        self.algebra.check_same(a.algebra())?;
        Ok((self.eval)(a.coords()))
    }

    pub fn eval_coords(&self, v: &[f64]) -> f64 {
        (self.eval)(v)
    }

    pub fn scaled(&self, m: f64) -> Seminorm {
        let inner = self.eval.clone();
        Seminorm {
            algebra: self.algebra.clone(),
            eval: Arc::new(move |v: &[f64]| m * inner(v)),
            kernel: self.kernel.clone(),
        }
    }
}

/// Orthonormal real basis (columns) of the orthogonal complement of `k`.
fn complement(n: usize, k: &[Vec<f64>]) -> DMatrix<f64> {
    if k.is_empty() {
        return DMatrix::identity(n, n);
    }
    let rows = DMatrix::from_fn(k.len(), n, |r, c| k[r][c]);
    linalg::null_space(&rows, 1e-10)
}

/// Checks that `ker s` is a two-sided ideal, then scales `s` through the
/// quotient: `M0 = max s(q_j q_k)` over an orthonormal real basis `q` of the
/// complement, `c2` sampled against l1 in that basis, and `M = c2^2 M0`.
pub fn seminorm_scale(a: &Algebra, s: &Seminorm) -> Result<(f64, Seminorm)> {
    a.check_same(&s.algebra)?;
    let n = a.real_dim();
    let kspan = s.kernel.real_span();
    for v in s.kernel.basis() {
        for i in 0..a.dim() {
            let u = a.basis(i);
            let uv = u.mul_unchecked(v);
            let vu = v.mul_unchecked(&u);
            for (p, name) in [(uv, "u_i v"), (vu, "v u_i")] {
                if !s.kernel.contains(&p) {
                    return Err(Error::KernelNotIdeal {
                        kernel_vector: v.coords().to_vec(),
                        basis_index: i,
                        product: name.into(),
                        value: (s.eval)(p.coords()),
                    });
                }
            }
        }
    }
    let q = complement(n, &kspan);
    let m = q.ncols();
    if m == 0 {
        return Ok((1.0, s.clone()));
    }
    let cols: Vec<Vec<f64>> = (0..m).map(|c| q.column(c).iter().copied().collect()).collect();
    let mut m0: f64 = 0.0;
    for x in &cols {
        for y in &cols {
            m0 = m0.max((s.eval)(&a.mul_raw(x, y)));
        }
    }
    let lift = |b: &[f64]| -> Vec<f64> {
        let mut x = vec![0.0; n];
        for (c, bc) in cols.iter().zip(b) {
            for (xi, ci) in x.iter_mut().zip(c) {
                *xi += bc * ci;
            }
        }
        x
    };
    let (_, c2) = sampled_constants(m, |b| b.iter().map(|x| x.abs()).sum(), |b| (s.eval)(&lift(b)));
    let big_m = c2 * c2 * m0;
    Ok((big_m, s.scaled(big_m)))
}

/// `|.| = M (s + n P_K)` with `P_K` the orthogonal projection onto `ker s`
/// and `n` the Euclidean norm in an orthonormal kernel basis. Returns the
/// domination constant `M` with `M s <= |.|`.
///
/// For `s = 0` returns `M = 1` with the scaled Euclidean norm.
pub fn dominating_norm(a: &Algebra, s: &Seminorm) -> Result<(f64, ConstructedNorm)> {
    a.check_same(&s.algebra)?;
    let n = a.real_dim();
    let kspan = s.kernel.real_span();
    if kspan.len() == n {
        let mut norm = scale_to_algebra_norm(a, &NormSpec::L2)?;
        norm.provenance = Provenance::Dominating;
        return Ok((1.0, norm));
    }
    let p = if kspan.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        linalg::column_basis(&DMatrix::from_fn(n, kspan.len(), |r, c| kspan[c][r]), 1e-10)
    };
    let pt = p.transpose();
    let inner = s.eval.clone();
    let vector: Eval = Arc::new(move |v: &[f64]| {
        let proj = &pt * nalgebra::DVector::from_column_slice(v);
        inner(v) + proj.norm()
    });
    let m0 = m0(a, &*vector);
    let (c1, c2) = sampled_constants(n, |v| l1(a, v), |v| vector(v));
    let m = c2 * c2 * m0;
    let scaled = vector.clone();
    Ok((
        m,
        ConstructedNorm {
            algebra: a.clone(),
            eval: Arc::new(move |v: &[f64]| m * scaled(v)),
            meta: NormMeta {
                m0,
                c1,
                c2,
                m,
                c: None,
                constants: ConstantsMethod::Sampled,
                scaling: Scaling::C2SquaredM0,
                side: None,
                grid: None,
                c_grid: None,
                lambda_window: None,
            },
            provenance: Provenance::Dominating,
            spec: None,
            vector_norm: Some(vector),
            base: None,
            circle: None,
        },
    ))
}

/// `|a|' = c sup_{t1,t2} |e^{It1} a e^{It2}|` with `c = sup_t |e^{It}|`, over
/// the scaled algebra norm of `spec`. `Left` parenthesizes as
/// `(e^{It1} a) e^{It2}`, `Right` as `e^{It1} (a e^{It2})`.
///
/// Suprema are taken on a `grid x grid` torus grid, then refined in the best
/// cell by golden-section search.
pub fn circle_invariant_norm(
    a: &Algebra,
    copy: &ComplexCopy,
    spec: &NormSpec,
    side: CircleSide,
    grid: usize,
) -> Result<ConstructedNorm> {
    a.check_same(copy.algebra())?;
    if grid == 0 {
        return Err(Error::InvalidArgument("grid must be positive".into()));
    }
    let cfg = CheckConfig::default();
    let need_left = matches!(side, CircleSide::Both | CircleSide::Left);
    let need_right = matches!(side, CircleSide::Both | CircleSide::Right);
    if need_left && !check_left_alternative(a, &cfg).holds() {
        return Err(Error::Precondition(format!("`{}` is not left alternative", a.name())));
    }
    if need_right && !check_right_alternative(a, &cfg).holds() {
        return Err(Error::Precondition(format!("`{}` is not right alternative", a.name())));
    }
    let base = scale_to_algebra_norm(a, spec)?;
    let i = copy.i().coords().to_vec();
    let unit = a.unit_coords().to_vec();
    let bev = base.eval.clone();
    let circ = |t: f64| {
        let (s, c) = t.sin_cos();
        let v: Vec<f64> = unit.iter().zip(&i).map(|(e, x)| c * e + s * x).collect();
        bev(&v)
    };
    let mut best = (0.0, f64::NEG_INFINITY);
    for k in 0..grid {
        let t = TAU * k as f64 / grid as f64;
        let v = circ(t);
        if v > best.1 {
            best = (t, v);
        }
    }
    let c_grid = best.1;
    let h = TAU / grid as f64;
    let (_, neg) = golden_min(|t| -circ(t), best.0 - h, best.0 + h, REFINE_TOL);
    let c = c_grid.max(-neg);
    let data = Arc::new(CircleData {
        algebra: a.clone(),
        i,
        side,
        grid,
        base: base.eval.clone(),
        c,
    });
    let d2 = data.clone();
    let mut meta = base.meta.clone();
    meta.c = Some(c);
    meta.c_grid = Some(c_grid);
    meta.side = Some(side);
    meta.grid = Some(grid);
    Ok(ConstructedNorm {
        algebra: a.clone(),
        eval: Arc::new(move |v: &[f64]| d2.c * d2.sup(v).value),
        meta,
        provenance: Provenance::CircleInvariant,
        spec: Some(spec.clone()),
        vector_norm: base.vector_norm.clone(),
        base: Some(base.eval.clone()),
        circle: Some(data),
    })
}

/// Outcome of one sampled norm property.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyCheck {
    pub name: String,
    pub passed: bool,
    /// Largest relative violation seen (nonpositive means no violation).
    pub worst: f64,
    pub tolerance: f64,
    pub samples: usize,
}

impl PropertyCheck {
    fn new(name: &str, worst: f64, tolerance: f64, samples: usize) -> Self {
        PropertyCheck {
            name: name.into(),
            passed: worst <= tolerance,
            worst,
            tolerance,
            samples,
        }
    }
}

/// Relative slack for submultiplicativity, homogeneity and triangle checks.
pub const PROPERTY_SLACK: f64 = 1e-9;
/// Tolerance for `|1|' = 1` and rotation invariance.
pub const UNIT_TOL: f64 = 1e-8;
pub const ROTATION_TOL: f64 = 1e-6;

fn times_scalar(a: &Algebra, v: &[f64], re: f64, im: f64) -> Vec<f64> {
    match a.field() {
        Field::Real => v.iter().map(|x| re * x).collect(),
        Field::Complex => {
            let d = a.dim();
            (0..2 * d)
                .map(|k| {
                    if k < d {
                        re * v[k] - im * v[k + d]
                    } else {
                        im * v[k - d] + re * v[k]
                    }
                })
                .collect()
        }
    }
}

/// Runs the sampled property suite on `samples` seeded random points (pairs
/// for binary properties).
pub fn check_norm_properties(norm: &ConstructedNorm, samples: usize, seed: u64) -> Vec<PropertyCheck> {
    let a = &norm.algebra;
    let n = a.real_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ev = |v: &[f64]| norm.eval_coords(v);
    let mut out = Vec::new();

    out.push(PropertyCheck::new("zero", ev(&vec![0.0; n]).abs(), 0.0, 1));

    let (mut hom, mut tri, mut sub) = (f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut equiv = f64::NEG_INFINITY;
    let mut sandwich = f64::NEG_INFINITY;
    let mut rot = f64::NEG_INFINITY;
    for _ in 0..samples {
        let x = random_unit(&mut rng, n);
        let y = random_unit(&mut rng, n);
        let (nx, ny) = (ev(&x), ev(&y));
        let re: f64 = rng.random_range(-3.0..3.0);
        let im: f64 = if a.field() == Field::Complex {
            rng.random_range(-3.0..3.0)
        } else {
            0.0
        };
        let modulus = re.hypot(im);
        hom = hom.max((ev(&times_scalar(a, &x, re, im)) - modulus * nx).abs() / (modulus * nx).max(1e-300));
        let s: Vec<f64> = x.iter().zip(&y).map(|(p, q)| p + q).collect();
        tri = tri.max((ev(&s) - nx - ny) / (nx + ny));
        sub = sub.max((ev(&a.mul_raw(&x, &y)) - nx * ny) / (nx * ny));
        if let Some(vx) = norm.vector_norm_eval(&x) {
            if norm.provenance == Provenance::Scaled || norm.provenance == Provenance::Dominating {
                let l = l1(a, &x);
                let lo = (norm.meta.c1 * vx - l) / l;
                let hi = (l - norm.meta.c2 * vx) / l;
                equiv = equiv.max(lo).max(hi);
            }
        }
        if let (Some(c), Some(bx)) = (norm.meta.c, norm.base_eval(&x)) {
            let lo = (c * bx - nx) / nx;
            let hi = (nx - c * c * c * bx) / nx;
            sandwich = sandwich.max(lo).max(hi);
            let side = norm.meta.side.unwrap_or(CircleSide::Both);
            let i = norm.circle.as_ref().map(|d| d.i.clone()).unwrap_or_default();
            let z = rand_circle(a, &i, &mut rng);
            let w = rand_circle(a, &i, &mut rng);
            let moved = match side {
                CircleSide::Both => a.mul_raw(&a.mul_raw(&z.1, &x), &w.1),
                CircleSide::Left => a.mul_raw(&z.1, &x),
                CircleSide::Right => a.mul_raw(&x, &w.1),
            };
            let factor = match side {
                CircleSide::Both => z.0 * w.0,
                CircleSide::Left => z.0,
                CircleSide::Right => w.0,
            };
            rot = rot.max((ev(&moved) - factor * nx).abs() / (factor * nx));
        }
    }
    out.push(PropertyCheck::new("homogeneity", hom, PROPERTY_SLACK, samples));
    out.push(PropertyCheck::new("triangle", tri, PROPERTY_SLACK, samples));
    out.push(PropertyCheck::new("submultiplicative", sub, PROPERTY_SLACK, samples));
    if equiv > f64::NEG_INFINITY {
        out.push(PropertyCheck::new("equivalence_constants", equiv, PROPERTY_SLACK, samples));
    }
    if norm.provenance == Provenance::Unitalized {
        let one = ev(a.unit_coords());
        out.push(PropertyCheck::new("unital", (one - 1.0).abs(), UNIT_TOL, 1));
    }
    if sandwich > f64::NEG_INFINITY {
        out.push(PropertyCheck::new("sandwich", sandwich, PROPERTY_SLACK, samples));
        out.push(PropertyCheck::new("rotation_invariance", rot, ROTATION_TOL, samples));
    }
    out
}

/// Random `r e^{I theta}` with `r` in `[0.5, 2)`; returns `(r, element)`.
fn rand_circle(a: &Algebra, i: &[f64], rng: &mut ChaCha8Rng) -> (f64, Vec<f64>) {
    let r: f64 = rng.random_range(0.5..2.0);
    let t: f64 = rng.random_range(0.0..TAU);
    let (s, c) = t.sin_cos();
    let v = a
        .unit_coords()
        .iter()
        .zip(i)
        .map(|(e, x)| r * (c * e + s * x))
        .collect();
    (r, v)
}
