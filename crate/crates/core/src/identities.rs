//! Certification and refutation of polynomial identities.
//!
//! Laws that are polynomial in their variables are certified exactly by full
//! polarization: every monomial is multilinearized over its variable
//! occurrences and evaluated on basis vectors, which in characteristic zero
//! is equivalent to the law holding on all of `A`. Every law is also sampled
//! on random unit-norm elements.

use std::fmt;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Serialize, Serializer};

use crate::algebra::io::element_to_value;
use crate::algebra::{invert, Algebra, Element, Table};
use crate::error::{Error, Result};
use crate::linalg::norm2;
use crate::scalar::{rational_to_i128, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    HoldsExact,
    HoldsNumeric,
    Fails,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    BasisLinearization,
    RandomSampling,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

fn ser_witness<S: Serializer>(w: &Option<Vec<Element>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match w {
        None => s.serialize_none(),
        Some(es) => es.iter().map(element_to_value).collect::<Vec<_>>().serialize(s),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub identity_name: String,
    pub status: Status,
    #[serde(serialize_with = "ser_witness")]
    pub witness: Option<Vec<Element>>,
    pub max_residual: f64,
    pub method: Method,
    pub seed: u64,
    pub tolerance: f64,
    pub trials: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.status != Status::Fails
    }
}

/// Shared settings for every check.
#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub seed: u64,
    pub trials: usize,
    /// Relative residual tolerance for sampled polynomial laws.
    pub tol: f64,
    /// Maximum number of monomial evaluations for exact polarization.
    pub exact_budget: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            seed: 42,
            trials: 2000,
            tol: 1e-9,
            exact_budget: 1_000_000,
        }
    }
}

/// Tolerance for the inverse-difference identity.
pub const INVERSE_TOL: f64 = 1e-8;

/// A sampled failure counts only beyond this multiple of the tolerance.
pub const FAIL_FACTOR: f64 = 10.0;

// ---------------------------------------------------------------------------
// Expressions

#[derive(Clone, Debug)]
enum Expr {
    Var(usize),
    Mul(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
}

fn v(i: usize) -> Expr {
    Expr::Var(i)
}

fn m(a: Expr, b: Expr) -> Expr {
    Expr::Mul(Box::new(a), Box::new(b))
}

fn s(a: Expr, b: Expr) -> Expr {
    Expr::Sub(Box::new(a), Box::new(b))
}

#[derive(Clone, Debug)]
enum Mono {
    Var(usize),
    Mul(Box<Mono>, Box<Mono>),
}

impl Mono {
    fn degrees(&self, out: &mut [usize]) {
        match self {
            Mono::Var(i) => out[*i] += 1,
            Mono::Mul(a, b) => {
                a.degrees(out);
                b.degrees(out);
            }
        }
    }
}

fn expand(e: &Expr) -> Vec<(i64, Mono)> {
    match e {
        Expr::Var(i) => vec![(1, Mono::Var(*i))],
        Expr::Sub(a, b) => {
            let mut out = expand(a);
            out.extend(expand(b).into_iter().map(|(c, t)| (-c, t)));
            out
        }
        Expr::Mul(a, b) => {
            let (ea, eb) = (expand(a), expand(b));
            let mut out = Vec::new();
            for (ca, ta) in &ea {
                for (cb, tb) in &eb {
                    out.push((ca * cb, Mono::Mul(Box::new(ta.clone()), Box::new(tb.clone()))));
                }
            }
            out
        }
    }
}

/// A homogeneous polynomial law `sum_t sign_t * monomial_t = 0`.
#[derive(Clone, Debug)]
pub struct PolyLaw {
    name: &'static str,
    nvars: usize,
    terms: Vec<(i64, Mono)>,
    degrees: Vec<usize>,
}

impl PolyLaw {
    fn new(name: &'static str, nvars: usize, e: Expr) -> Self {
        let terms = expand(&e);
        let mut degrees = vec![0; nvars];
        terms[0].1.degrees(&mut degrees);
        for (_, t) in &terms {
            let mut d = vec![0; nvars];
            t.degrees(&mut d);
            assert_eq!(d, degrees, "law {name} is not homogeneous");
        }
        PolyLaw {
            name,
            nvars,
            terms,
            degrees,
        }
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Value of the law with every occurrence of variable `k` set to `xs[k]`.
    pub fn eval(&self, alg: &Algebra, xs: &[&[f64]]) -> Vec<f64> {
        let mut out = vec![0.0; alg.real_dim()];
        for (c, t) in &self.terms {
            let val = eval_same(alg, t, xs);
            for (o, x) in out.iter_mut().zip(val) {
                *o += *c as f64 * x;
            }
        }
        out
    }

    /// `|law(xs)| / prod |x_k|^{deg k}`.
    pub fn relative_residual(&self, alg: &Algebra, xs: &[&[f64]]) -> f64 {
        let r = norm2(&self.eval(alg, xs));
        let denom: f64 = xs
            .iter()
            .zip(&self.degrees)
            .map(|(x, d)| norm2(x).powi(*d as i32))
            .product();
        if denom == 0.0 {
            if r == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            r / denom
        }
    }

    fn polarization_cost(&self, n: usize) -> f64 {
        let deg: usize = self.degrees.iter().sum();
        self.terms.len() as f64 * (n as f64).powi(deg as i32)
    }
}

fn eval_same(alg: &Algebra, t: &Mono, xs: &[&[f64]]) -> Vec<f64> {
    match t {
        Mono::Var(i) => xs[*i].to_vec(),
        Mono::Mul(a, b) => alg.mul_raw(&eval_same(alg, a, xs), &eval_same(alg, b, xs)),
    }
}

macro_rules! vars {
    ($a:ident, $b:ident) => { let $a = || v(0); let $b = || v(1); };
    ($a:ident, $b:ident, $c:ident) => { let $a = || v(0); let $b = || v(1); let $c = || v(2); };
}

pub fn left_alternative_law() -> PolyLaw {
    vars!(a, b);
    PolyLaw::new("left_alternative", 2, s(m(a(), m(a(), b())), m(m(a(), a()), b())))
}

pub fn right_alternative_law() -> PolyLaw {
    vars!(a, b);
    PolyLaw::new("right_alternative", 2, s(m(a(), m(b(), b())), m(m(a(), b()), b())))
}

pub fn associative_law() -> PolyLaw {
    vars!(a, b, c);
    PolyLaw::new("associative", 3, s(m(m(a(), b()), c()), m(a(), m(b(), c()))))
}

pub fn commutative_law() -> PolyLaw {
    vars!(a, b);
    PolyLaw::new("commutative", 2, s(m(a(), b()), m(b(), a())))
}

/// `((ab)a)c = a(b(ac))`, `(ab)(ca) = (a(bc))a`, `a((bc)b) = ((ab)c)b`.
pub fn moufang_laws() -> [PolyLaw; 3] {
    vars!(a, b, c);
    [
        PolyLaw::new(
            "moufang_left",
            3,
            s(m(m(m(a(), b()), a()), c()), m(a(), m(b(), m(a(), c())))),
        ),
        PolyLaw::new(
            "moufang_middle",
            3,
            s(m(m(a(), b()), m(c(), a())), m(m(a(), m(b(), c())), a())),
        ),
        PolyLaw::new(
            "moufang_right",
            3,
            s(m(a(), m(m(b(), c()), b())), m(m(m(a(), b()), c()), b())),
        ),
    ]
}

fn assoc_expr() -> Expr {
    vars!(a, b, c);
    s(m(m(a(), b()), c()), m(a(), m(b(), c())))
}

pub fn skornyakov_laws(side: Side) -> [PolyLaw; 2] {
    vars!(a, b, c);
    match side {
        Side::Left => [
            // (a(ba))c = a(b(ac))
            PolyLaw::new(
                "skornyakov_left_1",
                3,
                s(m(m(a(), m(b(), a())), c()), m(a(), m(b(), m(a(), c())))),
            ),
            // [a,b,c](cb) = ([a,b,c]b)c
            PolyLaw::new(
                "skornyakov_left_2",
                3,
                s(m(assoc_expr(), m(c(), b())), m(m(assoc_expr(), b()), c())),
            ),
        ],
        Side::Right => [
            // a((bc)b) = ((ab)c)b
            PolyLaw::new(
                "skornyakov_right_1",
                3,
                s(m(a(), m(m(b(), c()), b())), m(m(m(a(), b()), c()), b())),
            ),
            // (ba)[a,b,c] = a(b[a,b,c])
            PolyLaw::new(
                "skornyakov_right_2",
                3,
                s(m(m(b(), a()), assoc_expr()), m(a(), m(b(), assoc_expr()))),
            ),
        ],
    }
}

// ---------------------------------------------------------------------------
// Exact polarization

type Sparse<T> = Vec<(usize, T)>;

fn smul<T: Scalar>(t: &Table<T>, a: &Sparse<T>, b: &Sparse<T>, acc: &mut [T]) -> Sparse<T> {
    for (i, x) in a {
        for (j, y) in b {
            let xy = x.clone() * y.clone();
            for (k, c) in t.basis_product(*i, *j) {
                acc[*k] = acc[*k].clone() + xy.clone() * c.clone();
            }
        }
    }
    let mut out = Vec::new();
    for (k, slot) in acc.iter_mut().enumerate() {
        if !slot.is_zero() {
            out.push((k, std::mem::replace(slot, T::zero())));
        }
    }
    out
}

/// Evaluates a monomial with occurrence `j` of variable `k` set to
/// `vals[k][j]`, numbering occurrences in traversal order.
fn eval_occ<T: Scalar>(
    t: &Table<T>,
    mono: &Mono,
    vals: &[Vec<Sparse<T>>],
    counters: &mut [usize],
    acc: &mut [T],
) -> Sparse<T> {
    match mono {
        Mono::Var(k) => {
            let v = vals[*k][counters[*k]].clone();
            counters[*k] += 1;
            v
        }
        Mono::Mul(a, b) => {
            let x = eval_occ(t, a, vals, counters, acc);
            if x.is_empty() {
                // Skip the right factor but keep the occurrence numbering.
                let mut d = vec![0; counters.len()];
                b.degrees(&mut d);
                for (c, dd) in counters.iter_mut().zip(d) {
                    *c += dd;
                }
                return x;
            }
            let y = eval_occ(t, b, vals, counters, acc);
            if y.is_empty() {
                return y;
            }
            smul(t, &x, &y, acc)
        }
    }
}

fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; k];
    loop {
        out.push(cur.clone());
        // Next non-decreasing tuple.
        let mut p = k;
        while p > 0 && cur[p - 1] == n - 1 {
            p -= 1;
        }
        if p == 0 {
            return out;
        }
        cur[p - 1] += 1;
        let v = cur[p - 1];
        for x in cur.iter_mut().skip(p) {
            *x = v;
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn distinct_perms(sorted: &[usize]) -> Vec<Vec<usize>> {
    let mut cur = sorted.to_vec();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

/// Basis multisets (one per variable) on which the polarized law is nonzero.
fn polarize<T: Scalar>(law: &PolyLaw, t: &Table<T>) -> Option<Vec<Vec<usize>>> {
    let n = t.dim();
    let per_var: Vec<Vec<(Vec<usize>, Vec<Vec<usize>>)>> = law
        .degrees
        .iter()
        .map(|&k| {
            multisets(n, k)
                .into_iter()
                .map(|ms| {
                    let p = distinct_perms(&ms);
                    (ms, p)
                })
                .collect()
        })
        .collect();
    let nv = law.nvars;
    let mut acc = vec![T::zero(); n];
    let mut total = vec![T::zero(); n];
    let mut counters = vec![0; nv];
    let mut idx = vec![0usize; nv];
    let basis = |i: usize| vec![(i, T::one())];
    loop {
        // Sum over distinct assignments of each multiset to occurrences.
        let mut pidx = vec![0usize; nv];
        total.iter_mut().for_each(|x| *x = T::zero());
        loop {
            let vals: Vec<Vec<Sparse<T>>> = (0..nv)
                .map(|k| per_var[k][idx[k]].1[pidx[k]].iter().map(|&i| basis(i)).collect())
                .collect();
            for (c, mono) in &law.terms {
                counters.iter_mut().for_each(|x| *x = 0);
                let r = eval_occ(t, mono, &vals, &mut counters, &mut acc);
                let cc = if *c >= 0 { T::one() } else { -T::one() };
                for _ in 0..c.unsigned_abs() {
                    for (k, x) in &r {
                        total[*k] = total[*k].clone() + cc.clone() * x.clone();
                    }
                }
            }
            let mut k = 0;
            while k < nv {
                pidx[k] += 1;
                if pidx[k] < per_var[k][idx[k]].1.len() {
                    break;
                }
                pidx[k] = 0;
                k += 1;
            }
            if k == nv {
                break;
            }
        }
        if total.iter().any(|x| !x.is_zero()) {
            return Some((0..nv).map(|k| per_var[k][idx[k]].0.clone()).collect());
        }
        let mut k = 0;
        while k < nv {
            idx[k] += 1;
            if idx[k] < per_var[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == nv {
            return None;
        }
    }
}

/// Raw-law witness inside the span of the offending basis multisets.
fn witness_from_multisets<T: Scalar>(
    law: &PolyLaw,
    t: &Table<T>,
    ms: &[Vec<usize>],
    from_f64: impl Fn(f64) -> T,
) -> Option<Vec<Vec<f64>>> {
    let n = t.dim();
    let supports: Vec<Vec<usize>> = ms
        .iter()
        .map(|m| {
            let mut s = m.clone();
            s.dedup();
            s
        })
        .collect();
    for coefs in [&[0.0, 1.0][..], &[0.0, 1.0, -1.0, 2.0][..]] {
        let mut digits: Vec<Vec<usize>> = supports.iter().map(|s| vec![0; s.len()]).collect();
        loop {
            let xs: Vec<Vec<f64>> = supports
                .iter()
                .zip(&digits)
                .map(|(s, d)| {
                    let mut x = vec![0.0; n];
                    for (i, di) in s.iter().zip(d) {
                        x[*i] = coefs[*di];
                    }
                    x
                })
                .collect();
            if xs.iter().all(|x| x.iter().any(|c| *c != 0.0)) {
                // Exact evaluation with the same vector at every occurrence.
                let vals: Vec<Vec<Sparse<T>>> = xs
                    .iter()
                    .zip(&law.degrees)
                    .map(|(x, &k)| {
                        let sp: Sparse<T> = x
                            .iter()
                            .enumerate()
                            .filter(|(_, c)| **c != 0.0)
                            .map(|(i, c)| (i, from_f64(*c)))
                            .collect();
                        vec![sp; k]
                    })
                    .collect();
                let mut acc = vec![T::zero(); n];
                let mut total = vec![T::zero(); n];
                let mut counters = vec![0; law.nvars];
                for (c, mono) in &law.terms {
                    counters.iter_mut().for_each(|x| *x = 0);
                    let r = eval_occ(t, mono, &vals, &mut counters, &mut acc);
                    for (k, x) in r {
                        total[k] = total[k].clone() + from_f64(*c as f64) * x;
                    }
                }
                if total.iter().any(|x| !x.is_zero()) {
                    return Some(xs);
                }
            }
            // Odometer over coefficient digits.
            let mut done = true;
            'outer: for d in digits.iter_mut() {
                for x in d.iter_mut() {
                    *x += 1;
                    if *x < coefs.len() {
                        done = false;
                        break 'outer;
                    }
                    *x = 0;
                }
            }
            if done {
                break;
            }
        }
    }
    None
}

enum ExactOutcome {
    Holds { exact: bool },
    Fails { multisets: Vec<Vec<usize>>, witness: Option<Vec<Vec<f64>>> },
    Skipped,
}

fn integer_table(alg: &Algebra) -> Option<Table<i128>> {
    let t = alg.exact_table()?;
    if alg.real_dim() > 32 {
        return None;
    }
    t.try_map(|x| rational_to_i128(x).filter(|v| v.abs() <= 256))
}

fn exact_check(law: &PolyLaw, alg: &Algebra, budget: usize) -> ExactOutcome {
    if law.polarization_cost(alg.real_dim()) > budget as f64 {
        return ExactOutcome::Skipped;
    }
    if let Some(t) = integer_table(alg) {
        return match polarize(law, &t) {
            None => ExactOutcome::Holds { exact: true },
            Some(ms) => {
                let w = witness_from_multisets(law, &t, &ms, |x| x as i128);
                ExactOutcome::Fails { multisets: ms, witness: w }
            }
        };
    }
    if let Some(t) = alg.exact_table() {
        return match polarize(law, t) {
            None => ExactOutcome::Holds { exact: true },
            Some(ms) => {
                let w = witness_from_multisets(law, t, &ms, |x| {
                    BigRational::from_float(x).expect("small integer")
                });
                ExactOutcome::Fails { multisets: ms, witness: w }
            }
        };
    }
    // Floating-point tables are judged by sampling alone.
    ExactOutcome::Skipped
}

// ---------------------------------------------------------------------------
// Sampling

pub(crate) fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let x: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut *rng)).collect();
        let nx = norm2(&x);
        if nx > 1e-12 {
            return x.into_iter().map(|v| v / nx).collect();
        }
    }
}

fn law_seed(seed: u64, name: &str) -> u64 {
    // FNV-1a of the law name keeps streams independent across laws.
    let mut h: u64 = 0xcbf29ce484222325;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    seed ^ h
}

fn sample_law(law: &PolyLaw, alg: &Algebra, cfg: &CheckConfig, trials: usize) -> (f64, Option<Vec<Vec<f64>>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(law_seed(cfg.seed, law.name));
    let n = alg.real_dim();
    let mut worst = 0.0f64;
    let mut witness = None;
    for _ in 0..trials {
        let xs: Vec<Vec<f64>> = (0..law.nvars).map(|_| random_unit(&mut rng, n)).collect();
        let refs: Vec<&[f64]> = xs.iter().map(Vec::as_slice).collect();
        let r = law.relative_residual(alg, &refs);
        if r > worst {
            worst = r;
            if r > FAIL_FACTOR * cfg.tol {
                witness = Some(xs);
            }
        }
    }
    (worst, witness)
}

fn elements(alg: &Algebra, xs: Vec<Vec<f64>>) -> Vec<Element> {
    xs.into_iter()
        .map(|x| alg.element(x).expect("dimension"))
        .collect()
}

/// Random combinations of the offending basis vectors.
fn targeted_witness(
    law: &PolyLaw,
    alg: &Algebra,
    ms: &[Vec<usize>],
    cfg: &CheckConfig,
) -> Option<(Vec<Vec<f64>>, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(law_seed(cfg.seed, law.name) ^ 1);
    let n = alg.real_dim();
    for _ in 0..1000 {
        let xs: Vec<Vec<f64>> = ms
            .iter()
            .map(|m| {
                let mut x = vec![0.0; n];
                for &i in m {
                    x[i] = StandardNormal.sample(&mut rng);
                }
                x
            })
            .collect();
        let refs: Vec<&[f64]> = xs.iter().map(Vec::as_slice).collect();
        let r = law.relative_residual(alg, &refs);
        if r > FAIL_FACTOR * cfg.tol {
            return Some((xs, r));
        }
    }
    None
}

/// Exact polarization (when the table allows it) followed by sampling.
pub fn check_law(alg: &Algebra, law: &PolyLaw, cfg: &CheckConfig, trials: usize) -> IdentityReport {
    let mut report = IdentityReport {
        identity_name: law.name.to_string(),
        status: Status::HoldsNumeric,
        witness: None,
        max_residual: 0.0,
        method: Method::RandomSampling,
        seed: cfg.seed,
        tolerance: cfg.tol,
        trials,
        skipped: None,
        detail: None,
    };
    match exact_check(law, alg, cfg.exact_budget) {
        ExactOutcome::Fails { multisets, witness } => {
            report.method = Method::BasisLinearization;
            report.status = Status::Fails;
            report.detail = Some(format!(
                "polarized law nonzero on basis indices {}",
                multisets
                    .iter()
                    .map(|m| format!("{m:?}"))
                    .collect::<Vec<_>>()
                    .join(" x ")
            ));
            let found = witness
                .map(|w| {
                    let refs: Vec<&[f64]> = w.iter().map(Vec::as_slice).collect();
                    let r = law.relative_residual(alg, &refs);
                    (w, r)
                })
                .filter(|(_, r)| *r > FAIL_FACTOR * cfg.tol)
                .or_else(|| targeted_witness(law, alg, &multisets, cfg));
            if let Some((w, r)) = found {
                report.max_residual = r;
                report.witness = Some(elements(alg, w));
            }
            report
        }
        outcome => {
            let (worst, witness) = sample_law(law, alg, cfg, trials);
            report.max_residual = worst;
            if let Some(w) = witness {
                report.status = Status::Fails;
                report.witness = Some(elements(alg, w));
            } else if let ExactOutcome::Holds { exact } = outcome {
                report.method = Method::BasisLinearization;
                report.status = if exact { Status::HoldsExact } else { Status::HoldsNumeric };
            }
            report
        }
    }
}

pub fn check_left_alternative(alg: &Algebra, cfg: &CheckConfig) -> IdentityReport {
    check_law(alg, &left_alternative_law(), cfg, cfg.trials.min(1000))
}

pub fn check_right_alternative(alg: &Algebra, cfg: &CheckConfig) -> IdentityReport {
    check_law(alg, &right_alternative_law(), cfg, cfg.trials.min(1000))
}

pub fn check_associative(alg: &Algebra, cfg: &CheckConfig) -> IdentityReport {
    check_law(alg, &associative_law(), cfg, cfg.trials)
}

pub fn check_commutative(alg: &Algebra, cfg: &CheckConfig) -> IdentityReport {
    check_law(alg, &commutative_law(), cfg, cfg.trials)
}

pub fn check_moufang(alg: &Algebra, cfg: &CheckConfig) -> [IdentityReport; 3] {
    moufang_laws().map(|l| check_law(alg, &l, cfg, cfg.trials))
}

pub fn check_skornyakov(alg: &Algebra, side: Side, cfg: &CheckConfig) -> [IdentityReport; 2] {
    skornyakov_laws(side).map(|l| check_law(alg, &l, cfg, cfg.trials))
}

// ---------------------------------------------------------------------------
// Power associativity

/// All parenthesizations of `a^m` for `m = 1..=max_deg`.
fn all_powers(alg: &Algebra, a: &[f64], max_deg: usize) -> Vec<Vec<Vec<f64>>> {
    let mut p: Vec<Vec<Vec<f64>>> = vec![Vec::new(), vec![a.to_vec()]];
    for deg in 2..=max_deg {
        let mut cur = Vec::new();
        for k in 1..deg {
            for x in &p[k] {
                for y in &p[deg - k] {
                    cur.push(alg.mul_raw(x, y));
                }
            }
        }
        p.push(cur);
    }
    p
}

/// Largest spread between parenthesizations of `a^m`, relative to `|a|^m`.
pub fn power_residual(alg: &Algebra, a: &[f64], max_deg: usize) -> (f64, usize) {
    let p = all_powers(alg, a, max_deg);
    let na = norm2(a);
    let mut worst = (0.0, 0);
    for (deg, ps) in p.iter().enumerate().skip(3) {
        let scale = na.powi(deg as i32).max(f64::MIN_POSITIVE);
        for x in &ps[1..] {
            let r = x
                .iter()
                .zip(&ps[0])
                .map(|(u, v)| (u - v) * (u - v))
                .sum::<f64>()
                .sqrt()
                / scale;
            if r > worst.0 {
                worst = (r, deg);
            }
        }
    }
    worst
}

pub fn check_power_associative_sampled(
    alg: &Algebra,
    max_deg: usize,
    trials: usize,
    cfg: &CheckConfig,
) -> Result<IdentityReport> {
    if !(3..=8).contains(&max_deg) {
        return Err(Error::DegreeOutOfRange(max_deg));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(law_seed(cfg.seed, "power_associative"));
    let mut worst = 0.0f64;
    let mut witness = None;
    for _ in 0..trials {
        let a = random_unit(&mut rng, alg.real_dim());
        let (r, deg) = power_residual(alg, &a, max_deg);
        if r > worst {
            worst = r;
            if r > FAIL_FACTOR * cfg.tol {
                witness = Some((a, deg));
            }
        }
    }
    Ok(IdentityReport {
        identity_name: "power_associative".into(),
        status: if witness.is_some() { Status::Fails } else { Status::HoldsNumeric },
        detail: witness
            .as_ref()
            .map(|(_, d)| format!("parenthesizations of a^{d} disagree")),
        witness: witness.map(|(a, _)| elements(alg, vec![a])),
        max_residual: worst,
        method: Method::RandomSampling,
        seed: cfg.seed,
        tolerance: cfg.tol,
        trials,
        skipped: None,
    })
}

// ---------------------------------------------------------------------------
// Artin

#[derive(Clone, Debug)]
enum Word {
    A,
    B,
    Mul(Box<Word>, Box<Word>),
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Word::A => f.write_str("a"),
            Word::B => f.write_str("b"),
            Word::Mul(x, y) => write!(f, "({x}{y})"),
        }
    }
}

fn random_word(rng: &mut ChaCha8Rng, len: usize) -> Word {
    if len == 1 {
        return if rng.random_bool(0.5) { Word::A } else { Word::B };
    }
    let k = rng.random_range(1..len);
    Word::Mul(Box::new(random_word(rng, k)), Box::new(random_word(rng, len - k)))
}

fn eval_word(alg: &Algebra, w: &Word, a: &[f64], b: &[f64]) -> Vec<f64> {
    match w {
        Word::A => a.to_vec(),
        Word::B => b.to_vec(),
        Word::Mul(x, y) => alg.mul_raw(&eval_word(alg, x, a, b), &eval_word(alg, y, a, b)),
    }
}

/// Associators of random words in two random elements. A witness is the
/// triple of word values `(x, y, z)` with `[x, y, z]` large.
pub fn check_artin_sampled(
    alg: &Algebra,
    word_len: usize,
    trials: usize,
    cfg: &CheckConfig,
) -> Result<IdentityReport> {
    if word_len < 3 {
        return Err(Error::InvalidArgument("word_len must be at least 3".into()));
    }
    let law = associative_law();
    let mut rng = ChaCha8Rng::seed_from_u64(law_seed(cfg.seed, "artin"));
    let n = alg.real_dim();
    let mut worst = 0.0f64;
    let mut witness = None;
    for _ in 0..trials {
        let a = random_unit(&mut rng, n);
        let b = random_unit(&mut rng, n);
        let total = rng.random_range(3..=word_len);
        let l1 = rng.random_range(1..=total - 2);
        let l2 = rng.random_range(1..=total - l1 - 1);
        let l3 = total - l1 - l2;
        let ws = [random_word(&mut rng, l1), random_word(&mut rng, l2), random_word(&mut rng, l3)];
        let xs: Vec<Vec<f64>> = ws.iter().map(|w| eval_word(alg, w, &a, &b)).collect();
        let refs: Vec<&[f64]> = xs.iter().map(Vec::as_slice).collect();
        let r = law.relative_residual(alg, &refs);
        if r > worst {
            worst = r;
            if r > FAIL_FACTOR * cfg.tol {
                witness = Some((xs, format!("[{}, {}, {}]", ws[0], ws[1], ws[2])));
            }
        }
    }
    Ok(IdentityReport {
        identity_name: "artin".into(),
        status: if witness.is_some() { Status::Fails } else { Status::HoldsNumeric },
        detail: witness.as_ref().map(|(_, d)| format!("associator of words {d}")),
        witness: witness.map(|(xs, _)| elements(alg, xs)),
        max_residual: worst,
        method: Method::RandomSampling,
        seed: cfg.seed,
        tolerance: cfg.tol,
        trials,
        skipped: None,
    })
}

// ---------------------------------------------------------------------------
// Inverse difference

/// Relative residual of `a^{-1} - b^{-1} = a^{-1}[(b - a) b^{-1}]` (left) or
/// `= [a^{-1}(b - a)] b^{-1}` (right); `None` when `a` or `b` is singular.
pub fn inverse_residual(a: &Element, b: &Element, side: Side) -> Option<f64> {
    let ai = invert(a, 1e-10).ok()?;
    let bi = invert(b, 1e-10).ok()?;
    let lhs = &ai - &bi;
    let d = b - a;
    let rhs = match side {
        Side::Left => ai.mul(&d.mul(&bi).ok()?).ok()?,
        Side::Right => ai.mul(&d).ok()?.mul(&bi).ok()?,
    };
    let scale = (ai.norm2() * d.norm2() * bi.norm2()).max(ai.norm2() + bi.norm2());
    Some((&lhs - &rhs).norm2() / scale)
}

pub fn check_inverse_identity(
    alg: &Algebra,
    side: Side,
    trials: usize,
    cfg: &CheckConfig,
) -> IdentityReport {
    let name = match side {
        Side::Left => "inverse_left",
        Side::Right => "inverse_right",
    };
    let mut rng = ChaCha8Rng::seed_from_u64(law_seed(cfg.seed, name));
    let n = alg.real_dim();
    let mut worst = 0.0f64;
    let mut witness = None;
    let mut skipped = 0;
    for _ in 0..trials {
        let a = alg.element(random_unit(&mut rng, n)).expect("dim");
        let b = alg.element(random_unit(&mut rng, n)).expect("dim");
        match inverse_residual(&a, &b, side) {
            None => skipped += 1,
            Some(r) => {
                if r > worst {
                    worst = r;
                    if r > FAIL_FACTOR * INVERSE_TOL {
                        witness = Some(vec![a, b]);
                    }
                }
            }
        }
    }
    IdentityReport {
        identity_name: name.into(),
        status: if witness.is_some() { Status::Fails } else { Status::HoldsNumeric },
        witness,
        max_residual: worst,
        method: Method::RandomSampling,
        seed: cfg.seed,
        tolerance: INVERSE_TOL,
        trials,
        skipped: Some(skipped),
        detail: None,
    }
}

/// Every check, in a fixed order.
pub fn verify_all(alg: &Algebra, cfg: &CheckConfig) -> Vec<IdentityReport> {
    let mut out = vec![
        check_left_alternative(alg, cfg),
        check_right_alternative(alg, cfg),
        check_associative(alg, cfg),
        check_commutative(alg, cfg),
    ];
    out.extend(check_moufang(alg, cfg));
    out.extend(check_skornyakov(alg, Side::Left, cfg));
    out.extend(check_skornyakov(alg, Side::Right, cfg));
    out.push(check_power_associative_sampled(alg, 5, cfg.trials, cfg).expect("degree in range"));
    out.push(check_artin_sampled(alg, 6, cfg.trials, cfg).expect("word length in range"));
    out.push(check_inverse_identity(alg, Side::Left, cfg.trials, cfg));
    out.push(check_inverse_identity(alg, Side::Right, cfg.trials, cfg));
    out
}

/// Re-evaluates a report's witness independently of the check that produced it.
pub fn witness_residual(alg: &Algebra, report: &IdentityReport) -> Option<f64> {
    let w = report.witness.as_ref()?;
    let coords: Vec<&[f64]> = w.iter().map(|e| e.coords()).collect();
    let poly = |l: PolyLaw| Some(l.relative_residual(alg, &coords));
    match report.identity_name.as_str() {
        "left_alternative" => poly(left_alternative_law()),
        "right_alternative" => poly(right_alternative_law()),
        "associative" | "artin" => poly(associative_law()),
        "commutative" => poly(commutative_law()),
        "power_associative" => Some(power_residual(alg, coords[0], 8).0),
        "inverse_left" => inverse_residual(&w[0], &w[1], Side::Left),
        "inverse_right" => inverse_residual(&w[0], &w[1], Side::Right),
        name => moufang_laws()
            .into_iter()
            .chain(skornyakov_laws(Side::Left))
            .chain(skornyakov_laws(Side::Right))
            .find(|l| l.name == name)
            .and_then(poly),
    }
}
