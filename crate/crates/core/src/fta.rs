//! Witnesses for singular values of polynomials along a copy of C.
//!
//! The search minimizes `s(z) = min(sigma_min(L_v), sigma_min(R_v))` with
//! `v = f(x + yI)` (or `p(z A0)`), over a square grid covering a disk outside
//! which `v` is provably invertible, then refines grid minima by Nelder-Mead.
//! Found witnesses are divided out of `s` (`s(z) / prod |z - w|`) to expose
//! nearby minima, and the search repeats until a round adds nothing.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use serde::{Serialize, Serializer};

use crate::algebra::io::element_to_value;
use crate::algebra::{invert, Algebra, ComplexCopy, Element};
use crate::error::{Error, Result};
use crate::identities::{check_commutative, check_left_alternative, check_right_alternative, CheckConfig};
use crate::linalg::{self, norm2};
use crate::norms::is_euclidean_composition;
use crate::poly::{expand_in_scalar, CommPoly, NCPoly};

/// Tolerance passed to `invert` for leading coefficients.
pub const INVERT_TOL: f64 = 1e-9;
/// Angular samples used to bound `sigma_min` of `a_n e^{I phi}` from below.
const CIRCLE_SAMPLES: usize = 720;

/// `min(sigma_min(L_a), sigma_min(R_a))`; zero exactly when some
/// multiplication operator of `a` is singular.
pub fn singularity_measure(a: &Element) -> f64 {
    measure_coords(a.algebra(), a.coords())
}

pub fn measure_coords(alg: &Algebra, v: &[f64]) -> f64 {
    let l = linalg::sigma_min(&alg.left_mult_matrix(v));
    let r = linalg::sigma_min(&alg.right_mult_matrix(v));
    l.min(r)
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Grid points per axis over `[-R, R]^2`.
    pub grid: usize,
    /// Grid minima refined per round.
    pub refine_k: usize,
    /// Evaluation budget of one Nelder-Mead run.
    pub max_evals: usize,
    /// Simplex diameter at which Nelder-Mead stops.
    pub simplex_tol: f64,
    /// Certification threshold relative to the largest coefficient norm.
    pub certify_tol: f64,
    /// Upper bound on deflation rounds.
    pub max_rounds: usize,
    /// Run the identity checks that decide `within_hypotheses`.
    pub check_hypotheses: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            grid: 64,
            refine_k: 5,
            max_evals: 500,
            simplex_tol: 1e-12,
            certify_tol: 1e-8,
            max_rounds: 8,
            check_hypotheses: true,
        }
    }
}

fn ser_element<S: Serializer>(e: &Element, s: S) -> std::result::Result<S::Ok, S::Error> {
    element_to_value(e).serialize(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularWitness {
    /// `(x, y)` for `x + yI`.
    pub z: (f64, f64),
    /// Evaluation point: `x + yI`, or `z A0`.
    #[serde(serialize_with = "ser_element")]
    pub point: Element,
    /// `f(z)` or `p(z A0)`.
    #[serde(serialize_with = "ser_element")]
    pub value: Element,
    pub sigma_min: f64,
    pub search_radius: f64,
    pub certified: bool,
    /// Absolute certification threshold used.
    pub certify_tol: f64,
    /// Measure evaluations spent on this witness's refinement.
    pub iterations: usize,
    /// Whether the algebra satisfies the hypotheses under which a singular
    /// element is guaranteed.
    pub within_hypotheses: bool,
}

fn circle_point(alg: &Algebra, i: &[f64], x: f64, y: f64) -> Vec<f64> {
    alg.unit_coords().iter().zip(i).map(|(e, v)| x * e + y * v).collect()
}

/// Bound `K` with `|L_x|, |R_x| <= K |x|_2`.
fn mult_bound(alg: &Algebra) -> f64 {
    if is_euclidean_composition(alg) {
        return 1.0;
    }
    let n = alg.real_dim();
    let mut ls = DMatrix::zeros(n, n * n);
    let mut rs = DMatrix::zeros(n, n * n);
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        ls.view_mut((0, i * n), (n, n)).copy_from(&alg.left_mult_matrix(&e));
        rs.view_mut((0, i * n), (n, n)).copy_from(&alg.right_mult_matrix(&e));
    }
    linalg::sigma_max(&ls).max(linalg::sigma_max(&rs))
}

/// Radius `R` outside which `sum a_i z^i` (`z` in the copy) is invertible.
///
/// With `K` bounding the multiplication (`|xy| <= K|x||y|`),
/// `c = max_phi |e^{I phi}|`, and `mu` a certified lower bound of
/// `min(sigma_min(L), sigma_min(R))` of `a_n e^{I phi}` over the circle
/// (angular grid minus a Lipschitz margin), the choice
///
/// `R = 1 + K^2 c sum_{i<n} |a_i|_2 / mu`
///
/// gives `sigma_min(L_{f(z)}) >= |z|^{n-1} (|z| mu - K^2 c sum |a_i|) > 0`
/// for `|z| >= R`, and likewise for right multiplication.
pub fn search_radius(coeffs: &[Element], copy: &ComplexCopy) -> Result<f64> {
    let Some((lead, rest)) = coeffs.split_last() else {
        return Err(Error::ConstantPolynomial(0));
    };
    if rest.is_empty() {
        return Err(Error::ConstantPolynomial(0));
    }
    let alg = copy.algebra();
    for c in coeffs {
        alg.check_same(c.algebra())?;
    }
    if let Err(v) = invert(lead, INVERT_TOL) {
        return Err(Error::LeadingNotInvertible { sigma_min: v.sigma_min });
    }
    let i = copy.i().coords();
    let k = mult_bound(alg);
    let pair = DMatrix::from_fn(alg.real_dim(), 2, |r, c| if c == 0 { alg.unit_coords()[r] } else { i[r] });
    let cmax = linalg::sigma_max(&pair);
    let mut smin = f64::INFINITY;
    for s in 0..CIRCLE_SAMPLES {
        let phi = std::f64::consts::TAU * s as f64 / CIRCLE_SAMPLES as f64;
        let e = circle_point(alg, i, phi.cos(), phi.sin());
        smin = smin.min(measure_coords(alg, &alg.mul_raw(lead.coords(), &e)));
    }
    let margin = k * k * norm2(lead.coords()) * cmax * std::f64::consts::PI / CIRCLE_SAMPLES as f64;
    let mu = smin - margin;
    if !(mu > 0.0) {
        return Err(Error::LeadingNotInvertible { sigma_min: smin });
    }
    let tail: f64 = rest.iter().map(|c| norm2(c.coords())).sum();
    Ok(1.0 + k * k * cmax * tail / mu)
}

/// Nelder-Mead in the plane. The best value never increases; stops when the
/// simplex diameter drops below `tol` or after `max_evals` evaluations.
pub fn nelder_mead(
    mut f: impl FnMut(f64, f64) -> f64,
    start: (f64, f64),
    step: f64,
    max_evals: usize,
    tol: f64,
) -> ((f64, f64), f64, usize) {
    let mut evals = 0;
    let mut call = |p: [f64; 2], evals: &mut usize| {
        *evals += 1;
        f(p[0], p[1])
    };
    let mut pts = [
        [start.0, start.1],
        [start.0 + step, start.1],
        [start.0, start.1 + step],
    ];
    let mut vals = [0.0; 3];
    for k in 0..3 {
        vals[k] = call(pts[k], &mut evals);
    }
    let lerp = |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
    loop {
        // Order best..worst.
        let mut idx = [0, 1, 2];
        idx.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        pts = [pts[idx[0]], pts[idx[1]], pts[idx[2]]];
        vals = [vals[idx[0]], vals[idx[1]], vals[idx[2]]];
        let dist = |a: [f64; 2], b: [f64; 2]| (a[0] - b[0]).hypot(a[1] - b[1]);
        let diam = dist(pts[0], pts[1]).max(dist(pts[0], pts[2])).max(dist(pts[1], pts[2]));
        if diam < tol || evals >= max_evals {
            break;
        }
        let centroid = lerp(pts[0], pts[1], 0.5);
        let refl = lerp(pts[2], centroid, 2.0);
        let fr = call(refl, &mut evals);
        if fr < vals[0] {
            let exp = lerp(pts[2], centroid, 3.0);
            let fe = call(exp, &mut evals);
            if fe < fr {
                (pts[2], vals[2]) = (exp, fe);
            } else {
                (pts[2], vals[2]) = (refl, fr);
            }
        } else if fr < vals[1] {
            (pts[2], vals[2]) = (refl, fr);
        } else {
            let (target, ft) = if fr < vals[2] { (refl, fr) } else { (pts[2], vals[2]) };
            let con = lerp(centroid, target, 0.5);
            let fc = call(con, &mut evals);
            if fc < ft {
                (pts[2], vals[2]) = (con, fc);
            } else {
                for k in 1..3 {
                    pts[k] = lerp(pts[0], pts[k], 0.5);
                    vals[k] = call(pts[k], &mut evals);
                }
            }
        }
    }
    let best = (0..3).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap();
    ((pts[best][0], pts[best][1]), vals[best], evals)
}

/// Deterministic order among witnesses: smallest `|z|` (moduli within
/// `1e-9` count as equal), then `y`, then `x`.
fn z_order(a: (f64, f64), b: (f64, f64)) -> std::cmp::Ordering {
    let (ra, rb) = (a.0.hypot(a.1), b.0.hypot(b.1));
    let by_modulus = if (ra - rb).abs() <= 1e-9 * ra.max(rb).max(1.0) {
        std::cmp::Ordering::Equal
    } else {
        ra.total_cmp(&rb)
    };
    by_modulus.then(a.1.total_cmp(&b.1)).then(a.0.total_cmp(&b.0))
}

struct Found {
    z: (f64, f64),
    s: f64,
    evals: usize,
}

/// Grid + refinement + deflation over `[-r, r]^2`. Returns certified
/// witnesses and the best uncertified candidate.
fn search(measure: &dyn Fn(f64, f64) -> f64, r: f64, tol_abs: f64, opts: &SearchOptions) -> (Vec<Found>, Found) {
    let n = opts.grid.max(2);
    let h = 2.0 * r / (n - 1) as f64;
    let coord = |k: usize| -r + h * k as f64;
    let dedupe = 1e-9 * r.max(1.0);
    let mut certified: Vec<Found> = Vec::new();
    let mut best = Found {
        z: (0.0, 0.0),
        s: f64::INFINITY,
        evals: 0,
    };
    for round in 0..opts.max_rounds.max(1) {
        let known: Vec<(f64, f64)> = certified.iter().map(|f| f.z).collect();
        let deflated = |x: f64, y: f64| {
            let s = measure(x, y);
            known.iter().fold(s, |acc, w| acc / (x - w.0).hypot(y - w.1).max(1e-300))
        };
        let mut vals = vec![0.0; n * n];
        for iy in 0..n {
            for ix in 0..n {
                vals[iy * n + ix] = deflated(coord(ix), coord(iy));
            }
        }
        let mut minima: Vec<(f64, (f64, f64))> = Vec::new();
        for iy in 0..n {
            for ix in 0..n {
                let v = vals[iy * n + ix];
                let mut is_min = true;
                'nb: for dy in -1i64..=1 {
                    for dx in -1i64..=1 {
                        let (jx, jy) = (ix as i64 + dx, iy as i64 + dy);
                        if (dx, dy) == (0, 0) || jx < 0 || jy < 0 || jx >= n as i64 || jy >= n as i64 {
                            continue;
                        }
                        if vals[jy as usize * n + jx as usize] < v {
                            is_min = false;
                            break 'nb;
                        }
                    }
                }
                if is_min {
                    minima.push((v, (coord(ix), coord(iy))));
                }
            }
        }
        minima.sort_by(|a, b| a.0.total_cmp(&b.0).then(z_order(a.1, b.1)));
        let mut added = false;
        for &(_, start) in minima.iter().take(opts.refine_k) {
            let (mut z, _, mut evals) = nelder_mead(|x, y| deflated(x, y), start, h, opts.max_evals, opts.simplex_tol);
            if round > 0 {
                let (z2, _, e2) = nelder_mead(|x, y| measure(x, y), z, h * 1e-3, opts.max_evals, opts.simplex_tol);
                z = z2;
                evals += e2;
            }
            let s = measure(z.0, z.1);
            if s < tol_abs {
                if certified.iter().all(|c| (c.z.0 - z.0).hypot(c.z.1 - z.1) > dedupe) {
                    certified.push(Found { z, s, evals });
                    added = true;
                }
            } else if s < best.s || (s == best.s && z_order(z, best.z).is_lt()) {
                best = Found { z, s, evals };
            }
        }
        if !added {
            break;
        }
    }
    certified.sort_by(|a, b| z_order(a.z, b.z));
    (certified, best)
}

fn coefficient_scale(coeffs: &[Element]) -> f64 {
    coeffs.iter().map(|c| norm2(c.coords())).fold(0.0, f64::max).max(f64::MIN_POSITIVE)
}

/// All certified singular witnesses of `f` along `copy`; when none certifies,
/// the single best candidate (uncertified: a numerical failure, not absence).
pub fn find_singular_comm_all(f: &CommPoly, copy: &ComplexCopy, opts: &SearchOptions) -> Result<Vec<SingularWitness>> {
    let alg = f.algebra();
    alg.check_same(copy.algebra())?;
    if f.degree() == 0 {
        return Err(Error::ConstantPolynomial(0));
    }
    let r = search_radius(f.coeffs(), copy)?;
    let tol_abs = opts.certify_tol * coefficient_scale(f.coeffs());
    let within = if opts.check_hypotheses {
        let cfg = CheckConfig::default();
        check_commutative(alg, &cfg).holds()
            && (check_left_alternative(alg, &cfg).holds() || check_right_alternative(alg, &cfg).holds())
    } else {
        false
    };
    let i = copy.i().coords().to_vec();
    let point = |x: f64, y: f64| Element::from_raw(alg.clone(), circle_point(alg, &i, x, y));
    let value = |x: f64, y: f64| f.eval(&point(x, y));
    // Powers inside the copy are unambiguous; eval only errs on foreign input.
    let measure = |x: f64, y: f64| value(x, y).map(|v| singularity_measure(&v)).unwrap_or(f64::INFINITY);
    let (cert, best) = search(&measure, r, tol_abs, opts);
    let make = |fd: &Found| -> Result<SingularWitness> {
        let v = value(fd.z.0, fd.z.1)?;
        Ok(SingularWitness {
            z: fd.z,
            point: point(fd.z.0, fd.z.1),
            sigma_min: singularity_measure(&v),
            value: v,
            search_radius: r,
            certified: fd.s < tol_abs,
            certify_tol: tol_abs,
            iterations: fd.evals,
            within_hypotheses: within,
        })
    };
    if cert.is_empty() {
        Ok(vec![make(&best)?])
    } else {
        cert.iter().map(make).collect()
    }
}

/// Best singular witness of a commutative polynomial in the copy of C.
pub fn find_singular_comm(f: &CommPoly, copy: &ComplexCopy, opts: &SearchOptions) -> Result<SingularWitness> {
    Ok(find_singular_comm_all(f, copy, opts)?.swap_remove(0))
}

/// All certified witnesses of `p` along `C_I A0`.
pub fn find_singular_nc_all(
    p: &NCPoly,
    a0: &Element,
    copy: &ComplexCopy,
    opts: &SearchOptions,
) -> Result<Vec<SingularWitness>> {
    let alg = p.algebra();
    alg.check_same(copy.algebra())?;
    alg.check_same(a0.algebra())?;
    if p.degree() == 0 {
        return Err(Error::ConstantPolynomial(0));
    }
    if !copy.nuclear() {
        return Err(Error::NonNuclearCopy);
    }
    let lead = p.leading_part().eval(a0)?;
    if let Err(v) = invert(&lead, INVERT_TOL) {
        return Err(Error::LeadingNotInvertible { sigma_min: v.sigma_min });
    }
    let coeffs = expand_in_scalar(p, a0, copy)?;
    let r = search_radius(&coeffs, copy)?;
    let tol_abs = opts.certify_tol * coefficient_scale(&coeffs);
    let within = !opts.check_hypotheses || {
        let cfg = CheckConfig::default();
        check_left_alternative(alg, &cfg).holds() || check_right_alternative(alg, &cfg).holds()
    };
    let i = copy.i().coords().to_vec();
    let point = |x: f64, y: f64| {
        let z = circle_point(alg, &i, x, y);
        Element::from_raw(alg.clone(), alg.mul_raw(&z, a0.coords()))
    };
    let measure = |x: f64, y: f64| measure_coords(alg, &p.eval_coords(point(x, y).coords()));
    let (cert, best) = search(&measure, r, tol_abs, opts);
    let make = |fd: &Found| {
        let pt = point(fd.z.0, fd.z.1);
        let v = Element::from_raw(alg.clone(), p.eval_coords(pt.coords()));
        SingularWitness {
            z: fd.z,
            point: pt,
            sigma_min: singularity_measure(&v),
            value: v,
            search_radius: r,
            certified: fd.s < tol_abs,
            certify_tol: tol_abs,
            iterations: fd.evals,
            within_hypotheses: within && opts.check_hypotheses,
        }
    };
    Ok(if cert.is_empty() {
        vec![make(&best)]
    } else {
        cert.iter().map(make).collect()
    })
}

pub fn find_singular_nc(p: &NCPoly, a0: &Element, copy: &ComplexCopy, opts: &SearchOptions) -> Result<SingularWitness> {
    Ok(find_singular_nc_all(p, a0, copy, opts)?.swap_remove(0))
}

/// What a landscape samples.
#[derive(Clone, Copy, Debug)]
pub enum Target<'a> {
    Comm(&'a CommPoly),
    Nc(&'a NCPoly, &'a Element),
}

/// Region `(x0, x1, y0, y1)` sampled on a `resolution x resolution` grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Landscape {
    pub algebra: String,
    pub poly: String,
    pub region: (f64, f64, f64, f64),
    pub resolution: usize,
    /// Row-major: row `iy` (increasing `y`), column `ix` (increasing `x`).
    pub values: Vec<f64>,
}

impl Landscape {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let (x0, x1, y0, y1) = self.region;
        let _ = writeln!(out, "# algebra={}", self.algebra);
        let _ = writeln!(out, "# poly={}", self.poly);
        let _ = writeln!(out, "# region={x0},{x1},{y0},{y1}");
        let _ = writeln!(out, "# resolution={}", self.resolution);
        for row in self.values.chunks(self.resolution) {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.resolution + ix]
    }

    /// Coordinates of grid node `(ix, iy)`.
    pub fn node(&self, ix: usize, iy: usize) -> (f64, f64) {
        let (x0, x1, y0, y1) = self.region;
        (axis(x0, x1, self.resolution, ix), axis(y0, y1, self.resolution, iy))
    }
}

fn axis(lo: f64, hi: f64, n: usize, k: usize) -> f64 {
    if n <= 1 {
        lo
    } else {
        lo + (hi - lo) * k as f64 / (n - 1) as f64
    }
}

/// Samples `s` over a region. A resolution of 1 samples the corner `(x0, y0)`.
pub fn landscape(
    target: Target<'_>,
    copy: &ComplexCopy,
    region: (f64, f64, f64, f64),
    resolution: usize,
) -> Result<Landscape> {
    if resolution == 0 {
        return Err(Error::InvalidArgument("resolution must be positive".into()));
    }
    let alg = copy.algebra().clone();
    let i = copy.i().coords().to_vec();
    let (name, poly) = match target {
        Target::Comm(f) => {
            alg.check_same(f.algebra())?;
            (alg.name().to_string(), f.to_string())
        }
        Target::Nc(p, a0) => {
            alg.check_same(p.algebra())?;
            alg.check_same(a0.algebra())?;
            (alg.name().to_string(), p.to_string())
        }
    };
    let mut values = Vec::with_capacity(resolution * resolution);
    for iy in 0..resolution {
        for ix in 0..resolution {
            let (x, y) = (axis(region.0, region.1, resolution, ix), axis(region.2, region.3, resolution, iy));
            let z = circle_point(&alg, &i, x, y);
            let v = match target {
                Target::Comm(f) => f.eval(&Element::from_raw(alg.clone(), z))?.into_coords(),
                Target::Nc(p, a0) => p.eval_coords(&alg.mul_raw(&z, a0.coords())),
            };
            values.push(measure_coords(&alg, &v));
        }
    }
    Ok(Landscape {
        algebra: name,
        poly,
        region,
        resolution,
        values,
    })
}
