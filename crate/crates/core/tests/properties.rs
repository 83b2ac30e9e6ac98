use altfta::algebra::{builtin, center, find_complex_copy, invert, nucleus, ComplexCopy, CopySearch, Element};
use altfta::eigen::{default_tol, left_eigenpairs, residuals, right_eigenpairs, AlgebraMatrix};
use altfta::fta::{find_singular_comm, landscape, search_radius, singularity_measure, SearchOptions, Target};
use altfta::identities::{
    check_left_alternative, check_moufang, check_right_alternative, check_skornyakov, witness_residual, CheckConfig,
    Side, Status, FAIL_FACTOR,
};
use altfta::norms::{circle_invariant_norm, scale_to_algebra_norm, unitalize_norm, CircleSide, NormSpec};
use altfta::poly::{expand_in_scalar, parse_comm, CommPoly, NCPoly, Node};
use altfta::Algebra;
use proptest::prelude::*;

fn coords(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0f64..3.0, n)
}

fn el(a: &Algebra, v: Vec<f64>) -> Element {
    a.element(v).unwrap()
}

fn rel_close(x: &[f64], y: &[f64], tol: f64) -> bool {
    let scale = x.iter().chain(y).fold(1.0f64, |m, v| m.max(v.abs()));
    x.iter().zip(y).all(|(p, q)| (p - q).abs() <= tol * scale)
}

const ALGEBRAS: [&str; 6] = ["H", "O", "S16", "mat2r", "mat2c", "upper2"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiplication_is_bilinear(k in 0usize..ALGEBRAS.len(), alpha in -4.0f64..4.0, seed in coords(48)) {
        let a = builtin(ALGEBRAS[k]).unwrap();
        let d = a.real_dim();
        let x = el(&a, seed[..d].to_vec());
        let x2 = el(&a, seed[d..2 * d].iter().rev().copied().collect());
        let y = el(&a, seed[2 * d..3 * d].to_vec());
        let lhs = (&x.scale(alpha) + &x2).mul(&y).unwrap();
        let rhs = &x.mul(&y).unwrap().scale(alpha) + &x2.mul(&y).unwrap();
        prop_assert!(rel_close(lhs.coords(), rhs.coords(), 1e-10));
        let via_op = &x.left_mult_operator() * nalgebra::DVector::from_column_slice(y.coords());
        prop_assert!(rel_close(via_op.as_slice(), x.mul(&y).unwrap().coords(), 1e-12));
    }

    #[test]
    fn double_inverse(k in 0usize..3, v in coords(8)) {
        let a = builtin(["H", "O", "C"][k]).unwrap();
        let x = el(&a, v[..a.real_dim()].to_vec());
        prop_assume!(x.norm2() > 1e-3);
        let back = invert(&invert(&x, 1e-10).unwrap(), 1e-10).unwrap();
        prop_assert!(rel_close(back.coords(), x.coords(), 1e-8));
    }

    #[test]
    fn quaternion_hints_verify(v in coords(3)) {
        let h = builtin("H").unwrap();
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        prop_assume!(n > 1e-3);
        let hint = el(&h, vec![0.0, v[0] / n, v[1] / n, v[2] / n]);
        let c = find_complex_copy(&h, Some(&hint), &CopySearch::default()).unwrap();
        prop_assert!(c.verification_residual() < 1e-10);
        prop_assert!(c.nuclear() && !c.central());
    }

    #[test]
    fn scaled_norms_are_submultiplicative(k in 0usize..4, s in 0usize..3, v in coords(32)) {
        let a = builtin(["H", "O", "mat2r", "upper2"][k]).unwrap();
        let spec = [NormSpec::L1, NormSpec::L2, NormSpec::Linf][s].clone();
        let n = scale_to_algebra_norm(&a, &spec).unwrap();
        let d = a.real_dim();
        let x = el(&a, v[..d].to_vec());
        let y = el(&a, v[16..16 + d].to_vec());
        let lhs = n.eval(&x.mul(&y).unwrap()).unwrap();
        prop_assert!(lhs <= (1.0 + 1e-9) * n.eval(&x).unwrap() * n.eval(&y).unwrap() + 1e-300);
        // c1 |x| <= |x|_1 <= c2 |x| with |x| the unscaled vector norm.
        let m = n.meta();
        let l1: f64 = x.coords().iter().map(|t| t.abs()).sum();
        let raw = n.vector_norm_eval(x.coords()).unwrap();
        prop_assert!(m.c1 * raw <= l1 * (1.0 + 1e-12) && l1 <= m.c2 * raw * (1.0 + 1e-12));
    }

    #[test]
    fn unitalized_norms_stay_submultiplicative(v in coords(8)) {
        let a = builtin("mat2r").unwrap();
        let n = unitalize_norm(&a, &scale_to_algebra_norm(&a, &NormSpec::L1).unwrap()).unwrap();
        let x = el(&a, v[..4].to_vec());
        let y = el(&a, v[4..].to_vec());
        prop_assert!(n.eval(&x.mul(&y).unwrap()).unwrap() <= (1.0 + 1e-9) * n.eval(&x).unwrap() * n.eval(&y).unwrap() + 1e-300);
    }

    #[test]
    fn nc_evaluation_is_additive(v in coords(8), c in coords(8)) {
        let h = builtin("H").unwrap();
        let a = el(&h, v[..4].to_vec());
        let k1 = Node::Const(el(&h, c[..4].to_vec()));
        let k2 = Node::Const(el(&h, c[4..].to_vec()));
        let p = NCPoly::new(&h, vec![Node::mul(Node::mul(k1.clone(), Node::Var), Node::Var), k2.clone()]).unwrap();
        let q = NCPoly::new(&h, vec![Node::mul(Node::Var, Node::mul(k2, Node::Var)), Node::mul(Node::Var, k1)]).unwrap();
        let sum = p.add(&q).unwrap().eval(&a).unwrap();
        let parts = &p.eval(&a).unwrap() + &q.eval(&a).unwrap();
        prop_assert!(rel_close(sum.coords(), parts.coords(), 1e-12));
        prop_assert_eq!(p.leading_part().degree(), p.degree());
    }

    #[test]
    fn scalar_expansion_recombines(x in -2.0f64..2.0, y in -2.0f64..2.0, c in coords(6)) {
        let h = builtin("H").unwrap();
        let ci = ComplexCopy::verify(h.basis(1)).unwrap();
        let k = |a: f64, b: f64| Node::Const(el(&h, vec![a, b, 0.0, 0.0]));
        let p = NCPoly::new(&h, vec![
            Node::mul(Node::mul(Node::Var, k(c[0], c[1])), Node::Var),
            Node::mul(k(c[2], c[3]), Node::Var),
            k(c[4], c[5]),
        ]).unwrap();
        let a0 = el(&h, vec![0.7, -0.2, 0.0, 0.0]);
        let coeffs = expand_in_scalar(&p, &a0, &ci).unwrap();
        let z = ci.embed(x, y);
        let mut acc = h.zero();
        let mut pow = h.unit();
        for ck in &coeffs {
            acc = &acc + &pow.mul(ck).unwrap();
            pow = pow.mul(&z).unwrap();
        }
        let direct = p.eval(&z.mul(&a0).unwrap()).unwrap();
        prop_assert!(rel_close(acc.coords(), direct.coords(), 1e-8));
    }

    #[test]
    fn comm_poly_display_round_trips(c in coords(12), deg in 0usize..3) {
        let h = builtin("H").unwrap();
        let f = CommPoly::from_coords(&h, (0..=deg).map(|k| c[4 * k..4 * k + 4].to_vec()).collect()).unwrap();
        let g = parse_comm(&h, &f.to_string()).unwrap();
        prop_assert_eq!(f, g);
    }

    #[test]
    fn measure_is_positive_outside_radius(c in coords(12), phi in 0.0f64..std::f64::consts::TAU, t in 1.0f64..4.0) {
        let o = builtin("O").unwrap();
        let e1 = ComplexCopy::verify(o.basis(1)).unwrap();
        let mut coeffs: Vec<Vec<f64>> = c.chunks(4).map(|w| {
            let mut v = vec![0.0; 8];
            v[..4].copy_from_slice(w);
            v
        }).collect();
        coeffs[2][0] += 5.0;
        let f = CommPoly::from_coords(&o, coeffs).unwrap();
        let r = search_radius(f.coeffs(), &e1).unwrap();
        let z = e1.embed(t * r * phi.cos(), t * r * phi.sin());
        prop_assert!(singularity_measure(&f.eval(&z).unwrap()) > 0.0);
    }

    #[test]
    fn right_eigen_scaling(v in coords(16), s in 0.1f64..10.0) {
        let h = builtin("H").unwrap();
        let ci = ComplexCopy::verify(h.basis(1)).unwrap();
        let m = AlgebraMatrix::new(&h, 2, v.chunks(4).map(|w| el(&h, w.to_vec())).collect()).unwrap();
        let ps = right_eigenpairs(&m, &ci, default_tol(&m)).unwrap();
        let sm = m.scale(s);
        let qs = right_eigenpairs(&sm, &ci, default_tol(&sm)).unwrap();
        prop_assert_eq!(ps.len(), qs.len());
        for (p, q) in ps.iter().zip(&qs) {
            prop_assert!((p.lambda.0 * s - q.lambda.0).abs() < 1e-7 * (1.0 + s) && (p.lambda.1 * s - q.lambda.1).abs() < 1e-7 * (1.0 + s));
            let (_, r) = residuals(&m, &ci, p.lambda, &p.x).unwrap();
            prop_assert!((r - p.residual_right).abs() < 1e-15);
        }
    }

    #[test]
    fn central_copies_give_two_sided_pairs(v in coords(32)) {
        let a = builtin("mat2c").unwrap();
        let mut i = vec![0.0; 8];
        i[4] = 1.0;
        i[7] = 1.0;
        let ci = ComplexCopy::verify(el(&a, i)).unwrap();
        let m = AlgebraMatrix::new(&a, 2, v.chunks(8).map(|w| el(&a, w.to_vec())).collect()).unwrap();
        let ps = left_eigenpairs(&m, &ci, default_tol(&m)).unwrap();
        prop_assert!(ps.iter().all(|p| p.two_sided));
        prop_assert_eq!(ps.iter().map(|p| p.multiplicity).sum::<usize>(), 8);
    }
}

#[test]
fn center_lies_in_nucleus_for_one_sided_alternative_algebras() {
    let cfg = CheckConfig::default();
    for name in ["R", "C", "H", "O", "mat2r", "mat2c", "upper2"] {
        let a = builtin(name).unwrap();
        if check_left_alternative(&a, &cfg).holds() || check_right_alternative(&a, &cfg).holds() {
            assert!(center(&a).is_subspace_of(&nucleus(&a)), "{name}");
        }
    }
}

#[test]
fn identity_implications_and_witnesses() {
    let cfg = CheckConfig::default();
    for name in ["H", "O", "S16", "mat2r", "upper2"] {
        let a = builtin(name).unwrap();
        let la = check_left_alternative(&a, &cfg);
        let ra = check_right_alternative(&a, &cfg);
        let mut all = vec![la.clone(), ra.clone()];
        all.extend(check_moufang(&a, &cfg));
        all.extend(check_skornyakov(&a, Side::Left, &cfg));
        if la.status == Status::HoldsExact && ra.status == Status::HoldsExact {
            assert!(check_moufang(&a, &cfg).iter().all(|r| r.holds()), "{name}");
        }
        if la.status == Status::HoldsExact {
            assert!(check_skornyakov(&a, Side::Left, &cfg).iter().all(|r| r.holds()), "{name}");
        }
        for r in all.iter().filter(|r| r.status == Status::Fails) {
            let res = witness_residual(&a, r).unwrap();
            assert!(res > FAIL_FACTOR * r.tolerance, "{name} {}", r.identity_name);
            assert_eq!(r.seed, cfg.seed);
        }
    }
}

#[test]
fn circle_grid_refinement_is_monotone() {
    let h = builtin("H").unwrap();
    let c = ComplexCopy::verify(h.basis(2)).unwrap();
    let mut last = 0.0;
    for grid in [8, 16, 32, 64] {
        let n = circle_invariant_norm(&h, &c, &NormSpec::Linf, CircleSide::Both, grid).unwrap();
        let v = n.meta().c.unwrap();
        assert!(v >= last - 1e-12, "grid {grid}: {v} < {last}");
        last = v;
    }
}

#[test]
fn nested_landscape_minima_decrease() {
    let o = builtin("O").unwrap();
    let e1 = ComplexCopy::verify(o.basis(1)).unwrap();
    let f = parse_comm(&o, "e2*x^2 + e3*x + 0.3").unwrap();
    let mut last = f64::INFINITY;
    for res in [5, 9, 17, 33, 65] {
        let l = landscape(Target::Comm(&f), &e1, (-2.0, 2.0, -2.0, 2.0), res).unwrap();
        let m = l.values.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(m <= last);
        last = m;
    }
}

#[test]
fn witness_reevaluation_is_exact() {
    let h = builtin("H").unwrap();
    let ci = ComplexCopy::verify(h.basis(1)).unwrap();
    let f = parse_comm(&h, "x^3 - 2*x + (0.5,1,0,0)").unwrap();
    let w = find_singular_comm(&f, &ci, &SearchOptions::default()).unwrap();
    let again = singularity_measure(&f.eval(&w.point).unwrap());
    assert!((again - w.sigma_min).abs() <= 1e-12);
    let twice = find_singular_comm(&f, &ci, &SearchOptions::default()).unwrap();
    assert_eq!(serde_json::to_string(&w).unwrap(), serde_json::to_string(&twice).unwrap());
}
