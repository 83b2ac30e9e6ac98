use altfta::algebra::{builtin, ComplexCopy};
use altfta::eigen::{
    complex_adjoint_quaternion, complex_eigenvalues, default_tol, multiset_distance, right_eigenpairs, spectrum,
    AlgebraMatrix, ComplexStructure, Side,
};
use altfta::fta::{find_singular_comm, SearchOptions};
use altfta::poly::CommPoly;
use altfta::Error;
use num_complex::Complex64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn linear_polynomials_have_their_root(re in -5.0f64..5.0, im in -5.0f64..5.0, a in 0.2f64..3.0, b in -3.0f64..3.0) {
        let c = builtin("C").unwrap();
        let ci = ComplexCopy::verify(c.basis(1)).unwrap();
        // (a + bi)(x - z0)
        let lead = Complex64::new(a, b);
        let z0 = Complex64::new(re, im);
        let k = -lead * z0;
        let f = CommPoly::from_coords(&c, vec![vec![k.re, k.im], vec![lead.re, lead.im]]).unwrap();
        let w = find_singular_comm(&f, &ci, &SearchOptions::default()).unwrap();
        prop_assert!(w.certified);
        prop_assert!((Complex64::new(w.z.0, w.z.1) - z0).norm() < 1e-8);
    }

    #[test]
    fn adjoint_spectrum_is_conjugation_closed(v in prop::collection::vec(-2.0f64..2.0, 36)) {
        let h = builtin("H").unwrap();
        let m = AlgebraMatrix::new(&h, 3, v.chunks(4).map(|w| h.element(w.to_vec()).unwrap()).collect()).unwrap();
        let ev = complex_eigenvalues(&complex_adjoint_quaternion(&m).unwrap()).unwrap();
        let conj: Vec<Complex64> = ev.iter().map(|z| z.conj()).collect();
        prop_assert!(multiset_distance(&ev, &conj) < 1e-9);
    }
}

#[test]
fn block_diagonal_doubles_multiplicity() {
    let h = builtin("H").unwrap();
    let ci = ComplexCopy::verify(h.basis(1)).unwrap();
    let q = h.element(vec![0.3, -1.0, 0.5, 2.0]).unwrap();
    let single = AlgebraMatrix::diagonal(&h, &[q.clone()]).unwrap();
    let double = AlgebraMatrix::diagonal(&h, &[q.clone(), q]).unwrap();
    let one = spectrum(&right_eigenpairs(&single, &ci, default_tol(&single)).unwrap());
    let two = right_eigenpairs(&double, &ci, default_tol(&double)).unwrap();
    assert!(two.iter().all(|p| p.multiplicity == 2));
    let doubled: Vec<Complex64> = one.iter().flat_map(|z| [*z, *z]).collect();
    assert!(multiset_distance(&spectrum(&two), &doubled) < 1e-10);
}

#[test]
fn identity_matrix_over_quaternions() {
    let h = builtin("H").unwrap();
    let ci = ComplexCopy::verify(h.basis(1)).unwrap();
    let m = AlgebraMatrix::identity(&h, 3);
    let ps = right_eigenpairs(&m, &ci, default_tol(&m)).unwrap();
    assert_eq!(ps.len(), 1);
    assert_eq!((ps[0].lambda, ps[0].multiplicity), ((1.0, 0.0), 6));
    assert!(ps[0].two_sided);
}

#[test]
fn sedenion_left_structure_can_fail() {
    let s = builtin("S16").unwrap();
    // A unit imaginary mixing both halves: I^2 = -1 but L_I^2 != -Id.
    let mut v = vec![0.0; 16];
    v[1] = 0.5;
    v[2] = 0.5;
    v[10] = 0.5;
    v[13] = 0.5;
    let c = ComplexCopy::verify(s.element(v).unwrap()).unwrap();
    assert!(matches!(
        ComplexStructure::new(&c, Side::Left, 1),
        Err(Error::NotComplexStructure { .. })
    ));
    // Basis units still square to -Id.
    let e1 = ComplexCopy::verify(s.basis(1)).unwrap();
    assert_eq!(ComplexStructure::new(&e1, Side::Left, 1).unwrap().complex_dim(), 8);
}
