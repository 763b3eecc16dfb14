use catfree_core::decomp::{
    case2_equivalent, classify_gl2_aut, recover_matrix_aut, validate_gl2_map, MatrixSemigroupAuto,
};
use catfree_core::endo::{contragredient, dieudonne_case1, gl2, CharacterMap};
use catfree_core::{Lcg64, Matrix, Ring};
use proptest::prelude::*;

fn ring(s: &str) -> Ring {
    s.parse().unwrap()
}

#[test]
fn every_conjugation_of_m2_f2_round_trips_exhaustively() {
    let k = ring("gf(2)");
    for phi in gl2(&k) {
        let f = MatrixSemigroupAuto::conjugation(&k, k.identity_aut(), phi.clone()).unwrap();
        let r = recover_matrix_aut(&f, &mut Lcg64::new(0)).unwrap();
        assert_eq!((r.gamma.is_identity(), r.phi, r.verified_on), (true, phi, 16));
    }
}

#[test]
fn black_box_reproduces_the_input_on_every_matrix() {
    let k = ring("gf(4)");
    let mut rng = Lcg64::new(8);
    let frob = k.frobenius(1).unwrap();
    let phi = Matrix::random_invertible(&k, &mut rng, 2);
    let f = MatrixSemigroupAuto::conjugation(&k, frob.clone(), phi.clone()).unwrap();
    let r = recover_matrix_aut(&f, &mut rng).unwrap();
    assert_eq!(r.gamma, frob);
    let g = MatrixSemigroupAuto::conjugation(&k, r.gamma.clone(), r.phi.clone()).unwrap();
    for a in Matrix::all(&k, 2, 2) {
        assert_eq!(f.apply(&a), g.apply(&a));
    }
    assert_eq!(r.verified_on, 256);
}

#[test]
fn non_multiplicative_maps_are_rejected() {
    let k = ring("gf(3)");
    let f = MatrixSemigroupAuto::new(&k, 2, |a: &Matrix| a.transpose());
    assert!(recover_matrix_aut(&f, &mut Lcg64::new(1)).is_err());
    let s = |b: &Matrix| b.transpose();
    assert!(validate_gl2_map(&k, &s, &mut Lcg64::new(1)).is_err());
}

#[test]
fn conjugation_and_contragredient_over_gf3() {
    let k = ring("gf(3)");
    let u = Matrix::parse(&k, "[[1,1],[0,1]]").unwrap();
    let ui = u.inverse(&k).unwrap();
    let s = move |b: &Matrix| u.mul(&ring("gf(3)"), b).unwrap().mul(&ring("gf(3)"), &ui).unwrap();
    let r = classify_gl2_aut(&k, &s, &mut Lcg64::new(0)).unwrap();
    assert_eq!(r.case_tag, Some(1));
    assert!(r.chi.unwrap().is_trivial() && r.gamma.is_identity());
    assert_eq!(r.phi.format(&k), "[[1,1],[0,1]]");

    let kk = k.clone();
    let tilde = move |b: &Matrix| contragredient(&kk, b).unwrap();
    let r = classify_gl2_aut(&k, &tilde, &mut Lcg64::new(0)).unwrap();
    assert_eq!(r.case_tag, Some(2));
    assert!(r.chi.unwrap().is_trivial());
    assert!(r.phi.is_identity(&k));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn matrix_automorphisms_round_trip(
        (label, n) in prop::sample::select(vec![("gf(4)", 2usize), ("gf(2)", 3), ("gf(3)", 2), ("gf(9)", 2)]),
        seed in any::<u64>(),
    ) {
        let k = ring(label);
        let mut rng = Lcg64::new(seed);
        let auts = k.automorphisms().unwrap();
        let gamma = rng.pick(&auts).clone();
        let phi = Matrix::random_invertible(&k, &mut rng, n);
        let c = *rng.pick(&k.nonzero());
        let f = MatrixSemigroupAuto::conjugation(&k, gamma.clone(), phi.clone()).unwrap();
        let scaled = MatrixSemigroupAuto::conjugation(&k, gamma.clone(), phi.scale(&k, c)).unwrap();
        let r = recover_matrix_aut(&f, &mut rng).unwrap();
        prop_assert_eq!(&r.gamma, &gamma);
        prop_assert_eq!(&r.phi, &phi.normalize_scalar(&k));
        prop_assert_eq!(recover_matrix_aut(&scaled, &mut rng).unwrap().phi, r.phi);
        prop_assert!(k.check_automorphism(r.gamma.table()).is_ok());
    }

    #[test]
    fn gl2_case1_classification_round_trips(label in prop::sample::select(vec!["gf(2)", "gf(3)", "gf(4)", "gf(5)"]), seed in any::<u64>()) {
        let k = ring(label);
        let mut rng = Lcg64::new(seed);
        let chis = CharacterMap::all(&k);
        let auts = k.automorphisms().unwrap();
        let chi = rng.pick(&chis).clone();
        let f = rng.pick(&auts).clone();
        let tau = Matrix::random_invertible(&k, &mut rng, 2);
        let (c2, t2, f2) = (chi.clone(), tau.clone(), f.clone());
        let s = move |b: &Matrix| dieudonne_case1(&c2, &t2, &f2, b).unwrap();
        let r = classify_gl2_aut(&k, &s, &mut rng).unwrap();
        prop_assert_eq!(&r.gamma, &f);
        let alt = case2_equivalent(&k, &chi, &tau, &f).unwrap();
        let got = (r.chi.clone().unwrap(), r.phi.clone());
        match r.case_tag {
            Some(1) => prop_assert_eq!(got, (chi, tau.normalize_scalar(&k))),
            Some(2) => prop_assert_eq!(got, alt),
            other => prop_assert!(false, "case tag {:?}", other),
        }
        prop_assert!(r.multiplicity >= 1);
    }
}
