use catfree_core::endo::{
    contragredient, contragredient_conjugator, d_endo, dieudonne_case1, dieudonne_case2, endo_apply, endo_compose,
    gl2, l_endo, linear_part, phi_lambda, semi_inner_endw, swap, CharacterMap, EndWAutoDescriptor, LieEndo, LieHom,
};
use catfree_core::lie::{bracket, FreeLie};
use catfree_core::{Lcg64, Matrix, Ring};
use proptest::prelude::*;

fn ring(s: &str) -> Ring {
    s.parse().unwrap()
}

fn random_endo(lie: &FreeLie, rng: &mut Lcg64) -> LieEndo {
    LieHom::endo(lie.random_element(rng, 3, 3), lie.random_element(rng, 3, 3)).unwrap()
}

fn lie_fields() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["gf(3)", "gf(4)", "gf(9)", "gf(13)", "gf(16)"])
}

#[test]
fn contragredient_is_conjugation_on_sl2_f3() {
    let k = ring("gf(3)");
    let c = contragredient_conjugator(&k);
    let ci = c.inverse(&k).unwrap();
    let sl2: Vec<Matrix> = gl2(&k).into_iter().filter(|b| b.det(&k).unwrap() == k.one()).collect();
    assert_eq!(sl2.len(), 24);
    for b in &sl2 {
        assert_eq!(contragredient(&k, b).unwrap(), c.mul(&k, b).unwrap().mul(&k, &ci).unwrap());
    }
}

#[test]
fn gl2_orders() {
    let sizes: Vec<usize> = ["gf(2)", "gf(3)", "gf(4)", "gf(5)"].iter().map(|s| gl2(&ring(s)).len()).collect();
    assert_eq!(sizes, [6, 48, 180, 480]);
}

#[test]
fn characters_factor_through_the_determinant() {
    let k = ring("gf(9)");
    let chis = CharacterMap::all(&k);
    assert_eq!(chis.len(), 8);
    let mut rng = Lcg64::new(5);
    let f = k.frobenius(1).unwrap();
    for chi in &chis {
        for _ in 0..20 {
            let b = Matrix::random_invertible(&k, &mut rng, 2);
            assert_eq!(chi.apply(&b).unwrap(), chi.theta(b.det(&k).unwrap()));
            assert_eq!(chi.after(&f).apply(&b).unwrap(), chi.apply(&b.apply_aut(&f)).unwrap());
        }
    }
}

#[test]
fn d_chain_over_gf13_on_the_basis() {
    let lie = FreeLie::xy(&ring("gf(13)")).unwrap();
    let k = lie.field().clone();
    let xy = lie.parse("[x,y]").unwrap();
    let y = lie.generator(1);
    for d in 1..=4 {
        for m in lie.basis(d).unwrap().iter() {
            let v = catfree_core::lie::LieElement::monomial(&k, m.clone(), k.one());
            let lhs = endo_compose(&d_endo(&v), &d_endo(&xy)).unwrap();
            assert_eq!(lhs, d_endo(&bracket(&v, &y).unwrap()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn endomorphisms_preserve_brackets(label in lie_fields(), seed in any::<u64>()) {
        let lie = FreeLie::xy(&ring(label)).unwrap();
        let mut rng = Lcg64::new(seed);
        let e = LieHom::endo(lie.random_element(&mut rng, 2, 3), lie.random_element(&mut rng, 2, 3)).unwrap();
        let a = lie.random_element(&mut rng, 2, 2);
        let b = lie.random_element(&mut rng, 3, 2);
        let lhs = endo_apply(&e, &bracket(&a, &b).unwrap()).unwrap();
        let rhs = bracket(&endo_apply(&e, &a).unwrap(), &endo_apply(&e, &b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn composition_applies_right_factor_first(label in lie_fields(), seed in any::<u64>()) {
        let lie = FreeLie::xy(&ring(label)).unwrap();
        let mut rng = Lcg64::new(seed);
        let f = LieHom::endo(lie.random_element(&mut rng, 2, 2), lie.random_element(&mut rng, 2, 2)).unwrap();
        let g = LieHom::endo(lie.random_element(&mut rng, 2, 2), lie.random_element(&mut rng, 2, 2)).unwrap();
        let w = lie.random_element(&mut rng, 2, 2);
        let fg = endo_compose(&f, &g).unwrap();
        prop_assert_eq!(endo_apply(&fg, &w).unwrap(), endo_apply(&f, &endo_apply(&g, &w).unwrap()).unwrap());
    }

    #[test]
    fn l_endo_reverses_products(label in lie_fields(), seed in any::<u64>()) {
        let k = ring(label);
        let mut rng = Lcg64::new(seed);
        let a = Matrix::random(&k, &mut rng, 2, 2);
        let b = Matrix::random(&k, &mut rng, 2, 2);
        let lhs = endo_compose(&l_endo(&k, &a).unwrap(), &l_endo(&k, &b).unwrap()).unwrap();
        prop_assert_eq!(lhs, l_endo(&k, &b.mul(&k, &a).unwrap()).unwrap());
        prop_assert_eq!(linear_part(&l_endo(&k, &a).unwrap()), (a, true));
    }

    #[test]
    fn semi_inner_maps_are_multiplicative(label in lie_fields(), seed in any::<u64>()) {
        let k = ring(label);
        let lie = FreeLie::xy(&k).unwrap();
        let mut rng = Lcg64::new(seed);
        let auts = k.automorphisms().unwrap();
        let delta = rng.pick(&auts).clone();
        let tau = l_endo(&k, &Matrix::random_invertible(&k, &mut rng, 2)).unwrap();
        let (a, b) = (random_endo(&lie, &mut rng), random_endo(&lie, &mut rng));
        let t = |e: &LieEndo| semi_inner_endw(&delta, &tau, e).unwrap();
        prop_assert_eq!(t(&endo_compose(&a, &b).unwrap()), endo_compose(&t(&a), &t(&b)).unwrap());
        prop_assert_eq!(t(&LieHom::identity(&k, 2)), LieHom::identity(&k, 2));
    }

    #[test]
    fn descriptors_compose_invert_and_keep_d(label in prop::sample::select(vec!["gf(13)", "gf(16)", "gf(9)"]), seed in any::<u64>()) {
        let k = ring(label);
        let lie = FreeLie::xy(&k).unwrap();
        let mut rng = Lcg64::new(seed);
        let auts = k.automorphisms().unwrap();
        let descriptor = |rng: &mut Lcg64| {
            let lambda = *rng.pick(&k.nonzero());
            EndWAutoDescriptor::new(&k, rng.pick(&auts).clone(), Matrix::random_invertible(&k, rng, 2), lambda).unwrap()
        };
        let (a, b) = (descriptor(&mut rng), descriptor(&mut rng));
        let beta = random_endo(&lie, &mut rng);
        prop_assert_eq!(a.compose(&b).unwrap().act(&beta).unwrap(), a.act(&b.act(&beta).unwrap()).unwrap());
        prop_assert_eq!(a.inverse().act(&a.act(&beta).unwrap()).unwrap(), beta);
        let l = l_endo(&k, &Matrix::random(&k, &mut rng, 2, 2)).unwrap();
        prop_assert!(linear_part(&a.act(&l).unwrap()).1);
    }

    #[test]
    fn phi_lambda_grades_by_y_content(label in lie_fields(), seed in any::<u64>()) {
        let k = ring(label);
        let lie = FreeLie::xy(&k).unwrap();
        let mut rng = Lcg64::new(seed);
        let lambda = *rng.pick(&k.nonzero());
        let w = lie.random_element(&mut rng, 5, 4);
        let expect = catfree_core::lie::LieElement::from_terms(
            &k,
            w.terms().map(|(m, c)| (m.clone(), k.mul(c, k.pow(lambda, m.content(1) as u64)))),
        );
        prop_assert_eq!(endo_apply(&phi_lambda(&k, lambda), &w).unwrap(), expect);
        let s = swap(&k);
        prop_assert_eq!(endo_apply(&s, &endo_apply(&s, &w).unwrap()).unwrap(), w);
    }

    #[test]
    fn dieudonne_maps_are_multiplicative(label in prop::sample::select(vec!["gf(3)", "gf(4)", "gf(5)", "gf(7)"]), seed in any::<u64>()) {
        let k = ring(label);
        let mut rng = Lcg64::new(seed);
        let chis = CharacterMap::all(&k);
        let auts = k.automorphisms().unwrap();
        let chi = rng.pick(&chis).clone();
        let f = rng.pick(&auts).clone();
        let tau = Matrix::random_invertible(&k, &mut rng, 2);
        let a = Matrix::random_invertible(&k, &mut rng, 2);
        let b = Matrix::random_invertible(&k, &mut rng, 2);
        let ab = a.mul(&k, &b).unwrap();
        for s in [dieudonne_case1, dieudonne_case2] {
            let lhs = s(&chi, &tau, &f, &ab).unwrap();
            let rhs = s(&chi, &tau, &f, &a).unwrap().mul(&k, &s(&chi, &tau, &f, &b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
