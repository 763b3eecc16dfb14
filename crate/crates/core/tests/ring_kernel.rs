use catfree_core::{Elem, Lcg64, Ring};
use proptest::prelude::*;

fn ring(s: &str) -> Ring {
    s.parse().unwrap()
}

/// Every permutation of `0..n` fixing the first `fixed` points.
fn permutations(n: usize, fixed: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            prefix.push(x);
            go(prefix, rest, out);
            prefix.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    go(&mut (0..fixed).collect(), &mut (fixed..n).collect(), &mut out);
    out
}

/// Ring automorphisms by brute force over all bijections.
fn brute_force_auts(k: &Ring) -> usize {
    let elems: Vec<Elem> = k.elements().collect();
    let idx = |e: Elem| elems.iter().position(|&x| x == e).unwrap();
    assert_eq!((idx(k.zero()), idx(k.one())), (0, 1));
    permutations(elems.len(), 2)
        .into_iter()
        .filter(|p| {
            elems.iter().all(|&a| {
                elems.iter().all(|&b| {
                    let f = |e: Elem| elems[p[idx(e)]];
                    f(k.add(a, b)) == k.add(f(a), f(b)) && f(k.mul(a, b)) == k.mul(f(a), f(b))
                })
            })
        })
        .count()
}

#[test]
fn automorphism_counts_match_brute_force() {
    for s in ["gf(2)", "gf(3)", "gf(4)", "gf(5)", "gf(7)", "gf(8)", "z(6)", "z(8)"] {
        let k = ring(s);
        assert_eq!(k.automorphisms().unwrap().len(), brute_force_auts(&k), "{s}");
    }
}

#[test]
fn automorphism_counts_of_the_battery() {
    let counts: Vec<usize> = ["gf(4)", "gf(8)", "gf(9)", "gf(16)", "gf(27)", "z(6)", "z(8)", "m2(gf(2))"]
        .iter()
        .map(|s| ring(s).automorphisms().unwrap().len())
        .collect();
    assert_eq!(counts, [2, 3, 2, 4, 3, 1, 1, 6]);
}

#[test]
fn m2_gf2_automorphisms_are_all_inner() {
    let k = ring("m2(gf(2))");
    let inner: Vec<_> = k.units().iter().map(|&u| k.inner_aut(u).unwrap()).collect();
    for s in k.automorphisms().unwrap() {
        assert!(inner.iter().any(|i| i.table() == s.table()));
    }
    let out = k.out_group().unwrap();
    assert_eq!((out.order(), out.inner_count, out.aut_count), (1, 6, 6));
}

#[test]
fn out_group_of_gf4_is_cyclic_of_order_two() {
    let k = ring("gf(4)");
    let out = k.out_group().unwrap();
    assert_eq!(out.order(), 2);
    assert_eq!(out.table, vec![vec![0, 1], vec![1, 0]]);
}

#[test]
fn field_sizes_and_units() {
    for q in [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27] {
        let k = ring(&format!("gf({q})"));
        assert_eq!((k.size(), k.units().len()), (q, q - 1));
        let g = k.primitive_element().unwrap();
        assert_eq!(k.unit_order(g), Some(q as u64 - 1));
    }
    let units: Vec<u32> = ring("z(12)").units().iter().map(|&u| ring("z(12)").coords(u)[0]).collect();
    assert_eq!(units, [1, 5, 7, 11]);
}

#[test]
fn bad_specs_are_rejected() {
    for s in ["gf(6)", "z(1)", "gf(1024)", "m2(z(6))", "q(3)"] {
        assert!(s.parse::<Ring>().is_err(), "{s}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms_hold(label in prop::sample::select(vec!["gf(9)", "gf(16)", "gf(25)", "gf(27)"]), seed in any::<u64>()) {
        let k = ring(label);
        let mut rng = Lcg64::new(seed);
        let mut pick = || k.elements().nth(rng.below(k.size())).unwrap();
        for _ in 0..50 {
            let (a, b, c) = (pick(), pick(), pick());
            prop_assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
            prop_assert_eq!(k.mul(k.mul(a, b), c), k.mul(a, k.mul(b, c)));
            prop_assert_eq!(k.mul(a, b), k.mul(b, a));
            if a != k.zero() {
                prop_assert_eq!(k.mul(a, k.inv(a).unwrap()), k.one());
            }
        }
    }

    #[test]
    fn frobenius_is_the_pth_power(label in prop::sample::select(vec!["gf(4)", "gf(8)", "gf(9)", "gf(27)"]), i in 0usize..27) {
        let k = ring(label);
        let a = k.elements().nth(i % k.size()).unwrap();
        let frob = k.frobenius(1).unwrap();
        prop_assert_eq!(frob.apply(a), k.pow(a, k.characteristic() as u64));
        prop_assert_eq!(frob.apply_inverse(frob.apply(a)), a);
    }

    #[test]
    fn literals_round_trip(label in prop::sample::select(vec!["gf(9)", "gf(16)", "z(8)", "m2(gf(2))"]), i in 0usize..16) {
        let k = ring(label);
        let a = k.elements().nth(i % k.size()).unwrap();
        prop_assert_eq!(k.parse_elem(&k.format(a)).unwrap(), a);
    }

    #[test]
    fn from_int_is_a_ring_map(label in prop::sample::select(vec!["gf(7)", "gf(9)", "z(6)", "m2(gf(2))"]), m in -50i64..50, n in -50i64..50) {
        let k = ring(label);
        prop_assert_eq!(k.from_int(m + n), k.add(k.from_int(m), k.from_int(n)));
        prop_assert_eq!(k.from_int(m * n), k.mul(k.from_int(m), k.from_int(n)));
    }

    #[test]
    fn inner_automorphisms_compose(i in 0usize..6, j in 0usize..6) {
        let k = ring("m2(gf(2))");
        let units = k.units();
        let (u, v) = (units[i], units[j]);
        let lhs = k.inner_aut(u).unwrap().compose(&k.inner_aut(v).unwrap());
        prop_assert_eq!(lhs, k.inner_aut(k.mul(u, v)).unwrap());
    }
}
