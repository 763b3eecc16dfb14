use catfree_core::endo::EndWAutoDescriptor;
use catfree_core::module::{CategoryAction, CategoryAutoDescriptor, ModuleHom};
use catfree_core::verify::theorems::{parse_m2_label, M2_CONFIG_LABELS};
use catfree_core::verify::{
    lie_m2_assembly, lie_m3_skeleton_check, out_category_check, property_names, render_jsonl, run_property,
    run_suite, semi_inner_closure, semi_inner_inverse, Mutant, SemiInnerData, SuiteConfig,
};
use catfree_core::{Lcg64, Matrix, Ring};

fn ring(s: &str) -> Ring {
    s.parse().unwrap()
}

#[test]
fn default_battery_passes_and_is_deterministic() {
    let cfg = SuiteConfig::default();
    let a = run_suite(&cfg).unwrap();
    let failures: Vec<_> = a.iter().filter(|r| !r.pass).map(|r| (&r.id, &r.witness)).collect();
    assert!(failures.is_empty(), "{failures:?}");
    let b = run_suite(&cfg).unwrap();
    assert_eq!(render_jsonl(&a, cfg.seed), render_jsonl(&b, cfg.seed));
    let ids: Vec<&String> = a.iter().map(|r| &r.id).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(ids, sorted);
}

#[test]
fn every_property_runs_at_least_once() {
    let reports = run_suite(&SuiteConfig::default()).unwrap();
    for name in property_names() {
        assert!(reports.iter().any(|r| r.id.starts_with(&format!("{name}["))), "{name}");
    }
}

#[test]
fn the_mutant_breaks_functoriality_and_nothing_else() {
    let cfg = SuiteConfig { mutant: Some(Mutant::SigmaHatNoInverse), ..SuiteConfig::default() };
    let reports = run_suite(&cfg).unwrap();
    let failed: Vec<&str> = reports.iter().filter(|r| !r.pass).map(|r| r.id.as_str()).collect();
    assert!(!failed.is_empty());
    for r in reports.iter().filter(|r| !r.pass) {
        assert!(r.id.starts_with("mod.sigma_hat_functorial["), "{}", r.id);
        assert!(r.witness.as_deref().is_some_and(|w| !w.is_empty()));
    }
    // Rings without nontrivial automorphisms cannot notice the missing inverse.
    assert!(!failed.contains(&"mod.sigma_hat_functorial[gf(5)]"));
    assert!(failed.contains(&"mod.sigma_hat_functorial[gf(4)]"));
}

#[test]
fn different_seeds_give_different_samples() {
    let base = SuiteConfig::default();
    let other = SuiteConfig { seed: 42, ..SuiteConfig::default() };
    let a = run_property("mod.recover_roundtrip", "gf(8)", &base).unwrap();
    let b = run_property("mod.recover_roundtrip", "gf(8)", &other).unwrap();
    assert!(a.pass && b.pass);
    assert_ne!(a.mode, b.mode);
}

#[test]
fn config_overrides() {
    let cfg = SuiteConfig::from_toml("rings = [\"gf(3)\"]\nlie_fields = [\"gf(13)\"]\nseed = 7\nsamples = 3\n").unwrap();
    let reports = run_suite(&cfg).unwrap();
    assert!(reports.iter().all(|r| r.pass));
    assert!(reports.iter().all(|r| match &r.mode {
        catfree_core::verify::SampleMode::Random { seed, count } => *seed == 7 && *count == 3,
        catfree_core::verify::SampleMode::Exhaustive => true,
    }));
    assert!(SuiteConfig::from_toml("rings = [\"gf(6)\"]\nlie_fields = []\n").is_err());
    assert!(SuiteConfig::from_toml("rings = []\nlie_fields = [\"z(6)\"]\n").is_err());
    assert!(SuiteConfig::from_toml("rings = []\nlie_fields = []\nextra = 1\n").is_err());
}

#[test]
fn out_category_examples() {
    let cfg = SuiteConfig::default();
    for s in ["gf(4)", "z(6)", "m2(gf(2))"] {
        let r = out_category_check(&ring(s), &cfg);
        assert!(r.pass, "{s}: {:?}", r.witness);
    }
    assert_eq!(ring("gf(4)").out_group().unwrap().order(), 2);
    assert_eq!(ring("z(6)").out_group().unwrap().order(), 1);
    assert_eq!(ring("m2(gf(2))").out_group().unwrap().order(), 1);
}

#[test]
fn assembly_skeletons_on_the_documented_configurations() {
    let cfg = SuiteConfig::default();
    for label in M2_CONFIG_LABELS {
        let t = parse_m2_label(label).unwrap();
        let r = lie_m2_assembly(&t, &cfg);
        assert!(r.pass, "{label}: {:?}", r.witness);
    }
    let k = ring("gf(13)");
    assert!(!lie_m2_assembly(&EndWAutoDescriptor::identity(&ring("gf(7)")), &cfg).pass);
    assert!(lie_m2_assembly(&EndWAutoDescriptor::identity(&k), &cfg).pass);
    for s in ["gf(13)", "gf(16)", "gf(9)"] {
        let r = lie_m3_skeleton_check(&ring(s), &cfg);
        assert!(r.pass, "{s}: {:?}", r.witness);
    }
}

#[test]
fn closure_examples() {
    let k = ring("gf(4)");
    let frob = SemiInnerData::Module(CategoryAutoDescriptor::new(&k, k.frobenius(1).unwrap()));
    let SemiInnerData::Module(sq) = semi_inner_closure(&frob, &frob).unwrap() else { panic!() };
    assert!(sq.sigma().is_identity());
    let nu = ModuleHom::new(2, 2, Matrix::parse(&k, "[[t,1],[0,t+1]]").unwrap()).unwrap();
    assert_eq!(sq.act(&nu), nu);

    let mut rng = Lcg64::new(2);
    let a = CategoryAutoDescriptor::new(&k, k.frobenius(1).unwrap()).with_random_twists(&mut rng, 3);
    let data = SemiInnerData::Module(a.clone());
    let SemiInnerData::Module(id) = semi_inner_closure(&data, &semi_inner_inverse(&data)).unwrap() else { panic!() };
    assert!(id.sigma().is_identity());
    for r in 1..=3 {
        assert_eq!(id.twist(r), ModuleHom::identity(&k, r));
    }

    let inner = |rng: &mut Lcg64| {
        SemiInnerData::Module(CategoryAutoDescriptor::new(&k, k.identity_aut()).with_random_twists(rng, 2))
    };
    let (p, q) = (inner(&mut rng), inner(&mut rng));
    let SemiInnerData::Module(pq) = semi_inner_closure(&p, &q).unwrap() else { panic!() };
    assert!(pq.sigma().is_identity());

    let other = SemiInnerData::Module(CategoryAutoDescriptor::new(&ring("gf(2)"), ring("gf(2)").identity_aut()));
    assert!(semi_inner_closure(&data, &other).is_err());
    let lie = SemiInnerData::Lie(EndWAutoDescriptor::identity(&k));
    assert!(semi_inner_closure(&data, &lie).is_err());
}
