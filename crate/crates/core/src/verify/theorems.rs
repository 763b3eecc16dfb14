//! Constructive checks of the structure theorems: closure of semi-inner
//! data, the outer-automorphism correspondence for module categories, and
//! the assembly steps for automorphisms of `End W`.

use super::{ensure, execute, CheckResult, PropertyReport, SuiteConfig};
use crate::endo::{
    delta_hat, endo_apply, endo_compose, l_endo, linear_inverse, linear_part, swap, EndWAutoDescriptor, LieHom,
};
use crate::error::{Error, Result};
use crate::lie::{FreeLie, LieElement, LyndonMonomial};
use crate::matrix::Matrix;
use crate::module::{recover_ring_aut, CategoryAction, CategoryAutoDescriptor, ModuleHom};
use crate::ring::{Elem, Ring, RingAut};
use crate::rng::Lcg64;

/// Highest rank used when sampling homs between free modules.
pub const SAMPLE_RANK: usize = 3;

/// Semi-inner data on either side.
#[derive(Debug, Clone)]
pub enum SemiInnerData {
    /// `σ` with one twist per rank.
    Module(CategoryAutoDescriptor),
    /// `(δ, τ, λ)` acting on `End W`.
    Lie(EndWAutoDescriptor),
}

/// Data whose action is the action of `a` after that of `b`.
pub fn semi_inner_closure(a: &SemiInnerData, b: &SemiInnerData) -> Result<SemiInnerData> {
    let same = |x: &Ring, y: &Ring| if x == y { Ok(()) } else { Err(Error::RingMismatch(x.to_string(), y.to_string())) };
    match (a, b) {
        (SemiInnerData::Module(a), SemiInnerData::Module(b)) => {
            same(a.ring(), b.ring())?;
            Ok(SemiInnerData::Module(a.compose(b)?))
        }
        (SemiInnerData::Lie(a), SemiInnerData::Lie(b)) => {
            same(a.field(), b.field())?;
            Ok(SemiInnerData::Lie(a.compose(b)?))
        }
        _ => Err(Error::RingMismatch("module data".into(), "Lie data".into())),
    }
}

pub fn semi_inner_inverse(a: &SemiInnerData) -> SemiInnerData {
    match a {
        SemiInnerData::Module(d) => SemiInnerData::Module(d.inverse()),
        SemiInnerData::Lie(d) => SemiInnerData::Lie(d.inverse()),
    }
}

pub(crate) fn random_hom(k: &Ring, rng: &mut Lcg64) -> ModuleHom {
    let (s, t) = (1 + rng.below(SAMPLE_RANK), 1 + rng.below(SAMPLE_RANK));
    ModuleHom::random(k, rng, s, t)
}

pub(crate) fn random_descriptor(k: &Ring, auts: &[RingAut], rng: &mut Lcg64) -> CategoryAutoDescriptor {
    let sigma = rng.pick(auts).clone();
    CategoryAutoDescriptor::new(k, sigma).with_random_twists(rng, SAMPLE_RANK)
}

// ---- Out C⁰ ≅ Out K -------------------------------------------------------------

/// (1) recovery inverts `σ -> σ̂` on all of `Aut K`; (2) each inner `σ` acts
/// like a pure twist on sampled homs; (3) distinct outer classes stay
/// distinct on `End Kx₀` under every rank-one twist.
pub(crate) fn out_category_body(k: &Ring, rng: &mut Lcg64, samples: usize) -> CheckResult {
    let auts = k.automorphisms()?;
    let units = k.units();
    let mut n = 0;
    for s in &auts {
        let got = recover_ring_aut(&CategoryAutoDescriptor::new(k, s.clone()))?.sigma;
        ensure!(got == *s, "π(σ̂) = {} for σ = {}", got.describe(k), s.describe(k));
        n += 1;
    }
    for s in &auts {
        let Some(&u) = units.iter().find(|&&u| k.inner_aut(u).is_ok_and(|i| i == *s)) else {
            continue;
        };
        let u_inv = k.inv(u).expect("unit");
        let lifted = CategoryAutoDescriptor::new(k, s.clone());
        let mut pure = CategoryAutoDescriptor::new(k, k.identity_aut());
        for r in 1..=SAMPLE_RANK {
            pure = pure.with_twist(ModuleHom::new(r, r, Matrix::scalar(r, u_inv))?)?;
        }
        for _ in 0..samples {
            let nu = random_hom(k, rng);
            ensure!(
                lifted.act(&nu) == pure.act(&nu),
                "σ = conj:{} differs from its twist on {}",
                k.format(u),
                nu.format(k)
            );
            n += 1;
        }
    }
    let out = k.out_group()?;
    ensure!(
        out.order() * out.inner_count == out.aut_count,
        "|Out| {} · |Int| {} != |Aut| {}",
        out.order(),
        out.inner_count,
        out.aut_count
    );
    let reps = &out.representatives;
    for (i, a) in reps.iter().enumerate() {
        for b in &reps[i + 1..] {
            let (da, db) = (CategoryAutoDescriptor::new(k, a.clone()), CategoryAutoDescriptor::new(k, b.clone()));
            for &c in &units {
                let twist = CategoryAutoDescriptor::new(k, k.identity_aut()).with_twist(ModuleHom::scalar(c))?;
                let separated = k.elements().any(|alpha| {
                    let nu = ModuleHom::scalar(alpha);
                    da.act(&nu) != twist.act(&db.act(&nu))
                });
                ensure!(
                    separated,
                    "{} and {} agree on End Kx₀ up to the twist {}",
                    a.describe(k),
                    b.describe(k),
                    k.format(c)
                );
                n += 1;
            }
        }
    }
    Ok(n)
}

pub fn out_category_check(ring: &Ring, cfg: &SuiteConfig) -> PropertyReport {
    let k = ring.clone();
    execute("suite.out_category", &ring.to_string(), cfg, &move |cx| {
        let samples = cx.samples(200);
        out_category_body(&k, &mut cx.rng, samples)
    })
}

// ---- End W assembly -----------------------------------------------------------

pub const M2_CONFIG_LABELS: [&str; 3] = [
    "gf(13);delta=id;tau=[[1,0],[0,1]];lambda=1",
    "gf(13);delta=id;tau=[[1,1],[0,1]];lambda=2",
    "gf(16);delta=frob:2;tau=[[1,0],[0,1]];lambda=t",
];

pub fn m2_label(t: &EndWAutoDescriptor) -> String {
    let k = t.field();
    format!(
        "{};delta={};tau={};lambda={}",
        k,
        t.delta().describe(k),
        t.tau().format(k),
        k.format(t.lambda())
    )
}

pub fn parse_m2_label(label: &str) -> Result<EndWAutoDescriptor> {
    let mut parts = label.split(';');
    let k: Ring = parts.next().unwrap_or_default().parse()?;
    let (mut delta, mut tau, mut lambda) = (k.identity_aut(), Matrix::identity(&k, 2), k.one());
    for part in parts {
        match part.split_once('=') {
            Some(("delta", v)) => delta = RingAut::parse(&k, v)?,
            Some(("tau", v)) => tau = Matrix::parse(&k, v)?,
            Some(("lambda", v)) => lambda = k.parse_elem(v)?,
            _ => return Err(Error::Config(format!("bad assembly field {part:?}"))),
        }
    }
    EndWAutoDescriptor::new(&k, delta, tau, lambda)
}

pub(crate) fn random_endo(lie: &FreeLie, rng: &mut Lcg64, max_degree: usize) -> LieHom {
    let x = lie.random_element(rng, max_degree, 3);
    let y = lie.random_element(rng, max_degree, 3);
    LieHom::endo(x, y).expect("same field")
}

pub(crate) fn random_linear_endo(k: &Ring, rng: &mut Lcg64, invertible: bool) -> Result<LieHom> {
    let m = if invertible { Matrix::random_invertible(k, rng, 2) } else { Matrix::random(k, rng, 2, 2) };
    l_endo(k, &m)
}

pub(crate) fn lie_m2_body(t: &EndWAutoDescriptor, rng: &mut Lcg64, samples: usize) -> CheckResult {
    let k = t.field();
    ensure!(k.size() - 1 > crate::lie::MAX_DEGREE, "{} has too few units to separate degrees", k);
    let lie = FreeLie::xy(k)?;
    let t2 = EndWAutoDescriptor::new(k, t.delta().clone(), t.tau().clone(), k.one())?;
    let t2_inv = t2.inverse();
    let mut n = 0;
    for _ in 0..samples {
        let beta = random_linear_endo(k, rng, true)?;
        let (a, b) = (t.act(&beta)?, t2.act(&beta)?);
        ensure!(a == b, "T and T₂ differ on the linear endo {}", linear_part(&beta).0.format(k));
        let fixed = t.act(&t2_inv.act(&beta)?)?;
        ensure!(fixed == beta, "T·T₂⁻¹ moves {}", linear_part(&beta).0.format(k));
        n += 2;
    }
    // one-step conjugation by g = τ·τ_λ, which is l(λ M_τ) in row layout
    let g = l_endo(k, &t.tau().scale(k, t.lambda()))?;
    let g_inv = linear_inverse(&g)?;
    for _ in 0..samples {
        let beta = random_endo(&lie, rng, 4);
        let direct = endo_compose(&g_inv, &endo_compose(&delta_hat(t.delta(), &beta), &g)?)?;
        ensure!(
            t.act(&beta)? == direct,
            "factorization fails on x -> {}, y -> {}",
            lie.format(beta.image_x()),
            lie.format(beta.image_y())
        );
        n += 1;
    }
    Ok(n)
}

pub fn lie_m2_assembly(t: &EndWAutoDescriptor, cfg: &SuiteConfig) -> PropertyReport {
    let t = t.clone();
    execute("suite.lie_m2_assembly", &m2_label(&t), cfg, &move |cx| {
        let samples = cx.samples(100);
        lie_m2_body(&t, &mut cx.rng, samples)
    })
}

/// `φ₁(h) = t_target · h · t_source⁻¹` where the twist is `x₀ -> λx₀` on
/// the rank-one object and the identity on `W(x, y)`.
fn phi_one(k: &Ring, lambda: Elem, h: &LieHom, source_rank: usize, target_rank: usize) -> Result<LieHom> {
    let scale = |c| LieHom::new(k, vec![LieElement::generator(k, 0).scale(c)]);
    let mut out = h.clone();
    if source_rank == 1 {
        out = endo_compose(&out, &scale(k.inv(lambda).ok_or(Error::NotAUnit)?)?)?;
    }
    if target_rank == 1 {
        out = endo_compose(&scale(lambda)?, &out)?;
    }
    Ok(out)
}

pub(crate) fn lie_m3_body(k: &Ring, rng: &mut Lcg64, samples: usize) -> CheckResult {
    let lie = FreeLie::xy(k)?;
    let x0 = LieElement::generator(k, 0);
    let nu0 = LieHom::new(k, vec![x0.clone(), x0.clone()])?;
    let rho = swap(k);
    let mut n = 0;
    let nu0_rho = endo_compose(&nu0, &rho)?;
    ensure!(nu0_rho == nu0, "ν₀ρ != ν₀");
    for g in 0..2 {
        ensure!(endo_apply(&nu0_rho, &lie.generator(g))? == x0, "ν₀ρ moves generator {g} off x₀");
    }
    n += 3;
    for lambda in k.nonzero() {
        for c in k.elements() {
            let h = LieHom::new(k, vec![x0.scale(c)])?;
            ensure!(phi_one(k, lambda, &h, 1, 1)? == h, "φ₁ moves x₀ -> {}·x₀", k.format(c));
            n += 1;
        }
        let image = phi_one(k, lambda, &nu0, 2, 1)?;
        let alpha = image.image(0).coefficient(&LyndonMonomial::letter(0));
        let shape = LieHom::new(k, vec![x0.scale(alpha), x0.scale(alpha)])?;
        ensure!(image == shape && alpha != k.zero(), "φ₁(ν₀) is not x, y -> α·x₀");
        ensure!(alpha == lambda, "α = {} but the twist was {}", k.format(alpha), k.format(lambda));
        // the scaling collection with f(x₀) = α·x₀ on the rank-one object
        let f_hat = endo_compose(&LieHom::new(k, vec![x0.scale(alpha)])?, &nu0)?;
        for g in 0..2 {
            let gen = lie.generator(g);
            ensure!(endo_apply(&f_hat, &gen)? == endo_apply(&image, &gen)?, "f̂(ν₀) != φ₁(ν₀) on generator {g}");
        }
        n += 4;
    }
    // φ₁ preserves composites W -> W -> W₀ and W₀ -> W -> W₀
    let nonzero = k.nonzero();
    let lambda = *rng.pick(&nonzero);
    for _ in 0..samples {
        let g = random_endo(&lie, rng, 3);
        let h = LieHom::new(k, vec![x0.scale(*rng.pick(&nonzero)), x0.scale(*rng.pick(&nonzero))])?;
        let lhs = phi_one(k, lambda, &endo_compose(&h, &g)?, 2, 1)?;
        let rhs = endo_compose(&phi_one(k, lambda, &h, 2, 1)?, &phi_one(k, lambda, &g, 2, 2)?)?;
        ensure!(lhs == rhs, "φ₁ fails to preserve a composite W -> W -> W₀");
        let up = LieHom::new(k, vec![lie.random_element(rng, 1, 2)])?;
        let lhs = phi_one(k, lambda, &endo_compose(&h, &up)?, 1, 1)?;
        let rhs = endo_compose(&phi_one(k, lambda, &h, 2, 1)?, &phi_one(k, lambda, &up, 1, 2)?)?;
        ensure!(lhs == rhs, "φ₁ fails to preserve a composite W₀ -> W -> W₀");
        n += 2;
    }
    Ok(n)
}

pub fn lie_m3_skeleton_check(field: &Ring, cfg: &SuiteConfig) -> PropertyReport {
    let k = field.clone();
    execute("suite.lie_m3_skeleton", &field.to_string(), cfg, &move |cx| {
        let samples = cx.samples(50);
        lie_m3_body(&k, &mut cx.rng, samples)
    })
}

pub(crate) fn random_endw_descriptor(k: &Ring, rng: &mut Lcg64) -> Result<EndWAutoDescriptor> {
    let auts = k.automorphisms()?;
    let delta = rng.pick(&auts).clone();
    let tau = Matrix::random_invertible(k, rng, 2);
    let lambda = *rng.pick(&k.nonzero());
    EndWAutoDescriptor::new(k, delta, tau, lambda)
}

pub(crate) fn td_body(k: &Ring, rng: &mut Lcg64, descriptors: usize, endos: usize) -> CheckResult {
    let mut n = 0;
    for _ in 0..descriptors {
        let t = random_endw_descriptor(k, rng)?;
        for _ in 0..endos {
            let beta = random_linear_endo(k, rng, false)?;
            let (_, is_l) = linear_part(&t.act(&beta)?);
            ensure!(is_l, "T({}) has higher-degree terms", linear_part(&beta).0.format(k));
            n += 1;
        }
    }
    Ok(n)
}
