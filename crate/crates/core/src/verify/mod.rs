//! The property battery: every invariant of the kernels as a named check,
//! run over a configurable list of rings and reported as JSON lines.
//!
//! Each property instance draws from its own generator stream keyed by the
//! suite seed and the instance id, so results do not depend on scheduling.

mod props;
pub mod theorems;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::rng::Lcg64;

pub use theorems::{
    lie_m2_assembly, lie_m3_skeleton_check, out_category_check, semi_inner_closure, semi_inner_inverse,
    SemiInnerData,
};

pub const DEFAULT_BATTERY: &str = include_str!("battery.toml");

/// Deliberate defects for checking that the battery notices them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutant {
    /// Builds `σ̂(ν)` as `σ_Y ∘ ν` instead of `σ_Y ∘ ν ∘ σ_X^-1`.
    SigmaHatNoInverse,
}

impl FromStr for Mutant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Mutant> {
        match s {
            "sigma-hat-no-inverse" => Ok(Mutant::SigmaHatNoInverse),
            _ => Err(Error::Config(format!("unknown mutant {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub rings: Vec<String>,
    pub lie_fields: Vec<String>,
    #[serde(default)]
    pub seed: u64,
    /// Overrides the per-property default sample counts.
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(skip)]
    pub mutant: Option<Mutant>,
    /// Record wall time per property (makes reports run-dependent).
    #[serde(skip)]
    pub timings: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig::from_toml(DEFAULT_BATTERY).expect("embedded battery parses")
    }
}

impl SuiteConfig {
    pub fn from_toml(text: &str) -> Result<SuiteConfig> {
        let cfg: SuiteConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        for r in &self.rings {
            r.parse::<Ring>()?;
        }
        for f in &self.lie_fields {
            let k: Ring = f.parse()?;
            if !k.is_field() {
                return Err(Error::NotAField(f.clone()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SampleMode {
    Exhaustive,
    Random { seed: u64, count: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub id: String,
    pub anchor: String,
    pub ring: String,
    pub mode: SampleMode,
    pub pass: bool,
    /// Number of individual checks performed.
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub seed: u64,
}

impl Summary {
    pub fn of(reports: &[PropertyReport], seed: u64) -> Summary {
        let passed = reports.iter().filter(|r| r.pass).count();
        Summary { total: reports.len(), passed, failed: reports.len() - passed, seed }
    }
}

/// One JSON object per report, then `{"summary": ...}`.
pub fn render_jsonl(reports: &[PropertyReport], seed: u64) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&serde_json::to_string(r).expect("reports serialize"));
        out.push('\n');
    }
    let summary = serde_json::json!({ "summary": Summary::of(reports, seed) });
    out.push_str(&summary.to_string());
    out.push('\n');
    out
}

// ---- property plumbing ---------------------------------------------------------

/// Description of a failed check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness(pub String);

impl From<Error> for Witness {
    fn from(e: Error) -> Self {
        Witness(format!("error: {e}"))
    }
}

impl From<String> for Witness {
    fn from(s: String) -> Self {
        Witness(s)
    }
}

/// Number of checks performed, or the first failure.
pub type CheckResult = std::result::Result<usize, Witness>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err($crate::verify::Witness(format!($($fmt)+)));
        }
    };
}
pub(crate) use ensure;

/// State handed to a property body.
pub struct Ctx<'a> {
    pub label: String,
    pub ring: Option<Ring>,
    pub rng: Lcg64,
    pub cfg: &'a SuiteConfig,
    mode: SampleMode,
}

impl Ctx<'_> {
    pub fn ring(&self) -> &Ring {
        self.ring.as_ref().expect("property scoped to a ring")
    }

    /// Sample count: the configured override or `default`. Marks the run
    /// as random.
    pub fn samples(&mut self, default: usize) -> usize {
        let count = self.cfg.samples.unwrap_or(default);
        self.mode = SampleMode::Random { seed: self.cfg.seed, count };
        count
    }

    pub fn exhaustive(&mut self) {
        self.mode = SampleMode::Exhaustive;
    }
}

#[derive(Debug, Clone, Copy)]
enum Scope {
    /// Each ring of the battery.
    Rings,
    /// Fields of the battery plus the Lie fields.
    Fields,
    LieFields,
    /// A fixed list of labels; the part before `;` names the ring if any.
    Fixed(&'static [&'static str]),
}

struct PropertyDef {
    name: &'static str,
    anchor: &'static str,
    scope: Scope,
    run: fn(&mut Ctx) -> CheckResult,
}

const fn def(name: &'static str, anchor: &'static str, scope: Scope, run: fn(&mut Ctx) -> CheckResult) -> PropertyDef {
    PropertyDef { name, anchor, scope, run }
}

use props as p;
use Scope::*;

const M2_LABELS: &[&str] = &theorems::M2_CONFIG_LABELS;

static REGISTRY: &[PropertyDef] = &[
    def("ring.aut_laws", "σ(a+b)=σ(a)+σ(b), σ(ab)=σ(a)σ(b), σ(1)=1", Rings, p::ring_aut_laws),
    def("ring.aut_group", "Aut K closed under ∘ and ⁻¹", Rings, p::ring_aut_group),
    def("ring.inner_compose", "i_u ∘ i_v = i_{uv}", Rings, p::ring_inner_compose),
    def("ring.out_order", "|Out K|·|Int K| = |Aut K|", Rings, p::ring_out_order),
    def("mod.antiisomorphism", "End Kx₀ ≅ (K,·)^op", Rings, p::mod_antiisomorphism),
    def("mod.lift_composition", "(σ₁σ₂)* = σ₁*σ₂*", Fields, p::mod_lift_composition),
    def("mod.sigma_hat_functorial", "σ̂(fg) = σ̂(f)σ̂(g), σ̂(1) = 1", Rings, p::mod_sigma_hat_functorial),
    def("mod.shear_law", "s^α s^β = s^{α+β}", Rings, p::mod_shear_law),
    def("mod.projection_relations", "φ(π₁)(y₂) = 0, φ(π₂)(y₁) = 0, φ(π_i)(y_i) = y_i⁰", Rings, p::mod_projection_relations),
    def("mod.recover_roundtrip", "π(σ̂) = σ", Rings, p::mod_recover_roundtrip),
    def("mod.shear_unitriangular", "φ(s^α)(y₁) = y₁ + α^σ y₂", Rings, p::mod_shear_unitriangular),
    def("mod.additivity", "(α+β)^σ = α^σ + β^σ", Fields, p::mod_additivity),
    def("lie.witt_dimensions", "dim L_d = (1/d) Σ_{e|d} μ(e) n^{d/e}", Fixed(&["n=2", "n=3"]), p::lie_witt),
    def("lie.jacobi", "[a,[b,c]] + [b,[c,a]] + [c,[a,b]] = 0", Fields, p::lie_jacobi),
    def("lie.oracle_equivalence", "ι[a,b] = ι(a)ι(b) − ι(b)ι(a)", Fields, p::lie_oracle),
    def("lie.integer_constants", "[u,v] = Σ c_w w, c_w ∈ Z", Fields, p::lie_integer_constants),
    def("lie.delta_semi_automorphism", "δ_W[u,w] = [δ_W u, δ_W w]", Fields, p::lie_delta),
    def("endo.d_isomorphism", "D ≅ Mp₂(K)", Fixed(&["gf(2)", "gf(3)"]), p::endo_d_isomorphism),
    def("endo.idempotent_stability", "T(σ) ∈ D for σ(x)=x, σ(y)=0", LieFields, p::endo_idempotent),
    def("endo.semi_inner_form", "T(σ) = τ·γ_W·σ·γ_W⁻¹·τ⁻¹", LieFields, p::endo_semi_inner_form),
    def("endo.d_chain", "d(v)·d([x,y]) = d([v,y])", LieFields, p::endo_d_chain),
    def("endo.content_grading", "φ_λ(m) = λ^{cont_y(m)} m", LieFields, p::endo_content_grading),
    def("endo.contragredient", "β̃ = (det β)⁻¹ C β C⁻¹", Fixed(&["gf(3)", "gf(5)"]), p::endo_contragredient),
    def("endo.character", "χ(AB) = χ(A)χ(B)", Fixed(&["gf(2)", "gf(3)", "gf(4)", "gf(5)"]), p::endo_character),
    def("endo.case1_multiplicative", "S(β) = χ(β) τ f(β) τ⁻¹", Fixed(&["gf(2)", "gf(3)", "gf(4)"]), p::endo_case1),
    def(
        "decomp.matrix_roundtrip",
        "f(A) = Φ γ(A) Φ⁻¹",
        Fixed(&["gf(2);n=2", "gf(4);n=2", "gf(2);n=3"]),
        p::decomp_matrix_roundtrip,
    ),
    def("decomp.phi_up_to_center", "Φ unique modulo K*", Fixed(&["gf(4);n=2", "gf(2);n=3"]), p::decomp_center),
    def("decomp.gl2_roundtrip", "S ∈ {case 1, case 2}", Fixed(&["gf(2)", "gf(3)", "gf(4)", "gf(5)"]), p::decomp_gl2),
    def("suite.semi_inner_closure", "(σ,s)(σ',s') = (σσ', s σ̂(s'))", Rings, p::suite_closure),
    def("suite.semi_inner_closure_lie", "T_a T_b = T_{ab}", LieFields, p::suite_closure_lie),
    def("suite.out_category", "Out C⁰ ≅ Out K", Rings, p::suite_out_category),
    def("suite.lie_m2_assembly", "T = τ̂_λ · T₂", Fixed(M2_LABELS), p::suite_m2),
    def("suite.lie_m3_skeleton", "ν₀ρ = ν₀, f̂(ν₀) = φ₁(ν₀)", LieFields, p::suite_m3),
    def("suite.td_equals_d", "T D = D", LieFields, p::suite_td),
];

/// `(property name, anchor)` for every registered property.
pub fn anchors() -> Vec<(&'static str, &'static str)> {
    REGISTRY.iter().map(|d| (d.name, d.anchor)).collect()
}

fn labels(def: &PropertyDef, cfg: &SuiteConfig) -> Vec<String> {
    let rings = || cfg.rings.iter().cloned();
    match def.scope {
        Rings => rings().collect(),
        Fields => {
            let mut v: Vec<String> = rings().filter(|r| r.parse::<Ring>().is_ok_and(|k| k.is_field())).collect();
            v.extend(cfg.lie_fields.iter().filter(|f| !v.contains(f)).cloned().collect::<Vec<_>>());
            v
        }
        LieFields => cfg.lie_fields.clone(),
        Fixed(list) => list.iter().map(|s| s.to_string()).collect(),
    }
}

fn run_instance(def: &PropertyDef, label: &str, cfg: &SuiteConfig) -> PropertyReport {
    execute(def.name, label, cfg, &def.run)
}

fn anchor_of(name: &str) -> &'static str {
    REGISTRY.iter().find(|d| d.name == name).map_or("", |d| d.anchor)
}

/// Runs a property body under the id `name[label]`, turning panics into
/// failures.
pub(crate) fn execute(
    name: &str,
    label: &str,
    cfg: &SuiteConfig,
    run: &(dyn Fn(&mut Ctx) -> CheckResult + Sync),
) -> PropertyReport {
    let id = format!("{name}[{label}]");
    let ring_part = label.split(';').next().unwrap_or_default();
    let ring = ring_part.parse::<Ring>().ok();
    let mut cx = Ctx {
        label: label.to_string(),
        ring: ring.clone(),
        rng: Lcg64::stream(cfg.seed, &id),
        cfg,
        mode: SampleMode::Exhaustive,
    };
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(|| run(&mut cx))).unwrap_or_else(|panic| {
        let msg = panic
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(Witness(format!("panic: {msg}")))
    });
    let elapsed = start.elapsed().as_millis() as u64;
    let (pass, checked, witness) = match result {
        Ok(n) => (true, n, None),
        Err(w) => (false, 0, Some(w.0)),
    };
    PropertyReport {
        id,
        anchor: anchor_of(name).to_string(),
        ring: ring.map_or_else(|| label.to_string(), |k| k.to_string()),
        mode: cx.mode,
        pass,
        checked,
        witness,
        elapsed_ms: cfg.timings.then_some(elapsed),
    }
}

/// Runs every property on its rings, in parallel; reports sorted by id.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<PropertyReport>> {
    cfg.validate()?;
    let tasks: Vec<(&PropertyDef, String)> =
        REGISTRY.iter().flat_map(|d| labels(d, cfg).into_iter().map(move |l| (d, l))).collect();
    let mut reports: Vec<PropertyReport> = tasks.par_iter().map(|(d, l)| run_instance(d, l, cfg)).collect();
    reports.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(reports)
}

/// Runs one registered property on one label.
pub fn run_property(name: &str, label: &str, cfg: &SuiteConfig) -> Result<PropertyReport> {
    let def = REGISTRY
        .iter()
        .find(|d| d.name == name)
        .ok_or_else(|| Error::Config(format!("unknown property {name:?}")))?;
    Ok(run_instance(def, label, cfg))
}

/// Names of all registered properties.
pub fn property_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|d| d.name).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_battery_parses() {
        let cfg = SuiteConfig::default();
        assert_eq!(cfg.rings.len(), 10);
        assert_eq!(cfg.lie_fields, ["gf(13)", "gf(16)"]);
        assert!(SuiteConfig::from_toml("rings = [\"q(3)\"]\nlie_fields = []").is_err());
        assert!(SuiteConfig::from_toml("rings = []\nlie_fields = [\"z(6)\"]").is_err());
    }

    #[test]
    fn every_property_has_a_distinct_nonempty_anchor_entry() {
        let names = property_names();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len());
        assert!(anchors().iter().all(|(_, a)| !a.is_empty()));
    }

    #[test]
    fn mutant_names() {
        assert_eq!("sigma-hat-no-inverse".parse::<Mutant>().unwrap(), Mutant::SigmaHatNoInverse);
        assert!("nope".parse::<Mutant>().is_err());
    }

    #[test]
    fn single_property_report() {
        let cfg = SuiteConfig::default();
        let r = run_property("mod.shear_law", "z(6)", &cfg).unwrap();
        assert!(r.pass);
        assert_eq!(r.checked, 36);
        assert_eq!(r.id, "mod.shear_law[z(6)]");
        let line = serde_json::to_string(&r).unwrap();
        assert!(line.contains("\"kind\":\"exhaustive\""));
        assert!(!line.contains("elapsed_ms"));
    }
}
