use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use catfree_core::decomp::{classify_gl2_aut, recover_matrix_aut, MatrixSemigroupAuto};
use catfree_core::endo::{dieudonne_case1, dieudonne_case2, endo_apply, endo_compose, CharacterMap, LieHom};
use catfree_core::lie::{bracket, FreeLie};
use catfree_core::module::{recover_ring_aut, CategoryAutoDescriptor};
use catfree_core::verify::{render_jsonl, run_suite, Mutant, SuiteConfig};
use catfree_core::{Lcg64, Matrix, ModuleHom, Ring, RingAut};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "catfree", version, about = "Semi-inner automorphisms of free-algebra categories, checked over small rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the property battery.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Inspect a finite ring.
    #[command(subcommand)]
    Ring(RingCmd),
    /// Free Lie algebra arithmetic.
    #[command(subcommand)]
    Lie(LieCmd),
    /// Free module category automorphisms.
    #[command(subcommand, name = "mod")]
    Module(ModCmd),
    /// Decomposition of semigroup automorphisms.
    #[command(subcommand)]
    Decomp(DecompCmd),
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Every property on every configured ring, as JSON lines.
    All(VerifyAll),
}

#[derive(Args)]
struct VerifyAll {
    /// Replace the battery ring list (repeatable).
    #[arg(long = "ring")]
    rings: Vec<String>,
    #[arg(long, env = "CATFREE_SEED")]
    seed: Option<u64>,
    /// Override every property's sample count.
    #[arg(long)]
    samples: Option<usize>,
    /// Battery file in TOML; defaults to the built-in one.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Add wall time to each report.
    #[arg(long)]
    timings: bool,
    #[arg(long, hide = true)]
    inject_mutant: Option<String>,
}

#[derive(Subcommand)]
enum RingCmd {
    Info { spec: String },
    Auts { spec: String },
    Out { spec: String },
}

#[derive(Args)]
struct FieldArg {
    #[arg(long)]
    field: String,
    /// Number of generators; names become x1..xn. Default is x, y.
    #[arg(long)]
    rank: Option<usize>,
}

impl FieldArg {
    fn algebra(&self) -> Result<FreeLie> {
        let k: Ring = self.field.parse()?;
        Ok(match self.rank {
            None => FreeLie::xy(&k)?,
            Some(n) => FreeLie::indexed(&k, n)?,
        })
    }
}

#[derive(Subcommand)]
enum LieCmd {
    /// Print an expression in Lyndon normal form.
    Normalize {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        expr: String,
    },
    /// Bracket two expressions.
    Compose {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    #[command(subcommand)]
    Endo(EndoCmd),
}

#[derive(Subcommand)]
enum EndoCmd {
    /// Apply `x -> ex, y -> ey` to an expression.
    Apply {
        #[arg(long)]
        field: String,
        #[arg(long)]
        ex: String,
        #[arg(long)]
        ey: String,
        #[arg(long)]
        on: String,
    },
    /// `f·g` (apply g first).
    Compose {
        #[arg(long)]
        field: String,
        #[arg(long)]
        fx: String,
        #[arg(long)]
        fy: String,
        #[arg(long)]
        gx: String,
        #[arg(long)]
        gy: String,
    },
}

#[derive(Subcommand)]
enum ModCmd {
    /// Build a category automorphism from σ and twists, then recover σ.
    Recover {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        sigma: String,
        /// `id`, `random:seed=N`, or a matrix literal for the rank-2 twist.
        #[arg(long, default_value = "id")]
        twist: String,
    },
    /// Check `s^a s^b = s^(a+b)`, for one pair or for all pairs.
    ShearCheck {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        beta: Option<String>,
    },
}

#[derive(Subcommand)]
enum DecompCmd {
    /// Recover (γ, Φ) from `A -> Φ γ(A) Φ^-1` treated as a black box.
    MatrixAut {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        phi: String,
        #[arg(long, default_value = "id")]
        gamma: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Build a GL2 automorphism from (χ, τ, f) and classify it.
    Gl2Aut {
        #[arg(long)]
        field: String,
        /// Exponent e of χ = det^e.
        #[arg(long, default_value_t = 0)]
        chi: u64,
        #[arg(long)]
        tau: String,
        #[arg(long, default_value = "id")]
        f: String,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        case: u8,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Problems with the inputs; everything else is a failed check.
struct Usage(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn print(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn run(cmd: Command) -> std::result::Result<bool, Usage> {
    match cmd {
        Command::Verify(VerifyCmd::All(a)) => verify_all(a),
        Command::Ring(c) => Ok(ring_cmd(c).map(|()| true)?),
        Command::Lie(c) => Ok(lie_cmd(c).map(|()| true)?),
        Command::Module(c) => mod_cmd(c),
        Command::Decomp(c) => decomp_cmd(c),
    }
}

fn verify_all(a: VerifyAll) -> std::result::Result<bool, Usage> {
    let mut cfg = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            SuiteConfig::from_toml(&text)?
        }
        None => SuiteConfig::default(),
    };
    if !a.rings.is_empty() {
        cfg.rings = a.rings;
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if a.samples.is_some() {
        cfg.samples = a.samples;
    }
    cfg.timings = a.timings;
    cfg.mutant = a.inject_mutant.as_deref().map(str::parse::<Mutant>).transpose()?;
    // Witnesses already carry panic messages.
    std::panic::set_hook(Box::new(|_| {}));
    let reports = run_suite(&cfg)?;
    print!("{}", render_jsonl(&reports, cfg.seed));
    Ok(reports.iter().all(|r| r.pass))
}

fn ring_cmd(c: RingCmd) -> Result<()> {
    match c {
        RingCmd::Info { spec } => {
            let k: Ring = spec.parse()?;
            print(&json!({
                "ring": k.to_string(),
                "size": k.size(),
                "characteristic": k.characteristic(),
                "commutative": k.is_commutative(),
                "field": k.is_field(),
                "units": k.units().len(),
            }));
        }
        RingCmd::Auts { spec } => {
            let k: Ring = spec.parse()?;
            let auts: Vec<String> = k.automorphisms()?.iter().map(|s| s.describe(&k)).collect();
            print(&json!({ "ring": k.to_string(), "count": auts.len(), "automorphisms": auts }));
        }
        RingCmd::Out { spec } => {
            let k: Ring = spec.parse()?;
            let out = k.out_group()?;
            let reps: Vec<String> = out.representatives.iter().map(|s| s.describe(&k)).collect();
            print(&json!({
                "ring": k.to_string(),
                "aut_count": out.aut_count,
                "inner_count": out.inner_count,
                "order": out.order(),
                "representatives": reps,
                "table": out.table,
            }));
        }
    }
    Ok(())
}

fn lie_cmd(c: LieCmd) -> Result<()> {
    match c {
        LieCmd::Normalize { field, expr } => {
            let lie = field.algebra()?;
            let e = lie.parse(&expr)?;
            print(&json!({ "input": expr, "normal_form": lie.format(&e), "degree": e.degree() }));
        }
        LieCmd::Compose { field, a, b } => {
            let lie = field.algebra()?;
            let (ea, eb) = (lie.parse(&a)?, lie.parse(&b)?);
            let c = bracket(&ea, &eb)?;
            print(&json!({ "a": lie.format(&ea), "b": lie.format(&eb), "bracket": lie.format(&c) }));
        }
        LieCmd::Endo(EndoCmd::Apply { field, ex, ey, on }) => {
            let lie = FreeLie::xy(&field.parse()?)?;
            let e = LieHom::endo(lie.parse(&ex)?, lie.parse(&ey)?)?;
            let w = lie.parse(&on)?;
            let image = endo_apply(&e, &w)?;
            print(&json!({
                "x": lie.format(e.image_x()),
                "y": lie.format(e.image_y()),
                "on": lie.format(&w),
                "image": lie.format(&image),
            }));
        }
        LieCmd::Endo(EndoCmd::Compose { field, fx, fy, gx, gy }) => {
            let lie = FreeLie::xy(&field.parse()?)?;
            let f = LieHom::endo(lie.parse(&fx)?, lie.parse(&fy)?)?;
            let g = LieHom::endo(lie.parse(&gx)?, lie.parse(&gy)?)?;
            let fg = endo_compose(&f, &g)?;
            print(&json!({ "x": lie.format(fg.image_x()), "y": lie.format(fg.image_y()) }));
        }
    }
    Ok(())
}

fn parse_twist(k: &Ring, sigma: RingAut, twist: &str) -> Result<CategoryAutoDescriptor> {
    let phi = CategoryAutoDescriptor::new(k, sigma);
    if twist == "id" {
        return Ok(phi);
    }
    if let Some(seed) = twist.strip_prefix("random:seed=") {
        let seed: u64 = seed.parse().map_err(|_| anyhow!("bad twist seed {seed:?}"))?;
        return Ok(phi.with_random_twists(&mut Lcg64::stream(seed, "mod.recover"), 2));
    }
    let m = Matrix::parse(k, twist)?;
    if m.rows() != 2 || m.cols() != 2 {
        bail!("twist matrix must be 2x2");
    }
    Ok(phi.with_twist(ModuleHom::new(2, 2, m)?)?)
}

fn mod_cmd(c: ModCmd) -> std::result::Result<bool, Usage> {
    match c {
        ModCmd::Recover { ring, sigma, twist } => {
            let k: Ring = ring.parse()?;
            let s = RingAut::parse(&k, &sigma)?;
            let phi = parse_twist(&k, s.clone(), &twist)?;
            let r = recover_ring_aut(&phi)?;
            let witnesses: Vec<Value> = r
                .shear_images
                .iter()
                .map(|(a, m)| json!({ "alpha": k.format(*a), "matrix": m.format(&k) }))
                .collect();
            let ok = r.sigma == s;
            print(&json!({
                "ring": k.to_string(),
                "sigma": s.describe(&k),
                "recovered_sigma": r.sigma.describe(&k),
                "match": ok,
                "relations_checked": r.relations_checked,
                "y_basis": r.y_basis.format(&k),
                "witness_matrices": witnesses,
            }));
            Ok(ok)
        }
        ModCmd::ShearCheck { ring, alpha, beta } => {
            let k: Ring = ring.parse()?;
            let pairs: Vec<_> = match (alpha, beta) {
                (Some(a), Some(b)) => vec![(k.parse_elem(&a)?, k.parse_elem(&b)?)],
                (None, None) => k.elements().flat_map(|a| k.elements().map(move |b| (a, b))).collect(),
                _ => return Err(Usage(anyhow!("give both --alpha and --beta, or neither"))),
            };
            let mut failure = None;
            for &(a, b) in &pairs {
                let lhs = ModuleHom::shear(&k, a).compose(&k, &ModuleHom::shear(&k, b))?;
                if lhs != ModuleHom::shear(&k, k.add(a, b)) {
                    failure = Some(json!({ "alpha": k.format(a), "beta": k.format(b) }));
                    break;
                }
            }
            let ok = failure.is_none();
            print(&json!({ "ring": k.to_string(), "checked": pairs.len(), "pass": ok, "witness": failure }));
            Ok(ok)
        }
    }
}

fn decomp_cmd(c: DecompCmd) -> std::result::Result<bool, Usage> {
    match c {
        DecompCmd::MatrixAut { ring, n, phi, gamma, seed } => {
            let k: Ring = ring.parse()?;
            let g = RingAut::parse(&k, &gamma)?;
            let m = Matrix::parse(&k, &phi)?;
            if m.rows() != n || m.cols() != n {
                return Err(Usage(anyhow!("--phi must be {n}x{n}")));
            }
            let f = MatrixSemigroupAuto::conjugation(&k, g.clone(), m.clone())?;
            let r = recover_matrix_aut(&f, &mut Lcg64::stream(seed, "decomp.matrix-aut"))?;
            let ok = r.gamma == g && r.phi == m.normalize_scalar(&k);
            print(&json!({
                "ring": k.to_string(),
                "n": n,
                "gamma": r.gamma.describe(&k),
                "phi_normalized": r.phi.format(&k),
                "verified_on": r.verified_on,
                "match": ok,
            }));
            Ok(ok)
        }
        DecompCmd::Gl2Aut { field, chi, tau, f, case, seed } => {
            let k: Ring = field.parse()?;
            let chi_map = CharacterMap::new(&k, chi)?;
            let t = Matrix::parse(&k, &tau)?;
            let fa = RingAut::parse(&k, &f)?;
            let (c, t2, f2) = (chi_map.clone(), t.clone(), fa.clone());
            let s = move |b: &Matrix| match case {
                1 => dieudonne_case1(&c, &t2, &f2, b).expect("invertible input"),
                _ => dieudonne_case2(&c, &t2, &f2, b).expect("invertible input"),
            };
            let r = classify_gl2_aut(&k, &s, &mut Lcg64::stream(seed, "decomp.gl2-aut"))?;
            print(&json!({
                "field": k.to_string(),
                "case_tag": r.case_tag,
                "chi": r.chi.as_ref().map(|c| c.describe()),
                "tau": r.phi.format(&k),
                "f": r.gamma.describe(&k),
                "multiplicity": r.multiplicity,
                "verified_on": r.verified_on,
            }));
            Ok(true)
        }
    }
}
