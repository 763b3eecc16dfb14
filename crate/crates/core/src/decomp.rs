//! Recovery of structure from black-box automorphisms: semigroup
//! automorphisms of `M_n(K)` as `A -> Φ γ(A) Φ^-1`, and automorphisms of
//! `GL2(K)` in one of the two Dieudonné shapes.
//!
//! The algorithms only call the supplied map; they never see how it was
//! built.

use crate::endo::{dieudonne_case1, dieudonne_case2, gl2, CharacterMap};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::{Ring, RingAut};
use crate::rng::Lcg64;

/// Above this many matrices, verification samples instead of enumerating.
pub const EXHAUSTIVE_LIMIT: usize = 65536;
/// Above this many matrices, validation of products samples pairs.
pub const VALIDATION_LIMIT: usize = 4096;
pub const SAMPLE_COUNT: usize = 1000;

type MatrixFn<'a> = dyn Fn(&Matrix) -> Matrix + Send + Sync + 'a;

/// A map `M_n(K) -> M_n(K)` presented as a callable.
pub struct MatrixSemigroupAuto<'a> {
    ring: Ring,
    n: usize,
    f: Box<MatrixFn<'a>>,
}

impl<'a> MatrixSemigroupAuto<'a> {
    pub fn new(ring: &Ring, n: usize, f: impl Fn(&Matrix) -> Matrix + Send + Sync + 'a) -> Self {
        MatrixSemigroupAuto { ring: ring.clone(), n, f: Box::new(f) }
    }

    /// `A -> Φ γ(A) Φ^-1`.
    pub fn conjugation(ring: &Ring, gamma: RingAut, phi: Matrix) -> Result<MatrixSemigroupAuto<'static>> {
        let inv = phi.inverse(ring).ok_or(Error::Singular)?;
        let k = ring.clone();
        let n = phi.rows();
        Ok(MatrixSemigroupAuto::new(ring, n, move |a| {
            phi.mul(&k, &a.apply_aut(&gamma)).and_then(|m| m.mul(&k, &inv)).expect("square matrices of one size")
        }))
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn apply(&self, a: &Matrix) -> Matrix {
        (self.f)(a)
    }

    fn space_size(&self) -> Option<usize> {
        self.ring.size().checked_pow((self.n * self.n) as u32)
    }

    /// Checks `f(I) = I` and `f(AB) = f(A) f(B)`, on every pair when the
    /// matrix ring is small and on sampled pairs otherwise.
    pub fn validate(&self, rng: &mut Lcg64) -> Result<()> {
        let k = &self.ring;
        let id = Matrix::identity(k, self.n);
        if self.apply(&id) != id {
            return Err(Error::NotMultiplicative("identity is not fixed".into()));
        }
        let fail = |a: &Matrix, b: &Matrix| {
            Error::NotMultiplicative(format!("f(AB) != f(A)f(B) at A = {}, B = {}", a.format(k), b.format(k)))
        };
        match self.space_size() {
            Some(size) if size <= VALIDATION_LIMIT => {
                let all: Vec<Matrix> = Matrix::all(k, self.n, self.n).collect();
                let images: Vec<Matrix> = all.iter().map(|a| self.apply(a)).collect();
                for (a, fa) in all.iter().zip(&images) {
                    for (b, fb) in all.iter().zip(&images) {
                        if self.apply(&a.mul(k, b)?) != fa.mul(k, fb)? {
                            return Err(fail(a, b));
                        }
                    }
                }
            }
            _ => {
                for _ in 0..SAMPLE_COUNT {
                    let a = Matrix::random(k, rng, self.n, self.n);
                    let b = Matrix::random(k, rng, self.n, self.n);
                    if self.apply(&a.mul(k, &b)?) != self.apply(&a).mul(k, &self.apply(&b))? {
                        return Err(fail(&a, &b));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Outcome of a recovery. For `GL2` classification `phi` holds `τ` and
/// `gamma` holds `f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompResult {
    pub gamma: RingAut,
    /// Normalized: first nonzero entry in column-major order is 1.
    pub phi: Matrix,
    pub case_tag: Option<u8>,
    pub chi: Option<CharacterMap>,
    /// Number of matrices on which the decomposition was checked.
    pub verified_on: usize,
    /// Number of distinct decompositions found (GL2 only; 1 otherwise).
    pub multiplicity: usize,
}

/// Factors a semigroup automorphism of `M_n(K)` as `A -> Φ γ(A) Φ^-1`.
pub fn recover_matrix_aut(f: &MatrixSemigroupAuto, rng: &mut Lcg64) -> Result<DecompResult> {
    let k = f.ring();
    let n = f.n;
    if !k.is_field() {
        return Err(Error::NotAField(k.to_string()));
    }
    let bad = |what: String| Error::NoDecomposition(what);

    // (1) images of diagonal matrix units: orthogonal idempotents summing to I
    let p: Vec<Matrix> = (0..n).map(|i| f.apply(&Matrix::unit(k, n, i, i))).collect();
    let mut sum = Matrix::zeros(n, n);
    for (i, pi) in p.iter().enumerate() {
        for (j, pj) in p.iter().enumerate() {
            let prod = pi.mul(k, pj)?;
            let ok = if i == j { prod == *pi } else { prod.is_zero() };
            if !ok {
                return Err(bad(format!("f(E_{i}{i}) f(E_{j}{j}) has the wrong value {}", prod.format(k))));
            }
        }
        sum = sum.add(k, pi)?;
    }
    if !sum.is_identity(k) {
        return Err(bad(format!("images of diagonal units sum to {}", sum.format(k))));
    }

    // (2) a nonzero column of f(E_11), carried along by f(E_j1)
    let v1 = (0..n)
        .map(|j| p[0].column(j))
        .find(|c| c.iter().any(|&e| e != k.zero()))
        .ok_or_else(|| bad("f(E_11) is zero".into()))?;
    let mut phi = Matrix::zeros(n, n);
    for j in 0..n {
        let fe = f.apply(&Matrix::unit(k, n, j, 0));
        let col = fe.mul(k, &Matrix::new(n, 1, v1.clone())?)?.column(0);
        for (i, &e) in col.iter().enumerate() {
            phi.set(i, j, e);
        }
    }
    let phi_inv = phi.inverse(k).ok_or_else(|| bad(format!("assembled basis {} is singular", phi.format(k))))?;

    // (3) the field automorphism, read off scalar matrices
    let mut table = Vec::with_capacity(k.size());
    for alpha in k.elements() {
        let img = f.apply(&Matrix::scalar(n, alpha));
        let g = img.get(0, 0);
        if img != Matrix::scalar(n, g) {
            return Err(bad(format!("f({}·I) = {} is not scalar", k.format(alpha), img.format(k))));
        }
        table.push(g);
    }
    let gamma = k.aut_from_table(table)?;

    // (4) verification
    let check = |a: &Matrix| -> Result<()> {
        let expect = phi.mul(k, &a.apply_aut(&gamma))?.mul(k, &phi_inv)?;
        if f.apply(a) != expect {
            return Err(bad(format!("decomposition disagrees with f at {}", a.format(k))));
        }
        Ok(())
    };
    let verified_on = match f.space_size() {
        Some(size) if size <= EXHAUSTIVE_LIMIT => {
            for a in Matrix::all(k, n, n) {
                check(&a)?;
            }
            size
        }
        _ => {
            for _ in 0..SAMPLE_COUNT {
                check(&Matrix::random(k, rng, n, n))?;
            }
            SAMPLE_COUNT
        }
    };
    Ok(DecompResult {
        gamma,
        phi: phi.normalize_scalar(k),
        case_tag: None,
        chi: None,
        verified_on,
        multiplicity: 1,
    })
}

/// Largest field accepted by [`classify_gl2_aut`].
pub const GL2_MAX_FIELD: usize = 9;

/// Checks multiplicativity of a map on `GL2(K)`: every pair for `q <= 3`,
/// `SAMPLE_COUNT` random pairs otherwise.
pub fn validate_gl2_map(field: &Ring, s: &MatrixFn, rng: &mut Lcg64) -> Result<()> {
    let group = gl2(field);
    let fail = |a: &Matrix, b: &Matrix| {
        Error::NotMultiplicative(format!("S(AB) != S(A)S(B) at A = {}, B = {}", a.format(field), b.format(field)))
    };
    let check = |a: &Matrix, b: &Matrix| -> Result<()> {
        if s(&a.mul(field, b)?) != s(a).mul(field, &s(b))? {
            return Err(fail(a, b));
        }
        Ok(())
    };
    if field.size() <= 3 {
        for a in &group {
            for b in &group {
                check(a, b)?;
            }
        }
    } else {
        for _ in 0..SAMPLE_COUNT {
            check(rng.pick(&group), rng.pick(&group))?;
        }
    }
    Ok(())
}

/// Generators of `GL2(K)`: `diag(ω, 1)`, `[[1,1],[0,1]]`, `[[0,1],[1,0]]`.
pub fn gl2_generators(field: &Ring) -> Vec<Matrix> {
    let (o, z) = (field.one(), field.zero());
    let w = field.primitive_element().expect("field");
    vec![
        Matrix::from_rows(vec![vec![w, z], vec![z, o]]).expect("2x2"),
        Matrix::from_rows(vec![vec![o, o], vec![z, o]]).expect("2x2"),
        Matrix::from_rows(vec![vec![z, o], vec![o, z]]).expect("2x2"),
    ]
}

/// Writes an automorphism of `GL2(K)` as `β -> χ(β) τ f(β) τ^-1` (case 1)
/// or `β -> χ(β) τ f(β̃) τ^-1` (case 2).
///
/// Candidates are tried with `χ` by increasing exponent, then case 1 before
/// case 2, then `f` by Frobenius power, then `τ` over normalized
/// representatives of `GL2(K)` modulo scalars. The first candidate that
/// matches on the generators and then on the whole group is returned;
/// `multiplicity` counts all fully verified candidates.
pub fn classify_gl2_aut(field: &Ring, s: &MatrixFn, rng: &mut Lcg64) -> Result<DecompResult> {
    if !field.is_field() {
        return Err(Error::NotAField(field.to_string()));
    }
    if field.size() > GL2_MAX_FIELD {
        return Err(Error::RingTooLarge(field.size()));
    }
    validate_gl2_map(field, s, rng)?;
    let group = gl2(field);
    let gens = gl2_generators(field);
    let targets: Vec<Matrix> = gens.iter().map(s).collect();
    let taus: Vec<&Matrix> = group.iter().filter(|m| m.normalize_scalar(field) == **m).collect();
    let auts = field.automorphisms()?;

    let mut found: Option<DecompResult> = None;
    let mut multiplicity = 0;
    for chi in CharacterMap::all(field) {
        for case in [1u8, 2] {
            let shape = if case == 1 { dieudonne_case1 } else { dieudonne_case2 };
            for f in &auts {
                for &tau in &taus {
                    let on_gens = gens
                        .iter()
                        .zip(&targets)
                        .all(|(g, t)| shape(&chi, tau, f, g).is_ok_and(|m| m == *t));
                    if !on_gens || !group.iter().all(|b| shape(&chi, tau, f, b).is_ok_and(|m| m == s(b))) {
                        continue;
                    }
                    multiplicity += 1;
                    if found.is_none() {
                        found = Some(DecompResult {
                            gamma: f.clone(),
                            phi: tau.clone(),
                            case_tag: Some(case),
                            chi: Some(chi.clone()),
                            verified_on: group.len(),
                            multiplicity: 0,
                        });
                    }
                }
            }
        }
    }
    match found {
        Some(mut r) => {
            r.multiplicity = multiplicity;
            Ok(r)
        }
        None => {
            let witness = targets.iter().zip(&gens).next().map(|(t, g)| format!("S({}) = {}", g.format(field), t.format(field)));
            Err(Error::NoDecomposition(format!("no case-1 or case-2 form matches; {}", witness.unwrap_or_default())))
        }
    }
}

/// The case-2 data describing the same map as case-1 data `(χ, τ, f)`:
/// `(χ · (det ∘ f), τ C^-1, f)`, with `τ C^-1` normalized.
pub fn case2_equivalent(field: &Ring, chi: &CharacterMap, tau: &Matrix, f: &RingAut) -> Result<(CharacterMap, Matrix)> {
    let c_inv = crate::endo::contragredient_conjugator(field).inverse(field).ok_or(Error::Singular)?;
    let det_f = CharacterMap::det(field).after(f);
    Ok((chi.mul(&det_f), tau.mul(field, &c_inv)?.normalize_scalar(field)))
}
