//! Endomorphisms of free Lie algebras by substitution, with the
//! two-generator specializations: L-endomorphisms, `d(p)`, scalings,
//! semi-inner automorphisms of `End W`, and maps on `GL2(K)`.
//!
//! An L-endomorphism built from a matrix `A` sends generator `i` to
//! `sum_j A[i][j] x_j`, so row `i` is the image of generator `i`. With
//! composition `(f·g)(w) = f(g(w))` this gives `l(A)·l(B) = l(BA)`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::lie::{bracket, delta_w, LieElement, LyndonMonomial};
use crate::matrix::Matrix;
use crate::ring::{Elem, Ring, RingAut};

/// A homomorphism out of a free Lie algebra, given by generator images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieHom {
    field: Ring,
    images: Vec<LieElement>,
}

/// Endomorphism of the two-generator free Lie algebra `W(x, y)`.
pub type LieEndo = LieHom;

impl LieHom {
    pub fn new(field: &Ring, images: Vec<LieElement>) -> Result<LieHom> {
        if images.is_empty() {
            return Err(Error::Dimension("a hom needs at least one generator image".into()));
        }
        if let Some(bad) = images.iter().find(|e| e.field() != field) {
            return Err(Error::RingMismatch(field.to_string(), bad.field().to_string()));
        }
        Ok(LieHom { field: field.clone(), images })
    }

    pub fn endo(x: LieElement, y: LieElement) -> Result<LieEndo> {
        let field = x.field().clone();
        LieHom::new(&field, vec![x, y])
    }

    pub fn identity(field: &Ring, n: usize) -> LieHom {
        LieHom { field: field.clone(), images: (0..n).map(|i| LieElement::generator(field, i as u8)).collect() }
    }

    pub fn field(&self) -> &Ring {
        &self.field
    }

    pub fn images(&self) -> &[LieElement] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &LieElement {
        &self.images[i]
    }

    pub fn image_x(&self) -> &LieElement {
        &self.images[0]
    }

    pub fn image_y(&self) -> &LieElement {
        &self.images[1]
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    /// Largest degree among the generator images.
    pub fn degree(&self) -> usize {
        self.images.iter().map(LieElement::degree).max().unwrap_or(0)
    }
}

/// Substitutes generator images into `w`.
pub fn endo_apply(e: &LieHom, w: &LieElement) -> Result<LieElement> {
    if w.field() != e.field() {
        return Err(Error::RingMismatch(e.field().to_string(), w.field().to_string()));
    }
    if w.alphabet() > e.rank() {
        return Err(Error::Dimension(format!("element uses {} generators, hom has {}", w.alphabet(), e.rank())));
    }
    let mut cache: HashMap<LyndonMonomial, LieElement> = HashMap::new();
    let mut out = LieElement::zero(e.field());
    for (m, c) in w.terms() {
        out = out.add(&image_of_monomial(e, m, &mut cache)?.scale(c))?;
    }
    Ok(out)
}

fn image_of_monomial(
    e: &LieHom,
    m: &LyndonMonomial,
    cache: &mut HashMap<LyndonMonomial, LieElement>,
) -> Result<LieElement> {
    if let Some(img) = cache.get(m) {
        return Ok(img.clone());
    }
    let img = match m.standard_factorization() {
        None => e.images[m.word()[0] as usize].clone(),
        Some((l, r)) => bracket(&image_of_monomial(e, &l, cache)?, &image_of_monomial(e, &r, cache)?)?,
    };
    cache.insert(m.clone(), img.clone());
    Ok(img)
}

/// `f·g`: apply `g` first.
pub fn endo_compose(f: &LieHom, g: &LieHom) -> Result<LieHom> {
    let images = g.images.iter().map(|w| endo_apply(f, w)).collect::<Result<Vec<_>>>()?;
    LieHom::new(&f.field, images)
}

/// The L-endomorphism whose row `i` is the image of generator `i`.
pub fn l_endo(field: &Ring, a: &Matrix) -> Result<LieEndo> {
    if !a.is_square() {
        return Err(Error::Dimension("L-endomorphisms come from square matrices".into()));
    }
    let images = (0..a.rows())
        .map(|i| {
            LieElement::from_terms(field, (0..a.cols()).map(|j| (LyndonMonomial::letter(j as u8), a.get(i, j))))
        })
        .collect();
    LieHom::new(field, images)
}

/// Degree-one coefficients (row `i` for generator `i`) and whether every
/// higher coefficient vanishes.
pub fn linear_part(e: &LieHom) -> (Matrix, bool) {
    let n = e.rank();
    let mut m = Matrix::zeros(n, n);
    for (i, img) in e.images.iter().enumerate() {
        for j in 0..n {
            m.set(i, j, img.coefficient(&LyndonMonomial::letter(j as u8)));
        }
    }
    let is_l = e.images.iter().all(|img| img.degree() <= 1 && img.alphabet() <= n);
    (m, is_l)
}

/// Inverse of an invertible L-endomorphism.
pub fn linear_inverse(e: &LieHom) -> Result<LieHom> {
    let (m, is_l) = linear_part(e);
    if !is_l {
        return Err(Error::NotAnAutomorphism("not an L-endomorphism".into()));
    }
    l_endo(&e.field, &m.inverse(&e.field).ok_or(Error::Singular)?)
}

/// `d(p)`: `x -> p`, `y -> y`.
pub fn d_endo(p: &LieElement) -> LieEndo {
    let field = p.field().clone();
    LieHom { images: vec![p.clone(), LieElement::generator(&field, 1)], field }
}

/// `τ_λ`: `x -> λx`, `y -> λy`.
pub fn tau_lambda(field: &Ring, lambda: Elem) -> LieEndo {
    l_endo(field, &Matrix::scalar(2, lambda)).expect("square")
}

/// `φ_λ`: `x -> x`, `y -> λy`.
pub fn phi_lambda(field: &Ring, lambda: Elem) -> LieEndo {
    let mut m = Matrix::identity(field, 2);
    m.set(1, 1, lambda);
    l_endo(field, &m).expect("square")
}

/// The generator swap `ρ`.
pub fn swap(field: &Ring) -> LieEndo {
    let (x, y) = (LieElement::generator(field, 0), LieElement::generator(field, 1));
    LieHom { field: field.clone(), images: vec![y, x] }
}

/// `δ̂(β) = δ_W^-1 · β · δ_W`, which applies `δ^-1` to the coefficients of
/// every generator image.
pub fn delta_hat(delta: &RingAut, beta: &LieHom) -> LieHom {
    let inv = delta.inverse();
    LieHom { field: beta.field.clone(), images: beta.images.iter().map(|w| delta_w(&inv, w)).collect() }
}

/// `τ^-1 · δ_W^-1 · β · δ_W · τ` for an invertible linear `τ`.
pub fn semi_inner_endw(delta: &RingAut, tau: &LieEndo, beta: &LieEndo) -> Result<LieEndo> {
    let tau_inv = linear_inverse(tau)?;
    endo_compose(&tau_inv, &endo_compose(&delta_hat(delta, beta), tau)?)
}

/// Automorphism of `End W` of the form `β -> g^-1 · δ̂(β) · g` with
/// `g = τ · τ_λ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndWAutoDescriptor {
    field: Ring,
    delta: RingAut,
    tau: Matrix,
    lambda: Elem,
}

impl EndWAutoDescriptor {
    pub fn new(field: &Ring, delta: RingAut, tau: Matrix, lambda: Elem) -> Result<EndWAutoDescriptor> {
        if !field.is_field() {
            return Err(Error::NotAField(field.to_string()));
        }
        if tau.rows() != 2 || !tau.is_invertible(field) {
            return Err(Error::Singular);
        }
        if lambda == field.zero() {
            return Err(Error::NotAUnit);
        }
        Ok(EndWAutoDescriptor { field: field.clone(), delta, tau, lambda })
    }

    pub fn identity(field: &Ring) -> EndWAutoDescriptor {
        EndWAutoDescriptor {
            field: field.clone(),
            delta: field.identity_aut(),
            tau: Matrix::identity(field, 2),
            lambda: field.one(),
        }
    }

    pub fn field(&self) -> &Ring {
        &self.field
    }

    pub fn delta(&self) -> &RingAut {
        &self.delta
    }

    pub fn tau(&self) -> &Matrix {
        &self.tau
    }

    pub fn lambda(&self) -> Elem {
        self.lambda
    }

    pub fn tau_endo(&self) -> LieEndo {
        l_endo(&self.field, &self.tau).expect("square")
    }

    /// The semi-inner part `τ^-1 · δ̂(β) · τ`.
    pub fn semi_inner(&self, beta: &LieEndo) -> Result<LieEndo> {
        semi_inner_endw(&self.delta, &self.tau_endo(), beta)
    }

    /// `τ_λ^-1 · (τ^-1 · δ̂(β) · τ) · τ_λ`.
    pub fn act(&self, beta: &LieEndo) -> Result<LieEndo> {
        let t2 = self.semi_inner(beta)?;
        let scale = tau_lambda(&self.field, self.lambda);
        let scale_inv = tau_lambda(&self.field, self.field.inv(self.lambda).expect("nonzero"));
        endo_compose(&scale_inv, &endo_compose(&t2, &scale)?)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &EndWAutoDescriptor) -> Result<EndWAutoDescriptor> {
        if self.field != other.field {
            return Err(Error::RingMismatch(self.field.to_string(), other.field.to_string()));
        }
        let k = &self.field;
        let inv = self.delta.inverse();
        let tau = self.tau.mul(k, &other.tau.apply_aut(&inv))?;
        let lambda = k.mul(inv.apply(other.lambda), self.lambda);
        EndWAutoDescriptor::new(k, other.delta.compose(&self.delta), tau, lambda)
    }

    pub fn inverse(&self) -> EndWAutoDescriptor {
        let k = &self.field;
        let tau_inv = self.tau.inverse(k).expect("invertible").apply_aut(&self.delta);
        let lambda = self.delta.apply(k.inv(self.lambda).expect("nonzero"));
        EndWAutoDescriptor { field: k.clone(), delta: self.delta.inverse(), tau: tau_inv, lambda }
    }
}

// ---- GL2 -----------------------------------------------------------------

/// A multiplicative map `GL2(K) -> K*` of the form `θ ∘ det`, `θ(u) = u^e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterMap {
    field: Ring,
    exponent: u64,
}

impl CharacterMap {
    pub fn new(field: &Ring, exponent: u64) -> Result<CharacterMap> {
        if !field.is_field() {
            return Err(Error::NotAField(field.to_string()));
        }
        let order = field.size() as u64 - 1;
        Ok(CharacterMap { field: field.clone(), exponent: exponent % order })
    }

    pub fn trivial(field: &Ring) -> CharacterMap {
        CharacterMap { field: field.clone(), exponent: 0 }
    }

    pub fn det(field: &Ring) -> CharacterMap {
        CharacterMap::new(field, 1).expect("field")
    }

    /// All characters of this shape, by increasing exponent.
    pub fn all(field: &Ring) -> Vec<CharacterMap> {
        (0..field.size() as u64 - 1).map(|e| CharacterMap { field: field.clone(), exponent: e }).collect()
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_trivial(&self) -> bool {
        self.exponent == 0
    }

    pub fn theta(&self, u: Elem) -> Elem {
        self.field.pow(u, self.exponent)
    }

    pub fn apply(&self, beta: &Matrix) -> Result<Elem> {
        let d = beta.det(&self.field)?;
        if d == self.field.zero() {
            return Err(Error::Singular);
        }
        Ok(self.theta(d))
    }

    pub fn mul(&self, other: &CharacterMap) -> CharacterMap {
        CharacterMap::new(&self.field, self.exponent + other.exponent).expect("field")
    }

    /// `θ ∘ det ∘ f` for a field automorphism `f`: `f` is a power map, so
    /// this is again a character.
    pub fn after(&self, f: &RingAut) -> CharacterMap {
        let k = &self.field;
        let order = k.size() as u64 - 1;
        let g = k.primitive_element().expect("field");
        let fg = f.apply(g);
        let e = (1..=order).find(|&e| k.pow(g, e) == fg).expect("f maps units to units");
        CharacterMap::new(k, self.exponent * e).expect("field")
    }

    pub fn describe(&self) -> String {
        match self.exponent {
            0 => "trivial".into(),
            1 => "det".into(),
            e => format!("det^{e}"),
        }
    }
}

/// `χ(β) · τ f(β) τ^-1`.
pub fn dieudonne_case1(chi: &CharacterMap, tau: &Matrix, f: &RingAut, beta: &Matrix) -> Result<Matrix> {
    let k = &chi.field;
    let tau_inv = tau.inverse(k).ok_or(Error::Singular)?;
    let c = chi.apply(beta)?;
    Ok(tau.mul(k, &beta.apply_aut(f))?.mul(k, &tau_inv)?.scale(k, c))
}

/// `χ(β) · τ f(β̃) τ^-1` with `β̃` the contragredient.
pub fn dieudonne_case2(chi: &CharacterMap, tau: &Matrix, f: &RingAut, beta: &Matrix) -> Result<Matrix> {
    let k = &chi.field;
    let c = chi.apply(beta)?;
    let tilde = contragredient(k, beta)?;
    let tau_inv = tau.inverse(k).ok_or(Error::Singular)?;
    Ok(tau.mul(k, &tilde.apply_aut(f))?.mul(k, &tau_inv)?.scale(k, c))
}

/// Inverse-transpose.
pub fn contragredient(field: &Ring, beta: &Matrix) -> Result<Matrix> {
    Ok(beta.inverse(field).ok_or(Error::Singular)?.transpose())
}

/// `C = [[0, 1], [-1, 0]]`.
pub fn contragredient_conjugator(field: &Ring) -> Matrix {
    Matrix::from_rows(vec![vec![field.zero(), field.one()], vec![field.neg(field.one()), field.zero()]])
        .expect("2x2")
}

/// `det(β)^-1 · C β C^-1`, which equals the contragredient for every
/// invertible 2x2 `β`.
pub fn contragredient_via_conjugation(field: &Ring, beta: &Matrix) -> Result<Matrix> {
    let c = contragredient_conjugator(field);
    let d = beta.det(field)?;
    let d_inv = field.inv(d).ok_or(Error::Singular)?;
    Ok(c.mul(field, beta)?.mul(field, &c.inverse(field).expect("invertible"))?.scale(field, d_inv))
}

/// Every element of `GL2(K)`.
pub fn gl2(field: &Ring) -> Vec<Matrix> {
    Matrix::all(field, 2, 2).filter(|m| m.det(field).is_ok_and(|d| d != field.zero())).collect()
}

/// Checks whether `T` restricted to `Aut W` is `β -> χ(β)·β`; on failure
/// returns the first `β` (in enumeration order) that rules out every `χ`.
pub fn characteristic_probe(t: &EndWAutoDescriptor) -> Result<std::result::Result<CharacterMap, Matrix>> {
    let k = t.field();
    let mut candidates = CharacterMap::all(k);
    for beta in gl2(k) {
        let (image, is_l) = linear_part(&t.act(&l_endo(k, &beta)?)?);
        let d = beta.det(k)?;
        if is_l {
            candidates.retain(|chi| image == beta.scale(k, chi.theta(d)));
        } else {
            candidates.clear();
        }
        if candidates.is_empty() {
            return Ok(Err(beta));
        }
    }
    Ok(Ok(candidates.swap_remove(0)))
}

/// Canonical forms of a rank-one 2x2 matrix under conjugation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankOneForm {
    /// `diag(λ, 0)` with `λ` the trace, when the trace is nonzero.
    Diagonal(Elem),
    /// `[[0, 1], [0, 0]]`, when the trace vanishes.
    Nilpotent,
}

/// Returns the form and a `P` with `P^-1 A P` equal to it.
pub fn rank_one_form(field: &Ring, a: &Matrix) -> Result<(RankOneForm, Matrix)> {
    let k = field;
    if a.rows() != 2 || a.cols() != 2 || a.is_zero() || a.det(k)? != k.zero() {
        return Err(Error::Dimension("expected a rank-one 2x2 matrix".into()));
    }
    let trace = k.add(a.get(0, 0), a.get(1, 1));
    let j = if a.column(0).iter().any(|&e| e != k.zero()) { 0 } else { 1 };
    let (form, cols) = if trace != k.zero() {
        let u = a.column(j);
        let kernel = if a.row(0).iter().any(|&e| e != k.zero()) {
            vec![k.neg(a.get(0, 1)), a.get(0, 0)]
        } else {
            vec![k.neg(a.get(1, 1)), a.get(1, 0)]
        };
        (RankOneForm::Diagonal(trace), [u, kernel])
    } else {
        let mut v = vec![k.zero(); 2];
        v[j] = k.one();
        (RankOneForm::Nilpotent, [a.column(j), v])
    };
    let p = Matrix::from_rows(vec![vec![cols[0][0], cols[1][0]], vec![cols[0][1], cols[1][1]]])?;
    Ok((form, p))
}

impl RankOneForm {
    pub fn matrix(&self, field: &Ring) -> Matrix {
        let mut m = Matrix::zeros(2, 2);
        match self {
            RankOneForm::Diagonal(l) => m.set(0, 0, *l),
            RankOneForm::Nilpotent => m.set(0, 1, field.one()),
        }
        m
    }
}
