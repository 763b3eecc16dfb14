//! Free left modules over a finite ring, their homomorphisms, semi-linear
//! maps, and recovery of a ring automorphism from an object-fixing
//! automorphism of the category of free modules.
//!
//! Conventions: a homomorphism `KX -> KY` is stored as a `|Y| x |X|` matrix
//! whose column `j` holds the coordinates of the image of `x_j`. Scalars act
//! on the left, so applying `m` to coordinates `v` gives
//! `(m v)_i = sum_j v_j * m_ij`, and composition `f·g` means "apply `g`
//! first". Over a noncommutative ring this makes `End Kx0` anti-isomorphic
//! to the multiplicative semigroup of `K`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::{Elem, Ring, RingAut};
use crate::rng::Lcg64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeModule {
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModuleHom {
    source: usize,
    target: usize,
    matrix: Matrix,
}

impl ModuleHom {
    pub fn new(source: usize, target: usize, matrix: Matrix) -> Result<ModuleHom> {
        if source == 0 || target == 0 {
            return Err(Error::Dimension("free modules have rank at least 1".into()));
        }
        if matrix.rows() != target || matrix.cols() != source {
            return Err(Error::Dimension(format!(
                "a hom of rank {source} -> {target} needs a {target}x{source} matrix, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(ModuleHom { source, target, matrix })
    }

    /// Hom whose `j`-th column is `images[j]`.
    pub fn from_images(target: usize, images: &[Vec<Elem>]) -> Result<ModuleHom> {
        let source = images.len();
        let mut m = Matrix::zeros(target, source);
        for (j, img) in images.iter().enumerate() {
            if img.len() != target {
                return Err(Error::Dimension("image has the wrong length".into()));
            }
            for (i, &e) in img.iter().enumerate() {
                m.set(i, j, e);
            }
        }
        ModuleHom::new(source, target, m)
    }

    pub fn identity(ring: &Ring, rank: usize) -> ModuleHom {
        ModuleHom { source: rank, target: rank, matrix: Matrix::identity(ring, rank) }
    }

    pub fn zero(source: usize, target: usize) -> ModuleHom {
        ModuleHom { source, target, matrix: Matrix::zeros(target, source) }
    }

    /// `ν_α : x0 -> α x0` on the cyclic module.
    pub fn scalar(alpha: Elem) -> ModuleHom {
        ModuleHom { source: 1, target: 1, matrix: Matrix::scalar(1, alpha) }
    }

    /// `ε_i : Kx0 -> KX`, `x0 -> x_i` (0-based `i`).
    pub fn injection(ring: &Ring, i: usize, rank: usize) -> ModuleHom {
        let mut m = Matrix::zeros(rank, 1);
        m.set(i, 0, ring.one());
        ModuleHom { source: 1, target: rank, matrix: m }
    }

    /// `π_i : KX -> Kx_i`, `x_i -> x_i`, other basis vectors to 0.
    pub fn projection(ring: &Ring, i: usize, rank: usize) -> ModuleHom {
        let mut m = Matrix::zeros(1, rank);
        m.set(0, i, ring.one());
        ModuleHom { source: rank, target: 1, matrix: m }
    }

    /// The shear `s^α`: `x1 -> x1 + α x2`, `x2 -> x2`.
    pub fn shear(ring: &Ring, alpha: Elem) -> ModuleHom {
        let mut m = Matrix::identity(ring, 2);
        m.set(1, 0, alpha);
        ModuleHom { source: 2, target: 2, matrix: m }
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Matrix with row `i` holding the image of `x_i`: the layout used when
    /// writing a shear as `[[1, α], [0, 1]]`.
    pub fn row_layout(&self) -> Matrix {
        self.matrix.transpose()
    }

    pub fn image_of_basis(&self, j: usize) -> Vec<Elem> {
        self.matrix.column(j)
    }

    /// `self · other`, i.e. `other` first.
    pub fn compose(&self, ring: &Ring, other: &ModuleHom) -> Result<ModuleHom> {
        if self.source != other.target {
            return Err(Error::Dimension(format!(
                "cannot compose rank {} -> {} after {} -> {}",
                self.source, self.target, other.source, other.target
            )));
        }
        let mut m = Matrix::zeros(self.target, other.source);
        for i in 0..self.target {
            for k in 0..other.source {
                let mut acc = ring.zero();
                for j in 0..self.source {
                    acc = ring.add(acc, ring.mul(other.matrix.get(j, k), self.matrix.get(i, j)));
                }
                m.set(i, k, acc);
            }
        }
        Ok(ModuleHom { source: other.source, target: self.target, matrix: m })
    }

    pub fn apply(&self, ring: &Ring, v: &[Elem]) -> Result<Vec<Elem>> {
        if v.len() != self.source {
            return Err(Error::Dimension(format!("vector of length {} for rank {}", v.len(), self.source)));
        }
        Ok((0..self.target)
            .map(|i| {
                v.iter()
                    .enumerate()
                    .fold(ring.zero(), |acc, (j, &vj)| ring.add(acc, ring.mul(vj, self.matrix.get(i, j))))
            })
            .collect())
    }

    pub fn inverse(&self, ring: &Ring) -> Option<ModuleHom> {
        if self.source != self.target {
            return None;
        }
        let inv = self.matrix.transpose().inverse(ring)?.transpose();
        Some(ModuleHom { source: self.source, target: self.target, matrix: inv })
    }

    pub fn is_invertible(&self, ring: &Ring) -> bool {
        self.inverse(ring).is_some()
    }

    /// `σ̂(ν) = σ_Y ν σ_X^-1`, which is `σ` applied to every matrix entry.
    pub fn sigma_hat(&self, sigma: &RingAut) -> ModuleHom {
        ModuleHom { source: self.source, target: self.target, matrix: self.matrix.apply_aut(sigma) }
    }

    pub fn random(ring: &Ring, rng: &mut Lcg64, source: usize, target: usize) -> ModuleHom {
        ModuleHom { source, target, matrix: Matrix::random(ring, rng, target, source) }
    }

    pub fn random_invertible(ring: &Ring, rng: &mut Lcg64, rank: usize) -> ModuleHom {
        // Composition multiplies over the opposite ring, so invertibility is
        // that of the transpose.
        ModuleHom { source: rank, target: rank, matrix: Matrix::random_invertible(ring, rng, rank).transpose() }
    }

    /// Every hom of the given shape, for exhaustive checks.
    pub fn all(ring: &Ring, source: usize, target: usize) -> impl Iterator<Item = ModuleHom> + '_ {
        Matrix::all(ring, target, source).map(move |matrix| ModuleHom { source, target, matrix })
    }

    pub fn format(&self, ring: &Ring) -> String {
        self.matrix.format(ring)
    }
}

/// Left scalar multiple of a coordinate vector.
pub fn scale_vector(ring: &Ring, c: Elem, v: &[Elem]) -> Vec<Elem> {
    v.iter().map(|&x| ring.mul(c, x)).collect()
}

fn format_vector(ring: &Ring, v: &[Elem]) -> String {
    let parts: Vec<String> = v.iter().map(|&e| ring.format(e)).collect();
    format!("({})", parts.join(","))
}

// ---- End Kx0 and the multiplicative semigroup -----------------------------

/// The correspondence `ν_α <-> α` between `End Kx0` and `(K, ·)`.
#[derive(Debug, Clone)]
pub struct CyclicEnds {
    ring: Ring,
}

pub fn cyclic_end_to_units(ring: &Ring) -> CyclicEnds {
    CyclicEnds { ring: ring.clone() }
}

impl CyclicEnds {
    pub fn element_of(&self, nu: &ModuleHom) -> Result<Elem> {
        if (nu.source, nu.target) != (1, 1) {
            return Err(Error::Dimension("not an endomorphism of the cyclic module".into()));
        }
        Ok(nu.matrix.get(0, 0))
    }

    pub fn endomorphism_of(&self, alpha: Elem) -> ModuleHom {
        ModuleHom::scalar(alpha)
    }

    pub fn endomorphisms(&self) -> impl Iterator<Item = ModuleHom> + '_ {
        self.ring.elements().map(ModuleHom::scalar)
    }

    /// Checks `map(f·g) = map(g)·map(f)` on every pair; returns the first
    /// violating pair.
    pub fn check_antiisomorphism(&self) -> std::result::Result<usize, (Elem, Elem)> {
        let k = &self.ring;
        let mut checked = 0;
        for f in self.endomorphisms() {
            for g in self.endomorphisms() {
                let fg = f.compose(k, &g).expect("rank 1");
                let (a, b) = (self.element_of(&f).unwrap(), self.element_of(&g).unwrap());
                if self.element_of(&fg).unwrap() != k.mul(b, a) {
                    return Err((a, b));
                }
                checked += 1;
            }
        }
        Ok(checked)
    }
}

/// An automorphism of the multiplicative semigroup `(K, ·)`, as a table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultAutTable {
    table: Vec<Elem>,
}

impl MultAutTable {
    /// Validates bijectivity and multiplicativity on every pair.
    pub fn new(ring: &Ring, table: Vec<Elem>) -> Result<MultAutTable> {
        if table.len() != ring.size() {
            return Err(Error::NotMultiplicative(format!("{} entries for {} elements", table.len(), ring.size())));
        }
        let mut seen = vec![false; ring.size()];
        for &e in &table {
            if std::mem::replace(&mut seen[e.index()], true) {
                return Err(Error::NotMultiplicative(format!("{} is hit twice", ring.format(e))));
            }
        }
        for a in ring.elements() {
            for b in ring.elements() {
                if table[ring.mul(a, b).index()] != ring.mul(table[a.index()], table[b.index()]) {
                    return Err(Error::NotMultiplicative(format!(
                        "fails at ({}, {})",
                        ring.format(a),
                        ring.format(b)
                    )));
                }
            }
        }
        Ok(MultAutTable { table })
    }

    pub fn identity(ring: &Ring) -> MultAutTable {
        MultAutTable { table: ring.elements().collect() }
    }

    pub fn from_ring_aut(sigma: &RingAut) -> MultAutTable {
        MultAutTable { table: sigma.table().to_vec() }
    }

    /// `α -> α^e` on a field, `0 -> 0`.
    pub fn power_map(ring: &Ring, e: u64) -> Result<MultAutTable> {
        if !ring.is_field() {
            return Err(Error::NotAField(ring.to_string()));
        }
        let table = ring.elements().map(|a| if a == ring.zero() { a } else { ring.pow(a, e) }).collect();
        MultAutTable::new(ring, table)
    }

    /// All automorphisms of the multiplicative semigroup of a field: the
    /// power maps `α -> α^e` with `gcd(e, q - 1) = 1`, in increasing `e`.
    pub fn all_for_field(ring: &Ring) -> Result<Vec<MultAutTable>> {
        let order = ring.size() as u64 - 1;
        let gcd = |mut a: u64, mut b: u64| {
            while b != 0 {
                (a, b) = (b, a % b);
            }
            a
        };
        (1..=order.max(1))
            .filter(|&e| gcd(e, order) == 1)
            .map(|e| MultAutTable::power_map(ring, e))
            .collect()
    }

    #[inline]
    pub fn apply(&self, a: Elem) -> Elem {
        self.table[a.index()]
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(i, e)| e.index() == i)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MultAutTable) -> MultAutTable {
        MultAutTable { table: other.table.iter().map(|&e| self.apply(e)).collect() }
    }

    pub fn inverse(&self) -> MultAutTable {
        let mut inv = vec![Elem::ZERO; self.table.len()];
        for (i, e) in self.table.iter().enumerate() {
            inv[e.index()] = Elem(i as u16);
        }
        MultAutTable { table: inv }
    }
}

/// The automorphism `σ*` of `End Kx0` induced by a multiplicative
/// automorphism: `ν_α -> ν_{α^σ}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndAut {
    sigma: MultAutTable,
}

pub fn lift_mult_aut(sigma: &MultAutTable) -> EndAut {
    EndAut { sigma: sigma.clone() }
}

impl EndAut {
    pub fn apply(&self, nu: &ModuleHom) -> Result<ModuleHom> {
        if (nu.source, nu.target) != (1, 1) {
            return Err(Error::Dimension("not an endomorphism of the cyclic module".into()));
        }
        Ok(ModuleHom::scalar(self.sigma.apply(nu.matrix.get(0, 0))))
    }

    pub fn compose(&self, other: &EndAut) -> EndAut {
        EndAut { sigma: self.sigma.compose(&other.sigma) }
    }

    pub fn table(&self) -> &MultAutTable {
        &self.sigma
    }
}

/// Reads the multiplicative table of an arbitrary map on `End Kx0` and
/// checks that it is a semigroup automorphism.
pub fn lower_end_aut(ring: &Ring, f: impl Fn(&ModuleHom) -> ModuleHom) -> Result<MultAutTable> {
    let table = ring
        .elements()
        .map(|a| {
            let img = f(&ModuleHom::scalar(a));
            if (img.source, img.target) != (1, 1) {
                return Err(Error::Dimension("image is not an endomorphism of the cyclic module".into()));
            }
            Ok(img.matrix.get(0, 0))
        })
        .collect::<Result<Vec<_>>>()?;
    MultAutTable::new(ring, table)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditivityReport {
    pub additive: bool,
    pub witness: Option<(Elem, Elem)>,
}

/// Decides whether a multiplicative table is also additive. Pairs are
/// scanned in index order, so the witness is the first violating pair.
pub fn additivity_test(ring: &Ring, table: &MultAutTable) -> AdditivityReport {
    for a in ring.elements() {
        for b in ring.elements() {
            if table.apply(ring.add(a, b)) != ring.add(table.apply(a), table.apply(b)) {
                return AdditivityReport { additive: false, witness: Some((a, b)) };
            }
        }
    }
    AdditivityReport { additive: true, witness: None }
}

// ---- semi-linear maps ------------------------------------------------------

/// `v -> M σ(v)`: additive, with `m(λ v) = λ^σ m(v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiLinearMap {
    pub sigma: RingAut,
    pub hom: ModuleHom,
}

impl SemiLinearMap {
    pub fn linear(ring: &Ring, hom: ModuleHom) -> SemiLinearMap {
        SemiLinearMap { sigma: ring.identity_aut(), hom }
    }

    /// The coordinate map `σ_X`.
    pub fn coordinate(ring: &Ring, sigma: &RingAut, rank: usize) -> SemiLinearMap {
        SemiLinearMap { sigma: sigma.clone(), hom: ModuleHom::identity(ring, rank) }
    }

    pub fn apply(&self, ring: &Ring, v: &[Elem]) -> Result<Vec<Elem>> {
        let twisted: Vec<Elem> = v.iter().map(|&x| self.sigma.apply(x)).collect();
        self.hom.apply(ring, &twisted)
    }

    /// `self ∘ other`.
    pub fn compose(&self, ring: &Ring, other: &SemiLinearMap) -> Result<SemiLinearMap> {
        let hom = self.hom.compose(ring, &other.hom.sigma_hat(&self.sigma))?;
        Ok(SemiLinearMap { sigma: self.sigma.compose(&other.sigma), hom })
    }

    pub fn inverse(&self, ring: &Ring) -> Option<SemiLinearMap> {
        let inv = self.sigma.inverse();
        let hom = self.hom.inverse(ring)?.sigma_hat(&inv);
        Some(SemiLinearMap { sigma: inv, hom })
    }

    /// The underlying hom when `σ` is the identity.
    pub fn as_hom(&self) -> Option<&ModuleHom> {
        self.sigma.is_identity().then_some(&self.hom)
    }
}

pub fn semilinear_apply(ring: &Ring, m: &SemiLinearMap, v: &[Elem]) -> Result<Vec<Elem>> {
    m.apply(ring, v)
}

pub fn sigma_hat(sigma: &RingAut, nu: &ModuleHom) -> ModuleHom {
    nu.sigma_hat(sigma)
}

/// `σ_Y ∘ ν ∘ σ_X^-1` assembled from semi-linear maps rather than by the
/// entrywise shortcut. The result is linear.
pub fn sigma_hat_composite(ring: &Ring, sigma: &RingAut, nu: &ModuleHom) -> Result<SemiLinearMap> {
    let left = SemiLinearMap::coordinate(ring, sigma, nu.target);
    let right = SemiLinearMap::coordinate(ring, &sigma.inverse(), nu.source);
    left.compose(ring, &SemiLinearMap::linear(ring, nu.clone()))?.compose(ring, &right)
}

// ---- category automorphisms ---------------------------------------------

/// Anything that acts on homs between free modules of the category while
/// fixing objects.
pub trait CategoryAction {
    fn ring(&self) -> &Ring;
    fn act(&self, nu: &ModuleHom) -> ModuleHom;
}

/// `ν -> s_Y ∘ σ̂(ν) ∘ s_X^-1` with one invertible twist per rank.
#[derive(Debug, Clone)]
pub struct CategoryAutoDescriptor {
    ring: Ring,
    sigma: RingAut,
    twists: BTreeMap<usize, (ModuleHom, ModuleHom)>,
}

impl CategoryAutoDescriptor {
    pub fn new(ring: &Ring, sigma: RingAut) -> CategoryAutoDescriptor {
        CategoryAutoDescriptor { ring: ring.clone(), sigma, twists: BTreeMap::new() }
    }

    pub fn with_twist(mut self, twist: ModuleHom) -> Result<CategoryAutoDescriptor> {
        let inv = twist.inverse(&self.ring).ok_or(Error::Singular)?;
        self.twists.insert(twist.source(), (twist, inv));
        Ok(self)
    }

    /// Random invertible twists on every rank `1..=max_rank`.
    pub fn with_random_twists(mut self, rng: &mut Lcg64, max_rank: usize) -> CategoryAutoDescriptor {
        for rank in 1..=max_rank {
            let t = ModuleHom::random_invertible(&self.ring, rng, rank);
            let inv = t.inverse(&self.ring).expect("invertible by construction");
            self.twists.insert(rank, (t, inv));
        }
        self
    }

    pub fn sigma(&self) -> &RingAut {
        &self.sigma
    }

    pub fn twist(&self, rank: usize) -> ModuleHom {
        self.twists.get(&rank).map_or_else(|| ModuleHom::identity(&self.ring, rank), |(t, _)| t.clone())
    }

    pub fn twist_ranks(&self) -> impl Iterator<Item = usize> + '_ {
        self.twists.keys().copied()
    }

    fn twist_inverse(&self, rank: usize) -> ModuleHom {
        self.twists.get(&rank).map_or_else(|| ModuleHom::identity(&self.ring, rank), |(_, i)| i.clone())
    }

    /// `self ∘ other` as a descriptor: `σ = σ_a σ_b`, `s_r = s^a_r ∘ σ̂_a(s^b_r)`.
    pub fn compose(&self, other: &CategoryAutoDescriptor) -> Result<CategoryAutoDescriptor> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring.to_string(), other.ring.to_string()));
        }
        let mut out = CategoryAutoDescriptor::new(&self.ring, self.sigma.compose(&other.sigma));
        let ranks: std::collections::BTreeSet<usize> = self.twist_ranks().chain(other.twist_ranks()).collect();
        for r in ranks {
            let t = self.twist(r).compose(&self.ring, &other.twist(r).sigma_hat(&self.sigma))?;
            out = out.with_twist(t)?;
        }
        Ok(out)
    }

    /// `σ^-1` with twists `σ̂^-1(s_r^-1)`.
    pub fn inverse(&self) -> CategoryAutoDescriptor {
        let inv = self.sigma.inverse();
        let mut out = CategoryAutoDescriptor::new(&self.ring, inv.clone());
        for (&r, (t, ti)) in &self.twists {
            out.twists.insert(r, (ti.sigma_hat(&inv), t.sigma_hat(&inv)));
        }
        out
    }
}

impl CategoryAction for CategoryAutoDescriptor {
    fn ring(&self) -> &Ring {
        &self.ring
    }

    fn act(&self, nu: &ModuleHom) -> ModuleHom {
        let k = &self.ring;
        let inner = nu.sigma_hat(&self.sigma).compose(k, &self.twist_inverse(nu.source)).expect("ranks agree");
        self.twist(nu.target).compose(k, &inner).expect("ranks agree")
    }
}

/// Outcome of [`recover_ring_aut`].
#[derive(Debug, Clone)]
pub struct Recovery {
    pub sigma: RingAut,
    pub relations_checked: usize,
    /// Coordinates of `y1`, `y2` as rows.
    pub y_basis: Matrix,
    /// `(α, matrix of φ(s^α) in the basis y1, y2)` in row layout, for every α.
    pub shear_images: Vec<(Elem, Matrix)>,
}

/// Extracts the ring automorphism carried by an object-fixing category
/// automorphism, using only its action on the injections, projections,
/// shears and scalar endomorphisms of ranks 1 and 2.
pub fn recover_ring_aut(phi: &dyn CategoryAction) -> Result<Recovery> {
    let k = phi.ring().clone();
    let x0 = [k.one()];
    let fail = |what: String| Err(Error::Recovery(what));
    let (eps1, eps2) = (ModuleHom::injection(&k, 0, 2), ModuleHom::injection(&k, 1, 2));
    let (pi1, pi2) = (ModuleHom::projection(&k, 0, 2), ModuleHom::projection(&k, 1, 2));
    let (phi_pi1, phi_pi2) = (phi.act(&pi1), phi.act(&pi2));

    let y1 = phi.act(&eps1).apply(&k, &x0)?;
    let y2 = phi.act(&eps2).apply(&k, &x0)?;
    let basis = Matrix::from_rows(vec![y1.clone(), y2.clone()])?;
    let basis_inv = basis
        .inverse(&k)
        .ok_or_else(|| Error::NotABasis(format!("{} {}", format_vector(&k, &y1), format_vector(&k, &y2))))?;
    let mut relations = 0usize;
    let mut check = |ok: bool, what: &str| -> Result<()> {
        relations += 1;
        if ok {
            Ok(())
        } else {
            Err(Error::Recovery(what.to_string()))
        }
    };

    let zero = vec![k.zero()];
    let y1_0 = phi_pi1.apply(&k, &y1)?;
    let y2_0 = phi_pi2.apply(&k, &y2)?;
    check(phi_pi1.apply(&k, &y2)? == zero, "φ(π1)(y2) != 0")?;
    check(phi_pi2.apply(&k, &y1)? == zero, "φ(π2)(y1) != 0")?;
    let delta1 = pi1.compose(&k, &eps1)?;
    let delta2 = pi2.compose(&k, &eps2)?;
    check(phi.act(&delta1).apply(&k, &x0)? == y1_0, "φ(π1)(y1) != φ(δ1)(x0)")?;
    check(phi.act(&delta2).apply(&k, &x0)? == y2_0, "φ(π2)(y2) != φ(δ2)(x0)")?;

    let mut table = Vec::with_capacity(k.size());
    let mut shear_images = Vec::with_capacity(k.size());
    for alpha in k.elements() {
        let alpha_sigma = match phi.act(&ModuleHom::scalar(alpha)) {
            nu if (nu.source, nu.target) == (1, 1) => nu.matrix.get(0, 0),
            _ => return fail("image of a scalar endomorphism is not one".into()),
        };
        let s = phi.act(&ModuleHom::shear(&k, alpha));
        let s_y1 = s.apply(&k, &y1)?;
        let s_y2 = s.apply(&k, &y2)?;
        check(s_y2 == y2, "φ(s^α)(y2) != y2")?;
        check(phi_pi1.apply(&k, &s_y1)? == y1_0, "φ(π1)φ(s^α)(y1) != y1⁰")?;
        check(
            phi_pi2.apply(&k, &s_y1)? == scale_vector(&k, alpha_sigma, &y2_0),
            "φ(π2)φ(s^α)(y1) != α^σ y2⁰",
        )?;
        // coordinates of φ(s^α)(y1) in the basis (y1, y2): λ = z B^-1
        let z = Matrix::from_rows(vec![s_y1])?;
        let lambda = z.mul(&k, &basis_inv)?.row(0);
        check(lambda[0] == k.one(), "λ1 != 1")?;
        check(lambda[1] == alpha_sigma, "λ2 != α^σ")?;
        let in_basis = Matrix::from_rows(vec![lambda.clone(), vec![k.zero(), k.one()]])?;
        shear_images.push((alpha, in_basis));
        table.push(lambda[1]);
    }

    let mult = MultAutTable::new(&k, table)?;
    let add = additivity_test(&k, &mult);
    if let Some((a, b)) = add.witness {
        return fail(format!("extracted table is not additive at ({}, {})", k.format(a), k.format(b)));
    }
    let sigma = k.aut_from_table(mult.table().to_vec())?;
    Ok(Recovery { sigma, relations_checked: relations, y_basis: basis, shear_images })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(s: &str) -> Ring {
        s.parse().unwrap()
    }

    #[test]
    fn cyclic_composition_reverses_order_in_gf4() {
        let k = ring("gf(4)");
        let t = k.parse_elem("t").unwrap();
        let t1 = k.parse_elem("t+1").unwrap();
        let prod = ModuleHom::scalar(t).compose(&k, &ModuleHom::scalar(t1)).unwrap();
        // ν_t · ν_{t+1} = ν_{(t+1) t} = ν_1
        assert_eq!(prod, ModuleHom::identity(&k, 1));
    }

    #[test]
    fn identity_is_neutral_and_pi1_eps2_vanishes() {
        let k = ring("z(6)");
        let mut rng = Lcg64::new(1);
        let f = ModuleHom::random(&k, &mut rng, 2, 3);
        assert_eq!(ModuleHom::identity(&k, 3).compose(&k, &f).unwrap(), f);
        let z = ModuleHom::projection(&k, 0, 2).compose(&k, &ModuleHom::injection(&k, 1, 2)).unwrap();
        assert_eq!(z, ModuleHom::zero(1, 1));
        assert!(ModuleHom::identity(&k, 2).compose(&k, &f).is_err());
    }

    #[test]
    fn noncommutative_composition_matches_pointwise_application() {
        let k = ring("m2(gf(2))");
        let mut rng = Lcg64::new(5);
        for _ in 0..50 {
            let f = ModuleHom::random(&k, &mut rng, 2, 2);
            let g = ModuleHom::random(&k, &mut rng, 3, 2);
            let v: Vec<Elem> = (0..3).map(|_| Elem(rng.below(16) as u16)).collect();
            let lhs = f.compose(&k, &g).unwrap().apply(&k, &v).unwrap();
            let rhs = f.apply(&k, &g.apply(&k, &v).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn antiisomorphism_over_gf5_and_m2() {
        assert_eq!(cyclic_end_to_units(&ring("gf(5)")).check_antiisomorphism(), Ok(25));
        assert_eq!(cyclic_end_to_units(&ring("m2(gf(2))")).check_antiisomorphism(), Ok(256));
        let c = cyclic_end_to_units(&ring("gf(5)"));
        assert_eq!(c.element_of(&ModuleHom::identity(&ring("gf(5)"), 1)).unwrap(), Elem(1));
    }

    #[test]
    fn lifted_frobenius_sends_nu_t_to_nu_t_plus_one() {
        let k = ring("gf(4)");
        let frob = MultAutTable::from_ring_aut(&k.frobenius(1).unwrap());
        let lifted = lift_mult_aut(&frob);
        let t = k.parse_elem("t").unwrap();
        let img = lifted.apply(&ModuleHom::scalar(t)).unwrap();
        assert_eq!(img, ModuleHom::scalar(k.parse_elem("t+1").unwrap()));
        assert_eq!(lift_mult_aut(&MultAutTable::identity(&k)).apply(&img).unwrap(), img);
    }

    #[test]
    fn fifth_power_on_f7_is_multiplicative_but_not_additive() {
        let k = ring("gf(7)");
        let s = MultAutTable::power_map(&k, 5).unwrap();
        let lifted = lift_mult_aut(&s);
        for a in k.elements() {
            for b in k.elements() {
                let (na, nb) = (ModuleHom::scalar(a), ModuleHom::scalar(b));
                let lhs = lifted.apply(&na.compose(&k, &nb).unwrap()).unwrap();
                let rhs = lifted.apply(&na).unwrap().compose(&k, &lifted.apply(&nb).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        let report = additivity_test(&k, &s);
        assert!(!report.additive);
        assert_eq!(report.witness, Some((k.from_int(1), k.from_int(1))));
        // 2^5 = 32 = 4 mod 7
        assert_eq!(s.apply(k.from_int(2)), k.from_int(4));
        assert!(MultAutTable::power_map(&k, 2).is_err());
    }

    #[test]
    fn additivity_of_identity_and_frobenius() {
        let k = ring("gf(4)");
        assert!(additivity_test(&k, &MultAutTable::identity(&k)).additive);
        assert!(additivity_test(&k, &MultAutTable::from_ring_aut(&k.frobenius(1).unwrap())).additive);
    }

    #[test]
    fn semilinear_examples_over_gf4() {
        let k = ring("gf(4)");
        let frob = k.frobenius(1).unwrap();
        let t = k.parse_elem("t").unwrap();
        let m = SemiLinearMap { sigma: frob.clone(), hom: ModuleHom::identity(&k, 2) };
        assert_eq!(
            semilinear_apply(&k, &m, &[t, k.one()]).unwrap(),
            vec![k.parse_elem("t+1").unwrap(), k.one()]
        );
        let v = [k.one(), k.zero()];
        let lhs = m.apply(&k, &scale_vector(&k, t, &v)).unwrap();
        let rhs = scale_vector(&k, frob.apply(t), &m.apply(&k, &v).unwrap());
        assert_eq!(lhs, rhs);
        assert!(m.apply(&k, &[t]).is_err());
    }

    #[test]
    fn sigma_hat_on_diagonal() {
        let k = ring("gf(4)");
        let frob = k.frobenius(1).unwrap();
        let nu = ModuleHom::new(2, 2, Matrix::parse(&k, "[[t,0],[0,1]]").unwrap()).unwrap();
        assert_eq!(sigma_hat(&frob, &nu).format(&k), "[[t+1,0],[0,1]]");
        assert_eq!(sigma_hat(&k.identity_aut(), &nu), nu);
        let composite = sigma_hat_composite(&k, &frob, &nu).unwrap();
        assert_eq!(composite.as_hom(), Some(&sigma_hat(&frob, &nu)));
    }

    #[test]
    fn shear_examples() {
        let k = ring("gf(2)");
        assert_eq!(ModuleHom::shear(&k, k.zero()), ModuleHom::identity(&k, 2));
        let s = ModuleHom::shear(&k, k.one());
        assert_eq!(s.compose(&k, &s).unwrap(), ModuleHom::identity(&k, 2));
        assert_eq!(s.row_layout().format(&k), "[[1,1],[0,1]]");
        let z = ring("z(6)");
        for a in z.elements() {
            for b in z.elements() {
                let lhs = ModuleHom::shear(&z, a).compose(&z, &ModuleHom::shear(&z, b)).unwrap();
                assert_eq!(lhs, ModuleHom::shear(&z, z.add(a, b)));
            }
        }
    }

    #[test]
    fn recovers_frobenius_over_gf4() {
        let k = ring("gf(4)");
        let frob = k.frobenius(1).unwrap();
        let phi = CategoryAutoDescriptor::new(&k, frob.clone());
        let r = recover_ring_aut(&phi).unwrap();
        assert_eq!(r.sigma, frob);
        assert!(r.relations_checked > 0);
    }

    #[test]
    fn twist_cancels_over_gf5() {
        let k = ring("gf(5)");
        let mut rng = Lcg64::new(11);
        for _ in 0..10 {
            let phi = CategoryAutoDescriptor::new(&k, k.identity_aut()).with_random_twists(&mut rng, 2);
            assert!(recover_ring_aut(&phi).unwrap().sigma.is_identity());
        }
    }

    #[test]
    fn all_of_aut_gf8_round_trips() {
        let k = ring("gf(8)");
        let mut rng = Lcg64::new(12);
        for sigma in k.automorphisms().unwrap() {
            for _ in 0..20 {
                let phi = CategoryAutoDescriptor::new(&k, sigma.clone()).with_random_twists(&mut rng, 2);
                let r = recover_ring_aut(&phi).unwrap();
                assert_eq!(r.sigma, sigma);
                for (alpha, m) in &r.shear_images {
                    assert_eq!(m.row(0), vec![k.one(), sigma.apply(*alpha)]);
                }
            }
        }
    }

    struct NotAFunctor(Ring);

    impl CategoryAction for NotAFunctor {
        fn ring(&self) -> &Ring {
            &self.0
        }
        fn act(&self, nu: &ModuleHom) -> ModuleHom {
            ModuleHom::zero(nu.source(), nu.target())
        }
    }

    #[test]
    fn degenerate_action_is_rejected() {
        let k = ring("gf(3)");
        assert!(matches!(recover_ring_aut(&NotAFunctor(k)), Err(Error::NotABasis(_))));
    }

    #[test]
    fn descriptor_closure_and_inverse() {
        let k = ring("gf(9)");
        let mut rng = Lcg64::new(4);
        let a = CategoryAutoDescriptor::new(&k, k.frobenius(1).unwrap()).with_random_twists(&mut rng, 3);
        let b = CategoryAutoDescriptor::new(&k, k.frobenius(1).unwrap()).with_random_twists(&mut rng, 3);
        let ab = a.compose(&b).unwrap();
        assert!(ab.sigma().is_identity());
        for _ in 0..100 {
            let (s, t) = (1 + rng.below(3), 1 + rng.below(3));
            let nu = ModuleHom::random(&k, &mut rng, s, t);
            assert_eq!(ab.act(&nu), a.act(&b.act(&nu)));
            assert_eq!(a.inverse().act(&a.act(&nu)), nu);
        }
    }
}
