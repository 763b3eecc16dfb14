//! Exact arithmetic for small finite rings and their automorphism groups.
//!
//! Every ring has at most [`MAX_RING_SIZE`] elements. Elements are stored as
//! dense indices into precomputed addition and multiplication tables; the
//! index is the base-`p` (or base-`n`) encoding of the element's canonical
//! coordinates, so index equality is coordinate equality.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

pub const MAX_RING_SIZE: usize = 512;

/// Modulus polynomials for the extension fields, coefficients low to high.
const FIXED_MODULI: &[(u32, u32, u32, &[u32])] = &[
    (4, 2, 2, &[1, 1, 1]),
    (8, 2, 3, &[1, 1, 0, 1]),
    (9, 3, 2, &[1, 0, 1]),
    (16, 2, 4, &[1, 1, 0, 0, 1]),
    (25, 5, 2, &[2, 0, 1]),
    (27, 3, 3, &[1, 2, 0, 1]),
];

/// An element of some [`Ring`]. Meaningless without the ring it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub(crate) u16);

impl Elem {
    pub const ZERO: Elem = Elem(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingSpec {
    PrimeField { p: u32 },
    /// `modulus` is monic of degree `k`, coefficients low to high.
    Extension { p: u32, k: u32, modulus: Vec<u32> },
    Integers { n: u32 },
    /// Full 2x2 matrices over the prime field of order `p`.
    Matrix2 { p: u32 },
}

pub(crate) fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn prime_power(q: u32) -> Option<(u32, u32)> {
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut k = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

impl RingSpec {
    pub fn gf(q: u32) -> Result<RingSpec> {
        let (p, k) = prime_power(q).ok_or(Error::NotPrime(q))?;
        if k == 1 {
            return Ok(RingSpec::PrimeField { p });
        }
        let (_, _, _, m) = FIXED_MODULI
            .iter()
            .find(|(qq, ..)| *qq == q)
            .ok_or(Error::NoFixedModulus(q))?;
        Ok(RingSpec::Extension { p, k, modulus: m.to_vec() })
    }

    pub fn size(&self) -> usize {
        match *self {
            RingSpec::PrimeField { p } => p as usize,
            RingSpec::Extension { p, k, .. } => (p as usize).pow(k),
            RingSpec::Integers { n } => n as usize,
            RingSpec::Matrix2 { p } => (p as usize).pow(4),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            RingSpec::PrimeField { p } | RingSpec::Matrix2 { p } => {
                if !is_prime(*p) {
                    return Err(Error::NotPrime(*p));
                }
            }
            RingSpec::Integers { n } => {
                if *n < 2 {
                    return Err(Error::ModulusTooSmall(*n));
                }
            }
            RingSpec::Extension { p, k, modulus } => {
                if !is_prime(*p) {
                    return Err(Error::NotPrime(*p));
                }
                if *k < 1
                    || modulus.len() != *k as usize + 1
                    || *modulus.last().unwrap() != 1
                    || modulus.iter().any(|c| c >= p)
                {
                    return Err(Error::BadRingSpec(format!("modulus {modulus:?} is not monic of degree {k}")));
                }
                if !poly::is_irreducible(modulus, *p) {
                    return Err(Error::ReducibleModulus(poly::format(modulus)));
                }
            }
        }
        let size = self.size();
        if size > MAX_RING_SIZE {
            return Err(Error::RingTooLarge(size));
        }
        Ok(())
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::PrimeField { p } => write!(f, "gf({p})"),
            RingSpec::Extension { p, k, modulus } => {
                let q = p.pow(*k);
                let fixed = FIXED_MODULI.iter().any(|(qq, _, _, m)| *qq == q && *m == modulus.as_slice());
                if fixed {
                    write!(f, "gf({q})")
                } else {
                    write!(f, "gf({q};{})", poly::format(modulus))
                }
            }
            RingSpec::Integers { n } => write!(f, "z({n})"),
            RingSpec::Matrix2 { p } => write!(f, "m2(gf({p}))"),
        }
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<RingSpec> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::BadRingSpec(s.clone());
        let inner = |prefix: &str| -> Option<String> {
            s.strip_prefix(prefix)?.strip_suffix(')').map(str::to_owned)
        };
        if let Some(arg) = inner("m2(") {
            let p = match RingSpec::from_str(&arg)? {
                RingSpec::PrimeField { p } => p,
                _ => return Err(bad()),
            };
            return Ok(RingSpec::Matrix2 { p });
        }
        if let Some(arg) = inner("gf(") {
            let q: u32 = arg.parse().map_err(|_| bad())?;
            return RingSpec::gf(q);
        }
        if let Some(arg) = inner("z(") {
            let n: u32 = arg.parse().map_err(|_| bad())?;
            return Ok(RingSpec::Integers { n });
        }
        Err(bad())
    }
}

/// Polynomials over a prime field as coefficient vectors, low to high.
pub(crate) mod poly {
    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = trim(a.to_vec());
        let m = trim(m.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm {
            let shift = r.len() - 1 - dm;
            let c = r[r.len() - 1] * lead_inv % p;
            for (i, &mi) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - c * mi % p) % p;
            }
            r = trim(r);
        }
        r
    }

    pub fn inv_mod(a: u32, p: u32) -> u32 {
        (1..p).find(|x| a * x % p == 1).expect("nonzero residue mod a prime")
    }

    /// Irreducible iff no monic polynomial of degree 1..=deg/2 divides it.
    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let deg = m.len() - 1;
        for d in 1..=deg / 2 {
            let count = (p as usize).pow(d as u32);
            for code in 0..count {
                let mut f = Vec::with_capacity(d + 1);
                let mut c = code;
                for _ in 0..d {
                    f.push((c % p as usize) as u32);
                    c /= p as usize;
                }
                f.push(1);
                if rem(m, &f, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    pub fn format(c: &[u32]) -> String {
        let mut parts = Vec::new();
        for (d, &a) in c.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            let coeff = if a == 1 && d > 0 { String::new() } else { a.to_string() };
            let var = match d {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{d}"),
            };
            parts.push(format!("{coeff}{var}"));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }
}

/// A finite ring with exact table-driven arithmetic. Cheap to clone.
#[derive(Clone)]
pub struct Ring(Arc<RingInner>);

struct RingInner {
    spec: RingSpec,
    size: usize,
    base: u32,
    digits: u32,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<Option<u16>>,
    one: u16,
    commutative: bool,
    prime_field: OnceLock<Ring>,
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({})", self.0.spec)
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.spec.fmt(f)
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Ring) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Ring {}

impl Ring {
    pub fn new(spec: RingSpec) -> Result<Ring> {
        spec.validate()?;
        let size = spec.size();
        let (base, digits) = match &spec {
            RingSpec::PrimeField { p } => (*p, 1),
            RingSpec::Integers { n } => (*n, 1),
            RingSpec::Extension { p, k, .. } => (*p, *k),
            RingSpec::Matrix2 { p } => (*p, 4),
        };
        let decode = |i: usize| -> Vec<u32> {
            let mut c = Vec::with_capacity(digits as usize);
            let mut r = i;
            for _ in 0..digits {
                c.push((r % base as usize) as u32);
                r /= base as usize;
            }
            c
        };
        let encode = |c: &[u32]| -> u16 {
            c.iter().rev().fold(0usize, |acc, &d| acc * base as usize + d as usize) as u16
        };
        let coords: Vec<Vec<u32>> = (0..size).map(decode).collect();

        let mul_coords = |a: &[u32], b: &[u32]| -> Vec<u32> {
            let m = base;
            match &spec {
                RingSpec::PrimeField { .. } | RingSpec::Integers { .. } => vec![a[0] * b[0] % m],
                RingSpec::Extension { k, modulus, .. } => {
                    let mut prod = vec![0u32; 2 * *k as usize];
                    for (i, &x) in a.iter().enumerate() {
                        for (j, &y) in b.iter().enumerate() {
                            prod[i + j] = (prod[i + j] + x * y) % m;
                        }
                    }
                    let mut r = poly::rem(&prod, modulus, m);
                    r.resize(*k as usize, 0);
                    r
                }
                RingSpec::Matrix2 { .. } => {
                    // row-major [a, b, c, d]
                    let e = |i: usize, j: usize, x: &[u32]| x[2 * i + j];
                    let mut r = vec![0u32; 4];
                    for i in 0..2 {
                        for j in 0..2 {
                            r[2 * i + j] = (e(i, 0, a) * e(0, j, b) + e(i, 1, a) * e(1, j, b)) % m;
                        }
                    }
                    r
                }
            }
        };

        let mut add = vec![0u16; size * size];
        let mut mul = vec![0u16; size * size];
        for i in 0..size {
            for j in 0..size {
                let s: Vec<u32> = coords[i].iter().zip(&coords[j]).map(|(x, y)| (x + y) % base).collect();
                add[i * size + j] = encode(&s);
                mul[i * size + j] = encode(&mul_coords(&coords[i], &coords[j]));
            }
        }
        let neg: Vec<u16> = (0..size)
            .map(|i| encode(&coords[i].iter().map(|x| (base - x) % base).collect::<Vec<_>>()))
            .collect();
        let one = match &spec {
            RingSpec::Matrix2 { .. } => encode(&[1, 0, 0, 1]),
            _ => 1,
        };
        let inv = (0..size)
            .map(|i| {
                (0..size)
                    .find(|&j| mul[i * size + j] == one && mul[j * size + i] == one)
                    .map(|j| j as u16)
            })
            .collect();
        let commutative = (0..size).all(|i| (0..i).all(|j| mul[i * size + j] == mul[j * size + i]));
        Ok(Ring(Arc::new(RingInner {
            spec,
            size,
            base,
            digits,
            add,
            mul,
            neg,
            inv,
            one,
            commutative,
            prime_field: OnceLock::new(),
        })))
    }

    pub fn spec(&self) -> &RingSpec {
        &self.0.spec
    }

    pub fn size(&self) -> usize {
        self.0.size
    }

    pub fn zero(&self) -> Elem {
        Elem(0)
    }

    pub fn one(&self) -> Elem {
        Elem(self.0.one)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.0.size as u16).map(Elem)
    }

    pub fn units(&self) -> Vec<Elem> {
        self.elements().filter(|&a| self.is_unit(a)).collect()
    }

    pub fn nonzero(&self) -> Vec<Elem> {
        self.elements().filter(|&a| a != Elem::ZERO).collect()
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.0.add[a.index() * self.0.size + b.index()])
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.0.mul[a.index() * self.0.size + b.index()])
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.0.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        self.0.inv[a.index()].map(Elem)
    }

    pub fn is_unit(&self, a: Elem) -> bool {
        self.0.inv[a.index()].is_some()
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Image of an integer under the unique unital map from Z.
    pub fn from_int(&self, n: i64) -> Elem {
        let char = self.characteristic() as i64;
        let r = n.rem_euclid(char) as u16;
        match self.0.spec {
            RingSpec::Matrix2 { p } => Elem(r + r * (p as u16).pow(3)),
            _ => Elem(r),
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.0.base
    }

    pub fn coords(&self, a: Elem) -> Vec<u32> {
        let mut c = Vec::with_capacity(self.0.digits as usize);
        let mut r = a.index();
        for _ in 0..self.0.digits {
            c.push((r % self.0.base as usize) as u32);
            r /= self.0.base as usize;
        }
        c
    }

    pub fn from_coords(&self, c: &[u32]) -> Result<Elem> {
        if c.len() != self.0.digits as usize || c.iter().any(|&d| d >= self.0.base) {
            return Err(Error::BadLiteral(format!("{c:?}")));
        }
        let idx = c.iter().rev().fold(0usize, |acc, &d| acc * self.0.base as usize + d as usize);
        Ok(Elem(idx as u16))
    }

    pub fn is_commutative(&self) -> bool {
        self.0.commutative
    }

    pub fn is_field(&self) -> bool {
        matches!(self.0.spec, RingSpec::PrimeField { .. } | RingSpec::Extension { .. })
    }

    /// The prime field underlying an extension field or a matrix ring.
    pub fn prime_field(&self) -> &Ring {
        self.0.prime_field.get_or_init(|| match self.0.spec {
            RingSpec::PrimeField { .. } | RingSpec::Integers { .. } => self.clone(),
            RingSpec::Extension { p, .. } | RingSpec::Matrix2 { p } => {
                Ring::new(RingSpec::PrimeField { p }).expect("prime field")
            }
        })
    }

    /// A generator of the cyclic unit group, for fields.
    pub fn primitive_element(&self) -> Option<Elem> {
        if !self.is_field() {
            return None;
        }
        let order = self.size() as u64 - 1;
        self.nonzero().into_iter().find(|&a| {
            (1..order).all(|e| order % e != 0 || self.pow(a, e) != self.one()) && self.pow(a, order) == self.one()
        })
    }

    /// Multiplicative order of a unit.
    pub fn unit_order(&self, a: Elem) -> Option<u64> {
        if !self.is_unit(a) {
            return None;
        }
        let mut x = a;
        let mut n = 1;
        while x != self.one() {
            x = self.mul(x, a);
            n += 1;
        }
        Some(n)
    }

    /// Elements as 2x2 blocks over the prime field (matrix ring only).
    pub(crate) fn block(&self, a: Elem) -> [u32; 4] {
        let c = self.coords(a);
        [c[0], c[1], c[2], c[3]]
    }

    pub fn format(&self, a: Elem) -> String {
        let c = self.coords(a);
        match self.0.spec {
            RingSpec::PrimeField { .. } | RingSpec::Integers { .. } => c[0].to_string(),
            RingSpec::Extension { .. } => poly::format(&c),
            RingSpec::Matrix2 { .. } => format!("[[{},{}],[{},{}]]", c[0], c[1], c[2], c[3]),
        }
    }

    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::BadLiteral(s.clone());
        let mut body = s.as_str();
        while body.starts_with('(') && body.ends_with(')') {
            body = &body[1..body.len() - 1];
        }
        match self.0.spec {
            RingSpec::PrimeField { .. } | RingSpec::Integers { .. } => {
                let n: i64 = body.parse().map_err(|_| bad())?;
                Ok(self.from_int(n))
            }
            RingSpec::Extension { .. } => self.parse_poly(body).ok_or_else(bad),
            RingSpec::Matrix2 { .. } => {
                let rows = split_matrix_literal(body)?;
                if rows.len() != 2 || rows.iter().any(|r| r.len() != 2) {
                    return Err(bad());
                }
                let f = self.prime_field();
                let mut c = Vec::with_capacity(4);
                for r in &rows {
                    for e in r {
                        c.push(f.parse_elem(e)?.0 as u32);
                    }
                }
                self.from_coords(&c)
            }
        }
    }

    fn parse_poly(&self, s: &str) -> Option<Elem> {
        if s.is_empty() {
            return None;
        }
        let mut acc = self.zero();
        let mut rest = s;
        while !rest.is_empty() {
            let (negative, body) = match rest.as_bytes()[0] {
                b'-' => (true, &rest[1..]),
                b'+' => (false, &rest[1..]),
                _ => (false, rest),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            let digits_end = term.find(|c: char| !c.is_ascii_digit()).unwrap_or(term.len());
            let coeff: i64 = if digits_end == 0 { 1 } else { term[..digits_end].parse().ok()? };
            let mut var = term[digits_end..].strip_prefix('*').unwrap_or(&term[digits_end..]);
            if digits_end == 0 && var.is_empty() {
                return None;
            }
            let exp: u64 = if var.is_empty() {
                0
            } else {
                var = var.strip_prefix('t')?;
                if var.is_empty() {
                    1
                } else {
                    var.strip_prefix('^')?.parse().ok()?
                }
            };
            let t = self.from_coords(&{
                let mut c = vec![0; self.0.digits as usize];
                if c.len() > 1 {
                    c[1] = 1;
                } else {
                    c[0] = 1;
                }
                c
            })
            .ok()?;
            let mut value = self.mul(self.from_int(coeff), self.pow(t, exp));
            if negative {
                value = self.neg(value);
            }
            acc = self.add(acc, value);
        }
        Some(acc)
    }

    // ---- automorphisms -------------------------------------------------

    pub fn identity_aut(&self) -> RingAut {
        let table: Vec<Elem> = self.elements().collect();
        RingAut::from_parts(AutKind::Identity, table)
    }

    /// The Frobenius power `a -> a^(p^e)` of a field.
    pub fn frobenius(&self, e: u32) -> Result<RingAut> {
        let degree = match self.0.spec {
            RingSpec::PrimeField { .. } => 1,
            RingSpec::Extension { k, .. } => k,
            _ => return Err(Error::NotAField(self.to_string())),
        };
        let e = e % degree;
        if e == 0 {
            return Ok(self.identity_aut());
        }
        let exponent = (self.0.base as u64).pow(e);
        let table: Vec<Elem> = self.elements().map(|a| self.pow(a, exponent)).collect();
        Ok(RingAut::from_parts(AutKind::Frobenius { power: e, degree }, table))
    }

    /// The inner automorphism `a -> u a u^-1`.
    pub fn inner_aut(&self, u: Elem) -> Result<RingAut> {
        let ui = self.inv(u).ok_or(Error::NotAUnit)?;
        let table: Vec<Elem> = self.elements().map(|a| self.mul(self.mul(u, a), ui)).collect();
        let kind = if table.iter().enumerate().all(|(i, e)| e.index() == i) {
            AutKind::Identity
        } else {
            AutKind::Inner(u)
        };
        Ok(RingAut::from_parts(kind, table))
    }

    /// Validates an explicit table and tags it by the simplest matching kind.
    pub fn aut_from_table(&self, table: Vec<Elem>) -> Result<RingAut> {
        self.check_automorphism(&table).map_err(Error::NotAnAutomorphism)?;
        Ok(self.identify(RingAut::from_parts(AutKind::Table, table)))
    }

    /// Re-tags an automorphism as identity, a Frobenius power or an inner
    /// automorphism when its table matches one.
    pub fn identify(&self, aut: RingAut) -> RingAut {
        if aut.is_identity() {
            return RingAut::from_parts(AutKind::Identity, aut.table.to_vec());
        }
        if let RingSpec::Extension { k, .. } = self.0.spec {
            for e in 1..k {
                let f = self.frobenius(e).expect("field");
                if f == aut {
                    return f;
                }
            }
        }
        if !self.is_commutative() {
            for u in self.units() {
                let c = self.inner_aut(u).expect("unit");
                if c == aut {
                    return c;
                }
            }
        }
        aut
    }

    /// Exhaustive ring-automorphism check. On failure returns a witness.
    pub fn check_automorphism(&self, table: &[Elem]) -> std::result::Result<(), String> {
        if table.len() != self.size() {
            return Err(format!("table has {} entries, ring has {}", table.len(), self.size()));
        }
        let mut seen = vec![false; self.size()];
        for &e in table {
            if e.index() >= self.size() || std::mem::replace(&mut seen[e.index()], true) {
                return Err(format!("not a bijection at image {}", self.format(e)));
            }
        }
        let s = |a: Elem| table[a.index()];
        if s(self.one()) != self.one() {
            return Err("does not fix 1".to_string());
        }
        for a in self.elements() {
            for b in self.elements() {
                if s(self.add(a, b)) != self.add(s(a), s(b)) {
                    return Err(format!("not additive at ({}, {})", self.format(a), self.format(b)));
                }
                if s(self.mul(a, b)) != self.mul(s(a), s(b)) {
                    return Err(format!("not multiplicative at ({}, {})", self.format(a), self.format(b)));
                }
            }
        }
        Ok(())
    }

    /// All ring automorphisms, found by searching images of a generating set.
    ///
    /// Extension fields are generated by `t`, whose image must be a root of
    /// the modulus; prime fields and `z(n)` are generated by 1; the matrix
    /// ring is generated by the matrix units `E12`, `E21`, whose images must
    /// be square-zero with `AB + BA = 1`.
    pub fn automorphisms(&self) -> Result<Vec<RingAut>> {
        if self.size() > MAX_RING_SIZE {
            return Err(Error::RingTooLarge(self.size()));
        }
        let mut found = Vec::new();
        match &self.0.spec {
            RingSpec::PrimeField { .. } | RingSpec::Integers { .. } => {
                let table: Vec<Elem> = self.elements().collect();
                self.check_automorphism(&table).map_err(Error::NotAnAutomorphism)?;
                found.push(self.identity_aut());
            }
            RingSpec::Extension { modulus, .. } => {
                let eval = |coeffs: &[u32], r: Elem| {
                    coeffs
                        .iter()
                        .rev()
                        .fold(self.zero(), |acc, &c| self.add(self.mul(acc, r), self.from_int(c as i64)))
                };
                for r in self.elements() {
                    if eval(modulus, r) != self.zero() {
                        continue;
                    }
                    let table: Vec<Elem> = self.elements().map(|a| eval(&self.coords(a), r)).collect();
                    if self.check_automorphism(&table).is_ok() {
                        found.push(self.identify(RingAut::from_parts(AutKind::Table, table)));
                    }
                }
                found.sort_by_key(|a| match a.kind() {
                    AutKind::Frobenius { power, .. } => power,
                    _ => 0,
                });
            }
            RingSpec::Matrix2 { .. } => {
                let sq_zero: Vec<Elem> = self
                    .elements()
                    .filter(|&a| a != self.zero() && self.mul(a, a) == self.zero())
                    .collect();
                for &a in &sq_zero {
                    for &b in &sq_zero {
                        if self.add(self.mul(a, b), self.mul(b, a)) != self.one() {
                            continue;
                        }
                        let (ab, ba) = (self.mul(a, b), self.mul(b, a));
                        let scale = |m: u32, x: Elem| self.mul(self.from_int(m as i64), x);
                        let table: Vec<Elem> = self
                            .elements()
                            .map(|m| {
                                let c = self.coords(m);
                                let parts = [scale(c[0], ab), scale(c[1], a), scale(c[2], b), scale(c[3], ba)];
                                parts.into_iter().fold(self.zero(), |x, y| self.add(x, y))
                            })
                            .collect();
                        if self.check_automorphism(&table).is_ok() {
                            found.push(self.identify(RingAut::from_parts(AutKind::Table, table)));
                        }
                    }
                }
            }
        }
        Ok(found)
    }

    /// Coset representatives of `Aut K / Int K` with their composition table.
    pub fn out_group(&self) -> Result<OutGroup> {
        let auts = self.automorphisms()?;
        let inner: HashSet<Vec<Elem>> = self
            .units()
            .into_iter()
            .map(|u| self.inner_aut(u).map(|a| a.table.to_vec()))
            .collect::<Result<_>>()?;
        let mut reps: Vec<RingAut> = Vec::new();
        let coset_of = |reps: &[RingAut], s: &RingAut| {
            reps.iter().position(|r| inner.contains(&r.inverse().compose(s).table.to_vec()))
        };
        for a in &auts {
            if coset_of(&reps, a).is_none() {
                reps.push(a.clone());
            }
        }
        let table = reps
            .iter()
            .map(|a| {
                reps.iter()
                    .map(|b| coset_of(&reps, &a.compose(b)).expect("cosets partition Aut K"))
                    .collect()
            })
            .collect();
        Ok(OutGroup { representatives: reps, table, aut_count: auts.len(), inner_count: inner.len() })
    }
}

impl FromStr for Ring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Ring> {
        Ring::new(s.parse()?)
    }
}

/// Splits `[[a,b],[c,d]]` into rows of entry strings, respecting nesting.
pub fn split_matrix_literal(s: &str) -> Result<Vec<Vec<String>>> {
    let bad = || Error::BadLiteral(s.to_string());
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let outer = s.strip_prefix('[').and_then(|x| x.strip_suffix(']')).ok_or_else(bad)?;
    split_top_level(outer)
        .into_iter()
        .map(|row| {
            let inner = row.strip_prefix('[').and_then(|x| x.strip_suffix(']')).ok_or_else(bad)?;
            Ok(split_top_level(inner).into_iter().map(str::to_owned).collect())
        })
        .collect()
}

pub(crate) fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if !s.is_empty() {
        out.push(&s[start..]);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AutKind {
    Identity,
    Frobenius { power: u32, degree: u32 },
    Inner(Elem),
    Table,
}

/// A ring automorphism stored as a full table together with its inverse.
#[derive(Debug, Clone)]
pub struct RingAut {
    kind: AutKind,
    table: Arc<[Elem]>,
    inverse: Arc<[Elem]>,
}

impl PartialEq for RingAut {
    fn eq(&self, other: &RingAut) -> bool {
        self.table == other.table
    }
}

impl Eq for RingAut {}

impl RingAut {
    fn from_parts(kind: AutKind, table: Vec<Elem>) -> RingAut {
        let mut inverse = vec![Elem::ZERO; table.len()];
        for (i, e) in table.iter().enumerate() {
            inverse[e.index()] = Elem(i as u16);
        }
        RingAut { kind, table: table.into(), inverse: inverse.into() }
    }

    #[inline]
    pub fn apply(&self, a: Elem) -> Elem {
        self.table[a.index()]
    }

    #[inline]
    pub fn apply_inverse(&self, a: Elem) -> Elem {
        self.inverse[a.index()]
    }

    pub fn kind(&self) -> AutKind {
        self.kind
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(i, e)| e.index() == i)
    }

    pub fn inverse(&self) -> RingAut {
        let kind = match self.kind {
            AutKind::Frobenius { power, degree } => AutKind::Frobenius { power: (degree - power) % degree, degree },
            AutKind::Identity => AutKind::Identity,
            _ => AutKind::Table,
        };
        RingAut { kind, table: self.inverse.clone(), inverse: self.table.clone() }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &RingAut) -> RingAut {
        let table: Vec<Elem> = other.table.iter().map(|&e| self.apply(e)).collect();
        let kind = match (self.kind, other.kind) {
            (AutKind::Identity, k) | (k, AutKind::Identity) => k,
            (AutKind::Frobenius { power: a, degree }, AutKind::Frobenius { power: b, .. }) => {
                if (a + b) % degree == 0 {
                    AutKind::Identity
                } else {
                    AutKind::Frobenius { power: (a + b) % degree, degree }
                }
            }
            _ => AutKind::Table,
        };
        let kind = if table.iter().enumerate().all(|(i, e)| e.index() == i) { AutKind::Identity } else { kind };
        RingAut::from_parts(kind, table)
    }

    /// Smallest `n >= 1` with `self^n = id`.
    pub fn order(&self) -> usize {
        let mut power = self.clone();
        let mut n = 1;
        while !power.is_identity() {
            power = self.compose(&power);
            n += 1;
        }
        n
    }

    /// `id`, `frob:<e>`, `conj:<u>` or `table:[...]`.
    pub fn describe(&self, ring: &Ring) -> String {
        match self.kind {
            _ if self.is_identity() => "id".to_string(),
            AutKind::Identity => "id".to_string(),
            AutKind::Frobenius { power, .. } => format!("frob:{power}"),
            AutKind::Inner(u) => format!("conj:{}", ring.format(u)),
            AutKind::Table => {
                let images: Vec<String> = self.table.iter().map(|&e| ring.format(e)).collect();
                format!("table:[{}]", images.join(","))
            }
        }
    }

    /// Parses `id`, `frob:<e>` or `conj:<unit literal>`.
    pub fn parse(ring: &Ring, s: &str) -> Result<RingAut> {
        let s = s.trim();
        if s == "id" {
            return Ok(ring.identity_aut());
        }
        if let Some(e) = s.strip_prefix("frob:") {
            let e: u32 = e.trim().parse().map_err(|_| Error::BadLiteral(s.to_string()))?;
            return ring.frobenius(e);
        }
        if let Some(u) = s.strip_prefix("conj:") {
            return ring.inner_aut(ring.parse_elem(u)?);
        }
        Err(Error::BadLiteral(s.to_string()))
    }
}

#[derive(Debug, Clone)]
pub struct OutGroup {
    pub representatives: Vec<RingAut>,
    /// `table[i][j]` is the coset of `rep_i ∘ rep_j`.
    pub table: Vec<Vec<usize>>,
    pub aut_count: usize,
    pub inner_count: usize,
}

impl OutGroup {
    pub fn order(&self) -> usize {
        self.representatives.len()
    }
}
