//! Free Lie algebras over a finite field in the Lyndon basis.
//!
//! A basis monomial is a Lyndon word with its standard bracketing. Products
//! are put in normal form by the Lyndon-Shirshov straightening: for Lyndon
//! `u < v`, `[u, v]` is the basis element `uv` when `u` is a letter or the
//! right standard factor of `u` is `>= v`; otherwise `u = (u1, u2)` and
//! `[[u1, u2], v] = [u1, [u2, v]] - [u2, [u1, v]]`. Structure constants are
//! integers, so basis brackets are straightened once over `i64` and cached.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::ring::{Elem, Ring, RingAut};
use crate::rng::Lcg64;

/// Highest total degree handled by any operation.
pub const MAX_DEGREE: usize = 10;

pub type Word = Vec<u8>;

pub fn is_lyndon(w: &[u8]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &w[i..])
}

/// Split point of the standard factorization of a Lyndon word of length at
/// least 2: the right factor is its lexicographically smallest proper suffix.
fn split_point(w: &[u8]) -> usize {
    (1..w.len()).min_by(|&i, &j| w[i..].cmp(&w[j..])).expect("length >= 2")
}

/// Lyndon words of exactly length `d` over `n` letters, in lexicographic
/// order (Duval's generation).
fn lyndon_words(n: usize, d: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut w: Vec<u8> = vec![0];
    while !w.is_empty() {
        if w.len() == d {
            out.push(w.clone());
        }
        let m = w.len();
        while w.len() < d {
            let c = w[w.len() - m];
            w.push(c);
        }
        while w.last().is_some_and(|&c| c as usize == n - 1) {
            w.pop();
        }
        if let Some(last) = w.last_mut() {
            *last += 1;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Bracketing {
    Letter(u8),
    Pair(Box<Bracketing>, Box<Bracketing>),
}

/// A Lyndon basis monomial. Ordered by degree, then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LyndonMonomial {
    word: Word,
}

impl Ord for LyndonMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.word.len().cmp(&other.word.len()).then_with(|| self.word.cmp(&other.word))
    }
}

impl PartialOrd for LyndonMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl LyndonMonomial {
    pub fn new(word: Word) -> Result<LyndonMonomial> {
        if !is_lyndon(&word) {
            return Err(Error::BadExpression(format!("{word:?} is not a Lyndon word")));
        }
        if word.len() > MAX_DEGREE {
            return Err(Error::DegreeCap(word.len()));
        }
        Ok(LyndonMonomial { word })
    }

    pub fn letter(i: u8) -> LyndonMonomial {
        LyndonMonomial { word: vec![i] }
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn degree(&self) -> usize {
        self.word.len()
    }

    pub fn content(&self, generator: u8) -> usize {
        self.word.iter().filter(|&&c| c == generator).count()
    }

    pub fn standard_factorization(&self) -> Option<(LyndonMonomial, LyndonMonomial)> {
        if self.word.len() < 2 {
            return None;
        }
        let k = split_point(&self.word);
        Some((LyndonMonomial { word: self.word[..k].to_vec() }, LyndonMonomial { word: self.word[k..].to_vec() }))
    }

    pub fn bracketing(&self) -> Bracketing {
        match self.standard_factorization() {
            None => Bracketing::Letter(self.word[0]),
            Some((l, r)) => Bracketing::Pair(Box::new(l.bracketing()), Box::new(r.bracketing())),
        }
    }

    fn render(&self, names: &[String], out: &mut String) {
        match self.standard_factorization() {
            None => out.push_str(&names[self.word[0] as usize]),
            Some((l, r)) => {
                out.push('[');
                l.render(names, out);
                out.push(',');
                r.render(names, out);
                out.push(']');
            }
        }
    }
}

type BasisCache = RwLock<HashMap<(usize, usize), Arc<Vec<LyndonMonomial>>>>;

fn basis_cache() -> &'static BasisCache {
    static CACHE: OnceLock<BasisCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Degree-`d` Lyndon basis on `n` generators, in canonical order.
pub fn lyndon_basis(n: usize, d: usize) -> Result<Arc<Vec<LyndonMonomial>>> {
    if d == 0 || d > MAX_DEGREE {
        return Err(Error::DegreeCap(d));
    }
    if n == 0 || n > 26 {
        return Err(Error::BadExpression(format!("{n} generators")));
    }
    if let Some(b) = basis_cache().read().unwrap().get(&(n, d)) {
        return Ok(b.clone());
    }
    let basis = Arc::new(lyndon_words(n, d).into_iter().map(|word| LyndonMonomial { word }).collect::<Vec<_>>());
    Ok(basis_cache().write().unwrap().entry((n, d)).or_insert(basis).clone())
}

// ---- straightening ---------------------------------------------------------

/// Coefficient arithmetic used by the straightening routine.
pub trait Scalars {
    type C: Copy + PartialEq + fmt::Debug;
    fn zero(&self) -> Self::C;
    fn one(&self) -> Self::C;
    fn add(&self, a: Self::C, b: Self::C) -> Self::C;
    fn mul(&self, a: Self::C, b: Self::C) -> Self::C;
    fn neg(&self, a: Self::C) -> Self::C;
}

pub struct Integers;

impl Scalars for Integers {
    type C = i64;
    fn zero(&self) -> i64 {
        0
    }
    fn one(&self) -> i64 {
        1
    }
    fn add(&self, a: i64, b: i64) -> i64 {
        a + b
    }
    fn mul(&self, a: i64, b: i64) -> i64 {
        a * b
    }
    fn neg(&self, a: i64) -> i64 {
        -a
    }
}

impl Scalars for Ring {
    type C = Elem;
    fn zero(&self) -> Elem {
        Ring::zero(self)
    }
    fn one(&self) -> Elem {
        Ring::one(self)
    }
    fn add(&self, a: Elem, b: Elem) -> Elem {
        Ring::add(self, a, b)
    }
    fn mul(&self, a: Elem, b: Elem) -> Elem {
        Ring::mul(self, a, b)
    }
    fn neg(&self, a: Elem) -> Elem {
        Ring::neg(self, a)
    }
}

pub type Combination<C> = Arc<Vec<(Word, C)>>;
pub type Memo<C> = HashMap<(Word, Word), Combination<C>>;

/// `[u, v]` for Lyndon words `u`, `v` as a combination of Lyndon words.
pub fn straighten<S: Scalars>(s: &S, memo: &mut Memo<S::C>, u: &[u8], v: &[u8]) -> Combination<S::C> {
    if u == v {
        return Arc::new(Vec::new());
    }
    if let Some(r) = memo.get(&(u.to_vec(), v.to_vec())) {
        return r.clone();
    }
    let result: Vec<(Word, S::C)> = if u > v {
        straighten(s, memo, v, u).iter().map(|(w, c)| (w.clone(), s.neg(*c))).collect()
    } else if u.len() == 1 || &u[split_point(u)..] >= v {
        vec![([u, v].concat(), s.one())]
    } else {
        let (u1, u2) = u.split_at(split_point(u));
        let mut acc: BTreeMap<Word, S::C> = BTreeMap::new();
        let push = |acc: &mut BTreeMap<Word, S::C>, w: &Word, c: S::C| {
            let e = acc.entry(w.clone()).or_insert(s.zero());
            *e = s.add(*e, c);
        };
        for (w, c) in straighten(s, memo, u2, v).iter() {
            for (z, d) in straighten(s, memo, u1, w).iter() {
                push(&mut acc, z, s.mul(*c, *d));
            }
        }
        for (w, c) in straighten(s, memo, u1, v).iter() {
            for (z, d) in straighten(s, memo, u2, w).iter() {
                push(&mut acc, z, s.neg(s.mul(*c, *d)));
            }
        }
        acc.into_iter().filter(|(_, c)| *c != s.zero()).collect()
    };
    let result = Arc::new(result);
    memo.insert((u.to_vec(), v.to_vec()), result.clone());
    result
}

fn integer_memo() -> &'static RwLock<Memo<i64>> {
    static MEMO: OnceLock<RwLock<Memo<i64>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// Integer structure constants of `[u, v]`, shared across threads.
pub fn bracket_words(u: &[u8], v: &[u8]) -> Combination<i64> {
    if let Some(r) = integer_memo().read().unwrap().get(&(u.to_vec(), v.to_vec())) {
        return r.clone();
    }
    let mut memo = integer_memo().write().unwrap();
    straighten(&Integers, &mut memo, u, v)
}

// ---- elements ----------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieElement {
    field: Ring,
    terms: BTreeMap<LyndonMonomial, Elem>,
}

impl LieElement {
    pub fn zero(field: &Ring) -> LieElement {
        LieElement { field: field.clone(), terms: BTreeMap::new() }
    }

    pub fn generator(field: &Ring, i: u8) -> LieElement {
        LieElement::monomial(field, LyndonMonomial::letter(i), field.one())
    }

    pub fn monomial(field: &Ring, m: LyndonMonomial, c: Elem) -> LieElement {
        let mut terms = BTreeMap::new();
        if c != field.zero() {
            terms.insert(m, c);
        }
        LieElement { field: field.clone(), terms }
    }

    pub fn from_terms(field: &Ring, terms: impl IntoIterator<Item = (LyndonMonomial, Elem)>) -> LieElement {
        let mut e = LieElement::zero(field);
        for (m, c) in terms {
            e.add_term(m, c);
        }
        e
    }

    fn add_term(&mut self, m: LyndonMonomial, c: Elem) {
        let k = &self.field;
        let sum = k.add(self.coefficient(&m), c);
        if sum == k.zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, sum);
        }
    }

    pub fn field(&self) -> &Ring {
        &self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LyndonMonomial, Elem)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn coefficient(&self, m: &LyndonMonomial) -> Elem {
        self.terms.get(m).copied().unwrap_or(self.field.zero())
    }

    /// Highest degree present; 0 for the zero element.
    pub fn degree(&self) -> usize {
        self.terms.keys().next_back().map_or(0, |m| m.degree())
    }

    pub fn min_degree(&self) -> usize {
        self.terms.keys().next().map_or(0, |m| m.degree())
    }

    pub fn homogeneous(&self, d: usize) -> LieElement {
        LieElement {
            field: self.field.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, &c)| (m.clone(), c)).collect(),
        }
    }

    /// Highest generator index used plus one.
    pub fn alphabet(&self) -> usize {
        self.terms.keys().flat_map(|m| m.word.iter()).max().map_or(0, |&c| c as usize + 1)
    }

    fn same_field(&self, other: &LieElement) -> Result<()> {
        if self.field != other.field {
            return Err(Error::RingMismatch(self.field.to_string(), other.field.to_string()));
        }
        Ok(())
    }

    pub fn add(&self, other: &LieElement) -> Result<LieElement> {
        self.same_field(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> LieElement {
        self.map_coefficients(|c| self.field.neg(c))
    }

    pub fn sub(&self, other: &LieElement) -> Result<LieElement> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Elem) -> LieElement {
        if c == self.field.zero() {
            return LieElement::zero(&self.field);
        }
        self.map_coefficients(|a| self.field.mul(c, a))
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn map_coefficients(&self, f: impl Fn(Elem) -> Elem) -> LieElement {
        LieElement {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, &c)| (m.clone(), f(c)))
                .filter(|(_, c)| *c != self.field.zero())
                .collect(),
        }
    }

    fn check_degree(&self, other: &LieElement) -> Result<()> {
        let d = self.degree() + other.degree();
        if !self.is_zero() && !other.is_zero() && d > MAX_DEGREE {
            return Err(Error::DegreeCap(d));
        }
        Ok(())
    }
}

/// `[a, b]` in normal form, via cached integer structure constants.
pub fn bracket(a: &LieElement, b: &LieElement) -> Result<LieElement> {
    a.same_field(b)?;
    a.check_degree(b)?;
    let k = &a.field;
    let mut acc: BTreeMap<Word, Elem> = BTreeMap::new();
    for (u, &cu) in &a.terms {
        for (v, &cv) in &b.terms {
            let c = k.mul(cu, cv);
            for (w, n) in bracket_words(&u.word, &v.word).iter() {
                let e = acc.entry(w.clone()).or_insert(k.zero());
                *e = k.add(*e, k.mul(k.from_int(*n), c));
            }
        }
    }
    Ok(LieElement::from_terms(k, acc.into_iter().map(|(word, c)| (LyndonMonomial { word }, c))))
}

/// `[a, b]` straightened with field coefficients throughout, bypassing the
/// integer cache. Used to cross-check the integer structure constants.
pub fn bracket_in_field(a: &LieElement, b: &LieElement) -> Result<LieElement> {
    a.same_field(b)?;
    a.check_degree(b)?;
    let k = &a.field;
    let mut memo = Memo::default();
    let mut out = LieElement::zero(k);
    for (u, &cu) in &a.terms {
        for (v, &cv) in &b.terms {
            for (w, c) in straighten(k, &mut memo, &u.word, &v.word).iter() {
                out.add_term(LyndonMonomial { word: w.clone() }, k.mul(*c, k.mul(cu, cv)));
            }
        }
    }
    Ok(out)
}

/// `δ_W`: applies a field automorphism to every coefficient.
pub fn delta_w(delta: &RingAut, w: &LieElement) -> LieElement {
    w.map_coefficients(|c| delta.apply(c))
}

// ---- associative expansion ------------------------------------------------

/// A noncommutative polynomial: words with nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssocPoly {
    field: Ring,
    terms: BTreeMap<Word, Elem>,
}

impl AssocPoly {
    pub fn zero(field: &Ring) -> AssocPoly {
        AssocPoly { field: field.clone(), terms: BTreeMap::new() }
    }

    pub fn word(field: &Ring, w: Word) -> AssocPoly {
        AssocPoly { field: field.clone(), terms: BTreeMap::from([(w, field.one())]) }
    }

    fn add_term(&mut self, w: Word, c: Elem) {
        let k = &self.field;
        let e = self.terms.entry(w.clone()).or_insert(k.zero());
        *e = k.add(*e, c);
        if *e == k.zero() {
            self.terms.remove(&w);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, Elem)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn coefficient(&self, w: &[u8]) -> Elem {
        self.terms.get(w).copied().unwrap_or(self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &AssocPoly) -> AssocPoly {
        let mut out = self.clone();
        for (w, &c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn scale(&self, c: Elem) -> AssocPoly {
        let mut out = AssocPoly::zero(&self.field);
        for (w, &a) in &self.terms {
            out.add_term(w.clone(), self.field.mul(c, a));
        }
        out
    }

    pub fn sub(&self, other: &AssocPoly) -> AssocPoly {
        self.add(&other.scale(self.field.neg(self.field.one())))
    }

    pub fn mul(&self, other: &AssocPoly) -> AssocPoly {
        let mut out = AssocPoly::zero(&self.field);
        for (u, &a) in &self.terms {
            for (v, &b) in &other.terms {
                out.add_term([u.as_slice(), v.as_slice()].concat(), self.field.mul(a, b));
            }
        }
        out
    }

    pub fn commutator(&self, other: &AssocPoly) -> AssocPoly {
        self.mul(other).sub(&other.mul(self))
    }
}

fn expand_bracketing(field: &Ring, b: &Bracketing) -> AssocPoly {
    match b {
        Bracketing::Letter(c) => AssocPoly::word(field, vec![*c]),
        Bracketing::Pair(l, r) => expand_bracketing(field, l).commutator(&expand_bracketing(field, r)),
    }
}

/// Image in the free associative algebra, `[u, v] -> uv - vu`.
pub fn assoc_expand(a: &LieElement) -> AssocPoly {
    let k = &a.field;
    let mut out = AssocPoly::zero(k);
    for (m, &c) in &a.terms {
        out = out.add(&expand_bracketing(k, &m.bracketing()).scale(c));
    }
    out
}

// ---- named generators, parsing and printing ------------------------------

/// A free Lie algebra with named generators over a field.
#[derive(Debug, Clone)]
pub struct FreeLie {
    field: Ring,
    names: Vec<String>,
}

impl FreeLie {
    pub fn new(field: &Ring, names: Vec<String>) -> Result<FreeLie> {
        if !field.is_field() {
            return Err(Error::NotAField(field.to_string()));
        }
        if names.is_empty() || names.len() > 26 {
            return Err(Error::BadExpression(format!("{} generators", names.len())));
        }
        Ok(FreeLie { field: field.clone(), names })
    }

    /// Generators `x`, `y`.
    pub fn xy(field: &Ring) -> Result<FreeLie> {
        FreeLie::new(field, vec!["x".into(), "y".into()])
    }

    /// Generators `x1`, ..., `xn`.
    pub fn indexed(field: &Ring, n: usize) -> Result<FreeLie> {
        FreeLie::new(field, (1..=n).map(|i| format!("x{i}")).collect())
    }

    pub fn field(&self) -> &Ring {
        &self.field
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generator(&self, i: usize) -> LieElement {
        LieElement::generator(&self.field, i as u8)
    }

    pub fn basis(&self, d: usize) -> Result<Arc<Vec<LyndonMonomial>>> {
        lyndon_basis(self.rank(), d)
    }

    pub fn format_monomial(&self, m: &LyndonMonomial) -> String {
        let mut s = String::new();
        m.render(&self.names, &mut s);
        s
    }

    pub fn format(&self, a: &LieElement) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let k = &self.field;
        let parts: Vec<String> = a
            .terms()
            .map(|(m, c)| {
                let atom = self.format_monomial(m);
                if c == k.one() {
                    atom
                } else {
                    let lit = k.format(c);
                    if lit.contains(['+', '-']) {
                        format!("({lit})*{atom}")
                    } else {
                        format!("{lit}*{atom}")
                    }
                }
            })
            .collect();
        parts.join(" + ")
    }

    pub fn parse(&self, s: &str) -> Result<LieElement> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.iter().collect::<String>() == "0" {
            return Ok(LieElement::zero(&self.field));
        }
        let mut p = Parser { lie: self, chars: &chars, pos: 0, source: s };
        let e = p.element()?;
        if p.pos != chars.len() {
            return Err(p.error());
        }
        Ok(e)
    }

    /// A random element with up to `max_terms` terms of degree at most
    /// `max_degree`, all coefficients nonzero.
    pub fn random_element(&self, rng: &mut Lcg64, max_degree: usize, max_terms: usize) -> LieElement {
        let nonzero = self.field.nonzero();
        let mut e = LieElement::zero(&self.field);
        for _ in 0..1 + rng.below(max_terms.max(1)) {
            let d = 1 + rng.below(max_degree.clamp(1, MAX_DEGREE));
            let basis = self.basis(d).expect("degree within the cap");
            if basis.is_empty() {
                continue;
            }
            e.add_term(rng.pick(&basis).clone(), *rng.pick(&nonzero));
        }
        e
    }

    /// A random nonzero homogeneous element of degree `d`.
    pub fn random_homogeneous(&self, rng: &mut Lcg64, d: usize, max_terms: usize) -> LieElement {
        let nonzero = self.field.nonzero();
        let basis = self.basis(d).expect("degree within the cap");
        loop {
            let mut e = LieElement::zero(&self.field);
            for _ in 0..1 + rng.below(max_terms.max(1)) {
                e.add_term(rng.pick(&basis).clone(), *rng.pick(&nonzero));
            }
            if !e.is_zero() {
                return e;
            }
        }
    }
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lie = if self.alphabet() <= 2 {
            FreeLie::xy(&self.field)
        } else {
            FreeLie::indexed(&self.field, self.alphabet())
        };
        match lie {
            Ok(lie) => f.write_str(&lie.format(self)),
            Err(_) => write!(f, "{:?}", self.terms),
        }
    }
}

struct Parser<'a> {
    lie: &'a FreeLie,
    chars: &'a [char],
    pos: usize,
    source: &'a str,
}

impl Parser<'_> {
    fn error(&self) -> Error {
        Error::BadExpression(format!("{:?} at position {}", self.source, self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error())
        }
    }

    fn element(&mut self) -> Result<LieElement> {
        let mut acc = LieElement::zero(&self.lie.field);
        let mut negative = false;
        if self.peek() == Some('-') {
            negative = true;
            self.pos += 1;
        }
        loop {
            let t = self.term()?;
            acc = if negative { acc.sub(&t)? } else { acc.add(&t)? };
            match self.peek() {
                Some('+') => negative = false,
                Some('-') => negative = true,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<LieElement> {
        let k = &self.lie.field;
        match self.peek() {
            Some('[') => self.atom(),
            Some('(') => {
                let start = self.pos;
                let mut depth = 0;
                while let Some(c) = self.peek() {
                    self.pos += 1;
                    match c {
                        '(' => depth += 1,
                        ')' => {
                            depth -= 1;
                            if depth == 0 {
                                break;
                            }
                        }
                        _ => {}
                    }
                }
                let lit: String = self.chars[start..self.pos].iter().collect();
                let c = k.parse_elem(&lit)?;
                self.expect('*')?;
                Ok(self.atom()?.scale(c))
            }
            Some(_) => {
                let start = self.pos;
                while self.peek().is_some_and(|c| !"*+-,[]()".contains(c)) {
                    self.pos += 1;
                }
                let token: String = self.chars[start..self.pos].iter().collect();
                if token.is_empty() {
                    return Err(self.error());
                }
                if self.peek() == Some('*') {
                    let c = k.parse_elem(&token)?;
                    self.pos += 1;
                    Ok(self.atom()?.scale(c))
                } else {
                    self.generator(&token)
                }
            }
            None => Err(self.error()),
        }
    }

    fn generator(&self, token: &str) -> Result<LieElement> {
        match self.lie.names.iter().position(|n| n == token) {
            Some(i) => Ok(self.lie.generator(i)),
            None => Err(Error::BadExpression(format!("unknown generator {token:?} in {:?}", self.source))),
        }
    }

    fn atom(&mut self) -> Result<LieElement> {
        if self.peek() == Some('[') {
            self.pos += 1;
            let a = self.element()?;
            self.expect(',')?;
            let b = self.element()?;
            self.expect(']')?;
            return bracket(&a, &b);
        }
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        let token: String = self.chars[start..self.pos].iter().collect();
        if token.is_empty() {
            return Err(self.error());
        }
        self.generator(&token)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: &str) -> Ring {
        q.parse().unwrap()
    }

    fn words(n: usize, d: usize) -> Vec<String> {
        lyndon_basis(n, d)
            .unwrap()
            .iter()
            .map(|m| m.word().iter().map(|&c| (b'x' + c) as char).collect())
            .collect()
    }

    #[test]
    fn small_bases() {
        assert_eq!(words(2, 1), ["x", "y"]);
        assert_eq!(words(2, 3), ["xxy", "xyy"]);
        assert_eq!(lyndon_basis(2, 6).unwrap().len(), 9);
        assert!(lyndon_basis(2, 11).is_err());
        assert!(lyndon_basis(2, 0).is_err());
    }

    #[test]
    fn standard_factorization_of_xxyxy() {
        let m = LyndonMonomial::new(vec![0, 0, 1, 0, 1]).unwrap();
        let (l, r) = m.standard_factorization().unwrap();
        assert_eq!((l.word(), r.word()), (&[0, 0, 1][..], &[0, 1][..]));
        assert_eq!(m.content(0), 3);
        assert_eq!(m.content(1), 2);
        assert!(LyndonMonomial::new(vec![1, 0]).is_err());
    }

    #[test]
    fn antisymmetry_and_basis_products() {
        let k = gf("gf(5)");
        let lie = FreeLie::xy(&k).unwrap();
        let (x, y) = (lie.generator(0), lie.generator(1));
        let xy = bracket(&x, &y).unwrap();
        assert_eq!(lie.format(&xy), "[x,y]");
        assert_eq!(bracket(&y, &x).unwrap(), xy.neg());
        assert!(bracket(&xy, &xy).unwrap().is_zero());
    }

    #[test]
    fn expansion_examples() {
        let k = gf("gf(5)");
        let lie = FreeLie::xy(&k).unwrap();
        let e = assoc_expand(&lie.parse("[x,[x,y]]").unwrap());
        assert_eq!(e.coefficient(&[0, 0, 1]), k.one());
        assert_eq!(e.coefficient(&[0, 1, 0]), k.from_int(-2));
        assert_eq!(e.coefficient(&[1, 0, 0]), k.one());
        assert_eq!(e.terms().count(), 3);
    }

    #[test]
    fn parse_and_print_round_trip() {
        let k = gf("gf(4)");
        let lie = FreeLie::xy(&k).unwrap();
        let e = lie.parse("(t+1)*[x,y] + t*x - y").unwrap();
        assert_eq!(lie.format(&e), "t*x + y + (t+1)*[x,y]");
        assert_eq!(lie.parse(&lie.format(&e)).unwrap(), e);
        assert_eq!(lie.parse("[y,x]").unwrap(), lie.parse("[x,y]").unwrap().neg());
        assert!(lie.parse("[x,z]").is_err());
        assert!(lie.parse("[x,y").is_err());
        assert!(lie.parse("0").unwrap().is_zero());
    }

    #[test]
    fn frobenius_on_coefficients() {
        let k = gf("gf(4)");
        let lie = FreeLie::xy(&k).unwrap();
        let w = lie.parse("t*[x,y]").unwrap();
        assert_eq!(delta_w(&k.frobenius(1).unwrap(), &w), lie.parse("(t+1)*[x,y]").unwrap());
        assert_eq!(delta_w(&k.identity_aut(), &w), w);
    }

    #[test]
    fn degree_cap() {
        let k = gf("gf(3)");
        let lie = FreeLie::xy(&k).unwrap();
        let a = lie.random_homogeneous(&mut Lcg64::new(3), 6, 1);
        let b = lie.random_homogeneous(&mut Lcg64::new(4), 5, 1);
        assert!(matches!(bracket(&a, &b), Err(Error::DegreeCap(11))));
    }
}
