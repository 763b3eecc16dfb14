//! Dense matrices over a [`Ring`], with the ordinary (row-by-column) product.

use crate::error::{Error, Result};
use crate::ring::{split_matrix_literal, Elem, Ring, RingAut, RingSpec};
use crate::rng::Lcg64;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Elem>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![Elem::ZERO; rows * cols] }
    }

    pub fn identity(ring: &Ring, n: usize) -> Matrix {
        Matrix::scalar(n, ring.one())
    }

    pub fn scalar(n: usize, c: Elem) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, c);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Elem>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Matrix::new(r, c, rows.into_iter().flatten().collect())
    }

    /// The matrix unit with a single 1 at `(i, j)`.
    pub fn unit(ring: &Ring, n: usize, i: usize, j: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        m.set(i, j, ring.one());
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, e: Elem) {
        self.data[i * self.cols + j] = e;
    }

    pub fn entries(&self) -> &[Elem] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<Elem> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn map(&self, f: impl Fn(Elem) -> Elem) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&e| f(e)).collect() }
    }

    /// Entrywise image under a ring automorphism.
    pub fn apply_aut(&self, sigma: &RingAut) -> Matrix {
        self.map(|e| sigma.apply(e))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&e| e == Elem::ZERO)
    }

    pub fn is_identity(&self, ring: &Ring) -> bool {
        self.is_square() && *self == Matrix::identity(ring, self.rows)
    }

    pub fn mul(&self, ring: &Ring, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = ring.zero();
                for k in 0..self.cols {
                    acc = ring.add(acc, ring.mul(self.get(i, k), other.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn add(&self, ring: &Ring, other: &Matrix) -> Result<Matrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Dimension("sum of differently shaped matrices".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| ring.add(a, b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    /// `c * self`, scalar on the left.
    pub fn scale(&self, ring: &Ring, c: Elem) -> Matrix {
        self.map(|e| ring.mul(c, e))
    }

    /// Determinant by cofactor expansion. Commutative rings only.
    pub fn det(&self, ring: &Ring) -> Result<Elem> {
        if !self.is_square() {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        if !ring.is_commutative() {
            return Err(Error::NotAField(ring.to_string()));
        }
        Ok(self.det_unchecked(ring))
    }

    fn det_unchecked(&self, ring: &Ring) -> Elem {
        let n = self.rows;
        match n {
            0 => ring.one(),
            1 => self.get(0, 0),
            2 => ring.sub(
                ring.mul(self.get(0, 0), self.get(1, 1)),
                ring.mul(self.get(0, 1), self.get(1, 0)),
            ),
            _ => {
                let mut acc = ring.zero();
                for j in 0..n {
                    let term = ring.mul(self.get(0, j), self.minor(0, j).det_unchecked(ring));
                    acc = if j % 2 == 0 { ring.add(acc, term) } else { ring.sub(acc, term) };
                }
                acc
            }
        }
    }

    fn minor(&self, row: usize, col: usize) -> Matrix {
        let data = (0..self.rows)
            .filter(|&i| i != row)
            .flat_map(|i| (0..self.cols).filter(move |&j| j != col).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        Matrix { rows: self.rows - 1, cols: self.cols - 1, data }
    }

    /// Two-sided inverse for the ordinary product, if it exists.
    pub fn inverse(&self, ring: &Ring) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        match ring.spec() {
            RingSpec::PrimeField { .. } | RingSpec::Extension { .. } => self.gauss_inverse(ring),
            RingSpec::Integers { .. } => {
                let d = ring.inv(self.det_unchecked(ring))?;
                let n = self.rows;
                if n == 1 {
                    return Some(Matrix::scalar(1, d));
                }
                let mut adj = Matrix::zeros(n, n);
                for i in 0..n {
                    for j in 0..n {
                        let c = self.minor(j, i).det_unchecked(ring);
                        adj.set(i, j, if (i + j) % 2 == 0 { c } else { ring.neg(c) });
                    }
                }
                Some(adj.scale(ring, d))
            }
            RingSpec::Matrix2 { .. } => {
                let f = ring.prime_field();
                let expanded = self.expand_blocks(ring, f);
                let inv = expanded.gauss_inverse(f)?;
                Some(inv.fold_blocks(ring))
            }
        }
    }

    pub fn is_invertible(&self, ring: &Ring) -> bool {
        self.inverse(ring).is_some()
    }

    fn gauss_inverse(&self, field: &Ring) -> Option<Matrix> {
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(field, n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| a.get(r, col) != Elem::ZERO)?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let pinv = field.inv(a.get(col, col))?;
            a.scale_row(field, col, pinv);
            inv.scale_row(field, col, pinv);
            for r in 0..n {
                if r != col {
                    let factor = a.get(r, col);
                    if factor != Elem::ZERO {
                        a.add_row_multiple(field, r, col, field.neg(factor));
                        inv.add_row_multiple(field, r, col, field.neg(factor));
                    }
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, ring: &Ring, r: usize, c: Elem) {
        for j in 0..self.cols {
            let v = ring.mul(c, self.get(r, j));
            self.set(r, j, v);
        }
    }

    /// row[dst] += c * row[src]
    fn add_row_multiple(&mut self, ring: &Ring, dst: usize, src: usize, c: Elem) {
        for j in 0..self.cols {
            let v = ring.add(self.get(dst, j), ring.mul(c, self.get(src, j)));
            self.set(dst, j, v);
        }
    }

    fn expand_blocks(&self, ring: &Ring, field: &Ring) -> Matrix {
        let mut out = Matrix::zeros(2 * self.rows, 2 * self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let b = ring.block(self.get(i, j));
                for (k, &v) in b.iter().enumerate() {
                    out.set(2 * i + k / 2, 2 * j + k % 2, field.from_int(v as i64));
                }
            }
        }
        out
    }

    fn fold_blocks(&self, ring: &Ring) -> Matrix {
        let mut out = Matrix::zeros(self.rows / 2, self.cols / 2);
        for i in 0..out.rows {
            for j in 0..out.cols {
                let c: Vec<u32> = (0..4).map(|k| self.get(2 * i + k / 2, 2 * j + k % 2).index() as u32).collect();
                out.set(i, j, ring.from_coords(&c).expect("block coordinates"));
            }
        }
        out
    }

    /// Every `rows x cols` matrix over the ring, in index order.
    pub fn all(ring: &Ring, rows: usize, cols: usize) -> impl Iterator<Item = Matrix> + '_ {
        let q = ring.size();
        let count = q.pow((rows * cols) as u32);
        (0..count).map(move |mut code| {
            let mut data = Vec::with_capacity(rows * cols);
            for _ in 0..rows * cols {
                data.push(Elem((code % q) as u16));
                code /= q;
            }
            Matrix { rows, cols, data }
        })
    }

    pub fn random(ring: &Ring, rng: &mut Lcg64, rows: usize, cols: usize) -> Matrix {
        let data = (0..rows * cols).map(|_| Elem(rng.below(ring.size()) as u16)).collect();
        Matrix { rows, cols, data }
    }

    pub fn random_invertible(ring: &Ring, rng: &mut Lcg64, n: usize) -> Matrix {
        loop {
            let m = Matrix::random(ring, rng, n, n);
            if m.is_invertible(ring) {
                return m;
            }
        }
    }

    pub fn parse(ring: &Ring, s: &str) -> Result<Matrix> {
        let rows = split_matrix_literal(s)?;
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|e| ring.parse_elem(e)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(rows)
    }

    pub fn format(&self, ring: &Ring) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let entries: Vec<String> = self.row(i).into_iter().map(|e| ring.format(e)).collect();
                format!("[{}]", entries.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    }

    /// Scales so the first nonzero entry in column-major order is 1.
    /// Meaningful over fields, where it picks a representative modulo
    /// nonzero central scalars.
    pub fn normalize_scalar(&self, ring: &Ring) -> Matrix {
        let first = (0..self.cols)
            .flat_map(|j| (0..self.rows).map(move |i| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .find(|&e| e != Elem::ZERO);
        match first.and_then(|e| ring.inv(e)) {
            Some(inv) => self.scale(ring, inv),
            None => self.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_over_each_ring_kind() {
        let mut rng = Lcg64::new(3);
        for s in ["gf(5)", "gf(9)", "z(6)", "z(8)", "m2(gf(2))", "m2(gf(3))"] {
            let k: Ring = s.parse().unwrap();
            for n in 1..=3 {
                for _ in 0..30 {
                    let m = Matrix::random(&k, &mut rng, n, n);
                    if let Some(inv) = m.inverse(&k) {
                        assert!(m.mul(&k, &inv).unwrap().is_identity(&k), "{s}");
                        assert!(inv.mul(&k, &m).unwrap().is_identity(&k), "{s}");
                    }
                }
            }
        }
    }

    #[test]
    fn z6_unit_determinant_without_unit_entries() {
        let k: Ring = "z(6)".parse().unwrap();
        let m = Matrix::parse(&k, "[[2,3],[3,2]]").unwrap();
        assert_eq!(k.format(m.det(&k).unwrap()), "1");
        assert!(m.is_invertible(&k));
        let singular = Matrix::parse(&k, "[[2,0],[0,1]]").unwrap();
        assert!(!singular.is_invertible(&k));
    }

    #[test]
    fn invertibility_counts_match_gl2_orders() {
        for (s, order) in [("gf(2)", 6), ("gf(3)", 48), ("gf(4)", 180)] {
            let k: Ring = s.parse().unwrap();
            assert_eq!(Matrix::all(&k, 2, 2).filter(|m| m.is_invertible(&k)).count(), order);
        }
    }

    #[test]
    fn parse_and_format() {
        let k: Ring = "gf(4)".parse().unwrap();
        let m = Matrix::parse(&k, "[[t, 0], [0, t+1]]").unwrap();
        assert_eq!(m.format(&k), "[[t,0],[0,t+1]]");
        assert!(Matrix::parse(&k, "[[t,0],[1]]").is_err());
    }

    #[test]
    fn normalization_picks_column_major_leader() {
        let k: Ring = "gf(5)".parse().unwrap();
        let m = Matrix::parse(&k, "[[0,3],[2,1]]").unwrap();
        assert_eq!(m.normalize_scalar(&k).format(&k), "[[0,4],[1,3]]");
    }
}
