//! Dense matrices over Z/p^k.
//!
//! Because Z/p^k is a local ring, every elimination step can pivot on an
//! entry of minimal valuation: all other entries of the working block are
//! multiples of it, so no Euclidean loop is needed.

use std::fmt;

use crate::error::{Error, Result};
use crate::residue::{Modulus, Residue};

/// Row-major dense matrix with entries in `[0, p^k)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatZ {
    rows: usize,
    cols: usize,
    modulus: Modulus,
    data: Vec<u64>,
}

/// `U * A * V` is diagonal with entries `p^divisors[i]`, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: MatZ,
    pub v: MatZ,
    /// One exponent per diagonal position (`min(rows, cols)` of them);
    /// `k` stands for a zero divisor.
    pub divisors: Vec<u32>,
}

impl MatZ {
    pub fn zeros(rows: usize, cols: usize, modulus: Modulus) -> Self {
        MatZ {
            rows,
            cols,
            modulus,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize, modulus: Modulus) -> Self {
        let mut m = Self::zeros(n, n, modulus);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Build from rows of arbitrary integers, reducing each into range.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R], modulus: Modulus) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::ShapeMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r.iter().map(|&x| modulus.reduce(x)));
        }
        Ok(MatZ {
            rows: rows.len(),
            cols,
            modulus,
            data,
        })
    }

    /// Build from row-major data already in `[0, p^k)`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<u64>, modulus: Modulus) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(&x) = data.iter().find(|&&x| x >= modulus.order()) {
            return Err(Error::EntryOutOfRange {
                value: x as i64,
                modulus: modulus.order(),
                context: "matrix data".into(),
            });
        }
        Ok(MatZ {
            rows,
            cols,
            modulus,
            data,
        })
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<u64>], modulus: Modulus) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len(), modulus);
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::ShapeMismatch(format!(
                    "column {j} has length {}, expected {rows}",
                    c.len()
                )));
            }
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x % modulus.order());
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: u64) {
        debug_assert!(x < self.modulus.order());
        self.data[i * self.cols + j] = x;
    }

    pub fn entry(&self, i: usize, j: usize) -> Residue {
        Residue::new(self.get(i, j), self.modulus)
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> MatZ {
        let mut t = Self::zeros(self.cols, self.rows, self.modulus);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mat_mul(&self, other: &MatZ) -> Result<MatZ> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus.order(),
                right: other.modulus.order(),
            });
        }
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let pk = self.modulus.order();
        let mut out = Self::zeros(self.rows, other.cols, self.modulus);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = (out.data[idx] + a * other.get(l, j)) % pk;
                }
            }
        }
        Ok(out)
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let pk = self.modulus.order();
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| (acc + a * b) % pk)
            })
            .collect())
    }

    pub fn scale(&self, c: u64) -> MatZ {
        let m = self.modulus;
        MatZ {
            data: self.data.iter().map(|&x| m.mul(x, c)).collect(),
            ..self.clone()
        }
    }

    pub fn neg(&self) -> MatZ {
        let m = self.modulus;
        MatZ {
            data: self.data.iter().map(|&x| m.neg(x)).collect(),
            ..self.clone()
        }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &MatZ) -> Result<MatZ> {
        if self.rows != other.rows || self.modulus != other.modulus {
            return Err(Error::ShapeMismatch("hstack row count".into()));
        }
        let cols = self.cols + other.cols;
        let mut out = Self::zeros(self.rows, cols, self.modulus);
        for i in 0..self.rows {
            out.data[i * cols..i * cols + self.cols].copy_from_slice(self.row(i));
            out.data[i * cols + self.cols..(i + 1) * cols].copy_from_slice(other.row(i));
        }
        Ok(out)
    }

    pub fn select_rows(&self, idx: &[usize]) -> MatZ {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        MatZ {
            rows: idx.len(),
            cols: self.cols,
            modulus: self.modulus,
            data,
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn scale_row(&mut self, i: usize, c: u64) {
        let m = self.modulus;
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.data[idx] = m.mul(self.data[idx], c);
        }
    }

    pub fn scale_col(&mut self, j: usize, c: u64) {
        let m = self.modulus;
        for i in 0..self.rows {
            let idx = i * self.cols + j;
            self.data[idx] = m.mul(self.data[idx], c);
        }
    }

    /// `row[dst] += c * row[src]`.
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, c: u64) {
        if c == 0 {
            return;
        }
        let m = self.modulus;
        for j in 0..self.cols {
            let s = self.data[src * self.cols + j];
            let idx = dst * self.cols + j;
            self.data[idx] = m.add(self.data[idx], m.mul(c, s));
        }
    }

    /// `col[dst] += c * col[src]`.
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, c: u64) {
        if c == 0 {
            return;
        }
        let m = self.modulus;
        for i in 0..self.rows {
            let s = self.data[i * self.cols + src];
            let idx = i * self.cols + dst;
            self.data[idx] = m.add(self.data[idx], m.mul(c, s));
        }
    }

    /// Rank of the reduction mod p, over the field Z/p.
    pub fn rank_mod_p(&self) -> usize {
        let p = self.modulus.p();
        let field = Modulus::new(p, 1).expect("p is prime");
        let mut a: Vec<u64> = self.data.iter().map(|&x| x % p).collect();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for c in 0..cols {
            let Some(piv) = (rank..rows).find(|&r| a[r * cols + c] != 0) else {
                continue;
            };
            for j in 0..cols {
                a.swap(piv * cols + j, rank * cols + j);
            }
            let inv = field.inverse(a[rank * cols + c]).expect("nonzero mod p");
            for r in 0..rows {
                if r == rank {
                    continue;
                }
                let f = field.mul(a[r * cols + c], inv);
                if f == 0 {
                    continue;
                }
                for j in c..cols {
                    let s = field.mul(f, a[rank * cols + j]);
                    a[r * cols + j] = field.sub(a[r * cols + j], s);
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    /// Position of the first (row-major) entry of minimal valuation in the
    /// block `[from_r.., from_c..]`, with that valuation.
    fn min_valuation_entry(&self, from_r: usize, from_c: usize) -> Option<(usize, usize, u32)> {
        let mut best: Option<(usize, usize, u32)> = None;
        for i in from_r..self.rows {
            for j in from_c..self.cols {
                let v = self.modulus.valuation(self.get(i, j));
                if v < best.map_or(self.modulus.k(), |b| b.2) {
                    best = Some((i, j, v));
                    if v == 0 {
                        return best;
                    }
                }
            }
        }
        best
    }

    pub fn smith_normal_form(&self) -> SmithDecomposition {
        let md = self.modulus;
        let k = md.k();
        let mut d = self.clone();
        let mut u = MatZ::identity(self.rows, md);
        let mut v = MatZ::identity(self.cols, md);
        let n = self.rows.min(self.cols);
        let mut divisors = Vec::with_capacity(n);
        for t in 0..n {
            let Some((i, j, e)) = d.min_valuation_entry(t, t) else {
                break;
            };
            d.swap_rows(t, i);
            u.swap_rows(t, i);
            d.swap_cols(t, j);
            v.swap_cols(t, j);
            let (_, unit) = md.split(d.get(t, t));
            let inv = md.inverse(unit).expect("unit part");
            d.scale_row(t, inv);
            u.scale_row(t, inv);
            let pe = md.pow_p(e);
            for r in t + 1..d.rows {
                let x = d.get(r, t) / pe;
                if x != 0 {
                    let c = md.neg(x);
                    d.add_row_multiple(r, t, c);
                    u.add_row_multiple(r, t, c);
                }
            }
            for c in t + 1..d.cols {
                let y = d.get(t, c) / pe;
                if y != 0 {
                    let f = md.neg(y);
                    d.add_col_multiple(c, t, f);
                    v.add_col_multiple(c, t, f);
                }
            }
            divisors.push(e);
        }
        divisors.resize(n, k);
        SmithDecomposition { u, v, divisors }
    }

    /// Generators of `{h : A h = 0 (mod p^i)}`, for `1 <= i <= k`.
    pub fn kernel_mod(&self, i: u32) -> Result<Vec<Vec<u64>>> {
        let md = self.modulus;
        if i == 0 || i > md.k() {
            return Err(Error::ShapeMismatch(format!(
                "kernel level {i} outside [1, {}]",
                md.k()
            )));
        }
        let snf = self.smith_normal_form();
        let mut gens = Vec::new();
        for j in 0..self.cols {
            let d = snf.divisors.get(j).copied().unwrap_or(md.k());
            let factor = md.pow_p(i.saturating_sub(d)) % md.order();
            let g: Vec<u64> = snf.v.column(j).iter().map(|&x| md.mul(x, factor)).collect();
            if g.iter().any(|&x| x != 0) {
                gens.push(g);
            }
        }
        Ok(gens)
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.rank_mod_p() == self.rows
    }

    /// Determinant by elimination on minimal-valuation pivots.
    pub fn determinant(&self) -> Result<Residue> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(
                "determinant of non-square matrix".into(),
            ));
        }
        let md = self.modulus;
        let n = self.rows;
        let mut a = self.clone();
        let mut det = 1u64;
        for t in 0..n {
            let mut best: Option<(usize, u32)> = None;
            for r in t..n {
                let v = md.valuation(a.get(r, t));
                if v < best.map_or(md.k(), |b| b.1) {
                    best = Some((r, v));
                }
            }
            let Some((r, e)) = best else {
                return Ok(Residue::new(0, md));
            };
            if r != t {
                a.swap_rows(r, t);
                det = md.neg(det);
            }
            let (_, unit) = md.split(a.get(t, t));
            let inv = md.inverse(unit).expect("unit part");
            let pe = md.pow_p(e);
            for s in t + 1..n {
                let x = a.get(s, t) / pe;
                if x != 0 {
                    a.add_row_multiple(s, t, md.neg(md.mul(x, inv)));
                }
            }
            det = md.mul(det, a.get(t, t));
        }
        Ok(Residue::new(det, md))
    }

    /// Inverse over Z/p^k; fails with `NotAUnit` when the determinant is not a unit.
    pub fn inverse(&self) -> Result<MatZ> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("inverse of non-square matrix".into()));
        }
        let md = self.modulus;
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = MatZ::identity(n, md);
        for t in 0..n {
            let Some(r) = (t..n).find(|&r| md.is_unit(a.get(r, t))) else {
                return Err(Error::NotAUnit {
                    value: self.determinant()?.value(),
                    modulus: md.order(),
                });
            };
            a.swap_rows(t, r);
            inv.swap_rows(t, r);
            let c = md.inverse(a.get(t, t))?;
            a.scale_row(t, c);
            inv.scale_row(t, c);
            for s in 0..n {
                if s != t {
                    let f = md.neg(a.get(s, t));
                    a.add_row_multiple(s, t, f);
                    inv.add_row_multiple(s, t, f);
                }
            }
        }
        Ok(inv)
    }
}

impl fmt::Debug for MatZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatZ[{}]{:?}", self.modulus, self.to_rows())
    }
}

impl SmithDecomposition {
    /// The diagonal matrix `U A V` claimed by the decomposition.
    pub fn diagonal(&self, rows: usize, cols: usize) -> MatZ {
        let md = self.u.modulus();
        let mut d = MatZ::zeros(rows, cols, md);
        for (t, &e) in self.divisors.iter().enumerate() {
            d.set(t, t, md.pow_p(e) % md.order());
        }
        d
    }
}
