//! Alternating forms on (Z/p^k)^m and their block normal form.
//!
//! Over the local ring Z/p^k every alternating form is congruent to an
//! orthogonal sum of hyperbolic blocks `[[0, p^a], [-p^a, 0]]` and a zero
//! block. The exponents `a` (with multiplicity) and the size of the zero
//! block are complete invariants under unimodular congruence; the q-tuple
//! repackages them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matmod::MatZ;
use crate::residue::Modulus;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlternatingForm {
    gram: MatZ,
}

/// `Cᵀ · gram · C` is block diagonal: one hyperbolic block per pair
/// exponent, in order, followed by a `radical_rank` square zero block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub change_of_basis: MatZ,
    pub pair_exponents: Vec<u32>,
    pub radical_rank: usize,
}

/// `(q_1, ..., q_k)`; `q_i` is the dimension of the μ-image of the
/// elements pairing into `p^i Z/p^k` with everything.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QTuple(pub Vec<u32>);

impl AlternatingForm {
    pub fn new(gram: MatZ) -> Result<Self> {
        validate_alternating(&gram)?;
        Ok(AlternatingForm { gram })
    }

    /// The zero form on `(Z/p^k)^m`.
    pub fn zero(m: usize, modulus: Modulus) -> Self {
        AlternatingForm {
            gram: MatZ::zeros(m, m, modulus),
        }
    }

    /// Orthogonal sum of hyperbolic blocks with the given exponents and a
    /// zero block of size `radical_rank`.
    pub fn block(pair_exponents: &[u32], radical_rank: usize, modulus: Modulus) -> Result<Self> {
        let m = 2 * pair_exponents.len() + radical_rank;
        let mut gram = MatZ::zeros(m, m, modulus);
        for (t, &a) in pair_exponents.iter().enumerate() {
            if a >= modulus.k() {
                return Err(Error::ShapeMismatch(format!(
                    "pair exponent {a} must be below k = {}",
                    modulus.k()
                )));
            }
            let x = modulus.pow_p(a);
            gram.set(2 * t, 2 * t + 1, x);
            gram.set(2 * t + 1, 2 * t, modulus.neg(x));
        }
        Ok(AlternatingForm { gram })
    }

    /// The block form whose q-tuple is `q` (rank `m`).
    pub fn from_q(q: &QTuple, m: usize, modulus: Modulus) -> Result<Self> {
        let (exps, r) = exponents_from_q(q, m, modulus.k())?;
        Self::block(&exps, r, modulus)
    }

    pub fn gram(&self) -> &MatZ {
        &self.gram
    }

    pub fn into_gram(self) -> MatZ {
        self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn modulus(&self) -> Modulus {
        self.gram.modulus()
    }

    /// `Cᵀ · gram · C`.
    pub fn congruent(&self, c: &MatZ) -> Result<AlternatingForm> {
        let g = c.transpose().mat_mul(&self.gram)?.mat_mul(c)?;
        Ok(AlternatingForm { gram: g })
    }

    pub fn normal_form(&self) -> NormalForm {
        normal_form(self)
    }

    pub fn q_invariant(&self) -> QTuple {
        q_invariant(self)
    }
}

/// Checks a zero diagonal and `gram[j][i] = -gram[i][j]`.
///
/// Both are required: over Z/2 antisymmetry alone allows a nonzero diagonal.
pub fn validate_alternating(q: &MatZ) -> Result<()> {
    if !q.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "gram matrix is {}x{}",
            q.rows(),
            q.cols()
        )));
    }
    let md = q.modulus();
    for i in 0..q.rows() {
        if q.get(i, i) != 0 {
            return Err(Error::NotAlternating { i, j: i });
        }
        for j in i + 1..q.cols() {
            if q.get(j, i) != md.neg(q.get(i, j)) {
                return Err(Error::NotAlternating { i, j });
            }
        }
    }
    Ok(())
}

/// Working state for the congruence reduction: `gram` is always
/// `basisᵀ · original · basis`.
struct Reducer {
    gram: MatZ,
    basis: MatZ,
}

impl Reducer {
    fn swap(&mut self, a: usize, b: usize) {
        self.gram.swap_rows(a, b);
        self.gram.swap_cols(a, b);
        self.basis.swap_cols(a, b);
    }

    fn scale(&mut self, a: usize, c: u64) {
        self.gram.scale_row(a, c);
        self.gram.scale_col(a, c);
        self.basis.scale_col(a, c);
    }

    /// Basis vector `dst += c * src`.
    fn add(&mut self, dst: usize, src: usize, c: u64) {
        self.gram.add_row_multiple(dst, src, c);
        self.gram.add_col_multiple(dst, src, c);
        self.basis.add_col_multiple(dst, src, c);
    }
}

pub fn normal_form(form: &AlternatingForm) -> NormalForm {
    let md = form.modulus();
    let m = form.rank();
    let mut r = Reducer {
        gram: form.gram.clone(),
        basis: MatZ::identity(m, md),
    };
    let mut exps = Vec::new();
    let mut t = 0;
    while t + 1 < m {
        // Lexicographically first entry of minimal valuation; it lies above
        // the diagonal because the matrix is alternating.
        let mut best: Option<(usize, usize, u32)> = None;
        'scan: for i in t..m {
            for j in t..m {
                let v = md.valuation(r.gram.get(i, j));
                if v < best.map_or(md.k(), |b| b.2) {
                    best = Some((i, j, v));
                    if v == 0 {
                        break 'scan;
                    }
                }
            }
        }
        let Some((i, j, a)) = best else {
            break;
        };
        debug_assert!(i < j);
        r.swap(t, i);
        r.swap(t + 1, j);
        let (_, unit) = md.split(r.gram.get(t, t + 1));
        r.scale(t + 1, md.inverse(unit).expect("unit part"));
        let pa = md.pow_p(a);
        debug_assert_eq!(r.gram.get(t, t + 1), pa);
        for l in t + 2..m {
            // x_l <- x_l - (e, x_l)/p^a f + (f, x_l)/p^a e
            let alpha = r.gram.get(t, l) / pa;
            let beta = r.gram.get(t + 1, l) / pa;
            r.add(l, t + 1, md.neg(alpha));
            r.add(l, t, beta);
        }
        exps.push(a);
        t += 2;
    }
    NormalForm {
        change_of_basis: r.basis,
        pair_exponents: exps,
        radical_rank: m - t,
    }
}

impl NormalForm {
    pub fn rank(&self) -> usize {
        2 * self.pair_exponents.len() + self.radical_rank
    }

    pub fn block_form(&self) -> AlternatingForm {
        AlternatingForm::block(
            &self.pair_exponents,
            self.radical_rank,
            self.change_of_basis.modulus(),
        )
        .expect("exponents below k")
    }

    /// Pairs with exponent 0.
    pub fn unit_pairs(&self) -> usize {
        self.pair_exponents.iter().filter(|&&a| a == 0).count()
    }

    /// Pairs with exponent at least 1.
    pub fn degenerate_pairs(&self) -> usize {
        self.pair_exponents.len() - self.unit_pairs()
    }
}

/// `q_i = m - 2 #{j : a_j < i}` for `i = 1..=k`.
pub fn q_from_exponents(nf: &NormalForm, k: u32) -> QTuple {
    let m = nf.rank() as u32;
    QTuple(
        (1..=k)
            .map(|i| m - 2 * nf.pair_exponents.iter().filter(|&&a| a < i).count() as u32)
            .collect(),
    )
}

pub fn q_invariant(form: &AlternatingForm) -> QTuple {
    q_from_exponents(&normal_form(form), form.modulus().k())
}

pub fn validate_q_tuple(q: &QTuple, m: usize, k: u32) -> bool {
    let q = &q.0;
    q.len() == k as usize
        && q.windows(2).all(|w| w[0] >= w[1])
        && q.iter()
            .all(|&x| x as usize <= m && (x as usize) % 2 == m % 2)
}

/// Inverse of [`q_from_exponents`]: ascending pair exponents and radical rank.
pub fn exponents_from_q(q: &QTuple, m: usize, k: u32) -> Result<(Vec<u32>, usize)> {
    if !validate_q_tuple(q, m, k) {
        return Err(Error::InvalidQTuple {
            q: q.0.clone(),
            m,
            k,
        });
    }
    let mut exps = Vec::new();
    let mut prev = m as u32;
    for (a, &qi) in q.0.iter().enumerate() {
        for _ in 0..(prev - qi) / 2 {
            exps.push(a as u32);
        }
        prev = qi;
    }
    Ok((exps, prev as usize))
}

/// Every valid q-tuple for rank `m`, in ascending lexicographic order.
pub fn all_q_tuples(m: usize, k: u32) -> Vec<QTuple> {
    fn rec(m: u32, left: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<QTuple>) {
        if left == 0 {
            out.push(QTuple(cur.clone()));
            return;
        }
        let mut x = m % 2;
        while x <= max {
            cur.push(x);
            rec(m, left - 1, x, cur, out);
            cur.pop();
            x += 2;
        }
    }
    let mut out = Vec::new();
    rec(m as u32, k, m as u32, &mut Vec::new(), &mut out);
    out.sort();
    out
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pairs {:?}, radical rank {}",
            self.pair_exponents, self.radical_rank
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(p: u64, k: u32) -> Modulus {
        Modulus::new(p, k).unwrap()
    }

    fn form(rows: &[&[i64]], m: Modulus) -> AlternatingForm {
        AlternatingForm::new(MatZ::from_rows(rows, m).unwrap()).unwrap()
    }

    fn check_nf(f: &AlternatingForm, nf: &NormalForm) {
        let c = &nf.change_of_basis;
        assert!(c.is_unimodular());
        assert_eq!(f.congruent(c).unwrap(), nf.block_form());
        assert!(nf.pair_exponents.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn validation_examples() {
        let z4 = md(2, 2);
        assert!(AlternatingForm::new(MatZ::from_rows(&[[0, 1], [-1, 0]], z4).unwrap()).is_ok());
        let z2 = md(2, 1);
        assert!(AlternatingForm::new(MatZ::from_rows(&[[0, 1], [1, 0]], z2).unwrap()).is_ok());
        assert_eq!(
            AlternatingForm::new(MatZ::from_rows(&[[1]], md(3, 1)).unwrap()),
            Err(Error::NotAlternating { i: 0, j: 0 })
        );
        assert_eq!(
            AlternatingForm::new(MatZ::from_rows(&[[1, 1], [1, 0]], z2).unwrap()),
            Err(Error::NotAlternating { i: 0, j: 0 })
        );
        assert_eq!(
            AlternatingForm::new(MatZ::from_rows(&[[0, 1], [1, 0]], md(3, 1)).unwrap()),
            Err(Error::NotAlternating { i: 0, j: 1 })
        );
        assert!(matches!(
            AlternatingForm::new(MatZ::zeros(1, 2, z4)),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn normal_form_examples() {
        let z4 = md(2, 2);
        let zero = AlternatingForm::zero(3, z4);
        let nf = zero.normal_form();
        assert!(nf.pair_exponents.is_empty());
        assert_eq!(nf.radical_rank, 3);

        let f = form(&[&[0, 2], &[-2, 0]], z4);
        let nf = f.normal_form();
        assert_eq!(nf.pair_exponents, vec![1]);
        assert_eq!(nf.radical_rank, 0);
        assert_eq!(nf.change_of_basis, MatZ::identity(2, z4));

        let f = form(&[&[0, 1, 0], &[-1, 0, 2], &[0, -2, 0]], z4);
        let nf = f.normal_form();
        assert_eq!(nf.pair_exponents, vec![0]);
        assert_eq!(nf.radical_rank, 1);
        check_nf(&f, &nf);
    }

    #[test]
    fn pivot_needs_swaps_and_scaling() {
        let z9 = md(3, 2);
        let f = form(
            &[
                &[0, 3, 6, 0],
                &[-3, 0, 0, 3],
                &[-6, 0, 0, 5],
                &[0, -3, -5, 0],
            ],
            z9,
        );
        let nf = f.normal_form();
        assert_eq!(nf.pair_exponents, vec![0, 1]);
        check_nf(&f, &nf);
    }

    #[test]
    fn q_examples() {
        let z2 = md(2, 1);
        let j = form(&[&[0, 1], &[-1, 0]], z2);
        assert_eq!(j.q_invariant(), QTuple(vec![0]));
        let z4 = md(2, 2);
        let f = form(&[&[0, 2], &[-2, 0]], z4);
        assert_eq!(f.q_invariant(), QTuple(vec![2, 0]));
        let z27 = md(3, 3);
        assert_eq!(
            AlternatingForm::zero(3, z27).q_invariant(),
            QTuple(vec![3, 3, 3])
        );
    }

    #[test]
    fn q_tuple_validation() {
        assert!(validate_q_tuple(&QTuple(vec![2, 0]), 2, 2));
        assert!(!validate_q_tuple(&QTuple(vec![1, 2]), 2, 2));
        assert!(!validate_q_tuple(&QTuple(vec![2]), 2, 2));
        assert!(!validate_q_tuple(&QTuple(vec![4, 2]), 2, 2));
        for m in 0..5 {
            for k in 1..4 {
                assert!(validate_q_tuple(&QTuple(vec![m as u32; k as usize]), m, k));
            }
        }
    }

    #[test]
    fn q_tuple_enumeration_roundtrip() {
        assert_eq!(
            all_q_tuples(2, 2),
            vec![QTuple(vec![0, 0]), QTuple(vec![2, 0]), QTuple(vec![2, 2])]
        );
        assert_eq!(all_q_tuples(1, 3), vec![QTuple(vec![1, 1, 1])]);
        let z8 = md(2, 3);
        for m in 0..6 {
            for q in all_q_tuples(m, 3) {
                let f = AlternatingForm::from_q(&q, m, z8).unwrap();
                assert_eq!(f.rank(), m);
                assert_eq!(f.q_invariant(), q);
            }
        }
    }
}
