//! Strong and weak equivalence, realization of invariants and enumeration
//! of weak classes.

use std::ops::ControlFlow;

use serde::{Serialize, Serializer};

use crate::action::{ActionDescriptor, CharFunction};
use crate::error::{Error, Result};
use crate::matmod::MatZ;
use crate::residue::Modulus;
use crate::symform::{all_q_tuples, validate_q_tuple, AlternatingForm, QTuple};

/// Default cap on `|GL_m(Z/p^k)|` for exhaustive automorphism searches.
pub const DEFAULT_AUT_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Strong,
    Weak,
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "strong" => Ok(Mode::Strong),
            "weak" => Ok(Mode::Weak),
            _ => Err(format!("unknown mode {s:?} (expected strong or weak)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mismatch {
    CoveringGenus {
        left: u128,
        right: u128,
    },
    CharFunction,
    GramMismatch,
    QTuple {
        left: QTuple,
        right: QTuple,
    },
    /// No automorphism carries the first action's branch data and form to the second's.
    NoAutomorphism,
    /// Canonical branch data differ under the fallback subgroup; inconclusive.
    PartialCharFunction,
}

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mismatch::CoveringGenus { left, right } => {
                write!(f, "covering genus mismatch ({left} vs {right})")
            }
            Mismatch::CharFunction => write!(f, "characteristic function mismatch"),
            Mismatch::GramMismatch => write!(f, "gram mismatch"),
            Mismatch::QTuple { left, right } => {
                write!(f, "q mismatch ({:?} vs {:?})", left.0, right.0)
            }
            Mismatch::NoAutomorphism => write!(f, "no automorphism matches branch data and form"),
            Mismatch::PartialCharFunction => {
                write!(
                    f,
                    "characteristic functions differ under the fallback subgroup"
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceVerdict {
    pub equivalent: bool,
    pub mode: Mode,
    /// For weak equivalence: `α` with `α · A` strongly equivalent to `A'`,
    /// i.e. `α θ` has the same induced form and `l'(α h) = l(h)`.
    #[serde(serialize_with = "ser_opt_mat")]
    pub witness: Option<MatZ>,
    pub reason: Option<Mismatch>,
    /// False when the verdict came from the budget fallback.
    pub exact: bool,
}

fn ser_opt_mat<S: Serializer>(m: &Option<MatZ>, s: S) -> std::result::Result<S::Ok, S::Error> {
    m.as_ref().map(MatZ::to_rows).serialize(s)
}

impl EquivalenceVerdict {
    fn yes(mode: Mode, witness: Option<MatZ>) -> Self {
        EquivalenceVerdict {
            equivalent: true,
            mode,
            witness,
            reason: None,
            exact: true,
        }
    }

    fn no(mode: Mode, reason: Mismatch) -> Self {
        EquivalenceVerdict {
            equivalent: false,
            mode,
            witness: None,
            reason: Some(reason),
            exact: true,
        }
    }
}

/// How weak equivalence of branched actions searches `Aut(G)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeakSearch {
    pub budget: u128,
    /// Fail with `BudgetExceeded` instead of using the fallback.
    pub force_exhaustive: bool,
}

impl Default for WeakSearch {
    fn default() -> Self {
        WeakSearch {
            budget: DEFAULT_AUT_BUDGET,
            force_exhaustive: false,
        }
    }
}

fn compatible(a: &ActionDescriptor, b: &ActionDescriptor) -> Result<()> {
    if a.modulus() != b.modulus() || a.m() != b.m() {
        return Err(Error::IncompatibleGroups);
    }
    Ok(())
}

pub fn strong_equivalent(a: &ActionDescriptor, b: &ActionDescriptor) -> Result<EquivalenceVerdict> {
    compatible(a, b)?;
    let (ia, ib) = (a.strong_invariant()?, b.strong_invariant()?);
    let mode = Mode::Strong;
    if ia.covering_genus != ib.covering_genus {
        return Ok(EquivalenceVerdict::no(
            mode,
            Mismatch::CoveringGenus {
                left: ia.covering_genus,
                right: ib.covering_genus,
            },
        ));
    }
    if ia.l != ib.l {
        return Ok(EquivalenceVerdict::no(mode, Mismatch::CharFunction));
    }
    if ia.gram != ib.gram {
        return Ok(EquivalenceVerdict::no(mode, Mismatch::GramMismatch));
    }
    Ok(EquivalenceVerdict::yes(mode, None))
}

pub fn weak_equivalent(a: &ActionDescriptor, b: &ActionDescriptor) -> Result<EquivalenceVerdict> {
    weak_equivalent_with(a, b, WeakSearch::default())
}

pub fn weak_equivalent_with(
    a: &ActionDescriptor,
    b: &ActionDescriptor,
    search: WeakSearch,
) -> Result<EquivalenceVerdict> {
    compatible(a, b)?;
    a.check()?;
    b.check()?;
    let mode = Mode::Weak;
    let (ga, gb) = (a.covering_genus()?, b.covering_genus()?);
    if ga != gb {
        return Ok(EquivalenceVerdict::no(
            mode,
            Mismatch::CoveringGenus {
                left: ga,
                right: gb,
            },
        ));
    }
    let (fa, fb) = (a.induced_form()?, b.induced_form()?);
    let (qa, qb) = (fa.q_invariant(), fb.q_invariant());
    if qa != qb {
        return Ok(EquivalenceVerdict::no(
            mode,
            Mismatch::QTuple {
                left: qa,
                right: qb,
            },
        ));
    }
    if a.is_free() && b.is_free() {
        return Ok(EquivalenceVerdict::yes(
            mode,
            Some(form_isometry(&fa, &fb)?),
        ));
    }
    let md = a.modulus();
    let predicted = gl_order(a.m(), md);
    if predicted <= search.budget {
        let target = b.strong_invariant()?;
        let mut witness = None;
        for_each_gl(a.m(), md, |alpha| {
            let Ok(pushed) = a.branches().push_forward(alpha) else {
                return ControlFlow::Continue(());
            };
            if pushed != target.l {
                return ControlFlow::Continue(());
            }
            let moved = a.relabel(alpha).and_then(|r| r.induced_form());
            if moved.is_ok_and(|f| f == target.gram) {
                witness = Some(alpha.clone());
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        });
        return Ok(match witness {
            Some(w) => EquivalenceVerdict::yes(mode, Some(w)),
            None => EquivalenceVerdict::no(mode, Mismatch::NoAutomorphism),
        });
    }
    if search.force_exhaustive {
        return Err(Error::BudgetExceeded {
            predicted,
            budget: search.budget,
        });
    }
    let ca = canonicalize_l(a.branches(), a.m(), md, search.budget)?;
    let cb = canonicalize_l(b.branches(), b.m(), md, search.budget)?;
    let mut v = if ca.l == cb.l {
        EquivalenceVerdict::yes(mode, None)
    } else {
        EquivalenceVerdict::no(mode, Mismatch::PartialCharFunction)
    };
    v.exact = false;
    Ok(v)
}

/// `α` with `α · Q_a · αᵀ = Q_b`, assembled from the two normal forms.
/// Requires equal q-tuples.
pub fn form_isometry(fa: &AlternatingForm, fb: &AlternatingForm) -> Result<MatZ> {
    let (na, nb) = (fa.normal_form(), fb.normal_form());
    if na.pair_exponents != nb.pair_exponents || na.radical_rank != nb.radical_rank {
        return Err(Error::ShapeMismatch("forms are not congruent".into()));
    }
    let cb_inv = nb.change_of_basis.inverse()?;
    cb_inv.transpose().mat_mul(&na.change_of_basis.transpose())
}

/// `|GL_m(Z/p^k)| = p^((k-1) m^2) ∏_{i<m} (p^m - p^i)`, saturating.
pub fn gl_order(m: usize, modulus: Modulus) -> u128 {
    let p = modulus.p() as u128;
    let mut n: u128 = 1;
    let lift = (modulus.k() as u128 - 1) * (m * m) as u128;
    for _ in 0..lift {
        n = n.saturating_mul(p);
    }
    let pm = p.checked_pow(m as u32);
    for i in 0..m {
        let Some(pm) = pm else {
            return u128::MAX;
        };
        n = n.saturating_mul(pm - p.pow(i as u32));
    }
    n
}

/// Visits every invertible `m×m` matrix over Z/p^k in ascending row-major
/// lexicographic order, stopping early on `Break`.
pub fn for_each_gl<F>(m: usize, modulus: Modulus, mut visit: F)
where
    F: FnMut(&MatZ) -> ControlFlow<()>,
{
    let pk = modulus.order();
    let vectors: Vec<Vec<u64>> = all_vectors(m, pk).collect();
    let mut cur = MatZ::zeros(m, m, modulus);
    let mut echelon: Vec<Vec<u64>> = Vec::new();
    fn rec<F: FnMut(&MatZ) -> ControlFlow<()>>(
        row: usize,
        m: usize,
        modulus: Modulus,
        vectors: &[Vec<u64>],
        cur: &mut MatZ,
        echelon: &mut Vec<Vec<u64>>,
        visit: &mut F,
    ) -> ControlFlow<()> {
        if row == m {
            return visit(cur);
        }
        for v in vectors {
            let Some(reduced) = reduce_mod_p(v, echelon, modulus.p()) else {
                continue;
            };
            for (j, &x) in v.iter().enumerate() {
                cur.set(row, j, x);
            }
            echelon.push(reduced);
            let flow = rec(row + 1, m, modulus, vectors, cur, echelon, visit);
            echelon.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }
    let _ = rec(0, m, modulus, &vectors, &mut cur, &mut echelon, &mut visit);
}

/// Reduces `v mod p` against an echelon basis; `None` if it lies in the span.
fn reduce_mod_p(v: &[u64], echelon: &[Vec<u64>], p: u64) -> Option<Vec<u64>> {
    let mut w: Vec<u64> = v.iter().map(|&x| x % p).collect();
    for b in echelon {
        let lead = b.iter().position(|&x| x != 0).expect("nonzero basis row");
        if w[lead] != 0 {
            // b is normalized to lead 1
            let f = w[lead];
            for (x, &y) in w.iter_mut().zip(b) {
                *x = (*x + p * p - f * y % p) % p;
            }
        }
    }
    let lead = w.iter().position(|&x| x != 0)?;
    let inv = Modulus::new(p, 1)
        .and_then(|f| f.inverse(w[lead]))
        .expect("nonzero mod p");
    for x in w.iter_mut() {
        *x = *x * inv % p;
    }
    Some(w)
}

/// All vectors of `(Z/n)^m` in lexicographic order.
pub fn all_vectors(m: usize, n: u64) -> impl Iterator<Item = Vec<u64>> {
    let total = (n as u128).pow(m as u32);
    (0..total).map(move |mut code| {
        let mut v = vec![0u64; m];
        for x in v.iter_mut().rev() {
            *x = (code % n as u128) as u64;
            code /= n as u128;
        }
        v
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonicalL {
    pub l: CharFunction,
    /// True when minimized over all of `Aut(G)`; false for the fallback
    /// subgroup of coordinate permutations and unit scalars.
    pub exact: bool,
}

type LKey = Vec<(Vec<u64>, u64)>;

/// Sort key ordering characteristic functions for canonicalization: group
/// elements compare with the last coordinate most significant, entries are
/// compared in that order, then by count.
fn l_key(l: &CharFunction) -> LKey {
    let mut key: LKey = l
        .iter()
        .map(|(h, c)| (h.iter().rev().copied().collect(), c))
        .collect();
    key.sort();
    key
}

pub fn canonicalize_l(
    l: &CharFunction,
    m: usize,
    modulus: Modulus,
    budget: u128,
) -> Result<CanonicalL> {
    if l.is_empty() {
        return Ok(CanonicalL {
            l: l.clone(),
            exact: true,
        });
    }
    let mut best: Option<(LKey, CharFunction)> = None;
    let mut consider = |alpha: &MatZ| -> Result<()> {
        let img = l.push_forward(alpha)?;
        let key = l_key(&img);
        if best.as_ref().is_none_or(|(k, _)| key < *k) {
            best = Some((key, img));
        }
        Ok(())
    };
    let exact = gl_order(m, modulus) <= budget;
    if exact {
        let mut err = None;
        for_each_gl(m, modulus, |alpha| match consider(alpha) {
            Ok(()) => ControlFlow::Continue(()),
            Err(e) => {
                err = Some(e);
                ControlFlow::Break(())
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
    } else {
        for perm in permutations(m) {
            for u in modulus.units() {
                let mut alpha = MatZ::zeros(m, m, modulus);
                for (i, &j) in perm.iter().enumerate() {
                    alpha.set(i, j, u);
                }
                consider(&alpha)?;
            }
        }
    }
    Ok(CanonicalL {
        l: best.expect("nonempty group").1,
        exact,
    })
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; m], &mut out);
    out
}

/// Smallest covering genus of a free action with invariant `q`:
/// `p^(km) ((m + q_1)/2 - 1) + 1`.
pub fn min_covering_genus(q: &QTuple, modulus: Modulus, m: usize) -> Result<u128> {
    if !validate_q_tuple(q, m, modulus.k()) {
        return Err(Error::InvalidQTuple {
            q: q.0.clone(),
            m,
            k: modulus.k(),
        });
    }
    let half = (m + q.0[0] as usize) / 2;
    let n = (modulus.order() as u128).pow(m as u32);
    Ok(n * (half as u128 - 1) + 1)
}

/// Smallest quotient genus admitting a free action whose induced form is `f`.
pub fn min_quotient_genus(f: &AlternatingForm) -> usize {
    let nf = f.normal_form();
    nf.unit_pairs() + 2 * nf.degenerate_pairs() + nf.radical_rank
}

pub fn realizable(f: &AlternatingForm, g: usize) -> bool {
    g >= min_quotient_genus(f)
}

/// A free action on a genus-`g` quotient whose induced form is exactly `f`.
///
/// Built in the normal basis: a unit pair takes a fresh symplectic pair
/// `(E_j, F_j)`; a pair with exponent `a >= 1` takes `(E_i, p^a F_i + E_j)`;
/// a radical vector takes `E_j`. Symplectic pairs are used in ascending
/// order and the change of basis is undone at the end.
pub fn realize(f: &AlternatingForm, g: usize) -> Result<ActionDescriptor> {
    let required = min_quotient_genus(f);
    if g < required {
        return Err(Error::NotRealizable { required, genus: g });
    }
    let md = f.modulus();
    let m = f.rank();
    let nf = f.normal_form();
    let n = 2 * g;
    let e = |j: usize| j;
    let fcol = |j: usize| n - 1 - j;
    let mut r = MatZ::zeros(m, n, md);
    let mut next = 0;
    for (t, &a) in nf.pair_exponents.iter().enumerate() {
        let (x, y) = (2 * t, 2 * t + 1);
        if a == 0 {
            r.set(x, e(next), 1);
            r.set(y, fcol(next), 1);
            next += 1;
        } else {
            let (i, j) = (next, next + 1);
            r.set(x, e(i), 1);
            r.set(y, fcol(i), md.pow_p(a));
            r.set(y, e(j), 1);
            next += 2;
        }
    }
    for s in 0..nf.radical_rank {
        r.set(2 * nf.pair_exponents.len() + s, e(next), 1);
        next += 1;
    }
    let theta = nf.change_of_basis.inverse()?.transpose().mat_mul(&r)?;
    ActionDescriptor::free(theta)
}

/// Realizes the block form with invariant `q` at quotient genus `g`.
pub fn realize_q(q: &QTuple, m: usize, modulus: Modulus, g: usize) -> Result<ActionDescriptor> {
    realize(&AlternatingForm::from_q(q, m, modulus)?, g)
}

/// Quotient genus of a free action with the given covering genus, if any.
pub fn free_quotient_genus(modulus: Modulus, m: usize, covering_genus: u128) -> Option<usize> {
    let n = (modulus.order() as u128).checked_pow(m as u32)?;
    if covering_genus == 0 || !(covering_genus - 1).is_multiple_of(n) {
        return None;
    }
    usize::try_from((covering_genus - 1) / n + 1).ok()
}

/// Weak classes of free actions with the given covering genus, by q-tuple
/// in ascending lexicographic order.
pub fn enumerate_weak_classes(modulus: Modulus, m: usize, covering_genus: u128) -> Vec<QTuple> {
    let Some(g) = free_quotient_genus(modulus, m, covering_genus) else {
        return Vec::new();
    };
    all_q_tuples(m, modulus.k())
        .into_iter()
        .filter(|q| 2 * g >= m + q.0[0] as usize)
        .collect()
}

/// Like [`enumerate_weak_classes`], with an explicit realization of each class.
pub fn enumerate_weak_classes_witnessed(
    modulus: Modulus,
    m: usize,
    covering_genus: u128,
) -> Result<Vec<(QTuple, ActionDescriptor)>> {
    let Some(g) = free_quotient_genus(modulus, m, covering_genus) else {
        return Ok(Vec::new());
    };
    enumerate_weak_classes(modulus, m, covering_genus)
        .into_iter()
        .map(|q| {
            let a = realize_q(&q, m, modulus, g)?;
            Ok((q, a))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(p: u64, k: u32) -> Modulus {
        Modulus::new(p, k).unwrap()
    }

    fn free(rows: &[&[i64]], m: Modulus) -> ActionDescriptor {
        ActionDescriptor::free(MatZ::from_rows(rows, m).unwrap()).unwrap()
    }

    fn form(rows: &[&[i64]], m: Modulus) -> AlternatingForm {
        AlternatingForm::new(MatZ::from_rows(rows, m).unwrap()).unwrap()
    }

    #[test]
    fn strong_examples() {
        let z2 = md(2, 1);
        let a = free(&[&[1, 0, 0, 0]], z2);
        let b = free(&[&[0, 0, 1, 0]], z2);
        assert!(strong_equivalent(&a, &b).unwrap().equivalent);
        let z3 = md(3, 1);
        let c = free(&[&[1, 0], &[0, 1]], z3);
        let d = free(&[&[0, 1], &[1, 0]], z3);
        let v = strong_equivalent(&c, &d).unwrap();
        assert!(!v.equivalent);
        assert_eq!(v.reason, Some(Mismatch::GramMismatch));
        assert_eq!(v.reason.unwrap().to_string(), "gram mismatch");
        assert!(strong_equivalent(&c, &c).unwrap().equivalent);
        assert_eq!(strong_equivalent(&a, &c), Err(Error::IncompatibleGroups));
    }

    #[test]
    fn weak_examples() {
        let z3 = md(3, 1);
        let c = free(&[&[1, 0], &[0, 1]], z3);
        let d = free(&[&[0, 1], &[1, 0]], z3);
        let v = weak_equivalent(&c, &d).unwrap();
        assert!(v.equivalent);
        let alpha = v.witness.unwrap();
        assert!(alpha.is_unimodular());
        assert_eq!(alpha.determinant().unwrap().value(), 2);
        assert!(
            strong_equivalent(&c.relabel(&alpha).unwrap(), &d)
                .unwrap()
                .equivalent
        );

        let z4 = md(2, 2);
        let j = free(&[&[1, 0], &[0, 1]], z4);
        let two_j = free(&[&[1, 0, 0, 0], &[0, 1, 0, 2]], z4);
        let v = weak_equivalent(&j, &two_j).unwrap();
        assert!(!v.equivalent);
        assert!(matches!(v.reason, Some(Mismatch::CoveringGenus { .. })));
        // same covering genus, different q
        let j2 = free(&[&[1, 0, 0, 0], &[0, 0, 0, 1]], z4);
        let v = weak_equivalent(&j2, &two_j).unwrap();
        assert_eq!(
            v.reason,
            Some(Mismatch::QTuple {
                left: QTuple(vec![0, 0]),
                right: QTuple(vec![2, 0])
            })
        );

        let v = weak_equivalent(&c, &c).unwrap();
        assert!(v.equivalent);
        assert!(
            strong_equivalent(&c.relabel(&v.witness.unwrap()).unwrap(), &c)
                .unwrap()
                .equivalent
        );
    }

    #[test]
    fn weak_branched_search() {
        let z3 = md(3, 1);
        let t = MatZ::from_rows(&[[1, 0], [0, 0]], z3).unwrap();
        let la = CharFunction::from_pairs([(vec![0, 1], 3)]);
        let lb = CharFunction::from_pairs([(vec![0, 2], 3)]);
        let lc = CharFunction::from_pairs([(vec![0, 1], 1), (vec![0, 2], 1)]);
        let a = ActionDescriptor::new(z3, 2, 1, t.clone(), la).unwrap();
        let b = ActionDescriptor::new(z3, 2, 1, t.clone(), lb).unwrap();
        let c = ActionDescriptor::new(z3, 2, 1, t, lc).unwrap();
        assert!(!strong_equivalent(&a, &b).unwrap().equivalent);
        let v = weak_equivalent(&a, &b).unwrap();
        assert!(v.equivalent && v.exact);
        let w = v.witness.unwrap();
        assert_eq!(a.branches().push_forward(&w).unwrap(), *b.branches());
        let v = weak_equivalent(&a, &c).unwrap();
        assert!(!v.equivalent);

        let forced = WeakSearch {
            budget: 10,
            force_exhaustive: true,
        };
        assert!(matches!(
            weak_equivalent_with(&a, &b, forced),
            Err(Error::BudgetExceeded { predicted: 48, .. })
        ));
        let fallback = WeakSearch {
            budget: 10,
            force_exhaustive: false,
        };
        let v = weak_equivalent_with(&a, &b, fallback).unwrap();
        assert!(v.equivalent && !v.exact);
    }

    #[test]
    fn gl_counts() {
        assert_eq!(gl_order(2, md(2, 1)), 6);
        assert_eq!(gl_order(2, md(2, 2)), 96);
        assert_eq!(gl_order(1, md(3, 2)), 6);
        assert_eq!(gl_order(3, md(2, 1)), 168);
        for (m, p, k) in [(1, 5, 2), (2, 2, 1), (2, 2, 2), (2, 3, 1), (3, 2, 1)] {
            let modulus = md(p, k);
            let mut count = 0u128;
            let mut prev: Option<Vec<u64>> = None;
            for_each_gl(m, modulus, |a| {
                assert!(a.is_unimodular());
                let d = a.data().to_vec();
                assert!(prev.as_ref().is_none_or(|p| *p < d), "lexicographic order");
                prev = Some(d);
                count += 1;
                ControlFlow::Continue(())
            });
            assert_eq!(count, gl_order(m, modulus));
        }
    }

    #[test]
    fn canonicalize_examples() {
        let z2 = md(2, 1);
        let l = CharFunction::from_pairs([(vec![0, 1], 2)]);
        let c = canonicalize_l(&l, 2, z2, DEFAULT_AUT_BUDGET).unwrap();
        assert_eq!(c.l, CharFunction::from_pairs([(vec![1, 0], 2)]));
        assert!(c.exact);
        let empty = CharFunction::new();
        assert_eq!(canonicalize_l(&empty, 2, z2, 0).unwrap().l, empty);
        let l = CharFunction::from_pairs([(vec![1], 4)]);
        assert_eq!(canonicalize_l(&l, 1, z2, DEFAULT_AUT_BUDGET).unwrap().l, l);
        let partial =
            canonicalize_l(&CharFunction::from_pairs([(vec![0, 1], 2)]), 2, z2, 1).unwrap();
        assert!(!partial.exact);
        assert_eq!(partial.l, CharFunction::from_pairs([(vec![1, 0], 2)]));
    }

    #[test]
    fn min_genus_examples() {
        let z2 = md(2, 1);
        assert_eq!(min_covering_genus(&QTuple(vec![0]), z2, 2).unwrap(), 1);
        assert_eq!(min_covering_genus(&QTuple(vec![2]), z2, 2).unwrap(), 5);
        assert_eq!(
            min_covering_genus(&QTuple(vec![2, 0]), md(2, 2), 2).unwrap(),
            17
        );
        assert!(matches!(
            min_covering_genus(&QTuple(vec![1]), z2, 2),
            Err(Error::InvalidQTuple { .. })
        ));
    }

    #[test]
    fn realizable_examples() {
        let z2 = md(2, 1);
        let z4 = md(2, 2);
        let j = form(&[&[0, 1], &[-1, 0]], z2);
        assert!(realizable(&j, 1));
        let two = form(&[&[0, 2], &[-2, 0]], z4);
        assert!(!realizable(&two, 1));
        assert!(realizable(&two, 2));
        let zero = AlternatingForm::zero(1, z2);
        assert!(realizable(&zero, 1));
        assert!(!realizable(&zero, 0));
    }

    #[test]
    fn realize_examples() {
        let z2 = md(2, 1);
        let z4 = md(2, 2);
        let j = form(&[&[0, 1], &[-1, 0]], z2);
        assert_eq!(realize(&j, 1).unwrap().theta(), &MatZ::identity(2, z2));
        let two = form(&[&[0, 2], &[-2, 0]], z4);
        assert_eq!(
            realize(&two, 2).unwrap().theta(),
            &MatZ::from_rows(&[[1, 0, 0, 0], [0, 1, 0, 2]], z4).unwrap()
        );
        assert_eq!(
            realize(&two, 1),
            Err(Error::NotRealizable {
                required: 2,
                genus: 1
            })
        );
        let zero = AlternatingForm::zero(1, z2);
        assert_eq!(
            realize(&zero, 1).unwrap().theta(),
            &MatZ::from_rows(&[[1, 0]], z2).unwrap()
        );
    }

    #[test]
    fn realize_non_normal_forms() {
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
        let g = min_quotient_genus(&f);
        let a = realize(&f, g).unwrap().validate().unwrap();
        assert_eq!(a.induced_form().unwrap(), f);
        assert_eq!(a.theta().rank_mod_p(), 4);
    }

    #[test]
    fn enumerate_examples() {
        let z2 = md(2, 1);
        assert_eq!(enumerate_weak_classes(z2, 1, 3), vec![QTuple(vec![1])]);
        assert!(enumerate_weak_classes(z2, 1, 2).is_empty());
        assert_eq!(
            enumerate_weak_classes(z2, 2, 5),
            vec![QTuple(vec![0]), QTuple(vec![2])]
        );
        assert_eq!(enumerate_weak_classes(z2, 2, 1), vec![QTuple(vec![0])]);
        assert!(enumerate_weak_classes(z2, 2, 0).is_empty());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("weak".parse::<Mode>(), Ok(Mode::Weak));
        assert!("both".parse::<Mode>().is_err());
    }
}
