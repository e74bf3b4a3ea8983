//! Brute-force ground truth at tiny parameters.
//!
//! Free actions on a genus-`g` quotient correspond to surjections
//! `θ: (Z/p^k)^2g -> G`; strong classes are orbits of `θ ↦ θ S` over the
//! symplectic group and weak classes additionally allow `θ ↦ α θ` for
//! `α ∈ Aut(G)`. This module enumerates those groups, computes the orbit
//! partitions and compares them with the invariant-based classification.

use std::collections::{BTreeMap, HashMap};
use std::ops::ControlFlow;

use serde::Serialize;

use crate::action::{intersection_gram, ActionDescriptor, CharFunction};
use crate::classify::{all_vectors, for_each_gl, gl_order, Mode};
use crate::error::{Error, Result};
use crate::matmod::MatZ;
use crate::residue::{mu_map, Modulus};
use crate::symform::{AlternatingForm, QTuple};

/// Default cap on predicted candidate counts for oracle enumerations.
pub const DEFAULT_ORACLE_BUDGET: u128 = 100_000_000;

/// `|Sp(2g, Z/p^k)| = p^((k-1) g(2g+1)) p^(g^2) ∏_{i=1..g} (p^(2i) - 1)`, saturating.
pub fn sp_order(g: usize, modulus: Modulus) -> u128 {
    let p = modulus.p() as u128;
    let exp = (modulus.k() as u128 - 1) * (g * (2 * g + 1)) as u128 + (g * g) as u128;
    let mut n: u128 = 1;
    for _ in 0..exp {
        n = n.saturating_mul(p);
    }
    for i in 1..=g {
        let Some(x) = p.checked_pow(2 * i as u32) else {
            return u128::MAX;
        };
        n = n.saturating_mul(x - 1);
    }
    n
}

fn guard(predicted: u128, budget: u128) -> Result<()> {
    if predicted > budget {
        return Err(Error::BudgetExceeded { predicted, budget });
    }
    Ok(())
}

fn pow_sat(base: u64, exp: usize) -> u128 {
    (base as u128).checked_pow(exp as u32).unwrap_or(u128::MAX)
}

/// Every `S` with `Sᵀ J S = J`, built column by column so that each new
/// column has the required pairings with the earlier ones.
pub fn enumerate_sp(g: usize, modulus: Modulus, budget: u128) -> Result<Vec<MatZ>> {
    let n = 2 * g;
    let per_level = pow_sat(modulus.order(), n);
    guard(sp_order(g, modulus).saturating_mul(per_level), budget)?;
    let j = intersection_gram(g, modulus);
    let vectors: Vec<Vec<u64>> = all_vectors(n, modulus.order()).collect();
    // pairing row (v^T J) for each candidate, reused across levels
    let covectors: Vec<Vec<u64>> = vectors
        .iter()
        .map(|v| j.transpose().mul_vec(v).expect("shape"))
        .collect();
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    let mut out = Vec::with_capacity(sp_order(g, modulus).min(1 << 24) as usize);
    fn dot(a: &[u64], b: &[u64], md: &Modulus) -> u64 {
        a.iter()
            .zip(b)
            .fold(0, |acc, (&x, &y)| md.add(acc, md.mul(x, y)))
    }
    struct Search<'a> {
        n: usize,
        md: Modulus,
        j: &'a MatZ,
        vectors: &'a [Vec<u64>],
        covectors: &'a [Vec<u64>],
    }
    impl Search<'_> {
        fn rec(&self, level: usize, chosen: &mut Vec<usize>, out: &mut Vec<MatZ>) {
            if level == self.n {
                let cols: Vec<Vec<u64>> = chosen.iter().map(|&c| self.vectors[c].clone()).collect();
                out.push(MatZ::from_columns(self.n, &cols, self.md).expect("shape"));
                return;
            }
            for (idx, v) in self.vectors.iter().enumerate() {
                let ok = chosen
                    .iter()
                    .enumerate()
                    .all(|(i, &c)| dot(&self.covectors[c], v, &self.md) == self.j.get(i, level));
                if !ok {
                    continue;
                }
                chosen.push(idx);
                self.rec(level + 1, chosen, out);
                chosen.pop();
            }
        }
    }
    let search = Search {
        n,
        md: modulus,
        j: &j,
        vectors: &vectors,
        covectors: &covectors,
    };
    search.rec(0, &mut chosen, &mut out);
    Ok(out)
}

/// Every invertible `m×m` matrix over Z/p^k, in lexicographic order.
pub fn enumerate_aut(m: usize, modulus: Modulus, budget: u128) -> Result<Vec<MatZ>> {
    guard(gl_order(m, modulus), budget)?;
    let mut out = Vec::new();
    for_each_gl(m, modulus, |a| {
        out.push(a.clone());
        ControlFlow::Continue(())
    });
    Ok(out)
}

/// Symplectic transvections `x ↦ x + (v, x) v` for `v` among the
/// symplectic basis vectors and the sums and differences of pairs of them.
/// These contain the homology classes of a Lickorish twist system, so they
/// generate `Sp(2g, Z)` and hence its image `Sp(2g, Z/p^k)`.
pub fn sp_generators(g: usize, modulus: Modulus) -> Vec<MatZ> {
    let n = 2 * g;
    let j = intersection_gram(g, modulus);
    let mut dirs: Vec<Vec<u64>> = Vec::new();
    for a in 0..n {
        let mut v = vec![0; n];
        v[a] = 1;
        dirs.push(v);
        for b in a + 1..n {
            for sign in [1, modulus.neg(1)] {
                let mut v = vec![0; n];
                v[a] = 1;
                v[b] = sign;
                dirs.push(v);
            }
        }
    }
    dirs.iter()
        .map(|v| {
            let vt_j = j.transpose().mul_vec(v).expect("shape");
            let mut t = MatZ::identity(n, modulus);
            for (r, &vr) in v.iter().enumerate() {
                for (c, &wc) in vt_j.iter().enumerate() {
                    t.set(r, c, modulus.add(t.get(r, c), modulus.mul(vr, wc)));
                }
            }
            t
        })
        .collect()
}

/// Elementary matrices `I + E_ij` and `diag(u, 1, ..., 1)` for every unit `u`.
pub fn aut_generators(m: usize, modulus: Modulus) -> Vec<MatZ> {
    let mut gens = Vec::new();
    for i in 0..m {
        for j in 0..m {
            if i != j {
                let mut e = MatZ::identity(m, modulus);
                e.set(i, j, 1);
                gens.push(e);
            }
        }
    }
    if m > 0 {
        for u in modulus.units().filter(|&u| u != 1) {
            let mut d = MatZ::identity(m, modulus);
            d.set(0, 0, u);
            gens.push(d);
        }
    }
    gens
}

/// Closure of a generating set under multiplication (finite group).
pub fn generated_group(
    gens: &[MatZ],
    n: usize,
    modulus: Modulus,
    budget: u128,
) -> Result<Vec<MatZ>> {
    let id = MatZ::identity(n, modulus);
    let mut seen: std::collections::HashSet<MatZ> = std::collections::HashSet::new();
    seen.insert(id.clone());
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.mat_mul(g)?;
            if seen.insert(y.clone()) {
                guard(seen.len() as u128, budget)?;
                frontier.push(y);
            }
        }
    }
    let mut out: Vec<MatZ> = seen.into_iter().collect();
    out.sort_by(|a, b| a.data().cmp(b.data()));
    Ok(out)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    fn classes(&mut self) -> Vec<Vec<usize>> {
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for x in 0..self.parent.len() {
            let r = self.find(x);
            by_root.entry(r).or_default().push(x);
        }
        by_root.into_values().collect()
    }
}

/// How orbit computations apply the groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitMethod {
    /// Every group element, from the full enumerations.
    Full,
    /// Generating sets only.
    Generators,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPartition {
    pub elements: Vec<ActionDescriptor>,
    /// Index sets, each sorted, ordered by smallest member.
    pub classes: Vec<Vec<usize>>,
    pub mode: Mode,
}

/// All surjective monodromy matrices `m × 2g`, in lexicographic order.
pub fn free_descriptors(
    modulus: Modulus,
    m: usize,
    g: usize,
    budget: u128,
) -> Result<Vec<ActionDescriptor>> {
    guard(pow_sat(modulus.order(), 2 * g * m), budget)?;
    let mut out = Vec::new();
    for data in all_vectors(2 * g * m, modulus.order()) {
        let theta = MatZ::from_vec(m, 2 * g, data, modulus)?;
        if theta.rank_mod_p() == m {
            out.push(ActionDescriptor::new(
                modulus,
                m,
                g,
                theta,
                CharFunction::new(),
            )?);
        }
    }
    Ok(out)
}

pub fn orbit_partition(
    modulus: Modulus,
    m: usize,
    g: usize,
    mode: Mode,
    method: OrbitMethod,
    budget: u128,
) -> Result<OrbitPartition> {
    let elements = free_descriptors(modulus, m, g, budget)?;
    let (sp, aut) = match method {
        OrbitMethod::Full => (
            enumerate_sp(g, modulus, budget)?,
            match mode {
                Mode::Weak => enumerate_aut(m, modulus, budget)?,
                Mode::Strong => Vec::new(),
            },
        ),
        OrbitMethod::Generators => (
            sp_generators(g, modulus),
            match mode {
                Mode::Weak => aut_generators(m, modulus),
                Mode::Strong => Vec::new(),
            },
        ),
    };
    let work = (elements.len() as u128).saturating_mul((sp.len() + aut.len()) as u128);
    guard(work, budget)?;
    let index: HashMap<&[u64], usize> = elements
        .iter()
        .enumerate()
        .map(|(i, a)| (a.theta().data(), i))
        .collect();
    let mut uf = UnionFind::new(elements.len());
    for (i, a) in elements.iter().enumerate() {
        for s in &sp {
            let img = a.theta().mat_mul(s)?;
            uf.union(i, index[img.data()]);
        }
        for alpha in &aut {
            let img = alpha.mat_mul(a.theta())?;
            uf.union(i, index[img.data()]);
        }
    }
    let classes = uf.classes();
    Ok(OrbitPartition {
        elements,
        classes,
        mode,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum InvariantKey {
    Strong(u128, Vec<u64>),
    Weak(u128, QTuple),
}

/// Partition of `elements` by equality of the strong or weak invariant.
pub fn invariant_partition(elements: &[ActionDescriptor], mode: Mode) -> Result<Vec<Vec<usize>>> {
    let mut groups: BTreeMap<InvariantKey, Vec<usize>> = BTreeMap::new();
    for (i, a) in elements.iter().enumerate() {
        let key = match mode {
            Mode::Strong => {
                let s = a.strong_invariant()?;
                InvariantKey::Strong(s.covering_genus, s.gram.gram().data().to_vec())
            }
            Mode::Weak => InvariantKey::Weak(a.covering_genus()?, a.induced_form()?.q_invariant()),
        };
        groups.entry(key).or_default().push(i);
    }
    let mut classes: Vec<Vec<usize>> = groups.into_values().collect();
    classes.sort();
    Ok(classes)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AgreementReport {
    pub p: u64,
    pub k: u32,
    pub m: usize,
    pub g: usize,
    pub mode: Mode,
    pub method: OrbitMethod,
    pub elements: usize,
    pub orbit_classes: usize,
    pub invariant_classes: usize,
    pub agree: bool,
}

/// Compares the orbit partition with the invariant partition.
pub fn orbit_agreement(
    modulus: Modulus,
    m: usize,
    g: usize,
    mode: Mode,
    method: OrbitMethod,
    budget: u128,
) -> Result<AgreementReport> {
    let orbits = orbit_partition(modulus, m, g, mode, method, budget)?;
    let inv = invariant_partition(&orbits.elements, mode)?;
    let mut orbit_classes = orbits.classes.clone();
    orbit_classes.sort();
    Ok(AgreementReport {
        p: modulus.p(),
        k: modulus.k(),
        m,
        g,
        mode,
        method,
        elements: orbits.elements.len(),
        orbit_classes: orbit_classes.len(),
        invariant_classes: inv.len(),
        agree: orbit_classes == inv,
    })
}

/// The q-tuple straight from its definition: for each `i`, the Z/p-rank of
/// the μ-image of `{h : (h, ·) = 0 mod p^i}`.
pub fn q_by_definition(form: &AlternatingForm) -> QTuple {
    let md = form.modulus();
    let m = form.rank();
    let field = Modulus::new(md.p(), 1).expect("prime");
    QTuple(
        (1..=md.k())
            .map(|i| {
                let gens = form.gram().kernel_mod(i).expect("level in range");
                let images: Vec<u64> = gens.iter().flat_map(|h| mu_map(h, &md)).collect();
                let mat = MatZ::from_vec(gens.len(), m, images, field).expect("shape");
                mat.rank_mod_p() as u32
            })
            .collect(),
    )
}

/// Every alternating `m×m` form over `modulus`, in lexicographic order of
/// the strict upper triangle.
pub fn all_alternating_forms(
    m: usize,
    modulus: Modulus,
    budget: u128,
) -> Result<Vec<AlternatingForm>> {
    let slots = m * m.saturating_sub(1) / 2;
    guard(pow_sat(modulus.order(), slots), budget)?;
    all_vectors(slots, modulus.order())
        .map(|upper| {
            let mut g = MatZ::zeros(m, m, modulus);
            let mut it = upper.into_iter();
            for i in 0..m {
                for j in i + 1..m {
                    let x = it.next().expect("slot");
                    g.set(i, j, x);
                    g.set(j, i, modulus.neg(x));
                }
            }
            AlternatingForm::new(g)
        })
        .collect()
}

/// Compares [`AlternatingForm::q_invariant`] with [`q_by_definition`] on
/// every alternating form of rank `m`; returns (forms, mismatches).
pub fn q_agreement_exhaustive(modulus: Modulus, m: usize, budget: u128) -> Result<(usize, usize)> {
    let forms = all_alternating_forms(m, modulus, budget)?;
    let mismatches = forms
        .iter()
        .filter(|f| f.q_invariant() != q_by_definition(f))
        .count();
    Ok((forms.len(), mismatches))
}

/// Checks that every form-preserving isomorphism between two subgroups of
/// `(Z/p^k)^2g` isomorphic to `(Z/p^k)^m` extends to a symplectic
/// automorphism.
///
/// Such an isomorphism is determined by a pair of injective frames
/// `Φ, Φ'` (2g×m) with `Φᵀ J Φ = Φ'ᵀ J Φ'`, and it extends exactly when
/// `Φ' = S Φ` for some symplectic `S`. So the property holds iff the
/// symplectic orbits on injective frames are the Gram classes.
pub fn check_extension_property(
    g: usize,
    modulus: Modulus,
    m: usize,
    budget: u128,
) -> Result<bool> {
    let n = 2 * g;
    let sp = enumerate_sp(g, modulus, budget)?;
    let frame_count = pow_sat(modulus.order(), n * m);
    guard(frame_count.saturating_mul(sp.len() as u128), budget)?;
    let j = intersection_gram(g, modulus);
    let frames: Vec<MatZ> = all_vectors(n * m, modulus.order())
        .map(|d| MatZ::from_vec(n, m, d, modulus).expect("shape"))
        .filter(|f| f.rank_mod_p() == m)
        .collect();
    let index: HashMap<&[u64], usize> = frames
        .iter()
        .enumerate()
        .map(|(i, f)| (f.data(), i))
        .collect();
    let mut uf = UnionFind::new(frames.len());
    for (i, f) in frames.iter().enumerate() {
        for s in &sp {
            let img = s.mat_mul(f)?;
            uf.union(i, index[img.data()]);
        }
    }
    let mut by_gram: HashMap<Vec<u64>, usize> = HashMap::new();
    for (i, f) in frames.iter().enumerate() {
        let gram = f.transpose().mat_mul(&j)?.mat_mul(f)?;
        let root = uf.find(i);
        match by_gram.get(gram.data()) {
            Some(&r) if r != root => return Ok(false),
            Some(_) => {}
            None => {
                by_gram.insert(gram.data().to_vec(), root);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(p: u64, k: u32) -> Modulus {
        Modulus::new(p, k).unwrap()
    }

    const B: u128 = DEFAULT_ORACLE_BUDGET;

    #[test]
    fn sp_counts() {
        for (g, p, k, want) in [(1, 2, 1, 6), (1, 3, 1, 24), (1, 2, 2, 48), (2, 2, 1, 720)] {
            let modulus = md(p, k);
            let sp = enumerate_sp(g, modulus, B).unwrap();
            assert_eq!(sp.len(), want);
            assert_eq!(sp_order(g, modulus), want as u128);
            let j = intersection_gram(g, modulus);
            for s in &sp {
                assert_eq!(s.transpose().mat_mul(&j).unwrap().mat_mul(s).unwrap(), j);
            }
        }
    }

    #[test]
    fn sp_brute_force_small() {
        // every 2x2 matrix over Z/4 against the form equation
        let modulus = md(2, 2);
        let j = intersection_gram(1, modulus);
        let brute = all_vectors(4, 4)
            .map(|d| MatZ::from_vec(2, 2, d, modulus).unwrap())
            .filter(|s| s.transpose().mat_mul(&j).unwrap().mat_mul(s).unwrap() == j)
            .count();
        assert_eq!(brute, 48);
    }

    #[test]
    fn aut_counts() {
        assert_eq!(enumerate_aut(2, md(2, 1), B).unwrap().len(), 6);
        assert_eq!(enumerate_aut(1, md(3, 2), B).unwrap().len(), 6);
        assert_eq!(enumerate_aut(1, md(2, 3), B).unwrap().len(), 4);
        let brute = all_vectors(4, 4)
            .filter(|d| {
                MatZ::from_vec(2, 2, d.clone(), md(2, 2))
                    .unwrap()
                    .is_unimodular()
            })
            .count();
        assert_eq!(brute, 96);
        assert_eq!(enumerate_aut(2, md(2, 2), B).unwrap().len(), 96);
    }

    #[test]
    fn budget_guards() {
        assert!(matches!(
            enumerate_sp(3, md(3, 1), 1000),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(matches!(
            enumerate_aut(3, md(5, 1), 10),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn groups_closed_under_product_and_inverse() {
        for (g, p, k) in [(1, 3, 1), (1, 2, 2), (2, 2, 1)] {
            let modulus = md(p, k);
            let sp = enumerate_sp(g, modulus, B).unwrap();
            let set: std::collections::HashSet<&MatZ> = sp.iter().collect();
            for i in (0..sp.len()).step_by(7) {
                let a = &sp[i];
                let b = &sp[(i * 31 + 5) % sp.len()];
                assert!(set.contains(&a.mat_mul(b).unwrap()));
                assert!(set.contains(&a.inverse().unwrap()));
            }
        }
        let aut = enumerate_aut(2, md(2, 2), B).unwrap();
        let set: std::collections::HashSet<&MatZ> = aut.iter().collect();
        for a in &aut {
            assert!(set.contains(&a.mat_mul(&aut[17]).unwrap()));
            assert!(set.contains(&a.inverse().unwrap()));
        }
    }

    #[test]
    fn generators_generate() {
        for (g, p, k) in [(1, 2, 1), (1, 3, 1), (1, 2, 2), (1, 5, 1), (2, 2, 1)] {
            let modulus = md(p, k);
            let full = enumerate_sp(g, modulus, B).unwrap();
            let gen = generated_group(&sp_generators(g, modulus), 2 * g, modulus, B).unwrap();
            assert_eq!(gen.len(), full.len(), "Sp({}, {modulus})", 2 * g);
        }
        for (m, p, k) in [
            (1, 2, 3),
            (1, 5, 1),
            (2, 2, 1),
            (2, 2, 2),
            (2, 3, 1),
            (3, 2, 1),
        ] {
            let modulus = md(p, k);
            let gen = generated_group(&aut_generators(m, modulus), m, modulus, B).unwrap();
            assert_eq!(
                gen.len() as u128,
                gl_order(m, modulus),
                "GL({m}, {modulus})"
            );
        }
    }

    #[test]
    fn orbit_examples() {
        let z2 = md(2, 1);
        let o = orbit_partition(z2, 1, 1, Mode::Strong, OrbitMethod::Full, B).unwrap();
        assert_eq!(o.elements.len(), 3);
        assert_eq!(o.classes.len(), 1);
        let z3 = md(3, 1);
        let s = orbit_partition(z3, 2, 1, Mode::Strong, OrbitMethod::Full, B).unwrap();
        let w = orbit_partition(z3, 2, 1, Mode::Weak, OrbitMethod::Full, B).unwrap();
        assert_eq!((s.classes.len(), w.classes.len()), (2, 1));
        let o = orbit_partition(z2, 2, 1, Mode::Strong, OrbitMethod::Full, B).unwrap();
        assert_eq!(o.elements.len(), 6);
        assert_eq!(o.classes.len(), 1);
    }

    #[test]
    fn orbit_classes_are_closed_and_separated() {
        let modulus = md(3, 1);
        let o = orbit_partition(modulus, 2, 1, Mode::Strong, OrbitMethod::Full, B).unwrap();
        let class_of: HashMap<Vec<u64>, usize> = o
            .classes
            .iter()
            .enumerate()
            .flat_map(|(c, members)| members.iter().map(move |&i| (i, c)))
            .map(|(i, c)| (o.elements[i].theta().data().to_vec(), c))
            .collect();
        for s in sp_generators(1, modulus) {
            for (theta, &c) in &class_of {
                let t = MatZ::from_vec(2, 2, theta.clone(), modulus).unwrap();
                let img = t.mat_mul(&s).unwrap();
                assert_eq!(class_of[img.data()], c);
            }
        }
    }

    #[test]
    fn generator_orbits_match_full_orbits() {
        for (p, k, m, g) in [
            (2, 1, 1, 1),
            (3, 1, 2, 1),
            (2, 2, 1, 1),
            (2, 1, 2, 1),
            (2, 1, 1, 2),
        ] {
            let modulus = md(p, k);
            for mode in [Mode::Strong, Mode::Weak] {
                let mut full = orbit_partition(modulus, m, g, mode, OrbitMethod::Full, B)
                    .unwrap()
                    .classes;
                let mut gen = orbit_partition(modulus, m, g, mode, OrbitMethod::Generators, B)
                    .unwrap()
                    .classes;
                full.sort();
                gen.sort();
                assert_eq!(full, gen);
            }
        }
    }

    #[test]
    fn q_by_definition_examples() {
        let z2 = md(2, 1);
        let j = AlternatingForm::new(intersection_gram(1, z2)).unwrap();
        assert_eq!(q_by_definition(&j), QTuple(vec![0]));
        let z4 = md(2, 2);
        let f = AlternatingForm::new(MatZ::from_rows(&[[0, 2], [-2, 0]], z4).unwrap()).unwrap();
        assert_eq!(q_by_definition(&f), QTuple(vec![2, 0]));
        assert_eq!(
            q_by_definition(&AlternatingForm::zero(3, md(3, 2))),
            QTuple(vec![3, 3])
        );
    }

    #[test]
    fn extension_examples() {
        assert!(check_extension_property(1, md(2, 1), 1, B).unwrap());
        assert!(check_extension_property(1, md(3, 1), 1, B).unwrap());
        assert!(check_extension_property(1, md(2, 2), 1, B).unwrap());
        assert!(check_extension_property(1, md(3, 1), 2, B).unwrap());
    }
}
