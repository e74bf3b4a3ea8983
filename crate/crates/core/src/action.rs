//! Combinatorial model of a `G = (Z/p^k)^m` action on a closed surface.
//!
//! An action is recorded by the genus `g` of the quotient surface `S`, the
//! matrix of the monodromy `θ: H_1(S) -> G` on the symplectic basis
//! `e_1..e_2g` (pairing `(e_i, e_j) = 1` when `i + j = 2g + 1`, `i < j`),
//! and the characteristic function counting branch points per monodromy.

use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matmod::MatZ;
use crate::residue::Modulus;
use crate::symform::{AlternatingForm, QTuple};

/// Branch data `h -> l(h)`, keyed in lexicographic order of `h`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharFunction {
    entries: BTreeMap<Vec<u64>, u64>,
}

impl CharFunction {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `count` branch points with monodromy `h`.
    pub fn add(&mut self, h: Vec<u64>, count: u64) {
        if count == 0 {
            return;
        }
        *self.entries.entry(h).or_insert(0) += count;
    }

    pub fn from_pairs<I: IntoIterator<Item = (Vec<u64>, u64)>>(pairs: I) -> Self {
        let mut l = Self::new();
        for (h, c) in pairs {
            l.add(h, c);
        }
        l
    }

    pub fn get(&self, h: &[u64]) -> u64 {
        self.entries.get(h).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u64>, u64)> {
        self.entries.iter().map(|(h, &c)| (h, c))
    }

    pub fn support(&self) -> Vec<Vec<u64>> {
        self.entries.keys().cloned().collect()
    }

    pub fn total_points(&self) -> u64 {
        self.entries.values().sum()
    }

    /// `α_* l`, so that `(α_* l)(α h) = l(h)`.
    pub fn push_forward(&self, alpha: &MatZ) -> Result<CharFunction> {
        let mut out = CharFunction::new();
        for (h, c) in self.iter() {
            out.add(alpha.mul_vec(h)?, c);
        }
        Ok(out)
    }
}

impl Serialize for CharFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.entries.len()))?;
        for (h, c) in &self.entries {
            map.serialize_entry(&vector_key(h), c)?;
        }
        map.end()
    }
}

/// `"[a,b,...]"`, the JSON-object key used for a group element.
pub fn vector_key(h: &[u64]) -> String {
    let parts: Vec<String> = h.iter().map(u64::to_string).collect();
    format!("[{}]", parts.join(","))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ActionDescriptor {
    modulus: Modulus,
    m: usize,
    genus: usize,
    theta: MatZ,
    branches: CharFunction,
}

/// `G_free = G / G_fix` as `(Z/p^k)^n`, with `projection` (n×m) having
/// kernel exactly `G_fix`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GFree {
    pub rank: usize,
    pub projection: MatZ,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrongInvariant {
    pub covering_genus: u128,
    pub l: CharFunction,
    #[serde(serialize_with = "ser_gram")]
    pub gram: AlternatingForm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeakInvariant {
    pub covering_genus: u128,
    pub l_canonical: CharFunction,
    /// False when `l_canonical` was only canonicalized under the fallback
    /// subgroup of `Aut(G)`.
    pub l_exact: bool,
    pub q: QTuple,
}

fn ser_gram<S: Serializer>(f: &AlternatingForm, s: S) -> std::result::Result<S::Ok, S::Error> {
    f.gram().to_rows().serialize(s)
}

impl ActionDescriptor {
    /// Checks shapes only; see [`ActionDescriptor::validate`] for the
    /// surjectivity and branch conditions.
    pub fn new(
        modulus: Modulus,
        m: usize,
        genus: usize,
        theta: MatZ,
        branches: CharFunction,
    ) -> Result<Self> {
        if theta.rows() != m || theta.cols() != 2 * genus {
            return Err(Error::ShapeMismatch(format!(
                "theta is {}x{}, expected {m}x{}",
                theta.rows(),
                theta.cols(),
                2 * genus
            )));
        }
        if theta.modulus() != modulus {
            return Err(Error::ModulusMismatch {
                left: modulus.order(),
                right: theta.modulus().order(),
            });
        }
        for (h, c) in branches.iter() {
            if h.len() != m {
                return Err(Error::ShapeMismatch(format!(
                    "branch value {} has length {}, expected {m}",
                    vector_key(h),
                    h.len()
                )));
            }
            if let Some(&x) = h.iter().find(|&&x| x >= modulus.order()) {
                return Err(Error::EntryOutOfRange {
                    value: x as i64,
                    modulus: modulus.order(),
                    context: format!("branch value {}", vector_key(h)),
                });
            }
            if c == 0 {
                return Err(Error::ZeroBranchCount);
            }
        }
        Ok(ActionDescriptor {
            modulus,
            m,
            genus,
            theta,
            branches,
        })
    }

    /// A fixed-point-free action.
    pub fn free(theta: MatZ) -> Result<Self> {
        if !theta.cols().is_multiple_of(2) {
            return Err(Error::ShapeMismatch(
                "theta needs an even column count".into(),
            ));
        }
        Self::new(
            theta.modulus(),
            theta.rows(),
            theta.cols() / 2,
            theta.clone(),
            CharFunction::new(),
        )
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn theta(&self) -> &MatZ {
        &self.theta
    }

    pub fn branches(&self) -> &CharFunction {
        &self.branches
    }

    pub fn is_free(&self) -> bool {
        self.branches.is_empty()
    }

    /// `|G| = p^(km)`.
    pub fn group_order(&self) -> u128 {
        (self.modulus.order() as u128).pow(self.m as u32)
    }

    pub fn validate(self) -> Result<Self> {
        self.check()?;
        Ok(self)
    }

    pub fn check(&self) -> Result<()> {
        let md = self.modulus;
        let mut sum = vec![0u64; self.m];
        for (h, c) in self.branches.iter() {
            if h.iter().all(|&x| x == 0) {
                return Err(Error::ZeroBranchValue);
            }
            let c = md.reduce((c % md.order()) as i64);
            for (s, &x) in sum.iter_mut().zip(h) {
                *s = md.add(*s, md.mul(c, x));
            }
        }
        if sum.iter().any(|&x| x != 0) {
            return Err(Error::BranchSumNonzero);
        }
        let gens = self.theta.hstack(&self.g_fix_generators())?;
        let rank = gens.rank_mod_p();
        if rank != self.m {
            return Err(Error::NotSurjective { rank, m: self.m });
        }
        Ok(())
    }

    /// Columns are the distinct branch monodromies, in lexicographic order.
    pub fn g_fix_generators(&self) -> MatZ {
        MatZ::from_columns(self.m, &self.branches.support(), self.modulus)
            .expect("branch lengths checked at construction")
    }

    pub fn g_free_structure(&self) -> Result<GFree> {
        g_free_structure(&self.g_fix_generators())
    }

    /// Matrix of the induced epimorphism `H_1(S) -> G_free`.
    pub fn free_monodromy(&self) -> Result<MatZ> {
        let gf = self.g_free_structure()?;
        gf.projection.mat_mul(&self.theta)
    }

    pub fn induced_form(&self) -> Result<AlternatingForm> {
        let mf = self.free_monodromy()?;
        let j = intersection_gram(self.genus, self.modulus);
        let q = mf.mat_mul(&j)?.mat_mul(&mf.transpose())?;
        AlternatingForm::new(q)
    }

    pub fn covering_genus(&self) -> Result<u128> {
        let md = self.modulus;
        riemann_hurwitz(
            self.group_order(),
            self.genus,
            self.branches
                .iter()
                .map(|(h, c)| (element_order(h, &md), c)),
        )
    }

    pub fn strong_invariant(&self) -> Result<StrongInvariant> {
        self.check()?;
        Ok(StrongInvariant {
            covering_genus: self.covering_genus()?,
            l: self.branches.clone(),
            gram: self.induced_form()?,
        })
    }

    pub fn weak_invariant(&self) -> Result<WeakInvariant> {
        self.weak_invariant_with_budget(crate::classify::DEFAULT_AUT_BUDGET)
    }

    pub fn weak_invariant_with_budget(&self, budget: u128) -> Result<WeakInvariant> {
        self.check()?;
        let form = self.induced_form()?;
        let canon = crate::classify::canonicalize_l(&self.branches, self.m, self.modulus, budget)?;
        Ok(WeakInvariant {
            covering_genus: self.covering_genus()?,
            l_canonical: canon.l,
            l_exact: canon.exact,
            q: form.q_invariant(),
        })
    }

    /// The action relabelled by `α ∈ Aut(G)`: monodromy `α θ`, branches `α_* l`.
    pub fn relabel(&self, alpha: &MatZ) -> Result<ActionDescriptor> {
        ActionDescriptor::new(
            self.modulus,
            self.m,
            self.genus,
            alpha.mat_mul(&self.theta)?,
            self.branches.push_forward(alpha)?,
        )
    }

    /// Monodromy precomposed with a change of basis of `H_1(S)`.
    pub fn precompose(&self, s: &MatZ) -> Result<ActionDescriptor> {
        ActionDescriptor::new(
            self.modulus,
            self.m,
            self.genus,
            self.theta.mat_mul(s)?,
            self.branches.clone(),
        )
    }
}

/// Gram matrix of the intersection pairing on `H_1` of a genus-`g`
/// surface: `J[i][2g-1-i] = 1` for `i < g`, `-1` for `i >= g` (0-based).
pub fn intersection_gram(g: usize, modulus: Modulus) -> MatZ {
    let n = 2 * g;
    let mut j = MatZ::zeros(n, n, modulus);
    for i in 0..n {
        j.set(i, n - 1 - i, if i < g { 1 } else { modulus.neg(1) });
    }
    j
}

/// Quotient by the subgroup generated by the columns of `fix`.
///
/// In Smith coordinates `y = U h` the subgroup is `⊕ p^{d_j} Z/p^k`, so the
/// quotient is free exactly when every `d_j` is `0` or `k`; the projection
/// keeps the coordinates with `d_j = k` and those beyond the diagonal.
pub fn g_free_structure(fix: &MatZ) -> Result<GFree> {
    let md = fix.modulus();
    let m = fix.rows();
    let snf = fix.smith_normal_form();
    let mut keep = Vec::new();
    for j in 0..m {
        match snf.divisors.get(j) {
            None => keep.push(j),
            Some(&d) if d == md.k() => keep.push(j),
            Some(&0) => {}
            Some(&d) => {
                return Err(Error::QuotientNotFree {
                    exponent: d,
                    k: md.k(),
                })
            }
        }
    }
    Ok(GFree {
        rank: keep.len(),
        projection: snf.u.select_rows(&keep),
    })
}

/// `p^(k - min valuation)`; 1 for the zero vector.
pub fn element_order(h: &[u64], modulus: &Modulus) -> u64 {
    let v = h
        .iter()
        .map(|&x| modulus.valuation(x))
        .min()
        .unwrap_or(modulus.k());
    modulus.pow_p(modulus.k() - v)
}

/// Riemann–Hurwitz for a degree-`n` regular branched covering of a genus-`g`
/// surface: `2g' - 2 = n (2g - 2) + Σ count · (n - n / order)`.
pub fn riemann_hurwitz<I>(n: u128, g: usize, branches: I) -> Result<u128>
where
    I: IntoIterator<Item = (u64, u64)>,
{
    let n = n as i128;
    let mut rhs = n * (2 * g as i128 - 2);
    for (order, count) in branches {
        rhs += count as i128 * (n - n / order as i128);
    }
    if rhs.rem_euclid(2) != 0 {
        return Err(Error::NonIntegralGenus);
    }
    let genus = rhs / 2 + 1;
    if genus < 0 {
        return Err(Error::NegativeGenus);
    }
    Ok(genus as u128)
}
