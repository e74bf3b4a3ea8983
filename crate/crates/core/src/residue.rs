//! Arithmetic in the local ring Z/p^k.
//!
//! Values are stored as `u64` in `[0, p^k)`. The modulus is capped at
//! `2^31` so every product of two residues fits in a `u64`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported value of `p^k` (exclusive).
pub const MAX_MODULUS: u64 = 1 << 31;

/// The ring Z/p^k for a prime `p` and `k >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ModulusRepr", into = "ModulusRepr")]
pub struct Modulus {
    p: u64,
    k: u32,
    pk: u64,
}

#[derive(Serialize, Deserialize)]
struct ModulusRepr {
    p: u64,
    k: u32,
}

impl TryFrom<ModulusRepr> for Modulus {
    type Error = Error;
    fn try_from(r: ModulusRepr) -> Result<Self> {
        Modulus::new(r.p, r.k)
    }
}

impl From<Modulus> for ModulusRepr {
    fn from(m: Modulus) -> Self {
        ModulusRepr { p: m.p, k: m.k }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Modulus {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::ZeroExponent);
        }
        let mut pk: u64 = 1;
        for _ in 0..k {
            pk = pk.saturating_mul(p);
            if pk >= MAX_MODULUS {
                return Err(Error::ModulusTooLarge { p, k });
            }
        }
        Ok(Modulus { p, k, pk })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    /// `p^k`, the number of elements of the ring.
    #[inline]
    pub fn order(&self) -> u64 {
        self.pk
    }

    /// `p^e` for `e <= k`.
    pub fn pow_p(&self, e: u32) -> u64 {
        debug_assert!(e <= self.k);
        self.p.pow(e)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.pk {
            s - self.pk
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.pk - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.pk - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a * b) % self.pk
    }

    /// Reduce an arbitrary integer into `[0, p^k)`.
    #[inline]
    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.pk as i64) as u64
    }

    /// Largest `t <= k` with `p^t | a`; `k` for zero.
    pub fn valuation(&self, a: u64) -> u32 {
        let mut a = a % self.pk;
        if a == 0 {
            return self.k;
        }
        let mut t = 0;
        while a.is_multiple_of(self.p) {
            a /= self.p;
            t += 1;
        }
        t
    }

    #[inline]
    pub fn is_unit(&self, a: u64) -> bool {
        !a.is_multiple_of(self.p)
    }

    /// Write a nonzero `a` as `p^t * u` with `u` a unit, returning `(t, u)`.
    /// For zero returns `(k, 0)`.
    pub fn split(&self, a: u64) -> (u32, u64) {
        let t = self.valuation(a);
        if t == self.k {
            return (t, 0);
        }
        (t, a / self.p.pow(t))
    }

    pub fn inverse(&self, a: u64) -> Result<u64> {
        if !self.is_unit(a) {
            return Err(Error::NotAUnit {
                value: a,
                modulus: self.pk,
            });
        }
        let (mut r0, mut r1) = (self.pk as i64, (a % self.pk) as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.reduce(t0))
    }

    /// Number of units, `p^(k-1) (p - 1)`.
    pub fn unit_count(&self) -> u64 {
        self.pk / self.p * (self.p - 1)
    }

    pub fn units(&self) -> impl Iterator<Item = u64> + '_ {
        (1..self.pk).filter(move |&a| self.is_unit(a))
    }

    pub fn residue(&self, value: i64) -> Residue {
        Residue {
            value: self.reduce(value),
            modulus: *self,
        }
    }

    fn check(&self, other: &Modulus) -> Result<()> {
        if self != other {
            return Err(Error::ModulusMismatch {
                left: self.pk,
                right: other.pk,
            });
        }
        Ok(())
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "Z/{}", self.p)
        } else {
            write!(f, "Z/{}^{}", self.p, self.k)
        }
    }
}

/// An element of Z/p^k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: Modulus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Neg,
}

impl Residue {
    pub fn new(value: u64, modulus: Modulus) -> Self {
        Residue {
            value: value % modulus.pk,
            modulus,
        }
    }

    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn valuation(&self) -> u32 {
        self.modulus.valuation(self.value)
    }

    pub fn is_unit(&self) -> bool {
        self.modulus.is_unit(self.value)
    }

    pub fn unit_inverse(&self) -> Result<Residue> {
        Ok(Residue {
            value: self.modulus.inverse(self.value)?,
            modulus: self.modulus,
        })
    }

    /// Apply a ring operation; `Neg` ignores `rhs` apart from the modulus check.
    pub fn arith(&self, rhs: &Residue, op: ArithOp) -> Result<Residue> {
        self.modulus.check(&rhs.modulus)?;
        let m = &self.modulus;
        let value = match op {
            ArithOp::Add => m.add(self.value, rhs.value),
            ArithOp::Sub => m.sub(self.value, rhs.value),
            ArithOp::Mul => m.mul(self.value, rhs.value),
            ArithOp::Neg => m.neg(self.value),
        };
        Ok(Residue { value, modulus: *m })
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

macro_rules! residue_binop {
    ($tr:ident, $method:ident, $op:expr) => {
        impl $tr for Residue {
            type Output = Residue;
            /// Panics on modulus mismatch; use [`Residue::arith`] for the checked form.
            fn $method(self, rhs: Residue) -> Residue {
                self.arith(&rhs, $op).expect("residue modulus mismatch")
            }
        }
    };
}

residue_binop!(Add, add, ArithOp::Add);
residue_binop!(Sub, sub, ArithOp::Sub);
residue_binop!(Mul, mul, ArithOp::Mul);

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue {
            value: self.modulus.neg(self.value),
            modulus: self.modulus,
        }
    }
}

/// The map `v -> p^(k-1) v` onto its image, identified with `(Z/p)^m`.
///
/// Since `p^(k-1) u` depends only on `u mod p`, the identification sends
/// each coordinate to its residue mod `p`.
pub fn mu_map(v: &[u64], modulus: &Modulus) -> Vec<u64> {
    v.iter().map(|&x| x % modulus.p()).collect()
}

pub fn mu_map_residues(v: &[Residue]) -> Result<Vec<u64>> {
    let Some(first) = v.first() else {
        return Ok(Vec::new());
    };
    let m = first.modulus();
    v.iter()
        .map(|r| {
            m.check(&r.modulus())?;
            Ok(r.value() % m.p())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(p: u64, k: u32) -> Modulus {
        Modulus::new(p, k).unwrap()
    }

    #[test]
    fn construction_guards() {
        assert_eq!(Modulus::new(4, 1), Err(Error::NotPrime(4)));
        assert_eq!(Modulus::new(1, 1), Err(Error::NotPrime(1)));
        assert_eq!(Modulus::new(3, 0), Err(Error::ZeroExponent));
        assert!(matches!(
            Modulus::new(2, 31),
            Err(Error::ModulusTooLarge { .. })
        ));
        assert_eq!(md(2, 30).order(), 1 << 30);
    }

    #[test]
    fn arith_examples() {
        let z4 = md(2, 2);
        let three = z4.residue(3);
        assert_eq!((three + three).value(), 2);
        let two = z4.residue(2);
        assert_eq!((two * two).value(), 0);
        let z9 = md(3, 2);
        assert_eq!((-z9.residue(0)).value(), 0);
        assert_eq!(z9.residue(-1).value(), 8);
        assert!(matches!(
            z4.residue(1).arith(&z9.residue(1), ArithOp::Add),
            Err(Error::ModulusMismatch { left: 4, right: 9 })
        ));
    }

    #[test]
    fn valuation_examples() {
        let z8 = md(2, 3);
        assert_eq!(z8.residue(0).valuation(), 3);
        assert_eq!(z8.residue(6).valuation(), 1);
        assert_eq!(z8.residue(4).valuation(), 2);
        assert_eq!(z8.residue(5).valuation(), 0);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(md(2, 2).residue(3).unit_inverse().unwrap().value(), 3);
        // brute force over Z/9
        let z9 = md(3, 2);
        let want = (0..9).find(|&y| (5 * y) % 9 == 1).unwrap();
        assert_eq!(z9.residue(5).unit_inverse().unwrap().value(), want);
        assert_eq!(want, 2);
        assert!(matches!(
            md(2, 2).residue(2).unit_inverse(),
            Err(Error::NotAUnit { .. })
        ));
    }

    #[test]
    fn inverse_exhaustive_small() {
        for (p, k) in [(2, 1), (2, 5), (2, 9), (3, 4), (5, 3), (7, 3), (23, 1)] {
            let m = md(p, k);
            if m.order() > 512 {
                continue;
            }
            for a in m.units() {
                assert_eq!(m.mul(a, m.inverse(a).unwrap()), 1);
            }
            assert_eq!(m.units().count() as u64, m.unit_count());
        }
    }

    #[test]
    fn valuation_divides_exactly() {
        for (p, k) in [(2, 4), (3, 3), (5, 2)] {
            let m = md(p, k);
            for a in 1..m.order() {
                let t = m.valuation(a);
                assert_eq!(a % p.pow(t), 0);
                assert_ne!(a % p.pow(t + 1), 0);
                let (t2, u) = m.split(a);
                assert_eq!(t2, t);
                assert!(m.is_unit(u));
                assert_eq!(p.pow(t) * u, a);
            }
        }
    }

    #[test]
    fn mu_examples() {
        let z4 = md(2, 2);
        assert_eq!(mu_map(&[1, 3], &z4), vec![1, 1]);
        assert_eq!(mu_map(&[2, 0], &z4), vec![0, 0]);
        let z5 = md(5, 1);
        assert_eq!(mu_map(&[4, 1, 3], &z5), vec![4, 1, 3]);
        // agrees with the literal p^(k-1) v followed by division
        let z27 = md(3, 3);
        for x in 0..27u64 {
            let scaled = z27.mul(9, x);
            assert_eq!(scaled / 9, mu_map(&[x], &z27)[0]);
        }
    }

    #[test]
    fn mu_is_homomorphism_exhaustive() {
        let m = md(2, 2);
        for a in 0..16u64 {
            for b in 0..16u64 {
                let v = [a / 4, a % 4];
                let w = [b / 4, b % 4];
                let s = [m.add(v[0], w[0]), m.add(v[1], w[1])];
                let lhs = mu_map(&s, &m);
                let rhs: Vec<u64> = mu_map(&v, &m)
                    .iter()
                    .zip(mu_map(&w, &m))
                    .map(|(x, y)| (x + y) % 2)
                    .collect();
                assert_eq!(lhs, rhs);
            }
        }
    }
}
