#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use surfact::action::{ActionDescriptor, CharFunction};
use surfact::matmod::MatZ;
use surfact::oracle;
use surfact::residue::Modulus;
use surfact::symform::AlternatingForm;

pub fn md(p: u64, k: u32) -> Modulus {
    Modulus::new(p, k).unwrap()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, modulus: Modulus) -> MatZ {
    let data = (0..rows * cols)
        .map(|_| rng.random_range(0..modulus.order()))
        .collect();
    MatZ::from_vec(rows, cols, data, modulus).unwrap()
}

pub fn random_form(rng: &mut ChaCha8Rng, m: usize, modulus: Modulus) -> AlternatingForm {
    let mut g = MatZ::zeros(m, m, modulus);
    for i in 0..m {
        for j in i + 1..m {
            let x = rng.random_range(0..modulus.order());
            g.set(i, j, x);
            g.set(j, i, modulus.neg(x));
        }
    }
    AlternatingForm::new(g).unwrap()
}

/// Forms biased towards high valuation, so degenerate blocks show up often.
pub fn random_layered_form(rng: &mut ChaCha8Rng, m: usize, modulus: Modulus) -> AlternatingForm {
    let mut exps = Vec::new();
    let mut radical = m % 2;
    for _ in 0..m / 2 {
        let e = rng.random_range(0..=modulus.k());
        if e == modulus.k() {
            radical += 2;
        } else {
            exps.push(e);
        }
    }
    exps.sort();
    let block = AlternatingForm::block(&exps, radical, modulus).unwrap();
    block
        .congruent(&random_unimodular(rng, m, modulus))
        .unwrap()
}

pub fn random_unimodular(rng: &mut ChaCha8Rng, n: usize, modulus: Modulus) -> MatZ {
    loop {
        let c = random_matrix(rng, n, n, modulus);
        if c.rank_mod_p() == n {
            return c;
        }
    }
}

pub fn random_symplectic(rng: &mut ChaCha8Rng, g: usize, modulus: Modulus) -> MatZ {
    let gens = oracle::sp_generators(g, modulus);
    let mut s = MatZ::identity(2 * g, modulus);
    if gens.is_empty() {
        return s;
    }
    for _ in 0..12 {
        let t = &gens[rng.random_range(0..gens.len())];
        s = s.mat_mul(t).unwrap();
    }
    s
}

fn random_nonzero(rng: &mut ChaCha8Rng, m: usize, modulus: Modulus) -> Vec<u64> {
    loop {
        let h: Vec<u64> = (0..m)
            .map(|_| rng.random_range(0..modulus.order()))
            .collect();
        if h.iter().any(|&x| x != 0) {
            return h;
        }
    }
}

/// A random valid descriptor; free when `branched` is false. Branched
/// descriptors are restricted to ones whose free quotient is free.
pub fn random_descriptor(
    rng: &mut ChaCha8Rng,
    modulus: Modulus,
    m: usize,
    g: usize,
    branched: bool,
) -> ActionDescriptor {
    loop {
        let theta = random_matrix(rng, m, 2 * g, modulus);
        let mut l = CharFunction::new();
        if branched {
            let mut sum = vec![0u64; m];
            for _ in 0..rng.random_range(1..=3) {
                let h = random_nonzero(rng, m, modulus);
                let c = rng.random_range(1..=2u64);
                for (s, &x) in sum.iter_mut().zip(&h) {
                    *s = modulus.add(*s, modulus.mul(x, c % modulus.order()));
                }
                l.add(h, c);
            }
            if sum.iter().any(|&x| x != 0) {
                l.add(sum.iter().map(|&x| modulus.neg(x)).collect(), 1);
            }
        }
        let Ok(a) = ActionDescriptor::new(modulus, m, g, theta, l) else {
            continue;
        };
        if a.check().is_ok() && a.g_free_structure().is_ok() {
            return a;
        }
    }
}

/// Either `a` itself under a random strong or weak move, or a fresh descriptor.
pub fn related(rng: &mut ChaCha8Rng, a: &ActionDescriptor, branched: bool) -> ActionDescriptor {
    let md = a.modulus();
    match rng.random_range(0..4) {
        0 => random_descriptor(rng, md, a.m(), a.genus(), branched),
        1 => a
            .precompose(&random_symplectic(rng, a.genus(), md))
            .unwrap(),
        _ => {
            let alpha = random_unimodular(rng, a.m(), md);
            a.relabel(&alpha)
                .unwrap()
                .precompose(&random_symplectic(rng, a.genus(), md))
                .unwrap()
        }
    }
}
