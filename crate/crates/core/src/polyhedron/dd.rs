//! Double description for polyhedral cones over the integers.
//!
//! Given constraint rows `a_i`, computes generators of the cone
//! `{ y : a_i · y >= 0 }` as a lineality basis plus the extreme rays of the
//! pointed part. Constraints are inserted one at a time; adjacency of rays
//! is decided with the combinatorial test on zero sets, which is exact when
//! the current ray list holds exactly the extreme rays.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::exactnum::primitive;

#[derive(Clone, Debug)]
pub(crate) struct ZeroSet {
    words: Vec<u64>,
}

impl ZeroSet {
    fn new(bits: usize) -> Self {
        ZeroSet {
            words: vec![0; bits.div_ceil(64).max(1)],
        }
    }

    fn full_prefix(bits: usize, len: usize) -> Self {
        let mut s = ZeroSet::new(bits);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn intersect(&self, other: &ZeroSet) -> ZeroSet {
        ZeroSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    fn is_subset_of(&self, other: &ZeroSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Ray {
    pub(crate) vector: Vec<BigInt>,
    zeros: ZeroSet,
}

#[derive(Clone, Debug)]
pub(crate) struct ConeGenerators {
    pub(crate) lineality: Vec<Vec<BigInt>>,
    pub(crate) rays: Vec<Ray>,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `alpha * u - beta * v`, reduced to a primitive vector.
fn combine(alpha: &BigInt, u: &[BigInt], beta: &BigInt, v: &[BigInt]) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = u.iter().zip(v).map(|(x, y)| alpha * x - beta * y).collect();
    primitive(&mut out);
    out
}

/// Generators of `{ y in Z^dim : c · y >= 0 for every c in constraints }`.
pub(crate) fn cone_generators(dim: usize, constraints: &[Vec<BigInt>]) -> ConeGenerators {
    let total = constraints.len();
    let mut lineality: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| {
            let mut e = vec![BigInt::zero(); dim];
            e[i] = BigInt::from(1);
            e
        })
        .collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (k, a) in constraints.iter().enumerate() {
        debug_assert_eq!(a.len(), dim);
        if let Some(pos) = lineality.iter().position(|l| !dot(a, l).is_zero()) {
            // The constraint cuts the lineality space: one line becomes a ray.
            let mut l0 = lineality.swap_remove(pos);
            let mut s0 = dot(a, &l0);
            if s0.is_negative() {
                l0.iter_mut().for_each(|x| *x = -&*x);
                s0 = -s0;
            }
            for l in lineality.iter_mut() {
                let s = dot(a, l);
                if !s.is_zero() {
                    *l = combine(&s0, l, &s, &l0);
                }
            }
            for r in rays.iter_mut() {
                let s = dot(a, &r.vector);
                if !s.is_zero() {
                    r.vector = combine(&s0, &r.vector, &s, &l0);
                }
                r.zeros.insert(k);
            }
            rays.push(Ray {
                vector: l0,
                zeros: ZeroSet::full_prefix(total, k),
            });
            continue;
        }

        let values: Vec<BigInt> = rays.iter().map(|r| dot(a, &r.vector)).collect();
        if values.iter().all(|v| !v.is_negative()) {
            for (r, v) in rays.iter_mut().zip(&values) {
                if v.is_zero() {
                    r.zeros.insert(k);
                }
            }
            continue;
        }

        let pointed_dim = dim - lineality.len();
        let plus: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let minus: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
        let mut next: Vec<Ray> = Vec::new();
        for &p in &plus {
            for &q in &minus {
                let common = rays[p].zeros.intersect(&rays[q].zeros);
                if common.count() + 2 < pointed_dim {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(i, r)| i == p || i == q || !common.is_subset_of(&r.zeros));
                if !adjacent {
                    continue;
                }
                // values[p] > 0 > values[q]
                let vector = combine(&values[p], &rays[q].vector, &values[q], &rays[p].vector);
                let mut zeros = common;
                zeros.insert(k);
                next.push(Ray { vector, zeros });
            }
        }
        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + next.len());
        for (mut r, v) in rays.into_iter().zip(&values) {
            if v.is_negative() {
                continue;
            }
            if v.is_zero() {
                r.zeros.insert(k);
            }
            kept.push(r);
        }
        kept.extend(next);
        rays = kept;
    }

    ConeGenerators { lineality, rays }
}
