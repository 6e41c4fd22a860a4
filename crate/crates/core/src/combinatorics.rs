//! Subset enumeration and binomial coefficients.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Iterator over the `k`-subsets of `0..n` in colexicographic order.
#[derive(Clone, Debug)]
pub struct Combinations {
    n: usize,
    cur: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Combinations { n, cur: (0..k).collect(), done: k > n }
    }

    /// Advances in place and returns the current subset, avoiding a fresh allocation per step.
    pub fn next_ref(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started() {
            self.cur.push(usize::MAX);
            return Some(&self.cur[..self.cur.len() - 1]);
        }
        let k = self.cur.len() - 1;
        let mut i = 0;
        while i < k {
            let limit = if i + 1 < k { self.cur[i + 1] } else { self.n };
            if self.cur[i] + 1 < limit {
                break;
            }
            i += 1;
        }
        if i == k {
            self.done = true;
            return None;
        }
        self.cur[i] += 1;
        for (j, slot) in self.cur.iter_mut().enumerate().take(i) {
            *slot = j;
        }
        Some(&self.cur[..k])
    }

    fn started(&self) -> bool {
        self.cur.last() == Some(&usize::MAX)
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        self.next_ref().map(|s| s.to_vec())
    }
}

/// `k`-subsets of `pool` in colexicographic order of positions within `pool`.
pub fn subsets_of(pool: &[usize], k: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
    Combinations::new(pool.len(), k).map(move |pos| pos.into_iter().map(|p| pool[p]).collect())
}

/// All subsets of `pool` with at most `max` elements, smallest first.
pub fn subsets_up_to(pool: &[usize], max: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..=max.min(pool.len())).flat_map(move |size| subsets_of(pool, size))
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= BigUint::from(n - i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

/// Binomial coefficient saturating at `u128::MAX`.
pub fn binomial_u128(n: usize, k: usize) -> u128 {
    let b = binomial(n, k);
    u128::try_from(b).unwrap_or(u128::MAX)
}

/// Colexicographic comparison of two sorted index sets.
pub fn colex_cmp(a: &[usize], b: &[usize]) -> Ordering {
    a.iter().rev().cmp(b.iter().rev()).then(a.len().cmp(&b.len()))
}

/// Iterates over all multisets of size `size` drawn from `0..n`, as nondecreasing vectors.
pub fn for_each_multiset(n: usize, size: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if size == 0 {
        f(&[]);
        return;
    }
    if n == 0 {
        return;
    }
    let mut cur = vec![0usize; size];
    loop {
        if !f(&cur) {
            return;
        }
        let mut i = size;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if cur[i] + 1 < n {
                let v = cur[i] + 1;
                for slot in cur.iter_mut().skip(i) {
                    *slot = v;
                }
                break;
            }
        }
    }
}
